"""Finite quantum groups: Haar states, GNS data, multiplicative unitaries, duals.

A finite quantum group is a finite-dimensional C*-bialgebra (A, Delta)
admitting a faithful invariant state h (found here by solving the linear
invariance system).  Everything is realized on the GNS space L^2 = C^n of h:

* Lambda(x) = coordinates of x, with <Lambda x, Lambda y> = h(x* y);
* the algebra acts by left multiplication, so h is the vector state at
  Lambda(1);
* W is the multiplicative unitary fixed by
  W* (Lambda x (x) Lambda y) = (Lambda (x) Lambda)(Delta(y)(x (x) 1));
* the dual algebra is the span of the first-leg slices of W, carrying the
  coproduct Ad What*(-)_2 with What = Sigma W* Sigma;
* the integral element eta (x eta = eps(x) eta, eps(eta) = 1) gives the
  canonical dual GNS map Lambdahat(y) = y Lambda(eta)/sqrt(h(eta)), under
  which the dual multiplicative unitary is exactly Sigma W* Sigma.

Finite quantum groups are unimodular Kac algebras: h is a trace, invariant on
both sides, and the antipode is involutive; the construction checks all of
this rather than assuming it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .cstar import AlgMap, FdAlg, _central_projections, multi_coeffs, multi_elt
from .linalg import (
    DEFAULT_TOL,
    AntilinearMap,
    NumericsError,
    Subspace,
    cmat,
    dagger,
    eye,
    flip,
    legprod_frob_distance,
    opnorm,
    random_complex,
    rng_for,
)


class NotQuantumGroup(ValueError):
    """The supplied bialgebra data does not define a finite quantum group."""


def _lstsq(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, float]:
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    res = float(np.linalg.norm(a @ sol - b))
    return sol, res


@dataclass(frozen=True, eq=False)
class Fqg:
    """A finite quantum group realized on its GNS space."""

    name: str
    alg: FdAlg                 # GNS representation of the algebra on C^n
    delta: np.ndarray          # (n, n, n): Delta(b_k) = sum delta[k,i,j] b_i (x) b_j
    counit: np.ndarray         # (n,)
    haar: np.ndarray           # (n,)
    lam: np.ndarray            # (n, n): column k = Lambda(b_k)
    eta: np.ndarray            # (n,) integral element coefficients
    W: np.ndarray              # (n^2, n^2)
    V: np.ndarray              # (n^2, n^2)
    J: AntilinearMap
    Jhat: AntilinearMap
    dual_basis: tuple[np.ndarray, ...]
    xi0_dual: np.ndarray
    tol: float = DEFAULT_TOL

    # -- basic structure ---------------------------------------------------

    @property
    def dim(self) -> int:
        return self.alg.dim

    @property
    def What(self) -> np.ndarray:
        n = self.dim
        s = flip(n, n)
        return s @ dagger(self.W) @ s

    @cached_property
    def delta_matrix(self) -> np.ndarray:
        """Coproduct as a matrix on coefficients, rows flattened (i, j)."""
        n = self.dim
        return np.transpose(self.delta, (1, 2, 0)).reshape(n * n, n)

    def delta_of(self, x: np.ndarray) -> np.ndarray:
        c = np.einsum("k,kij->ij", self.alg.coeffs(x), self.delta)
        return multi_elt([self.alg, self.alg], c)

    def haar_of(self, x: np.ndarray) -> complex:
        return complex(self.haar @ self.alg.coeffs(x))

    def counit_of(self, x: np.ndarray) -> complex:
        return complex(self.counit @ self.alg.coeffs(x))

    @cached_property
    def unit_vector(self) -> np.ndarray:
        """Lambda(1), the GNS cyclic vector implementing the Haar state."""
        return self.lam @ self.alg.unit_coeffs

    # -- dual --------------------------------------------------------------

    @cached_property
    def dual_alg(self) -> FdAlg:
        return FdAlg.from_matrices(list(self.dual_basis))

    @cached_property
    def dual(self) -> "Fqg":
        return dual_fqg(self)

    @cached_property
    def opposite(self) -> "Fqg":
        gop, _ = opposite_and_coopposite(self)
        return gop

    @cached_property
    def irreps(self) -> "IrrepTable":
        return irrep_table(self)

    # -- validation --------------------------------------------------------

    def axiom_residuals(self) -> dict[str, float]:
        """Residuals of the defining identities; all must sit below tolerance."""
        n = self.dim
        out: dict[str, float] = {}
        out["pentagon"] = legprod_frob_distance(
            [(self.W, (2, 3)), (self.W, (1, 2))],
            [(self.W, (1, 2)), (self.W, (1, 3)), (self.W, (2, 3))],
            (n, n, n),
        )
        out["unitary-W"] = opnorm(dagger(self.W) @ self.W - eye(n * n))
        wst = dagger(self.W)
        r = 0.0
        for k, b in enumerate(self.alg.basis):
            lhs = wst @ np.kron(eye(n), b) @ self.W
            r = max(r, opnorm(lhs - self.delta_of(b)))
        out["delta-adW"] = r
        r = 0.0
        for b in self.alg.basis:
            lhs = self.V @ np.kron(b, eye(n)) @ dagger(self.V)
            r = max(r, opnorm(lhs - self.delta_of(b)))
        out["delta-adV"] = r
        out["unitary-V"] = opnorm(dagger(self.V) @ self.V - eye(n * n))
        out["haar-invariance"] = self._haar_invariance_residual()
        out["bisimplifiable"] = self._bisimplifiability_gap()
        return out

    def _haar_invariance_residual(self) -> float:
        n = self.dim
        u = self.alg.unit_coeffs
        left = np.einsum("kij,i->kj", self.delta, self.haar) - np.outer(self.haar, u)
        right = np.einsum("kij,j->ki", self.delta, self.haar) - np.outer(self.haar, u)
        return float(max(np.abs(left).max(), np.abs(right).max()))

    def _bisimplifiability_gap(self) -> float:
        n = self.dim
        m = self.alg.mult_tensor
        c1 = np.einsum("xij,jym->xyim", self.delta, m).reshape(n * n, n * n)
        c2 = np.einsum("xij,iyp->xypj", self.delta, m).reshape(n * n, n * n)
        s1 = np.linalg.svd(c1, compute_uv=False)
        s2 = np.linalg.svd(c2, compute_uv=False)
        # returns 0.0 when both product spans are full; else the defect size
        gap = 0.0
        for s in (s1, s2):
            if s[-1] <= self.tol * s[0]:
                gap = max(gap, float(s[0] / max(s[-1], 1e-300)))
        return gap

    def __repr__(self) -> str:  # pragma: no cover
        return f"Fqg({self.name}, dim={self.dim})"


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def _check_bialgebra(alg: FdAlg, delta: np.ndarray, tol: float) -> None:
    n = alg.dim
    m = alg.mult_tensor
    s = alg.star_tensor
    u = alg.unit_coeffs
    fail: dict[str, float] = {}

    r = float(np.abs(np.einsum("k,kij->ij", u, delta) - np.outer(u, u)).max())
    if r > tol:
        fail["delta-unital"] = r

    lhs = np.einsum("kl,lij->kij", s, delta)
    rhs = np.einsum("kij,ip,jq->kpq", np.conj(delta), s, s)
    r = float(np.abs(lhs - rhs).max())
    if r > tol:
        fail["delta-star"] = r

    lhs = np.einsum("klm,mij->klij", m, delta)
    rhs = np.einsum("kij,lpq,ipr,jqt->klrt", delta, delta, m, m)
    r = float(np.abs(lhs - rhs).max())
    if r > tol:
        fail["delta-multiplicative"] = r

    sv = np.linalg.svd(delta.reshape(n, n * n), compute_uv=False)
    if sv[-1] <= tol * sv[0]:
        fail["delta-injective"] = float(sv[-1])

    t1 = np.einsum("kij,ipq->kpqj", delta, delta)
    t2 = np.einsum("kij,jpq->kipq", delta, delta)
    r = float(np.abs(t1 - t2).max())
    if r > tol:
        fail["coassociativity"] = r

    c1 = np.einsum("xij,jym->xyim", delta, m).reshape(n * n, n * n)
    c2 = np.einsum("xij,iyp->xypj", delta, m).reshape(n * n, n * n)
    for label, c in (("bisimplifiable-right", c1), ("bisimplifiable-left", c2)):
        sv = np.linalg.svd(c, compute_uv=False)
        if sv[-1] <= tol * sv[0]:
            fail[label] = float(sv[-1])

    if fail:
        raise NotQuantumGroup(f"bialgebra axioms violated: {fail}")


def _solve_counit(alg: FdAlg, delta: np.ndarray, tol: float) -> np.ndarray:
    n = alg.dim
    ident = eye(n)
    a = np.concatenate(
        [
            np.transpose(delta, (0, 2, 1)).reshape(n * n, n),  # (eps (x) id): rows (k,j), cols i
            delta.reshape(n * n, n),                            # (id (x) eps): rows (k,i), cols j
        ]
    )
    b = np.concatenate([ident.reshape(-1), ident.reshape(-1)]).astype(complex)
    eps, res = _lstsq(a, b)
    if res > tol * n:
        raise NotQuantumGroup(f"no counit at tolerance (residual {res:.3e})")
    mult = alg.mult_tensor
    r = float(np.abs(np.einsum("ijk,k->ij", mult, eps) - np.outer(eps, eps)).max())
    if r > max(tol, 1e-8):
        raise NotQuantumGroup(f"counit is not a character (residual {r:.3e})")
    return eps


def _solve_haar(alg: FdAlg, delta: np.ndarray, tol: float) -> np.ndarray:
    n = alg.dim
    u = alg.unit_coeffs
    rows = []
    rhs = []
    # (h (x) id) Delta(b_k) = h(b_k) 1   -> for each (k, j): sum_i (delta[k,i,j] - u_j d_{ki}) h_i = 0
    left = np.transpose(delta, (0, 2, 1)).reshape(n * n, n).copy()
    for k in range(n):
        for j in range(n):
            left[k * n + j, k] -= u[j]
    right = delta.reshape(n * n, n).copy()
    for k in range(n):
        for i in range(n):
            right[k * n + i, k] -= u[i]
    rows = [left, right, u[None, :]]
    rhs = np.concatenate([np.zeros(2 * n * n), [1.0]]).astype(complex)
    h, res = _lstsq(np.vstack(rows), rhs)
    if res > max(tol, 1e-10) * n:
        raise NotQuantumGroup(f"no invariant state at tolerance (residual {res:.3e})")
    return h


def _solve_integral_element(alg: FdAlg, counit: np.ndarray, tol: float) -> np.ndarray:
    n = alg.dim
    m = alg.mult_tensor
    a = np.transpose(m, (0, 2, 1)).reshape(n * n, n).astype(complex).copy()
    # b_i eta = eps(b_i) eta: rows (i,k): sum_j (m[i,j,k] - eps_i d_{jk}) eta_j
    for i in range(n):
        for k in range(n):
            a[i * n + k, k] -= counit[i]
    a = np.vstack([a, counit[None, :]])
    b = np.concatenate([np.zeros(n * n), [1.0]]).astype(complex)
    eta, res = _lstsq(a, b)
    if res > max(tol, 1e-10) * n:
        raise NotQuantumGroup(f"no integral element at tolerance (residual {res:.3e})")
    return eta


def build_fqg(
    basis_mats,
    delta,
    name: str = "G",
    tol: float = DEFAULT_TOL,
    lam: np.ndarray | None = None,
) -> Fqg:
    """Construct and fully validate a finite quantum group.

    ``basis_mats`` is a basis of the algebra in any faithful *-representation;
    ``delta`` is the coproduct coefficient tensor in that basis.  If ``lam``
    is supplied it must already be a GNS coordinate map for the Haar state
    (used for duals, where the canonical identification fixes Lambda).
    """
    alg0 = FdAlg.from_matrices(basis_mats)
    alg0.validate(max(tol, 1e-8))
    delta = np.asarray(delta, dtype=complex)
    n = alg0.dim
    if delta.shape != (n, n, n):
        raise NotQuantumGroup(f"coproduct tensor has shape {delta.shape}, expected {(n, n, n)}")
    _check_bialgebra(alg0, delta, max(tol, 1e-8))

    counit = _solve_counit(alg0, delta, tol)
    haar = _solve_haar(alg0, delta, tol)

    m = alg0.mult_tensor
    s = alg0.star_tensor
    # hermitian: h(x*) = conj h(x)
    r = float(np.abs(s.T @ np.conj(haar) - haar).max())
    if r > max(tol, 1e-8):
        raise NotQuantumGroup(f"invariant functional is not hermitian ({r:.3e})")
    gram = np.einsum("ip,pjq,q->ij", s, m, haar)
    gram = (gram + dagger(gram)) / 2.0
    ev = np.linalg.eigvalsh(gram)
    if ev.min() <= tol:
        raise NotQuantumGroup(f"Haar state is not faithful (Gram min eigenvalue {ev.min():.3e})")
    hxy = np.einsum("ijk,k->ij", m, haar)
    r = float(np.abs(hxy - hxy.T).max())
    if r > max(tol, 1e-8):
        raise NotQuantumGroup(f"Haar state is not tracial ({r:.3e})")

    eta = _solve_integral_element(alg0, counit, tol)
    # Kac case: the integral element is a self-adjoint projection
    r = float(np.abs(s.T @ np.conj(eta) - eta).max())
    r = max(r, float(np.abs(np.einsum("i,j,ijk->k", eta, eta, m) - eta).max()))
    if r > max(tol, 1e-7):
        raise NotQuantumGroup(f"integral element is not a projection ({r:.3e})")

    if lam is None:
        chol = np.linalg.cholesky(gram)
        lam = dagger(chol)
    else:
        lam = cmat(lam)
        r = opnorm(dagger(lam) @ lam - gram)
        if r > max(tol, 1e-8):
            raise NotQuantumGroup(f"supplied GNS map does not implement the Haar state ({r:.3e})")
    lam_inv = np.linalg.inv(lam)

    # GNS (left regular) representation on C^n
    pis = []
    for k in range(n):
        lm = m[k].T  # (target index, right factor)
        pis.append(lam @ lm @ lam_inv)
    alg = FdAlg.from_matrices(pis)
    alg.validate(max(tol, 1e-8))

    # multiplicative unitary from W*(Lam x (x) Lam y) = (Lam (x) Lam)(Delta(y)(x (x) 1))
    lam2 = np.kron(lam, lam)
    # image coefficients: Delta(b_j)(b_i (x) 1) = sum delta[j,p,q] m[p,i,r]  b_r (x) b_q
    img = np.einsum("jpq,pir->irqj", delta, m)  # indices: i, r, q, j -> columns (i,j), rows (r,q)
    cols = img.reshape(n, n, n, n).transpose(1, 2, 0, 3).reshape(n * n, n * n)
    wstar = lam2 @ cols @ np.linalg.inv(lam2)
    w = dagger(wstar)
    r = opnorm(dagger(w) @ w - eye(n * n))
    if r > max(tol, 1e-8):
        raise NotQuantumGroup(f"multiplicative unitary is not unitary ({r:.3e})")

    # J: Lambda(x) -> Lambda(x*)
    jmat = (lam @ s.T) @ np.linalg.inv(np.conj(lam))
    jop = AntilinearMap(jmat)

    # dual algebra: first-leg slices of W, deterministic greedy selection
    w4 = w.reshape(n, n, n, n)
    slices = []
    have = None
    for i in range(n):
        for j in range(n):
            cand = w4[i, :, j, :]
            if float(np.linalg.norm(cand)) < 1e-12:
                continue
            trial = slices + [cand]
            sub = Subspace.from_matrices(trial, 1e-10)
            if sub.dim == len(trial):
                slices.append(cand)
            if len(slices) == n:
                break
        if len(slices) == n:
            break
    if len(slices) != n:
        raise NotQuantumGroup(f"dual algebra has dimension {len(slices)} != {n}")

    heta = float(np.real(haar @ eta))
    if heta <= tol:
        raise NotQuantumGroup("h(eta) is not positive")
    xi0 = (lam @ eta) / np.sqrt(heta)

    lam_hat = np.asarray([d @ xi0 for d in slices]).T
    if np.linalg.matrix_rank(lam_hat, tol=1e-10) != n:
        raise NotQuantumGroup("dual GNS vector is not cyclic")
    dual_alg0 = FdAlg.from_matrices(slices)
    s_hat = dual_alg0.star_tensor
    jhat_mat = (lam_hat @ s_hat.T) @ np.linalg.inv(np.conj(lam_hat))
    r = opnorm(dagger(jhat_mat) @ jhat_mat - eye(n))
    if r > max(tol, 1e-7):
        raise NotQuantumGroup(f"dual modular conjugation is not antiunitary ({r:.3e})")
    jhat = AntilinearMap(jhat_mat)

    sw = flip(n, n)
    what = sw @ dagger(w) @ sw
    bh2 = np.kron(jhat_mat, jhat_mat)
    v = bh2 @ np.conj(what) @ np.conj(bh2)

    g = Fqg(
        name=name,
        alg=alg,
        delta=delta,
        counit=counit,
        haar=haar,
        lam=lam,
        eta=eta,
        W=w,
        V=v,
        J=jop,
        Jhat=jhat,
        dual_basis=tuple(slices),
        xi0_dual=xi0,
        tol=tol,
    )
    res = g.axiom_residuals()
    bad = {k: val for k, val in res.items() if val > max(tol, 1e-8)}
    if bad:
        raise NotQuantumGroup(f"{name}: quantum group axioms failed: {bad}")
    # scalar commutation of the two modular conjugations
    prod1 = jmat @ np.conj(jhat_mat)
    prod2 = jhat_mat @ np.conj(jmat)
    c = np.trace(dagger(prod2) @ prod1) / n
    if opnorm(prod1 - c * prod2) > max(tol, 1e-7) or abs(abs(c) - 1.0) > max(tol, 1e-7):
        raise NotQuantumGroup("J Jhat is not a modulus-one multiple of Jhat J")
    return g


def dual_fqg(g: Fqg) -> Fqg:
    """The dual quantum group on the same L^2, with W-dual = Sigma W* Sigma."""
    n = g.dim
    dalg = g.dual_alg
    what = g.What
    delta_hat = np.empty((n, n, n), dtype=complex)
    whst = dagger(what)
    for k, d in enumerate(dalg.basis):
        img = whst @ np.kron(eye(n), d) @ what
        delta_hat[k] = multi_coeffs([dalg, dalg], img, tol=max(g.tol, 1e-7))
    lam_hat = np.asarray([d @ g.xi0_dual for d in dalg.basis]).T
    ghat = build_fqg(list(dalg.basis), delta_hat, name=f"dual({g.name})", tol=g.tol, lam=lam_hat)
    r = opnorm(ghat.W - what)
    if r > max(g.tol, 1e-7):
        raise NumericsError(f"dual multiplicative unitary mismatch ({r:.3e})")
    return ghat


def opposite_and_coopposite(g: Fqg) -> tuple[Fqg, Fqg]:
    """G^op (same algebra, flipped coproduct) and G^cop (opposite algebra)."""
    flipped = np.transpose(g.delta, (0, 2, 1))
    gop = build_fqg(list(g.alg.basis), flipped, name=f"{g.name}^op", tol=g.tol)
    transposed = [b.T for b in g.alg.basis]
    gcop = build_fqg(transposed, g.delta, name=f"{g.name}^cop", tol=g.tol)
    return gop, gcop


# ---------------------------------------------------------------------------
# Peter-Weyl data
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Irrep:
    label: str
    dim: int
    matrix: np.ndarray      # (d, d) object-like block: stored as (d, d, n, n) of algebra elements
    f_matrix: np.ndarray    # (d, d) positive intertwiner with tr F = tr F^-1
    q_dim: float

    def entry(self, i: int, j: int) -> np.ndarray:
        return self.matrix[i, j]


@dataclass(frozen=True, eq=False)
class IrrepTable:
    group: Fqg
    irreps: tuple[Irrep, ...]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(p.dim for p in self.irreps)

    def peter_weyl_count(self) -> int:
        return sum(d * d for d in self.dims)

    def orthogonality_residual(self) -> float:
        """max deviation of h(u^pi_ij u^vpi_kl*) from (dim_q pi)^-1 d d F^pi_lj."""
        g = self.group
        worst = 0.0
        for a, pa in enumerate(self.irreps):
            for b, pb in enumerate(self.irreps):
                for i in range(pa.dim):
                    for j in range(pa.dim):
                        x = pa.entry(i, j)
                        for k in range(pb.dim):
                            for l in range(pb.dim):
                                val = g.haar_of(x @ dagger(pb.entry(k, l)))
                                want = 0.0
                                if a == b and i == k:
                                    want = pa.f_matrix[l, j] / pa.q_dim
                                worst = max(worst, abs(val - want))
        return worst


def _matrix_units(alg: FdAlg, proj: np.ndarray, d: int, seed: int, tol: float) -> list[list[np.ndarray]]:
    """Matrix units of one central block of ``alg`` (concrete ambient matrices)."""
    rng = rng_for(seed)
    corner = [proj @ b @ proj for b in alg.basis]
    for attempt in range(8):
        z = sum(random_complex(rng, 1)[0] * c for c in corner)
        z = proj @ ((z + dagger(z)) / 2.0) @ proj
        vals, vecs = np.linalg.eigh(z)
        scale = max(1.0, float(np.max(np.abs(vals))))
        sel = np.abs(vals) > 1e-8 * scale
        vals, vecs = vals[sel], vecs[:, sel]
        clusters: list[list[int]] = [[0]]
        for i in range(1, len(vals)):
            if vals[i] - vals[clusters[-1][-1]] > 1e-6 * scale:
                clusters.append([i])
            else:
                clusters[-1].append(i)
        if len(clusters) != d:
            continue
        qs = []
        for cl in clusters:
            v = vecs[:, cl]
            qs.append(v @ dagger(v))
        # partial isometries e_1j with e e* = q_1, e* e = q_j
        e1 = [qs[0]]
        ok = True
        for j in range(1, d):
            w = None
            for b in alg.basis:
                cand = qs[0] @ b @ qs[j]
                if opnorm(cand) > 1e-8:
                    w = cand
                    break
            if w is None:
                ok = False
                break
            c = np.trace(w @ dagger(w)) / np.trace(qs[0])
            e1.append(w / np.sqrt(np.real(c)))
        if not ok:
            continue
        units = [[dagger(e1[i]) @ e1[j] for j in range(d)] for i in range(d)]
        worst = 0.0
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    for l in range(d):
                        prod = units[i][j] @ units[k][l]
                        want = units[i][l] if j == k else np.zeros_like(prod)
                        worst = max(worst, opnorm(prod - want))
        if worst < max(tol, 1e-8):
            return units
    raise NumericsError("matrix units for a dual block did not converge")


def irrep_table(g: Fqg, seed: int = 42) -> IrrepTable:
    """Irreducible unitary representations from the Wedderburn blocks of the dual."""
    n = g.dim
    dalg = g.dual_alg
    projs = _central_projections(dalg, seed, g.tol)
    w4 = g.W.reshape(n, n, n, n)
    irreps = []
    order = []
    for p in projs:
        r = int(round(np.real(np.trace(p))))
        corner = Subspace.from_matrices([p @ b @ p for b in dalg.basis], g.tol)
        d = int(round(np.sqrt(corner.dim)))
        if d * d != corner.dim:
            raise NumericsError("dual block is not a full matrix algebra")
        mult = r // d
        units = _matrix_units(dalg, p, d, seed, g.tol)
        u = np.empty((d, d), dtype=object)
        umats = np.empty((d, d, n, n), dtype=complex)
        for i in range(d):
            for j in range(d):
                mat = np.einsum("iajb,ba->ij", w4, units[j][i]) / mult
                if g.alg.membership_residual(mat) > 1e-7 * max(1.0, opnorm(mat)):
                    raise NumericsError("irrep entry escapes the algebra")
                umats[i, j] = mat
        # unitarity of the block matrix
        worst = 0.0
        for i in range(d):
            for j in range(d):
                acc = sum(dagger(umats[k, i]) @ umats[k, j] for k in range(d))
                want = g.alg.unit if i == j else np.zeros((n, n), dtype=complex)
                worst = max(worst, opnorm(acc - want))
        if worst > max(g.tol, 1e-7):
            raise NumericsError(f"irrep block is not unitary ({worst:.3e})")
        # corepresentation identity
        for i in range(d):
            for j in range(d):
                want = sum(np.kron(umats[i, k], umats[k, j]) for k in range(d))
                rres = opnorm(g.delta_of(umats[i, j]) - want)
                if rres > max(g.tol, 1e-7):
                    raise NumericsError(f"corepresentation identity fails ({rres:.3e})")
        fmat, qdim = _f_matrix(g, umats, d)
        irreps.append((d, umats, fmat, qdim))
    irreps.sort(key=lambda t: (t[0], -np.real(np.trace(t[1][:, :, 0, 0])) if t[1].size else 0.0))
    table = []
    for idx, (d, umats, fmat, qdim) in enumerate(irreps):
        table.append(Irrep(label=f"pi{idx}", dim=d, matrix=umats, f_matrix=fmat, q_dim=qdim))
    tbl = IrrepTable(group=g, irreps=tuple(table))
    if tbl.peter_weyl_count() != n:
        raise NumericsError("Peter-Weyl dimension count failed")
    return tbl


def _f_matrix(g: Fqg, umats: np.ndarray, d: int) -> tuple[np.ndarray, float]:
    """The positive intertwiner to the double contragredient, tr F = tr F^-1."""
    n = g.dim

    def contragredient(u):
        out = np.empty_like(u)
        for i in range(d):
            for j in range(d):
                out[i, j] = dagger(u[j, i])
        return out

    ucc = contragredient(contragredient(umats))
    # solve (T (x) 1) u = ucc (T (x) 1) entrywise over the algebra coefficients
    rows = []
    for i in range(d):
        for j in range(d):
            row = np.zeros((d, d, n * n), dtype=complex)
            for k in range(d):
                row[i, k] += umats[k, j].reshape(-1)      # coefficient of T_ik from (T u)_ij
                row[k, j] -= ucc[i, k].reshape(-1)        # coefficient of T_kj from (ucc T)_ij
            rows.append(row.reshape(d * d, n * n).T)
    big = np.vstack(rows)
    _, s, vh = np.linalg.svd(big, full_matrices=True)
    null_dim = d * d - int(np.sum(s > 1e-8 * max(1.0, s[0])))
    if null_dim != 1:
        raise NumericsError(f"intertwiner space has dimension {null_dim} != 1")
    t = vh[-1].conj().reshape(d, d)
    tr = np.trace(t)
    if abs(tr) < 1e-12:
        raise NumericsError("degenerate intertwiner normalization")
    t = t * (np.conj(tr) / abs(tr))  # make trace real positive
    t = (t + dagger(t)) / 2.0
    ev = np.linalg.eigvalsh(t)
    if ev.min() <= 0:
        raise NumericsError("intertwiner is not positive definite")
    scale = np.sqrt(np.sum(1.0 / ev) / np.sum(ev))
    f = scale * t
    return f, float(np.real(np.trace(f)))


def unitary_antipode(g: Fqg) -> AlgMap:
    """R = Jhat (-)* Jhat; antimultiplicative involution with sigma(R (x) R) Delta = Delta R."""
    images = [g.Jhat.conjugate_op(dagger(b)) for b in g.alg.basis]
    rmap = AlgMap.from_images(g.alg, g.alg, images, tol=max(g.tol, 1e-7))
    worst = 0.0
    for i, bi in enumerate(g.alg.basis):
        worst = max(worst, opnorm(rmap(rmap(bi)) - bi))
        for bj in g.alg.basis:
            worst = max(worst, opnorm(rmap(bi @ bj) - rmap(bj) @ rmap(bi)))
    rm = rmap.matrix
    lhs = np.einsum("kij,pj,qi->kpq", g.delta, rm, rm)   # sigma (R (x) R) Delta
    rhs = np.einsum("lk,lpq->kpq", rm, g.delta)          # Delta R
    worst = max(worst, float(np.abs(lhs - rhs).max()))
    if worst > max(g.tol, 1e-7):
        raise NumericsError(f"unitary antipode identities fail ({worst:.3e})")
    return rmap
