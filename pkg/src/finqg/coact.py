"""Coactions of finite quantum groups on finite-dimensional C*-algebras.

A left coaction is an injective unital *-homomorphism alpha: A -> C(G) (x) A
with (id (x) alpha) alpha = (Delta (x) id) alpha and the span condition
[(C(G) (x) 1) alpha(A)] = C(G) (x) A.  Coactions are stored as coefficient
matrices over the declared bases (rows flattened (C(G)-index, A-index) for
left coactions, (A, C(G)) for right ones) and validated on the coefficient
level, so large tensor legs never get materialized.  Right coactions reduce
to left coactions of G^op via the leg flip.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .cstar import AlgMap, FdAlg, conditional_expectation, multi_coeffs, multi_elt, multi_mult, multi_star, multi_unit
from .linalg import DEFAULT_TOL, NumericsError, Subspace, dagger, eye, leg_embed, opnorm, subspace_equal
from .qgroup import Fqg, IrrepTable, irrep_table


class CoactionError(ValueError):
    """The supplied map fails the coaction axioms at tolerance."""


def scalar_alg() -> FdAlg:
    return FdAlg.from_matrices([np.eye(1, dtype=complex)])


def matrix_alg(d: int) -> FdAlg:
    basis = []
    for i in range(d):
        for j in range(d):
            m = np.zeros((d, d), dtype=complex)
            m[i, j] = 1.0
            basis.append(m)
    return FdAlg.from_matrices(basis)


@dataclass(frozen=True, eq=False)
class Coaction:
    """A coaction with coefficient matrix ``matrix`` of shape (n*m, m)."""

    group: Fqg
    alg: FdAlg
    matrix: np.ndarray
    side: str = "left"
    tol: float = DEFAULT_TOL

    @property
    def is_left(self) -> bool:
        return self.side == "left"

    @cached_property
    def tensor3(self) -> np.ndarray:
        """Coefficients as a 3-tensor: [g, a_out, a_in] for left, [a_out, g, a_in] for right."""
        n, m = self.group.dim, self.alg.dim
        if self.is_left:
            return self.matrix.reshape(n, m, m)
        return self.matrix.reshape(m, n, m)

    def apply_coeffs(self, avec) -> np.ndarray:
        return self.matrix @ np.asarray(avec, dtype=complex)

    def concrete(self, a) -> np.ndarray:
        """The image of a concrete element, as an operator on the tensor ambient."""
        c = self.apply_coeffs(self.alg.coeffs(a))
        n, m = self.group.dim, self.alg.dim
        if self.is_left:
            return multi_elt([self.group.alg, self.alg], c.reshape(n, m))
        return multi_elt([self.alg, self.group.alg], c.reshape(m, n))

    @cached_property
    def flipped_matrix(self) -> np.ndarray:
        n, m = self.group.dim, self.alg.dim
        if self.is_left:
            return np.transpose(self.tensor3, (1, 0, 2)).reshape(m * n, m)
        return np.transpose(self.tensor3, (1, 0, 2)).reshape(n * m, m)

    def __repr__(self) -> str:  # pragma: no cover
        return f"Coaction({self.side} {self.group.name} on dim {self.alg.dim})"


def _validate_left(group: Fqg, alg: FdAlg, mat: np.ndarray, tol: float) -> dict[str, float]:
    n, m = group.dim, alg.dim
    res: dict[str, float] = {}
    pair = [group.alg, alg]
    c3 = mat.reshape(n, m, m)

    worst = 0.0
    for k in range(m):
        img_of_star = mat @ alg.star_tensor[k]
        star_of_img = multi_star(pair, c3[:, :, k]).reshape(-1)
        worst = max(worst, float(np.abs(img_of_star - star_of_img).max()))
    res["star"] = worst

    res["unital"] = float(np.abs(mat @ alg.unit_coeffs - multi_unit(pair).reshape(-1)).max())

    worst = 0.0
    ma = alg.mult_tensor
    for i in range(m):
        ci = c3[:, :, i]
        for j in range(m):
            prod = multi_mult(pair, ci, c3[:, :, j]).reshape(-1)
            lhs = mat @ ma[i, j]
            worst = max(worst, float(np.abs(lhs - prod).max()))
    res["multiplicative"] = worst

    sv = np.linalg.svd(mat, compute_uv=False)
    res["injective"] = 0.0 if sv[-1] > 1e-9 * max(1.0, sv[0]) else float("inf")

    lhs = np.einsum("imk,jlm->ijlk", c3, c3)
    rhs = np.einsum("gij,glk->ijlk", group.delta, c3)
    res["coassociative"] = float(np.abs(lhs - rhs).max())

    res["counit"] = float(np.abs(np.einsum("i,ilk->lk", group.counit, c3) - eye(m)).max())

    mg = group.alg.mult_tensor
    gens = np.einsum("plk,ipr->ikrl", c3, mg).reshape(n * m, n * m)
    sv = np.linalg.svd(gens, compute_uv=False)
    res["podles-span"] = 0.0 if sv[-1] > 1e-9 * max(1.0, sv[0]) else float("inf")
    return res


def validate_coaction(c: Coaction) -> dict[str, float]:
    """Residuals of the coaction axioms (weak and strong continuity coincide here)."""
    if c.is_left:
        return _validate_left(c.group, c.alg, c.matrix, c.tol)
    return _validate_left(c.group.opposite, c.alg, c.flipped_matrix, c.tol)


def coaction(group: Fqg, alg: FdAlg, mat, side: str = "left", tol: float | None = None) -> Coaction:
    """Build and validate a coaction; raises CoactionError on violations."""
    tol = tol if tol is not None else group.tol
    mat = np.asarray(mat, dtype=complex)
    want = (group.dim * alg.dim, alg.dim)
    if mat.shape != want:
        raise CoactionError(f"coaction matrix has shape {mat.shape}, expected {want}")
    c = Coaction(group=group, alg=alg, matrix=mat, side=side, tol=tol)
    report = validate_coaction(c)
    bad = {k: v for k, v in report.items() if v > max(tol, 1e-8)}
    if bad:
        raise CoactionError(f"coaction axioms violated: {bad}")
    return c


def trivial_coaction(group: Fqg, alg: FdAlg, side: str = "left", tol: float | None = None) -> Coaction:
    m = alg.dim
    if side == "left":
        mat = np.kron(group.alg.unit_coeffs[:, None], eye(m)).reshape(group.dim * m, m)
    else:
        mat = np.kron(eye(m)[:, None, :], group.alg.unit_coeffs[None, :, None]).reshape(m * group.dim, m)
    return coaction(group, alg, mat, side=side, tol=tol)


def delta_coaction(group: Fqg, side: str = "left", tol: float | None = None) -> Coaction:
    """C(G) as a G-C*-algebra through its own coproduct (either side)."""
    n = group.dim
    if side == "left":
        mat = np.transpose(group.delta, (1, 2, 0)).reshape(n * n, n)
    else:
        mat = np.transpose(group.delta, (1, 2, 0)).reshape(n * n, n)
    return coaction(group, group.alg, mat, side=side, tol=tol)


def tensor_with_trivial(c: Coaction, b: FdAlg, tol: float | None = None) -> Coaction:
    """The coaction alpha (x) id on A (x) B, B carrying the trivial coaction."""
    n, m, k = c.group.dim, c.alg.dim, b.dim
    from .cstar import tensor_alg

    ab = tensor_alg(c.alg, b)
    if c.is_left:
        mat = np.einsum("ilk,bc->ilbkc", c.tensor3, eye(k)).reshape(n * m * k, m * k)
    else:
        mat = np.einsum("lik,bc->lbikc", c.tensor3, eye(k)).reshape(m * k * n, m * k)
    return coaction(c.group, ab, mat, side=c.side, tol=tol if tol is not None else c.tol)


def restrict(t, c: Coaction, tol: float | None = None) -> Coaction:
    """Restriction (pullback) of a G-coaction along theta: H -> G.

    For a left coaction this is (theta^r (x) id) alpha, the unique map
    satisfying (id (x) alpha)(theta* alpha) = (theta* Delta_G (x) id) alpha;
    for a right coaction it is (id (x) theta^r) alpha.
    """
    if c.group is not t.target and (
        c.group.dim != t.target.dim or opnorm(c.group.W - t.target.W) > 1e-9
    ):
        raise CoactionError("restrict: coaction group is not the hom target")
    tol = tol if tol is not None else max(c.tol, t.tol)
    nh, ng, m = t.source.dim, t.target.dim, c.alg.dim
    th = t.theta_r.matrix
    if c.is_left:
        new = np.einsum("hi,ilk->hlk", th, c.tensor3).reshape(nh * m, m)
        out = coaction(t.source, c.alg, new, side="left", tol=tol)
        # defining identity (id (x) alpha)(theta* alpha) = (theta* Delta_G (x) id) alpha
        lhs = np.einsum("hmk,ilm->hilk", out.tensor3, c.tensor3)
        rd = t.restricted_coproduct_matrix().reshape(nh, ng, ng)
        rhs = np.einsum("glk,ghi->hilk", c.tensor3, np.transpose(rd, (2, 0, 1)))
        r = float(np.abs(lhs - rhs).max())
    else:
        new = np.einsum("hi,lik->lhk", th, c.tensor3).reshape(m * nh, m)
        out = coaction(t.source, c.alg, new, side="right", tol=tol)
        lhs = np.einsum("mhk,lim->lihk", out.tensor3, c.tensor3)
        cr = t.coproduct_restriction_matrix().reshape(ng, nh, ng)
        rhs = np.einsum("lgk,gih->lihk", c.tensor3, np.transpose(cr, (2, 0, 1)))
        r = float(np.abs(lhs - rhs).max())
    if r > max(tol, 1e-8):
        raise NumericsError(f"restriction defining identity fails ({r:.3e})")
    return out


# ---------------------------------------------------------------------------
# crossed products
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CrossedProduct:
    """G |x A = [dual(G)_1 alpha(A)] with its dual right coaction."""

    algebra: FdAlg
    dual_coaction: Coaction
    generators: tuple[np.ndarray, ...]


def crossed_product(c: Coaction, tol: float | None = None) -> CrossedProduct:
    if not c.is_left:
        raise CoactionError("crossed_product expects a left coaction")
    tol = tol if tol is not None else c.tol
    g = c.group
    n, na = g.dim, c.alg.ambient_dim
    gens = []
    for d in g.dual_alg.basis:
        d1 = np.kron(d, eye(na))
        for a in c.alg.basis:
            gens.append(d1 @ c.concrete(a))
    sub = Subspace.from_matrices(gens, 1e-10)
    basis = sub.basis_matrices((n * na, n * na))
    cp = FdAlg.from_matrices(basis)
    cp.validate(max(tol, 1e-8))
    # dual right coaction Ad Vhat^G_13 (-)_12
    vhat = g.dual.V
    dims = [n, na, n]
    v13 = leg_embed(vhat, [1, 3], dims)
    cols = []
    for b in cp.basis:
        y12 = leg_embed(b, [1, 2], dims)
        img = v13 @ y12 @ dagger(v13)
        cols.append(multi_coeffs([cp, g.dual_alg], img, tol=max(tol, 1e-7)).reshape(-1))
    amap = np.asarray(cols, dtype=complex).T
    dual_co = coaction(g.dual, cp, amap, side="right", tol=tol)
    return CrossedProduct(algebra=cp, dual_coaction=dual_co, generators=tuple(gens))


# ---------------------------------------------------------------------------
# spectral subspaces and fixed points
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SpectralData:
    coaction: Coaction
    table: IrrepTable
    projectors: tuple[np.ndarray, ...]   # (m, m) matrices on A-coefficients
    subspaces: tuple[Subspace, ...]      # in A-coefficient space

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.subspaces)


def spectral(c: Coaction, table: IrrepTable | None = None, tol: float | None = None) -> SpectralData:
    """Per-irrep spectral projectors p_rho and subspaces, with completeness checks."""
    tol = tol if tol is not None else c.tol
    g = c.group
    if table is None:
        table = irrep_table(g)
    m = c.alg.dim
    mg = g.alg.mult_tensor
    projs = []
    subs = []
    for irr in table.irreps:
        pmat = np.zeros((m, m), dtype=complex)
        for i in range(irr.dim):
            ustar = g.alg.coeffs(dagger(irr.entry(i, i)))
            weight = irr.q_dim / np.real(irr.f_matrix[i, i])
            # h-contracted right multiplication of the group leg by u_ii*
            hmul = np.einsum("p,ipr,r->i", ustar, mg, g.haar)
            if c.is_left:
                pmat += weight * np.einsum("ilk,i->lk", c.tensor3, hmul)
            else:
                pmat += weight * np.einsum("lik,i->lk", c.tensor3, hmul)
        r = float(np.abs(pmat @ pmat - pmat).max())
        if r > max(tol, 1e-8):
            raise NumericsError(f"spectral projector not idempotent ({r:.3e})")
        projs.append(pmat)
        cols = [pmat[:, k] for k in range(m)]
        if float(np.abs(pmat).max()) > 1e-12:
            sub = Subspace.from_vectors(cols, 1e-10)
        else:
            sub = Subspace(ambient_dim=m, onb=np.zeros((0, m), dtype=complex))
        subs.append(sub)
    total = sum(s.dim for s in subs)
    if total != m:
        raise NumericsError(f"spectral completeness fails: {total} != {m}")
    worst = 0.0
    for p, s in zip(projs, subs):
        for row in s.onb:
            worst = max(worst, float(np.linalg.norm(p @ row - row)))
    if worst > max(tol, 1e-7):
        raise NumericsError(f"spectral projector is not the identity on its range ({worst:.3e})")
    return SpectralData(coaction=c, table=table, projectors=tuple(projs), subspaces=tuple(subs))


def invariant_expectation(c: Coaction) -> np.ndarray:
    """(h (x) id) alpha for left coactions, (id (x) h) alpha for right; (m, m) matrix."""
    g = c.group
    if c.is_left:
        return np.einsum("i,ilk->lk", g.haar, c.tensor3)
    return np.einsum("i,lik->lk", g.haar, c.tensor3)


def fixed_subspace(c: Coaction) -> Subspace:
    """Coefficient subspace of {a : alpha(a) = 1 (x) a}."""
    n, m = c.group.dim, c.alg.dim
    u = c.group.alg.unit_coeffs
    if c.is_left:
        triv = np.einsum("i,lk->ilk", u, eye(m)).reshape(n * m, m)
    else:
        triv = np.einsum("i,lk->lik", u, eye(m)).reshape(n * m, m)
    ker = c.matrix - triv
    _, sv, vh = np.linalg.svd(ker, full_matrices=True)
    rank = int(np.sum(sv > 1e-10 * max(1.0, sv[0]))) if sv.size else 0
    if rank == m:
        raise NumericsError("coaction has no fixed vectors (unit must be fixed)")
    return Subspace.from_vectors([vh[i].conj() for i in range(rank, m)], 1e-10)


def fixed_algebra(c: Coaction, tol: float | None = None) -> tuple[FdAlg, AlgMap]:
    """The fixed-point algebra A^G = A_1 with its conditional expectation."""
    tol = tol if tol is not None else c.tol
    e = invariant_expectation(c)
    m = c.alg.dim
    img = Subspace.from_vectors([e[:, k] for k in range(m)], 1e-10)
    direct = fixed_subspace(c)
    if not subspace_equal(img, direct, max(tol, 1e-8)):
        raise NumericsError("expectation image differs from the fixed-point space")
    basis = [c.alg.elt(v) for v in img.onb]
    fixed = FdAlg.from_matrices(
        Subspace.from_matrices(basis, 1e-10).basis_matrices((c.alg.ambient_dim, c.alg.ambient_dim)),
        unit=c.alg.unit,
    )
    fixed.validate(max(tol, 1e-8))
    emap = AlgMap(src=c.alg, dst=c.alg, matrix=e)
    conditional_expectation(c.alg, fixed, emap, tol=tol)
    return fixed, emap
