"""Finite-dimensional C*-algebras as concrete matrix spans.

An :class:`FdAlg` is a *-closed unital span of complex matrices inside a
fixed ambient matrix algebra M_N(C).  Wedderburn block structure is obtained
from eigenprojections of a seeded random self-adjoint central element, with
block multiplicities read off the commutant of each central cut.  K_0 data is
the block count plus one minimal projection per block.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    NumericsError,
    Subspace,
    cmat,
    dagger,
    eye,
    herm_eig,
    opnorm,
    random_complex,
    rng_for,
    subspace_equal,
)


class AlgebraError(ValueError):
    """Structural requirement on an algebra or map violated beyond tolerance."""


@dataclass(frozen=True, eq=False)
class FdAlg:
    """A finite-dimensional C*-algebra given by a basis of ambient matrices."""

    ambient_dim: int
    basis: tuple[np.ndarray, ...]
    unit: np.ndarray

    @staticmethod
    def from_matrices(mats, unit=None, tol: float = DEFAULT_TOL) -> "FdAlg":
        mats = [cmat(m) for m in mats]
        n = mats[0].shape[0]
        if any(m.shape != (n, n) for m in mats):
            raise AlgebraError("basis matrices must share a square shape")
        if unit is None:
            unit = eye(n)
        return FdAlg(ambient_dim=n, basis=tuple(mats), unit=cmat(unit))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def _stack(self) -> np.ndarray:
        return np.asarray([b.reshape(-1) for b in self.basis])

    @cached_property
    def _pinv(self) -> np.ndarray:
        return np.linalg.pinv(self._stack.T, rcond=1e-13)

    @cached_property
    def subspace(self) -> Subspace:
        return Subspace.from_matrices(self.basis)

    def coeffs(self, mat, tol: float | None = None) -> np.ndarray:
        """Coefficients of ``mat`` in the declared basis; checks membership if tol given."""
        v = cmat(mat).reshape(-1)
        c = self._pinv @ v
        if tol is not None:
            res = float(np.linalg.norm(self._stack.T @ c - v))
            if res > tol * max(1.0, float(np.linalg.norm(v))):
                raise AlgebraError(f"matrix lies outside the algebra (residual {res:.3e})")
        return c

    def membership_residual(self, mat) -> float:
        v = cmat(mat).reshape(-1)
        c = self._pinv @ v
        return float(np.linalg.norm(self._stack.T @ c - v))

    def elt(self, coeffs) -> np.ndarray:
        coeffs = np.asarray(coeffs, dtype=complex).reshape(-1)
        return (self._stack.T @ coeffs).reshape(self.ambient_dim, self.ambient_dim)

    @cached_property
    def unit_coeffs(self) -> np.ndarray:
        return self.coeffs(self.unit)

    @cached_property
    def mult_tensor(self) -> np.ndarray:
        """M[i, j, :] = coefficients of basis[i] @ basis[j]."""
        k = self.dim
        out = np.empty((k, k, k), dtype=complex)
        for i, bi in enumerate(self.basis):
            for j, bj in enumerate(self.basis):
                out[i, j] = self.coeffs(bi @ bj)
        return out

    @cached_property
    def star_tensor(self) -> np.ndarray:
        """S[i, :] = coefficients of basis[i]^*."""
        return np.asarray([self.coeffs(dagger(b)) for b in self.basis])

    def star_coeffs(self, c) -> np.ndarray:
        """Coefficients of x* given the coefficients of x."""
        return self.star_tensor.T @ np.conj(np.asarray(c, dtype=complex))

    def mult_coeffs(self, c1, c2) -> np.ndarray:
        return np.einsum("i,j,ijk->k", np.asarray(c1), np.asarray(c2), self.mult_tensor)

    def validate(self, tol: float = DEFAULT_TOL) -> dict[str, float]:
        """Residuals for the algebra axioms: *-closed, product-closed, unit."""
        res: dict[str, float] = {}
        sub = self.subspace
        if sub.dim != self.dim:
            raise AlgebraError("basis is numerically dependent")
        res["star-closed"] = max(sub.residual(dagger(b).reshape(-1)) for b in self.basis)
        res["product-closed"] = max(
            sub.residual((bi @ bj).reshape(-1)) for bi in self.basis for bj in self.basis
        )
        res["unit-identity"] = max(
            max(opnorm(self.unit @ b - b), opnorm(b @ self.unit - b)) for b in self.basis
        )
        res["unit-projection"] = max(
            opnorm(self.unit @ self.unit - self.unit), opnorm(dagger(self.unit) - self.unit)
        )
        bad = {k: v for k, v in res.items() if v > tol}
        if bad:
            raise AlgebraError(f"algebra axioms violated: {bad}")
        return res

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        c = random_complex(rng, self.dim)
        return self.elt(c)

    def is_commutative(self, tol: float = DEFAULT_TOL) -> bool:
        return all(
            opnorm(bi @ bj - bj @ bi) <= tol for bi in self.basis for bj in self.basis
        )

    def contains_alg(self, other: "FdAlg", tol: float = DEFAULT_TOL) -> bool:
        return all(self.membership_residual(b) <= tol for b in other.basis)


def tensor_alg(a: FdAlg, b: FdAlg) -> FdAlg:
    """The spatial tensor product with the Kronecker-ordered basis.

    Materializes the Kronecker basis; fine for small ambients.  For larger
    tensor legs use the factored ``multi_coeffs`` / ``multi_elt`` instead.
    """
    basis = [np.kron(x, y) for x in a.basis for y in b.basis]
    return FdAlg.from_matrices(basis, unit=np.kron(a.unit, b.unit))


# ---------------------------------------------------------------------------
# Factored tensor-leg coefficient operations.
#
# An operator y on the tensor product of the ambient spaces of several
# algebras, lying in their algebraic tensor product, has a unique coefficient
# tensor C with y = sum C[i1,...,ir] b^1_{i1} (x) ... (x) b^r_{ir}.  These
# helpers extract and rebuild such tensors leg by leg, so the Kronecker basis
# is never instantiated.
# ---------------------------------------------------------------------------


def multi_coeffs(algs: list[FdAlg], y, tol: float | None = None) -> np.ndarray:
    """Coefficient tensor (shape [a.dim for a in algs]) of y in the tensor product."""
    dims = [a.ambient_dim for a in algs]
    r = len(algs)
    y = np.asarray(y, dtype=complex)
    n = int(np.prod(dims))
    if y.shape != (n, n):
        raise AlgebraError(f"operand shape {y.shape} does not match ambient dims {dims}")
    t = y.reshape(tuple(dims) * 2)
    # interleave (out_k, in_k) per leg
    perm = []
    for k in range(r):
        perm.extend([k, r + k])
    t = np.transpose(t, perm)
    cur = t.reshape([d * d for d in dims])
    for k, a in enumerate(algs):
        # contract leg k (size N_k^2) with the pseudoinverse -> size a.dim
        cur = np.moveaxis(np.tensordot(a._pinv, cur, axes=(1, k)), 0, k)
    if tol is not None:
        back = multi_elt(algs, cur)
        res = float(np.linalg.norm((back - y).reshape(-1)))
        if res > tol * max(1.0, float(np.linalg.norm(y.reshape(-1)))):
            raise AlgebraError(f"operand lies outside the tensor product span (residual {res:.3e})")
    return cur


def multi_elt(algs: list[FdAlg], coeffs) -> np.ndarray:
    """Concrete operator from a coefficient tensor, built leg by leg."""
    dims = [a.ambient_dim for a in algs]
    r = len(algs)
    cur = np.asarray(coeffs, dtype=complex)
    if cur.shape != tuple(a.dim for a in algs):
        raise AlgebraError(f"coefficient shape {cur.shape} does not match algebras")
    for k, a in enumerate(algs):
        stacked = a._stack  # (dim, N^2)
        cur = np.moveaxis(np.tensordot(stacked.T, cur, axes=(1, k)), 0, k)
    # cur now has per-leg (out,in)-pair axes flattened; expand and reorder
    cur = cur.reshape([x for d in dims for x in (d, d)])
    perm = list(range(0, 2 * r, 2)) + list(range(1, 2 * r, 2))
    cur = np.transpose(cur, perm)
    n = int(np.prod(dims))
    return cur.reshape(n, n)


def multi_mult(algs: list[FdAlg], c1, c2) -> np.ndarray:
    """Coefficient tensor of the product of two tensor-product elements."""
    r = len(algs)
    c1 = np.asarray(c1, dtype=complex)
    c2 = np.asarray(c2, dtype=complex)
    cur = np.tensordot(c1, c2, axes=0)  # layout (i_0..i_{r-1}, j_0..j_{r-1})
    for t in range(r):
        # after t steps the layout is (k_0..k_{t-1}, i_t..i_{r-1}, j_t..j_{r-1}),
        # so i_t sits at axis t and j_t at axis r
        cur = np.tensordot(cur, algs[t].mult_tensor, axes=([t, r], [0, 1]))
        cur = np.moveaxis(cur, -1, t)
    return cur


def multi_star(algs: list[FdAlg], c) -> np.ndarray:
    """Coefficient tensor of the adjoint of a tensor-product element."""
    cur = np.conj(np.asarray(c, dtype=complex))
    for t, a in enumerate(algs):
        cur = np.moveaxis(np.tensordot(a.star_tensor.T, cur, axes=(1, t)), 0, t)
    return cur


def multi_unit(algs: list[FdAlg]) -> np.ndarray:
    out = np.array(1.0 + 0j)
    for a in algs:
        out = np.tensordot(out, a.unit_coeffs, axes=0)
    return out


@dataclass(frozen=True, eq=False)
class AlgMap:
    """A linear map between algebras, stored as a coefficient matrix.

    ``matrix`` has shape (dst.dim, src.dim): column j holds the coefficients
    of the image of src.basis[j] in dst.basis.
    """

    src: FdAlg
    dst: FdAlg
    matrix: np.ndarray

    @staticmethod
    def from_images(src: FdAlg, dst: FdAlg, images, tol: float = DEFAULT_TOL) -> "AlgMap":
        cols = [dst.coeffs(im, tol=tol) for im in images]
        return AlgMap(src=src, dst=dst, matrix=np.asarray(cols, dtype=complex).T)

    @staticmethod
    def identity(alg: FdAlg) -> "AlgMap":
        return AlgMap(src=alg, dst=alg, matrix=eye(alg.dim))

    def __call__(self, mat: np.ndarray, tol: float | None = None) -> np.ndarray:
        return self.dst.elt(self.matrix @ self.src.coeffs(mat, tol=tol))

    def apply_coeffs(self, c) -> np.ndarray:
        return self.matrix @ np.asarray(c, dtype=complex)

    def compose(self, inner: "AlgMap") -> "AlgMap":
        """self after inner."""
        return AlgMap(src=inner.src, dst=self.dst, matrix=self.matrix @ inner.matrix)

    def tensor(self, other: "AlgMap") -> "AlgMap":
        return AlgMap(
            src=tensor_alg(self.src, other.src),
            dst=tensor_alg(self.dst, other.dst),
            matrix=np.kron(self.matrix, other.matrix),
        )

    @property
    def rank(self) -> int:
        s = np.linalg.svd(self.matrix, compute_uv=False)
        if s.size == 0:
            return 0
        return int(np.sum(s > 1e-9 * max(1.0, s[0])))

    def is_injective(self) -> bool:
        return self.rank == self.src.dim

    def is_surjective(self) -> bool:
        return self.rank == self.dst.dim

    def image_algebra(self, tol: float = DEFAULT_TOL) -> FdAlg:
        """The image span as an FdAlg inside dst's ambient space."""
        mats = [self(b) for b in self.src.basis]
        sub = Subspace.from_matrices(mats, tol)
        basis = sub.basis_matrices((self.dst.ambient_dim, self.dst.ambient_dim))
        return FdAlg.from_matrices(basis, unit=self(self.src.unit))


def generate_algebra(gens, ambient_dim: int | None = None, unit=None, tol: float = DEFAULT_TOL) -> FdAlg:
    """Smallest unital *-closed span containing the generators.

    Iterates products until the span stabilizes; raises if it fails to close
    within ambient_dim**2 rounds (which signals numeric breakdown, since a
    valid input always stabilizes).
    """
    gens = [cmat(g) for g in gens]
    n = ambient_dim if ambient_dim is not None else gens[0].shape[0]
    if unit is None:
        unit = eye(n)
    seed_mats = [cmat(unit)] + gens + [dagger(g) for g in gens]
    sub = Subspace.from_matrices(seed_mats, tol)
    for _ in range(n * n + 1):
        mats = sub.basis_matrices((n, n))
        prods = [x @ y for x in mats for y in mats]
        new = Subspace.from_matrices([*(m.reshape(-1) for m in mats), *(p.reshape(-1) for p in prods)], tol)
        if new.dim == sub.dim:
            basis = new.basis_matrices((n, n))
            alg = FdAlg.from_matrices(basis, unit=unit)
            alg.validate(max(tol, 1e2 * tol))
            return alg
        sub = new
    raise NumericsError("generate_algebra failed to stabilize")


@dataclass(frozen=True)
class BlockStructure:
    """Wedderburn data: multiset of (matrix size d, multiplicity m in the ambient rep)."""

    blocks: tuple[tuple[int, int], ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.blocks)

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def linear_dim(self) -> int:
        return sum(d * d for d, _ in self.blocks)


@dataclass(frozen=True, eq=False)
class K0Class:
    rank: int
    generators: tuple[np.ndarray, ...]


def center_basis(a: FdAlg, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Coefficient vectors spanning the center of the algebra."""
    k = a.dim
    rows = []
    for bj in a.basis:
        # constraint on coefficients c: sum_i c_i (b_i b_j - b_j b_i) = 0
        rows.append(np.asarray([(bi @ bj - bj @ bi).reshape(-1) for bi in a.basis]).T)
    big = np.vstack(rows)
    _, s, vh = np.linalg.svd(big, full_matrices=True)
    rank = int(np.sum(s > tol * max(1.0, s[0]))) if s.size else 0
    if rank == k:
        raise NumericsError("algebra has trivial center basis (unit missing?)")
    return [vh[i].conj() for i in range(rank, k)]


def _central_projections(a: FdAlg, seed: int, tol: float) -> list[np.ndarray]:
    """Minimal central projections via a seeded random self-adjoint central element."""
    zc = center_basis(a, tol)
    zdim = len(zc)
    last_err = None
    for attempt in range(5):
        rng = rng_for(seed + attempt)
        c = np.zeros(a.dim, dtype=complex)
        for v in zc:
            c = c + random_complex(rng, 1)[0] * np.asarray(v)
        z = a.elt(c)
        z = (z + dagger(z)) / 2.0
        vals, vecs = herm_eig(z, tol=1e-6)
        scale = max(1.0, float(np.max(np.abs(vals))))
        # cluster eigenvalues (values within a block agree to machine precision)
        clusters: list[list[int]] = [[0]]
        for i in range(1, len(vals)):
            if vals[i] - vals[clusters[-1][-1]] > 1e-6 * scale:
                clusters.append([i])
            else:
                clusters[-1].append(i)
        projs = []
        ok = True
        for cl in clusters:
            v = vecs[:, cl]
            p = v @ dagger(v)
            if a.membership_residual(p) > 1e-7 * max(1.0, opnorm(p)):
                ok = False
                break
            # minimality in the center: p z p must be scalar on p for all central z
            pz = [a.elt(zi) @ p for zi in zc]
            sub = Subspace.from_matrices(pz, tol)
            if sub.dim != 1:
                ok = False
                break
            projs.append(p)
        if ok and len(projs) == zdim:
            return projs
        last_err = f"attempt {attempt}: degenerate random central element"
    raise NumericsError(f"central projections not resolved after 5 retries ({last_err})")


def wedderburn(a: FdAlg, seed: int = 42, tol: float = DEFAULT_TOL) -> BlockStructure:
    """Block sizes and multiplicities of the Artin-Wedderburn decomposition."""
    projs = _central_projections(a, seed, tol)
    blocks = []
    for p in projs:
        vals, vecs = herm_eig(p, tol=1e-7)
        r = int(np.sum(vals > 0.5))
        v = vecs[:, vals > 0.5]  # isometry onto ran(p)
        corner = [dagger(v) @ b @ v for b in a.basis]
        csub = Subspace.from_matrices(corner, tol)
        d2 = csub.dim
        d = int(round(np.sqrt(d2)))
        if d * d != d2:
            raise NumericsError(f"central cut has non-square dimension {d2}")
        # multiplicity from the commutant of the cut: vec(xc - cx) = (I (x) c^T - c (x) I) vec(x)
        cmats = csub.basis_matrices((r, r))
        big = np.vstack([
            np.kron(np.eye(r, dtype=complex), c.T) - np.kron(c, np.eye(r, dtype=complex))
            for c in cmats
        ])
        s = np.linalg.svd(big, compute_uv=False)
        comm_dim = r * r - int(np.sum(s > tol * max(1.0, s[0])))
        m = int(round(np.sqrt(comm_dim)))
        if m * m != comm_dim or d * m != r:
            raise NumericsError(
                f"inconsistent block data: d={d}, commutant dim {comm_dim}, rank {r}"
            )
        blocks.append((d, m))
    blocks.sort()
    bs = BlockStructure(blocks=tuple(blocks))
    if bs.linear_dim() != a.dim:
        raise NumericsError(f"block dimensions {bs.blocks} do not sum to dim {a.dim}")
    return bs


def k0(a: FdAlg, seed: int = 42, tol: float = DEFAULT_TOL) -> K0Class:
    """K_0 data: rank = number of Wedderburn blocks, one minimal projection each."""
    projs = _central_projections(a, seed, tol)
    gens = []
    for p in projs:
        vals, vecs = herm_eig(p, tol=1e-7)
        v = vecs[:, vals > 0.5]
        corner = Subspace.from_matrices([dagger(v) @ b @ v for b in a.basis], tol)
        cmats = corner.basis_matrices((v.shape[1], v.shape[1]))
        rng = rng_for(seed)
        z = sum(random_complex(rng, 1)[0] * c for c in cmats)
        z = (z + dagger(z)) / 2.0
        vals2, vecs2 = herm_eig(z, tol=1e-6)
        # eigenspace of the smallest eigenvalue cluster gives a minimal projection
        lo = vals2[0]
        scale = max(1.0, float(np.max(np.abs(vals2))))
        sel = vals2 <= lo + 1e-6 * scale
        w = vecs2[:, sel]
        q = v @ (w @ dagger(w)) @ dagger(v)
        gens.append(q)
    return K0Class(rank=len(projs), generators=tuple(gens))


@dataclass(frozen=True)
class IsoResult:
    ok: bool
    reason: str = ""
    residual: float = 0.0

    def __bool__(self) -> bool:
        return self.ok


def verify_star_iso(f: AlgMap, a: FdAlg, b: FdAlg, tol: float = DEFAULT_TOL) -> IsoResult:
    """Certificate check: f is a unital *-isomorphism from a onto b.

    Returns a falsy result carrying the first violated identity; never raises
    on a failed certificate.
    """
    if f.src is not a and f.src.dim != a.dim:
        return IsoResult(False, "domain mismatch", float("inf"))
    r = opnorm(f(a.unit) - b.unit)
    if r > tol:
        return IsoResult(False, "not unital", r)
    for i, bi in enumerate(a.basis):
        r = opnorm(f(dagger(bi)) - dagger(f(bi)))
        if r > tol:
            return IsoResult(False, f"not *-preserving on basis {i}", r)
    for i, bi in enumerate(a.basis):
        fi = f(bi)
        for j, bj in enumerate(a.basis):
            r = opnorm(f(bi @ bj) - fi @ f(bj))
            if r > tol:
                return IsoResult(False, f"not multiplicative on ({i},{j})", r)
    if not (f.is_injective() and a.dim == b.dim):
        return IsoResult(False, "not bijective", float("inf"))
    image = f.image_algebra()
    for j, bj in enumerate(b.basis):
        r = image.membership_residual(bj)
        if r > tol * max(1.0, opnorm(bj)):
            return IsoResult(False, f"not surjective at target basis {j}", r)
    return IsoResult(True)


def conditional_expectation(
    a: FdAlg,
    onto: FdAlg,
    avg: AlgMap,
    tol: float = DEFAULT_TOL,
    seed: int = 42,
    positivity_samples: int = 20,
) -> AlgMap:
    """Validate that ``avg`` is a conditional expectation of ``a`` onto ``onto``.

    Checks: unit maps to unit, idempotency onto the subalgebra, the bimodule
    property E(x b y) = x E(b) y for x, y in ``onto``, positivity and
    contractivity on a seeded sample.  Raises AlgebraError on violation.
    """
    if not a.contains_alg(onto, max(tol, 1e-8)):
        raise AlgebraError("onto is not a subalgebra of a")
    if opnorm(avg(a.unit) - onto.unit) > tol:
        raise AlgebraError("conditional expectation must map unit to unit")
    image = Subspace.from_matrices([avg(x) for x in a.basis], tol)
    if not subspace_equal(image, onto.subspace, max(tol, 1e-8)):
        raise AlgebraError("image of the averaging map is not the target subalgebra")
    worst = 0.0
    for x in a.basis:
        worst = max(worst, opnorm(avg(avg(x)) - avg(x)))
    if worst > max(tol, 1e-8):
        raise AlgebraError(f"averaging map is not idempotent (residual {worst:.3e})")
    worst = 0.0
    for x in onto.basis:
        for y in onto.basis:
            for bmid in a.basis:
                worst = max(worst, opnorm(avg(x @ bmid @ y) - x @ avg(bmid) @ y))
    if worst > max(tol, 1e-7):
        raise AlgebraError(f"bimodule property violated (residual {worst:.3e})")
    rng = rng_for(seed)
    for _ in range(positivity_samples):
        t = a.random_element(rng)
        pos = t @ dagger(t)
        ev = np.linalg.eigvalsh((avg(pos) + dagger(avg(pos))) / 2.0)
        if ev.min() < -max(tol, 1e-8) * max(1.0, opnorm(pos)):
            raise AlgebraError(f"expectation not positive (min eigenvalue {ev.min():.3e})")
        x = t / max(opnorm(t), 1e-12)
        if opnorm(avg(x)) > 1.0 + max(tol, 1e-8):
            raise AlgebraError("expectation is not contractive on a unit-norm sample")
    return avg
