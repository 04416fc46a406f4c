"""Dense complex linear algebra and leg-numbering tensor utilities.

Everything downstream works with complex matrices on small tensor-product
Hilbert spaces (ambient dimensions up to a few hundred).  Operators acting on
selected tensor factors are written with leg subscripts, e.g. ``x_13`` for an
operator placed on legs 1 and 3 with the identity on leg 2; ``leg_embed``
realizes that convention.  Norms are operator 2-norms (largest singular
value) unless stated otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-9


class IllConditionedBasis(ValueError):
    """A spanning family is numerically dependent at the working tolerance."""


class NumericsError(RuntimeError):
    """An identity that must hold for valid inputs failed beyond tolerance."""


def cmat(a) -> np.ndarray:
    """Coerce to a complex128 2-d array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={m.ndim}")
    return m


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)


def dagger(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).conj().T


def opnorm(a: np.ndarray) -> float:
    """Operator 2-norm via the largest singular value."""
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def tensor(*mats: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices; dimensions multiply."""
    out = cmat(mats[0])
    for m in mats[1:]:
        out = np.kron(out, cmat(m))
    return out


def flip(d1: int, d2: int) -> np.ndarray:
    """The unitary S: C^d1 (x) C^d2 -> C^d2 (x) C^d1 exchanging tensor factors."""
    s = np.zeros((d1 * d2, d1 * d2), dtype=complex)
    for i in range(d1):
        for j in range(d2):
            s[j * d1 + i, i * d2 + j] = 1.0
    return s


def leg_embed(x: np.ndarray, legs: list[int], dims: list[int]) -> np.ndarray:
    """Place ``x`` on the named legs (1-based) of a tensor product, identity elsewhere.

    ``x`` must act on the tensor product of the named legs, in the listed
    order.  The result acts on the full product of ``dims``.
    """
    x = cmat(x)
    dims = [int(d) for d in dims]
    legs0 = [l - 1 for l in legs]
    if any(l < 0 or l >= len(dims) for l in legs0):
        raise ValueError(f"legs {legs} out of range for {len(dims)} factors")
    if len(set(legs0)) != len(legs0):
        raise ValueError(f"repeated legs in {legs}")
    dleg = int(np.prod([dims[l] for l in legs0])) if legs0 else 1
    if x.shape != (dleg, dleg):
        raise ValueError(f"operator shape {x.shape} does not match legs {legs} of dims {dims}")
    rest = [i for i in range(len(dims)) if i not in legs0]
    full = x if not rest else np.kron(x, eye(int(np.prod([dims[i] for i in rest]))))
    order = legs0 + rest
    n = int(np.prod(dims))
    # jp[p] = (legs, rest)-ordered flat index of the p-th natural basis vector
    jp = np.transpose(np.arange(n).reshape([dims[i] for i in order]), np.argsort(order)).reshape(-1)
    return full[np.ix_(jp, jp)]


def herm_eig(h: np.ndarray, tol: float = DEFAULT_TOL):
    """Eigendecomposition of a (numerically) hermitian matrix.

    Returns (eigenvalues ascending, unitary U) with h = U diag U*.
    """
    h = cmat(h)
    if opnorm(h - dagger(h)) > max(tol, tol * opnorm(h)):
        raise ValueError("herm_eig: input is not hermitian at tolerance")
    vals, vecs = np.linalg.eigh((h + dagger(h)) / 2.0)
    return vals, vecs


@dataclass(frozen=True, eq=False)
class AntilinearMap:
    """Antilinear operator v -> M conj(v); composing two of these is linear."""

    matrix_part: np.ndarray

    def __call__(self, v: np.ndarray) -> np.ndarray:
        return self.matrix_part @ np.conj(v)

    def conjugate_op(self, x: np.ndarray) -> np.ndarray:
        """The linear operator J x J, for x on the same space (J = self)."""
        m = self.matrix_part
        # (J x J) v = M conj(x M conj(v)) = (M conj(x) conj(M)) v
        return m @ np.conj(x) @ np.conj(m)

    def tensor(self, other: "AntilinearMap") -> "AntilinearMap":
        return AntilinearMap(np.kron(self.matrix_part, other.matrix_part))

    @property
    def dim(self) -> int:
        return self.matrix_part.shape[0]


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace of C^N stored as an orthonormal basis (rows of ``onb``).

    Construct through :meth:`from_vectors`, which orthonormalizes via SVD at
    the given threshold; this makes span-equality symmetric and stable.
    """

    ambient_dim: int
    onb: np.ndarray  # shape (k, N), orthonormal rows

    @staticmethod
    def from_vectors(vectors, tol: float = DEFAULT_TOL, require_independent: bool = False) -> "Subspace":
        vs = np.asarray([np.asarray(v, dtype=complex).reshape(-1) for v in vectors], dtype=complex)
        if vs.size == 0:
            raise ValueError("empty generating family")
        n = vs.shape[1]
        scale = max(1.0, float(np.max(np.abs(vs))))
        _, s, vh = np.linalg.svd(vs / scale, full_matrices=False)
        rank = int(np.sum(s > tol))
        if require_independent and rank < len(vs):
            raise IllConditionedBasis(
                f"basis has numerical rank {rank} < {len(vs)}"
                f" (smallest singular value {s[-1] * scale:.3e})"
            )
        return Subspace(ambient_dim=n, onb=vh[:rank].copy())

    @staticmethod
    def from_matrices(mats, tol: float = DEFAULT_TOL, **kw) -> "Subspace":
        return Subspace.from_vectors([np.asarray(m, dtype=complex).reshape(-1) for m in mats], tol, **kw)

    @property
    def dim(self) -> int:
        return self.onb.shape[0]

    def projector(self) -> np.ndarray:
        return self.onb.T @ np.conj(self.onb)

    def residual(self, v) -> float:
        """Distance from v to the subspace."""
        v = np.asarray(v, dtype=complex).reshape(-1)
        return float(np.linalg.norm(v - self.onb.T @ (np.conj(self.onb) @ v)))

    def contains(self, v, tol: float = DEFAULT_TOL) -> bool:
        nv = float(np.linalg.norm(np.asarray(v).reshape(-1)))
        return self.residual(v) <= tol * max(1.0, nv)

    def basis_matrices(self, shape) -> list[np.ndarray]:
        return [row.reshape(shape) for row in self.onb]


def subspace_equal(s1: Subspace, s2: Subspace, tol: float = DEFAULT_TOL) -> bool:
    """True iff the spans coincide: mutual projections leave each basis fixed."""
    if s1.ambient_dim != s2.ambient_dim:
        raise ValueError("subspace_equal: ambient dimensions differ")
    if s1.dim != s2.dim:
        return False
    return opnorm(s1.projector() - s2.projector()) <= tol


def span_residual(vectors, sub: Subspace) -> float:
    """Largest relative distance of the vectors from the subspace."""
    worst = 0.0
    for v in vectors:
        v = np.asarray(v, dtype=complex).reshape(-1)
        nv = float(np.linalg.norm(v))
        if nv == 0.0:
            continue
        worst = max(worst, sub.residual(v) / nv)
    return worst


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_complex(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


# ---------------------------------------------------------------------------
# Products of leg-embedded operators.
#
# Identities like the pentagon live on three tensor legs; at leg dimension 16
# the matrices are 4096 x 4096 and plain matmul chains get slow.  Products
# are built by contracting each factor into a (dims + dims)-shaped tensor
# with tensordot, which turns every step into a single GEMM over the factor's
# legs instead of the full space.
# ---------------------------------------------------------------------------


def legprod_matrix(factors: list[tuple[np.ndarray, tuple[int, ...]]], dims: tuple[int, ...]) -> np.ndarray:
    """The product F1 F2 ... Fk of leg-embedded operators as a full matrix.

    Each factor is (matrix, legs) with 1-based legs acting on the tensor
    product of its legs in the listed order; factors are in matrix-product
    order (F1 applied last).
    """
    nlegs = len(dims)
    ntot = int(np.prod(dims))
    if not factors:
        return eye(ntot)
    mats = list(factors)
    mat0, legs0 = mats[-1]
    cur = leg_embed(mat0, list(legs0), list(dims)).reshape(tuple(dims) * 2)
    for mat, legs in reversed(mats[:-1]):
        legsz = [l - 1 for l in legs]
        d = int(np.prod([dims[l] for l in legsz]))
        mat = np.asarray(mat, dtype=complex)
        if mat.shape != (d, d):
            raise ValueError(f"factor on legs {legs} has shape {mat.shape}, expected {(d, d)}")
        fshape = tuple(dims[l] for l in legsz) * 2
        ft = mat.reshape(fshape)
        k = len(legsz)
        # contract factor's input axes with cur's output axes on those legs
        cur = np.tensordot(ft, cur, axes=(list(range(k, 2 * k)), legsz))
        # tensordot puts the factor's output axes first; move them back in place
        cur = np.moveaxis(cur, list(range(k)), legsz)
    return cur.reshape(ntot, ntot)


def legprod_frob_distance(
    lhs: list[tuple[np.ndarray, tuple[int, ...]]],
    rhs: list[tuple[np.ndarray, tuple[int, ...]]],
    dims: tuple[int, ...],
) -> float:
    """Frobenius norm of (prod(lhs) - prod(rhs)); dominates the operator 2-norm."""
    a = legprod_matrix(lhs, dims)
    a -= legprod_matrix(rhs, dims)
    return float(np.linalg.norm(a))
