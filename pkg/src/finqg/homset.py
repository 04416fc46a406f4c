"""Homomorphisms of finite quantum groups and their bicharacters.

A homomorphism theta: H -> G is stored through theta^r: C(G) -> C(H) (which
always exists in finite dimension) with the bicharacter W^theta =
(theta^r (x) id)(W^G) derived from it.  The dual homomorphism is solved from
(id (x) thetahat^r)(W^H) = W^theta.  Closed / open / proper classification is
decided by matrix ranks of theta^r and thetahat^r.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .cstar import AlgMap, FdAlg, _central_projections, conditional_expectation, multi_coeffs, multi_elt
from .linalg import (
    DEFAULT_TOL,
    NumericsError,
    Subspace,
    dagger,
    eye,
    flip,
    legprod_frob_distance,
    opnorm,
)
from .qgroup import Fqg, build_fqg


class HomError(ValueError):
    """The supplied map is not a homomorphism of C*-bialgebras at tolerance."""


def _expand_two_leg(op: np.ndarray, left: FdAlg, right: FdAlg, tol: float) -> np.ndarray:
    """Coefficients of an operator lying in left (x) right, shaped (left.dim, right.dim)."""
    return multi_coeffs([left, right], op, tol=tol)


@dataclass(frozen=True, eq=False)
class HomClassification:
    closed_subgroup: bool
    open_subgroup: bool
    dual_open: bool
    proper: bool = True


@dataclass(frozen=True, eq=False)
class Hom:
    """A homomorphism source -> target of finite quantum groups."""

    source: Fqg   # H
    target: Fqg   # G
    theta_r: AlgMap          # C(G) -> C(H)
    W_theta: np.ndarray      # on L2(H) (x) L2(G), in C(H) (x) dual(G)
    V_theta: np.ndarray      # on L2(G) (x) L2(H)
    theta_r_hat: AlgMap      # dual(H) -> dual(G)
    tol: float = DEFAULT_TOL

    @cached_property
    def classification(self) -> HomClassification:
        open_ = self.theta_r.is_surjective()
        closed = self.theta_r_hat.is_injective()
        dual_open = self.theta_r.is_injective()
        if open_ and not closed:
            raise NumericsError("open subgroup not detected as closed")
        return HomClassification(closed_subgroup=closed, open_subgroup=open_, dual_open=dual_open)

    def restricted_coproduct_matrix(self) -> np.ndarray:
        """theta* Delta_G = (theta^r (x) id) Delta_G, rows flattened (C(H), C(G))."""
        g, d = self.target, self.target.delta
        nh, ng = self.source.dim, g.dim
        return np.einsum("kij,hi->hjk", d, self.theta_r.matrix).reshape(nh * ng, ng)

    def coproduct_restriction_matrix(self) -> np.ndarray:
        """Delta_G |^ theta = (id (x) theta^r) Delta_G, rows flattened (C(G), C(H))."""
        g, d = self.target, self.target.delta
        nh, ng = self.source.dim, g.dim
        return np.einsum("kij,hj->ihk", d, self.theta_r.matrix).reshape(ng * nh, ng)

    def __repr__(self) -> str:  # pragma: no cover
        return f"Hom({self.source.name} -> {self.target.name})"


def _validate_bialgebra_morphism(f: AlgMap, h: Fqg, g: Fqg, tol: float) -> None:
    fail: dict[str, float] = {}
    r = opnorm(f(g.alg.unit) - h.alg.unit)
    if r > tol:
        fail["unital"] = r
    worst = 0.0
    for b in g.alg.basis:
        worst = max(worst, opnorm(f(dagger(b)) - dagger(f(b))))
    if worst > tol:
        fail["star"] = worst
    worst = 0.0
    for bi in g.alg.basis:
        fi = f(bi)
        for bj in g.alg.basis:
            worst = max(worst, opnorm(f(bi @ bj) - fi @ f(bj)))
    if worst > tol:
        fail["multiplicative"] = worst
    ff = f.tensor(f)
    worst = 0.0
    for b in g.alg.basis:
        worst = max(worst, opnorm(h.delta_of(f(b)) - ff(g.delta_of(b))))
    if worst > tol:
        fail["comultiplicative"] = worst
    if fail:
        raise HomError(f"C*-bialgebra morphism law violated: {fail}")


def make_hom(f, source: Fqg, target: Fqg, tol: float | None = None) -> Hom:
    """Validated homomorphism source -> target from theta^r: C(target) -> C(source)."""
    h, g = source, target
    tol = tol if tol is not None else max(h.tol, g.tol)
    check_tol = max(tol, 1e-8)
    if not isinstance(f, AlgMap):
        f = AlgMap(src=g.alg, dst=h.alg, matrix=np.asarray(f, dtype=complex))
    _validate_bialgebra_morphism(f, h, g, check_tol)

    nh, ng = h.dim, g.dim
    wg = _expand_two_leg(g.W, g.alg, g.dual_alg, check_tol)
    w_theta = np.zeros((nh * ng, nh * ng), dtype=complex)
    for a in range(ng):
        img = f(g.alg.basis[a])
        acc = np.zeros((ng, ng), dtype=complex)
        for b in range(ng):
            acc += wg[a, b] * g.dual_alg.basis[b]
        w_theta += np.kron(img, acc)

    r = opnorm(dagger(w_theta) @ w_theta - eye(nh * ng))
    if r > check_tol:
        raise HomError(f"bicharacter is not unitary ({r:.3e})")
    r1 = legprod_frob_distance(
        [(dagger(h.W), (1, 2)), (w_theta, (2, 3)), (h.W, (1, 2))],
        [(w_theta, (1, 3)), (w_theta, (2, 3))],
        (nh, nh, ng),
    )
    ghat_w = g.dual.W
    r2 = legprod_frob_distance(
        [(dagger(ghat_w), (2, 3)), (w_theta, (1, 3)), (ghat_w, (2, 3))],
        [(w_theta, (1, 3)), (w_theta, (1, 2))],
        (nh, ng, ng),
    )
    if max(r1, r2) > check_tol:
        raise HomError(f"bicharacter laws fail ({r1:.3e}, {r2:.3e})")

    # V^theta = (id (x) theta^r) V^G: expand V^G = sum_k Z_k (x) basis_k over the second leg
    v4 = g.V.reshape(ng, ng, ng, ng)
    v_theta = np.zeros((ng * nh, ng * nh), dtype=complex)
    second_slices = np.transpose(v4, (0, 2, 1, 3)).reshape(ng * ng, ng * ng).T  # column (i,j) = vec V4[i,:,j,:]
    coeff = g.alg._pinv @ second_slices
    resid = second_slices - g.alg._stack.T @ coeff
    if float(np.abs(resid).max()) > check_tol:
        raise HomError("V^G does not lie in B(L2) (x) C(G)")
    for k in range(ng):
        z = coeff[k].reshape(ng, ng)
        v_theta += np.kron(z, f(g.alg.basis[k]))

    # cross-check against (Jhat_G (x) Jhat_H) What^theta (Jhat_G (x) Jhat_H)
    w_theta_hat = flip(nh, ng) @ dagger(w_theta) @ flip(ng, nh)
    bj = np.kron(g.Jhat.matrix_part, h.Jhat.matrix_part)
    v_check = bj @ np.conj(w_theta_hat) @ np.conj(bj)
    r = opnorm(v_theta - v_check)
    if r > max(check_tol, 1e-7):
        raise HomError(f"V^theta forms disagree ({r:.3e})")

    theta_hat = _solve_dual_map(f, h, g, w_theta, check_tol)

    hom = Hom(
        source=h,
        target=g,
        theta_r=f,
        W_theta=w_theta,
        V_theta=v_theta,
        theta_r_hat=theta_hat,
        tol=tol,
    )
    # theta* Delta_G = Ad W^theta*(-)_2
    rd = hom.restricted_coproduct_matrix()
    worst = 0.0
    for k, b in enumerate(g.alg.basis):
        lhs = dagger(w_theta) @ np.kron(eye(nh), b) @ w_theta
        rhs = multi_elt([h.alg, g.alg], rd[:, k].reshape(nh, ng))
        worst = max(worst, opnorm(lhs - rhs))
    if worst > max(check_tol, 1e-7):
        raise HomError(f"restricted coproduct does not match Ad W^theta* ({worst:.3e})")
    return hom


def _solve_dual_map(f: AlgMap, h: Fqg, g: Fqg, w_theta: np.ndarray, tol: float) -> AlgMap:
    """thetahat^r: dual(H) -> dual(G) from (id (x) thetahat^r) W^H = W^theta."""
    nh, ng = h.dim, g.dim
    wh = _expand_two_leg(h.W, h.alg, h.dual_alg, tol)        # (nh, nh)
    wt = _expand_two_leg(w_theta, h.alg, g.dual_alg, tol)    # (nh, ng)
    # W^H = sum_a basis_a (x) yhat_a with yhat_a = sum_b wh[a,b] dual_b; want map yhat_a -> c_a
    if np.linalg.matrix_rank(wh, tol=1e-10) != nh:
        raise NumericsError("first-leg expansion of W^H is degenerate")
    # W^H = sum_a b_a (x) yhat_a, W^theta = sum_a b_a (x) c_a, and thetahat^r: yhat_a -> c_a
    mat = np.linalg.lstsq(wh, wt, rcond=None)[0].T  # (ng, nh) on dual coefficients
    theta_hat = AlgMap(src=h.dual_alg, dst=g.dual_alg, matrix=mat)
    r = float(np.abs(wh @ theta_hat.matrix.T - wt).max())
    if r > tol:
        raise HomError(f"dual map defining identity fails ({r:.3e})")
    return theta_hat


def identity_hom(g: Fqg) -> Hom:
    return make_hom(AlgMap.identity(g.alg), g, g)


def trivial_hom(h: Fqg, g: Fqg) -> Hom:
    mat = np.outer(h.alg.unit_coeffs, g.counit)
    return make_hom(AlgMap(src=g.alg, dst=h.alg, matrix=mat), h, g)


def compose(s: Hom, t: Hom, tol: float | None = None) -> Hom:
    """Composition s t : H -> F for t: H -> G and s: G -> F."""
    if s.source is not t.target:
        raise HomError("compose: inner target does not match outer source")
    f = t.theta_r.compose(s.theta_r)
    out = make_hom(f, t.source, s.target, tol=tol)
    nh, ng, nf = t.source.dim, t.target.dim, s.target.dim
    r = legprod_frob_distance(
        [(s.W_theta, (2, 3)), (t.W_theta, (1, 2))],
        [(t.W_theta, (1, 2)), (out.W_theta, (1, 3)), (s.W_theta, (2, 3))],
        (nh, ng, nf),
    )
    if r > max(out.tol, 1e-7):
        raise NumericsError(f"composition exchange identity fails ({r:.3e})")
    return out


def dual_hom(t: Hom) -> Hom:
    """thetahat: dual(G) -> dual(H), with W^thetahat = Sigma W^theta* Sigma."""
    gd = t.target.dual
    hd = t.source.dual
    out = make_hom(AlgMap(src=hd.alg, dst=gd.alg, matrix=t.theta_r_hat.matrix), gd, hd, tol=t.tol)
    nh, ng = t.source.dim, t.target.dim
    want = flip(nh, ng) @ dagger(t.W_theta) @ flip(ng, nh)
    r = opnorm(out.W_theta - want)
    if r > max(t.tol, 1e-7):
        raise NumericsError(f"dual bicharacter is not Sigma W* Sigma ({r:.3e})")
    return out


def classify(t: Hom) -> HomClassification:
    return t.classification


@dataclass(frozen=True, eq=False)
class RangeDecomposition:
    ran: Fqg
    theta_bar: Hom   # H -> Ran theta, dual gives open subgroup
    ran_theta: Hom   # Ran theta -> G, closed subgroup


def range_decompose(t: Hom) -> RangeDecomposition:
    """Factor theta through its range: H -> Ran theta -> G."""
    h, g = t.source, t.target
    img = t.theta_r.image_algebra()
    delta_ran = np.empty((img.dim, img.dim, img.dim), dtype=complex)
    for k, b in enumerate(img.basis):
        delta_ran[k] = multi_coeffs([img, img], h.delta_of(b), tol=max(t.tol, 1e-7))
    ran = build_fqg(list(img.basis), delta_ran, name=f"Ran({h.name}->{g.name})", tol=t.tol)
    # ran.alg is the GNS re-realization of img with the same basis order, so maps
    # in/out of it are written on coefficients against the original img basis.
    incl = AlgMap(src=ran.alg, dst=h.alg,
                  matrix=np.asarray([h.alg.coeffs(b) for b in img.basis], dtype=complex).T)
    theta_bar = make_hom(incl, h, ran, tol=t.tol)
    cores = AlgMap(src=g.alg, dst=ran.alg,
                   matrix=np.asarray([img.coeffs(t.theta_r(b), tol=max(t.tol, 1e-7)) for b in g.alg.basis], dtype=complex).T)
    ran_theta = make_hom(cores, ran, g, tol=t.tol)
    again = compose(ran_theta, theta_bar)
    if opnorm(again.theta_r.matrix - t.theta_r.matrix) > max(t.tol, 1e-7):
        raise NumericsError("range decomposition does not recompose")
    if not theta_bar.classification.dual_open:
        raise NumericsError("theta_bar is not dual-open")
    if not ran_theta.classification.closed_subgroup:
        raise NumericsError("ran theta is not a closed subgroup")
    return RangeDecomposition(ran=ran, theta_bar=theta_bar, ran_theta=ran_theta)


def open_subgroup_data(t: Hom) -> tuple[np.ndarray, np.ndarray]:
    """Central support P of theta^r and the coisometry p: L2(G) -> L2(H).

    p is normalized so that p Lambda_G(1) is a positive multiple of
    Lambda_H(1); then p p* = 1 and p* p = P.
    """
    if not t.classification.open_subgroup:
        raise HomError("open_subgroup_data requires an open quantum subgroup")
    h, g = t.source, t.target
    projs = _central_projections(g.alg, seed=42, tol=g.tol)
    pmat = np.zeros((g.dim, g.dim), dtype=complex)
    for z in projs:
        if opnorm(t.theta_r(z)) > 1e-8:
            pmat = pmat + z
    hp = float(np.real(g.haar_of(pmat)))
    if hp <= 0:
        raise NumericsError("central support has nonpositive Haar weight")
    p = np.sqrt(hp) * (h.lam @ t.theta_r.matrix @ np.linalg.inv(g.lam))
    checks = {
        "coisometry": opnorm(p @ dagger(p) - eye(h.dim)),
        "support": opnorm(dagger(p) @ p - pmat),
        "intertwines-W": opnorm(np.kron(p, p) @ g.W - h.W @ np.kron(p, p)),
        "modular": opnorm(p @ g.J.matrix_part - h.J.matrix_part @ np.conj(p)),
    }
    bad = {k: v for k, v in checks.items() if v > max(t.tol, 1e-7)}
    if bad:
        raise NumericsError(f"open subgroup data checks failed: {bad}")
    return pmat, p


def open_subgroup_expectation(t: Hom) -> AlgMap:
    """The conditional expectation dual(G) ->> thetahat^r(dual(H)) built from p."""
    _, p = open_subgroup_data(t)
    g = t.target
    imgs = []
    for d in g.dual_alg.basis:
        mid = p @ d @ dagger(p)
        if t.source.dual_alg.membership_residual(mid) > 1e-7 * max(1.0, opnorm(mid)):
            raise NumericsError("compression does not land in the dual subalgebra")
        imgs.append(t.theta_r_hat(mid))
    e = AlgMap.from_images(g.dual_alg, g.dual_alg, imgs, tol=max(t.tol, 1e-7))
    onto = t.theta_r_hat.image_algebra()
    return conditional_expectation(g.dual_alg, onto, e, tol=t.tol)
