"""Finite classical groups as multiplication tables, plus their algebras.

A group is a table ``t[i][j] = index of g_i g_j`` with identity at index 0.
These feed the quantum-group layer twice over: ``function_algebra`` gives the
commutative C*-bialgebra C(G) of functions with the translation coproduct,
and ``group_algebra`` gives the cocommutative group C*-algebra with the
group-like coproduct.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations

import numpy as np


@dataclass(frozen=True, eq=False)
class Group:
    """A finite group given by its Cayley table (identity = index 0)."""

    name: str
    table: tuple[tuple[int, ...], ...]
    element_names: tuple[str, ...]

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    @cached_property
    def inv(self) -> tuple[int, ...]:
        out = []
        for i in range(self.order):
            found = [j for j in range(self.order) if self.mul(i, j) == 0]
            if len(found) != 1:
                raise ValueError(f"{self.name}: element {i} has no unique inverse")
            out.append(found[0])
        return tuple(out)

    def check(self) -> None:
        n = self.order
        for i in range(n):
            if self.mul(0, i) != i or self.mul(i, 0) != i:
                raise ValueError(f"{self.name}: index 0 is not an identity")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.mul(self.mul(i, j), k) != self.mul(i, self.mul(j, k)):
                        raise ValueError(f"{self.name}: associativity fails at {(i, j, k)}")
        _ = self.inv


def group_from_table(table, name: str = "group", element_names=None) -> Group:
    table = tuple(tuple(int(x) for x in row) for row in table)
    if element_names is None:
        element_names = tuple(f"g{i}" for i in range(len(table)))
    g = Group(name=name, table=table, element_names=tuple(element_names))
    g.check()
    return g


def cyclic_group(n: int) -> Group:
    table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
    names = tuple(str(i) for i in range(n))
    return Group(name=f"Z{n}", table=table, element_names=names)


def dihedral_group(n: int) -> Group:
    """Dihedral group of order 2n: elements a^i b^j, (i,j)(k,l) = (i + (-1)^j k, j+l)."""
    if n < 1:
        raise ValueError("dihedral_group needs n >= 1")

    def idx(i, j):
        return j * n + i

    table = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(2):
            for k in range(n):
                for l in range(2):
                    i2 = (i + (k if j == 0 else -k)) % n
                    table[idx(i, j)][idx(k, l)] = idx(i2, (j + l) % 2)
    names = tuple(f"a{i}" if j == 0 else f"a{i}b" for j in range(2) for i in range(n))
    return group_from_table(table, name=f"D{n}", element_names=names)


def quaternion_group(n: int) -> Group:
    """Generalized quaternion group of order 4n: a^{2n}=1, a^n=c^2, cac^{-1}=a^{-1}."""
    if n < 1:
        raise ValueError("quaternion_group needs n >= 1")
    m = 2 * n

    def idx(i, j):
        return j * m + i

    table = [[0] * (4 * n) for _ in range(4 * n)]
    for i in range(m):
        for j in range(2):
            for k in range(m):
                for l in range(2):
                    if j == 0:
                        i2, j2 = (i + k) % m, l
                    else:
                        if l == 0:
                            i2, j2 = (i - k) % m, 1
                        else:
                            i2, j2 = (i - k + n) % m, 0
                    table[idx(i, j)][idx(k, l)] = idx(i2, j2)
    names = tuple(f"a{i}" if j == 0 else f"a{i}c" for j in range(2) for i in range(m))
    return group_from_table(table, name=f"Q{4 * n}", element_names=names)


def symmetric_group(n: int) -> Group:
    """Symmetric group on n letters; identity first, order lexicographic otherwise."""
    perms = sorted(permutations(range(n)))
    ident = tuple(range(n))
    perms.remove(ident)
    perms = [ident] + perms
    index = {p: i for i, p in enumerate(perms)}

    def compose(p, q):  # (p q)(x) = p(q(x))
        return tuple(p[q[x]] for x in range(n))

    table = tuple(tuple(index[compose(p, q)] for q in perms) for p in perms)
    names = tuple("".join(str(x) for x in p) for p in perms)
    return Group(name=f"S{n}", table=table, element_names=names)


def direct_product(g: Group, h: Group) -> Group:
    ng, nh = g.order, h.order

    def idx(i, j):
        return i * nh + j

    table = tuple(
        tuple(idx(g.mul(i1, i2), h.mul(j1, j2)) for i2 in range(ng) for j2 in range(nh))
        for i1 in range(ng)
        for j1 in range(nh)
    )
    names = tuple(f"({a},{b})" for a in g.element_names for b in h.element_names)
    return Group(name=f"{g.name}x{h.name}", table=table, element_names=names)


def semidirect_product(base: Group, gamma: Group, action) -> Group:
    """base x| gamma with action(t) a permutation of base's indices (automorphism)."""
    nb, ng = base.order, gamma.order

    def idx(i, t):
        return t * nb + i

    table = [[0] * (nb * ng) for _ in range(nb * ng)]
    for i in range(nb):
        for t in range(ng):
            for j in range(nb):
                for s in range(ng):
                    # (i, t)(j, s) = (i * action(t)(j), t s)
                    table[idx(i, t)][idx(j, s)] = idx(base.mul(i, action(t)[j]), gamma.mul(t, s))
    names = tuple(
        f"({base.element_names[i]};{gamma.element_names[t]})" for t in range(ng) for i in range(nb)
    )
    return group_from_table(table, name=f"{base.name}x|{gamma.name}", element_names=names)


@dataclass(frozen=True, eq=False)
class GroupHom:
    """A homomorphism of finite groups as an index map."""

    src: Group
    dst: Group
    images: tuple[int, ...]

    def __post_init__(self):
        for i in range(self.src.order):
            for j in range(self.src.order):
                lhs = self.dst.mul(self.images[i], self.images[j])
                if lhs != self.images[self.src.mul(i, j)]:
                    raise ValueError("not a group homomorphism")

    def __call__(self, i: int) -> int:
        return self.images[i]


def hom_by_generator_images(src: Group, dst: Group, images: dict[int, int]) -> GroupHom:
    """Extend images of generating indices to a full homomorphism by closure."""
    known = {0: 0}
    known.update(images)
    changed = True
    while changed:
        changed = False
        items = list(known.items())
        for (i, fi) in items:
            for (j, fj) in items:
                k = src.mul(i, j)
                fk = dst.mul(fi, fj)
                if k not in known:
                    known[k] = fk
                    changed = True
                elif known[k] != fk:
                    raise ValueError("generator images are inconsistent")
    if len(known) != src.order:
        raise ValueError("images do not generate the source group")
    return GroupHom(src=src, dst=dst, images=tuple(known[i] for i in range(src.order)))


def function_algebra_data(g: Group):
    """Basis (delta functions as diagonal matrices) plus the translation coproduct.

    Returns (basis, delta) where delta[k, i, j] = 1 iff g_i g_j = g_k, i.e.
    Delta(delta_k) = sum_{ij=k} delta_i (x) delta_j.
    """
    n = g.order
    basis = []
    for i in range(n):
        m = np.zeros((n, n), dtype=complex)
        m[i, i] = 1.0
        basis.append(m)
    delta = np.zeros((n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            delta[g.mul(i, j), i, j] = 1.0
    return basis, delta


def group_algebra_data(g: Group):
    """Left regular representation u_g plus the group-like coproduct."""
    n = g.order
    basis = []
    for i in range(n):
        m = np.zeros((n, n), dtype=complex)
        for j in range(n):
            m[g.mul(i, j), j] = 1.0
        basis.append(m)
    delta = np.zeros((n, n, n), dtype=complex)
    for i in range(n):
        delta[i, i, i] = 1.0
    return basis, delta
