"""Finite abelian groups presented by integer matrices.

Groups are kept in invariant-factor form ``Z/d_1 + ... + Z/d_k`` with
``d_1 | d_2 | ... | d_k`` and every ``d_i >= 2``; equality of groups is
equality of the invariant lists.  All character-side computations in the
package happen inside such groups (the character group ``A`` of a
stabilizer, never the stabilizer itself).

>>> A = FinAbGroup((2, 2))
>>> q, proj = quotient(A, [A(1, 1)])
>>> q
FinAbGroup((2,))
>>> proj(A(1, 0)), proj(A(0, 1))
(GroupElement((2,), (1,)), GroupElement((2,), (1,)))
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, prod
from typing import Iterable, Iterator, Sequence

from .errors import (
    ElementNotInGroup,
    GroupTooLarge,
    InfiniteCokernel,
    ParentMismatch,
)

Matrix = tuple[tuple[int, ...], ...]

AUTOMORPHISM_ORDER_BOUND = 256
# brute-force candidate tuples examined by automorphisms()
AUTOMORPHISM_SEARCH_BOUND = 2_000_000


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(a: Matrix, b: Matrix, cols: int | None = None) -> Matrix:
    """Product of integer matrices given as nested tuples.

    ``cols`` must be passed when ``b`` has no rows.
    """
    if not a:
        return ()
    if cols is None:
        cols = len(b[0]) if b else 0
    return tuple(
        tuple(sum(row[k] * b[k][j] for k in range(len(row))) for j in range(cols))
        for row in a
    )


def determinant(m: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SnfDecomposition:
    """``U * M * V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal."""

    U: Matrix
    D: Matrix
    V: Matrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0)))


def _pick_pivot(a, t, rows, cols):
    best = None
    for i in range(t, rows):
        row = a[i]
        for j in range(t, cols):
            v = row[j]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
                if best[0] == 1:
                    return best
    return best


def smith_normal_form(m: Sequence[Sequence[int]]) -> SnfDecomposition:
    """Smith normal form with transforms.

    Pivoting takes the smallest absolute nonzero entry of the active block;
    ties go to the lowest row index and then the lowest column index, so the
    output is a deterministic function of ``m``.
    """
    a = [list(map(int, row)) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        ra, rs = a[dst], a[src]
        for k in range(cols):
            ra[k] += q * rs[k]
        ua, us = u[dst], u[src]
        for k in range(rows):
            ua[k] += q * us[k]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(rows, cols)):
        while True:
            piv = _pick_pivot(a, t, rows, cols)
            if piv is None:
                break
            _, pi, pj = piv
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return SnfDecomposition(as_matrix(u), as_matrix(a), as_matrix(v))


# ---------------------------------------------------------------------------
# groups, elements, homomorphisms


@dataclass(frozen=True, order=True)
class FinAbGroup:
    invariants: tuple[int, ...] = ()

    def __post_init__(self):
        inv = tuple(int(d) for d in self.invariants)
        object.__setattr__(self, "invariants", inv)
        for i, d in enumerate(inv):
            if d < 2:
                raise ValueError(f"invariant factors must be >= 2, got {inv}")
            if i and d % inv[i - 1]:
                raise ValueError(f"invariant factors must form a divisibility chain, got {inv}")

    def __repr__(self):
        return f"FinAbGroup({self.invariants!r})"

    def __str__(self):
        if not self.invariants:
            return "triv"
        return "+".join(f"Z/{d}" for d in self.invariants)

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> FinAbGroup:
        """Canonical form of ``Z/o_1 + ... + Z/o_r`` for arbitrary ``o_i >= 1``."""
        orders = [int(o) for o in orders]
        if any(o < 1 for o in orders):
            raise ValueError("cyclic orders must be positive")
        return cokernel(_diag(orders), len(orders))[0]

    @property
    def rank(self) -> int:
        return len(self.invariants)

    @property
    def order(self) -> int:
        return prod(self.invariants)

    @property
    def is_trivial(self) -> bool:
        return not self.invariants

    def __call__(self, *coords) -> GroupElement:
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        return self.element(coords)

    def element(self, coords: Sequence[int]) -> GroupElement:
        if len(coords) != self.rank:
            raise ElementNotInGroup(f"{tuple(coords)} has wrong length for {self}")
        return GroupElement(self, tuple(int(c) % d for c, d in zip(coords, self.invariants)))

    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.rank)

    def gens(self) -> tuple[GroupElement, ...]:
        return tuple(
            GroupElement(self, tuple(int(i == j) for j in range(self.rank)))
            for i in range(self.rank)
        )

    def elements(self) -> Iterator[GroupElement]:
        for coords in itertools.product(*(range(d) for d in self.invariants)):
            yield GroupElement(self, coords)

    def nonzero_elements(self) -> list[GroupElement]:
        return [x for x in self.elements() if not x.is_zero]

    def contains(self, x: GroupElement) -> bool:
        return isinstance(x, GroupElement) and x.parent == self

    def to_json(self) -> dict:
        return {"invariants": list(self.invariants)}

    @classmethod
    def from_json(cls, doc) -> FinAbGroup:
        return cls(tuple(doc["invariants"]))


TRIVIAL = FinAbGroup(())


@dataclass(frozen=True, order=True)
class GroupElement:
    parent: FinAbGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.parent.rank or any(
            not 0 <= c < d for c, d in zip(self.coords, self.parent.invariants)
        ):
            raise ElementNotInGroup(f"{self.coords} is not a reduced element of {self.parent}")

    def __repr__(self):
        return f"GroupElement({self.parent.invariants!r}, {self.coords!r})"

    def __str__(self):
        return str(self.coords[0]) if self.parent.rank == 1 else str(self.coords)

    def _check(self, other):
        if not isinstance(other, GroupElement) or other.parent != self.parent:
            raise ParentMismatch(f"{other!r} is not an element of {self.parent}")

    def __add__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return self.parent.element([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return self.parent.element([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> GroupElement:
        return self.parent.element([-a for a in self.coords])

    def __mul__(self, k: int) -> GroupElement:
        return self.parent.element([k * a for a in self.coords])

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def order(self) -> int:
        m = 1
        for c, d in zip(self.coords, self.parent.invariants):
            m = m * (d // gcd(c, d)) // gcd(m, d // gcd(c, d))
        return m


def elem_add(x: GroupElement, y: GroupElement) -> GroupElement:
    return x + y


def elem_neg(x: GroupElement) -> GroupElement:
    return -x


def elem_order(x: GroupElement) -> int:
    return x.order()


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism acting on coordinate column vectors.

    ``matrix`` has one row per target invariant and one column per source
    invariant.
    """

    source: FinAbGroup
    target: FinAbGroup
    matrix: Matrix

    def __post_init__(self):
        m = as_matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        if len(m) != self.target.rank or any(len(r) != self.source.rank for r in m):
            raise ValueError("hom matrix shape does not match source/target ranks")
        # d_j * (column j) must vanish in the target
        for j, d in enumerate(self.source.invariants):
            for i, e in enumerate(self.target.invariants):
                if (d * m[i][j]) % e:
                    raise ValueError("hom matrix is not well defined on the source relations")

    def __call__(self, x: GroupElement) -> GroupElement:
        if x.parent != self.source:
            raise ElementNotInGroup(f"{x!r} is not in the source {self.source}")
        return self.target.element(
            [sum(r[k] * x.coords[k] for k in range(len(x.coords))) for r in self.matrix]
        )

    def compose(self, inner: GroupHom) -> GroupHom:
        """``self o inner``."""
        if inner.target != self.source:
            raise ParentMismatch("cannot compose: target/source mismatch")
        m = matmul(self.matrix, inner.matrix, cols=inner.source.rank)
        m = tuple(tuple(x % d for x in row) for row, d in zip(m, self.target.invariants))
        return GroupHom(inner.source, self.target, m)

    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and generates(
            self.target, [self(g) for g in self.source.gens()]
        )

    @classmethod
    def identity(cls, a: FinAbGroup) -> GroupHom:
        return cls(a, a, identity_matrix(a.rank))

    def to_json(self) -> list:
        return [list(r) for r in self.matrix]


def _diag(entries: Sequence[int]) -> Matrix:
    n = len(entries)
    return tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n))


# ---------------------------------------------------------------------------
# cokernels, quotients, membership


def cokernel(m: Sequence[Sequence[int]], rows: int) -> tuple[FinAbGroup, GroupHom]:
    """``Z^rows / (column span of m)`` with its projection from ``Z^rows``.

    The projection is a callable on raw integer vectors; its ``matrix`` maps
    ambient coordinates to the reduced coordinates of the quotient.
    """
    mat = as_matrix(m)
    if mat and len(mat) != rows:
        raise ValueError(f"matrix has {len(mat)} rows, expected {rows}")
    cols = len(mat[0]) if mat else 0
    if rows == 0:
        return TRIVIAL, _FreeProjection(0, TRIVIAL, ())
    if cols == 0:
        raise InfiniteCokernel(f"cokernel of an empty map into Z^{rows} is infinite")
    snf = smith_normal_form(mat)
    diag = [snf.D[i][i] if i < cols else 0 for i in range(rows)]
    if any(d == 0 for d in diag):
        raise InfiniteCokernel(f"matrix has rank {sum(1 for d in diag if d)} < {rows}")
    keep = [i for i, d in enumerate(diag) if d > 1]
    group = FinAbGroup(tuple(diag[i] for i in keep))
    proj = tuple(tuple(x % diag[i] for x in snf.U[i]) for i in keep)
    return group, _FreeProjection(rows, group, proj)


@dataclass(frozen=True)
class _FreeProjection:
    """Projection ``Z^rank -> group`` given by an integer matrix."""

    rank: int
    target: FinAbGroup
    matrix: Matrix

    def __call__(self, vec: Sequence[int]) -> GroupElement:
        if len(vec) != self.rank:
            raise ValueError(f"expected a vector of length {self.rank}")
        return self.target.element([sum(r[k] * vec[k] for k in range(self.rank)) for r in self.matrix])

    def to_json(self) -> list:
        return [list(r) for r in self.matrix]


def _check_members(a: FinAbGroup, xs: Iterable[GroupElement]):
    for x in xs:
        if not a.contains(x):
            raise ElementNotInGroup(f"{x!r} is not an element of {a}")


def quotient(a: FinAbGroup, gens: Sequence[GroupElement]) -> tuple[FinAbGroup, GroupHom]:
    """``a / <gens>`` in canonical form, with the projection homomorphism."""
    gens = list(gens)
    _check_members(a, gens)
    return _quotient_cached(a, tuple(g.coords for g in gens))


@lru_cache(maxsize=65536)
def _quotient_cached(a: FinAbGroup, gen_coords: tuple[tuple[int, ...], ...]):
    if a.is_trivial:
        return TRIVIAL, GroupHom(a, TRIVIAL, ())
    k = a.rank
    columns = [[a.invariants[i] if i == j else 0 for i in range(k)] for j in range(k)]
    columns += [list(c) for c in gen_coords]
    mat = tuple(tuple(col[i] for col in columns) for i in range(k))
    q, proj = cokernel(mat, k)
    return q, GroupHom(a, q, proj.matrix if proj.matrix else tuple())


def subgroup_contains(a: FinAbGroup, gens: Sequence[GroupElement], x: GroupElement) -> bool:
    _check_members(a, [x])
    _, proj = quotient(a, gens)
    return proj(x).is_zero


def generates(a: FinAbGroup, s: Sequence[GroupElement]) -> bool:
    return quotient(a, s)[0].is_trivial


def subgroup_elements(a: FinAbGroup, gens: Sequence[GroupElement]) -> set[GroupElement]:
    """Brute-force enumeration of ``<gens>``; meant for small groups and tests."""
    _check_members(a, gens)
    seen = {a.zero()}
    frontier = [a.zero()]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x + g
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def automorphisms(a: FinAbGroup, bound: int = AUTOMORPHISM_ORDER_BOUND) -> tuple[GroupHom, ...]:
    """All automorphisms of ``a`` by brute force over generator images."""
    if a.order > bound:
        raise GroupTooLarge(f"|{a}| = {a.order} exceeds the automorphism bound {bound}")
    return _automorphisms_cached(a)


@lru_cache(maxsize=None)
def _automorphisms_cached(a: FinAbGroup) -> tuple[GroupHom, ...]:
    if a.is_trivial:
        return (GroupHom.identity(a),)
    elems = list(a.elements())
    candidates = [[y for y in elems if (y * d).is_zero] for d in a.invariants]
    if prod(len(c) for c in candidates) > AUTOMORPHISM_SEARCH_BOUND:
        raise GroupTooLarge(f"automorphism search space of {a} is too large")
    out = []
    for images in itertools.product(*candidates):
        if not generates(a, images):
            continue
        mat = tuple(tuple(img.coords[i] for img in images) for i in range(a.rank))
        out.append(GroupHom(a, a, mat))
    return tuple(out)


def isomorphism_types_of_quotients(a: FinAbGroup) -> set[FinAbGroup]:
    """Canonical forms of all quotients of ``a`` (by brute force over cyclic subgroups
    and their sums; adequate for the small groups in scope)."""
    seen = {a}
    frontier = [a]
    while frontier:
        g = frontier.pop()
        for x in g.nonzero_elements():
            q, _ = quotient(g, [x])
            if q not in seen:
                seen.add(q)
                frontier.append(q)
    return seen
