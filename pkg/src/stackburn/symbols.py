"""Symbols of the Burnside groups and single-step relations.

Three presentations share the machinery here:

``cburn``
    pairs ``(stack, alpha)`` (:class:`CSymbol`); only reordering and
    user-declared equivalences of stack labels are applied.
``obar``
    triples ``(K, A, S)`` (:class:`OSymbol`) where a trivial character makes
    the symbol vanish and ``S`` is taken up to ``Aut(A)``.
``oburn``
    the same triples, but a trivial character is traded for one more
    transcendental variable of ``K``.

Positions ``i, j`` in every relation are 0-based.
"""

from __future__ import annotations

import itertools
import json
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .abelian import (
    FinAbGroup,
    GroupElement,
    GroupHom,
    automorphisms,
    generates,
    quotient,
    subgroup_contains,
)
from .errors import (
    IndexOutOfRange,
    InvalidSymbol,
    PreconditionFailed,
    SequenceTooShort,
)

OBAR = "obar"
OBURN = "oburn"
CBURN = "cburn"
PRESENTATIONS = (CBURN, OBAR, OBURN)


# ---------------------------------------------------------------------------
# labels


@dataclass(frozen=True, order=True)
class FieldLabel:
    """A base field ``base`` of transcendence degree ``trdeg`` over ``k`` with
    ``t`` further independent variables adjoined."""

    base: str = "k"
    trdeg: int = 0
    t: int = 0

    def __post_init__(self):
        if self.trdeg < 0 or self.t < 0:
            raise ValueError("transcendence degrees must be nonnegative")
        if self.base == "k" and self.trdeg != 0:
            raise ValueError('base "k" is reserved for the ground field (trdeg 0)')

    @property
    def total(self) -> int:
        return self.trdeg + self.t

    def adjoin(self, m: int = 1) -> FieldLabel:
        return FieldLabel(self.base, self.trdeg, self.t + m)

    def __str__(self):
        if not self.t:
            return self.base
        if self.t == 1:
            return f"{self.base}(t)"
        return f"{self.base}(t1..t{self.t})"

    def to_json(self) -> dict:
        return {"base": self.base, "trdeg": self.trdeg, "t": self.t}

    @classmethod
    def from_json(cls, doc) -> FieldLabel:
        return cls(doc.get("base", "k"), doc.get("trdeg", 0), doc.get("t", 0))


def _translation_canonical(a: FinAbGroup, chars: Sequence[GroupElement]) -> tuple[GroupElement, ...]:
    # P(O + L_1 + ... + L_c) only depends on the weights {0, c_1, .., c_c} up to
    # a common shift; pick the shift giving the smallest sorted tuple.
    weights = [a.zero(), *chars]
    best = None
    for w in weights:
        shifted = sorted(x - w for x in weights)
        shifted.remove(a.zero())
        cand = tuple(shifted)
        if best is None or cand < best:
            best = cand
    return best


@dataclass(frozen=True)
class StackLabel:
    """Label of a linearizable stack.

    Either ``atomic`` (an opaque identifier supplied by the user) or the
    result of construction (A) on ``parent`` with characters ``chars``,
    which has dimension ``parent.dim + len(chars)`` and character group
    ``parent.stabilizer / <chars>``.
    """

    kind: str
    dim: int
    stabilizer: FinAbGroup
    field: FieldLabel
    ident: str | None = None
    parent: StackLabel | None = None
    chars: tuple[GroupElement, ...] = ()

    @classmethod
    def atomic(cls, ident: str, dim: int, stabilizer: FinAbGroup = FinAbGroup(),
               field: FieldLabel | None = None) -> StackLabel:
        if field is None:
            field = FieldLabel("k", 0, 0) if dim == 0 else FieldLabel(ident, dim, 0)
        if field.total != dim:
            raise InvalidSymbol(f"field {field} does not have transcendence degree {dim}")
        return cls("atomic", dim, stabilizer, field, ident=ident)

    @classmethod
    def construct(cls, parent: StackLabel, chars) -> StackLabel:
        if isinstance(chars, GroupElement):
            chars = (chars,)
        chars = tuple(chars)
        for c in chars:
            if c.parent != parent.stabilizer:
                raise InvalidSymbol(f"{c!r} is not a character of {parent}")
        canon = _translation_canonical(parent.stabilizer, chars)
        q, _ = quotient(parent.stabilizer, list(canon))
        return cls("construct", parent.dim + len(canon), q, parent.field.adjoin(len(canon)),
                   parent=parent, chars=canon)

    def projection(self) -> GroupHom:
        """Restriction ``parent.stabilizer -> self.stabilizer`` for constructed labels."""
        if self.kind != "construct":
            raise ValueError("atomic labels have no parent")
        return quotient(self.parent.stabilizer, list(self.chars))[1]

    def __str__(self):
        if self.kind == "atomic":
            return self.ident
        return f"A({self.parent};{','.join(map(str, self.chars))})"

    def sort_key(self):
        if self.kind == "atomic":
            return (0, self.ident, self.dim, self.stabilizer.invariants)
        return (1, self.parent.sort_key(), tuple(c.coords for c in self.chars))

    def to_json(self) -> dict:
        if self.kind == "atomic":
            return {"atomic": self.ident, "dim": self.dim, "A": self.stabilizer.to_json(),
                    "field": self.field.to_json()}
        return {"construct": self.parent.to_json(), "chars": [list(c.coords) for c in self.chars]}

    @classmethod
    def from_json(cls, doc) -> StackLabel:
        if "atomic" in doc:
            a = FinAbGroup.from_json(doc.get("A", {"invariants": []}))
            f = FieldLabel.from_json(doc["field"]) if "field" in doc else None
            return cls.atomic(doc["atomic"], doc["dim"], a, f)
        parent = cls.from_json(doc["construct"])
        return cls.construct(parent, [parent.stabilizer.element(c) for c in doc["chars"]])


class EquivalenceRegistry:
    """Declared birational equivalences between stack labels (relation (I)).

    A union-find over labels; the representative of a class is its smallest
    member by :meth:`StackLabel.sort_key`.  Writers take a lock; readers use
    :meth:`snapshot`.
    """

    def __init__(self):
        self._parent: dict[StackLabel, StackLabel] = {}
        self._lock = threading.Lock()

    def _find(self, x):
        root = x
        while self._parent.get(root, root) != root:
            root = self._parent[root]
        return root

    def declare(self, a: StackLabel, b: StackLabel) -> None:
        if a.dim != b.dim or a.stabilizer != b.stabilizer:
            raise InvalidSymbol("only labels of equal dimension and stabilizer can be identified")
        with self._lock:
            ra, rb = self._find(a), self._find(b)
            if ra == rb:
                return
            lo, hi = sorted((ra, rb), key=StackLabel.sort_key)
            self._parent[hi] = lo
            self._parent.setdefault(lo, lo)

    def representative(self, a: StackLabel) -> StackLabel:
        return self._find(a)

    def snapshot(self) -> dict[StackLabel, StackLabel]:
        with self._lock:
            return {x: self._find(x) for x in self._parent}


# ---------------------------------------------------------------------------
# symbols


def _as_elements(a: FinAbGroup, chars) -> tuple[GroupElement, ...]:
    out = []
    for c in chars:
        if isinstance(c, GroupElement):
            if c.parent != a:
                raise InvalidSymbol(f"{c!r} is not an element of {a}")
            out.append(c)
        else:
            out.append(a.element(tuple(c) if isinstance(c, (list, tuple)) else (c,)))
    return tuple(out)


@lru_cache(maxsize=262144)
def _generates_cached(a: FinAbGroup, coords: tuple) -> bool:
    return generates(a, [GroupElement(a, c) for c in coords])


@dataclass(frozen=True)
class OSymbol:
    """``(K, A, S)``: field label, character group and character sequence."""

    field: FieldLabel
    A: FinAbGroup
    S: tuple[GroupElement, ...]
    n: int = -1

    def __post_init__(self):
        s = _as_elements(self.A, self.S)
        object.__setattr__(self, "S", s)
        n = self.field.total + len(s)
        if self.n == -1:
            object.__setattr__(self, "n", n)
        elif self.n != n:
            raise InvalidSymbol(f"grading {self.n} != trdeg {self.field.total} + |S| {len(s)}")
        if not _generates_cached(self.A, tuple(x.coords for x in s)):
            raise InvalidSymbol(f"characters {[str(x) for x in s]} do not generate {self.A}")

    @property
    def m(self) -> int:
        return len(self.S)

    @property
    def has_trivial(self) -> bool:
        return any(x.is_zero for x in self.S)

    def sort_key(self):
        return (self.field.base, self.field.trdeg, self.field.t, self.A.invariants,
                tuple(x.coords for x in self.S))

    def __str__(self):
        return f"({self.field}, {self.A}, ({', '.join(map(str, self.S))}))"

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "A": self.A.to_json(),
                "S": [list(x.coords) for x in self.S], "n": self.n}

    @classmethod
    def from_json(cls, doc) -> OSymbol:
        a = FinAbGroup.from_json(doc["A"])
        return cls(FieldLabel.from_json(doc["field"]), a,
                   tuple(a.element(c) for c in doc["S"]), doc.get("n", -1))

    def key(self) -> str:
        """Compact canonical text form, used inside relation identifiers."""
        return json.dumps(self.to_json(), separators=(",", ":"), sort_keys=True)


@dataclass(frozen=True)
class CSymbol:
    """``(stack, alpha)``: a stack label with nonzero characters generating its
    character group."""

    stack: StackLabel
    alpha: tuple[GroupElement, ...]
    n: int = -1

    def __post_init__(self):
        a = self.stack.stabilizer
        alpha = _as_elements(a, self.alpha)
        object.__setattr__(self, "alpha", alpha)
        n = self.stack.dim + len(alpha)
        if self.n == -1:
            object.__setattr__(self, "n", n)
        elif self.n != n:
            raise InvalidSymbol(f"grading {self.n} != dim {self.stack.dim} + |alpha| {len(alpha)}")
        if any(x.is_zero for x in alpha):
            raise InvalidSymbol("cBurn characters must be nonzero")
        if not _generates_cached(a, tuple(x.coords for x in alpha)):
            raise InvalidSymbol(f"characters do not generate {a}")

    @property
    def m(self) -> int:
        return len(self.alpha)

    def sort_key(self):
        return (self.stack.sort_key(), tuple(x.coords for x in self.alpha))

    def __str__(self):
        return f"({self.stack}, ({', '.join(map(str, self.alpha))}))"

    def to_json(self) -> dict:
        return {"stack": self.stack.to_json(), "alpha": [list(x.coords) for x in self.alpha],
                "n": self.n}

    @classmethod
    def from_json(cls, doc) -> CSymbol:
        stack = StackLabel.from_json(doc["stack"])
        return cls(stack, tuple(stack.stabilizer.element(c) for c in doc["alpha"]), doc.get("n", -1))


# ---------------------------------------------------------------------------
# formal sums


class BurnElement:
    """Integer combination of symbols of a fixed grading.

    Immutable by convention: arithmetic returns new elements and no public
    method mutates ``terms``.
    """

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping | Iterable[tuple] = ()):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for sym, c in items:
            if sym.n != n:
                raise InvalidSymbol(f"symbol {sym} has grading {sym.n}, expected {n}")
            acc[sym] = acc.get(sym, 0) + int(c)
        self.n = n
        self._terms = {s: c for s, c in acc.items() if c}

    @classmethod
    def of(cls, sym, coeff: int = 1) -> BurnElement:
        return cls(sym.n, {sym: coeff})

    @classmethod
    def zero(cls, n: int) -> BurnElement:
        return cls(n)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def symbols(self) -> list:
        return [s for s, _ in self.items()]

    def coeff(self, sym) -> int:
        return self._terms.get(sym, 0)

    def __iter__(self) -> Iterator:
        return iter(self.items())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def _check(self, other):
        if not isinstance(other, BurnElement):
            return NotImplemented
        if other.n != self.n and other._terms and self._terms:
            raise InvalidSymbol(f"cannot combine gradings {self.n} and {other.n}")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        n = self.n if self._terms else other.n
        return BurnElement(n, itertools.chain(self._terms.items(), other._terms.items()))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return BurnElement(self.n, {s: -c for s, c in self._terms.items()})

    def __mul__(self, k: int):
        return BurnElement(self.n, {s: k * c for s, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BurnElement):
            return NotImplemented
        return self._terms == other._terms and (self.n == other.n or not self._terms)

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        if not self._terms:
            return f"BurnElement({self.n}, 0)"
        body = " ".join(f"{'+' if c > 0 else '-'} {abs(c)}*{s}" for s, c in self.items())
        return f"BurnElement({self.n}, {body})"

    def to_json(self) -> list:
        return [{"symbol": s.to_json(), "coeff": c} for s, c in self.items()]


def element_sum(n: int, parts: Iterable[BurnElement]) -> BurnElement:
    acc: dict = {}
    for p in parts:
        for s, c in p._terms.items():
            acc[s] = acc.get(s, 0) + c
    return BurnElement(n, acc)


# ---------------------------------------------------------------------------
# canonical forms


@lru_cache(maxsize=262144)
def _canonical_chars(a: FinAbGroup, coords: tuple[tuple[int, ...], ...]):
    """Aut(A)-minimal sorted character tuple plus, for every input position,
    the position it lands on."""
    best = None
    for phi in automorphisms(a):
        imgs = [phi(GroupElement(a, c)).coords for c in coords]
        order = sorted(range(len(imgs)), key=lambda k: (imgs[k], k))
        cand = tuple(imgs[k] for k in order)
        if best is None or cand < best[0]:
            pos = [0] * len(order)
            for r, k in enumerate(order):
                pos[k] = r
            best = (cand, tuple(pos))
    return best


def canonical_form(sym: OSymbol) -> tuple[OSymbol, tuple[int, ...]]:
    """Canonical representative of the ``Aut(A)`` and permutation orbit of
    ``sym`` together with the position map ``old index -> new index``.
    Trivial characters are kept."""
    cand, pos = _canonical_chars(sym.A, tuple(x.coords for x in sym.S))
    return OSymbol(sym.field, sym.A, tuple(GroupElement(sym.A, c) for c in cand), sym.n), pos


def normalize_obar(sym: OSymbol) -> BurnElement:
    """0 if ``S`` has a trivial character, else the canonical symbol."""
    if sym.has_trivial:
        return BurnElement.zero(sym.n)
    return BurnElement.of(canonical_form(sym)[0])


def normalize_oburn(sym: OSymbol) -> OSymbol:
    """Trade each trivial character for an adjoined variable, then canonicalize."""
    kept = tuple(x for x in sym.S if not x.is_zero)
    dropped = sym.m - len(kept)
    return canonical_form(OSymbol(sym.field.adjoin(dropped), sym.A, kept, sym.n))[0]


def is_obar_canonical(sym: OSymbol) -> bool:
    return not sym.has_trivial and canonical_form(sym)[0] == sym


def normalize_cburn(sym: CSymbol, registry: EquivalenceRegistry | None = None) -> CSymbol:
    """Reorder characters (relation (O)); map the stack to its declared
    representative when a registry is given."""
    stack = registry.representative(sym.stack) if registry is not None else sym.stack
    alpha = tuple(sorted(sym.alpha, key=lambda x: x.coords))
    return CSymbol(stack, alpha, sym.n)


def normalize_element(e: BurnElement, presentation: str) -> BurnElement:
    if presentation == OBAR:
        return element_sum(e.n, (c * normalize_obar(s) for s, c in e._terms.items()))
    if presentation == OBURN:
        return BurnElement(e.n, ((normalize_oburn(s), c) for s, c in e._terms.items()))
    if presentation == CBURN:
        return BurnElement(e.n, ((normalize_cburn(s), c) for s, c in e._terms.items()))
    raise ValueError(f"unknown presentation {presentation!r}")


def to_obar(sym: CSymbol) -> BurnElement:
    """Image of a cBurn symbol under the canonical map to oBurn-bar."""
    return normalize_obar(OSymbol(sym.stack.field, sym.stack.stabilizer, sym.alpha, sym.n))


def cburn_to_obar(e: BurnElement) -> BurnElement:
    return element_sum(e.n, (c * to_obar(s) for s, c in e._terms.items()))


# ---------------------------------------------------------------------------
# relations


def _check_pair(m: int, i: int, j: int):
    if not (0 <= i < m and 0 <= j < m):
        raise IndexOutOfRange(f"positions ({i}, {j}) out of range for {m} characters")
    if i == j:
        raise IndexOutOfRange("relation positions must differ")


def _rest(seq, i, j):
    return tuple(x for k, x in enumerate(seq) if k not in (i, j))


def blowup_terms(sym: OSymbol, i: int, j: int) -> tuple[OSymbol, OSymbol, OSymbol]:
    """The three raw (unnormalized) right-hand-side symbols of the blow-up
    relation at positions ``i`` (playing ``a_1``) and ``j`` (playing ``a_2``).

    ``(a1, a2-a1, rest)``, ``(a1-a2, a2, rest)`` and
    ``(K(t), A/<a1-a2>, (image of a2, images of rest))``.
    """
    _check_pair(sym.m, i, j)
    a1, a2 = sym.S[i], sym.S[j]
    rest = _rest(sym.S, i, j)
    t1 = OSymbol(sym.field, sym.A, (a1, a2 - a1) + rest, sym.n)
    t2 = OSymbol(sym.field, sym.A, (a1 - a2, a2) + rest, sym.n)
    q, proj = quotient(sym.A, [a1 - a2])
    t3 = OSymbol(sym.field.adjoin(1), q, (proj(a2),) + tuple(proj(x) for x in rest), sym.n)
    return t1, t2, t3


def blowup_relation_obar(sym: OSymbol, i: int, j: int) -> BurnElement:
    """Right-hand side of relation (B) in oBurn-bar; ``sym`` equals it."""
    t1, t2, t3 = blowup_terms(sym, i, j)
    return normalize_obar(t1) + normalize_obar(t2) + normalize_obar(t3)


def vanishing_applies(sym: OSymbol, i: int, j: int) -> bool:
    _check_pair(sym.m, i, j)
    return (sym.S[i] + sym.S[j]).is_zero


def blowup_relation_oburn(sym: OSymbol, i: int, j: int) -> BurnElement:
    """Right-hand side of the two-character relation in oBurn; the last term
    enters with a minus sign and keeps the trivial image of ``a1 - a2``."""
    t1, t2, t3 = blowup_terms(sym, i, j)
    q = t3.A
    # (A/<a1-a2>, (0, image a2, ...)) = (K(t), A/<a1-a2>, (image a2, ...))
    t3_zero = OSymbol(sym.field, q, (q.zero(),) + t3.S, sym.n)
    return BurnElement(sym.n, [(normalize_oburn(t1), 1), (normalize_oburn(t2), 1),
                               (normalize_oburn(t3_zero), -1)])


def blowup_relation_cburn(sym: CSymbol, i: int, j: int) -> BurnElement:
    """``Theta_1 + Theta_2`` of relation (B) in cBurn."""
    if sym.m < 2:
        raise SequenceTooShort("relation (B) needs at least two characters")
    _check_pair(sym.m, i, j)
    alpha = sym.alpha
    a1, a2 = alpha[i], alpha[j]
    a = a1 - a2
    rest = _rest(alpha, i, j)
    out = []
    if not a.is_zero:
        out.append((normalize_cburn(CSymbol(sym.stack, (a1, a2 - a1) + rest, sym.n)), 1))
        out.append((normalize_cburn(CSymbol(sym.stack, (a2, a1 - a2) + rest, sym.n)), 1))
    a_group = sym.stack.stabilizer
    if not any(subgroup_contains(a_group, [a], x) for x in alpha):
        y = StackLabel.construct(sym.stack, a)
        proj = y.projection()
        b = tuple(proj(x) for x in (a2,) + rest)
        out.append((normalize_cburn(CSymbol(y, b, sym.n)), 1))
    return BurnElement(sym.n, out)


# ---------------------------------------------------------------------------
# derived relations


@dataclass(frozen=True)
class DerivationStep:
    """``coeff * (lhs - rhs)`` of one relation instance on an explicit
    (not necessarily canonical) symbol."""

    kind: str  # "V" or "B"
    symbol: OSymbol
    i: int
    j: int
    coeff: int

    def row(self) -> BurnElement:
        lhs = normalize_obar(self.symbol)
        rhs = BurnElement.zero(self.symbol.n) if self.kind == "V" else blowup_relation_obar(
            self.symbol, self.i, self.j)
        return (lhs - rhs) * self.coeff


def derived_vanishing(sym: OSymbol, j: int) -> tuple[DerivationStep, ...]:
    """Relation instances whose signed sum is ``sym`` when the first ``j``
    characters sum to zero.

    Follows the induction on ``j``: the base case is (V); otherwise (B) is
    applied to ``(a1, a1 + a2, a3, ...)`` and the three remaining symbols
    each have a vanishing prefix of length ``j - 1`` after reordering.
    """
    if not 2 <= j <= sym.m:
        raise SequenceTooShort(f"need 2 <= j <= {sym.m}, got j={j}")
    total = sym.A.zero()
    for x in sym.S[:j]:
        total = total + x
    if not total.is_zero:
        raise PreconditionFailed(f"the first {j} characters of {sym} do not sum to zero")
    steps: list[DerivationStep] = []
    _vanish(sym, j, 1, steps)
    return tuple(steps)


def _vanish(sym: OSymbol, j: int, c: int, out: list):
    if sym.has_trivial:
        return  # already 0 by the trivial-character convention
    s = sym.S
    if (s[0] + s[1]).is_zero:
        out.append(DerivationStep("V", sym, 0, 1, c))
        return
    a1, a2 = s[0], s[1]
    head, tail = s[2:j], s[j:]
    lifted = OSymbol(sym.field, sym.A, (a1, a1 + a2) + head + tail, sym.n)
    out.append(DerivationStep("B", lifted, 0, 1, -c))
    # sym = -(row of B) + lifted - T2 - T3, each with a vanishing (j-1)-prefix
    _vanish(OSymbol(sym.field, sym.A, (a1 + a2,) + head + (a1,) + tail, sym.n), j - 1, c, out)
    _vanish(OSymbol(sym.field, sym.A, (a1 + a2,) + head + (-a2,) + tail, sym.n), j - 1, -c, out)
    q, proj = quotient(sym.A, [a2])
    t3 = OSymbol(sym.field.adjoin(1), q, tuple(proj(x) for x in (a1 + a2,) + head + tail), sym.n)
    _vanish(t3, j - 1, -c, out)


def _subsets(j: int) -> Iterator[tuple[int, ...]]:
    for r in range(1, j + 1):
        yield from itertools.combinations(range(j), r)


def derived_blowup_expansion(sym, j: int, i0: str = "min") -> BurnElement:
    """Sum over nonempty ``I`` of the first ``j`` positions of ``(Y_I, beta_I)``.

    ``H_I`` is realized dually as ``A / <a_i - a_i0 : i in I>``; ``i0`` is the
    least (``"min"``) or greatest (``"max"``) element of ``I``.  Accepts an
    :class:`OSymbol` (result in oBurn-bar) or a :class:`CSymbol`.
    """
    m = sym.m
    if m < 2:
        raise SequenceTooShort("the expansion needs at least two characters")
    if not 2 <= j <= m:
        raise SequenceTooShort(f"need 2 <= j <= {m}, got j={j}")
    pick = min if i0 == "min" else max
    chars = sym.S if isinstance(sym, OSymbol) else sym.alpha
    a = sym.A if isinstance(sym, OSymbol) else sym.stack.stabilizer
    parts = []
    for subset in _subsets(j):
        r = pick(subset)
        diffs = [chars[i] - chars[r] for i in subset if i != r]
        alpha_i = [chars[r]] + [chars[i] - chars[r] for i in range(j) if i not in subset]
        alpha_i += list(chars[j:])
        if isinstance(sym, OSymbol):
            q, proj = quotient(a, diffs)
            beta = tuple(proj(x) for x in alpha_i)
            if any(x.is_zero for x in beta):
                continue
            parts.append(normalize_obar(OSymbol(sym.field.adjoin(len(diffs)), q, beta, sym.n)))
        else:
            y = StackLabel.construct(sym.stack, diffs) if diffs else sym.stack
            proj = y.projection() if diffs else GroupHom.identity(a)
            beta = tuple(proj(x) for x in alpha_i)
            if any(x.is_zero for x in beta):
                continue
            parts.append(BurnElement.of(normalize_cburn(CSymbol(y, beta, sym.n))))
    return element_sum(sym.n, parts)


def symbol_from_json(doc):
    return CSymbol.from_json(doc) if "stack" in doc else OSymbol.from_json(doc)


def element_from_json(doc, n: int | None = None) -> BurnElement:
    """Parse ``[{"symbol": ..., "coeff": c}, ...]``; ``n`` is required for an
    empty list."""
    terms = [(symbol_from_json(t["symbol"]), int(t.get("coeff", 1))) for t in doc]
    if terms:
        n0 = terms[0][0].n
        if n is not None and n != n0:
            raise InvalidSymbol(f"grading flag {n} disagrees with symbols of grading {n0}")
        n = n0
    if n is None:
        raise InvalidSymbol("grading of an empty element is ambiguous; pass --grading")
    return BurnElement(n, terms)
