"""Deciding equality in oBurn-bar_n and oBurn_n.

A finite set of canonical symbols closed under every relation instance spans a
finite-rank free group; the relation instances become integer row vectors over
it and equality becomes membership in their row lattice.  Membership is decided
against an incrementally built row echelon basis whose rows remember how they
were combined from the relation rows, so a positive verdict carries an exact
certificate and a negative one carries a separating functional.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping

from .abelian import FinAbGroup, isomorphism_types_of_quotients
from .errors import (
    CertificateMismatch,
    InvalidSymbol,
    SymbolOutsideUniverse,
    UniverseOverflow,
)
from .symbols import (
    OBAR,
    OBURN,
    BurnElement,
    FieldLabel,
    OSymbol,
    blowup_relation_obar,
    blowup_relation_oburn,
    canonical_form,
    normalize_element,
    normalize_obar,
    normalize_oburn,
)

DEFAULT_MAX_SIZE = 100_000


# ---------------------------------------------------------------------------
# relation instances


@dataclass(frozen=True)
class RelationInstance:
    """One relation applied to an explicit symbol at positions ``(i, j)``.

    ``kind`` is ``"V"`` or ``"B"`` (oBurn-bar) or ``"R"`` (the two-character
    relation of oBurn, possibly on a symbol carrying one explicit trivial
    character).
    """

    kind: str
    symbol: OSymbol
    i: int
    j: int

    @property
    def id(self) -> str:
        return f"{self.kind}:{self.i},{self.j}:{self.symbol.key()}"

    @classmethod
    def parse(cls, ident: str) -> RelationInstance:
        try:
            kind, pair, body = ident.split(":", 2)
            i, j = (int(x) for x in pair.split(","))
            sym = OSymbol.from_json(json.loads(body))
        except (ValueError, KeyError, TypeError) as exc:
            raise CertificateMismatch(f"malformed relation id {ident!r}") from exc
        if kind not in ("V", "B", "R"):
            raise CertificateMismatch(f"unknown relation kind {kind!r}")
        return cls(kind, sym, i, j)

    def row(self) -> BurnElement:
        """LHS - RHS, normalized in the presentation the relation belongs to."""
        s = self.symbol
        if self.kind == "V":
            if not (s.S[self.i] + s.S[self.j]).is_zero:
                raise CertificateMismatch(f"(V) does not apply to {s} at ({self.i}, {self.j})")
            return normalize_obar(s)
        if self.kind == "B":
            return normalize_obar(s) - blowup_relation_obar(s, self.i, self.j)
        return BurnElement.of(normalize_oburn(s)) - blowup_relation_oburn(s, self.i, self.j)


def _lower_t(f: FieldLabel) -> FieldLabel:
    return FieldLabel(f.base, f.trdeg, f.t - 1)


def relation_instances(sym: OSymbol, presentation: str) -> list[RelationInstance]:
    """All relation instances with ``sym`` (canonical) as left-hand side.

    Unordered pairs suffice: swapping ``i`` and ``j`` swaps the first two
    terms and leaves the third unchanged.
    """
    out = []
    pairs = list(itertools.combinations(range(sym.m), 2))
    if presentation == OBAR:
        for i, j in pairs:
            if (sym.S[i] + sym.S[j]).is_zero:
                out.append(RelationInstance("V", sym, i, j))
            out.append(RelationInstance("B", sym, i, j))
    elif presentation == OBURN:
        for i, j in pairs:
            out.append(RelationInstance("R", sym, i, j))
        if sym.field.t >= 1:
            # read one adjoined variable back as a trivial character
            padded = OSymbol(_lower_t(sym.field), sym.A, (sym.A.zero(),) + sym.S, sym.n)
            for i in range(sym.m):
                out.append(RelationInstance("R", padded, 0, i + 1))
    else:
        raise ValueError(f"no relation lattice for presentation {presentation!r}")
    return out


def replay(certificate: Mapping[str, int], n: int) -> BurnElement:
    """The element certified by ``{relation_id: coeff}``."""
    acc = BurnElement.zero(n)
    for ident, c in sorted(certificate.items()):
        acc = acc + RelationInstance.parse(ident).row() * int(c)
    return acc


def check_certificate(e: BurnElement, certificate: Mapping[str, int], presentation: str) -> None:
    """Raise :class:`CertificateMismatch` unless the certificate replays to ``e``."""
    target = normalize_element(e, presentation)
    got = replay(certificate, e.n)
    if got != target:
        raise CertificateMismatch("certificate mismatch: replay differs from the element")


# ---------------------------------------------------------------------------
# universes


def _canonical(sym: OSymbol, presentation: str) -> OSymbol | None:
    if presentation == OBAR:
        return None if sym.has_trivial else canonical_form(sym)[0]
    return normalize_oburn(sym)


@dataclass
class SymbolUniverse:
    """Indexed, relation-closed set of canonical symbols of one grading."""

    n: int
    presentation: str
    symbols: list[OSymbol] = dc_field(default_factory=list)
    index: dict[OSymbol, int] = dc_field(default_factory=dict)
    provenance: list[str | None] = dc_field(default_factory=list)

    def __len__(self):
        return len(self.symbols)

    def __contains__(self, sym):
        return sym in self.index

    def __iter__(self):
        return iter(self.symbols)

    def _add(self, sym: OSymbol, source: str | None) -> bool:
        if sym in self.index:
            return False
        self.index[sym] = len(self.symbols)
        self.symbols.append(sym)
        self.provenance.append(source)
        return True


def close_universe(seeds: Iterable[OSymbol], n: int | None = None, presentation: str = OBAR,
                   max_size: int = DEFAULT_MAX_SIZE) -> SymbolUniverse:
    """Least relation-closed superset of ``seeds`` (breadth-first, deterministic).

    Seeds are canonicalized first; in oBurn-bar, seeds with a trivial
    character are 0 and contribute nothing.
    """
    seeds = list(seeds)
    if n is None:
        if not seeds:
            raise InvalidSymbol("cannot infer the grading of an empty seed list")
        n = seeds[0].n
    u = SymbolUniverse(n, presentation)
    queue: deque[OSymbol] = deque()
    for s in sorted({c for c in (_canonical(s, presentation) for s in seeds) if c is not None},
                    key=OSymbol.sort_key):
        if s.n != n:
            raise InvalidSymbol(f"seed {s} has grading {s.n}, expected {n}")
        u._add(s, None)
        queue.append(s)
    _check_size(u, max_size)
    while queue:
        sym = queue.popleft()
        for rel in relation_instances(sym, presentation):
            for t in rel.row().symbols():
                if u._add(t, rel.id):
                    _check_size(u, max_size)
                    queue.append(t)
    return u


def _check_size(u: SymbolUniverse, max_size: int):
    if len(u) > max_size:
        raise UniverseOverflow(max_size)


def family_seeds(groups: Iterable[FinAbGroup], n: int, base: str = "k", trdeg: int = 0,
                 presentation: str = OBAR) -> list[OSymbol]:
    """Every canonical symbol of grading ``n`` over ``base(t_1..t_r)`` whose
    character group is one of ``groups`` or a quotient of one."""
    gs = set()
    for a in groups:
        gs |= isomorphism_types_of_quotients(a)
    out = set()
    for a in sorted(gs, key=lambda g: (g.order, g.invariants)):
        nonzero = [x for x in a.elements() if not x.is_zero]
        for m in range(0, n - trdeg + 1):
            f = FieldLabel(base, trdeg, n - trdeg - m)
            for combo in itertools.combinations_with_replacement(nonzero, m):
                try:
                    sym = OSymbol(f, a, combo, n)
                except InvalidSymbol:
                    continue  # does not generate
                c = _canonical(sym, presentation)
                if c is not None:
                    out.add(c)
    return sorted(out, key=OSymbol.sort_key)


# ---------------------------------------------------------------------------
# integer row echelon with provenance


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _axpy(dst: dict, k: int, src: Mapping):
    """dst += k * src, dropping zeros."""
    if not k:
        return
    for key, v in src.items():
        w = dst.get(key, 0) + k * v
        if w:
            dst[key] = w
        else:
            dst.pop(key, None)


def _lincomb(a: int, x: Mapping, b: int, y: Mapping) -> dict:
    out: dict = {}
    _axpy(out, a, x)
    _axpy(out, b, y)
    return out


class _Echelon:
    """Integer row echelon basis; ``rows[c]`` has leading column ``c`` with a
    positive leading entry, and ``combos[c]`` records it as a combination of
    input rows."""

    def __init__(self):
        self.rows: dict[int, dict[int, int]] = {}
        self.combos: dict[int, dict[str, int]] = {}

    def insert(self, vec: dict[int, int], combo: dict[str, int]):
        vec, combo = dict(vec), dict(combo)
        while vec:
            c = min(vec)
            if c not in self.rows:
                if vec[c] < 0:
                    vec = {k: -v for k, v in vec.items()}
                    combo = {k: -v for k, v in combo.items()}
                self.rows[c], self.combos[c] = vec, combo
                return
            p, pc = self.rows[c], self.combos[c]
            a, b = vec[c], p[c]
            if a % b == 0:
                q = a // b
                _axpy(vec, -q, p)
                _axpy(combo, -q, pc)
                continue
            g, x, y = _xgcd(a, b)
            if g < 0:
                g, x, y = -g, -x, -y
            new_p = _lincomb(x, vec, y, p)
            new_pc = _lincomb(x, combo, y, pc)
            vec = _lincomb(b // g, vec, -(a // g), p)
            combo = _lincomb(b // g, combo, -(a // g), pc)
            self.rows[c], self.combos[c] = new_p, new_pc

    def reduce(self):
        """Bring the basis to Hermite normal form (entries above each pivot
        reduced into ``[0, pivot)``)."""
        cols = sorted(self.rows)
        for idx, c in enumerate(cols):
            piv, pc = self.rows[c], self.combos[c]
            d = piv[c]
            for c2 in cols[:idx]:
                row = self.rows[c2]
                v = row.get(c, 0)
                q = v // d
                if q:
                    _axpy(row, -q, piv)
                    _axpy(self.combos[c2], -q, pc)

    def hnf(self) -> list[dict[int, int]]:
        return [dict(self.rows[c]) for c in sorted(self.rows)]


@dataclass(frozen=True)
class Witness:
    """An integer functional ``g`` with ``g . row == 0 (mod modulus)`` on every
    relation row (exactly, when ``modulus == 0``) but not on the element."""

    functional: dict[int, int]
    modulus: int

    def evaluate(self, vec: Mapping[int, int]) -> int:
        v = sum(self.functional.get(k, 0) * c for k, c in vec.items())
        return v % self.modulus if self.modulus else v


@dataclass
class RelationLattice:
    """Row lattice of all relation instances over a closed universe."""

    universe: SymbolUniverse
    relations: list[RelationInstance]
    vectors: list[dict[int, int]]
    _ech: _Echelon

    @property
    def n(self) -> int:
        return self.universe.n

    @property
    def presentation(self) -> str:
        return self.universe.presentation

    @property
    def hnf(self) -> list[dict[int, int]]:
        return self._ech.hnf()

    @property
    def rank(self) -> int:
        return len(self._ech.rows)

    def vector(self, e: BurnElement) -> dict[int, int]:
        """Coordinates of (the normal form of) ``e`` in the universe."""
        if e and e.n != self.n:
            raise InvalidSymbol(f"element has grading {e.n}, lattice has {self.n}")
        out: dict[int, int] = {}
        for s, c in normalize_element(e, self.presentation):
            if s not in self.universe.index:
                raise SymbolOutsideUniverse(f"{s} is not in the closed universe")
            out[self.universe.index[s]] = c
        return out


def relation_vectors(u: SymbolUniverse) -> RelationLattice:
    """Assemble one row per relation instance and reduce to Hermite form."""
    relations, vectors = [], []
    ech = _Echelon()
    for sym in u.symbols:
        for rel in relation_instances(sym, u.presentation):
            vec = {}
            for s, c in rel.row():
                if s not in u.index:
                    raise SymbolOutsideUniverse(f"universe not closed: {s} missing")
                vec[u.index[s]] = c
            if not vec:
                continue
            relations.append(rel)
            vectors.append(vec)
            ech.insert(vec, {rel.id: 1})
    ech.reduce()
    return RelationLattice(u, relations, vectors, ech)


def build_lattice(seeds: Iterable[OSymbol], n: int | None = None, presentation: str = OBAR,
                  max_size: int = DEFAULT_MAX_SIZE) -> RelationLattice:
    return relation_vectors(close_universe(seeds, n, presentation, max_size))


@dataclass(frozen=True)
class ZeroVerdict:
    is_zero: bool
    certificate: dict[str, int] | None = None
    witness: Witness | None = None

    def __bool__(self):
        return self.is_zero


def is_zero(e: BurnElement, lat: RelationLattice) -> ZeroVerdict:
    """Exact lattice membership of ``e`` with a certificate or a witness."""
    target = lat.vector(e)
    rows, combos = lat._ech.rows, lat._ech.combos
    residue = dict(target)
    cert: dict[str, int] = {}
    while residue:
        c = min(residue)
        if c not in rows or residue[c] % rows[c][c]:
            return ZeroVerdict(False, witness=_witness(target, rows))
        q = residue[c] // rows[c][c]
        _axpy(residue, -q, rows[c])
        _axpy(cert, q, combos[c])
    return ZeroVerdict(True, certificate=cert)


def _witness(target: Mapping[int, int], rows: Mapping[int, Mapping[int, int]]) -> Witness:
    cols = sorted(rows)
    # rational elimination against the echelon basis
    res = {k: Fraction(v) for k, v in target.items()}
    lam: dict[int, Fraction] = {}
    for c in cols:
        v = res.get(c, 0)
        if v:
            q = v / rows[c][c]
            lam[c] = q
            for k, w in rows[c].items():
                res[k] = res.get(k, 0) - q * w
    res = {k: v for k, v in res.items() if v}
    if res:
        free = min(res)
        g = _annihilator(rows, cols, {free: Fraction(1)})
        return Witness(_integral(g)[0], 0)
    # in the rational span: some coefficient is fractional
    bad = next(c for c in cols if lam.get(c, 0).denominator != 1)
    h = _dual_vector(rows, cols, bad)
    g, scale = _integral(h)
    return Witness(g, scale)


def _annihilator(rows, cols, seed: dict[int, Fraction]) -> dict[int, Fraction]:
    """Extend ``seed`` (on non-pivot columns) to a functional vanishing on all rows."""
    g = dict(seed)
    for c in sorted(cols, reverse=True):
        s = sum(v * g.get(k, 0) for k, v in rows[c].items() if k != c)
        g[c] = -Fraction(s) / rows[c][c]
    return {k: v for k, v in g.items() if v}


def _dual_vector(rows, cols, target_col) -> dict[int, Fraction]:
    """Functional on pivot columns with value 1 on the ``target_col`` row and
    0 on the others."""
    g: dict[int, Fraction] = {}
    for c in sorted(cols, reverse=True):
        want = Fraction(1 if c == target_col else 0)
        s = sum(v * g.get(k, 0) for k, v in rows[c].items() if k != c)
        g[c] = (want - s) / rows[c][c]
    return {k: v for k, v in g.items() if v}


def _integral(g: Mapping[int, Fraction]) -> tuple[dict[int, int], int]:
    scale = 1
    for v in g.values():
        scale = lcm(scale, v.denominator)
    return {k: int(v * scale) for k, v in g.items()}, scale


def verify_witness(w: Witness, e: BurnElement, lat: RelationLattice) -> bool:
    if any(w.evaluate(v) for v in lat.vectors):
        return False
    return w.evaluate(lat.vector(e)) != 0


def is_equal(e1: BurnElement, e2: BurnElement, lat: RelationLattice) -> ZeroVerdict:
    return is_zero(e1 - e2, lat)


def saturated_seeds(e: BurnElement, presentation: str = OBAR) -> list[OSymbol]:
    """Support of ``e`` plus every canonical symbol of its grading over the
    same base fields whose group is a quotient of a group already present.

    Closing only the support follows relations downwards; this also brings in
    relations whose left-hand side sits above the support (for instance
    ``(K, Z/2, (1,1))`` above ``(K(t), Z/2, (1))``).
    """
    support = normalize_element(e, presentation).symbols()
    seeds = set(support)
    bases: dict[tuple[str, int], set[FinAbGroup]] = {}
    for sym in support:
        bases.setdefault((sym.field.base, sym.field.trdeg), set()).add(sym.A)
    for (base, trdeg), groups in sorted(bases.items()):
        seeds.update(family_seeds(sorted(groups), e.n, base, trdeg, presentation))
    return sorted(seeds, key=OSymbol.sort_key)


def decide_zero(e: BurnElement, presentation: str = OBAR, max_size: int = DEFAULT_MAX_SIZE,
                saturate: bool = True) -> tuple[ZeroVerdict, RelationLattice]:
    """Close a universe around ``e`` and decide membership.

    A ``True`` verdict is always backed by a replayable certificate.  A
    ``False`` verdict is exact for the sub-presentation on the closed
    universe; ``saturate`` enlarges that universe (see :func:`saturated_seeds`).
    """
    seeds = saturated_seeds(e, presentation) if saturate else normalize_element(e, presentation).symbols()
    lat = build_lattice(seeds, e.n, presentation, max_size)
    return is_zero(e, lat), lat


def decide_equal(e1: BurnElement, e2: BurnElement, presentation: str = OBAR,
                 max_size: int = DEFAULT_MAX_SIZE, saturate: bool = True) -> tuple[ZeroVerdict, RelationLattice]:
    n = e1.n if e1 else e2.n
    d = e1 - e2 if (e1 or e2) else BurnElement.zero(n)
    return decide_zero(d, presentation, max_size, saturate)
