"""Comparison maps between the Burnside-type groups and the specialization map."""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .abelian import FinAbGroup, GroupElement, quotient
from .errors import InvalidComponent, InvalidSymbol, MissingIncidenceData
from .symbols import (
    BurnElement,
    CSymbol,
    FieldLabel,
    OSymbol,
    StackLabel,
    element_sum,
    normalize_obar,
    normalize_oburn,
)


def _subsets(m: int):
    for r in range(m + 1):
        yield from itertools.combinations(range(m), r)


def kappa_bar(sym: OSymbol) -> BurnElement:
    """``sum_I (-1)^|I| (K, A/<a_i : i in I>, images of all of S)`` in oBurn."""
    terms = []
    for subset in _subsets(sym.m):
        q, proj = quotient(sym.A, [sym.S[i] for i in subset])
        img = tuple(proj(x) for x in sym.S)
        terms.append((normalize_oburn(OSymbol(sym.field, q, img, sym.n)), (-1) ** len(subset)))
    return BurnElement(sym.n, terms)


def kappa_bar_inverse(sym: OSymbol) -> BurnElement:
    """``sum_I (K(t_1..t_|I|), A/<a_i : i in I>, (images of a_j)_{j not in I})``
    in oBurn-bar."""
    parts = []
    for subset in _subsets(sym.m):
        q, proj = quotient(sym.A, [sym.S[i] for i in subset])
        img = tuple(proj(x) for k, x in enumerate(sym.S) if k not in subset)
        parts.append(normalize_obar(OSymbol(sym.field.adjoin(len(subset)), q, img, sym.n)))
    return element_sum(sym.n, parts)


def _linear(fn, e: BurnElement) -> BurnElement:
    return element_sum(e.n, (fn(s) * c for s, c in e))


def kappa_bar_element(e: BurnElement) -> BurnElement:
    return _linear(kappa_bar, e)


def kappa_bar_inverse_element(e: BurnElement) -> BurnElement:
    return _linear(kappa_bar_inverse, e)


# ---------------------------------------------------------------------------
# classical and Grothendieck shadows


class FreeFieldClass:
    """Integer combination of field labels (an element of classical Burn_n, or
    the formal free group used for the Grothendieck shadow)."""

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Iterable[tuple[FieldLabel, int]] = ()):
        acc: dict[FieldLabel, int] = {}
        for f, c in terms:
            acc[f] = acc.get(f, 0) + c
        self.n = n
        self._terms = {f: c for f, c in acc.items() if c}

    def items(self):
        return sorted(self._terms.items())

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, FreeFieldClass):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other):
        return FreeFieldClass(self.n, list(self._terms.items()) + list(other._terms.items()))

    def __repr__(self):
        return f"FreeFieldClass({self.n}, {{{', '.join(f'[{f}]: {c}' for f, c in self.items())}}})"

    def to_json(self) -> list:
        return [{"field": f.to_json(), "coeff": c} for f, c in self.items()]


def to_classical(e: BurnElement) -> FreeFieldClass:
    """``(K, A, S) -> [K(t_1..t_|S|)]``."""
    return FreeFieldClass(e.n, ((s.field.adjoin(s.m), c) for s, c in e))


def to_grothendieck(e: BurnElement) -> FreeFieldClass:
    """Keep only the symbols with empty character sequence."""
    out = []
    for s, c in e:
        if s.m:
            continue
        out.append((s.field if isinstance(s, OSymbol) else s.stack.field, c))
    return FreeFieldClass(e.n, out)


# ---------------------------------------------------------------------------
# equivariant symbols


@dataclass(frozen=True)
class EquivariantSymbol:
    """``(H, Z acting on K, beta)``; the action on ``K`` is an opaque tag."""

    H_chars: FinAbGroup
    field: FieldLabel
    beta: tuple[GroupElement, ...]
    n: int
    action: str = "trivial"


class LabelRegistry:
    """Hands out one atomic stack label per (field, action, H); single writer."""

    def __init__(self):
        self._labels: dict[tuple, StackLabel] = {}
        self._lock = threading.Lock()

    @staticmethod
    def _name(field: FieldLabel, action: str, h: FinAbGroup) -> str:
        core = str(field) if action == "trivial" else f"{field}<{action}>"
        if h.is_trivial:
            return core
        return f"B({h})" if core == "k" else f"{core}xB({h})"

    def label_for(self, field: FieldLabel, h: FinAbGroup, action: str = "trivial") -> StackLabel:
        key = (field, action, h)
        with self._lock:
            if key not in self._labels:
                self._labels[key] = StackLabel.atomic(self._name(field, action, h), field.total, h, field)
            return self._labels[key]

    def labels(self) -> dict[tuple, StackLabel]:
        with self._lock:
            return dict(self._labels)


def from_equivariant(sym: EquivariantSymbol, registry: LabelRegistry) -> CSymbol:
    stack = registry.label_for(sym.field, sym.H_chars, sym.action)
    try:
        return CSymbol(stack, sym.beta, sym.n)
    except InvalidSymbol as exc:
        raise InvalidComponent(str(exc)) from exc


# ---------------------------------------------------------------------------
# specialization


@dataclass(frozen=True)
class CoverEntry:
    """One stabilizer component of a punctured normal bundle over ``D_I``:
    the label of its intersection with the cover, with its character data."""

    label: FieldLabel | StackLabel
    A: FinAbGroup
    beta: tuple[GroupElement, ...]

    @property
    def field(self) -> FieldLabel:
        return self.label if isinstance(self.label, FieldLabel) else self.label.field


@dataclass(frozen=True)
class ModelDescription:
    """Special-fiber data of a regular model.

    ``components`` maps component ids to multiplicities; ``incidences`` maps
    each nonempty index set ``I`` (as a frozenset) to its cover entries.  An
    index set that is absent, or present with no entries, is an empty
    intersection; every singleton must be present.
    """

    components: Mapping[str, int]
    incidences: Mapping[frozenset, Sequence[CoverEntry]]

    def validate(self) -> None:
        for cid, d in self.components.items():
            if d < 1:
                raise InvalidComponent(f"multiplicity of {cid} must be positive")
        ids = set(self.components)
        for cid in sorted(ids):
            if frozenset([cid]) not in self.incidences:
                raise MissingIncidenceData(f"no incidence data for component {cid}")
        for subset, entries in self.incidences.items():
            if not subset or not subset <= ids:
                raise MissingIncidenceData(f"incidence {sorted(subset)} names unknown components")
            if not entries:
                continue
            for r in range(1, len(subset)):
                for sub in itertools.combinations(sorted(subset), r):
                    if not self.incidences.get(frozenset(sub)):
                        raise MissingIncidenceData(
                            f"{sorted(subset)} is nonempty but {list(sub)} has no data")


def specialize(model: ModelDescription, n: int) -> BurnElement:
    """``sum_{I != {}} (-1)^(|I|-1) sum_K (K cap omega_I^-1(1), beta_K)`` in oBurn-bar."""
    model.validate()
    parts = []
    for subset in sorted(model.incidences, key=lambda s: (len(s), sorted(s))):
        sign = (-1) ** (len(subset) - 1)
        for entry in model.incidences[subset]:
            sym = OSymbol(entry.field, entry.A, entry.beta, n)
            parts.append(normalize_obar(sym) * sign)
    return element_sum(n, parts)
