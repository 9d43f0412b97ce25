"""Burnside classes of orbifolds from stabilizer-stratification data.

The stratification itself is input: each stabilizer component is given by a
label (a field label for its coarse function field, or a stack label), the
character group ``A`` of its generic stabilizer and the characters ``beta`` of
its normal bundle at the generic point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Hashable, Mapping

from .abelian import FinAbGroup, GroupElement, generates, quotient
from .errors import CharacterOutsideGroup, InvalidComponent, MissingIncidenceData
from .symbols import (
    BurnElement,
    CSymbol,
    FieldLabel,
    OSymbol,
    StackLabel,
    element_sum,
    normalize_cburn,
    normalize_obar,
)


@dataclass(frozen=True)
class StabilizerComponentData:
    """One stabilizer component.

    ``divisors`` optionally records which boundary divisors contain the
    component; it is only consulted by :func:`class_open_punctured_form`.
    """

    label: FieldLabel | StackLabel
    A: FinAbGroup
    beta: tuple[GroupElement, ...]
    divisors: frozenset | None = None

    def __post_init__(self):
        object.__setattr__(self, "beta", _members(self.A, self.beta))
        if isinstance(self.label, StackLabel):
            if self.label.stabilizer != self.A:
                raise InvalidComponent(f"label {self.label} has stabilizer {self.label.stabilizer}, not {self.A}")
        if self.divisors is not None:
            object.__setattr__(self, "divisors", frozenset(self.divisors))

    @property
    def field(self) -> FieldLabel:
        return self.label if isinstance(self.label, FieldLabel) else self.label.field

    @property
    def dim(self) -> int:
        return self.label.total if isinstance(self.label, FieldLabel) else self.label.dim

    def stack(self) -> StackLabel:
        if isinstance(self.label, StackLabel):
            return self.label
        return StackLabel.atomic(str(self.label), self.label.total, self.A, self.label)


def _members(a: FinAbGroup, chars) -> tuple[GroupElement, ...]:
    out = []
    for c in chars:
        if isinstance(c, GroupElement):
            if c.parent != a:
                raise CharacterOutsideGroup(f"{c!r} is not a character of {a}")
            out.append(c)
        else:
            coords = tuple(c) if isinstance(c, (list, tuple)) else (c,)
            if len(coords) != a.rank:
                raise CharacterOutsideGroup(f"{list(coords)} is not a character of {a}")
            out.append(a.element(coords))
    return tuple(out)


@dataclass(frozen=True)
class OrbifoldDescription:
    n: int
    components: tuple[StabilizerComponentData, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    def generic_components(self) -> list[StabilizerComponentData]:
        return [c for c in self.components if c.A.is_trivial and c.dim == self.n]


def _check_orbifold_component(c: StabilizerComponentData, n: int, extra: int = 0):
    if c.dim + len(c.beta) + extra != n:
        raise InvalidComponent(
            f"component {c.label}: dim {c.dim} + |beta| {len(c.beta)} + {extra} != {n}")


def _check_symbol_component(c: StabilizerComponentData, n: int):
    _check_orbifold_component(c, n)
    if any(x.is_zero for x in c.beta):
        raise InvalidComponent(f"component {c.label} has a trivial normal character")
    if not generates(c.A, c.beta):
        raise InvalidComponent(f"normal characters of {c.label} do not generate {c.A}")


def class_of_orbifold(desc: OrbifoldDescription) -> BurnElement:
    """``[X] = sum_K (K, beta_K(X))`` in cBurn."""
    terms = []
    for c in desc.components:
        _check_symbol_component(c, desc.n)
        terms.append((normalize_cburn(CSymbol(c.stack(), c.beta, desc.n)), 1))
    return BurnElement(desc.n, terms)


def naive_class_open(desc: OrbifoldDescription) -> BurnElement:
    """``[U]^naive = sum_K (K, beta_K(U))`` in oBurn-bar."""
    parts = []
    for c in desc.components:
        _check_symbol_component(c, desc.n)
        parts.append(normalize_obar(OSymbol(c.field, c.A, c.beta, desc.n)))
    return element_sum(desc.n, parts)


def _per_component_chars(base: OrbifoldDescription, chars) -> list[tuple[GroupElement, ...]]:
    chars = list(chars)
    if len(chars) != len(base.components):
        raise InvalidComponent(f"need one character list per component, got {len(chars)}")
    return [_members(c.A, alpha) for c, alpha in zip(base.components, chars)]


def line_bundle_sum_naive_class(base: OrbifoldDescription, chars) -> BurnElement:
    """Naive class of ``L_1 + ... + L_r`` over ``base``; ``chars[k]`` lists the
    characters of the ``L_i`` at the generic point of component ``k``.

    Each component and each ``I`` contributes ``(K(t_1..t_|I|), A/<a_i>_I,
    (images of a_j for j not in I, images of beta))``; terms with a trivial
    image are not components and are dropped.
    """
    per = _per_component_chars(base, chars)
    parts = []
    for c, alpha in zip(base.components, per):
        _check_orbifold_component(c, base.n, len(alpha))
        for r in range(len(alpha) + 1):
            for subset in itertools.combinations(range(len(alpha)), r):
                q, proj = quotient(c.A, [alpha[i] for i in subset])
                img = tuple(proj(x) for k, x in enumerate(alpha) if k not in subset)
                img += tuple(proj(x) for x in c.beta)
                parts.append(normalize_obar(OSymbol(c.field.adjoin(r), q, img, base.n)))
    return element_sum(base.n, parts)


def punctured_bundle_class(base: OrbifoldDescription, chars) -> BurnElement:
    """Naive class of the complement of the coordinate hyperplanes in
    ``L_1 + ... + L_r``: one term ``(K(t_1..t_r), A/<alpha>, images of beta)``
    per component whose normal characters all survive in ``A/<alpha>``."""
    per = _per_component_chars(base, chars)
    parts = []
    for c, alpha in zip(base.components, per):
        _check_orbifold_component(c, base.n, len(alpha))
        q, proj = quotient(c.A, list(alpha))
        img = tuple(proj(x) for x in c.beta)
        parts.append(normalize_obar(OSymbol(c.field.adjoin(len(alpha)), q, img, base.n)))
    return element_sum(base.n, parts)


# ---------------------------------------------------------------------------
# complements of snc divisors


@dataclass(frozen=True)
class IncidenceEntry:
    """A stabilizer component of ``D_I`` with the characters of the normal
    bundles of ``D_i`` (``i`` in ``I``, ascending) at its generic point."""

    component: StabilizerComponentData
    normal: tuple[GroupElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "normal", _members(self.component.A, self.normal))


@dataclass(frozen=True)
class SncOpenDescription:
    """``U = X minus (D_1 cup ... cup D_m)``.

    ``per_I`` maps each nonempty frozenset ``I`` of divisor ids to the
    components of ``D_I``; absent or empty entries are empty intersections.
    """

    ambient: OrbifoldDescription
    divisor_ids: tuple[Hashable, ...]
    per_I: Mapping[frozenset, tuple[IncidenceEntry, ...]] = dc_field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.ambient.n

    def validate(self) -> None:
        ids = set(self.divisor_ids)
        for d in self.divisor_ids:
            if not self.per_I.get(frozenset([d])):
                raise MissingIncidenceData(f"no component data for divisor {d}")
        for subset, entries in self.per_I.items():
            if not subset or not subset <= ids:
                raise MissingIncidenceData(f"incidence {sorted(map(str, subset))} names unknown divisors")
            if not entries:
                continue
            for r in range(1, len(subset)):
                for sub in itertools.combinations(sorted(subset, key=str), r):
                    if not self.per_I.get(frozenset(sub)):
                        raise MissingIncidenceData(
                            f"{sorted(map(str, subset))} is nonempty but {sorted(map(str, sub))} has no data")
            for e in entries:
                if len(e.normal) != len(subset):
                    raise MissingIncidenceData(
                        f"entry {e.component.label} of {sorted(map(str, subset))} needs {len(subset)} normal characters")

    def strata(self):
        """Nonempty ``(I, entries)`` pairs in a deterministic order."""
        keys = sorted((k for k, v in self.per_I.items() if v), key=lambda s: (len(s), sorted(map(str, s))))
        return [(k, self.per_I[k]) for k in keys]


def _sign(subset) -> int:
    return -1 if len(subset) % 2 else 1


def class_open(desc: SncOpenDescription) -> BurnElement:
    """``[U] = [X] + sum_I (-1)^|I| [N_{D_I/X}]^naive``."""
    desc.validate()
    parts = [naive_class_open(desc.ambient)]
    for subset, entries in desc.strata():
        base = OrbifoldDescription(desc.n, tuple(e.component for e in entries))
        parts.append(line_bundle_sum_naive_class(base, [e.normal for e in entries]) * _sign(subset))
    return element_sum(desc.n, parts)


def class_open_punctured_form(desc: SncOpenDescription) -> BurnElement:
    """``[U]^naive + sum_I (-1)^|I| [N°_{D_I/X}]^naive``.

    A component without ``divisors`` is taken to lie on no divisor (ambient)
    or on exactly the divisors of its stratum (entries of ``D_I``).
    """
    desc.validate()
    inside_u = [c for c in desc.ambient.components if not (c.divisors or frozenset())]
    parts = [naive_class_open(OrbifoldDescription(desc.n, tuple(inside_u)))]
    for subset, entries in desc.strata():
        open_entries = [e for e in entries
                        if (e.component.divisors if e.component.divisors is not None else subset) == subset]
        base = OrbifoldDescription(desc.n, tuple(e.component for e in open_entries))
        parts.append(punctured_bundle_class(base, [e.normal for e in open_entries]) * _sign(subset))
    return element_sum(desc.n, parts)
