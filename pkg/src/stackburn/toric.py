"""Stacky fans over a free lattice ``N = Z^d``.

A stacky fan is a simplicial fan given by index sets of rays together with a
(not necessarily primitive) generator on each ray.  Scaling a generator is a
root operation; the stacky star subdivision is the blow-up.  Chart
stabilizers are read off as ``G_sigma = N_sigma / <generators of sigma>``,
always through their character groups.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .abelian import FinAbGroup, GroupElement, cokernel, determinant, smith_normal_form
from .classes import (
    IncidenceEntry,
    OrbifoldDescription,
    SncOpenDescription,
    StabilizerComponentData,
    class_of_orbifold,
    naive_class_open,
)
from .errors import (
    ConeNotInFan,
    IndexOutOfRange,
    InfiniteStabilizer,
    InvalidFan,
    NonDivisorialInput,
    PreconditionFailed,
    RayNotInteriorToAnyCone,
)
from .symbols import BurnElement, FieldLabel, StackLabel

Cone = tuple[int, ...]


@dataclass(frozen=True)
class StackyFan:
    rank: int
    rays: tuple[tuple[int, ...], ...]
    cones: tuple[Cone, ...]

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(self, "cones", tuple(sorted({tuple(sorted(c)) for c in self.cones},
                                                       key=lambda c: (len(c), c))))

    @classmethod
    def complete(cls, rank: int, rays, maximal: Iterable[Iterable[int]]) -> StackyFan:
        """Fan generated by ``maximal`` cones and all their faces."""
        cones = set()
        for m in maximal:
            m = tuple(sorted(m))
            for r in range(len(m) + 1):
                cones.update(itertools.combinations(m, r))
        return cls(rank, rays, tuple(cones))

    def canonical(self) -> StackyFan:
        """Rays sorted lexicographically, cones re-indexed and sorted."""
        order = sorted(range(len(self.rays)), key=lambda i: self.rays[i])
        new_index = {old: new for new, old in enumerate(order)}
        return StackyFan(self.rank, tuple(self.rays[i] for i in order),
                         tuple(tuple(new_index[i] for i in c) for c in self.cones))

    def same_as(self, other: StackyFan) -> bool:
        return self.canonical() == other.canonical()

    def maximal_cones(self) -> list[Cone]:
        cs = set(self.cones)
        return [c for c in self.cones
                if not any(set(c) < set(d) for d in cs)]

    def ray_index(self, vec) -> int:
        vec = tuple(vec)
        try:
            return self.rays.index(vec)
        except ValueError:
            raise IndexOutOfRange(f"{list(vec)} is not a ray generator") from None

    def to_json(self) -> dict:
        return {"rank": self.rank, "rays": [list(r) for r in self.rays],
                "cones": [list(c) for c in self.cones]}

    @classmethod
    def from_json(cls, doc) -> StackyFan:
        if doc.get("torsion"):
            raise InvalidFan("only free lattices N = Z^d are supported")
        return cls(doc["rank"], tuple(tuple(r) for r in doc["rays"]),
                   tuple(tuple(c) for c in doc["cones"]))


# ---------------------------------------------------------------------------
# exact linear algebra helpers


def _rank(vectors: Sequence[Sequence[int]]) -> int:
    if not vectors:
        return 0
    d = smith_normal_form([list(col) for col in zip(*vectors)]).diagonal
    return sum(1 for x in d if x)


def _solve(rays: Sequence[Sequence[int]], v: Sequence[int]) -> list[Fraction] | None:
    """Coefficients ``lam`` with ``sum lam_i rays_i = v`` (rays independent), or None."""
    k, d = len(rays), len(v)
    rows = [[Fraction(rays[j][i]) for j in range(k)] + [Fraction(v[i])] for i in range(d)]
    piv_cols, r = [], 0
    for c in range(k):
        p = next((i for i in range(r, d) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        lead = rows[r][c]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(d):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][k] for i in range(r, d)):
        return None
    lam = [Fraction(0)] * k
    for i, c in enumerate(piv_cols):
        lam[c] = rows[i][k]
    return lam


def _in_relint(fan: StackyFan, cone: Cone, v) -> bool:
    if not cone:
        return not any(v)
    lam = _solve([fan.rays[i] for i in cone], v)
    return lam is not None and all(x > 0 for x in lam)


# ---------------------------------------------------------------------------
# validation


def validate(fan: StackyFan) -> list[str]:
    """Diagnostics for every violated invariant (empty list means valid)."""
    out = []
    for i, r in enumerate(fan.rays):
        if len(r) != fan.rank:
            out.append(f"ray {i} has length {len(r)}, expected {fan.rank}")
        elif not any(r):
            out.append(f"ray {i} is zero")
    if out:
        return out
    for i, j in itertools.combinations(range(len(fan.rays)), 2):
        lam = _solve([fan.rays[i]], fan.rays[j])
        if lam is not None and lam[0] > 0:
            out.append(f"rays {i} and {j} lie on the same half-line")
    cones = set(fan.cones)
    for c in fan.cones:
        if any(not 0 <= i < len(fan.rays) for i in c):
            out.append(f"cone {list(c)} references a missing ray")
            continue
        if _rank([fan.rays[i] for i in c]) < len(c):
            out.append(f"cone {list(c)} is not simplicial")
        for f in itertools.combinations(c, len(c) - 1) if c else ():
            if f not in cones:
                out.append(f"cone {list(c)} is not face-closed: face {list(f)} missing")
    return out


def _require_valid(fan: StackyFan):
    diags = validate(fan)
    if diags:
        if any("not simplicial" in d for d in diags):
            raise InfiniteStabilizer("; ".join(diags))
        raise InvalidFan("; ".join(diags))


# ---------------------------------------------------------------------------
# stabilizers


@dataclass(frozen=True)
class ConeStabilizer:
    cone: Cone
    A: FinAbGroup
    coord_chars: tuple[GroupElement, ...]


def cone_stabilizer(fan: StackyFan, cone: Iterable[int]) -> ConeStabilizer:
    """Character group of ``G_sigma`` and the characters of the chart
    coordinates, one per ray of ``sigma`` in ascending index order."""
    cone = tuple(sorted(cone))
    if cone not in set(fan.cones):
        raise ConeNotInFan(f"{list(cone)} is not a cone of the fan")
    return _stabilizer(fan.rays, cone)


def _stabilizer(rays, cone: Cone) -> ConeStabilizer:
    if not cone:
        return ConeStabilizer(cone, FinAbGroup(()), ())
    k = len(cone)
    r = [[rays[i][row] for i in cone] for row in range(len(rays[cone[0]]))]
    snf = smith_normal_form(r)
    if sum(1 for x in snf.diagonal if x) < k:
        raise InfiniteStabilizer(f"rays of cone {list(cone)} are dependent")
    # rows of U.R are the rays in a basis of the saturation of their span
    ur = [[sum(snf.U[a][b] * r[b][c] for b in range(len(r))) for c in range(k)] for a in range(k)]
    # column c of ur holds the coordinates of ray c; characters of G_sigma are
    # Z^k (one coordinate per ray) modulo the rows of ur
    a, proj = cokernel([list(col) for col in zip(*ur)], k)
    chars = tuple(proj([1 if j == i else 0 for j in range(k)]) for i in range(k))
    return ConeStabilizer(cone, a, chars)


def stabilizer_order_by_det(fan: StackyFan, cone: Iterable[int]) -> int:
    """``|G_sigma|`` as the gcd of maximal minors of the ray matrix (the index of
    the ray sublattice in its saturation); an independent cross-check."""
    cone = tuple(sorted(cone))
    if not cone:
        return 1
    g = 0
    vecs = [fan.rays[i] for i in cone]
    for rows in itertools.combinations(range(fan.rank), len(cone)):
        g = gcd(g, determinant([[v[r] for v in vecs] for r in rows]))
    return abs(g)


# ---------------------------------------------------------------------------
# operations on fans


def stacky_star_subdivision(fan: StackyFan, beta: Sequence[int]) -> StackyFan:
    """Add the ray generated by ``beta`` and star-subdivide the minimal cone
    containing it in its relative interior."""
    beta = tuple(int(x) for x in beta)
    if len(beta) != fan.rank:
        raise RayNotInteriorToAnyCone(f"{list(beta)} does not live in Z^{fan.rank}")
    tau = next((c for c in fan.cones if _in_relint(fan, c, beta)), None)
    if tau is None or len(tau) < 2:
        raise RayNotInteriorToAnyCone(f"{list(beta)} is not interior to a cone of dimension >= 2")
    new = len(fan.rays)
    cones = set(fan.cones)
    ts = set(tau)
    out = [c for c in fan.cones if not ts <= set(c)]
    for rho in fan.cones:
        if ts <= set(rho):
            continue
        if tuple(sorted(set(rho) | ts)) in cones:
            out.append(tuple(rho) + (new,))
    return StackyFan(fan.rank, fan.rays + (beta,), tuple(out))


def root_ray(fan: StackyFan, i: int, r: int) -> StackyFan:
    """Replace ``beta_i`` by ``r * beta_i``."""
    if not 0 <= i < len(fan.rays):
        raise IndexOutOfRange(f"no ray {i}")
    if r < 1:
        raise IndexOutOfRange("root order must be at least 1")
    rays = list(fan.rays)
    rays[i] = tuple(r * x for x in rays[i])
    return StackyFan(fan.rank, tuple(rays), fan.cones)


def unroot_ray(fan: StackyFan, i: int, r: int) -> StackyFan:
    """Inverse of :func:`root_ray`; ``beta_i`` must be divisible by ``r``."""
    if not 0 <= i < len(fan.rays):
        raise IndexOutOfRange(f"no ray {i}")
    if r < 1 or any(x % r for x in fan.rays[i]):
        raise PreconditionFailed(f"ray {list(fan.rays[i])} is not divisible by {r}")
    rays = list(fan.rays)
    rays[i] = tuple(x // r for x in rays[i])
    return StackyFan(fan.rank, tuple(rays), fan.cones)


def stacky_star_contraction(fan: StackyFan, i: int) -> StackyFan:
    """Inverse of a stacky star subdivision: remove ray ``i``, which must have
    been created by subdividing some cone at ``beta_i``."""
    if not 0 <= i < len(fan.rays):
        raise IndexOutOfRange(f"no ray {i}")
    star = [c for c in fan.cones if i in c]
    link = sorted({j for c in star for j in c if j != i})
    keep = [j for j in range(len(fan.rays)) if j != i]
    renum = {old: new for new, old in enumerate(keep)}
    for size in range(2, len(link) + 1):
        for tau in itertools.combinations(link, size):
            cones = {c for c in fan.cones if i not in c}
            for c in star:
                cones.add(tuple(sorted((set(c) - {i}) | set(tau))))
            closed = set()
            for c in cones:
                for r in range(len(c) + 1):
                    closed.update(itertools.combinations(c, r))
            cand = StackyFan(fan.rank, tuple(fan.rays[j] for j in keep),
                             tuple(tuple(renum[j] for j in c) for c in closed))
            if validate(cand):
                continue
            try:
                back = stacky_star_subdivision(cand, fan.rays[i])
            except RayNotInteriorToAnyCone:
                continue
            if back.same_as(fan):
                return cand
    raise PreconditionFailed(f"ray {i} is not the exceptional ray of a star subdivision")


# ---------------------------------------------------------------------------
# stratification and classes


def _orbit_field(fan: StackyFan, cone: Cone) -> FieldLabel:
    return FieldLabel("k", 0, fan.rank - len(cone))


def _label(fan: StackyFan, cone: Cone, a: FinAbGroup) -> StackLabel:
    name = "toric:V(" + ";".join(",".join(map(str, fan.rays[i])) for i in cone) + ")"
    f = _orbit_field(fan, cone)
    return StackLabel.atomic(name, f.total, a, f)


def _critical(fan: StackyFan, cone: Cone, orders: dict, base: Cone = ()) -> bool:
    """No facet containing ``base`` has the same stabilizer order."""
    b = set(base)
    for f in itertools.combinations(cone, len(cone) - 1) if cone else ():
        if b <= set(f) and orders[f] == orders[cone]:
            return False
    return True


def _orders(fan: StackyFan) -> tuple[dict, dict]:
    stabs = {c: _stabilizer(fan.rays, c) for c in fan.cones}
    return stabs, {c: s.A.order for c, s in stabs.items()}


def _component(fan, cone, stab, beta_rays, divisors=None) -> StabilizerComponentData:
    pos = {r: k for k, r in enumerate(cone)}
    beta = tuple(stab.coord_chars[pos[r]] for r in beta_rays)
    if any(x.is_zero for x in beta):
        raise NonDivisorialInput(
            f"critical cone {list(cone)} has a trivial coordinate character")
    return StabilizerComponentData(_label(fan, cone, stab.A), stab.A, beta, divisors)


def stabilizer_components(fan: StackyFan, divisor_rays: Iterable[int] = ()) -> OrbifoldDescription:
    """One component per stabilizer-critical cone (no proper face has the same
    stabilizer); ``divisor_rays`` only fills in the ``divisors`` attribute."""
    _require_valid(fan)
    stabs, orders = _orders(fan)
    dr = set(divisor_rays)
    comps = []
    for c in fan.cones:
        if _critical(fan, c, orders):
            comps.append(_component(fan, c, stabs[c], c, frozenset(dr & set(c))))
    return OrbifoldDescription(fan.rank, tuple(comps))


def toric_class(fan: StackyFan, mode: str = "obar") -> BurnElement:
    desc = stabilizer_components(fan)
    if mode == "obar":
        return naive_class_open(desc)
    if mode == "cburn":
        return class_of_orbifold(desc)
    raise ValueError(f"unknown mode {mode!r}")


def snc_open_from_fan(fan: StackyFan, divisor_rays: Iterable[int]) -> SncOpenDescription:
    """Complement of the toric divisors ``D_i = V(ray i)``.

    ``D_I`` is ``V(tau)`` for the cone ``tau`` spanned by ``I``; its components
    are the cones ``sigma`` containing ``tau`` that are critical relative to
    ``tau``.  Divisor ids are the ray indices.
    """
    _require_valid(fan)
    stabs, orders = _orders(fan)
    dr = sorted(set(divisor_rays))
    for i in dr:
        if not 0 <= i < len(fan.rays):
            raise IndexOutOfRange(f"no ray {i}")
    ambient = stabilizer_components(fan, dr)
    cones = set(fan.cones)
    per_i = {}
    for r in range(1, len(dr) + 1):
        for tau in itertools.combinations(dr, r):
            if tau not in cones:
                per_i[frozenset(tau)] = ()
                continue
            entries = []
            for sigma in fan.cones:
                if not set(tau) <= set(sigma) or not _critical(fan, sigma, orders, tau):
                    continue
                rest = tuple(x for x in sigma if x not in tau)
                comp = _component(fan, sigma, stabs[sigma], rest, frozenset(set(dr) & set(sigma)))
                pos = {x: k for k, x in enumerate(sigma)}
                normal = tuple(stabs[sigma].coord_chars[pos[x]] for x in tau)
                entries.append(IncidenceEntry(comp, normal))
            per_i[frozenset(tau)] = tuple(entries)
    return SncOpenDescription(ambient, tuple(dr), per_i)


# ---------------------------------------------------------------------------
# fixtures


def weighted_projective_line(a: int, b: int) -> StackyFan:
    """``P(a, b)`` for coprime ``a, b``: rays ``b`` and ``-a`` in ``Z``."""
    return StackyFan.complete(1, ((b,), (-a,)), [(0,), (1,)])


def p1() -> StackyFan:
    return weighted_projective_line(1, 1)


def p121() -> StackyFan:
    return StackyFan.complete(2, ((1, 0), (0, 1), (-1, -2)), [(0, 1), (1, 2), (0, 2)])


def sigma0() -> StackyFan:
    """The two-ray fan of P(1,2) x (A^1 minus 0) (generator of the negative
    half-line read as ``(-1, 0)``)."""
    return StackyFan.complete(2, ((2, 0), (-1, 0)), [(0,), (1,)])


def sigma1() -> StackyFan:
    return StackyFan.complete(2, ((2, 0), (-1, 0), (0, 1)), [(0, 2), (1, 2)])


def sigma2() -> StackyFan:
    return StackyFan.complete(2, ((2, 0), (-1, 0), (1, 1)), [(0, 2), (1, 2)])


def blowup_center(fan: StackyFan, cone: Iterable[int]) -> tuple[int, ...]:
    """``sum of beta_i`` over the rays of ``cone``: the stacky blow-up point."""
    cone = tuple(sorted(cone))
    if cone not in set(fan.cones):
        raise ConeNotInFan(f"{list(cone)} is not a cone of the fan")
    return tuple(sum(fan.rays[i][k] for i in cone) for k in range(fan.rank))


def is_representable_subdivision(fan: StackyFan, beta: Sequence[int]) -> bool:
    """Whether the stacky star subdivision at ``beta`` is a representable
    modification, i.e. ``beta`` is the sum of the generators of the cone
    containing it in its relative interior.

    Writing ``beta = sum c_j beta_j``, the new cone missing ray ``j`` has its
    stabilizer mapping injectively to the old one exactly when ``c_j = 1``.
    """
    beta = tuple(int(x) for x in beta)
    tau = next((c for c in fan.cones if c and _in_relint(fan, c, beta)), None)
    if tau is None or len(tau) < 2:
        raise RayNotInteriorToAnyCone(f"{list(beta)} is not interior to a cone of dimension >= 2")
    lam = _solve([fan.rays[i] for i in tau], beta)
    return all(x == 1 for x in lam)


def interior_probes(fan: StackyFan, depth: int = 1) -> list[tuple[int, ...]]:
    """Representable blow-up points of every maximal cone of dimension >= 2,
    in a fixed order.  ``depth = 2`` also returns, for each of them, the
    blow-up points of the new maximal cones as pairs ``(first, second)``."""
    first = [blowup_center(fan, c) for c in fan.maximal_cones() if len(c) >= 2]
    if depth == 1:
        return first
    out = []
    for v in first:
        sub = stacky_star_subdivision(fan, v)
        new = sub.ray_index(v)
        out.extend((v, blowup_center(sub, c)) for c in sub.maximal_cones() if new in c and len(c) >= 2)
    return out
