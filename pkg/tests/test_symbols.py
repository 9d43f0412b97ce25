import itertools

import pytest
from hypothesis import given, settings, strategies as st

from stackburn.abelian import generates, quotient, subgroup_elements
from stackburn.errors import IndexOutOfRange, InvalidSymbol, PreconditionFailed, SequenceTooShort
from stackburn.symbols import (
    BurnElement,
    CSymbol,
    EquivalenceRegistry,
    FieldLabel,
    OSymbol,
    StackLabel,
    blowup_relation_cburn,
    blowup_relation_obar,
    blowup_relation_oburn,
    derived_blowup_expansion,
    derived_vanishing,
    element_from_json,
    normalize_cburn,
    normalize_obar,
    normalize_oburn,
    symbol_from_json,
)

from conftest import FAMILY, K, TRIV, V4, Z2, Z3, Z4, k_t


def sym(field, a, chars, n=-1):
    return OSymbol(field, a, chars, n)


def one(s):
    return BurnElement.of(s)


# ---------------------------------------------------------------------------
# labels and symbols


def test_field_label():
    f = FieldLabel("K", 1, 0)
    assert f.total == 1 and f.adjoin(2) == FieldLabel("K", 1, 2)
    with pytest.raises(ValueError):
        FieldLabel("k", 1, 0)
    assert FieldLabel.from_json(f.to_json()) == f


def test_symbol_validation():
    with pytest.raises(InvalidSymbol):
        sym(K, Z4, [(2,)])  # does not generate
    with pytest.raises(InvalidSymbol):
        sym(K, Z2, [(1,)], n=2)  # grading mismatch
    s = sym(k_t(1), Z2, [(1,)])
    assert s.n == 2 and OSymbol.from_json(s.to_json()) == s


def test_stack_label_construct_invariants():
    x = StackLabel.atomic("X", 0, V4)
    y = StackLabel.construct(x, V4(1, 1))
    assert y.dim == 1 and y.stabilizer == Z2
    assert y.field == FieldLabel("k", 0, 1)
    assert StackLabel.from_json(y.to_json()) == y
    # the projective bundle only depends on the weights up to translation
    assert StackLabel.construct(x, V4(1, 1)) == StackLabel.construct(x, -V4(1, 1))


def test_equivalence_registry():
    reg = EquivalenceRegistry()
    a = StackLabel.atomic("a", 1, Z2)
    b = StackLabel.atomic("b", 1, Z2)
    c = StackLabel.atomic("c", 1, Z2)
    reg.declare(c, b)
    reg.declare(b, a)
    assert reg.representative(c) == a and reg.representative(b) == a
    assert reg.snapshot()[c] == a
    with pytest.raises(InvalidSymbol):
        reg.declare(a, StackLabel.atomic("d", 1, Z3))
    s = CSymbol(c, [(1,)])
    assert normalize_cburn(s, reg).stack == a


# ---------------------------------------------------------------------------
# normal forms


def test_normalize_obar_examples():
    assert not normalize_obar(sym(K, Z2, [(0,), (1,)]))
    assert normalize_obar(sym(K, Z3, [(2,), (2,)])) == one(sym(K, Z3, [(1,), (1,)]))
    s = sym(K, TRIV, [])
    assert normalize_obar(s) == one(s)


def test_normalize_oburn_examples():
    base = FieldLabel("K", 1, 0)
    assert normalize_oburn(sym(base, Z2, [(0,), (1,)])) == sym(FieldLabel("K", 1, 1), Z2, [(1,)])
    assert normalize_oburn(sym(K, TRIV, [(), ()])) == sym(k_t(2), TRIV, [])
    s = sym(K, Z3, [(1,), (1,)])
    assert normalize_oburn(s) == s


def _all_bijections(a):
    elems = list(a.elements())
    for images in itertools.product(elems, repeat=a.rank):
        f = {x: a.element([sum(c * im.coords[i] for c, im in zip(x.coords, images)) for i in range(a.rank)])
             for x in elems}
        if len(set(f.values())) == len(elems) and all((im * d).is_zero for im, d in zip(images, a.invariants)):
            yield f


def _oracle_canonical(s):
    return min(tuple(sorted(f[x].coords for x in s.S)) for f in _all_bijections(s.A))


@pytest.mark.parametrize("a", FAMILY, ids=str)
def test_normalize_obar_matches_orbit_minimum(a):
    nonzero = [x for x in a.elements() if not x.is_zero]
    for m in (1, 2, 3):
        for chars in itertools.product(nonzero, repeat=m):
            if not generates(a, chars):
                continue
            (c,) = normalize_obar(sym(K, a, chars)).symbols()
            assert tuple(x.coords for x in c.S) == _oracle_canonical(sym(K, a, chars))


# ---------------------------------------------------------------------------
# relation (B)


def test_blowup_obar_examples():
    s = sym(K, V4, [(1, 0), (0, 1)])
    expected = (normalize_obar(sym(K, V4, [(1, 0), (1, 1)])) + normalize_obar(sym(K, V4, [(0, 1), (1, 1)]))
                + one(sym(k_t(1), Z2, [(1,)])))
    assert blowup_relation_obar(s, 0, 1) == expected
    # both Theta_1 symbols lie in the Aut-orbit of the left-hand side
    assert blowup_relation_obar(s, 0, 1) == 2 * normalize_obar(s) + one(sym(k_t(1), Z2, [(1,)]))
    assert blowup_relation_obar(sym(K, Z2, [(1,), (1,)]), 0, 1) == one(sym(k_t(1), Z2, [(1,)]))
    with pytest.raises(IndexOutOfRange):
        blowup_relation_obar(s, 0, 0)
    with pytest.raises(IndexOutOfRange):
        blowup_relation_obar(s, 0, 2)


def test_blowup_obar_vanishing_case():
    # a_1 + a_2 = 0: the three right-hand terms are zero or cancel against (V)
    s = sym(K, Z3, [(1,), (2,)])
    rhs = blowup_relation_obar(s, 0, 1)
    assert all(t.n == 2 for t in rhs.symbols())


def test_blowup_cburn_examples():
    x = StackLabel.atomic("X", 0, V4)
    s = CSymbol(x, [(1, 0), (0, 1)])
    rhs = blowup_relation_cburn(s, 0, 1)
    y = StackLabel.construct(x, V4(1, 1))
    assert y.stabilizer == Z2
    expected = BurnElement(2, [
        (normalize_cburn(CSymbol(x, [(1, 0), (1, 1)])), 1),
        (normalize_cburn(CSymbol(x, [(0, 1), (1, 1)])), 1),
        (CSymbol(y, [(1,)]), 1),
    ])
    assert rhs == expected
    # a = 0: Theta_1 vanishes
    z = StackLabel.atomic("Z", 0, Z2)
    rhs = blowup_relation_cburn(CSymbol(z, [(1,), (1,)]), 0, 1)
    assert len(rhs) == 1 and rhs.symbols()[0].stack.kind == "construct"
    # a_2 in <a_1 - a_2>: Theta_2 vanishes
    w = StackLabel.atomic("W", 0, Z4)
    rhs = blowup_relation_cburn(CSymbol(w, [(3,), (2,)]), 0, 1)  # a = 1 generates Z/4
    assert all(t.stack == w for t in rhs.symbols()) and len(rhs) == 2
    with pytest.raises(SequenceTooShort):
        blowup_relation_cburn(CSymbol(z, [(1,)]), 0, 1)


def test_blowup_oburn_matches_obar_shadow():
    # without trivial characters the oBurn relation is the oBurn-bar one with
    # the third term moved across (it carries an explicit trivial character)
    s = sym(K, V4, [(1, 0), (0, 1)])
    rhs = blowup_relation_oburn(s, 0, 1)
    assert rhs.coeff(sym(k_t(1), Z2, [(1,)])) == -1


# ---------------------------------------------------------------------------
# derived relations


def _replay_steps(steps, n):
    acc = BurnElement.zero(n)
    for st_ in steps:
        acc = acc + st_.row()
    return acc


def test_derived_vanishing_examples():
    s = sym(K, Z3, [(1,), (2,)])
    steps = derived_vanishing(s, 2)
    assert [x.kind for x in steps] == ["V"]
    s = sym(K, Z3, [(1,), (1,), (1,)])
    steps = derived_vanishing(s, 3)
    assert len(steps) == 3 and [x.kind for x in steps] == ["B", "V", "V"]
    assert _replay_steps(steps, 3) == normalize_obar(s)
    s = sym(FieldLabel("K", 1, 0), V4, [(1, 0), (1, 0), (0, 1)])
    steps = derived_vanishing(s, 2)
    assert [x.kind for x in steps] == ["V"]
    with pytest.raises(PreconditionFailed):
        derived_vanishing(sym(K, Z3, [(1,), (1,)]), 2)


def _oracle_expansion(s, j, pick):
    """Direct evaluation of the subset sum; the restriction to H_I is read off
    from brute-force coset enumeration of A / <a_i - a_i0>."""
    a = s.A
    acc = BurnElement.zero(s.n)
    for r in range(1, j + 1):
        for subset in itertools.combinations(range(j), r):
            i0 = pick(subset)
            diffs = [s.S[i] - s.S[i0] for i in subset if i != i0]
            h = subgroup_elements(a, diffs)
            chars = [s.S[i0]] + [s.S[i] - s.S[i0] for i in range(j) if i not in subset] + list(s.S[j:])
            if any(c in h for c in chars):
                continue  # some character restricts trivially
            qq, proj = quotient(a, diffs)
            assert qq.order * len(h) == a.order
            acc = acc + normalize_obar(OSymbol(s.field.adjoin(r - 1), qq, [proj(c) for c in chars], s.n))
    return acc


def test_derived_expansion_example_v4():
    s = sym(K, V4, [(1, 0), (0, 1), (1, 1)])
    got = derived_blowup_expansion(s, 3)
    expected = (3 * one(sym(K, V4, [(0, 1), (1, 0), (1, 1)]))
                + 3 * one(sym(k_t(1), Z2, [(1,), (1,)])))
    assert got == expected
    assert got == _oracle_expansion(s, 3, min)
    assert derived_blowup_expansion(s, 3, "max") == _oracle_expansion(s, 3, max)


def test_derived_expansion_base_case():
    for a in FAMILY:
        nonzero = [x for x in a.elements() if not x.is_zero]
        for chars in itertools.product(nonzero, repeat=2):
            if not generates(a, chars):
                continue
            s = sym(K, a, chars)
            assert derived_blowup_expansion(s, 2) == blowup_relation_obar(s, 0, 1)
    z = StackLabel.atomic("Z", 0, Z2)
    c = CSymbol(z, [(1,), (1,)])
    assert derived_blowup_expansion(c, 2) == blowup_relation_cburn(c, 0, 1)
    assert len(derived_blowup_expansion(CSymbol(StackLabel.atomic("Y", 0, Z3), [(1,), (1,), (2,)]), 2)) <= 2


def test_derived_expansion_a1_equals_a2_two_terms():
    s = sym(k_t(1), Z3, [(1,), (1,), (2,)])
    out = derived_blowup_expansion(s, 2)
    assert len(out) <= 2


def test_json_roundtrip():
    s = sym(k_t(1), Z2, [(1,)])
    assert symbol_from_json(s.to_json()) == s
    e = one(s) * 3 - one(sym(k_t(2), TRIV, []))
    assert element_from_json(e.to_json()) == e
    assert element_from_json([], 4) == BurnElement.zero(4)
    with pytest.raises(InvalidSymbol):
        element_from_json([])
    c = CSymbol(StackLabel.construct(StackLabel.atomic("X", 0, V4), V4(1, 0)), [(1,)])
    assert symbol_from_json(c.to_json()) == c


# ---------------------------------------------------------------------------
# properties


@st.composite
def osymbols(draw, max_m=3):
    a = draw(st.sampled_from(FAMILY + (TRIV,)))
    nonzero = [x for x in a.elements() if not x.is_zero]
    m = draw(st.integers(0 if a.is_trivial else 1, 0 if a.is_trivial else max_m))
    chars = draw(st.lists(st.sampled_from(nonzero), min_size=m, max_size=m)) if m else []
    if not generates(a, chars):
        chars = list(chars) + list(a.gens())
    field = draw(st.sampled_from([K, k_t(1), FieldLabel("K", 1, 0), FieldLabel("K", 2, 1)]))
    return OSymbol(field, a, chars)


def _permuted(s, perm):
    return OSymbol(s.field, s.A, [s.S[i] for i in perm], s.n)


@settings(max_examples=200, deadline=None)
@given(osymbols(), st.randoms(use_true_random=False))
def test_normal_forms_idempotent_and_order_free(s, rnd):
    e = normalize_obar(s)
    for t in e.symbols():
        assert normalize_obar(t) == BurnElement.of(t)
    assert normalize_oburn(normalize_oburn(s)) == normalize_oburn(s)
    perm = list(range(s.m))
    rnd.shuffle(perm)
    assert normalize_obar(_permuted(s, perm)) == e
    assert normalize_oburn(_permuted(s, perm)) == normalize_oburn(s)


@settings(max_examples=200, deadline=None)
@given(osymbols(), st.data())
def test_relation_outputs_conserve_grading_and_generate(s, data):
    if s.m < 2:
        return
    i, j = data.draw(st.sampled_from(list(itertools.permutations(range(s.m), 2))))
    for rhs in (blowup_relation_obar(s, i, j), blowup_relation_oburn(s, i, j)):
        for t in rhs.symbols():
            assert t.n == s.n and t.field.total + t.m == s.n
            assert generates(t.A, t.S)
    jj = data.draw(st.integers(2, s.m))
    for t in derived_blowup_expansion(s, jj).symbols():
        assert t.n == s.n and t.field.total + t.m == s.n and generates(t.A, t.S)
