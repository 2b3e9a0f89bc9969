import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wittforms import diagform as df
from wittforms import pointwise as pw
from wittforms.errors import AbstractMode, DomainError, SearchTooLarge
from wittforms.ffield import PowerClassGroup, make_field
from wittforms.verify import multisets


def space(p, d=3, t=1, H="max"):
    return PowerClassGroup.of_field(make_field(p, t, d), H)


@pytest.fixture(scope="module")
def f7():
    return space(7)


def brute_value_set(a):
    """Every value of a on F_q^n, by a plain Python loop."""
    F = a.space.field
    coeffs = a.coefficients()
    out = {}
    for x in itertools.product(range(F.q), repeat=a.dim):
        v = 0
        for c, xi in zip(coeffs, x):
            v = F.add(v, F.mul(c, F.power(xi, F.d)))
        out.setdefault(v, x)
    return out


def test_represented_examples(f7):
    one = pw.represented_classes(df.make(f7, [1]))
    assert one.represented == {0} and not one.represents_zero_nontrivially
    values = brute_value_set(df.make(f7, [1]))
    assert set(values) == {0, 1, 6}
    assert pw.represented_classes(df.make(f7, [1, 3])).represented == {0, 1, 2}
    assert pw.represented_classes(df.zero(f7)).represented == frozenset()


def test_isotropy_examples(f7):
    iso, w = pw.is_isotropic(df.make(f7, [1, 1]))
    assert iso and pw.evaluate(df.make(f7, [1, 1]), w) == 0
    assert pw.evaluate(df.make(f7, [1, 1]), (3, 1)) == 0
    assert w == (1, 3)  # lexicographically least nonzero zero
    assert pw.is_isotropic(df.make(f7, [1])) == (False, None)
    assert pw.is_isotropic(df.zero(f7)) == (False, None)


@pytest.mark.parametrize("coeffs", [[1, 1, 1, 1], [1, 3, 2, 6], [2, 2, 2, 2, 2]])
def test_more_variables_than_degree_isotropic(f7, coeffs):
    a = df.make(f7, coeffs)
    assert pw.is_isotropic(a)[0]
    assert pw.is_isotropic(a, method="brute")[0]


def test_classify_examples(f7):
    assert pw.classify(df.make(f7, [1, 3, 2])) == {
        "round": True, "universal": True, "h_max_form": True, "isotropic": True, "i_form": True,
    }
    one = pw.classify(df.make(f7, [1]))
    assert one["round"] and not one["universal"]
    two = pw.classify(df.make(f7, [1, 1]))
    assert not two["round"]
    assert pw.represented_classes(df.make(f7, [1, 1])).represented == {0, 2}


def test_witness_vectors_hit_targets(f7):
    a = df.make(f7, [1, 3])
    prof = pw.represented_classes(a, witnesses=True)
    for c, w in prof.witnesses.items():
        v = pw.evaluate(a, w)
        assert v and a.space.field.class_of(v) == c


@pytest.mark.parametrize(
    "p,d,max_dim", [(7, 3, 4), (13, 3, 3), (13, 4, 3), (11, 5, 3), (5, 3, 4)]
)
def test_dp_matches_python_loop(p, d, max_dim):
    sp = space(p, d)
    F = sp.field
    for m in multisets(sp.order, max_dim):
        a = df.from_mult(sp, m)
        vals = brute_value_set(a)
        nonzero_vectors = {v for v, x in vals.items() if any(x)}
        # recompute "attained by some nonzero vector" with a second pass
        zero_hit = any(
            any(x) and pw.evaluate(a, x) == 0 for x in itertools.product(range(F.q), repeat=a.dim)
        )
        prof = pw.represented_classes(a)
        assert prof.represented == {F.class_of(v) for v in nonzero_vectors if v}
        assert prof.represents_zero_nontrivially == zero_hit


@pytest.mark.parametrize("p,t,d,max_dim", [(7, 1, 3, 6), (13, 1, 3, 4), (13, 1, 4, 4), (7, 2, 3, 3)])
def test_dp_matches_brute_with_witnesses(p, t, d, max_dim):
    sp = space(p, d, t)
    for m in multisets(sp.order, max_dim):
        a = df.from_mult(sp, m)
        assert pw.is_isotropic(a) == pw.is_isotropic(a, method="brute", budget=10**7)
        assert pw.represented_classes(a).represented == pw.brute_represented(a).represented


@pytest.mark.parametrize("p,d", [(7, 3), (13, 3), (13, 4)])
def test_represented_set_is_union_of_classes(p, d):
    sp = space(p, d)
    F = sp.field
    for m in multisets(sp.order, 3):
        a = df.from_mult(sp, m)
        vals = set(pw.brute_values(a).tolist()) - {0}
        for v in vals:
            assert set(F.class_elements(F.class_of(v))) <= vals


@pytest.mark.parametrize("p,d,max_dim", [(7, 3, 4), (13, 3, 4), (13, 4, 4)])
def test_similarity_factors_preserve_represented_set(p, d, max_dim):
    sp = space(p, d)
    G = sp.group
    for m in multisets(sp.order, max_dim):
        a = df.from_mult(sp, m)
        D = pw.represented_classes(a).represented
        for h in df.similarity_group(a):
            assert {G.add(h, c) for c in D} == D


@pytest.mark.parametrize("p,d,max_dim", [(7, 3, 5), (13, 3, 4), (13, 4, 4)])
def test_h_max_iff_round_and_universal(p, d, max_dim):
    sp = space(p, d)
    for m in multisets(sp.order, max_dim):
        a = df.from_mult(sp, m)
        if not a.dim:
            continue
        flags = pw.classify(a)
        assert flags["h_max_form"] == (flags["round"] and flags["universal"])


def test_zero_form_is_h_form_but_not_universal(f7):
    flags = pw.classify(df.zero(f7))
    assert flags["h_max_form"] and not flags["universal"]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 6), max_size=3), st.lists(st.integers(1, 6), max_size=3))
def test_isotropy_monotone(xs, ys):
    sp = space(7)
    a, b = df.make(sp, xs), df.make(sp, ys)
    if pw.is_isotropic(a)[0]:
        assert pw.is_isotropic(df.osum(a, b))[0]


# ---------------------------------------------------------------------------
# I-forms


def test_i_decompose_examples(f7):
    a = df.from_mult(f7, [2, 1, 1])
    red, t = pw.i_decompose(a)
    assert red.mult == (1, 0, 0) and t.mult == (1, 1, 1)
    b = df.from_mult(f7, [2, 1, 0])
    assert pw.i_decompose(b) == (b, df.zero(f7))
    c = df.make(f7, [1, 3, 2])
    assert pw.is_I_form(c) and pw.i_reduce(c).is_zero()


@pytest.mark.parametrize("p,d,max_dim", [(7, 3, 5), (13, 3, 4), (17, 6, 4)])
def test_i_decomposition_properties(p, d, max_dim):
    sp = space(p, d)
    for m in multisets(sp.order, max_dim):
        a = df.from_mult(sp, m)
        red, t = pw.i_decompose(a)
        assert df.osum(red, t) == a
        assert pw.i_reduce(red) == red
        if pw.is_I_form(a):
            assert df.is_H_form(a)
        inv = pw.witt_neg_I(a)
        assert pw.i_reduce(df.osum(a, inv)).is_zero()


def test_i_reduced_part_is_not_a_class_invariant_when_an_h_form_is_anisotropic():
    sp = space(17, 6)
    N = df.coset_form(sp)
    assert sp.order == 2
    assert not pw.is_isotropic(N)[0]
    assert pw.is_isotropic(df.multiple(2, N))[0]
    a = df.from_mult(sp, [2, 1])  # <1> + N with N anisotropic
    b = df.from_mult(sp, [3, 2])  # <1> + 2N, and 2N is isotropic
    assert pw.i_reduce(a) == a
    assert pw.i_reduce(b).mult == (1, 0)
    # yet a + 3N = b + 2N with both paddings I-forms
    assert pw.i_equivalent_by_padding(a, b)
    assert pw.i_equivalent(a, b)
    assert df.WittClass(a, "I") == df.WittClass(b, "I")


@pytest.mark.parametrize("p,d", [(7, 3), (17, 6), (13, 4)])
def test_i_equivalence_matches_padding_oracle(p, d):
    sp = space(p, d)
    forms = [df.from_mult(sp, m) for m in multisets(sp.order, 3)]
    for a, b in itertools.product(forms, repeat=2):
        assert pw.i_equivalent(a, b) == pw.i_equivalent_by_padding(a, b)


def test_w_i_to_w_h_is_onto(f7):
    forms = [df.from_mult(f7, m) for m in multisets(3, 5)]
    image = {df.WittClass(a, "H") for a in forms}
    for a in forms:
        assert df.WittClass(df.WittClass(a, "I").rep, "H") == df.WittClass(a, "H")
    assert len(image) == len({df.h_reduce(a).mult for a in forms})


# ---------------------------------------------------------------------------
# errors and budgets


def test_abstract_mode_rejected():
    sp = PowerClassGroup.abstract([3], 3)
    with pytest.raises(AbstractMode):
        pw.represented_classes(df.from_classes(sp, [0]))
    with pytest.raises(AbstractMode):
        pw.is_isotropic(df.from_classes(sp, [0]))


def test_search_budget(f7):
    big = df.make(f7, [1] * 12)
    with pytest.raises(SearchTooLarge):
        pw.is_isotropic(big, method="brute")
    with pytest.raises(SearchTooLarge):
        pw.brute_values(big)
    # the value-set search handles it
    assert pw.is_isotropic(big)[0]


def test_i_forms_need_maximal_h():
    sp = space(13, 4, H="order:2")
    with pytest.raises(DomainError):
        pw.i_decompose(df.from_classes(sp, [0]))


def test_evaluate_length_check(f7):
    with pytest.raises(DomainError):
        pw.evaluate(df.make(f7, [1, 2]), (1,))


def test_brute_values_order(f7):
    vals = pw.brute_values(df.make(f7, [1, 2]))
    F = f7.field
    assert vals.shape == (49,)
    assert int(vals[1 * 7 + 3]) == F.add(1, F.mul(2, 27 % 7))
    assert np.all(vals >= 0)
