import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wittforms import diagform as df
from wittforms import groupring as gr
from wittforms.errors import CtxMismatch, DegreeTooSmall, KindMismatch, NotInvariant, ParseError, ZeroCoefficient
from wittforms.ffield import PowerClassGroup, make_field
from wittforms.groupring import GroupRingElement
from wittforms.verify import multisets


@pytest.fixture(scope="module")
def f7():
    return PowerClassGroup.of_field(make_field(7, 1, 3))


@pytest.fixture(scope="module")
def z3():
    return PowerClassGroup.abstract([3], 3, "max")


def M(space, mapping):
    mult = [0] * space.order
    for c, n in mapping.items():
        mult[c] = n
    return df.from_mult(space, mult)


SPACES = [
    ([3], "max"),
    ([2], "max"),
    ([4], "max"),
    ([4], "order:2"),
    ([2, 2], "max"),
    ([2, 2], "gens:1"),
    ([6], "order:3"),
]


def forms_in(space, max_dim=6):
    return st.lists(st.integers(0, space.order - 1), max_size=max_dim).map(
        lambda cls: df.from_classes(space, cls)
    )


space_and_data = st.sampled_from(SPACES).flatmap(
    lambda s: st.tuples(st.just(PowerClassGroup.abstract(s[0], 3, s[1])), st.data())
)


# ---------------------------------------------------------------------------
# construction


def test_make_examples(f7):
    assert df.make(f7, [1, 2, 4]).mult == (1, 1, 1)
    assert df.make(f7, [1, 6]).mult == (2, 0, 0)
    assert df.make(f7, []).mult == (0, 0, 0)


def test_make_rejects_zero(f7):
    with pytest.raises(ZeroCoefficient):
        df.make(f7, [1, 0])


def test_degree_two_rejected():
    sp = PowerClassGroup.abstract([2], 2)
    with pytest.raises(DegreeTooSmall):
        df.from_classes(sp, [0])


def test_context_mismatch(z3):
    other = PowerClassGroup.abstract([2], 3)
    with pytest.raises(CtxMismatch):
        df.osum(df.from_classes(z3, [0]), df.from_classes(other, [0]))


# ---------------------------------------------------------------------------
# the multiset model against a brute-force isometry search


def _binary_cubic(a, b, m, p=7):
    """Coefficients (x^3, x^2 y, x y^2, y^3) of a(m00 x + m01 y)^3 + b(m10 x + m11 y)^3."""
    out = [0, 0, 0, 0]
    for coef, (u, v) in ((a, (m[0], m[1])), (b, (m[2], m[3]))):
        out[0] += coef * u**3
        out[1] += coef * 3 * u * u * v
        out[2] += coef * 3 * u * v * v
        out[3] += coef * v**3
    return tuple(x % p for x in out)


def test_multiset_criterion_matches_gl2_search(f7):
    mats = [m for m in itertools.product(range(7), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % 7]
    assert len(mats) == 2016
    pairs = list(itertools.combinations_with_replacement(range(1, 7), 2))
    orbits = {}
    for a, b in pairs:
        orbits[(a, b)] = {_binary_cubic(a, b, m) for m in mats}
    for (a, b), (c, e) in itertools.product(pairs, repeat=2):
        target = (c % 7, 0, 0, e % 7)
        isometric = target in orbits[(a, b)]
        assert isometric == df.is_isomorphic(df.make(f7, [a, b]), df.make(f7, [c, e]))


# ---------------------------------------------------------------------------
# semiring operations


def test_operation_examples(z3):
    assert df.osum(M(z3, {0: 1}), M(z3, {1: 1})).mult == (1, 1, 0)
    assert df.tensor(M(z3, {0: 1, 1: 1}), M(z3, {0: 1, 1: 1})).mult == (1, 2, 1)
    assert df.scale(1, M(z3, {0: 2, 1: 1})).mult == (0, 2, 1)


def test_tensor_keeps_field_coefficients(f7):
    t = df.tensor(df.make(f7, [1, 3]), df.make(f7, [2]))
    assert t.coefficients() == [2, 6]
    assert t.mult == df.make(f7, [2, 6]).mult


@pytest.mark.parametrize(
    "mapping,expected", [({0: 1, 1: 1, 2: 1}, {0, 1, 2}), ({0: 1}, {0}), ({0: 2, 1: 1}, {0}), ({}, {0, 1, 2})]
)
def test_similarity_group(z3, mapping, expected):
    assert df.similarity_group(M(z3, mapping)) == frozenset(expected)


@settings(max_examples=150)
@given(space_and_data)
def test_similarity_group_is_subgroup(pair):
    space, data = pair
    a = data.draw(forms_in(space))
    assert space.group.is_subgroup(df.similarity_group(a))


@settings(max_examples=150)
@given(space_and_data)
def test_tensor_matches_group_ring(pair):
    space, data = pair
    a, b = data.draw(forms_in(space)), data.draw(forms_in(space))
    G = space.group
    assert df.tensor(a, b).mult == gr.gr_mul(GroupRingElement(G, a.mult), GroupRingElement(G, b.mult)).coeffs


# ---------------------------------------------------------------------------
# H-forms and reduction


def test_h_decompose_examples(z3):
    red, t = df.h_decompose(M(z3, {0: 2, 1: 1, 2: 1}))
    assert red.mult == (1, 0, 0) and t.mult == (1, 1, 1)
    assert df.is_H_form(M(z3, {0: 1, 1: 1, 2: 1}))
    red, t = df.h_decompose(M(z3, {0: 1}))
    assert red.mult == (1, 0, 0) and t.is_zero()
    assert not df.is_H_form(M(z3, {0: 1}))


def test_h_decompose_splits_coefficients(f7):
    a = df.make(f7, [3, 1, 2, 6])
    red, t = df.h_decompose(a)
    # the first coefficients of each class stay in the reduced part
    assert red.coefficients() == [1]
    assert sorted(t.coefficients()) == [2, 3, 6]


@settings(max_examples=200)
@given(space_and_data)
def test_h_decomposition_properties(pair):
    space, data = pair
    a = data.draw(forms_in(space))
    red, t = df.h_decompose(a)
    assert df.osum(red, t) == a
    assert df.is_H_form(t)
    assert df.is_H_reduced(red)
    assert df.h_reduce(red) == red
    # H-forms are unions of cosets, so |H| divides the dimension
    assert t.dim % len(space.H) == 0


@settings(max_examples=200)
@given(space_and_data)
def test_reduction_commutes_with_scaling(pair):
    space, data = pair
    a = data.draw(forms_in(space))
    for h in space.H:
        assert df.h_reduce(df.scale(h, a)) == df.scale(h, df.h_reduce(a))


def test_h_equivalent_examples(z3):
    assert df.h_equivalent(M(z3, {1: 3}), M(z3, {0: 2, 1: 5, 2: 2}))
    a = M(z3, {0: 2, 2: 1})
    assert df.h_equivalent(a, df.osum(a, df.coset_form(z3)))
    assert not df.h_equivalent(M(z3, {0: 1}), M(z3, {1: 1}))


def test_h_equivalent_field_example(f7):
    a = df.parse_form(f7, "3,3,3")
    b = df.parse_form(f7, "1,3,3,1,3,3,3,2,2")
    assert df.h_equivalent(a, b)
    assert df.format_form(df.h_reduce(a)) == "3,3,3"


def test_witt_neg_examples(z3):
    assert df.witt_neg(M(z3, {0: 1})).mult == (0, 1, 1)
    assert df.witt_neg(df.coset_form(z3)).is_zero()
    assert df.witt_neg(M(z3, {0: 2, 1: 1})).mult == (0, 1, 2)


@settings(max_examples=200)
@given(space_and_data)
def test_inverses_cancel(pair):
    space, data = pair
    a = data.draw(forms_in(space))
    assert df.is_H_form(df.osum(a, df.witt_neg(a)))
    assert df.is_H_form(df.osum(a, df.conjugate_inverse(a)))
    assert df.h_equivalent(df.witt_neg(a), df.conjugate_inverse(a))
    # the deficit inverse is the smallest one
    assert df.witt_neg(a).dim <= df.conjugate_inverse(a).dim


def test_exhaustive_h_forms_over_z3(z3):
    for m in multisets(3, 9):
        a = df.from_mult(z3, m)
        if set(z3.H) <= df.similarity_group(a):
            assert a.dim % 3 == 0
            assert len(set(m)) == 1


# ---------------------------------------------------------------------------
# invariants


def test_invariant_examples(f7, z3):
    assert df.permanent(df.make(f7, [3, 3, 3])) == 0
    assert df.permanent(df.make(f7, [1])) == 0
    assert df.permanent(df.make(f7, [3, 2, 2])) == (1 + 2 + 2) % 3
    assert df.dim_index(df.coset_form(z3)) == 0
    assert df.dim_index(M(z3, {0: 4})) == 1


def test_permanent_on_witt_classes():
    z2 = PowerClassGroup.abstract([2], 3, "max")
    with pytest.raises(NotInvariant):
        df.permanent(df.WittClass(df.from_classes(z2, [1])))
    z3 = PowerClassGroup.abstract([3], 3, "max")
    w = df.WittClass(df.from_classes(z3, [1, 1, 2, 0, 1, 2]))
    assert df.permanent(w) == df.permanent(df.from_classes(z3, [1, 1, 2, 0, 1, 2]))


def test_dim_index_with_smaller_h():
    sp = PowerClassGroup.abstract([4], 3, "order:2")
    assert df.dim_index(df.from_classes(sp, [0, 1, 3])) == 1


# ---------------------------------------------------------------------------
# Witt ring


def test_witt_ring_axioms_exhaustive_small(z3):
    reps = {df.h_reduce(df.from_mult(z3, m)) for m in multisets(3, 3)}
    W = [df.WittClass(r) for r in sorted(reps, key=lambda r: r.mult)]
    zero = df.WittClass(df.zero(z3))
    one = df.WittClass(df.from_classes(z3, [0]))
    for a in W:
        assert a + zero == a and a * one == a and a + (-a) == zero
    for a, b in itertools.product(W, repeat=2):
        assert a + b == b + a and a * b == b * a
    for a, b, c in itertools.product(W, repeat=3):
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)


@settings(max_examples=150, deadline=None)
@given(space_and_data)
def test_witt_ring_axioms_random(pair):
    space, data = pair
    a, b, c = (df.WittClass(data.draw(forms_in(space))) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a - a == df.WittClass(df.zero(space))


@settings(max_examples=200, deadline=None)
@given(space_and_data)
def test_groupring_map_is_ring_hom(pair):
    space, data = pair
    a, b = df.WittClass(data.draw(forms_in(space))), df.WittClass(data.draw(forms_in(space)))
    H = space.H
    f = df.to_groupring
    assert f(a + b) == gr.canonical_rep(f(a) + f(b), H)
    assert f(a * b) == gr.canonical_rep(f(a) * f(b), H)
    assert f(-a) == gr.canonical_rep(-f(a), H)
    assert df.from_groupring(f(a), space) == a


def test_groupring_map_examples(z3):
    one = GroupRingElement.delta(z3.group, 0)
    assert df.to_groupring(df.WittClass(df.from_classes(z3, [0]))) == gr.canonical_rep(one, z3.H)
    assert gr.canonical_rep(one, z3.H).coeffs == (0, -1, -1)
    assert df.to_groupring(df.WittClass(df.coset_form(z3))).coeffs == (0, 0, 0)


def test_kind_mismatch(f7):
    w = df.WittClass(df.make(f7, [1]), "I")
    with pytest.raises(KindMismatch):
        df.to_groupring(w)
    with pytest.raises(KindMismatch):
        w + df.WittClass(df.make(f7, [1]), "H")


def test_torsion_free(z3):
    z2 = PowerClassGroup.abstract([2], 3, "max")
    for sp in (z2, z3):
        one = df.from_classes(sp, [0])
        for n in range(1, 101):
            assert not df.h_equivalent(df.multiple(n, one), df.zero(sp))


# ---------------------------------------------------------------------------
# literals


@pytest.mark.parametrize(
    "text,mult", [("1,2,4", (1, 1, 1)), ("@0,1,2", (1, 1, 1)), ("@{0:2,1:1}", (2, 1, 0)), ("", (0, 0, 0)), ("@{}", (0, 0, 0))]
)
def test_parse_form(f7, text, mult):
    assert df.parse_form(f7, text).mult == mult


@pytest.mark.parametrize("text", ["1,x", "@{0:2,5:1}", "9", "@{0}", "0"])
def test_parse_form_errors(f7, text):
    with pytest.raises((ParseError, ZeroCoefficient)):
        df.parse_form(f7, text)


def test_abstract_requires_class_literal(z3):
    with pytest.raises(ParseError):
        df.parse_form(z3, "1,2")


@settings(max_examples=100)
@given(space_and_data)
def test_format_parse_round_trip(pair):
    space, data = pair
    a = data.draw(forms_in(space))
    assert df.parse_form(space, df.format_form(a)) == a
    doc = json.loads(df.dumps(a))
    assert doc["mult"] == list(a.mult)
    assert df.parse_form(space, doc["literal"]) == a
    assert df.parse_form(space, doc["reduced"]) == df.h_reduce(a)


def test_field_round_trip_keeps_coefficients(f7):
    a = df.parse_form(f7, "3,5,6")
    assert df.format_form(a) == "3,5,6"
    assert df.format_form(df.witt_neg(df.make(f7, [1]))) == "3,2"
