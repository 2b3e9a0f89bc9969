import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wittforms import groupring as gr
from wittforms import lattice
from wittforms.errors import DegreeTooSmall, DomainError, GroupMismatch, TooDeep
from wittforms.groupring import AbGroup, GroupRingElement as E


def brute_convolution(G, x, y):
    """Convolution straight from the tuple description of G."""
    out = {}
    for a, b in itertools.product(G.elements(), repeat=2):
        ta, tb = G.as_tuple(a), G.as_tuple(b)
        z = tuple((u + v) % n for u, v, n in zip(ta, tb, G.factors))
        out[z] = out.get(z, 0) + x[a] * y[b]
    return [out.get(G.as_tuple(g), 0) for g in G.elements()]


GROUPS = [[2], [3], [4], [2, 2], [6], [2, 3]]


def elements(G, lo=-5, hi=5):
    return st.lists(st.integers(lo, hi), min_size=G.order, max_size=G.order).map(lambda c: E(G, c))


def test_group_enumeration_is_lex():
    G = AbGroup([2, 3])
    assert [G.as_tuple(g) for g in G.elements()] == sorted(itertools.product(range(2), range(3)))
    assert G.as_tuple(0) == (0, 0)


def test_group_order_limit():
    with pytest.raises(DomainError):
        AbGroup([5000])


def test_cyclic_and_subgroups():
    assert AbGroup([2, 3]).is_cyclic()
    assert not AbGroup([2, 2]).is_cyclic()
    assert AbGroup([12]).subgroup_of_order(4) == frozenset({0, 3, 6, 9})
    with pytest.raises(DomainError):
        AbGroup([2, 2]).subgroup_of_order(2)


@pytest.mark.parametrize(
    "x,y,expected",
    [((1, 1, 0), (1, 1, 0), (1, 2, 1)), ((1, 0, 0), (4, -2, 7), (4, -2, 7)), ((1, 1, 1), (0, 0, 1), (1, 1, 1))],
)
def test_gr_mul_examples_z3(x, y, expected):
    G = AbGroup([3])
    assert gr.gr_mul(E(G, x), E(G, y)).coeffs == expected


@pytest.mark.parametrize("factors", GROUPS)
def test_gr_mul_matches_brute_convolution(factors):
    G = AbGroup(factors)
    rng = random.Random(len(factors) * 100 + G.order)
    for _ in range(50):
        x = [rng.randint(-4, 4) for _ in G.elements()]
        y = [rng.randint(-4, 4) for _ in G.elements()]
        assert list(gr.gr_mul(E(G, x), E(G, y)).coeffs) == brute_convolution(G, x, y)


def test_group_mismatch():
    with pytest.raises(GroupMismatch):
        E(AbGroup([3]), [1, 0, 0]) + E(AbGroup([2]), [1, 0])


@pytest.mark.parametrize("factors", GROUPS)
def test_ring_axioms_random(factors):
    G = AbGroup(factors)
    rng = random.Random(sum(factors))
    one = E.delta(G, 0)
    for _ in range(10_000 // len(GROUPS)):
        x, y, z = (E(G, [rng.randint(-3, 3) for _ in G.elements()]) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert x * y == y * x
        assert x * (y + z) == x * y + x * z
        assert x * one == x
        assert (x * y).augmentation() == x.augmentation() * y.augmentation()


@settings(max_examples=200)
@given(st.sampled_from(GROUPS).flatmap(lambda f: st.tuples(st.just(AbGroup(f)), st.data())))
def test_permanent_leibniz_rule(pair):
    G, data = pair
    x = data.draw(elements(G))
    y = data.draw(elements(G))
    px, _ = gr.permanent_hom(x)
    py, _ = gr.permanent_hom(y)
    want = G.add(G.mul_scalar(y.augmentation(), px), G.mul_scalar(x.augmentation(), py))
    assert gr.permanent_hom(x * y)[0] == want


def test_permanent_examples():
    Z3, Z2 = AbGroup([3]), AbGroup([2])
    assert gr.permanent_hom(E.delta(Z3, 2)) == (2, True)
    assert gr.permanent_hom(E.norm(Z3, Z3.full())) == (0, True)
    assert gr.permanent_hom(E.norm(Z2, Z2.full())) == (1, False)


def test_norm_absorbs_translation():
    G = AbGroup([3])
    N = E.norm(G, G.full())
    for g in G.elements():
        assert N * E.delta(G, g) == N


@pytest.mark.parametrize(
    "x,expected", [((1, 1, 1), (0, 0, 0)), ((2, 5, 2), (0, 3, 0)), ((0, 0, 0), (0, 0, 0))]
)
def test_canonical_rep_examples(x, expected):
    G = AbGroup([3])
    assert gr.canonical_rep(E(G, x), G.full()).coeffs == expected


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([([4], {0, 2}), ([2, 2], {0, 1}), ([6], {0, 3}), ([6], {0, 2, 4}), ([3], {0, 1, 2})]), st.data())
def test_canonical_rep_agrees_with_lattice_membership(gh, data):
    factors, H = gh
    G = AbGroup(factors)
    x = data.draw(elements(G))
    y = data.draw(elements(G))
    same = gr.canonical_rep(x, H) == gr.canonical_rep(y, H)
    assert same == gr.in_norm_ideal(x - y, H)
    # a representative really differs from x by an element of the ideal
    assert gr.in_norm_ideal(x - gr.canonical_rep(x, H), H)


def test_canonical_rep_rejects_non_subgroup():
    G = AbGroup([4])
    with pytest.raises(DomainError):
        gr.canonical_rep(E.delta(G), {0, 1})


def test_norm_ideal_is_ideal():
    G = AbGroup([2, 2])
    H = {0, 1}
    basis = lattice.hnf(gr.norm_ideal_rows(G, H), G.order)
    for row in gr.norm_ideal_rows(G, H):
        for g in G.elements():
            assert lattice.in_lattice((E(G, row) * E.delta(G, g)).coeffs, basis)


# ---------------------------------------------------------------------------
# filtration


@pytest.mark.parametrize(
    "p,n,expected",
    [(3, 0, [3]), (3, 1, [3]), (3, 2, [3]), (3, 3, [3]), (5, 0, [5]), (5, 1, [5]), (2, 1, [2])],
)
def test_filtration_quotients_cyclic(p, n, expected):
    G = AbGroup([p])
    assert gr.filtration_quotient(G, G.full(), 3, n) == expected


def test_filtration_order_independent():
    G = AbGroup([3])
    base = gr.filtration_quotient(G, G.full(), 3, 1)
    for seed in range(5):
        assert gr.filtration_quotient(G, G.full(), 3, 1, rng=random.Random(seed)) == base
    G4 = AbGroup([2, 2])
    base4 = gr.filtration_quotient(G4, {0, 1}, 3, 1)
    for seed in range(5):
        assert gr.filtration_quotient(G4, {0, 1}, 3, 1, rng=random.Random(seed)) == base4


def test_ideal_power_rows_order_independent():
    G = AbGroup([4])
    H = {0, 2}
    base = gr.ideal_power_rows(G, H, 2)
    for seed in range(4):
        assert gr.ideal_power_rows(G, H, 2, rng=random.Random(seed)) == base


def test_filtration_errors():
    G = AbGroup([3])
    with pytest.raises(TooDeep):
        gr.filtration_quotient(G, G.full(), 3, 5)
    with pytest.raises(DegreeTooSmall):
        gr.filtration_quotient(G, G.full(), 2, 1)


@pytest.mark.parametrize("p,n", [(3, 1), (3, 2), (5, 1), (5, 2)])
def test_exponent_lemma(p, n):
    G = AbGroup([p])
    assert gr.exponent_holds(G, G.full(), p, n)


def test_exponent_sharp_for_z3():
    # 1 * I is not inside I^2, so the exponent is exactly 3
    G = AbGroup([3])
    assert not gr.exponent_holds(G, G.full(), 1, 1)


def test_quotient_exponent_divides_p():
    G = AbGroup([3])
    for n in range(3):
        inv = gr.filtration_quotient(G, G.full(), 3, n)
        assert all(3 % x == 0 for x in inv if x)
