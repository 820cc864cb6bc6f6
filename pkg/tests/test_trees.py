"""Tree keys, Koszul bookkeeping, and the text round trip."""

import math
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from operadic.elements import Element, combination
from operadic.labels import label_arity, label_degree
from operadic.operads import AInfinity, HomotopyUnital
from operadic.render import format_tree, parse_tree
from operadic.trees import (arity, compositions, graft, koszul_sign,
                            n_vertices, resort_sign, row_order)

ainf = AInfinity()
hu = HomotopyUnital()


# ---------------------------------------------------------------------------
# Element arithmetic
# ---------------------------------------------------------------------------

keys = st.sampled_from(["a", "b", "c", "d"])
scalars = st.integers(-4, 4).map(Fraction)
elements = st.lists(st.tuples(scalars, keys), max_size=5).map(combination)


@given(elements, elements, elements)
def test_addition_associative_commutative(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x


@given(elements)
def test_additive_inverse(x):
    assert x - x == Element.zero()
    assert x + (-x) == Element.zero()
    assert -(-x) == x


@given(scalars, scalars, elements)
def test_scalar_action(a, b, x):
    assert a * (b * x) == (a * b) * x
    assert (a + b) * x == a * x + b * x
    assert 1 * x == x
    assert 0 * x == Element.zero()


@given(elements)
def test_zero_terms_are_dropped(x):
    assert all(c != 0 for _, c in x)
    assert x.is_zero() == (len(x) == 0)


def test_combination_merges_repeats():
    assert combination([(1, "a"), (2, "a")]) == Element.monomial("a", 3)
    assert combination([(1, "a"), (-1, "a")]).is_zero()


# ---------------------------------------------------------------------------
# Koszul signs
# ---------------------------------------------------------------------------

perm_cases = st.integers(2, 6).flatmap(
    lambda n: st.tuples(
        st.permutations(range(n)),
        st.permutations(range(n)),
        st.lists(st.integers(-2, 2), min_size=n, max_size=n),
    )
)


def test_identity_permutation_has_sign_one():
    for n in range(1, 6):
        assert koszul_sign([-1] * n, list(range(n))) == 1


@given(perm_cases)
def test_koszul_sign_is_multiplicative(case):
    sigma, tau, degrees = case
    n = len(sigma)
    composed = [tau[sigma[i]] for i in range(n)]
    mid_degrees = [0] * n
    for i in range(n):
        mid_degrees[sigma[i]] = degrees[i]
    assert koszul_sign(degrees, composed) == \
        koszul_sign(degrees, list(sigma)) * koszul_sign(mid_degrees, list(tau))


@given(perm_cases)
def test_even_degrees_never_produce_signs(case):
    sigma, _, degrees = case
    assert koszul_sign([d * 2 for d in degrees], list(sigma)) == 1


@given(st.integers(2, 6).flatmap(
    lambda n: st.tuples(st.permutations(range(n)),
                        st.lists(st.integers(-2, 2), min_size=n, max_size=n))))
def test_resort_sign_inverts(case):
    sigma, degrees = case
    source = list(range(len(sigma)))
    target = list(sigma)
    degree_by_id = dict(enumerate(degrees))
    forward = resort_sign(source, target, degree_by_id)
    back = resort_sign(target, source, degree_by_id)
    assert forward * back == 1
    assert resort_sign(source, source, degree_by_id) == 1


# ---------------------------------------------------------------------------
# Grafting and row order
# ---------------------------------------------------------------------------

def pool(max_arity):
    out = []
    for n in range(1, max_arity + 1):
        out += ainf.basis(n)
    return out


@given(st.sampled_from(pool(4)))
def test_graft_of_trivial_parts_is_identity(tree):
    parts = [()] * arity(tree)
    grafted, sign = graft(parts, tree, label_degree)
    assert grafted == tree
    assert sign == 1


@given(st.sampled_from(pool(3)), st.sampled_from(pool(3)))
def test_graft_counts_vertices_and_inputs(left, right):
    root = ("m2", (), ())
    grafted, sign = graft([left, right], root, label_degree)
    assert sign in (1, -1)
    assert arity(grafted) == arity(left) + arity(right)
    assert n_vertices(grafted) == n_vertices(left) + n_vertices(right) + 1


@given(st.sampled_from(pool(4)))
def test_row_order_visits_every_vertex_deepest_first(tree):
    order = row_order(tree)
    assert len(order) == n_vertices(tree)
    assert len(set(order)) == len(order)
    depths = [len(p) for p in order]
    assert depths == sorted(depths, reverse=True)


# ---------------------------------------------------------------------------
# Compositions helper
# ---------------------------------------------------------------------------

@given(st.integers(0, 7), st.integers(1, 5))
def test_compositions_count_matches_stars_and_bars(n, k):
    combos = list(compositions(n, k))
    assert len(combos) == math.comb(n + k - 1, k - 1)
    assert len(set(combos)) == len(combos)
    assert all(sum(c) == n and len(c) == k for c in combos)


# ---------------------------------------------------------------------------
# Text round trip
# ---------------------------------------------------------------------------

def test_parse_format_round_trip_plain():
    for n in range(1, 6):
        for key in ainf.basis(n):
            assert parse_tree(format_tree(key)) == key


def test_parse_format_round_trip_homotopy_unital():
    for n in range(0, 4):
        for key in hu.basis(n, max_vertices=3, min_degree=-3):
            assert parse_tree(format_tree(key)) == key


def test_bare_label_reads_as_corolla():
    assert parse_tree("m3") == ("m3", (), (), ())
    assert parse_tree("i") == ("i",)
    assert parse_tree("m1;0(m2(.,.))") == ("m1;0", ("m2", (), ()))
    assert parse_tree("rho(i)") == ("_rho", ("i",))


def test_parse_rejects_malformed_input():
    for text in ["zz9", "m2(.,.", "m2(.)", "m2(.,.))", ""]:
        try:
            parse_tree(text)
        except ValueError:
            continue
        raise AssertionError("parse accepted %r" % text)


def test_label_sizes():
    assert label_arity("m2") == 2
    assert label_arity("m1;1") == 2
    assert label_arity("m0;1") == 1
    assert label_arity("i") == 0
    assert label_degree("m2") == 0
    assert label_degree("m3") == -1
    assert label_degree("m1;1") == -2
    assert label_degree("m0;1") == -1
    assert label_degree("i") == 0
