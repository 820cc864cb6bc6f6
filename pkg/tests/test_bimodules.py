"""Bimodule presentations: floored trees, actions, differentials."""

from hypothesis import given
from hypothesis import strategies as st

from operadic.bimodules import (FreeBimodule, HomotopyUnitalBimodule,
                                UnitalBimodule, check_floored, is_rho_key,
                                left_action, right_action,
                                verify_d_squared_bimodule)
from operadic.elements import Element, combination
from operadic.operads import AInfinity, compose, unit_element
from operadic.trees import arity, compositions

ainf = AInfinity()
free = FreeBimodule()


def floored_counts(n_max):
    """Independent count of trees with one floor crossing per input path.

    DP on the arity: a floored tree is either a floor vertex of arity
    k >= 1 over k plain operad trees, or a multiplication root with k >= 2
    floored subtrees.  Plain operad counts feed in from their own DP.
    """
    plain = [0] * (n_max + 1)
    plain[1] = 1
    for n in range(2, n_max + 1):
        for k in range(2, n + 1):
            for combo in compositions(n, k, min_part=1):
                prod = 1
                for part in combo:
                    prod *= plain[part]
                plain[n] += prod
    floored = [0] * (n_max + 1)
    for n in range(1, n_max + 1):
        for k in range(1, n + 1):
            for combo in compositions(n, k, min_part=1):
                prod = 1
                for part in combo:
                    prod *= plain[part]
                floored[n] += prod
        for k in range(2, n + 1):
            for combo in compositions(n, k, min_part=1):
                prod = 1
                for part in combo:
                    prod *= floored[part]
                floored[n] += prod
    return floored[1:]


def test_enumeration_matches_dp_oracle():
    oracle = floored_counts(7)
    assert oracle[:3] == [1, 3, 13]
    for n in range(1, 8):
        assert len(free.basis(n)) == oracle[n - 1]


def test_arity_three_dimension_table():
    keys = free.basis(3)
    by_degree = {}
    for k in keys:
        by_degree[free.key_degree(k)] = by_degree.get(free.key_degree(k), 0) + 1
    assert by_degree == {0: 6, -1: 6, -2: 1}
    assert len(free.basis(0)) == 0


def test_every_basis_key_is_well_floored():
    for n in range(1, 6):
        for key in free.basis(n):
            check_floored(key)
            assert free.key_arity(key) == n


# ---------------------------------------------------------------------------
# Actions
# ---------------------------------------------------------------------------

def op_pool(max_arity):
    out = []
    for n in range(1, max_arity + 1):
        out += ainf.basis(n)
    return out


def mod_pool(max_arity):
    out = []
    for n in range(1, max_arity + 1):
        out += free.basis(n)
    return out


@given(st.sampled_from(mod_pool(4)))
def test_left_action_unit_law(key):
    x = Element.monomial(key)
    parts = [unit_element()] * free.key_arity(key)
    assert left_action(free, parts, x) == x


@given(st.sampled_from(mod_pool(3)), st.sampled_from(op_pool(3)),
       st.randoms(use_true_random=False))
def test_left_action_composes_with_operad_composition(mkey, okey, rand):
    """Acting twice from the left equals acting once by the composite."""
    n = free.key_arity(mkey)
    slot = rand.randrange(n)
    parts = [unit_element()] * n
    parts[slot] = Element.monomial(okey)
    once = left_action(free, parts, Element.monomial(mkey))

    inner = ("m2", (), ())
    sub_parts = [unit_element()] * arity(okey)
    sub_slot = rand.randrange(arity(okey))
    sub_parts[sub_slot] = Element.monomial(inner)

    lifted = [unit_element()] * n
    lifted[slot] = compose(ainf, sub_parts, Element.monomial(okey))
    direct = left_action(free, lifted, Element.monomial(mkey))
    two_step = left_action(
        free,
        [unit_element()] * (slot + sub_slot) + [Element.monomial(inner)]
        + [unit_element()] * (n - 1 - slot + arity(okey) - 1 - sub_slot),
        once)
    assert two_step == direct


@given(st.sampled_from(op_pool(3)), st.sampled_from(mod_pool(2)),
       st.randoms(use_true_random=False))
def test_right_action_fills_operad_inputs(okey, mkey, rand):
    k = arity(okey)
    parts = [Element.monomial(free.generator(1))] * k
    slot = rand.randrange(k)
    parts[slot] = Element.monomial(mkey)
    out = right_action(free, parts, Element.monomial(okey))
    assert not out.is_zero()
    for key, _ in out:
        assert free.key_arity(key) == k - 1 + free.key_arity(mkey)
        check_floored(key)


def test_right_action_of_nullary_tree_is_a_rho_image():
    hu_bim = HomotopyUnitalBimodule()
    out = right_action(hu_bim, [], Element.monomial(("i",)))
    assert out == Element.monomial(("_rho", ("i",)))
    assert is_rho_key(("_rho", ("i",)))


# ---------------------------------------------------------------------------
# Differentials
# ---------------------------------------------------------------------------

def test_d_squared_reports_pass_in_small_bounds():
    for bimod, bound, weight in ((free, 5, None),
                                 (UnitalBimodule(with_ij=True), 4, None),
                                 (HomotopyUnitalBimodule(), 3, 3)):
        rows = verify_d_squared_bimodule(bimod, bound, max_weight=weight)
        assert rows and all(r["status"] == "pass" for r in rows)


def test_v_boundary_measures_the_unit_gap():
    hu_bim = HomotopyUnitalBimodule()
    d = hu_bim.differential(Element.monomial(("v",)))
    assert d == combination([(1, ("_rho", ("i",))), (-1, ("f1", ("i",)))])


def test_f2_boundary_is_the_morphism_square():
    d = free.differential(Element.monomial(("f2", (), ())))
    assert d == Element({("f1", ("m2", (), ())): 1,
                         ("m2", ("f1", ()), ("f1", ())): -1})


@given(st.sampled_from(mod_pool(4)))
def test_d_squared_vanishes_keywise(key):
    x = Element.monomial(key)
    assert free.differential(free.differential(x)).is_zero()


def test_differential_preserves_arity_and_raises_degree():
    """Generators sit in non-positive degrees and d is a degree +1 map."""
    for n in range(1, 5):
        for key in free.basis(n):
            d = free.differential(Element.monomial(key))
            for image, _ in d:
                assert free.key_arity(image) == n
                assert free.key_degree(image) == free.key_degree(key) + 1
