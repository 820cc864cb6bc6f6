"""Operad presentations: enumeration, composition, differentials."""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from operadic.elements import Element
from operadic.labels import label_degree
from operadic.operads import (AInfinity, AssociativeOperad, HomotopyUnital,
                              StrictlyUnital, compose, multiplication_gadgets,
                              tree_degree, unit_element, verify_d_squared)
from operadic.trees import arity, compositions

ainf = AInfinity()


def schroeder_counts(n_max):
    """Independent count of planar trees whose vertices all have >= 2 inputs.

    Straight dynamic programming on the arity: a tree of arity n >= 2 is a
    root with k >= 2 subtrees whose arities sum to n, and the single tree
    of arity 1 is the bare input.
    """
    counts = [0] * (n_max + 1)
    counts[1] = 1
    for n in range(2, n_max + 1):
        total = 0
        for k in range(2, n + 1):
            for combo in compositions(n, k, min_part=1):
                prod = 1
                for part in combo:
                    prod *= counts[part]
                total += prod
        counts[n] = total
    return counts[1:]


def test_enumeration_matches_dp_oracle():
    oracle = schroeder_counts(8)
    assert oracle[:6] == [1, 1, 3, 11, 45, 197]
    for n in range(1, 9):
        assert len(ainf.basis(n)) == oracle[n - 1]


def test_basis_keys_are_distinct_and_sized():
    for n in range(1, 7):
        keys = ainf.basis(n)
        assert len(set(keys)) == len(keys)
        assert all(arity(k) == n for k in keys)
        assert all(-(n - 1) <= tree_degree(k) <= 0 for k in keys)


def test_degree_filters_agree_with_full_enumeration():
    for n in range(1, 6):
        keys = ainf.basis(n)
        for d in range(-(n - 1), 1):
            sliced = ainf.basis(n, degree=d)
            assert sliced == [k for k in keys if tree_degree(k) == d]
        floor = -2
        assert ainf.basis(n, min_degree=floor) == \
            [k for k in keys if tree_degree(k) >= floor]


# ---------------------------------------------------------------------------
# Composition
# ---------------------------------------------------------------------------

def pool(max_arity, presentation=ainf):
    out = []
    for n in range(1, max_arity + 1):
        out += presentation.basis(n)
    return out


small = st.sampled_from(pool(3))


@given(st.sampled_from(pool(5)))
def test_unit_laws(tree):
    x = Element.monomial(tree)
    assert compose(ainf, [unit_element()] * arity(tree), x) == x
    assert compose(ainf, [x], unit_element()) == x


@given(small, small, small, st.randoms(use_true_random=False))
def test_composition_is_associative(a, b, c, rand):
    """gamma(gamma(a; b...); c...) = gamma(a; gamma(b; c...)...).

    The inner parts are padded with units everywhere except one random
    slot, which keeps the check multilinear but small.  Total arity stays
    under 8.
    """
    na, nb = arity(a), arity(b)
    slot_b = rand.randrange(na)
    slot_c = rand.randrange(nb)
    parts = [unit_element()] * na
    parts[slot_b] = Element.monomial(b)
    middle = compose(ainf, parts, Element.monomial(a))

    outer_parts = [unit_element()] * (na + nb - 1)
    outer_parts[slot_b + slot_c] = Element.monomial(c)
    left = compose(ainf, outer_parts, middle)

    inner_parts = [unit_element()] * nb
    inner_parts[slot_c] = Element.monomial(c)
    inner = compose(ainf, inner_parts, Element.monomial(b))
    parts2 = [unit_element()] * na
    parts2[slot_b] = inner
    right = compose(ainf, parts2, Element.monomial(a))
    assert left == right


@given(small, small, small, st.randoms(use_true_random=False))
def test_disjoint_insertions_commute_with_koszul_sign(a, b, c, rand):
    """Inserting into two different slots in either order agrees up to the
    Koszul sign of the two moved factors."""
    na = arity(a)
    if na < 2:
        return
    slots = rand.sample(range(na), 2)
    first, second = min(slots), max(slots)

    def insert(base_elem, slot, part):
        out = Element()
        for key, coeff in base_elem:
            parts = [unit_element()] * arity(key)
            parts[slot] = Element.monomial(part)
            out += coeff * compose(ainf, parts, Element.monomial(key))
        return out

    b_then_c = insert(insert(Element.monomial(a), first, b),
                      second + arity(b) - 1, c)
    c_then_b = insert(insert(Element.monomial(a), second, c), first, b)
    sign = -1 if (tree_degree(b) % 2) and (tree_degree(c) % 2) else 1
    assert b_then_c == sign * c_then_b


generators = st.sampled_from([("m%d" % n,) + ((),) * n for n in (2, 3, 4)])


@given(generators, st.lists(generators, min_size=1, max_size=3),
       st.randoms(use_true_random=False))
def test_differential_is_a_right_derivation_on_corolla_composites(
        root, picked, rand):
    """d(gamma(root; p1..pn)) expands factor by factor.

    With every part a generator corolla the canonical factor order is
    p1, .., pn, root, and the differential crosses the factors that come
    later: the term differentiating p_i carries the sign of the degrees
    of p_{i+1}..p_n and the root.
    """
    n = arity(root)
    parts = [unit_element()] * n
    filled = sorted(rand.sample(range(n), min(n, len(picked))))
    for slot, tree in zip(filled, picked):
        parts[slot] = Element.monomial(tree)
    part_degree = []
    for p in parts:
        key = next(iter(p.keys()))
        part_degree.append(0 if key == () else tree_degree(key))

    whole = ainf.differential(compose(ainf, parts, Element.monomial(root)))
    expected = compose(ainf, parts,
                       ainf.differential(Element.monomial(root)))
    for i in range(n):
        tail = sum(part_degree[i + 1:]) + tree_degree(root)
        sign = -1 if tail % 2 else 1
        touched = parts[:i] + [ainf.differential(parts[i])] + parts[i + 1:]
        expected += sign * compose(ainf, touched, Element.monomial(root))
    assert whole == expected


@given(small, small, st.randoms(use_true_random=False))
def test_d_squared_vanishes_on_composites(a, b, rand):
    parts = [unit_element()] * arity(a)
    parts[rand.randrange(arity(a))] = Element.monomial(b)
    x = compose(ainf, parts, Element.monomial(a))
    assert ainf.differential(ainf.differential(x)).is_zero()


def test_differential_matches_independent_leibniz_reimplementation():
    """Double-entry check of the Leibniz sign rule.

    Recompute d on every small basis key from scratch: walk the canonical
    row order, substitute each vertex's boundary gadgets in place, and
    sign each term by the degrees of the factors later in that order.
    """
    from operadic.labels import label_degree
    from operadic.trees import label_at, row_order, substitute

    for n in range(2, 6):
        for key in ainf.basis(n):
            order = row_order(key)
            degrees = [label_degree(label_at(key, p)) for p in order]
            expected = Element()
            for idx, path in enumerate(order):
                tail = sum(degrees[idx + 1:])
                outer = -1 if tail % 2 else 1
                for gc, local in multiplication_gadgets(label_at(key, path)):
                    new_tree, s = substitute(key, path, local, label_degree)
                    expected += Element.monomial(new_tree, outer * s * gc)
            assert ainf.differential(Element.monomial(key)) == expected


def test_associative_operad_composes_by_addition():
    As = AssociativeOperad()
    out = compose(As, [Element.monomial(2), Element.monomial(3)],
                  Element.monomial(2))
    assert out == Element.monomial(5)
    assert As.differential(Element.monomial(4)).is_zero()
    Ass = AssociativeOperad(unital=True)
    assert Ass.basis(0) == [0]
    assert As.basis(0) == []


# ---------------------------------------------------------------------------
# Differentials
# ---------------------------------------------------------------------------

def test_m3_boundary_is_the_associator():
    d = ainf.differential(Element.monomial(("m3", (), (), ())))
    assert d == Element({("m2", ("m2", (), ()), ()): 1,
                         ("m2", (), ("m2", (), ())): -1})


def test_d_squared_reports_pass_in_small_bounds():
    assert all(r["status"] == "pass" for r in verify_d_squared(ainf, 6))
    assert all(r["status"] == "pass"
               for r in verify_d_squared(HomotopyUnital(), 4, max_weight=4))
    assert all(r["status"] == "pass"
               for r in verify_d_squared(StrictlyUnital(with_ij=True), 5))


class CorruptedAInfinity(AInfinity):
    """Flips the sign of one term in the ternary boundary."""

    def gadgets(self, lab):
        gads = multiplication_gadgets(lab)
        if lab == "m3":
            (c0, t0), rest = gads[0], gads[1:]
            return [(-c0, t0)] + rest
        return gads

    def differential(self, elem):
        out = Element()
        from operadic.operads import leibniz_terms
        for tree, coeff in elem:
            for c, t in leibniz_terms(tree, self.gadgets):
                out += Element.monomial(t, c * coeff)
        return out


def test_sign_corruption_in_m3_is_flagged_at_m4():
    bad = CorruptedAInfinity()
    rows = {r["id"]: r for r in verify_d_squared(bad, 4)}
    assert rows["dsq/ainf/m3"]["status"] == "pass"
    assert rows["dsq/ainf/m4"]["status"] == "fail"
    assert rows["dsq/ainf/m4"]["witness"]


# ---------------------------------------------------------------------------
# Strict and homotopy units
# ---------------------------------------------------------------------------

def test_strict_unit_absorbs_binary_products():
    su = StrictlyUnital(with_ij=True)
    one = Element.monomial(())
    assert su.normalize_tree(("m2", ("1su",), ())) == one
    assert su.normalize_tree(("m2", (), ("1su",))) == one
    assert su.normalize_tree(("m3", ("1su",), (), ())).is_zero()
    kept = ("m2", ("i",), ())
    assert su.normalize_tree(kept) == Element.monomial(kept)


def test_j_boundary_measures_the_unit_gap():
    su = StrictlyUnital(with_ij=True)
    d = su.differential(Element.monomial(("j",)))
    assert d == Element({("1su",): 1, ("i",): -1})


def test_homotopy_unit_generator_boundaries():
    hu = HomotopyUnital()
    d = hu.differential(Element.monomial(("m1;0", ())))
    assert d == Element({(): 1, ("m2", (), ("i",)): -1})
    d0 = hu.differential(Element.monomial(("m0;1", ())))
    assert d0 == Element({(): 1, ("m2", ("i",), ()): -1})


def test_homotopy_unital_basis_needs_bounds():
    hu = HomotopyUnital()
    try:
        hu.basis(2)
    except ValueError:
        pass
    else:
        raise AssertionError("unbounded enumeration should refuse")
    keys = hu.basis(2, max_vertices=3, min_degree=-2)
    assert len(keys) == len(set(keys))
    assert all(hu.key_arity(k) == 2 for k in keys)
    assert all(hu.key_degree(k) >= -2 for k in keys)
