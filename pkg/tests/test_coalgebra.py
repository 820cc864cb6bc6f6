"""Splitting maps on the morphism bimodules: anchors and identity rows."""

from operadic.coalgebra import (check_banded, counit_eps, delta, delta_hu,
                                hu_generator_keys, verify_coalgebra)
from operadic.elements import Element, combination


def test_plain_rows_pass_up_to_arity_six():
    rows = verify_coalgebra("f1", max_arity=6)
    assert rows and all(r["status"] == "pass" for r in rows)


def test_homotopy_unital_rows_pass_up_to_weight_five():
    rows = verify_coalgebra("f1-hu", max_weight=5)
    assert rows and all(r["status"] == "pass" for r in rows)


def test_binary_generator_splits_into_two_terms():
    split = delta(("f2", (), ()))
    assert split == combination([
        (1, ("2:f1", ("1:f2", (), ()))),
        (1, ("2:f2", ("1:f1", ()), ("1:f1", ()))),
    ])


def test_unit_counit_keeps_only_the_singleton_piece():
    assert counit_eps(("f1", ())) == Element.monomial(())
    assert counit_eps(("f3", (), (), ())).is_zero()
    assert counit_eps(("m2", ("f1", ()), ("f1", ()))) == \
        Element.monomial(("m2", (), ()))


def test_nullary_generator_splits_on_both_sides():
    split = delta_hu(("v",))
    assert split == combination([(1, ("2:f1", ("1:v",))), (1, ("2:v",))])


def test_split_terms_are_two_floor_banded():
    for key in hu_generator_keys(4):
        for term, _ in delta_hu(key):
            check_banded(term)
    for key in [("f2", (), ()), ("f3", (), (), ()),
                ("m2", ("f1", ()), ("f2", (), ()))]:
        for term, _ in delta(key):
            check_banded(term)


def test_splitting_respects_arity():
    from operadic.trees import arity
    for key in [("f2", (), ()), ("f4", (), (), (), ()),
                ("m2", ("f2", (), ()), ("f1", ()))]:
        for term, _ in delta(key):
            assert arity(term) == arity(key)
