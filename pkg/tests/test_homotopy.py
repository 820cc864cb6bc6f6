"""The reduced mapping space: closed remainder formula and filtration."""

from operadic.elements import Element
from operadic.homotopy import (ReducedBimodule, verify_filtration,
                               verify_homotopy_lemma)


def test_lemma_rows_pass_up_to_arity_six():
    rows = verify_homotopy_lemma(6)
    assert rows and all(r["status"] == "pass" for r in rows)


def test_filtration_rows_pass_up_to_arity_six():
    rows = verify_filtration(6)
    assert rows and all(r["status"] == "pass" for r in rows)


def test_projection_splits_the_inclusion_up_to_arity_eight():
    module = ReducedBimodule()
    for n in range(1, 9):
        x = Element.monomial(n)
        assert module.project_homology(module.include_homology(x)) == x


def test_remainder_lowers_the_group_count():
    module = ReducedBimodule()
    for n in range(1, 6):
        for key in module.basis(n):
            image = module.remainder_closed(Element.monomial(key))
            for ikey, _ in image:
                assert len(ikey) < len(key)


def test_remainder_of_single_group_keys_vanishes():
    module = ReducedBimodule()
    for n in range(1, 7):
        for key in module.basis(n):
            if len(key) == 1:
                assert module.remainder_closed(Element.monomial(key)).is_zero()


def test_neumann_inverse_solves_one_minus_remainder():
    module = ReducedBimodule()
    for n in range(1, 6):
        for key in module.basis(n):
            x = Element.monomial(key)
            total = module.neumann_inverse(x)
            assert total - module.remainder_closed(total) == x


def test_closed_formula_equals_brute_force():
    module = ReducedBimodule()
    for n in range(1, 6):
        for key in module.basis(n):
            x = Element.monomial(key)
            assert module.remainder_brute(x) == module.remainder_closed(x)
