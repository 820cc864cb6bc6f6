"""Homology of the tree complexes: literal ranks and the unit retraction."""

import pytest

from operadic.bimodules import FreeBimodule, UnitalBimodule
from operadic.elements import Element
from operadic.homology import (UnitRetraction, complex_homology, special_free,
                               verify_homology)
from operadic.operads import AInfinity, StrictlyUnital


@pytest.mark.parametrize("p", [None, 101])
def test_plain_operad_slices_are_points(p):
    result = complex_homology(AInfinity(), 4, p=p)
    assert result["dims"] == {0: 5, -1: 5, -2: 1}
    assert result["homology"] == {0: 1, -1: 0, -2: 0}


@pytest.mark.parametrize("p", [None, 101])
def test_morphism_bimodule_slices_are_points(p):
    result = complex_homology(FreeBimodule(), 3, p=p)
    assert result["dims"] == {0: 6, -1: 6, -2: 1}
    assert result["homology"] == {0: 1, -1: 0, -2: 0}


def test_higher_slices_stay_points():
    for n in (2, 5):
        result = complex_homology(AInfinity(), n)
        assert all(dim == (1 if d == 0 else 0)
                   for d, dim in result["homology"].items())


def test_retraction_kills_special_vertices():
    retraction = UnitRetraction(StrictlyUnital(with_ij=True))
    for key in [("m2", ("i",), ()), ("m2", (), ("j",)),
                ("m2", ("m2", ("i",), ()), ("j",))]:
        image = retraction.retract(Element.monomial(key))
        for ikey, _ in image:
            assert special_free(ikey)


def test_retraction_fixes_special_free_keys():
    retraction = UnitRetraction(StrictlyUnital(with_ij=True))
    for key in [("m2", (), ()), ("m3", (), (), ()),
                ("m2", ("m2", (), ()), ())]:
        x = Element.monomial(key)
        assert retraction.retract(x) == x


def test_retraction_is_chain_homotopic_to_the_identity():
    """r = 1 - d h - h d holds by construction; spot-check the pieces
    recombine on mixed elements."""
    ambient = StrictlyUnital(with_ij=True)
    retraction = UnitRetraction(ambient)
    x = Element({("m2", ("i",), ()): 2, ("m2", (), ("j",)): 3,
                 ("m3", (), ("i",), ()): -1})
    lhs = retraction.retract(x)
    rhs = x - ambient.differential(retraction.homotopy(x)) \
        - retraction.homotopy(ambient.differential(x))
    assert lhs == rhs


def test_bimodule_retraction_kills_special_vertices():
    retraction = UnitRetraction(UnitalBimodule(with_ij=True))
    for key in [("f1", ("i",)), ("m2", ("f1", ("i",)), ("f1", ())),
                ("_rho", ("i",))]:
        image = retraction.retract(Element.monomial(key))
        for ikey, _ in image:
            assert special_free(ikey)


def test_windowed_certification_passes_in_a_small_window():
    rows = verify_homology(max_arity=3, hu_max_arity=2, degree_min=-1,
                           primes=(None,))
    assert rows and all(r["status"] == "pass" for r in rows)
    ids = {r["id"] for r in rows}
    assert "homology/windowed/ainf-hu/n=2" in ids
    assert "homology/windowed/f1-hu/n=2" in ids
