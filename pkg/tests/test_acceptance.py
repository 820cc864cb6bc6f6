"""Acceptance gate: eight end-to-end checks, one printed line each.

Every check is exact (integer and rational arithmetic, zero tolerance).
Each test prints a single ``criterion N ...: PASS`` or ``FAIL`` line so the
suite doubles as a terse report under ``pytest -s``.
"""

import random
import sys
import time

from operadic.bimodules import (FreeBimodule, HomotopyUnitalBimodule,
                                verify_d_squared_bimodule)
from operadic.cli import main as cli_main
from operadic.coalgebra import delta_hu, verify_coalgebra
from operadic.elements import Element, combination
from operadic.evaluate import (check_ainf_algebra, check_ainf_morphism,
                               check_fukaya, check_hu_algebra,
                               compose_morphisms, identity_morphism)
from operadic.homology import complex_homology, verify_homology
from operadic.homotopy import verify_filtration, verify_homotopy_lemma
from operadic.labels import make_label
from operadic.operads import AInfinity, HomotopyUnital, verify_d_squared
from tests.test_evaluate import (build_mutated, is_caught, random_algebra,
                                 random_morphism, tables_equal, unital_2dim)


def announce(label, ok, detail=""):
    line = "%s: %s" % (label, "PASS" if ok else "FAIL")
    if detail and not ok:
        line += " (%s)" % detail
    print(line)
    sys.stdout.flush()
    return ok


def all_pass(rows):
    return all(r["status"] == "pass" for r in rows)


def test_criterion_1_basis_counts_match_an_independent_oracle():
    """Total basis dimensions for arities 1..6 against a planar-tree count.

    The oracle is a convolution recurrence computed here from scratch: a
    tree is a leaf or an internal vertex with at least two planar subtrees,
    so the count c(n) of trees on n inputs satisfies c(1) = 1 and
    c(n) = sum over k >= 2 of the ways to split n inputs into k ordered
    blocks, each carrying its own tree.
    """
    started = time.monotonic()
    counts = {1: 1}
    for n in range(2, 7):
        counts[n] = sum(_splits(n, k, counts) for k in range(2, n + 1))

    frozen = [1, 1, 3, 11, 45, 197]
    oracle = [counts[n] for n in range(1, 7)]
    engine = [len(AInfinity().basis(n)) for n in range(1, 7)]
    elapsed = time.monotonic() - started
    ok = oracle == frozen and engine == frozen and elapsed < 5.0
    assert announce("criterion 1 basis counts", ok,
                    "oracle %r engine %r in %.2fs" % (oracle, engine, elapsed))


def _splits(n, k, counts):
    """Ordered k-tuples of positive arities summing to n, each weighted by
    its tree count; every arity in a tuple is below n, so the recurrence
    closes."""
    if k == 0:
        return 1 if n == 0 else 0
    total = 0
    for first in range(1, n - k + 2):
        total += counts[first] * _splits(n - first, k - 1, counts)
    return total


def test_criterion_2_differentials_square_to_zero():
    started = time.monotonic()
    rows = []
    rows += verify_d_squared(AInfinity(), 8)
    rows += verify_d_squared(HomotopyUnital(), 7, max_weight=7)
    rows += verify_d_squared_bimodule(FreeBimodule(), 7)
    rows += verify_d_squared_bimodule(HomotopyUnitalBimodule(), 6,
                                      max_weight=6)
    elapsed = time.monotonic() - started
    bad = [r["id"] for r in rows if r["status"] != "pass"]
    ok = not bad and elapsed < 120.0
    assert announce("criterion 2 squared differentials", ok,
                    "%d rows, failures %r, %.1fs" % (len(rows), bad, elapsed))


def test_criterion_3_anchored_differentials():
    ainf = AInfinity()
    hu = HomotopyUnital()
    free = FreeBimodule()
    hu_bim = HomotopyUnitalBimodule()
    checks = []

    # The two unit correctors: boundary = identity minus unit fed into
    # the product from the right, respectively the left.
    checks.append(hu.differential(Element.monomial(("m1;0", ())))
                  == Element({(): 1, ("m2", (), ("i",)): -1}))
    checks.append(hu.differential(Element.monomial(("m0;1", ())))
                  == Element({(): 1, ("m2", ("i",), ()): -1}))

    # The nullary unit-gap generator in the morphism bimodule.
    checks.append(hu_bim.differential(Element.monomial(("v",)))
                  == combination([(1, ("_rho", ("i",))),
                                  (-1, ("f1", ("i",)))]))

    # The unary morphism generator is a cycle.
    checks.append(free.differential(
        Element.monomial(("f1", ()))).is_zero())

    # The ternary boundary is the associator with the engine's frozen
    # orientation: left-association enters with coefficient +1.
    checks.append(ainf.differential(Element.monomial(("m3", (), (), ())))
                  == Element({("m2", ("m2", (), ()), ()): 1,
                              ("m2", (), ("m2", (), ())): -1}))

    assert announce("criterion 3 anchored differentials", all(checks),
                    "flags %r" % (checks,))


def test_criterion_4_homotopy_lemma_reproof():
    started = time.monotonic()
    rows = verify_homotopy_lemma(6) + verify_filtration(6)
    elapsed = time.monotonic() - started
    bad = [r["id"] for r in rows if r["status"] != "pass"]
    ok = not bad and elapsed < 60.0
    assert announce("criterion 4 homotopy lemma", ok,
                    "%d rows, failures %r, %.1fs" % (len(rows), bad, elapsed))


def test_criterion_5_quasi_isomorphism_certificates():
    started = time.monotonic()
    rows = verify_homology()
    bad = [r["id"] for r in rows if r["status"] != "pass"]

    literal = []
    for presentation in (AInfinity(), FreeBimodule()):
        for n in range(1, 6):
            homology = complex_homology(presentation, n)["homology"]
            literal.append(sum(homology.values()) == homology.get(0, 0) == 1)
    elapsed = time.monotonic() - started
    ok = not bad and all(literal) and elapsed < 120.0
    assert announce("criterion 5 homology certificates", ok,
                    "%d rows, failures %r, literal %r, %.1fs"
                    % (len(rows), bad, literal, elapsed))


def test_criterion_6_coalgebra_structure():
    rows = verify_coalgebra("f1", max_arity=6)
    rows += verify_coalgebra("f1-hu", max_weight=5)
    bad = [r["id"] for r in rows if r["status"] != "pass"]

    # The unit-gap generator splits as itself on one floor plus itself
    # over the unary component; the nullary right-action image is fixed.
    vee = delta_hu(("v",)) == combination([(1, ("2:f1", ("1:v",))),
                                           (1, ("2:v",))])
    rho = delta_hu(("_rho", ("i",))) == Element.monomial(("_rho", ("i",)))
    ok = not bad and vee and rho
    assert announce("criterion 6 coalgebra", ok,
                    "failures %r, v split %r, rho fixed %r" % (bad, vee, rho))


def test_criterion_7_evaluator_and_composition():
    flags = []

    algebra = unital_2dim()
    flags.append(all_pass(check_ainf_algebra(algebra, 5)))
    flags.append(all_pass(check_hu_algebra(algebra, 6)))
    flags.append(all_pass(check_fukaya(algebra, 4)))

    mutations = []
    for key in [(("one", "one"), "one"), (("one", "x"), "x"),
                (("x", "one"), "x")]:
        for delta in (1, -2):
            mutations.append(("m2", key, delta))
    for delta in (1, -2):
        mutations.append(("i", ((), "one"), delta))
    flags.append(all(is_caught(build_mutated(m)) for m in mutations))
    flags.append(not is_caught(build_mutated(None)))

    for p in (None, 101):
        rng = random.Random(29)
        chain = [random_algebra(rng, p, names) for names in
                 ([("a", 0), ("b", 1)], [("u", 0), ("w", -1), ("z", 1)],
                  [("s", 0), ("t", 1)], [("q", 0), ("r", -1)])]
        g = random_morphism(rng, chain[0], chain[1], p)
        h = random_morphism(rng, chain[1], chain[2], p)
        e = random_morphism(rng, chain[2], chain[3], p)
        left = compose_morphisms(compose_morphisms(g, h, n_max=4), e,
                                 n_max=4)
        right = compose_morphisms(g, compose_morphisms(h, e, n_max=4),
                                  n_max=4)
        flags.append(all(
            tables_equal(left.component(make_label("f", (n,))),
                         right.component(make_label("f", (n,))))
            for n in range(1, 5)))
        ident = identity_morphism(chain[0])
        viag = compose_morphisms(ident, g, n_max=4)
        flags.append(all(
            tables_equal(viag.component(make_label("f", (n,))),
                         g.component(make_label("f", (n,))))
            for n in range(1, 5)))

    doubled = identity_morphism(algebra)
    composite = compose_morphisms(doubled, doubled, n_max=4)
    flags.append(all_pass(check_ainf_morphism(composite, 4)))

    assert announce("criterion 7 evaluator", all(flags),
                    "flags %r" % (flags,))


def test_criterion_8_byte_deterministic_verification(capsys):
    outputs = []
    for _ in range(2):
        code = cli_main(["verify", "--suite", "all"])
        captured = capsys.readouterr()
        assert code == 0
        outputs.append(captured.out)
    ok = (outputs[0] == outputs[1] and outputs[0]
          and outputs[0].splitlines()[-1].endswith("0 failed"))
    assert announce("criterion 8 determinism", bool(ok),
                    "runs differ or failures present")
