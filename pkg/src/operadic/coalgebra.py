"""Splitting the floor of the module complexes, and the counits undoing it.

A banded tree is a floored tree whose floor labels carry floor numbers,
``1:f2`` and ``2:v``, floor 1 closest to the inputs.  Multiplication
vertices stay unprefixed; the band they lie in is read off from the
floors crossed strictly below them.  The keys ("_rho", x) have every
floor empty.  Because the bands ride along positionally, the bimodule
differentials apply to banded trees unchanged.

The splitting map lets each floor vertex break into an upper row of
floor generators gathered by a lower one; v in addition keeps an empty
upper row.  Its counit on one floor splices the unary floor generators
away and kills everything else on that floor.  Coassociativity is
checked on three-floor trees by splitting either floor again.
"""

from __future__ import annotations

from .bimodules import (FreeBimodule, HomotopyUnitalBimodule, is_rho_key,
                        with_floor_prefix)
from .elements import Element, combination
from .labels import (groups_of, is_floor_label, label_arity, label_degree,
                     make_label, split_floor_prefix)
from .render import format_element
from .trees import (compositions, input_slots, iter_vertices, label_at,
                    replace_subtree, rewrite_block, row_order, substitute,
                    subtree_at)

_TEMP = 9


def rename_floor(tree, old, new):
    """Renumber floor `old` as `new`; in place, so no sign."""
    if tree == ():
        return ()
    lab = tree[0]
    if is_floor_label(lab):
        f, bare = split_floor_prefix(lab)
        if f == old:
            lab = bare if new is None else "%d:%s" % (new, bare)
    return (lab,) + tuple(rename_floor(c, old, new) for c in tree[1:])


def splitting_gadgets(lab, upper, lower):
    """The choices one floor vertex has under the splitting map.

    An ungrouped floor generator breaks into upper generators gathered by
    a lower one; v also keeps its empty upper row.  Each choice of upper
    arities carries the suspension shuffle coefficient that also dresses
    the composition half of the floor differential.
    """
    _f, bare = split_floor_prefix(lab)
    if bare == "v":
        return [(1, (make_label("f", (1,), lower), ("%d:v" % upper,))),
                (1, ("%d:v" % lower,))]
    assert bare[0] == "f" and ";" not in bare, lab
    c = label_arity(bare)
    out = []
    for l in range(1, c + 1):
        for parts in compositions(c, l, min_part=1):
            sigma = sum(q * (p - 1) for q, p in enumerate(parts))
            kids = tuple((make_label("f", (p,), upper),) + ((),) * p
                         for p in parts)
            out.append(((-1) ** sigma,
                        (make_label("f", (l,), lower),) + kids))
    return out


def split_floor(tree, which, upper, lower):
    """Apply the splitting gadgets at every floor-`which` vertex.

    Returns an Element over trees with the new floors numbered `upper`
    (input side) and `lower`; all signs are substitution resorts.
    """
    out = Element()
    stack = [(1, rename_floor(tree, which, _TEMP))]
    while stack:
        c, t = stack.pop()
        target = None
        for p in row_order(t):
            if split_floor_prefix(label_at(t, p))[0] == _TEMP:
                target = p
                break
        if target is None:
            out += Element.monomial(t, c)
            continue
        for gc, local in splitting_gadgets(label_at(t, target), upper, lower):
            t2, s = substitute(t, target, local, label_degree)
            stack.append((c * gc * s, t2))
    return out


def delta(key):
    """The splitting map on a floored key, new floors numbered 1 and 2."""
    if is_rho_key(key):
        return Element.monomial(key)
    return split_floor(key, None, 1, 2)


def delta_left(key):
    """Split the upper floor of a two-banded key into floors 1, 2."""
    if is_rho_key(key):
        return Element.monomial(key)
    return split_floor(rename_floor(key, 2, 3), 1, 1, 2)


def delta_right(key):
    """Split the lower floor of a two-banded key into floors 2, 3."""
    if is_rho_key(key):
        return Element.monomial(key)
    return split_floor(key, 2, 2, 3)


def _splice_unary(tree, p):
    node = subtree_at(tree, p)
    assert len(node) == 2, node
    new_tree = replace_subtree(tree, p, node[1])
    d = len(p)
    surviving = {}
    for q, _ in iter_vertices(tree):
        if q == p:
            continue
        if q[:d] == p and len(q) > d:
            assert q[d] == 0
            surviving[q] = p + q[d + 1:]
        else:
            surviving[q] = q
    sign = rewrite_block(tree, [p], new_tree, surviving, [],
                         label_degree, label_degree)
    return new_tree, sign


def counit(key, which):
    """Counit on the floor-`which` factors of a two-banded key.

    Unary floor generators splice away; any other label on that floor
    kills the term.  The surviving floor drops its prefix.
    """
    if is_rho_key(key):
        return Element.monomial(key)
    other = 2 if which == 1 else 1
    total = 1
    tree = key
    while True:
        target = None
        for p, lab in iter_vertices(tree):
            if split_floor_prefix(lab)[0] == which:
                if split_floor_prefix(lab)[1] != "f1":
                    return Element()
                target = p
                break
        if target is None:
            break
        tree, s = _splice_unary(tree, target)
        total *= s
    return Element.monomial(rename_floor(tree, other, None), total)


def counit_eps(key):
    """Counit down to the operad itself.

    A floored key all of whose floor vertices are lone unary generators
    splices to a plain multiplication tree; any other floor label kills
    it.  A right-action key returns its operad part unchanged.
    """
    if is_rho_key(key):
        return Element.monomial(key[1])
    total = 1
    tree = key
    while True:
        target = None
        for p, lab in iter_vertices(tree):
            if is_floor_label(lab):
                if split_floor_prefix(lab)[1] != "f1":
                    return Element()
                target = p
                break
        if target is None:
            break
        tree, s = _splice_unary(tree, target)
        total *= s
    return Element.monomial(tree, total)


# ---------------------------------------------------------------------------
# The homotopy unital splitting, through the expansion
# ---------------------------------------------------------------------------

_HU = HomotopyUnitalBimodule()


def _split_floor_hu(key, which, upper, lower, renames):
    if is_rho_key(key):
        return Element.monomial(key)
    out = Element()
    for skey, c in _HU.expand_key(key):
        if is_rho_key(skey):
            out += c * _HU.project_key(skey)
            continue
        t = skey
        for old, new in renames:
            t = rename_floor(t, old, new)
        for bkey, c2 in split_floor(t, which, upper, lower):
            out += (c * c2) * _HU.project_key(bkey)
    return out


def delta_hu(key):
    """Splitting map of the homotopy unital floor complex."""
    return _split_floor_hu(key, None, 1, 2, [])


def delta_hu_left(key):
    return _split_floor_hu(key, 1, 1, 2, [(2, 3)])


def delta_hu_right(key):
    return _split_floor_hu(key, 2, 2, 3, [])


# ---------------------------------------------------------------------------
# Validity
# ---------------------------------------------------------------------------

def check_banded(key, floors=(1, 2)):
    """Validate a banded tree; raises ValueError when the floors are off."""
    if is_rho_key(key):
        from .bimodules import check_floored
        check_floored(key)
        return
    at = {f: set() for f in floors}
    for p, lab in iter_vertices(key):
        if is_floor_label(lab):
            f, _ = split_floor_prefix(lab)
            if f not in at:
                raise ValueError("unexpected floor %r at %r" % (f, p))
            at[f].add(p)
    want = sorted(floors, reverse=True)
    for q in input_slots(key):
        seen = [f for d in range(len(q)) for f in floors if q[:d] in at[f]]
        if seen != want:
            raise ValueError("input %r crosses floors %r" % (q, seen))
    for f in floors:
        expect = {g for g in floors if g > f}
        for p in at[f]:
            crossed = {g for d in range(len(p)) for g in floors
                       if p[:d] in at[g]}
            if crossed != expect:
                raise ValueError(
                    "floor-%d vertex at %r sits under floors %r" %
                    (f, p, sorted(crossed)))


# ---------------------------------------------------------------------------
# Identity report
# ---------------------------------------------------------------------------

def hu_generator_keys(max_weight):
    """v and the grouped generator corollas with n + (group count) bounded."""
    keys = [("v",)]
    for lab in HomotopyUnitalBimodule.generator_labels(
            max_weight, 1 - 2 * max_weight):
        if lab == "v":
            continue
        groups = groups_of(lab)
        if sum(groups) + len(groups) <= max_weight:
            keys.append((lab,) + ((),) * label_arity(lab))
    return keys


def _emap(fn, elem):
    out = Element()
    for k, c in elem:
        out += c * fn(k)
    return out


def _row(rows, check_id, lhs, rhs):
    same = lhs == rhs
    rows.append({
        "id": check_id,
        "status": "pass" if same else "fail",
        "witness": "" if same else format_element(lhs - rhs),
    })


def verify_coalgebra(kind, max_arity=6, max_weight=5):
    """Run the splitting-map identity checks and report the results.

    kind "f1" covers the plain generators up to max_arity; kind "f1-hu"
    covers v and the grouped generators with n + k <= max_weight.  Every
    generator is checked for coassociativity, both counits, and
    compatibility with the differential; the anchored small values are
    reported alongside.  Returns a sorted list of id/status/witness rows.
    """
    rows = []
    if kind == "f1":
        module = FreeBimodule()
        gens = [module.generator(n) for n in range(1, max_arity + 1)]
        split, left, right = delta, delta_left, delta_right
        _row(rows, "coalgebra/f1/anchor/f2-split",
             delta(module.generator(2)),
             combination([(1, ("2:f1", ("1:f2", (), ()))),
                          (1, ("2:f2", ("1:f1", ()), ("1:f1", ())))]))
        _row(rows, "coalgebra/f1/anchor/eps-f1",
             counit_eps(("f1", ())), Element.monomial(()))
        _row(rows, "coalgebra/f1/anchor/eps-f3",
             counit_eps(("f3", (), (), ())), Element())
        _row(rows, "coalgebra/f1/anchor/eps-linear",
             counit_eps(("m2", ("f1", ()), ("f1", ()))),
             Element.monomial(("m2", (), ())))
    elif kind == "f1-hu":
        module = HomotopyUnitalBimodule()
        gens = hu_generator_keys(max_weight)
        split, left, right = delta_hu, delta_hu_left, delta_hu_right
        _row(rows, "coalgebra/f1-hu/anchor/v-split",
             delta_hu(("v",)),
             combination([(1, ("2:f1", ("1:v",))), (1, ("2:v",))]))
        _row(rows, "coalgebra/f1-hu/anchor/rho-compat",
             delta_hu(("_rho", ("i",))),
             Element.monomial(("_rho", ("i",))))
        _row(rows, "coalgebra/f1-hu/anchor/f1-pattern-split",
             delta_hu(("f1;0", ())),
             combination([(1, ("2:f1", ("1:f1;0", ()))),
                          (1, ("2:f1;0", ("1:f1", ()))),
                          (1, ("2:f2", ("1:f1", ()), ("1:v",)))]))
    else:
        raise ValueError("unknown coalgebra kind %r" % (kind,))
    for key in gens:
        name = key[0]
        image = split(key)
        for banded, _ in image:
            if not is_rho_key(banded):
                check_banded(banded)
        _row(rows, "coalgebra/%s/coassoc/%s" % (kind, name),
             _emap(left, image), _emap(right, image))
        _row(rows, "coalgebra/%s/counit-upper/%s" % (kind, name),
             _emap(lambda k: counit(k, 1), image), Element.monomial(key))
        _row(rows, "coalgebra/%s/counit-lower/%s" % (kind, name),
             _emap(lambda k: counit(k, 2), image), Element.monomial(key))
        _row(rows, "coalgebra/%s/chain/%s" % (kind, name),
             _emap(split, module.differential(Element.monomial(key))),
             module.differential(image))
    rows.sort(key=lambda r: r["id"])
    return rows
