"""The operads of the engine.

Four operads are implemented over a fixed ground field of rationals:

* ``AssociativeOperad(unital=False)`` -- one operation in each arity (from 1,
  or from 0 in the unital case), zero differential;
* ``AInfinity`` -- the free dg-operad on one n-ary generator ``mN`` of degree
  2-N for every N >= 2, with the standard differential;
* ``StrictlyUnital(with_ij=...)`` -- the strictly unital extension: a nullary
  strict unit ``1su`` with the two-sided unit relations, optionally extended
  by the nullary pair ``i`` (a degree-0 cycle) and ``j`` with
  d(j) = 1su - i;
* ``HomotopyUnital`` -- the sub-dg-operad of the previous one generated by
  ``i`` and the grouped multiplications ``mN1;N2;...``; its differential is
  computed by expanding the grouped generators through j-arguments, applying
  the strictly unital differential, and reading the result back.

All elements are `Element` combinations of tree keys; see `trees` for the
tree encoding and the sign conventions.
"""

from __future__ import annotations

from .elements import Element
from .labels import (groups_of, is_grouped, label_arity, label_degree,
                     make_label, split_floor_prefix)
from .trees import (TreeEnumerator, arity, compositions, graft, iter_vertices,
                    label_at, replace_subtree, rewrite_block, row_order,
                    subtree_at, substitute)


def tree_degree(tree):
    return sum(label_degree(lab) for _, lab in iter_vertices(tree))


def tree_arity(tree):
    return arity(tree)


def leibniz_terms(tree, gadgets_for):
    """Raw differential of one tree in a free structure.

    Yields (coeff, tree) pairs: for each vertex, each gadget of its label is
    substituted in place; the Leibniz sign is -1 to the total degree of the
    factors that come later in the row order.
    """
    order = row_order(tree)
    degrees = [label_degree(label_at(tree, p)) for p in order]
    for idx, path in enumerate(order):
        gadgets = gadgets_for(label_at(tree, path))
        if not gadgets:
            continue
        tail = sum(degrees[idx + 1:])
        leibniz_sign = -1 if tail % 2 else 1
        for gcoeff, local in gadgets:
            new_tree, s = substitute(tree, path, local, label_degree)
            yield leibniz_sign * s * gcoeff, new_tree


def multiplication_gadgets(lab):
    """Differential terms of a plain n-ary multiplication label.

    d(mN) is the signed sum over ways to pull a smaller multiplication out
    through one input block: for j + p + q = N with 1 < p < N the local tree
    has root m(j+1+q) with an m(p)-corolla in slot j+1, and the coefficient
    is -(-1)^(j*p+q).
    """
    n = label_arity(lab)
    out = []
    for p in range(2, n):
        for j in range(0, n - p + 1):
            q = n - p - j
            inner = (make_label("m", (p,)),) + ((),) * p
            kids = ((),) * j + (inner,) + ((),) * q
            root = (make_label("m", (j + 1 + q,)),) + kids
            coeff = -1 if (j * p + q) % 2 == 0 else 1
            out.append((coeff, root))
    return out


class AssociativeOperad:
    """One basis operation per arity; keys are plain integers."""

    def __init__(self, unital=False):
        self.unital = unital
        self.min_arity = 0 if unital else 1

    def basis(self, n, max_vertices=None, degree=None, min_degree=None):
        if n < self.min_arity:
            return []
        if degree not in (None, 0):
            return []
        if min_degree is not None and min_degree > 0:
            return []
        return [n]

    def key_degree(self, key):
        return 0

    def key_arity(self, key):
        return key

    def differential(self, elem):
        assert isinstance(elem, Element)
        return Element()

    def compose(self, parts, root):
        assert len(parts) == root
        return sum(parts)


class AInfinity:
    """The free dg-operad on one generator of each arity >= 2."""

    def __init__(self):
        self._enumerators = {}

    # -- keys ------------------------------------------------------------
    def key_degree(self, key):
        return tree_degree(key)

    def key_arity(self, key):
        return arity(key)

    def generator(self, n):
        assert n >= 2
        return (make_label("m", (n,)),) + ((),) * n

    # -- differential ----------------------------------------------------
    def gadgets(self, lab):
        return multiplication_gadgets(lab)

    def normalize_tree(self, tree):
        return Element.monomial(tree)

    def differential(self, elem):
        out = Element()
        for key, coeff in elem:
            for c, t in leibniz_terms(key, self.gadgets):
                out += (coeff * c) * self.normalize_tree(t)
        return out

    # -- enumeration -----------------------------------------------------
    def basis(self, n, max_vertices=None, degree=None, min_degree=None):
        if n not in self._enumerators:
            labs = [(make_label("m", (k,)), k) for k in range(2, max(n, 2) + 1)]
            self._enumerators[n] = TreeEnumerator(labs)
        trees = self._enumerators[n].trees(n, max_vertices)
        return _filter_by_degree(trees, self.key_degree, degree, min_degree)


def _filter_by_degree(trees, degfun, degree, min_degree):
    out = []
    for t in trees:
        d = degfun(t)
        if degree is not None and d != degree:
            continue
        if min_degree is not None and d < min_degree:
            continue
        out.append(t)
    out.sort()
    return out


class StrictlyUnital:
    """The strictly unital extension, optionally with the i, j pair.

    The strict unit is a nullary degree-0 cycle ``1su``; feeding it to a
    binary multiplication deletes the multiplication, feeding it to a longer
    one gives zero.  Trees are kept in the rewritten normal form where
    ``1su`` never appears below another vertex, so the only surviving
    occurrence is the lone tree ("1su",).
    """

    def __init__(self, with_ij=False):
        self.with_ij = with_ij
        self._enumerators = {}
        self._dcache = {}

    def key_degree(self, key):
        return tree_degree(key)

    def key_arity(self, key):
        return arity(key)

    def gadgets(self, lab):
        if lab == "j":
            return [(1, ("1su",)), (-1, ("i",))]
        if lab in ("i", "1su"):
            return []
        return multiplication_gadgets(lab)

    # -- the unit relations as a rewriting system ------------------------
    def _find_unit_config(self, tree):
        """Deepest occurrence of 1su as a child of another vertex."""
        best = None
        for path, lab in iter_vertices(tree):
            if lab != "1su" or not path:
                continue
            key = (-len(path), path)
            if best is None or key < best[0]:
                best = (key, path)
        return None if best is None else best[1]

    def normalize_tree(self, tree):
        total = 1
        while True:
            path = self._find_unit_config(tree)
            if path is None:
                return Element.monomial(tree, total)
            parent = path[:-1]
            parent_label = label_at(tree, parent)
            assert parent_label[0] == "m", parent_label
            if label_arity(parent_label) != 2:
                return Element()
            tree, sign = self._splice(tree, parent, path[-1])
            total *= sign

    def _splice(self, tree, parent, drop_slot):
        node = subtree_at(tree, parent)
        keep_slot = 1 - drop_slot
        kept = node[1 + keep_slot]
        new_tree = replace_subtree(tree, parent, kept)
        d = len(parent)
        surviving = {}
        for p, _ in iter_vertices(tree):
            if p == parent or p == parent + (drop_slot,):
                continue
            if p[:d] == parent and len(p) > d:
                assert p[d] == keep_slot
                surviving[p] = parent + p[d + 1:]
            else:
                surviving[p] = p
        sign = rewrite_block(
            tree, [parent + (drop_slot,), parent], new_tree, surviving, [],
            label_degree, label_degree)
        return new_tree, sign

    def differential(self, elem):
        out = Element()
        for key, coeff in elem:
            if key not in self._dcache:
                d = Element()
                for c, t in leibniz_terms(key, self.gadgets):
                    d += c * self.normalize_tree(t)
                self._dcache[key] = d
            out += coeff * self._dcache[key]
        return out

    # -- enumeration -----------------------------------------------------
    def basis(self, n, max_vertices=None, degree=None, min_degree=None):
        """Normal-form basis trees of arity n.

        Without i and j the alphabet has no nullary labels, so no vertex
        bound is needed and the answer matches the unextended operad, plus
        the lone strict unit in arity 0.
        """
        key = (n, max_vertices, self.with_ij)
        if key not in self._enumerators:
            labs = [(make_label("m", (k,)), k) for k in range(2, max(n + (max_vertices or 0), 2) + 1)]
            if self.with_ij:
                labs += [("i", 0), ("j", 0)]
            self._enumerators[key] = TreeEnumerator(labs)
        trees = list(self._enumerators[key].trees(n, max_vertices))
        if n == 0:
            trees.append(("1su",))
        return _filter_by_degree(trees, self.key_degree, degree, min_degree)


class HomotopyUnital:
    """The homotopy unital operad: free on i and the grouped multiplications.

    A generator label mN1;...;Nk stands for the expansion
    (1^N1 (x) j (x) 1^N2 (x) ... (x) j (x) 1^Nk) m(N+k-1) inside the
    strictly unital operad with i, j added, and the differential is
    transported along that embedding.
    """

    def __init__(self):
        self.ambient = StrictlyUnital(with_ij=True)
        self._ecache = {}
        self._pcache = {}
        self._dcache = {}

    def key_degree(self, key):
        return tree_degree(key)

    def key_arity(self, key):
        return arity(key)

    @staticmethod
    def generator_labels(max_arity, min_degree):
        """All grouped m-labels with arity <= max_arity, degree >= min_degree."""
        out = []
        k = 1
        while 4 - 2 * k >= min_degree:
            for n in range(0, max_arity + 1):
                if n + k < 3 or 4 - n - 2 * k < min_degree:
                    continue
                for groups in _compositions_any(n, k):
                    out.append(make_label("m", groups))
            k += 1
        return out

    # -- expansion into the ambient operad -------------------------------
    @staticmethod
    def expansion_local(lab):
        floor, bare = split_floor_prefix(lab)
        groups = groups_of(bare)
        n, k = sum(groups), len(groups)
        kids = []
        for q, g in enumerate(groups):
            kids.extend([()] * g)
            if q < k - 1:
                kids.append(("j",))
        return (make_label(bare[0], (n + k - 1,), floor),) + tuple(kids)

    def expand_tree(self, tree):
        """Rewrite every grouped label through its j-expansion.

        Returns (sign, tree-over-m/i/j).  The sign is the Koszul cost of
        inserting each expansion block in place and re-sorting to row order.
        """
        if tree in self._ecache:
            return self._ecache[tree]
        self._ecache[tree] = out = self._expand_tree(tree)
        return out

    def _expand_tree(self, tree):
        sign = 1
        while True:
            target = None
            for path, lab in iter_vertices(tree):
                if is_grouped(lab):
                    target = path
                    break
            if target is None:
                return sign, tree
            local = self.expansion_local(label_at(tree, target))
            tree, s = substitute(tree, target, local, label_degree)
            sign *= s

    def project_tree(self, tree):
        """Inverse of the expansion on normal-form ambient trees.

        Lone j projects to zero, the lone strict unit to i; any other tree
        absorbs its j-arguments into group labels.  The sign is fixed by
        re-expanding and comparing, which doubles as a consistency check.
        """
        if tree in self._pcache:
            return self._pcache[tree]
        self._pcache[tree] = out = self._project_tree(tree)
        return out

    def _project_tree(self, tree):
        if tree == ("j",):
            return Element()
        if tree == ("1su",):
            return Element.monomial(("i",))
        if tree in ((), ("i",)):
            return Element.monomial(tree)
        packed = _absorb_j(tree)
        sign, back = self.expand_tree(packed)
        assert back == tree, (tree, packed, back)
        return Element.monomial(packed, sign)

    def differential(self, elem):
        out = Element()
        for key, coeff in elem:
            if key not in self._dcache:
                sign, ambient_tree = self.expand_tree(key)
                d = self.ambient.differential(
                    Element.monomial(ambient_tree, sign))
                self._dcache[key] = d.map_keys(self.project_tree)
            out += coeff * self._dcache[key]
        return out

    def basis(self, n, max_vertices=None, degree=None, min_degree=None):
        if max_vertices is None or (degree is None and min_degree is None):
            raise ValueError(
                "the homotopy unital operad has infinitely many trees in "
                "each arity and each (arity, degree) slice; pass "
                "max_vertices and a degree bound")
        dmin = degree if min_degree is None else min_degree
        labs = [(lab, label_arity(lab))
                for lab in self.generator_labels(n, dmin)]
        labs.append(("i", 0))
        trees = TreeEnumerator(labs).trees(n, max_vertices)
        return _filter_by_degree(trees, self.key_degree, degree,
                                 None if min_degree is None else min_degree)


def _absorb_j(tree):
    if tree == ():
        return ()
    lab = tree[0]
    if lab == "i":
        return ("i",)
    assert lab[0] == "m", "unexpected label below projection: %r" % lab
    groups = []
    run = 0
    kids = []
    for child in tree[1:]:
        if child != () and child[0] == "j":
            groups.append(run)
            run = 0
        else:
            kids.append(_absorb_j(child))
            run += 1
    groups.append(run)
    return (make_label("m", tuple(groups)),) + tuple(kids)


def _compositions_any(n, k):
    return compositions(n, k, min_part=0)


# ---------------------------------------------------------------------------
# Composition and the d-squared report
# ---------------------------------------------------------------------------

def unit_element():
    """The identity operation: the tree with one input and no vertex."""
    return Element.monomial(())


def compose(pres, parts, root):
    """Operadic composition: plug the `parts` into the input slots of `root`.

    All arguments after the presentation are Elements; the result is
    multilinear in every slot.  Each basis term grafts the part trees into
    the root tree, picks up the Koszul sign of re-sorting the factors into
    row order, and goes through the presentation's normal form when there
    is one.
    """
    if isinstance(pres, AssociativeOperad):
        out = Element()
        for rkey, rc in root:
            if len(parts) != rkey:
                raise ValueError("expected %d parts, got %d" % (rkey, len(parts)))
            for combo in _slot_products(parts):
                coeff = rc
                for _, c in combo:
                    coeff *= c
                out += Element.monomial(sum(k for k, _ in combo), coeff)
        return out
    normalize = getattr(pres, "normalize_tree", None)
    out = Element()
    for rkey, rc in root:
        n = pres.key_arity(rkey)
        if len(parts) != n:
            raise ValueError("expected %d parts, got %d" % (n, len(parts)))
        for combo in _slot_products(parts):
            coeff = rc
            for _, c in combo:
                coeff *= c
            tree, sign = graft([k for k, _ in combo], rkey, label_degree)
            if normalize is None:
                out += Element.monomial(tree, coeff * sign)
            else:
                out += (coeff * sign) * normalize(tree)
    return out


def _slot_products(parts):
    if not parts:
        yield []
        return
    for head in parts[0]:
        for rest in _slot_products(parts[1:]):
            yield [head] + rest


def presentation_name(pres):
    """Short reporting name of a presentation object."""
    if isinstance(pres, AssociativeOperad):
        return "ass" if pres.unital else "as"
    if isinstance(pres, AInfinity):
        return "ainf"
    if isinstance(pres, StrictlyUnital):
        return "ainf-su-ij" if pres.with_ij else "ainf-su"
    if isinstance(pres, HomotopyUnital):
        return "ainf-hu"
    return type(pres).__name__


def dsq_generators(pres, max_arity, min_degree=None, max_weight=None):
    """The (label, corolla Element) pairs the d-squared report runs over."""
    out = []
    if isinstance(pres, AssociativeOperad):
        for n in range(pres.min_arity, max_arity + 1):
            out.append(("m(%d)" % n, Element.monomial(n)))
    elif isinstance(pres, AInfinity):
        for n in range(2, max_arity + 1):
            out.append(("m%d" % n, Element.monomial(pres.generator(n))))
    elif isinstance(pres, StrictlyUnital):
        out.append(("1su", Element.monomial(("1su",))))
        if pres.with_ij:
            out.append(("i", Element.monomial(("i",))))
            out.append(("j", Element.monomial(("j",))))
        for n in range(2, max_arity + 1):
            corolla = (make_label("m", (n,)),) + ((),) * n
            out.append(("m%d" % n, Element.monomial(corolla)))
    elif isinstance(pres, HomotopyUnital):
        out.append(("i", Element.monomial(("i",))))
        floor = min_degree if min_degree is not None else 4 - max_arity - 2 * (max_weight or max_arity)
        for lab in pres.generator_labels(max_arity, floor):
            groups = groups_of(lab)
            if max_weight is not None and sum(groups) + len(groups) > max_weight:
                continue
            corolla = (lab,) + ((),) * label_arity(lab)
            out.append((lab, Element.monomial(corolla)))
    else:
        raise TypeError("no generator table for %r" % (pres,))
    return out


def verify_d_squared(pres, max_arity, min_degree=None, max_weight=None):
    """Check d(d(g)) = 0 on every generator within the bounds.

    Returns report rows sorted by id; a failing row carries the offending
    residue as its witness.
    """
    from .render import format_element
    name = presentation_name(pres)
    rows = []
    for gid, gen in dsq_generators(pres, max_arity, min_degree, max_weight):
        residue = pres.differential(pres.differential(gen))
        rows.append({
            "id": "dsq/%s/%s" % (name, gid),
            "status": "pass" if not residue else "fail",
            "witness": "" if not residue else format_element(residue),
        })
    rows.sort(key=lambda r: r["id"])
    return rows
