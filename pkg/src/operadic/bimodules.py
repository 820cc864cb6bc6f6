"""Free bimodule complexes over the multiplication operads.

Keys are floored trees: planar trees whose vertices carry either operad
labels (multiplications and nullary atoms) or floor labels (the fN family
and v).  The floor vertices form an antichain met exactly once by every
root-to-input path; everything strictly above or below the floor is an
operad tree.  The extra arity-0 keys ("_rho", x), with x an arity-0
operad tree, record the right action applied to no module factor at all.

Three complexes mirror the operad side:

* ``FreeBimodule`` -- one floor generator fN per arity N >= 1 over the
  plain multiplication operad, with the standard differential;
* ``UnitalBimodule(with_ij=...)`` -- over the strictly unital operad; the
  strict unit splices through binary multiplications, kills longer ones
  and unary floors do not stop it: it migrates one band down;
* ``HomotopyUnitalBimodule`` -- generators v and the grouped floor labels
  over the homotopy unital operad; its differential is transported through
  the j-expansion into the strictly unital bimodule and back.
"""

from __future__ import annotations

from .elements import Element
from .labels import (groups_of, is_floor_label, is_grouped, label_arity,
                     label_degree, make_label, split_floor_prefix)
from .operads import (AInfinity, HomotopyUnital, StrictlyUnital,
                      _filter_by_degree, leibniz_terms, tree_degree)
from .trees import (TreeEnumerator, arity, compositions, graft, input_slots,
                    iter_vertices, label_at, n_vertices, replace_subtree,
                    rewrite_block, row_order, subtree_at, substitute)


def is_rho_key(key):
    return isinstance(key, tuple) and len(key) == 2 and key[0] == "_rho"


def floor_paths(tree):
    return [p for p, lab in iter_vertices(tree) if is_floor_label(lab)]


def has_floor(tree):
    return any(is_floor_label(lab) for _, lab in iter_vertices(tree))


def check_floored(key):
    """Validate the floored-tree shape; raises ValueError when broken."""
    if is_rho_key(key):
        x = key[1]
        if arity(x) != 0:
            raise ValueError("right-action image of a tree with inputs")
        if has_floor(x):
            raise ValueError("floor label inside a right-action image")
        return
    floors = set(floor_paths(key))
    if not floors:
        raise ValueError("no floor vertex")
    for p in floors:
        for d in range(len(p)):
            if p[:d] in floors:
                raise ValueError("nested floor vertices at %r" % (p,))
    for q in input_slots(key):
        crossings = sum(1 for d in range(len(q)) if q[:d] in floors)
        if crossings != 1:
            raise ValueError("input %r crosses the floor %d times" % (q, crossings))


def descend_through_floor(tree, floor_path):
    """Remove the unary floor vertex at ``floor_path``; its nullary child
    takes its place one band lower.  Returns (tree, sign)."""
    lab = label_at(tree, floor_path)
    assert is_floor_label(lab) and label_arity(lab) == 1, lab
    child_path = floor_path + (0,)
    child = subtree_at(tree, child_path)
    assert child != () and len(child) == 1, child
    new_tree = replace_subtree(tree, floor_path, child)
    surviving = {p: p for p, _ in iter_vertices(tree)
                 if p not in (floor_path, child_path)}
    sign = rewrite_block(tree, [child_path, floor_path], new_tree, surviving,
                         [floor_path], label_degree, label_degree)
    return new_tree, sign


def with_floor_prefix(tree, floor):
    """Stamp the floor number onto every bare floor label of a tree."""
    if tree == ():
        return ()
    lab = tree[0]
    if is_floor_label(lab):
        assert split_floor_prefix(lab)[0] is None, lab
        lab = "%d:%s" % (floor, lab)
    return (lab,) + tuple(with_floor_prefix(c, floor) for c in tree[1:])


def floor_gadgets(lab):
    """Differential terms of an ungrouped floor generator fK.

    Either a multiplication is pulled out above one input block of a
    shorter floor generator, with coefficient (-1)^(t + r*n) for r slots
    on the left and t on the right, or the floor splits into several
    generators joined by a multiplication below, with coefficient
    -(-1)^sigma where sigma counts each part's excess weighted by its
    position.
    """
    k = label_arity(lab)
    out = []
    for n in range(2, k + 1):
        for r in range(0, k - n + 1):
            t = k - n - r
            inner = (make_label("m", (n,)),) + ((),) * n
            root = (make_label("f", (r + 1 + t,)),) + \
                ((),) * r + (inner,) + ((),) * t
            out.append((-1 if (t + r * n) % 2 else 1, root))
    for l in range(2, k + 1):
        for parts in compositions(k, l, min_part=1):
            sigma = sum(q * (parts[q] - 1) for q in range(l))
            kids = tuple((make_label("f", (p,)),) + ((),) * p for p in parts)
            out.append((1 if sigma % 2 else -1,
                        (make_label("m", (l,)),) + kids))
    return out


class FreeBimodule:
    """The free bimodule on the floor generators over the plain operad."""

    def __init__(self):
        self.operad = AInfinity()
        self._enums = {}
        self._dcache = {}

    def key_degree(self, key):
        return tree_degree(key[1]) if is_rho_key(key) else tree_degree(key)

    def key_arity(self, key):
        return 0 if is_rho_key(key) else arity(key)

    def generator(self, n):
        assert n >= 1, "floor generators start at arity 1"
        return (make_label("f", (n,)),) + ((),) * n

    def gadgets(self, lab):
        if is_floor_label(lab):
            floor, bare = split_floor_prefix(lab)
            assert not is_grouped(bare) and bare != "v", lab
            gads = floor_gadgets(bare)
            if floor is None:
                return gads
            return [(c, with_floor_prefix(t, floor)) for c, t in gads]
        return self.operad.gadgets(lab)

    def normalize_tree(self, tree):
        return Element.monomial(tree)

    def differential(self, elem):
        out = Element()
        for key, coeff in elem:
            if key not in self._dcache:
                if is_rho_key(key):
                    d = self.operad.differential(Element.monomial(key[1]))
                    d = d.map_keys(lambda x: Element.monomial(("_rho", x)))
                else:
                    d = Element()
                    for c, t in leibniz_terms(key, self.gadgets):
                        d += c * self.normalize_tree(t)
                self._dcache[key] = d
            out += coeff * self._dcache[key]
        return out

    def _alphabets(self, n, max_vertices):
        top = n + (max_vertices or 0)
        floors = [(make_label("f", (k,)), k) for k in range(1, max(top, 1) + 1)]
        ops = [(make_label("m", (k,)), k) for k in range(2, max(top, 2) + 1)]
        return floors, ops

    def _rho_basis(self, max_vertices, min_degree):
        return []

    def basis(self, n, max_vertices=None, degree=None, min_degree=None):
        key = (n, max_vertices)
        if key not in self._enums:
            floors, ops = self._alphabets(n, max_vertices)
            self._enums[key] = FlooredEnumerator(floors, ops)
        trees = list(self._enums[key].trees(n, max_vertices))
        if n == 0:
            trees += self._rho_basis(max_vertices, min_degree)
        return _filter_by_degree(trees, self.key_degree, degree, min_degree)


class UnitalBimodule(FreeBimodule):
    """The floor generators over the strictly unital operad.

    The strict unit rewrites as in the operad, with two extra rules at the
    floor: fed to a floor generator of arity at least two it gives zero,
    and fed to a unary one it migrates a band down, the floor vertex
    disappearing.  When the last floor vertex goes, the key collapses to a
    right-action image.
    """

    def __init__(self, with_ij=False):
        super().__init__()
        self.operad = StrictlyUnital(with_ij)
        self.with_ij = with_ij

    def normalize_tree(self, tree):
        total = 1
        while True:
            path = self.operad._find_unit_config(tree)
            if path is None:
                return Element.monomial(tree, total)
            parent = path[:-1]
            plab = label_at(tree, parent)
            if is_floor_label(plab):
                if label_arity(plab) != 1:
                    return Element()
                tree, s = descend_through_floor(tree, parent)
                total *= s
                if not has_floor(tree):
                    inner = self.operad.normalize_tree(tree)
                    return total * inner.map_keys(
                        lambda x: Element.monomial(("_rho", x)))
            else:
                if label_arity(plab) != 2:
                    return Element()
                tree, s = self.operad._splice(tree, parent, path[-1])
                total *= s

    def _alphabets(self, n, max_vertices):
        floors, ops = super()._alphabets(n, max_vertices)
        if self.with_ij:
            ops += [("i", 0), ("j", 0)]
        return floors, ops

    def _rho_basis(self, max_vertices, min_degree):
        return [("_rho", x)
                for x in self.operad.basis(0, max_vertices=max_vertices)]


class HomotopyUnitalBimodule:
    """Floor generators v and fN1;...;Nk over the homotopy unital operad.

    A grouped floor label expands through j-arguments exactly like a
    grouped multiplication, and v expands to the two-term combination of
    j fed to the unary floor generator minus the right-action image of j.
    The differential is computed in the strictly unital bimodule and read
    back through the expansion.
    """

    def __init__(self):
        self.ambient = UnitalBimodule(with_ij=True)
        self.operad = HomotopyUnital()
        self._ecache = {}
        self._pcache = {}
        self._dcache = {}

    def key_degree(self, key):
        return tree_degree(key[1]) if is_rho_key(key) else tree_degree(key)

    def key_arity(self, key):
        return 0 if is_rho_key(key) else arity(key)

    @staticmethod
    def generator_labels(max_arity, min_degree):
        """Floor labels with arity <= max_arity and degree >= min_degree."""
        out = []
        if -1 >= min_degree:
            out.append("v")
        k = 1
        while 3 - 2 * k >= min_degree:
            for n in range(0, max_arity + 1):
                if n + k < 2 or 3 - n - 2 * k < min_degree:
                    continue
                for groups in compositions(n, k, min_part=0):
                    if groups == (0, 0):
                        continue
                    out.append(make_label("f", groups))
            k += 1
        return out

    # -- expansion into the strictly unital bimodule ---------------------
    def expand_patterns(self, tree):
        """Expand every grouped label in place; v is left alone.

        Returns (sign, tree).
        """
        sign = 1
        while True:
            target = None
            for path, lab in iter_vertices(tree):
                if is_grouped(lab):
                    target = path
                    break
            if target is None:
                return sign, tree
            local = HomotopyUnital.expansion_local(label_at(tree, target))
            tree, s = substitute(tree, target, local, label_degree)
            sign *= s

    def expand_key(self, key):
        """The image of a basis key in the strictly unital bimodule."""
        if key in self._ecache:
            return self._ecache[key]
        self._ecache[key] = out = self._expand_key(key)
        return out

    def _expand_key(self, key):
        if is_rho_key(key):
            s, x = self.operad.expand_tree(key[1])
            return Element.monomial(("_rho", x), s)
        sign, tree = self.expand_patterns(key)
        out = Element()
        stack = [(sign, tree)]
        while stack:
            c, t = stack.pop()
            vpath = None
            for p in row_order(t):
                if split_floor_prefix(label_at(t, p))[1] == "v":
                    vpath = p
                    break
            if vpath is None:
                if not has_floor(t):
                    t = ("_rho", t)
                out += Element.monomial(t, c)
                continue
            floor = split_floor_prefix(label_at(t, vpath))[0]
            f1lab = make_label("f", (1,), floor)
            t_jf, s = substitute(t, vpath, (f1lab, ("j",)), label_degree)
            stack.append((c * s, t_jf))
            stack.append((-c, replace_subtree(t, vpath, ("j",))))
        return out

    # -- projection back -------------------------------------------------
    def _find_jf_config(self, tree):
        for p in row_order(tree):
            if split_floor_prefix(label_at(tree, p))[1] == "f1" \
                    and subtree_at(tree, p + (0,)) == ("j",):
                return p
        return None

    def project_key(self, key):
        """Inverse of the expansion on normalized strictly unital keys.

        Each j fed to a unary floor vertex splits into the v branch and
        the branch where the j migrates below the floor; afterwards the
        remaining j-arguments are absorbed into grouped labels, the sign
        being fixed by re-expanding and comparing.
        """
        if key in self._pcache:
            return self._pcache[key]
        self._pcache[key] = out = self._project_key(key)
        return out

    def _project_key(self, key):
        if is_rho_key(key):
            return self.operad.project_tree(key[1]).map_keys(
                lambda x: Element.monomial(("_rho", x)))
        p = self._find_jf_config(key)
        if p is None:
            packed = _absorb_floored(key)
            s, back = self.expand_patterns(packed)
            assert back == key, (key, packed, back)
            return Element.monomial(packed, s)
        floor = split_floor_prefix(label_at(key, p))[0]
        vlab = "v" if floor is None else "%d:v" % floor
        t_v = replace_subtree(key, p, (vlab,))
        surviving = {q: q for q, _ in iter_vertices(key)
                     if q not in (p, p + (0,))}
        s_v = rewrite_block(key, [p + (0,), p], t_v, surviving, [p],
                            label_degree, label_degree)
        t_d, s_d = descend_through_floor(key, p)
        if not has_floor(t_d):
            t_d = ("_rho", t_d)
        return s_v * self.project_key(t_v) + s_d * self.project_key(t_d)

    def differential(self, elem):
        out = Element()
        for key, coeff in elem:
            if key not in self._dcache:
                if is_rho_key(key):
                    d = self.operad.differential(Element.monomial(key[1]))
                    d = d.map_keys(lambda x: Element.monomial(("_rho", x)))
                else:
                    d = self.ambient.differential(self.expand_key(key))
                    d = d.map_keys(self.project_key)
                self._dcache[key] = d
            out += coeff * self._dcache[key]
        return out

    def basis(self, n, max_vertices=None, degree=None, min_degree=None):
        if max_vertices is None or (degree is None and min_degree is None):
            raise ValueError(
                "the homotopy unital bimodule has infinitely many trees in "
                "each arity and each (arity, degree) slice; pass "
                "max_vertices and a degree bound")
        dmin = degree if min_degree is None else min_degree
        top = n + max_vertices
        floors = [(lab, label_arity(lab))
                  for lab in self.generator_labels(top, dmin)]
        ops = [(lab, label_arity(lab))
               for lab in HomotopyUnital.generator_labels(top, dmin)]
        ops.append(("i", 0))
        trees = list(FlooredEnumerator(floors, ops).trees(n, max_vertices))
        if n == 0:
            trees += [("_rho", x) for x in self.operad.basis(
                0, max_vertices=max_vertices, min_degree=dmin)]
        return _filter_by_degree(trees, self.key_degree, degree,
                                 None if min_degree is None else min_degree)


def _absorb_floored(tree):
    if tree == ():
        return ()
    lab = tree[0]
    floor, bare = split_floor_prefix(lab)
    if len(tree) == 1:
        assert bare in ("i", "v"), "unexpected nullary label %r" % lab
        return tree
    groups = []
    run = 0
    kids = []
    for child in tree[1:]:
        if child != () and child[0] == "j":
            groups.append(run)
            run = 0
        else:
            kids.append(_absorb_floored(child))
            run += 1
    groups.append(run)
    kind = "f" if is_floor_label(lab) else "m"
    return (make_label(kind, tuple(groups), floor),) + tuple(kids)


# ---------------------------------------------------------------------------
# The two actions and the d-squared report
# ---------------------------------------------------------------------------

def _slot_products(parts):
    if not parts:
        yield []
        return
    for head in parts[0]:
        for rest in _slot_products(parts[1:]):
            yield [head] + rest


def left_action(bimod, operad_parts, module_elem):
    """Plug operad Elements into the input slots of a bimodule Element.

    The operad factors land above the floor, so the result is again a
    floored tree; multilinear, Koszul-signed, normalized.
    """
    out = Element()
    for key, kc in module_elem:
        n = bimod.key_arity(key)
        if len(operad_parts) != n:
            raise ValueError("expected %d operad parts, got %d"
                             % (n, len(operad_parts)))
        if is_rho_key(key):
            out += kc * Element.monomial(key)
            continue
        normalize = getattr(bimod, "normalize_tree", Element.monomial)
        for combo in _slot_products(operad_parts):
            coeff = kc
            for _, c in combo:
                coeff *= c
            tree, sign = graft([t for t, _ in combo], key, label_degree)
            out += (coeff * sign) * normalize(tree)
    return out


def right_action(bimod, module_parts, operad_elem):
    """Plug bimodule Elements into the input slots of an operad Element.

    The operad factor sits below all the floors.  With no module parts at
    all the result is the right-action image ("_rho", x) of each nullary
    operad tree.
    """
    out = Element()
    for bkey, bc in operad_elem:
        k = arity(bkey)
        if len(module_parts) != k:
            raise ValueError("expected %d module parts, got %d"
                             % (k, len(module_parts)))
        normalize = getattr(bimod, "normalize_tree", Element.monomial)
        if k == 0:
            inner = getattr(bimod.operad, "normalize_tree",
                            Element.monomial)(bkey)
            out += bc * inner.map_keys(
                lambda x: Element.monomial(("_rho", x)))
            continue
        for combo in _slot_products(module_parts):
            coeff = bc
            for _, c in combo:
                coeff *= c
            if any(is_rho_key(t) for t, _ in combo):
                raise ValueError("right-action images have no inputs to fill")
            tree, sign = graft([t for t, _ in combo], bkey, label_degree)
            out += (coeff * sign) * normalize(tree)
    return out


def bimodule_name(bimod):
    """Short reporting name of a bimodule presentation object."""
    if isinstance(bimod, HomotopyUnitalBimodule):
        return "f1-hu"
    if isinstance(bimod, UnitalBimodule):
        return "f1-su-ij" if bimod.with_ij else "f1-su"
    if isinstance(bimod, FreeBimodule):
        return "f1"
    return type(bimod).__name__


def dsq_generators_bimodule(bimod, max_arity, min_degree=None, max_weight=None):
    out = []
    if isinstance(bimod, HomotopyUnitalBimodule):
        floor = min_degree if min_degree is not None else 3 - max_arity - 2 * (max_weight or max_arity)
        for lab in bimod.generator_labels(max_arity, floor):
            if lab == "v":
                out.append(("v", Element.monomial(("v",))))
                continue
            groups = groups_of(lab)
            if max_weight is not None and sum(groups) + len(groups) > max_weight:
                continue
            corolla = (lab,) + ((),) * label_arity(lab)
            out.append((lab, Element.monomial(corolla)))
    elif isinstance(bimod, FreeBimodule):
        for n in range(1, max_arity + 1):
            out.append(("f%d" % n, Element.monomial(bimod.generator(n))))
        if isinstance(bimod, UnitalBimodule):
            nullary = ["1su"] + (["i", "j"] if bimod.with_ij else [])
            for lab in nullary:
                out.append(("rho-" + lab,
                            Element.monomial(("_rho", (lab,)))))
    else:
        raise TypeError("no generator table for %r" % (bimod,))
    return out


def verify_d_squared_bimodule(bimod, max_arity, min_degree=None,
                              max_weight=None):
    """Check d(d(g)) = 0 on every bimodule generator within the bounds."""
    from .render import format_element
    name = bimodule_name(bimod)
    rows = []
    for gid, gen in dsq_generators_bimodule(bimod, max_arity, min_degree,
                                            max_weight):
        residue = bimod.differential(bimod.differential(gen))
        rows.append({
            "id": "dsq/%s/%s" % (name, gid),
            "status": "pass" if not residue else "fail",
            "witness": "" if not residue else format_element(residue),
        })
    rows.sort(key=lambda r: r["id"])
    return rows


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def _budgeted_tuples(gen, arities, budget):
    if not arities:
        yield ()
        return
    first, rest = arities[0], arities[1:]
    for t in gen(first, budget):
        left = None if budget is None else budget - n_vertices(t)
        if left is not None and left < len(rest):
            continue
        for tail in _budgeted_tuples(gen, rest, left):
            yield (t,) + tail


class FlooredEnumerator:
    """Enumerate the floored trees by arity over fixed alphabets.

    With nullary operad labels in play the count per arity is infinite,
    so a vertex budget is then required.
    """

    def __init__(self, floor_labels, operad_labels):
        self.floor_labels = list(floor_labels)
        self.operad_labels = list(operad_labels)
        self.op_enum = TreeEnumerator(operad_labels)
        self._needs_bound = any(a == 0 for _, a in operad_labels)
        self._memo = {}

    def trees(self, n, max_vertices=None):
        if max_vertices is None:
            if self._needs_bound:
                raise ValueError("nullary operad labels need a vertex budget")
            # without nullary labels every region has all arities >= 1, so
            # a floored tree of arity n cannot exceed 3n vertices
            max_vertices = 3 * max(n, 1)
        return self._floored(n, max_vertices)

    def _op_trees(self, a, b):
        return self.op_enum.trees(a, b)

    def _mixed(self, a, b):
        yield from self._floored(a, b)
        if a == 0:
            yield from self.op_enum.trees(0, b)

    def _floored(self, n, budget):
        memo_key = (n, budget)
        if memo_key in self._memo:
            return self._memo[memo_key]
        out = []
        inner = None if budget is None else budget - 1
        if inner is None or inner >= 0:
            for flab, k in self.floor_labels:
                for parts in compositions(n, k, 0):
                    for above in _budgeted_tuples(self._op_trees, parts, inner):
                        out.append((flab,) + above)
            for mlab, l in self.operad_labels:
                if l < 2:
                    continue
                for parts in compositions(n, l, 0):
                    for kids in _budgeted_tuples(self._mixed, parts, inner):
                        if any(has_floor(c) for c in kids):
                            out.append((mlab,) + kids)
        out.sort()
        self._memo[memo_key] = out
        return out
