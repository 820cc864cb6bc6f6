"""Planar rooted trees with labelled vertices, and the sign bookkeeping for
surgery on them.

A tree is a nested tuple: the empty tuple () is a bare input slot, and
(label, child_1, ..., child_k) is a vertex with k child subtrees.  Nullary
vertices are (label,).  Vertices are addressed by paths: tuples of child
indices from the root, so () is the root and (0, 2) is child 2 of child 0.

Elements of free structures are linear combinations of trees.  Each tree
stands for the tensor of its vertex labels taken in a fixed canonical order,
here called the row order: vertices sorted by (-depth, path), i.e. the deepest
row first and each row left to right, the root last.  Rewriting a tree
(grafting, substituting a vertex, applying a relation) produces the factors in
some construction order; the Koszul sign of re-sorting them into the row order
of the result is what all the sign conventions of this package reduce to.
"""

from __future__ import annotations


INPUT = ()


def is_input(tree):
    return tree == ()


def subtree_at(tree, path):
    t = tree
    for i in path:
        t = t[1 + i]
    return t


def replace_subtree(tree, path, new_sub):
    if not path:
        return new_sub
    i = path[0]
    head = [tree[0]]
    for j, c in enumerate(tree[1:]):
        head.append(replace_subtree(c, path[1:], new_sub) if j == i else c)
    return tuple(head)


def iter_vertices(tree, _path=()):
    """Yield (path, label) for every vertex, in planar (depth-first) order."""
    if tree == ():
        return
    yield _path, tree[0]
    for idx, child in enumerate(tree[1:]):
        yield from iter_vertices(child, _path + (idx,))


def label_at(tree, path):
    return subtree_at(tree, path)[0]


def input_slots(tree, _path=()):
    """Yield the paths of the input leaves, left to right."""
    if tree == ():
        yield _path
        return
    for idx, child in enumerate(tree[1:]):
        yield from input_slots(child, _path + (idx,))


def arity(tree):
    return sum(1 for _ in input_slots(tree))


def n_vertices(tree):
    return sum(1 for _ in iter_vertices(tree))


def row_order(tree):
    """Canonical factor order: vertex paths sorted by (-depth, path).

    The deepest row of the tree comes first, rows are read left to right, and
    the root is the last factor.
    """
    return sorted((p for p, _ in iter_vertices(tree)), key=lambda p: (-len(p), p))


# ---------------------------------------------------------------------------
# Koszul signs
# ---------------------------------------------------------------------------

def koszul_sign(degrees, perm):
    """Sign of rearranging homogeneous factors.

    `degrees[i]` is the degree of the i-th factor in the source order and
    `perm[i]` its position in the target order.  Each transposition of two
    odd factors contributes -1; even factors move freely.
    """
    assert sorted(perm) == list(range(len(perm))), "perm must be a permutation"
    sign = 1
    n = len(perm)
    for i in range(n):
        if degrees[i] % 2 == 0:
            continue
        for j in range(i + 1, n):
            if degrees[j] % 2 and perm[i] > perm[j]:
                sign = -sign
    return sign


def resort_sign(source, target, degree_by_id):
    """Koszul sign of re-sorting the factor sequence `source` into `target`.

    Both are sequences of the same hashable factor ids (usually vertex paths
    of one tree); `degree_by_id` maps an id to its degree.
    """
    pos = {p: i for i, p in enumerate(target)}
    assert len(pos) == len(source) == len(target)
    perm = [pos[p] for p in source]
    degs = [degree_by_id[p] for p in source]
    return koszul_sign(degs, perm)


def _degree_map(tree, degree_of):
    return {p: degree_of(lab) for p, lab in iter_vertices(tree)}


# ---------------------------------------------------------------------------
# Surgery
# ---------------------------------------------------------------------------

def fill_inputs(tree, subs):
    """Plug the trees `subs` into the input slots of `tree`, left to right."""
    it = iter(subs)
    def go(t):
        if t == ():
            return next(it)
        return (t[0],) + tuple(go(c) for c in t[1:])
    out = go(tree)
    leftover = sum(1 for _ in it)
    assert leftover == 0, "wrong number of subtrees"
    return out


def graft(parts, root, degree_of):
    """Compose: plug `parts` into the input slots of `root`.

    Returns (tree, sign).  The construction order is the row order of each
    part in turn, then the row order of the root; the sign re-sorts that into
    the row order of the grafted tree.
    """
    slots = list(input_slots(root))
    assert len(parts) == len(slots), (len(parts), len(slots))
    new_tree = fill_inputs(root, parts)
    construction = []
    for r, part in enumerate(parts):
        construction.extend(slots[r] + u for u in row_order(part))
    construction.extend(row_order(root))
    sign = resort_sign(construction, row_order(new_tree),
                       _degree_map(new_tree, degree_of))
    return new_tree, sign


def substitute(tree, at_path, local, degree_of):
    """Replace the vertex at `at_path` by the tree `local`, reattaching the
    old child subtrees at the input slots of `local` in planar order.

    Returns (tree, sign).  The factors of `local` enter the construction
    order as a block at the replaced factor's position, in the row order of
    `local`; the sign re-sorts into the row order of the result.
    """
    node = subtree_at(tree, at_path)
    assert node != (), "cannot substitute at an input slot"
    old_children = node[1:]
    slots = list(input_slots(local))
    assert len(slots) == len(old_children), \
        "replacement arity %d != vertex arity %d" % (len(slots), len(old_children))
    new_sub = fill_inputs(local, old_children)
    new_tree = replace_subtree(tree, at_path, new_sub)

    d = len(at_path)
    def remap(q):
        if q[:d] == at_path and len(q) > d:
            return at_path + slots[q[d]] + q[d + 1:]
        return q

    construction = []
    for p in row_order(tree):
        if p == at_path:
            construction.extend(at_path + u for u in row_order(local))
        else:
            construction.append(remap(p))
    sign = resort_sign(construction, row_order(new_tree),
                       _degree_map(new_tree, degree_of))
    return new_tree, sign


def rewrite_block(tree, block, new_tree, surviving, inserted, degree_of_old,
                  degree_of_new):
    """Sign of replacing a factor block by new factors, in an ambient tree.

    `block` lists the old paths of the factors consumed by a relation, in the
    order the relation's left-hand side writes them (its own row order).
    `new_tree` is the rewritten tree, `surviving` maps every old non-block
    vertex path to its new path, and `inserted` lists the new paths of the
    factors produced by the relation, again in the relation's order.

    The sign is computed in three mechanical steps: gather the block factors
    so that they sit together at the position of the block's last member
    (Koszul sign of that move), swap the block for the inserted factors
    (the relation itself carries no sign; its coefficient is the caller's
    business), and re-sort everything into the row order of `new_tree`.
    """
    old_order = row_order(tree)
    block_set = set(block)
    assert block_set <= set(old_order)
    last = max(block, key=old_order.index)

    gathered = []
    for p in old_order:
        if p in block_set:
            if p == last:
                gathered.extend(block)
            continue
        gathered.append(p)
    old_degrees = _degree_map(tree, degree_of_old)
    sign = resort_sign(old_order, gathered, old_degrees)

    construction = []
    for p in gathered:
        if p in block_set:
            if p == block[0]:
                construction.extend(inserted)
            continue
        construction.append(surviving[p])
    if not block:
        construction.extend(inserted)
    sign *= resort_sign(construction, row_order(new_tree),
                        _degree_map(new_tree, degree_of_new))
    return sign


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def compositions(n, k, min_part=0):
    """Yield the k-tuples of integers >= min_part summing to n."""
    if k == 0:
        if n == 0:
            yield ()
        return
    if k == 1:
        if n >= min_part:
            yield (n,)
        return
    for first in range(min_part, n - min_part * (k - 1) + 1):
        for rest in compositions(n - first, k - 1, min_part):
            yield (first,) + rest


class TreeEnumerator:
    """Enumerate the trees over a fixed label alphabet by arity.

    `labels` is a sequence of (label, arity) pairs.  If the alphabet contains
    a nullary or unary label the tree count at a fixed arity is infinite, so a
    vertex bound is then mandatory.
    """

    def __init__(self, labels):
        self.labels = list(labels)
        self._needs_bound = any(k <= 1 for _, k in self.labels)
        self._memo = {}

    def trees(self, n, max_vertices=None):
        if self._needs_bound and max_vertices is None:
            raise ValueError(
                "this alphabet has nullary or unary labels, so the set of "
                "trees of a fixed arity is infinite; pass max_vertices")
        bound = max_vertices if max_vertices is not None else max(n, 1)
        return self._trees(n, bound)

    def _trees(self, n, bound):
        key = (n, bound)
        if key in self._memo:
            return self._memo[key]
        out = []
        if n == 1:
            out.append(())
        if bound >= 1:
            for lab, k in self.labels:
                for parts in compositions(n, k):
                    for kids in self._kid_lists(parts, bound - 1):
                        out.append((lab,) + kids)
        self._memo[key] = out
        return out

    def _kid_lists(self, parts, budget):
        if not parts:
            yield ()
            return
        head, tail = parts[0], parts[1:]
        for h in self._trees(head, budget):
            used = n_vertices(h)
            if used > budget:
                continue
            for rest in self._kid_lists(tail, budget - used):
                yield (h,) + rest
