"""Concrete finite-dimensional instances and their relation checkers.

An instance is a finite graded module with sparse structure-constant
tables: multiplications m2, m3, ..., unit homotopies m1;0, ..., a
homotopy unit i, and for morphisms the components f1, f2, ..., their
grouped versions, and the nullary v.  Tables are exact: coefficients are
rationals, or canonical residues when the module lives over a prime
field.  A stored table is the whole map; absent entries are zero.

Every relation is checked along two independent routes wherever a
closed-form sum exists:

* the direct route assembles the classical sums (the Stasheff relation,
  the morphism relation with its staircase sign) entry by entry from the
  tables, never touching the symbolic engine;
* the engine route evaluates the symbolic differential of the generator
  and compares it against the mapping-complex differential of the
  generator's table.

Evaluation of a symbolic element proceeds tree by tree: children are
applied jointly to their argument blocks with the sign rule that a map
crossing later arguments picks up the product of their degrees, the
vertex's table is applied last, and the whole tree carries the sign that
reorders its factors from this recursive order into the canonical row
order.  Composition of morphisms is evaluation of the comultiplication:
the two floors of each split tree read off the two morphisms' components.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .bimodules import HomotopyUnitalBimodule, FreeBimodule, is_rho_key
from .coalgebra import delta, delta_hu
from .elements import Element
from .labels import (ATOMS, groups_of, label_arity, label_degree, make_label,
                     split_floor_prefix)
from .linalg import solvable
from .operads import AInfinity, HomotopyUnital, dsq_generators
from .trees import graft

KINDS = ("dg", "ainf", "su", "hu")


def reduce_scalar(value, p):
    """Canonical representative: the value itself, or its residue mod p."""
    value = Fraction(value)
    if p is None:
        return value
    num = value.numerator % p
    den = value.denominator % p
    if den == 0:
        raise ZeroDivisionError("denominator of %s vanishes mod %d" % (value, p))
    return Fraction(num * pow(den, -1, p) % p)


class FiniteGradedModule:
    """A finite list of named basis elements with integer degrees."""

    def __init__(self, entries, p=None):
        self.names = tuple(name for name, _ in entries)
        self.degrees = {name: int(degree) for name, degree in entries}
        if len(self.names) != len(set(self.names)):
            raise ValueError("duplicate basis names")
        for name in self.names:
            if not isinstance(name, str) or not name:
                raise ValueError("basis names must be non-empty strings")
        if p is not None and (p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1))):
            raise ValueError("the field order must be prime, got %r" % (p,))
        self.p = p

    def degree(self, name):
        try:
            return self.degrees[name]
        except KeyError:
            raise ValueError("unknown basis name %r" % (name,))

    @property
    def dim(self):
        return len(self.names)

    def same_as(self, other):
        return (self.names == other.names and self.degrees == other.degrees
                and self.p == other.p)


class Table:
    """A sparse multilinear map between finite graded modules.

    Entries live in ``{(inputs, output): coefficient}`` with inputs a
    tuple of source basis names.  Every entry must respect the declared
    degree; every write reduces the coefficient to canonical form.
    """

    def __init__(self, source, target, arity, degree):
        if source.p != target.p:
            raise ValueError("source and target rings differ")
        self.source = source
        self.target = target
        self.arity = arity
        self.degree = degree
        self.entries = {}

    def add(self, ins, out, coeff):
        ins = tuple(ins)
        if len(ins) != self.arity:
            raise ValueError("expected %d inputs, got %r" % (self.arity, ins))
        got = self.target.degree(out) - sum(self.source.degree(x) for x in ins)
        if got != self.degree:
            raise ValueError(
                "entry %r -> %r has degree %d, the map has degree %d"
                % (ins, out, got, self.degree))
        key = (ins, out)
        value = reduce_scalar(self.entries.get(key, 0) + Fraction(coeff),
                              self.source.p)
        if value:
            self.entries[key] = value
        else:
            self.entries.pop(key, None)

    def apply(self, ins):
        """The image of a tuple of basis names, as {name: coefficient}."""
        ins = tuple(ins)
        out = {}
        for (eins, eout), coeff in self.entries.items():
            if eins == ins:
                out[eout] = out.get(eout, Fraction(0)) + coeff
        return out

    def accumulate(self, other, scale=1):
        if (self.arity, self.degree) != (other.arity, other.degree):
            raise ValueError("cannot add maps of different arity or degree")
        for (ins, out), coeff in other.entries.items():
            self.add(ins, out, Fraction(scale) * coeff)
        return self

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, Table):
            return NotImplemented
        return ((self.arity, self.degree) == (other.arity, other.degree)
                and self.entries == other.entries)

    def __hash__(self):
        raise TypeError("tables are mutable; do not hash")

    def copy(self):
        out = Table(self.source, self.target, self.arity, self.degree)
        out.entries = dict(self.entries)
        return out

    def witness(self):
        if not self.entries:
            return ""
        (ins, out), coeff = min(self.entries.items())
        return "(%s) -> %s: %s" % (", ".join(ins), out, coeff)


def zero_table(source, target, arity, degree):
    return Table(source, target, arity, degree)


def _label_signature(lab):
    """(arity, degree) a table for this operation label must have."""
    return label_arity(lab), label_degree(lab)


class FiniteAlgebra:
    """A module with operation tables, tagged by how much structure it claims."""

    def __init__(self, module, operations, kind="ainf"):
        if kind not in KINDS:
            raise ValueError("unknown kind %r" % (kind,))
        self.module = module
        self.kind = kind
        self.operations = {}
        for lab, table in operations.items():
            self._validate_label(lab)
            arity, degree = _label_signature(lab)
            if (table.arity, table.degree) != (arity, degree):
                raise ValueError(
                    "table for %s has arity %d degree %d, the label demands "
                    "%d and %d" % (lab, table.arity, table.degree, arity, degree))
            if not (table.source is module and table.target is module):
                raise ValueError("table for %s is not over this module" % lab)
            self.operations[lab] = table

    @staticmethod
    def _validate_label(lab):
        if lab in ("i", "j", "1su"):
            return
        if lab[:1] == "m":
            groups_of(lab)
            return
        raise ValueError("not an algebra operation label: %r" % (lab,))

    def op(self, lab):
        if lab in self.operations:
            return self.operations[lab]
        if lab in ("i", "j", "1su"):
            raise ValueError("missing structure constant for %r" % (lab,))
        arity, degree = _label_signature(lab)
        return zero_table(self.module, self.module, arity, degree)


class FiniteMorphism:
    """Component tables of a morphism between two instances."""

    def __init__(self, source, target, components, kind="ainf"):
        if kind not in KINDS:
            raise ValueError("unknown kind %r" % (kind,))
        if source.module.p != target.module.p:
            raise ValueError("source and target rings differ")
        self.source = source
        self.target = target
        self.kind = kind
        self.components = {}
        for lab, table in components.items():
            self._validate_label(lab)
            arity, degree = _label_signature(lab)
            if (table.arity, table.degree) != (arity, degree):
                raise ValueError(
                    "component %s has arity %d degree %d, the label demands "
                    "%d and %d" % (lab, table.arity, table.degree, arity, degree))
            if not (table.source is source.module and table.target is target.module):
                raise ValueError("component %s is not source -> target" % lab)
            self.components[lab] = table

    @staticmethod
    def _validate_label(lab):
        if lab == "v":
            return
        if lab[:1] == "f":
            groups_of(lab)
            return
        raise ValueError("not a morphism component label: %r" % (lab,))

    def component(self, lab):
        if lab in self.components:
            return self.components[lab]
        arity, degree = _label_signature(lab)
        return zero_table(self.source.module, self.target.module, arity, degree)

    def plain_support(self):
        """Largest n with a nonzero plain component, at least 1."""
        best = 1
        for lab, table in self.components.items():
            if lab[:1] == "f" and len(groups_of(lab)) == 1 and table.entries:
                best = max(best, label_arity(lab))
        return best


# ---------------------------------------------------------------------------
# Evaluation of symbolic elements
# ---------------------------------------------------------------------------

def tree_arity(tree):
    if tree == ():
        return 1
    if is_rho_key(tree):
        return 0
    return sum(tree_arity(child) for child in tree[1:])


def tree_degree(tree):
    if tree == ():
        return 0
    if is_rho_key(tree):
        return tree_degree(tree[1])
    return label_degree(tree[0]) + sum(tree_degree(c) for c in tree[1:])


_REORDER_CACHE = {}


def reorder_sign(tree):
    """Koszul sign from the child-by-child factor order to row order.

    Evaluating a tree recursively multiplies the factors in the order
    the grafting construction produces them; the canonical basis key
    lists them in row order.  This sign relates the two.
    """
    if tree == ():
        return 1
    if is_rho_key(tree):
        return reorder_sign(tree[1])
    cached = _REORDER_CACHE.get(tree)
    if cached is not None:
        return cached
    sign = 1
    children = tree[1:]
    for child in children:
        sign *= reorder_sign(child)
    corolla = (tree[0],) + ((),) * len(children)
    built, s = graft(list(children), corolla, label_degree)
    assert built == tree
    _REORDER_CACHE[tree] = sign * s
    return sign * s


class _Context:
    """Which instance supplies each label during tree evaluation.

    `chain` lists the algebras from the very source (index 0) to the
    final target; `floors` lists the morphisms between consecutive
    entries.  A floor label with prefix q reads its table from
    floors[q-1] and hands its children to the algebra below index q.
    An unprefixed floor label means floor 1.
    """

    def __init__(self, chain, floors):
        self.chain = chain
        self.floors = floors

    @property
    def top(self):
        return len(self.floors)

    def algebra_table(self, mode, lab):
        return self.chain[mode].op(lab)

    def floor_table(self, fl, lab):
        if not 1 <= fl <= len(self.floors):
            raise ValueError("no morphism for floor %d" % fl)
        return self.floors[fl - 1].component(lab)


def _eval_tree(tree, mode, args, ctx):
    """Image of one basis-argument tuple under one tree, as {name: coeff}."""
    if tree == ():
        return {args[0]: Fraction(1)}
    if is_rho_key(tree):
        assert not args
        return _eval_tree(tree[1], ctx.top, args, ctx)
    fl, bare = split_floor_prefix(tree[0])
    if bare == "v" or bare[:1] == "f":
        table = ctx.floor_table(fl if fl is not None else 1, bare)
        child_mode = (fl if fl is not None else 1) - 1
    else:
        table = ctx.algebra_table(mode, bare)
        child_mode = mode

    children = tree[1:]
    blocks = []
    pos = 0
    for child in children:
        take = tree_arity(child)
        blocks.append(args[pos:pos + take])
        pos += take
    assert pos == len(args)

    source = ctx.chain[0].module
    exponent = 0
    suffix = 0
    for child, block in zip(reversed(children), reversed(blocks)):
        exponent += tree_degree(child) * suffix
        suffix += sum(source.degree(x) for x in block)
    sign = -1 if exponent % 2 else 1

    vectors = [_eval_tree(child, child_mode, block, ctx)
               for child, block in zip(children, blocks)]
    out = {}
    for combo in product(*(v.items() for v in vectors)):
        coeff = Fraction(sign)
        for _, c in combo:
            coeff *= c
        for name, c in table.apply(tuple(name for name, _ in combo)).items():
            out[name] = out.get(name, Fraction(0)) + coeff * c
    return {k: v for k, v in out.items() if v}


def _context_for(inst):
    if isinstance(inst, FiniteAlgebra):
        return _Context([inst], [])
    if isinstance(inst, FiniteMorphism):
        return _Context([inst.source, inst.target], [inst])
    if isinstance(inst, (tuple, list)) and len(inst) == 2:
        g, h = inst
        if not g.target.module.same_as(h.source.module):
            raise ValueError("morphisms are not composable")
        return _Context([g.source, g.target, h.target], [g, h])
    raise ValueError("cannot evaluate over %r" % (inst,))


def evaluate(elem, inst, arity=None, degree=None):
    """The multilinear map of a symbolic element over an instance.

    `inst` is an algebra for operad elements, a morphism for one-floor
    bimodule elements, or a pair (g, h) for two-floor split elements.
    The element must be homogeneous; for the zero element the arity and
    degree must be supplied.
    """
    ctx = _context_for(inst)
    keys = list(elem.keys())
    if keys:
        arities = {tree_arity(k) for k in keys}
        degrees = {tree_degree(k) for k in keys}
        if len(arities) > 1 or len(degrees) > 1:
            raise ValueError("element is not homogeneous")
        arity, degree = arities.pop(), degrees.pop()
    elif arity is None or degree is None:
        raise ValueError("zero element needs an explicit arity and degree")

    source = ctx.chain[0].module
    target = ctx.chain[-1].module
    result = Table(source, target, arity, degree)
    for args in product(source.names, repeat=arity):
        total = {}
        for key, coeff in elem:
            sign = reorder_sign(key)
            for name, c in _eval_tree(key, ctx.top, args, ctx).items():
                total[name] = total.get(name, Fraction(0)) + sign * coeff * c
        for name, c in total.items():
            if c:
                result.add(args, name, c)
    return result


# ---------------------------------------------------------------------------
# The mapping-complex differential and direct-route composites
# ---------------------------------------------------------------------------

def mapping_differential(table, source_alg, target_alg):
    """d(T) = T m1 - (-1)^{deg T} sum_a (1^a x m1 x 1^b) T."""
    out = Table(table.source, table.target, table.arity, table.degree + 1)
    m1_out = target_alg.op("m1")
    for (ins, mid), c in table.entries.items():
        for (single, fin), w in m1_out.entries.items():
            if single == (mid,):
                out.add(ins, fin, c * w)
    m1_in = source_alg.op("m1")
    front = -1 if table.degree % 2 else 1
    for (ins, fin), c in table.entries.items():
        for a in range(table.arity):
            tail = sum(table.source.degree(x) for x in ins[a + 1:])
            koszul = -1 if tail % 2 else 1
            for ((pre,), mid), w in m1_in.entries.items():
                if mid == ins[a]:
                    replaced = ins[:a] + (pre,) + ins[a + 1:]
                    out.add(replaced, fin, -front * koszul * c * w)
    return out


def insertion_composite(outer, inner, before, after):
    """(1^before x inner x 1^after) then outer, entry by entry."""
    assert outer.arity == before + 1 + after
    out = Table(inner.source, outer.target,
                before + inner.arity + after, inner.degree + outer.degree)
    for (oins, oout), c in outer.entries.items():
        tail = sum(outer.source.degree(x) for x in oins[before + 1:])
        sign = -1 if (inner.degree * tail) % 2 else 1
        for (iins, iout), w in inner.entries.items():
            if iout == oins[before]:
                ins = oins[:before] + iins + oins[before + 1:]
                out.add(ins, oout, sign * c * w)
    return out


def tensor_composite(parts, outer):
    """(F_1 x ... x F_l) then outer, with the joint crossing sign."""
    assert outer.arity == len(parts)
    arity = sum(part.arity for part in parts)
    degree = sum(part.degree for part in parts) + outer.degree
    out = Table(parts[0].source if parts else outer.source, outer.target,
                arity, degree)
    for (oins, oout), c in outer.entries.items():
        choices = []
        for a, part in enumerate(parts):
            rows = [(ins, w) for (ins, pout), w in part.entries.items()
                    if pout == oins[a]]
            choices.append(rows)
        for combo in product(*choices):
            exponent = 0
            suffix = 0
            for part, (ins, _) in zip(reversed(parts), reversed(combo)):
                exponent += part.degree * suffix
                suffix += sum(part.source.degree(x) for x in ins)
            coeff = Fraction(-1 if exponent % 2 else 1) * c
            flat = ()
            for ins, w in combo:
                coeff *= w
                flat += ins
            out.add(flat, oout, coeff)
    return out


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for head in range(1, total - parts + 2):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def stasheff_sum(algebra, n):
    """Sum over j+p+q=n of (-1)^{jp+q} (1^j x m_p x 1^q) m_{j+1+q}."""
    module = algebra.module
    out = Table(module, module, n, 3 - n)
    for p in range(1, n + 1):
        for j in range(0, n - p + 1):
            q = n - p - j
            inner = algebra.op(make_label("m", (p,)))
            outer = algebra.op(make_label("m", (j + 1 + q,)))
            sign = -1 if (j * p + q) % 2 else 1
            out.accumulate(insertion_composite(outer, inner, j, q), sign)
    return out


def morphism_relation_sum(morphism, k):
    """The difference of the two sides of the arity-k morphism relation.

    Both sides of: sum (-1)^sigma (f_{i_1} x ... x f_{i_l}) m_l equals
    sum (-1)^{t+rn} (1^r x m_n x 1^t) f_{r+1+t}, with sigma the staircase
    sum of (q-1)(i_q - 1).
    """
    src, tgt = morphism.source, morphism.target
    out = Table(src.module, tgt.module, k, 2 - k)
    for l in range(1, k + 1):
        outer = tgt.op(make_label("m", (l,)))
        for split in _compositions(k, l):
            sigma = sum(q * (split[q] - 1) for q in range(1, l))
            parts = [morphism.component(make_label("f", (iq,))) for iq in split]
            out.accumulate(tensor_composite(parts, outer),
                           -1 if sigma % 2 else 1)
    for n in range(1, k + 1):
        inner = src.op(make_label("m", (n,)))
        for r in range(0, k - n + 1):
            t = k - n - r
            outer = morphism.component(make_label("f", (r + 1 + t,)))
            sign = -1 if (t + r * n) % 2 else 1
            out.accumulate(insertion_composite(outer, inner, r, t), -sign)
    return out


# ---------------------------------------------------------------------------
# Relation checkers
# ---------------------------------------------------------------------------

def _row(rows, check_id, ok, witness=""):
    rows.append({"id": check_id, "status": "pass" if ok else "fail",
                 "witness": "" if ok else witness})


def _corolla(lab):
    return (lab,) + ((),) * label_arity(lab)


def check_ainf_algebra(algebra, n_max):
    """Both routes through the arity-n relations, n up to n_max."""
    rows = []
    m1sq = insertion_composite(algebra.op("m1"), algebra.op("m1"), 0, 0)
    _row(rows, "ainf/relation/n=1", m1sq.is_zero(), m1sq.witness())
    ainf = AInfinity()
    for n in range(2, n_max + 1):
        direct = stasheff_sum(algebra, n)
        _row(rows, "ainf/relation/n=%d" % n, direct.is_zero(), direct.witness())
        corolla = Element.monomial(_corolla(make_label("m", (n,))))
        table = algebra.op(make_label("m", (n,)))
        engine = mapping_differential(table, algebra, algebra)
        engine.accumulate(
            evaluate(ainf.differential(corolla), algebra, n, 3 - n), -1)
        _row(rows, "ainf/engine/n=%d" % n, engine.is_zero(), engine.witness())
    rows.sort(key=lambda r: r["id"])
    return rows


def check_ainf_morphism(morphism, n_max):
    """Both routes through the arity-k morphism relations."""
    rows = []
    free = FreeBimodule()
    for k in range(1, n_max + 1):
        direct = morphism_relation_sum(morphism, k)
        _row(rows, "morphism/relation/n=%d" % k, direct.is_zero(),
             direct.witness())
        corolla = Element.monomial(_corolla(make_label("f", (k,))))
        table = morphism.component(make_label("f", (k,)))
        engine = mapping_differential(table, morphism.source, morphism.target)
        engine.accumulate(
            evaluate(free.differential(corolla), morphism, k, 2 - k), -1)
        _row(rows, "morphism/engine/n=%d" % k, engine.is_zero(),
             engine.witness())
    rows.sort(key=lambda r: r["id"])
    return rows


def check_hu_algebra(algebra, max_weight):
    """Engine route over every unit-homotopy generator within the weight bound.

    Weight of m with groups (n_1, ..., n_k) is n + k; the homotopy unit
    must be present and a cycle.  The two displayed unit homotopies are
    additionally rebuilt from their closed form.
    """
    rows = []
    i_table = algebra.op("i")
    icycle = insertion_composite(algebra.op("m1"), i_table, 0, 0)
    _row(rows, "hu/i-cycle", icycle.is_zero(), icycle.witness())

    hu = HomotopyUnital()
    for gid, elem in dsq_generators(hu, max_weight - 1, max_weight=max_weight):
        (key, _), = elem
        lab = key[0]
        arity, degree = _label_signature(lab)
        table = algebra.op(lab)
        engine = mapping_differential(table, algebra, algebra)
        engine.accumulate(evaluate(hu.differential(elem), algebra,
                                   arity, degree + 1), -1)
        _row(rows, "hu/relation/%s" % gid, engine.is_zero(), engine.witness())

    module = algebra.module
    for lab, before, after in (("m1;0", 0, 1), ("m0;1", 1, 0)):
        closed = Table(module, module, 1, 0)
        for name in module.names:
            closed.add((name,), name, 1)
        closed.accumulate(
            insertion_composite(algebra.op("m2"), i_table, before, after), -1)
        lhs = mapping_differential(algebra.op(lab), algebra, algebra)
        lhs.accumulate(closed, -1)
        _row(rows, "hu/closed-form/%s" % lab, lhs.is_zero(), lhs.witness())
    rows.sort(key=lambda r: r["id"])
    return rows


def element_is_boundary(algebra, vector, degree):
    """Whether a cycle {name: coeff} of this degree is hit by m1."""
    module = algebra.module
    unknowns = [n for n in module.names if module.degrees[n] == degree - 1]
    targets = [n for n in module.names if module.degrees[n] == degree]
    m1 = algebra.op("m1")
    entries = {}
    for col, x in enumerate(unknowns):
        for name, c in m1.apply((x,)).items():
            entries[(targets.index(name), col)] = c
    rhs = {targets.index(n): c for n, c in vector.items() if c}
    for name in vector:
        if module.degree(name) != degree:
            raise ValueError("vector is not homogeneous of degree %d" % degree)
    return solvable(entries, len(targets), len(unknowns), rhs, module.p)


def homotopic_to_zero(algebra, table):
    """Whether an arity-1 map is the mapping differential of some map."""
    assert table.arity == 1
    module = algebra.module
    gap = table.degree - 1
    unknowns = [(x, y) for x in module.names for y in module.names
                if module.degrees[y] - module.degrees[x] == gap]
    equations = [(x, y) for x in module.names for y in module.names
                 if module.degrees[y] - module.degrees[x] == table.degree]
    entries = {}
    for col, (x, y) in enumerate(unknowns):
        probe = Table(module, module, 1, gap)
        probe.add((x,), y, 1)
        image = mapping_differential(probe, algebra, algebra)
        for (ins, out), c in image.entries.items():
            entries[(equations.index((ins[0], out)), col)] = c
    rhs = {}
    for (ins, out), c in table.entries.items():
        rhs[equations.index((ins[0], out))] = c
    return solvable(entries, len(equations), len(unknowns), rhs, module.p)


def check_unitality(algebra):
    """Is the designated cycle a two-sided unit up to homotopy."""
    rows = []
    module = algebra.module
    i_table = algebra.op("i")
    icycle = insertion_composite(algebra.op("m1"), i_table, 0, 0)
    _row(rows, "unital/i-cycle", icycle.is_zero(), icycle.witness())
    identity = Table(module, module, 1, 0)
    for name in module.names:
        identity.add((name,), name, 1)
    for row_id, before, after in (("unital/left", 1, 0),
                                  ("unital/right", 0, 1)):
        gap = identity.copy()
        gap.accumulate(
            insertion_composite(algebra.op("m2"), i_table, before, after), -1)
        _row(rows, row_id, homotopic_to_zero(algebra, gap),
             "not a mapping-complex boundary")
    rows.sort(key=lambda r: r["id"])
    return rows


def check_unital_morphism(morphism):
    """Do the images of the two units differ by a boundary."""
    rows = []
    f1 = morphism.component("f1")
    gap = {}
    for ((name,), out), c in f1.entries.items():
        for iname, ic in morphism.source.op("i").apply(()).items():
            if iname == name:
                gap[out] = gap.get(out, Fraction(0)) + ic * c
    for name, c in morphism.target.op("i").apply(()).items():
        gap[name] = gap.get(name, Fraction(0)) - c
    gap = {k: reduce_scalar(v, morphism.target.module.p)
           for k, v in gap.items()}
    gap = {k: v for k, v in gap.items() if v}
    m1 = morphism.target.op("m1")
    boundary = {}
    for name, c in gap.items():
        for out, w in m1.apply((name,)).items():
            boundary[out] = boundary.get(out, Fraction(0)) + c * w
    _row(rows, "unital-morphism/cycle",
         not any(reduce_scalar(v, morphism.target.module.p)
                 for v in boundary.values()),
         "%r" % (boundary,))
    _row(rows, "unital-morphism/boundary",
         element_is_boundary(morphism.target, gap, 0),
         "unit gap %r is not a boundary" % (gap,))
    rows.sort(key=lambda r: r["id"])
    return rows


# ---------------------------------------------------------------------------
# The plus construction
# ---------------------------------------------------------------------------

def _fresh(module, wanted):
    name = wanted
    while name in module.degrees:
        name = "+" + name
    return name


def _insertion_sign(module, blocks):
    """Koszul sign of feeding one j between consecutive argument blocks."""
    exponent = 0
    suffix = 0
    for q in range(len(blocks) - 1, 0, -1):
        suffix += sum(module.degree(x) for x in blocks[q])
        exponent += suffix
    return -1 if exponent % 2 else 1


def fukaya_plus(algebra):
    """Adjoin a strict unit and a contracting direction to a unit-homotopy
    instance; the grouped tables become the values on j-interleaved tuples."""
    plus, _, _ = _fukaya_plus_named(algebra)
    return plus


def _fukaya_plus_named(algebra):
    module = algebra.module
    unit = _fresh(module, "1su")
    jay = _fresh(module, "j")
    plus_module = FiniteGradedModule(
        [(n, module.degrees[n]) for n in module.names]
        + [(unit, 0), (jay, -1)], module.p)

    ops = {}

    def ensure(lab):
        if lab not in ops:
            arity, degree = _label_signature(lab)
            ops[lab] = Table(plus_module, plus_module, arity, degree)
        return ops[lab]

    for lab, table in algebra.operations.items():
        if lab == "i":
            target = ensure("i")
            for (ins, out), c in table.entries.items():
                target.add(ins, out, c)
            continue
        groups = groups_of(lab)
        if len(groups) == 1:
            target = ensure(lab)
            for (ins, out), c in table.entries.items():
                target.add(ins, out, c)
            continue
        base = make_label("m", (sum(groups) + len(groups) - 1,))
        target = ensure(base)
        for (ins, out), c in table.entries.items():
            blocks = []
            pos = 0
            for g in groups:
                blocks.append(ins[pos:pos + g])
                pos += g
            sign = _insertion_sign(module, blocks)
            flat = ()
            for q, block in enumerate(blocks):
                flat += block
                if q < len(blocks) - 1:
                    flat += (jay,)
            target.add(flat, out, Fraction(sign) * c)

    m1 = ensure("m1")
    m1.add((jay,), unit, 1)
    for name, c in algebra.op("i").apply(()).items():
        m1.add((jay,), name, -c)
    m2 = ensure("m2")
    for name in plus_module.names:
        m2.add((unit, name), name, 1)
        if name != unit:
            m2.add((name, unit), name, 1)
    unit_table = ensure("1su")
    unit_table.add((), unit, 1)
    j_table = ensure("j")
    j_table.add((), jay, 1)
    return FiniteAlgebra(plus_module, ops, kind="su"), unit, jay


def _plus_condition_rows(prefix, plus, ordinary_names, unit_in, jay_in,
                         unit_out, jay_out, restriction_tables,
                         unary_unit_image=None):
    """The four conditions shared by the two plus constructions.

    `restriction_tables` maps a plain arity to the table the restriction
    to the ordinary part must reproduce; for an algebra that is its own
    m_n, for a morphism the component f_n.  Operation tables are read
    off `plus` (an algebra's operations or a morphism's components).
    The unit and contracting names are given on the input side and the
    output side separately; for an algebra the two coincide.  A morphism
    declares `unary_unit_image`, the one entry its unary component must
    send the unit to.
    """
    rows = []
    ordinary = set(ordinary_names)

    ok, witness = True, ""
    for lab, table in sorted(plus.items()):
        if lab in ("i", "1su", "j", "v"):
            continue
        arity = table.arity
        for (ins, out), c in sorted(table.entries.items()):
            if unit_in not in ins:
                continue
            if arity == 2 and lab[:1] == "m":
                continue
            if arity == 1 and lab[:1] == "f" and out == unary_unit_image \
                    and c == 1:
                continue
            ok, witness = False, "%s: (%s) -> %s" % (lab, ", ".join(ins), out)
            break
        if not ok:
            break
    if ok and "m2" in plus:
        for name in sorted(ordinary | {unit_in, jay_in}):
            left = plus["m2"].apply((unit_in, name))
            right = plus["m2"].apply((name, unit_in))
            if left != {name: 1} or right != {name: 1}:
                ok, witness = False, "unit fails against %s" % name
                break
    if ok and unary_unit_image is not None:
        lab = "f1" if "f1" in plus else None
        image = plus[lab].apply((unit_in,)) if lab else {}
        if image != {unary_unit_image: 1}:
            ok, witness = False, "unit image %r" % (image,)
    _row(rows, prefix + "cond1-strict-unit", ok, witness)

    ok, witness = True, ""
    for n, expected in sorted(restriction_tables.items()):
        lab = expected_label = None
        for cand, table in plus.items():
            if cand[:1] in ("m", "f") and table.arity == n and \
                    len(groups_of(cand)) == 1:
                lab, expected_label = cand, table
        got = {}
        if expected_label is not None:
            for (ins, out), c in expected_label.entries.items():
                if all(x in ordinary for x in ins):
                    got[(ins, out)] = c
        want = {(ins, out): c for (ins, out), c in expected.entries.items()}
        if got != want:
            diff = set(got.items()) ^ set(want.items())
            ok, witness = False, "arity %d: %r" % (n, sorted(diff)[:2])
            break
    _row(rows, prefix + "cond3-restriction", ok, witness)

    ok, witness = True, ""
    for lab, table in sorted(plus.items()):
        if lab in ("i", "1su", "j", "v") or table.arity <= 1:
            continue
        for (ins, out), c in sorted(table.entries.items()):
            if all(x in ordinary or x == jay_in for x in ins) and \
                    out in (unit_out, jay_out):
                ok = False
                witness = "%s: (%s) -> %s" % (lab, ", ".join(ins), out)
                break
        if not ok:
            break
    _row(rows, prefix + "cond4-lands-in-ordinary", ok, witness)
    return rows


def check_fukaya(algebra, n_max):
    """The plus construction's conditions plus its full relation check."""
    plus, unit, jay = _fukaya_plus_named(algebra)
    module = algebra.module

    restriction = {}
    seen = {label_arity(lab) for lab in algebra.operations
            if lab[:1] == "m" and len(groups_of(lab)) == 1}
    for n in sorted(seen | {1, 2}):
        restriction[n] = algebra.op(make_label("m", (n,)))

    rows = _plus_condition_rows("fukaya/", plus.operations, module.names,
                                unit, jay, unit, jay, restriction)

    gap = {unit: Fraction(1)}
    for name, c in plus.op("m1").apply((jay,)).items():
        gap[name] = gap.get(name, Fraction(0)) - c
    gap = {k: reduce_scalar(v, module.p) for k, v in gap.items()}
    gap = {k: v for k, v in gap.items() if v}
    inside = all(name in module.degrees for name in gap)
    _row(rows, "fukaya/cond2-unit-cycle-in-ordinary", inside, "%r" % (gap,))
    matches = gap == {k: v for k, v in algebra.op("i").apply(()).items()}
    _row(rows, "fukaya/cond2-matches-i", matches, "%r" % (gap,))

    cond_ids = {"fukaya/cond1-strict-unit", "fukaya/cond3-restriction"}
    fooo = all(r["status"] == "pass" for r in rows if r["id"] in cond_ids)
    _row(rows, "fukaya/fooo-variant", fooo,
         "conditions (1) and (3) do not both hold")

    for sub in check_ainf_algebra(plus, n_max):
        rows.append({"id": "fukaya/plus-" + sub["id"], "status": sub["status"],
                     "witness": sub["witness"]})
    rows.sort(key=lambda r: r["id"])
    return rows


def fukaya_plus_morphism(morphism):
    """The strictly unital extension of a unit-homotopy morphism."""
    source_plus, unit_a, jay_a = _fukaya_plus_named(morphism.source)
    target_plus, unit_b, jay_b = _fukaya_plus_named(morphism.target)
    src_mod, tgt_mod = source_plus.module, target_plus.module

    comps = {}

    def ensure(lab):
        if lab not in comps:
            arity, degree = _label_signature(lab)
            comps[lab] = Table(src_mod, tgt_mod, arity, degree)
        return comps[lab]

    for lab, table in morphism.components.items():
        if lab == "v":
            continue
        groups = groups_of(lab)
        if len(groups) == 1:
            target = ensure(lab)
            for (ins, out), c in table.entries.items():
                target.add(ins, out, c)
            continue
        base = make_label("f", (sum(groups) + len(groups) - 1,))
        target = ensure(base)
        for (ins, out), c in table.entries.items():
            blocks = []
            pos = 0
            for g in groups:
                blocks.append(ins[pos:pos + g])
                pos += g
            sign = _insertion_sign(morphism.source.module, blocks)
            flat = ()
            for q, block in enumerate(blocks):
                flat += block
                if q < len(blocks) - 1:
                    flat += (jay_a,)
            target.add(flat, out, Fraction(sign) * c)

    f1 = ensure("f1")
    f1.add((unit_a,), unit_b, 1)
    f1.add((jay_a,), jay_b, 1)
    for name, c in morphism.component("v").apply(()).items():
        f1.add((jay_a,), name, c)
    plus = FiniteMorphism(source_plus, target_plus, comps, kind="su")
    return plus, (unit_a, jay_a, unit_b, jay_b)


def check_hu_morphism(morphism, max_weight, n_max):
    """Engine route over the homotopy-unit morphism generators, then the
    plus-construction conditions and its plain relation check."""
    rows = []
    hub = HomotopyUnitalBimodule()

    labels = [("v", ("v",))]
    for k in range(1, max_weight):
        for n in range(0, max_weight - k + 1):
            for groups in _compositions_any(n, k):
                lab = make_label("f", groups)
                if sum(groups) + len(groups) > max_weight:
                    continue
                if n + k < 2 and groups != (0, 0):
                    continue
                if groups == (0, 0):
                    continue
                labels.append((lab, _corolla(lab)))
    for gid, key in labels:
        lab = key[0]
        arity, degree = _label_signature(lab)
        table = morphism.component(lab)
        engine = mapping_differential(table, morphism.source, morphism.target)
        engine.accumulate(
            evaluate(hub.differential(Element.monomial(key)), morphism,
                     arity, degree + 1), -1)
        _row(rows, "humorph/relation/%s" % gid, engine.is_zero(),
             engine.witness())

    plus, (unit_a, jay_a, unit_b, jay_b) = fukaya_plus_morphism(morphism)
    restriction = {}
    seen = {label_arity(lab) for lab in morphism.components
            if lab[:1] == "f" and len(groups_of(lab)) == 1}
    for n in sorted(seen | {1}):
        restriction[n] = morphism.component(make_label("f", (n,)))
    rows.extend(_plus_condition_rows(
        "humorph/", plus.components, morphism.source.module.names,
        unit_a, jay_a, unit_b, jay_b, restriction,
        unary_unit_image=unit_b))

    vee = {}
    for name, c in plus.component("f1").apply((jay_a,)).items():
        vee[name] = vee.get(name, Fraction(0)) + c
    vee[jay_b] = vee.get(jay_b, Fraction(0)) - 1
    vee = {k: reduce_scalar(v, morphism.target.module.p)
           for k, v in vee.items()}
    vee = {k: v for k, v in vee.items() if v}
    inside = all(name in morphism.target.module.degrees for name in vee)
    _row(rows, "humorph/cond2-v-in-target", inside, "%r" % (vee,))

    cond_ids = {"humorph/cond1-strict-unit", "humorph/cond3-restriction"}
    fooo = all(r["status"] == "pass" for r in rows if r["id"] in cond_ids)
    _row(rows, "humorph/fooo-variant", fooo,
         "conditions (1) and (3) do not both hold")

    vm1 = Table(morphism.target.module, morphism.target.module, 0, 0)
    for name, c in morphism.component("v").apply(()).items():
        for out, w in morphism.target.op("m1").apply((name,)).items():
            vm1.add((), out, c * w)
    for name, c in morphism.target.op("i").apply(()).items():
        vm1.add((), name, -c)
    for name, c in morphism.source.op("i").apply(()).items():
        for out, w in morphism.component("f1").apply((name,)).items():
            vm1.add((), out, c * w)
    _row(rows, "humorph/v-measures-unit-gap", vm1.is_zero(), vm1.witness())

    for sub in check_ainf_morphism(plus, n_max):
        rows.append({"id": "humorph/plus-" + sub["id"],
                     "status": sub["status"], "witness": sub["witness"]})
    rows.sort(key=lambda r: r["id"])
    return rows


def _compositions_any(total, parts):
    if parts == 1:
        yield (total,)
        return
    for head in range(0, total + 1):
        for rest in _compositions_any(total - head, parts - 1):
            yield (head,) + rest


# ---------------------------------------------------------------------------
# Composition of morphisms
# ---------------------------------------------------------------------------

def identity_morphism(algebra):
    """f1 the identity, everything else zero."""
    table = Table(algebra.module, algebra.module, 1, 0)
    for name in algebra.module.names:
        table.add((name,), name, 1)
    comps = {"f1": table}
    if algebra.kind == "hu":
        comps["v"] = Table(algebra.module, algebra.module, 0, -1)
    return FiniteMorphism(algebra, algebra, comps, kind=algebra.kind)


def compose_morphisms(g, h, n_max=None, max_weight=5):
    """Convolution composite: evaluate the comultiplication over (g, h).

    By default plain components are produced for every arity that can be
    nonzero, so the result is exact; `n_max` caps the arity instead,
    which stays coherent because component n of the composite only ever
    reads factor components of arity at most n.  When both factors carry
    unit-homotopy data the composite also gets v and the grouped
    components up to the weight bound.
    """
    if not g.target.module.same_as(h.source.module):
        raise ValueError("morphisms are not composable")
    comps = {}
    bound = n_max if n_max is not None \
        else g.plain_support() * h.plain_support()
    for n in range(1, bound + 1):
        lab = make_label("f", (n,))
        table = evaluate(delta(_corolla(lab)), (g, h), n, 1 - n)
        if not table.is_zero():
            comps[lab] = table
    kind = "ainf"
    if g.kind == "hu" and h.kind == "hu":
        kind = "hu"
        table = evaluate(delta_hu(("v",)), (g, h), 0, -1)
        comps["v"] = table
        for k in range(2, max_weight):
            for n in range(0, max_weight - k + 1):
                for groups in _compositions_any(n, k):
                    if sum(groups) + len(groups) > max_weight or \
                            groups == (0, 0):
                        continue
                    lab = make_label("f", groups)
                    table = evaluate(delta_hu(_corolla(lab)), (g, h),
                                     n, label_degree(lab))
                    if not table.is_zero():
                        comps[lab] = table
    return FiniteMorphism(g.source, h.target, comps, kind=kind)


# ---------------------------------------------------------------------------
# Instance documents
# ---------------------------------------------------------------------------

def _ring_from_doc(spec):
    if spec == "Q":
        return None
    if isinstance(spec, dict) and set(spec) == {"Fp"}:
        return int(spec["Fp"])
    raise ValueError('ring must be "Q" or {"Fp": prime}, got %r' % (spec,))


def _ring_to_doc(p):
    return "Q" if p is None else {"Fp": p}


def _module_from_doc(rows, p):
    try:
        entries = [(row["name"], row["degree"]) for row in rows]
    except (TypeError, KeyError) as exc:
        raise ValueError("module rows need name and degree: %s" % exc)
    return FiniteGradedModule(entries, p)


def _doc_label(key):
    if key in ("i", "j", "v", "1su"):
        return key
    if key[:2] in ("m_", "f_"):
        lab = key[0] + key[2:]
        groups_of(lab)
        return lab
    raise ValueError("unknown operation key %r" % (key,))


def _label_doc(lab):
    if lab in ("i", "j", "v", "1su"):
        return lab
    return lab[0] + "_" + lab[1:]


def _tables_from_doc(spec, source, target, validate):
    tables = {}
    for key, rows in spec.items():
        lab = _doc_label(key)
        validate(lab)
        arity, degree = _label_signature(lab)
        table = Table(source, target, arity, degree)
        for row in rows:
            table.add(tuple(row["in"]), row["out"],
                      Fraction(str(row["coef"])))
        tables[lab] = table
    return tables


def _tables_to_doc(tables):
    doc = {}
    for lab in sorted(tables):
        table = tables[lab]
        rows = []
        for (ins, out), coeff in sorted(table.entries.items()):
            rows.append({"in": list(ins), "out": out, "coef": str(coeff)})
        doc[_label_doc(lab)] = rows
    return doc


def algebra_from_document(doc):
    """Build an algebra instance from the JSON document shape."""
    p = _ring_from_doc(doc.get("ring", "Q"))
    module = _module_from_doc(doc.get("module", []), p)
    ops = _tables_from_doc(doc.get("operations", {}), module, module,
                           FiniteAlgebra._validate_label)
    kind = doc.get("kind")
    if kind is None:
        kind = "hu" if "i" in ops else "ainf"
    return FiniteAlgebra(module, ops, kind=kind)


def morphism_from_document(doc):
    """Build a morphism instance; the top-level module is the source."""
    source = algebra_from_document(doc)
    if "target" not in doc:
        raise ValueError('a morphism document needs a "target" section')
    tspec = dict(doc["target"])
    tspec.setdefault("ring", doc.get("ring", "Q"))
    target = algebra_from_document(tspec)
    comps = _tables_from_doc(doc.get("morphisms", {}), source.module,
                             target.module, FiniteMorphism._validate_label)
    kind = doc.get("kind")
    if kind is None:
        kind = "hu" if (source.kind == "hu" and target.kind == "hu") else "ainf"
    return FiniteMorphism(source, target, comps, kind=kind)


def morphism_to_document(morphism):
    """The JSON document shape for a morphism, entries sorted."""
    source = morphism.source
    return {
        "ring": _ring_to_doc(source.module.p),
        "module": [{"name": n, "degree": source.module.degrees[n]}
                   for n in source.module.names],
        "operations": _tables_to_doc(source.operations),
        "target": {
            "module": [{"name": n, "degree": morphism.target.module.degrees[n]}
                       for n in morphism.target.module.names],
            "operations": _tables_to_doc(morphism.target.operations),
        },
        "morphisms": _tables_to_doc(morphism.components),
        "kind": morphism.kind,
    }
