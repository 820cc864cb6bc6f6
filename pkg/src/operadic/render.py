"""Plain-text forms for tree keys and elements.

Two notations are supported.  The functional form is what the command
line reads and writes for a single tree, ``m2(m2(.,.),.)`` with ``.`` or
``·`` for an input slot; a bare label stands for its generator
corolla.  The layered form writes a tree as a composite of tensor rows,
``(1⊗m2)m2``, and is used when differentials are reported.
"""

from __future__ import annotations

from fractions import Fraction

from .labels import label_arity
from .trees import is_input, iter_vertices

TENSOR = "⊗"
SLOT = "·"
RHO = "ρ∅"

_NAME_CHARS = set("abcdefghijklmnopqrstuvwxyz0123456789;:_")


def format_tree(tree) -> str:
    """Functional notation for a tree key, inverse of :func:`parse_tree`."""
    if is_input(tree):
        return SLOT
    if tree[0] == "_rho":
        return "rho(%s)" % format_tree(tree[1])
    if len(tree) == 1:
        return tree[0]
    return "%s(%s)" % (tree[0], ",".join(format_tree(c) for c in tree[1:]))


def parse_tree(text: str):
    """Parse functional notation back into a tree key.

    A bare label becomes the corolla with that label's arity, so ``m3``
    reads as ``m3(.,.,.)`` and ``v`` as the nullary vertex.  ``rho(x)``
    wraps an arity-0 operad tree as a right-action image.
    """
    tree, pos = _parse(text, 0)
    pos = _skip_ws(text, pos)
    if pos != len(text):
        raise ValueError("trailing input at position %d: %r" % (pos, text[pos:]))
    return tree


def _skip_ws(text, pos):
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def _parse(text, pos):
    pos = _skip_ws(text, pos)
    if pos >= len(text):
        raise ValueError("unexpected end of input in %r" % text)
    ch = text[pos]
    if ch in (SLOT, "."):
        return (), pos + 1
    start = pos
    while pos < len(text) and text[pos] in _NAME_CHARS:
        pos += 1
    name = text[start:pos]
    if not name:
        raise ValueError("expected a label at position %d in %r" % (start, text))
    pos = _skip_ws(text, pos)
    children = None
    if pos < len(text) and text[pos] == "(":
        children = []
        pos += 1
        pos = _skip_ws(text, pos)
        if pos < len(text) and text[pos] == ")":
            pos += 1
        else:
            while True:
                child, pos = _parse(text, pos)
                children.append(child)
                pos = _skip_ws(text, pos)
                if pos >= len(text):
                    raise ValueError("unclosed '(' in %r" % text)
                if text[pos] == ",":
                    pos += 1
                    continue
                if text[pos] == ")":
                    pos += 1
                    break
                raise ValueError("expected ',' or ')' at position %d in %r" % (pos, text))
    if name == "rho":
        if children is None or len(children) != 1:
            raise ValueError("rho takes exactly one argument")
        return ("_rho", children[0]), pos
    try:
        arity = label_arity(name)
    except Exception:
        raise ValueError("unknown label %r" % name) from None
    if children is None:
        children = [()] * arity
    elif len(children) != arity:
        raise ValueError(
            "label %s takes %d inputs, got %d" % (name, arity, len(children))
        )
    return (name,) + tuple(children), pos


def _rows(tree):
    """Tensor rows of a tree, deepest first, as (text, parenthesized) pairs."""
    vertices = list(iter_vertices(tree))
    labels = dict(vertices)
    inputs = []

    def walk(sub, path):
        if is_input(sub):
            inputs.append(path)
            return
        for idx, child in enumerate(sub[1:]):
            walk(child, path + (idx,))

    walk(tree, ())
    depth = max(len(p) for p, _ in vertices)
    out = []
    for d in range(depth, -1, -1):
        slots = [p for p, _ in vertices if len(p) == d]
        slots += [p for p in inputs if len(p) <= d]
        slots.sort()
        factors = [labels.get(p, "1") for p in slots]
        if all(f == "1" for f in factors):
            continue
        if len(factors) > 1:
            out.append(("(%s)" % TENSOR.join(factors), True))
        else:
            out.append((factors[0], False))
    return out


def _join_rows(rows) -> str:
    text = ""
    prev_paren = True
    for row, paren in rows:
        if text and not prev_paren:
            text += SLOT
        text += row
        prev_paren = paren
    return text


def layered(tree) -> str:
    """Layered composite form of a tree key, e.g. ``(1⊗i)m2``."""
    if is_input(tree):
        return "1"
    if tree[0] == "_rho":
        return _join_rows(_rows(tree[1]) + [(RHO, False)])
    return _join_rows(_rows(tree))


def format_key(key) -> str:
    if isinstance(key, int):
        return str(key)
    if isinstance(key, tuple) and key and all(
        isinstance(g, tuple) and g and all(isinstance(a, int) for a in g)
        for g in key
    ):
        return "|".join(",".join(str(a) for a in g) for g in key)
    return layered(key)


def format_coefficient(coeff: Fraction) -> str:
    c = abs(coeff)
    if c == 1:
        return ""
    if c.denominator == 1:
        return "%d" % c.numerator
    return "%d/%d" % (c.numerator, c.denominator)


def format_element(elt, render=format_key) -> str:
    """Write an element with positive terms first, each group key-sorted."""
    if elt.is_zero():
        return "0"
    items = elt.sorted_items()
    ordered = [(k, c) for k, c in items if c > 0] + [(k, c) for k, c in items if c < 0]
    pieces = []
    for key, coeff in ordered:
        body = render(key)
        mag = format_coefficient(coeff)
        term = body if not mag else mag + SLOT + body
        if not pieces:
            pieces.append(term if coeff > 0 else "-" + term)
        else:
            pieces.append(("+ " if coeff > 0 else "- ") + term)
    return " ".join(pieces)
