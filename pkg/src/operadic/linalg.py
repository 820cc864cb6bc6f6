"""Exact sparse linear algebra over the rationals or a prime field.

Thin wrapper around sympy's DomainMatrix so the rest of the package can
hand over ``{(row, col): Fraction}`` dictionaries and get exact ranks
and solvability answers back.  No floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction

from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix


def _to_domain(value: Fraction, p):
    if p is None:
        return QQ(value.numerator, value.denominator)
    den = value.denominator % p
    if den == 0:
        raise ZeroDivisionError("denominator divisible by the field characteristic")
    num = value.numerator % p
    return GF(p)(num * pow(den, -1, p))


def _build(entries, shape, p):
    dod = {}
    for (r, c), val in entries.items():
        if val == 0:
            continue
        if not (0 <= r < shape[0] and 0 <= c < shape[1]):
            raise IndexError("entry %r outside shape %r" % ((r, c), shape))
        dval = _to_domain(Fraction(val), p)
        if dval:
            dod.setdefault(r, {})[c] = dval
    domain = QQ if p is None else GF(p)
    return DomainMatrix(dod, shape, domain)


def rank(entries, nrows: int, ncols: int, p=None) -> int:
    """Rank of a sparse matrix given as {(row, col): coefficient}."""
    if nrows == 0 or ncols == 0:
        return 0
    return _build(entries, (nrows, ncols), p).rank()


def solvable(entries, nrows: int, ncols: int, rhs, p=None) -> bool:
    """Whether A x = b has a solution, b given as {row: coefficient}."""
    base = rank(entries, nrows, ncols, p)
    augmented = dict(entries)
    for r, val in rhs.items():
        augmented[(r, ncols)] = val
    return rank(augmented, nrows, ncols + 1, p) == base


def rank_and_homology(dim, out_entries, out_rows, in_entries, in_cols, p=None):
    """Homology dimension of one degree of a cochain complex.

    ``out`` is the boundary map leaving the degree (a matrix with `dim`
    columns and `out_rows` rows) and ``in`` the one arriving (with `dim`
    rows and `in_cols` columns).  The composite out . in must vanish;
    a nonzero composite signals a broken differential and raises.

    Returns a dict with the two ranks, the kernel dimension and
    ``homology = dim - rank(out) - rank(in)``.
    """
    composite = {}
    by_inner = {}
    for (r, c), val in in_entries.items():
        if val:
            by_inner.setdefault(r, []).append((c, val))
    for (r, k), val in out_entries.items():
        if not val:
            continue
        for c, w in by_inner.get(k, ()):
            key = (r, c)
            composite[key] = composite.get(key, 0) + Fraction(val) * Fraction(w)
    for key, val in composite.items():
        if p is not None:
            val = Fraction(val).numerator * pow(Fraction(val).denominator, -1, p) % p
        if val != 0:
            raise ValueError("boundary maps do not compose to zero at %r" % (key,))
    r_out = rank(out_entries, out_rows, dim, p)
    r_in = rank(in_entries, dim, in_cols, p)
    return {"dim": dim, "rank_out": r_out, "rank_in": r_in,
            "kernel": dim - r_out, "homology": dim - r_out - r_in}
