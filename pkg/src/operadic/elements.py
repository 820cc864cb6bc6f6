"""Formal linear combinations over exact rational coefficients.

An Element maps hashable basis keys to nonzero Fractions.  Keys are usually
trees in the sense of `trees`, but anything hashable and totally ordered
within one element works (the homotopy module uses tuples of integer tuples).
"""

from __future__ import annotations

from fractions import Fraction


class Element:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for key, coeff in (terms.items() if isinstance(terms, dict) else terms):
                self._add(key, coeff)

    def _add(self, key, coeff):
        c = self.terms.get(key, 0) + coeff
        if c:
            self.terms[key] = Fraction(c)
        else:
            self.terms.pop(key, None)

    @classmethod
    def monomial(cls, key, coeff=1):
        e = cls()
        e._add(key, Fraction(coeff))
        return e

    @classmethod
    def zero(cls):
        return cls()

    def is_zero(self):
        return not self.terms

    def items(self):
        return self.terms.items()

    def keys(self):
        return self.terms.keys()

    def sorted_items(self):
        return sorted(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __add__(self, other):
        assert isinstance(other, Element)
        out = Element(dict(self.terms))
        for key, coeff in other.terms.items():
            out._add(key, coeff)
        return out

    def __sub__(self, other):
        assert isinstance(other, Element)
        out = Element(dict(self.terms))
        for key, coeff in other.terms.items():
            out._add(key, -coeff)
        return out

    def __neg__(self):
        return Element({k: -c for k, c in self.terms.items()})

    def __pos__(self):
        return Element(dict(self.terms))

    def __rmul__(self, scalar):
        scalar = Fraction(scalar)
        if not scalar:
            return Element()
        return Element({k: scalar * c for k, c in self.terms.items()})

    def __mul__(self, scalar):
        return self.__rmul__(scalar)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        raise TypeError("elements are mutable accumulators; do not hash")

    def __repr__(self):
        if not self.terms:
            return "Element(0)"
        bits = ", ".join("%r: %s" % (k, c) for k, c in self.sorted_items())
        return "Element({%s})" % bits

    def map_keys(self, fn):
        """Linear extension of a map on keys.

        `fn(key)` must return an Element (possibly zero); coefficients are
        carried through.
        """
        out = Element()
        for key, coeff in self.terms.items():
            image = fn(key)
            assert isinstance(image, Element), fn
            for k2, c2 in image.terms.items():
                out._add(k2, coeff * c2)
        return out

    def coefficient(self, key):
        return self.terms.get(key, Fraction(0))


def combination(pairs):
    """Element from an iterable of (coeff, key) pairs."""
    e = Element()
    for coeff, key in pairs:
        e._add(key, Fraction(coeff))
    return e
