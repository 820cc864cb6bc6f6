"""The floor complex pushed to the associative operad, with an explicit
contraction onto one class per arity.

A key here is a tuple of groups.  Group q is the tuple of dressing
arities carried by the inputs of the q-th floor generator: entry a means
the a-fold associative product feeds that input, with a = 1 the bare
input.  The k groups are joined by the k-fold product below the floor.
The differential either merges two neighbouring dressings inside one
group or splits a group in two; both moves come from the full floor
complex and only even factors are touched, so all signs are explicit.

The complex contracts onto one generator per arity.  The contraction is
given by a projection, an inclusion, and a homotopy whose remainder
operator strictly lowers the number of groups, so a short geometric sum
inverts it; the closed form of the remainder is spelled out case by case
and checked against its definition in the tests.
"""

from __future__ import annotations

from .elements import Element
from .labels import is_floor_label, label_arity, label_degree
from .trees import (arity, compositions, iter_vertices, koszul_sign, label_at,
                    row_order, subtree_at)
from .bimodules import floor_paths


class ReducedBimodule:
    """Groups-of-dressings complex over the associative operad."""

    @staticmethod
    def key_arity(key):
        return sum(sum(g) for g in key)

    @staticmethod
    def key_degree(key):
        return sum(1 - len(g) for g in key)

    def basis(self, n, degree=None, min_degree=None):
        out = []
        for m in range(1, n + 1):
            for entries in compositions(n, m, min_part=1):
                for k in range(1, m + 1):
                    for sizes in compositions(m, k, min_part=1):
                        groups = []
                        idx = 0
                        for s in sizes:
                            groups.append(tuple(entries[idx:idx + s]))
                            idx += s
                        out.append(tuple(groups))
        if degree is not None:
            out = [key for key in out if self.key_degree(key) == degree]
        elif min_degree is not None:
            out = [key for key in out if self.key_degree(key) >= min_degree]
        out.sort()
        return out

    def differential(self, elem):
        out = Element()
        for key, coeff in elem:
            k = len(key)
            for q in range(k):
                outer = sum(1 - len(g) for g in key[q + 1:])
                s_out = -1 if outer % 2 else 1
                g = key[q]
                i = len(g)
                for r in range(i - 1):
                    s = -1 if (i - 2 - r) % 2 else 1
                    merged = g[:r] + (g[r] + g[r + 1],) + g[r + 2:]
                    out += Element.monomial(
                        key[:q] + (merged,) + key[q + 1:],
                        coeff * s_out * s)
                for u in range(1, i):
                    v = i - u
                    s = -1 if v % 2 else 1
                    out += Element.monomial(
                        key[:q] + (g[:u], g[u:]) + key[q + 1:],
                        coeff * s_out * s)
        return out

    # -- the contraction -------------------------------------------------
    def project_homology(self, elem):
        """Keys whose dressings are all single survive, as their arity."""
        out = Element()
        for key, coeff in elem:
            if all(len(g) == 1 for g in key):
                out += Element.monomial(self.key_arity(key), coeff)
        return out

    def include_homology(self, elem):
        """An arity symbol includes as the fully dressed single floor."""
        out = Element()
        for n, coeff in elem:
            out += Element.monomial(((n,),), coeff)
        return out

    def contracting_homotopy(self, elem):
        """Fold a final single-dressing group into the one before it."""
        out = Element()
        for key, coeff in elem:
            if len(key) > 1 and len(key[-1]) == 1:
                out += Element.monomial(
                    key[:-2] + (key[-2] + key[-1],), coeff)
        return out

    def remainder_brute(self, elem):
        """1 - (project then include) + homotopy d + d homotopy."""
        out = +elem
        out -= self.include_homology(self.project_homology(elem))
        out += self.contracting_homotopy(self.differential(elem))
        out += self.differential(self.contracting_homotopy(elem))
        return out

    def remainder_closed(self, elem):
        """Case-by-case form of the remainder; see the tests for the
        certificate that it agrees with remainder_brute.

        Every key with more than one group rewrites to keys with fewer
        groups, so the remainder is nilpotent arity by arity.
        """
        out = Element()
        for key, coeff in elem:
            k = len(key)
            if k == 1:
                continue
            last = key[-1]
            if len(last) > 2:
                continue
            if len(last) == 2:
                a, b = last
                out += Element.monomial(
                    key[:k - 2] + (key[k - 2] + (a + b,),), coeff)
                continue
            a = last[0]
            prev = key[k - 2]
            if len(prev) > 1:
                out += Element.monomial(
                    key[:k - 2] + (prev[:-1] + (prev[-1] + a,),), coeff)
                continue
            merged = key[:k - 2] + ((prev[0] + a,),)
            out += Element.monomial(merged, coeff)
            if all(len(g) == 1 for g in key[:k - 2]):
                out += Element.monomial(((self.key_arity(key),),), -coeff)
        return out

    def neumann_sum(self, elem, bound):
        """Sum of remainder powers up to the given exponent."""
        out = Element()
        power = +elem
        for _ in range(bound + 1):
            out += power
            power = self.remainder_closed(power)
        return out

    def neumann_inverse(self, elem):
        """Invert 1 - remainder by the geometric sum.

        The remainder strictly lowers the group count, so the sum stops on
        its own once the powers die out.
        """
        cap = max((len(key) for key, _ in elem), default=0)
        out = Element()
        power = +elem
        steps = 0
        while power:
            assert steps <= cap, "remainder failed to lower the group count"
            out += power
            power = self.remainder_closed(power)
            steps += 1
        return out


def _report_row(rows, check_id, ok, witness=""):
    rows.append({"id": check_id, "status": "pass" if ok else "fail",
                 "witness": "" if ok else witness})


def verify_homotopy_lemma(max_weight):
    """Certify the closed remainder formula against its definition.

    For every basis key of arity up to the bound this checks that the
    case-by-case remainder equals 1 - (project then include) + homotopy d
    + d homotopy, and that projecting after including is the identity.
    Returns report rows.
    """
    from .render import format_element
    module = ReducedBimodule()
    rows = []
    for n in range(1, max_weight + 1):
        bad = None
        for key in module.basis(n):
            x = Element.monomial(key)
            diff = module.remainder_brute(x) - module.remainder_closed(x)
            if diff:
                bad = (key, diff)
                break
        _report_row(rows, "homotopy/lemma/n=%d" % n, bad is None,
                    "" if bad is None else
                    "%r: %s" % (bad[0], format_element(bad[1])))
        section = Element.monomial(n)
        back = module.project_homology(module.include_homology(section))
        _report_row(rows, "homotopy/section/n=%d" % n, back == section)
    rows.sort(key=lambda r: r["id"])
    return rows


def verify_filtration(max_weight):
    """Certify that the remainder strictly lowers the group count.

    Also checks the resulting nilpotence: applied once more often than the
    group count, the remainder kills every basis key, so the geometric sum
    inverts 1 - remainder exactly.  Returns report rows.
    """
    from .render import format_element
    module = ReducedBimodule()
    rows = []
    for n in range(1, max_weight + 1):
        lowered = True
        nilpotent = True
        inverse_ok = True
        witness = ""
        for key in module.basis(n):
            k = len(key)
            x = Element.monomial(key)
            image = module.remainder_closed(x)
            if any(len(ik) >= k for ik, _ in image):
                lowered = False
                witness = witness or "%r -> %s" % (key, format_element(image))
            power = +x
            for _ in range(k + 1):
                power = module.remainder_closed(power)
            if power:
                nilpotent = False
            total = module.neumann_inverse(x)
            if total - module.remainder_closed(total) != x:
                inverse_ok = False
        _report_row(rows, "homotopy/filtration/n=%d" % n, lowered, witness)
        _report_row(rows, "homotopy/nilpotence/n=%d" % n, nilpotent)
        _report_row(rows, "homotopy/neumann/n=%d" % n, inverse_ok)
    rows.sort(key=lambda r: r["id"])
    return rows


def reduce_floored(tree):
    """Reduction of a plain floored tree into the groups complex.

    Trees using a multiplication of arity three or more die; in the
    survivors the binary products associate away, the floor vertices read
    off left to right, each dressed by the arities of its input subtrees.
    The sign re-sorts the floor factors from row order to that planar
    order; all other factors are even.
    """
    for _, lab in iter_vertices(tree):
        if not is_floor_label(lab) and label_arity(lab) != 2:
            return Element()
    planar = sorted(floor_paths(tree))
    row = [p for p in row_order(tree) if p in set(planar)]
    degrees = [label_degree(label_at(tree, p)) for p in row]
    perm = [planar.index(p) for p in row]
    sign = koszul_sign(degrees, perm)
    key = tuple(
        tuple(arity(subtree_at(tree, p + (l,)))
              for l in range(label_arity(label_at(tree, p))))
        for p in planar)
    return Element.monomial(key, sign)
