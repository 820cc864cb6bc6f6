"""The generator-label grammar shared by every structure in the package.

Operation labels are compact strings:

* ``m2``, ``m3``, ... -- the n-ary multiplications, degree 2-n;
* ``m1;0``, ``m0;2;1``, ... -- multiplications with unit-slot groups; the
  semicolons mark where a unit argument has been traded for a homotopy
  direction.  A label with groups (n_1, ..., n_k) has arity n = sum n_q and
  degree 4 - n - 2k, which for k = 1 reduces to the plain 2 - n;
* ``f1``, ``f2``, ... -- the floor generators of the morphism bimodule,
  degree 1-n, and their grouped versions ``f1;0`` etc. of degree 3 - n - 2k;
* ``v`` -- the nullary floor generator of degree -1;
* ``i`` -- the homotopy unit, nullary of degree 0;
* ``j`` -- the contracting direction, nullary of degree -1;
* ``1su`` -- the strict unit, nullary of degree 0.

In two-floor trees (used for the comultiplication) a floor label carries its
floor number as a prefix, e.g. ``1:f2`` and ``2:v``; floor 1 is the one
closest to the inputs.  Non-floor labels never carry a prefix.
"""

from __future__ import annotations

ATOMS = {
    "i": (0, 0),
    "j": (0, -1),
    "1su": (0, 0),
    "v": (0, -1),
}


def split_floor_prefix(lab):
    """Return (floor_number or None, bare label)."""
    if len(lab) > 1 and lab[1] == ":" and lab[0].isdigit():
        return int(lab[0]), lab[2:]
    return None, lab


def groups_of(lab):
    """The group tuple of an m- or f-label: groups_of('m1;0') == (1, 0)."""
    _, bare = split_floor_prefix(lab)
    assert bare[0] in ("m", "f"), lab
    return tuple(int(part) for part in bare[1:].split(";"))


def make_label(kind, groups, floor=None):
    assert kind in ("m", "f")
    lab = kind + ";".join(str(g) for g in groups)
    if floor is not None:
        lab = "%d:%s" % (floor, lab)
    return lab


def label_arity(lab):
    _, bare = split_floor_prefix(lab)
    if bare in ATOMS:
        return ATOMS[bare][0]
    return sum(groups_of(bare))


def label_degree(lab):
    _, bare = split_floor_prefix(lab)
    if bare in ATOMS:
        return ATOMS[bare][1]
    groups = groups_of(bare)
    n, k = sum(groups), len(groups)
    if bare[0] == "m":
        return 4 - n - 2 * k
    return 3 - n - 2 * k


def is_floor_label(lab):
    """Floor labels are the f-generators and v, with or without a prefix."""
    _, bare = split_floor_prefix(lab)
    return bare == "v" or bare[0] == "f"


def is_grouped(lab):
    """True for labels whose expansion through j-arguments is nontrivial."""
    _, bare = split_floor_prefix(lab)
    if bare in ATOMS:
        return False
    return len(groups_of(bare)) > 1
