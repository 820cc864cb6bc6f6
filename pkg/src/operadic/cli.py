"""Command line front end.

Five subcommands cover the public surface: ``basis`` enumerates tree
bases with a dimension table, ``diff`` prints the differential of a
single element, ``verify`` runs the bounded certification suites,
``check`` validates a concrete instance document, and ``compose``
writes the convolution composite of two morphism documents.  The
``homotopy-check`` and ``coalgebra-check`` names are shorthands for the
matching ``verify`` suites.

Reports are lists of ``{"id", "status", "witness"}`` rows sorted by id;
``--json`` switches the human table for a machine-readable document.
Exit status is 0 when every check passes, 1 when any fails, and 2 for
usage or input errors.  The default report output carries no timing
data, so repeated runs are byte-identical; ``--timings`` opts in to a
per-task ``timing`` field.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .bimodules import (FreeBimodule, HomotopyUnitalBimodule,
                        verify_d_squared_bimodule)
from .elements import Element
from .operads import (AInfinity, AssociativeOperad, HomotopyUnital,
                      verify_d_squared)
from .render import format_element, format_tree, parse_tree

STRUCTURES = {
    "ainf": AInfinity,
    "as": lambda: AssociativeOperad(unital=False),
    "ass": lambda: AssociativeOperad(unital=True),
    "ainf-hu": HomotopyUnital,
    "f1": FreeBimodule,
    "f1-hu": HomotopyUnitalBimodule,
}

SUITES = ("dsq", "homotopy", "coalgebra", "homology", "all")

# Default bound per suite, and how a shared --arity-max rescales each
# suite when running "all".  The offsets keep the suites on the same
# ladder the defaults sit on: 8, 6, 6, 4.
SUITE_DEFAULT = {"dsq": 8, "homotopy": 6, "coalgebra": 6, "homology": 4}
SUITE_OFFSET = {"dsq": 0, "homotopy": 2, "coalgebra": 2, "homology": 4}


class UsageError(Exception):
    pass


def _structure_flags(sub):
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--operad", choices=sorted(STRUCTURES),
                       dest="structure", metavar="NAME",
                       help="structure name: " + "|".join(sorted(STRUCTURES)))
    group.add_argument("--bimodule", choices=sorted(STRUCTURES),
                       dest="structure", metavar="NAME",
                       help="alias for --operad")


def _report_flags(sub):
    sub.add_argument("--json", action="store_true",
                     help="print the report as JSON instead of a table")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="operadic",
        description="symbolic engine for homotopy-unital structures",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", help="enumerate a tree basis")
    _structure_flags(p)
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--degree", type=int, default=None,
                   help="restrict to a single degree")
    p.add_argument("--degree-min", type=int, default=None,
                   help="restrict to degrees >= this bound")
    p.add_argument("--max-vertices", type=int, default=None,
                   help="cap the vertex count (required for -hu bases)")
    _report_flags(p)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("diff", help="print the differential of one element")
    _structure_flags(p)
    p.add_argument("--element", required=True,
                   help="a generator label such as m2, or a full tree "
                        "such as m2(m2(.,.),.)")
    _report_flags(p)
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("verify", help="run a certification suite")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--arity-max", type=int, default=None,
                   help="suite bound; with --suite all each suite runs at "
                        "its own offset below this value")
    p.add_argument("--degree-min", type=int, default=-2,
                   help="window floor for the homology suite")
    p.add_argument("--jobs", type=int, default=1,
                   help="run suite tasks in this many worker processes")
    p.add_argument("--timings", action="store_true",
                   help="add per-task wall times to the report")
    _report_flags(p)
    p.set_defaults(func=cmd_verify)

    for alias, suite in (("homotopy-check", "homotopy"),
                         ("coalgebra-check", "coalgebra")):
        p = sub.add_parser(alias, help="shorthand for verify --suite " + suite)
        p.add_argument("--arity-max", type=int, default=None)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--timings", action="store_true")
        _report_flags(p)
        p.set_defaults(func=cmd_verify, suite=suite, degree_min=-2)

    p = sub.add_parser("check", help="validate a concrete instance document")
    p.add_argument("--instance", required=True, metavar="FILE")
    p.add_argument("--as", dest="mode", default=None,
                   choices=["ainf", "hu-algebra", "morphism", "hu-morphism",
                            "unitality"],
                   help="which checks to run; inferred from the document "
                        "when omitted")
    p.add_argument("--arity-max", type=int, default=4)
    _report_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("compose", help="compose two morphism documents")
    p.add_argument("--g", required=True, metavar="FILE",
                   help="morphism applied first (maps act on the right)")
    p.add_argument("--h", required=True, metavar="FILE",
                   help="morphism applied second")
    p.add_argument("--out", required=True, metavar="FILE")
    p.add_argument("--arity-max", type=int, default=None,
                   help="truncate the composite to components of arity "
                        "at most this bound")
    p.set_defaults(func=cmd_compose)

    return parser


# ---------------------------------------------------------------------------
# basis and diff
# ---------------------------------------------------------------------------

def _render_key(key):
    return format_tree(key) if isinstance(key, tuple) else str(key)


def cmd_basis(args, out):
    pres = STRUCTURES[args.structure]()
    try:
        keys = pres.basis(args.arity, max_vertices=args.max_vertices,
                          degree=args.degree, min_degree=args.degree_min)
    except ValueError as exc:
        raise UsageError(str(exc))
    graded = {}
    for key in keys:
        graded.setdefault(pres.key_degree(key), []).append(key)
    degrees = sorted(graded, reverse=True)
    if args.json:
        doc = {
            "structure": args.structure,
            "arity": args.arity,
            "total": len(keys),
            "by_degree": {str(d): len(graded[d]) for d in degrees},
            "keys": [{"degree": d, "tree": _render_key(k)}
                     for d in degrees for k in graded[d]],
        }
        out.write(json.dumps(doc, indent=2, sort_keys=True,
                             ensure_ascii=False) + "\n")
        return 0
    out.write("arity %d: %d keys\n" % (args.arity, len(keys)))
    for d in degrees:
        out.write("degree %d: %d\n" % (d, len(graded[d])))
    for d in degrees:
        for key in graded[d]:
            out.write("  %d  %s\n" % (d, _render_key(key)))
    return 0


def cmd_diff(args, out):
    pres = STRUCTURES[args.structure]()
    try:
        if args.structure in ("as", "ass") and args.element.isdigit():
            tree = int(args.element)
        else:
            tree = parse_tree(args.element)
        result = pres.differential(Element.monomial(tree))
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        raise UsageError("cannot differentiate %r in %s: %s"
                         % (args.element, args.structure, exc))
    text = format_element(result)
    if args.json:
        out.write(json.dumps({"structure": args.structure,
                              "element": format_tree(tree),
                              "differential": text},
                             indent=2, sort_keys=True,
                             ensure_ascii=False) + "\n")
    else:
        out.write(text + "\n")
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _run_task(spec):
    """Execute one verification task; module level so workers can load it.

    Workers share no state: each builds its presentation objects from
    scratch, so fan-out cannot leak caches between tasks.
    """
    kind = spec[0]
    if kind == "dsq-ainf":
        return verify_d_squared(AInfinity(), spec[1])
    if kind == "dsq-hu":
        return verify_d_squared(HomotopyUnital(), spec[1], max_weight=spec[1])
    if kind == "dsq-f1":
        return verify_d_squared_bimodule(FreeBimodule(), spec[1])
    if kind == "dsq-f1hu":
        return verify_d_squared_bimodule(HomotopyUnitalBimodule(), spec[1],
                                         max_weight=spec[1])
    if kind == "homotopy-lemma":
        from .homotopy import verify_homotopy_lemma
        return verify_homotopy_lemma(spec[1])
    if kind == "homotopy-filtration":
        from .homotopy import verify_filtration
        return verify_filtration(spec[1])
    if kind == "coalgebra-f1":
        from .coalgebra import verify_coalgebra
        return verify_coalgebra("f1", max_arity=spec[1])
    if kind == "coalgebra-f1hu":
        from .coalgebra import verify_coalgebra
        return verify_coalgebra("f1-hu", max_weight=spec[1])
    if kind == "homology":
        from .homology import verify_homology
        return verify_homology(max_arity=spec[1] + 1, hu_max_arity=spec[1],
                               degree_min=spec[2])
    raise ValueError("unknown task %r" % (kind,))


def suite_tasks(suite, arity_max, degree_min):
    """The (task spec, label) list a suite expands to.

    A single suite reads --arity-max as its own bound.  Running "all"
    keeps the suites on the documented ladder: with bound B the d-squared
    checks run at B, homotopy and coalgebra at B - 2, homology at B - 4,
    matching the per-suite defaults when B is 8.
    """
    wanted = SUITES[:-1] if suite == "all" else (suite,)
    tasks = []
    for name in wanted:
        if arity_max is None:
            bound = SUITE_DEFAULT[name]
        elif suite == "all":
            bound = arity_max - SUITE_OFFSET[name]
        else:
            bound = arity_max
        if bound < 1:
            raise UsageError("--arity-max %d leaves no room for the %s "
                             "suite" % (arity_max, name))
        if name == "dsq":
            tasks += [(("dsq-ainf", bound), "dsq ainf"),
                      (("dsq-hu", bound - 1), "dsq ainf-hu"),
                      (("dsq-f1", bound - 1), "dsq f1"),
                      (("dsq-f1hu", bound - 2), "dsq f1-hu")]
        elif name == "homotopy":
            tasks += [(("homotopy-lemma", bound), "homotopy lemma"),
                      (("homotopy-filtration", bound), "homotopy filtration")]
        elif name == "coalgebra":
            tasks += [(("coalgebra-f1", bound), "coalgebra f1"),
                      (("coalgebra-f1hu", bound - 1), "coalgebra f1-hu")]
        elif name == "homology":
            tasks += [(("homology", bound, degree_min), "homology")]
    return tasks


def run_suite(suite, arity_max=None, degree_min=-2, jobs=1, timings=False):
    """Run a verification suite and return its merged, sorted rows."""
    tasks = suite_tasks(suite, arity_max, degree_min)
    results = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [(label, pool.submit(_timed_task, spec))
                       for spec, label in tasks]
            for label, fut in futures:
                results.append((label,) + fut.result())
    else:
        for spec, label in tasks:
            results.append((label,) + _timed_task(spec))
    rows = []
    for label, task_rows, elapsed in results:
        for row in task_rows:
            if timings:
                row = dict(row, timing=round(elapsed, 3), task=label)
            rows.append(row)
    rows.sort(key=lambda r: r["id"])
    return rows


def _timed_task(spec):
    start = time.monotonic()
    rows = _run_task(spec)
    return rows, time.monotonic() - start


def cmd_verify(args, out):
    rows = run_suite(args.suite, args.arity_max, args.degree_min,
                     jobs=args.jobs, timings=args.timings)
    return emit_report(rows, args.json, out)


def emit_report(rows, as_json, out):
    failed = sum(1 for r in rows if r["status"] != "pass")
    if as_json:
        doc = {"checks": rows, "total": len(rows), "failed": failed}
        out.write(json.dumps(doc, indent=2, sort_keys=True,
                             ensure_ascii=False) + "\n")
    else:
        for row in rows:
            line = "%s %s" % (row["status"].upper(), row["id"])
            if row["status"] != "pass" and row.get("witness"):
                line += "  witness: %s" % row["witness"]
            if "timing" in row:
                line += "  [%ss %s]" % (row["timing"], row["task"])
            out.write(line + "\n")
        out.write("summary: %d checks, %d failed\n" % (len(rows), failed))
    return 0 if failed == 0 else 1


# ---------------------------------------------------------------------------
# check and compose
# ---------------------------------------------------------------------------

def _load_json(path):
    try:
        with open(path) as handle:
            return json.load(handle)
    except OSError as exc:
        raise UsageError("cannot read %s: %s" % (path, exc))
    except json.JSONDecodeError as exc:
        raise UsageError("%s is not valid JSON: %s" % (path, exc))


def _instance_from_doc(doc, path):
    from .evaluate import algebra_from_document, morphism_from_document
    try:
        if "morphisms" in doc or "target" in doc:
            return morphism_from_document(doc)
        return algebra_from_document(doc)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError("%s: %s" % (path, exc))


def _check_mode(mode, instance, path):
    from .evaluate import FiniteMorphism
    is_morphism = isinstance(instance, FiniteMorphism)
    if mode is None:
        if is_morphism:
            return "hu-morphism" if instance.kind == "hu" else "morphism"
        return "hu-algebra" if instance.kind == "hu" else "ainf"
    if mode in ("morphism", "hu-morphism", "unitality"):
        if mode != "unitality" and not is_morphism:
            raise UsageError("%s holds an algebra, but --as %s expects a "
                             "morphism document" % (path, mode))
    elif is_morphism:
        raise UsageError("%s holds a morphism, but --as %s expects an "
                         "algebra document" % (path, mode))
    return mode


def cmd_check(args, out):
    from . import evaluate
    doc = _load_json(args.instance)
    instance = _instance_from_doc(doc, args.instance)
    mode = _check_mode(args.mode, instance, args.instance)
    n_max = args.arity_max
    try:
        if mode == "ainf":
            rows = evaluate.check_ainf_algebra(instance, n_max)
        elif mode == "hu-algebra":
            rows = (evaluate.check_ainf_algebra(instance, n_max)
                    + evaluate.check_hu_algebra(instance, n_max)
                    + evaluate.check_unitality(instance)
                    + evaluate.check_fukaya(instance, n_max))
        elif mode == "morphism":
            rows = evaluate.check_ainf_morphism(instance, n_max)
        elif mode == "hu-morphism":
            rows = (evaluate.check_ainf_morphism(instance, n_max)
                    + evaluate.check_hu_morphism(instance, n_max, n_max)
                    + evaluate.check_unital_morphism(instance))
        elif mode == "unitality":
            if isinstance(instance, evaluate.FiniteMorphism):
                rows = evaluate.check_unital_morphism(instance)
            else:
                rows = evaluate.check_unitality(instance)
        else:
            raise UsageError("unknown mode %r" % mode)
    except ValueError as exc:
        raise UsageError("%s: %s" % (args.instance, exc))
    rows = sorted(rows, key=lambda r: r["id"])
    return emit_report(rows, args.json, out)


def cmd_compose(args, out):
    from .evaluate import (FiniteMorphism, compose_morphisms,
                           morphism_to_document)
    g = _instance_from_doc(_load_json(args.g), args.g)
    h = _instance_from_doc(_load_json(args.h), args.h)
    for path, mor in ((args.g, g), (args.h, h)):
        if not isinstance(mor, FiniteMorphism):
            raise UsageError("%s does not hold a morphism document" % path)
    if not g.target.module.same_as(h.source.module):
        raise UsageError("the target of --g does not match the source "
                         "of --h")
    try:
        composite = compose_morphisms(g, h, n_max=args.arity_max)
    except ValueError as exc:
        raise UsageError(str(exc))
    doc = morphism_to_document(composite)
    with open(args.out, "w") as handle:
        json.dump(doc, handle, indent=2, sort_keys=True, ensure_ascii=False)
        handle.write("\n")
    support = composite.plain_support()
    out.write("wrote composite (components up to arity %s) to %s\n"
              % (support, args.out))
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args, sys.stdout)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        code = 2
    except BrokenPipeError:
        code = 1
    return code


if __name__ == "__main__":
    sys.exit(main())
