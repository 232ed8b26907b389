"""Command-line front end.

Output columns (TSV, one header comment line then a column comment line):

  enumerate   index, label, rho, descents (count), word (a reduced underline word)
  poset       index, label, rank, covers (comma separated upper-cover indices)
  poly        name, coefficients (ascending, space separated); then check lines
  complex     dimension, count; then purity/thinness/Boolean report lines
  shell       sample, ok, restriction dimensions; then the restriction multiset
  homology    dim, betti, torsion
  verify      check, instance, status
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter

from .catalog import Instance, load_catalog, load_instance
from .cellcomplex import (
    check_boolean_intervals,
    check_h_identities,
    check_thin,
    sample_weak_extensions,
    verify_shelling,
)
from .coxeter import DEFAULT_ELEMENT_CAP, DEFAULT_ROOT_CAP, bruhat_poset, two_sided_weak_poset
from .errors import InternalConsistencyError, SystemSpecError, TwistinvError, VerificationFailure
from .homology import reduced_homology
from .poset import PosetError, graded_rank, open_interval, order_complex, to_dot, to_json, to_text
from .verify import run_suite

DEFAULT_SEED = 0
FORMATS = ("tsv", "json", "dot", "text")
POLYS = ("f", "h", "des")


def _add_common(parser: argparse.ArgumentParser, defaults: bool) -> None:
    # on subcommands the defaults are suppressed so options may appear on either side
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    parser.add_argument("--system", default=d(None), help="catalog name (e.g. A3-flip) or path to a JSON system spec")
    parser.add_argument("--format", choices=FORMATS, default=d("tsv"))
    parser.add_argument("--seed", type=int, default=d(DEFAULT_SEED))
    parser.add_argument("--cap", type=int, default=d(DEFAULT_ELEMENT_CAP), help="maximum group order")
    parser.add_argument(
        "--root-cap", type=int, default=d(DEFAULT_ROOT_CAP), help="maximum number of positive roots"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistinv",
        description="Twisted involutions in finite Coxeter groups.",
        epilog=__doc__.split("\n", 2)[2],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    _add_common(parser, defaults=True)
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, defaults=False)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("enumerate", parents=[common], help="list the twisted involutions with rho and descents")
    p = sub.add_parser("poset", parents=[common], help="export a poset")
    p.add_argument("--which", choices=("bruhat", "bruhat-twisted", "weak-twisted", "two-sided-weak"), default="bruhat-twisted")
    p = sub.add_parser("poly", parents=[common], help="f, h and descent polynomials with identity checks")
    p.add_argument("--which", default="f,h,des", help="comma separated subset of f,h,des")
    sub.add_parser("complex", parents=[common], help="cell census and structure report")
    p = sub.add_parser("shell", parents=[common], help="test sampled linear extensions of the weak order as shellings")
    p.add_argument("--samples", type=int, default=10)
    p = sub.add_parser("homology", parents=[common], help="reduced homology of an open Bruhat interval")
    p.add_argument("--interval", required=True, help="U:V with labels (e, w0, s1.s2) or indices")
    p = sub.add_parser("verify", parents=[common], help="run the verification battery")
    p.add_argument("--suite", choices=("quick", "full"), default="quick")
    return parser


def _header(args, inst: Instance | None) -> str:
    name = inst.name if inst is not None else "catalog"
    return f"twistinv {args.command} system={name} seed={args.seed}"


def _emit_rows(out, args, inst, columns, rows, extra=()):
    if args.format == "json":
        doc = {"command": args.command, "system": inst.name, "seed": args.seed}
        doc["rows"] = [dict(zip(columns, r)) for r in rows]
        doc.update(extra)
        out.write(json.dumps(doc, indent=1) + "\n")
        return
    if args.format == "dot":
        raise SystemSpecError(f"format dot is not available for {args.command}")
    out.write(f"# {_header(args, inst)}\n")
    sep = "\t" if args.format == "tsv" else "  "
    out.write("# " + sep.join(columns) + "\n")
    for r in rows:
        out.write(sep.join(str(x) for x in r) + "\n")
    for k, v in extra:
        out.write(f"# {k}{sep}{v}\n")


def _word(inst: Instance, word) -> str:
    gens = inst.cm.generators
    return ".".join(gens[s] for s in word) or "-"


def cmd_enumerate(args, inst, out):
    t = inst.twisted
    rows = [(m, t.label(m), t.rho[m], len(t.descents(m)), _word(inst, t.sbar_word[m])) for m in range(t.size)]
    _emit_rows(out, args, inst, ("index", "label", "rho", "descents", "word"), rows)


def cmd_poset(args, inst, out):
    p = {
        "bruhat": lambda: bruhat_poset(inst.group),
        "bruhat-twisted": lambda: inst.bruhat,
        "weak-twisted": lambda: inst.weak,
        "two-sided-weak": lambda: two_sided_weak_poset(inst.group),
    }[args.which]()
    header = f"{_header(args, inst)} which={args.which}"
    if args.format == "dot":
        out.write(to_dot(p, name=f"{inst.name} {args.which}", header=header))
    elif args.format == "json":
        doc = {"command": "poset", "system": inst.name, "seed": args.seed, "which": args.which}
        doc.update(to_json(p))
        out.write(json.dumps(doc, indent=1) + "\n")
    else:
        out.write(to_text(p, header=header))


def cmd_poly(args, inst, out):
    which = [w.strip() for w in args.which.split(",") if w.strip()]
    unknown = [w for w in which if w not in POLYS]
    if unknown or not which:
        raise SystemSpecError(f"--which must be a comma separated subset of {','.join(POLYS)}")
    rep = check_h_identities(inst.faces, inst.twisted, args.seed)
    polys = {"f": rep.f, "h": rep.h, "des": rep.des}
    checks = (
        ("h=des", rep.h_equals_des),
        ("h=h_shelling", rep.shelling_matches),
        ("dehn_sommerville", rep.dehn_sommerville),
        ("euler_sphere", rep.euler_sphere),
    )
    if args.format == "json":
        doc = {"command": "poly", "system": inst.name, "seed": args.seed}
        doc["polynomials"] = {w: list(polys[w].coeffs) for w in which}
        doc["checks"] = {k: v for k, v in checks}
        out.write(json.dumps(doc, indent=1) + "\n")
    elif args.format == "dot":
        raise SystemSpecError("format dot is not available for poly")
    else:
        sep = "\t" if args.format == "tsv" else " "
        out.write(f"# {_header(args, inst)}\n")
        for w in which:
            out.write(f"{w}{sep}{polys[w]}\n")
        for k, v in checks:
            out.write(f"# {k}{sep}{'ok' if v else 'FAIL'}\n")
    return 0 if all(v for _, v in checks) else VerificationFailure.exit_code


def cmd_complex(args, inst, out):
    P, t = inst.faces, inst.twisted
    if args.format == "dot":
        out.write(to_dot(P.as_poset(), name=f"{inst.name} cells", header=_header(args, inst)))
        return
    pure = len(P.facets) == t.size and all(P.cells[f].dimension == t.rank - 1 for f in P.facets)
    thin, boolean = check_thin(P), check_boolean_intervals(P)
    extra = (
        ("pure", "yes" if pure else "no"),
        ("thin", "yes" if thin else f"no ({thin.witness})"),
        ("boolean", "yes" if boolean else f"no ({boolean.witness})"),
    )
    _emit_rows(out, args, inst, ("dimension", "count"), sorted(P.census().items()), extra)


def cmd_shell(args, inst, out):
    if args.samples < 1:
        raise SystemSpecError("--samples must be positive")
    rows, multiset = [], None
    consistent = True
    for k, order in enumerate(sample_weak_extensions(inst.twisted, args.samples, args.seed, inst.weak)):
        rep = verify_shelling(inst.faces, order)
        dims = Counter(rep.restriction_dims)
        if multiset is None:
            multiset = dims
        consistent &= dims == multiset
        rows.append((k, "ok" if rep.ok else f"FAIL {rep.violation}", " ".join(map(str, rep.restriction_dims))))
    summary = " ".join(f"{d}:{c}" for d, c in sorted(multiset.items()))
    extra = (("multiset", summary), ("identical", "yes" if consistent else "no"))
    _emit_rows(out, args, inst, ("sample", "ok", "restriction"), rows, extra)
    return 0 if consistent and all(r[1] == "ok" for r in rows) else VerificationFailure.exit_code


def _resolve(t, token: str) -> int:
    token = token.strip()
    if token.isdigit():
        k = int(token)
        if k >= t.size:
            raise SystemSpecError(f"index {k} out of range (0..{t.size - 1})")
        return k
    try:
        return t.member(token)
    except (KeyError, ValueError) as exc:
        raise SystemSpecError(f"cannot resolve {token!r}: {exc}") from None


def cmd_homology(args, inst, out):
    if args.interval.count(":") != 1:
        raise SystemSpecError("--interval must have the form U:V")
    t, B = inst.twisted, inst.bruhat
    u, v = (_resolve(t, x) for x in args.interval.split(":"))
    if not B.lt(u, v):
        raise SystemSpecError(f"{t.label(u)} is not strictly below {t.label(v)}")
    prof = reduced_homology(order_complex(open_interval(B, u, v)))
    rank = graded_rank(B)
    sphere = prof.is_sphere(rank[v] - rank[u] - 2)
    rows = [(d, b, ",".join(map(str, tor)) or "-") for d, b, tor in prof.groups]
    extra = (("interval", f"{t.label(u)}:{t.label(v)}"), ("sphere", "yes" if sphere else "no"))
    _emit_rows(out, args, inst, ("dim", "betti", "torsion"), rows, extra)


def cmd_verify(args, inst, out):
    instances = [inst] if inst is not None else load_catalog(args.cap, args.root_cap)
    include_global = inst is None and args.suite == "full"
    outcomes = []
    for o in run_suite(instances, args.suite, args.seed, include_global):
        outcomes.append(o)
        if args.format != "json":
            sep = "\t" if args.format == "tsv" else "  "
            if len(outcomes) == 1:
                out.write(f"# {_header(args, inst)} suite={args.suite}\n# check{sep}instance{sep}status\n")
            out.write(f"{o.check}{sep}{o.instance}{sep}{'PASS' if o.ok else 'FAIL'}\n")
    failure = next((o for o in outcomes if not o.ok), None)
    record = None
    if failure is not None:
        record = {"check": failure.check, "instance": failure.instance, "detail": failure.detail, "seed": args.seed}
    if args.format == "json":
        doc = {"command": "verify", "suite": args.suite, "seed": args.seed}
        doc["results"] = [{"check": o.check, "instance": o.instance, "ok": o.ok} for o in outcomes]
        doc["failure"] = record
        out.write(json.dumps(doc, indent=1) + "\n")
    elif record is not None:
        out.write(f"# failure {json.dumps(record, sort_keys=True)}\n")
    return 0 if record is None else VerificationFailure.exit_code


COMMANDS = {
    "enumerate": cmd_enumerate,
    "poset": cmd_poset,
    "poly": cmd_poly,
    "complex": cmd_complex,
    "shell": cmd_shell,
    "homology": cmd_homology,
    "verify": cmd_verify,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.system is None and args.command != "verify":
            raise SystemSpecError("--system is required for this command")
        inst = load_instance(args.system, args.cap, args.root_cap) if args.system is not None else None
        return COMMANDS[args.command](args, inst, out) or 0
    except TwistinvError as exc:
        err.write(f"twistinv: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except PosetError as exc:
        err.write(f"twistinv: {exc}\n")
        return SystemSpecError.exit_code
    except AssertionError as exc:
        err.write(f"twistinv: internal assertion: {exc}\n")
        return InternalConsistencyError.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
