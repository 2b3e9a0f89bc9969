"""Command-line front end: ``wittforms [global flags] <command> [args]``.

Form literals: over a field, comma-separated coefficients (``1,2,4``).  For
t > 1 each coefficient is the integer sum c_i p^i of its coordinates in the
polynomial basis of F_q.  In either mode ``@0,1,2`` lists power classes and
``@{0:2,1:1}`` gives multiplicities.

Exit codes: 0 success, 1 a verification check failed, 2 domain error,
64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import diagform as df
from . import pointwise as pw
from . import verify
from .errors import AbstractMode, DegreeTooSmall, DomainError
from .ffield import PowerClassGroup, make_field, split_prime_power

EXIT_OK, EXIT_CHECK_FAILED, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="wittforms",
        description="Witt rings of diagonal forms of degree d >= 3 over finite fields and abstract power-class groups.",
        epilog=(
            "Coefficients are integers in F_p when t = 1; for t > 1 they are polynomial-basis "
            "encodings sum c_i p^i. '@0,1,2' lists classes, '@{0:2,1:1}' gives multiplicities."
        ),
    )
    src = ap.add_argument_group("field or group")
    src.add_argument("--q", type=int, help="field order q = p^t")
    src.add_argument("--p", type=int, help="characteristic (with --t)")
    src.add_argument("--t", type=int, default=None, help="extension degree (with --p)")
    src.add_argument("--group", help="abstract power-class group, e.g. '3' or '2x2'")
    ap.add_argument("--d", type=int, default=3, help="form degree (default 3)")
    ap.add_argument("--H", default="max", help="subgroup: max | trivial | order:n | gens:a;b (default max)")
    ap.add_argument("--kind", choices=["H", "I"], default="H", help="equivalence kind (I needs a field)")
    ap.add_argument("--json", action="store_true", help="emit a single JSON document")
    ap.add_argument("--seed", type=int, default=verify.DEFAULT_SEED, help="seed for randomized checks")
    ap.add_argument("--budget", type=int, default=pw.SEARCH_BUDGET, help="isotropy search budget")

    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("classes", help="list the power classes and the cosets of H")
    for name, hlp in (
        ("reduce", "canonical reduced representative"),
        ("invariants", "dimension, dimension index and permanent"),
        ("classify", "round / universal / H_max-form / isotropic / I-form"),
        ("neg", "an additive inverse in the Witt ring"),
    ):
        sub.add_parser(name, help=hlp).add_argument("form")
    iso = sub.add_parser("isotropy", help="decide isotropy, with a witness")
    iso.add_argument("form")
    iso.add_argument("--method", choices=["auto", "brute"], default="auto")
    eq = sub.add_parser("equiv", help="are two forms Witt-equivalent?")
    eq.add_argument("form_a")
    eq.add_argument("form_b")
    tab = sub.add_parser("table", help="CSV Cayley table of reduced classes")
    tab.add_argument("--max-dim", type=int, default=2)
    tab.add_argument("--op", choices=["sum", "product"], default="product")
    tab.add_argument("--figure", help="also write a heatmap to this path")
    ver = sub.add_parser("verify", help="run named checks")
    ver.add_argument("checks", nargs="*", help="check ids (default: all)")
    ver.add_argument("--list", action="store_true", help="list the available checks")
    ver.add_argument("--jobs", type=int, default=1)
    ver.add_argument("--report", help="directory for JSON reports, a CSV summary and a chart")
    return ap


# ---------------------------------------------------------------------------
# configuration


def make_space(args) -> PowerClassGroup:
    if args.d < 3:
        raise DegreeTooSmall(f"degree {args.d}: the class-multiset model needs d >= 3")
    if args.group and (args.q or args.p):
        raise UsageError("give either a field (--q or --p/--t) or --group, not both")
    if args.q and args.p:
        raise UsageError("give --q or --p/--t, not both")
    if args.group:
        if args.kind == "I":
            raise UsageError("--kind I needs a concrete field")
        try:
            factors = [int(x) for x in args.group.lower().split("x")]
        except ValueError:
            raise UsageError(f"bad --group {args.group!r}") from None
        return PowerClassGroup.abstract(factors, args.d, args.H)
    if args.q:
        p, t = split_prime_power(args.q)
        if args.t is not None and args.t != t:
            raise UsageError("--t disagrees with --q")
    elif args.p:
        p, t = args.p, args.t or 1
    else:
        raise UsageError("this command needs --q, --p/--t or --group")
    space = PowerClassGroup.of_field(make_field(p, t, args.d), args.H)
    if args.kind == "I" and not space.is_maximal():
        raise DomainError("I-equivalence is defined for H maximal only")
    return space


def _bool(b: bool) -> str:
    return "true" if b else "false"


def _reduce(space, a, kind):
    return df.h_reduce(a) if kind == "H" else pw.i_canonical(a)


# ---------------------------------------------------------------------------
# commands; each returns (text lines, json document, exit code)


def cmd_classes(args, space):
    doc = {"order": space.order, "H": sorted(space.H), "cosets": [list(c) for c in space.cosets()]}
    lines = []
    if space.field_mode:
        F = space.field
        doc["field"] = F.descriptor()
        doc["classes"] = [F.class_elements(c) for c in range(F.s)]
        for c, els in enumerate(doc["classes"]):
            lines.append(f"class {c}: {{{','.join(map(str, els))}}}")
    else:
        doc["classes"] = [list(space.group.as_tuple(g)) for g in space.group.elements()]
        for g, t in enumerate(doc["classes"]):
            lines.append(f"class {g}: {tuple(t)}")
    lines.append("H: " + ",".join(map(str, doc["H"])))
    lines.append("cosets: " + " ".join("{" + ",".join(map(str, c)) + "}" for c in doc["cosets"]))
    return lines, doc, EXIT_OK


def cmd_reduce(args, space):
    a = df.parse_form(space, args.form)
    red = _reduce(space, a, args.kind)
    doc = {"input": df.form_to_json(a), "kind": args.kind, "reduced": df.form_to_json(red)}
    if args.kind == "I":
        part, t = pw.i_decompose(a)
        doc["i_decomposition"] = {"reduced": df.format_form(part), "i_part": df.format_form(t)}
    return [df.format_form(red)], doc, EXIT_OK


def cmd_equiv(args, space):
    a, b = df.parse_form(space, args.form_a), df.parse_form(space, args.form_b)
    same = df.h_equivalent(a, b) if args.kind == "H" else pw.i_equivalent(a, b)
    doc = {
        "kind": args.kind,
        "equivalent": same,
        "a": df.form_to_json(a),
        "b": df.form_to_json(b),
    }
    return [_bool(same)], doc, EXIT_OK


def cmd_invariants(args, space):
    a = df.parse_form(space, args.form)
    w = df.WittClass(a, args.kind)
    try:
        witt_perm = df.permanent(w)
    except DomainError:
        witt_perm = None
    doc = {
        "dim": a.dim,
        "dim_index": df.dim_index(a),
        "permanent": df.permanent(a),
        "witt_permanent": witt_perm,
        "is_H_form": df.is_H_form(a),
        "similarity_group": sorted(df.similarity_group(a)),
    }
    lines = [f"{k}: {'not invariant' if v is None else v}" for k, v in doc.items()]
    return lines, doc, EXIT_OK


def _witness_doc(F, w):
    if w is None:
        return None
    return {"elements": list(w), "basis": [F.coefficients(x) for x in w]}


def cmd_isotropy(args, space):
    a = df.parse_form(space, args.form)
    if not space.field_mode:
        raise AbstractMode("isotropy needs a concrete field")
    iso, w = pw.is_isotropic(a, method=args.method, budget=args.budget)
    doc = {"isotropic": iso, "witness": _witness_doc(space.field, w), "form": df.form_to_json(a)}
    line = "isotropic " + ",".join(map(str, w)) if iso else "anisotropic"
    return [line], doc, EXIT_OK


def cmd_classify(args, space):
    a = df.parse_form(space, args.form)
    flags = pw.classify(a)
    prof = pw.represented_classes(a)
    doc = {**flags, "represented": sorted(prof.represented), "form": df.form_to_json(a)}
    lines = [f"{k}: {_bool(v)}" for k, v in flags.items()]
    lines.append("represented: " + ",".join(map(str, sorted(prof.represented))))
    return lines, doc, EXIT_OK


def cmd_neg(args, space):
    a = df.parse_form(space, args.form)
    inv = df.witt_neg(a) if args.kind == "H" else pw.witt_neg_I(a)
    doc = {"kind": args.kind, "input": df.form_to_json(a), "neg": df.form_to_json(inv)}
    return [df.format_form(inv)], doc, EXIT_OK


def reduced_classes(space, max_dim: int) -> list[df.DiagonalForm]:
    seen, out = set(), []
    for m in verify.multisets(space.order, max_dim):
        r = df.h_reduce(df.from_mult(space, m))
        if tuple(r.mult) not in seen:
            seen.add(tuple(r.mult))
            out.append(r)
    return out


def cmd_table(args, space):
    if args.max_dim < 0:
        raise DomainError("--max-dim must be nonnegative")
    reps = reduced_classes(space, args.max_dim)
    index = {tuple(r.mult): i for i, r in enumerate(reps)}
    labels = [df.format_form(r) for r in reps]
    op = df.osum if args.op == "sum" else df.tensor
    cells, idx = [], []
    for a in reps:
        row, irow = [], []
        for b in reps:
            r = _reduce(space, op(a, b), args.kind)
            row.append(df.format_form(r))
            irow.append(index.get(tuple(r.mult)))
        cells.append(row)
        idx.append(irow)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([args.op] + labels)
    for lab, row in zip(labels, cells):
        w.writerow([lab] + row)
    doc = {"op": args.op, "labels": labels, "table": cells}
    if args.figure:
        from .plotting import cayley_heatmap

        cayley_heatmap(labels, idx, args.figure, title=f"{args.op} of reduced classes")
        doc["figure"] = str(args.figure)
    return buf.getvalue().splitlines(), doc, EXIT_OK


def cmd_verify(args, space):
    if args.list:
        rows = verify.list_checks()
        return [f"{cid}\t{summary}" for cid, summary in rows], {"checks": dict(rows)}, EXIT_OK
    reports = verify.run_all(args.checks or None, seed=args.seed, jobs=args.jobs)
    lines = ["check_id,verdict,cases_run,elapsed"]
    lines += [f"{r.check_id},{r.verdict},{r.cases_run},{r.elapsed}" for r in reports]
    doc = {"reports": [r.to_json() for r in reports]}
    if args.report:
        out = Path(args.report)
        out.mkdir(parents=True, exist_ok=True)
        (out / "reports.json").write_text(json.dumps(doc, indent=2, sort_keys=True))
        (out / "summary.csv").write_text("\n".join(lines) + "\n")
        for r in reports:
            if not r.passed:
                verify.write_replay(r, out)
        from .plotting import check_summary_chart

        check_summary_chart([(r.check_id, r.verdict, r.elapsed) for r in reports], out / "checks.png")
        doc["report_dir"] = str(out)
    code = EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED
    return lines, doc, code


COMMANDS = {
    "classes": cmd_classes,
    "reduce": cmd_reduce,
    "equiv": cmd_equiv,
    "invariants": cmd_invariants,
    "isotropy": cmd_isotropy,
    "classify": cmd_classify,
    "neg": cmd_neg,
    "table": cmd_table,
    "verify": cmd_verify,
}


def run_cli(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        space = None if args.command == "verify" else make_space(args)
        lines, doc, code = COMMANDS[args.command](args, space)
    except UsageError as exc:
        print(str(exc), file=stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_DOMAIN
    if args.json:
        stdout.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        for line in lines:
            stdout.write(line + "\n")
    return code


def main(argv=None) -> None:
    try:
        code = run_cli(argv)
    except SystemExit as exc:  # --help
        code = exc.code if isinstance(exc.code, int) else EXIT_OK
    sys.exit(code)
