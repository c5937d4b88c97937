"""Command-line entry point.

Exit status: 0 when every check passes, 1 when a check fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

from .cluster_engine import ar_walk, dual_data, label_str
from .compatibility import compatibility_table
from .dynkin import DynkinType, default_orientation, parse_orientation, parse_type


class UsageError(Exception):
    pass


@dataclass
class Output:
    rows: list = field(default_factory=list)  # list of dicts with a fixed key order
    text: list = field(default_factory=list)  # preformatted text lines
    summary: str = ""
    count: int | None = None
    ok: bool = True
    extra: dict = field(default_factory=dict)

    def render(self, fmt: str, quiet: bool) -> str:
        if quiet:
            return "" if self.count is None else f"{self.count}\n"
        if fmt == "json":
            doc = {"rows": self.rows, "summary": self.summary, "count": self.count, "ok": self.ok}
            doc.update(self.extra)
            return json.dumps(doc, indent=1) + "\n"
        if fmt == "csv":
            if not self.rows:
                return ""
            buf = io.StringIO()
            w = csv.DictWriter(buf, fieldnames=list(self.rows[0]), lineterminator="\n")
            w.writeheader()
            for r in self.rows:
                w.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in r.items()})
            return buf.getvalue()
        lines = list(self.text)
        if self.summary:
            lines.append(self.summary)
        if self.count is not None:
            lines.append(str(self.count))
        return "\n".join(lines) + "\n"


# -- helpers -------------------------------------------------------------------------------


def _type_and_orientation(args):
    try:
        dtype = parse_type(args.type)
        orientation = parse_orientation(args.orientation, dtype) if args.orientation else default_orientation(dtype)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return dtype, orientation


def _eq_row(eq) -> dict:
    return {"equation": str(eq), "left": eq.to_json()["left"], "right": eq.to_json()["right"], "source": eq.provenance}


def _extended(dtype, orientation, source: str):
    from .u_system import dedupe, extended_equations_family, extended_equations_universal

    walk = ar_walk(dtype, orientation)
    if source == "universal":
        return extended_equations_universal(walk)
    try:
        fam = extended_equations_family(dtype, orientation)
    except NotImplementedError:
        if source == "family":
            raise UsageError(f"no closed-form family for {dtype}; use --source universal")
        fam = []
    if source == "family":
        return fam
    return dedupe(list(fam) + list(extended_equations_universal(walk)))


# -- commands ------------------------------------------------------------------------------


def cmd_enumerate(args) -> Output:
    from .u_system import f_gamma, format_alphabet

    dtype, orientation = _type_and_orientation(args)
    walk = ar_walk(dtype, orientation)
    dual = dual_data(dtype, orientation)
    out = Output()
    out.text.append(f"type {dtype}  orientation {orientation}")
    for g in walk.pi:
        rec = walk.records[g]
        row = {
            "label": label_str(g),
            "tau": label_str(walk.tau[g]),
            "F": str(rec.f_poly),
            "g": list(rec.g_vector),
            "g_dual": list(dual.records[g].g_vector),
            "f": format_alphabet(f_gamma(g, walk), walk.frozen_names),
        }
        out.rows.append(row)
        out.text.append(
            f"{row['label']}  F = {row['F']}  g = {tuple(row['g'])}  g_dual = {tuple(row['g_dual'])}  f = {row['f']}"
        )
    out.summary = f"{len(walk.pi)} cluster variables, tau order {walk.tau_order()}"
    out.count = len(walk.pi)
    return out


def cmd_compat(args) -> Output:
    dtype, orientation = _type_and_orientation(args)
    walk = ar_walk(dtype, orientation)
    table = compatibility_table(walk)
    out = Output()
    labels = [label_str(g) for g in walk.pi]
    width = max(len(s) for s in labels)
    out.text.append(" " * width + " " + " ".join(s.rjust(width) for s in labels))
    for w, row in zip(labels, table.rows()):
        out.text.append(w.rjust(width) + " " + " ".join(str(v).rjust(width) for v in row))
        out.rows.append({"omega": w, **{g: v for g, v in zip(labels, row)}})
    pairs = len(table.exchangeable_pairs())
    out.summary = f"rows omega, columns gamma: (omega||gamma); {pairs} exchangeable pairs"
    out.count = pairs
    return out


def cmd_u_eqs(args) -> Output:
    from .u_system import primitive_equations

    dtype, orientation = _type_and_orientation(args)
    eqs = primitive_equations(compatibility_table(ar_walk(dtype, orientation)))
    return _listing(_equation_output(eqs, "primitive"), dtype, orientation, "primitive", eqs)


def _listing(out: Output, dtype, orientation, source: str, eqs) -> Output:
    """JSON fields matching the shipped equations schema."""
    out.extra = {"type": str(dtype), "orientation": str(orientation), "source": source, "equations": [eq.to_json() for eq in eqs]}
    return out


def _equation_output(eqs, what: str) -> Output:
    out = Output()
    for eq in eqs:
        out.rows.append(_eq_row(eq))
        out.text.append(str(eq))
    out.summary = f"{len(eqs)} {what} equations"
    out.count = len(eqs)
    return out


def cmd_extended(args) -> Output:
    dtype, orientation = _type_and_orientation(args)
    if args.source == "both":
        from .u_system import extended_equations_universal

        uni = extended_equations_universal(ar_walk(dtype, orientation))
        try:
            fam = _extended(dtype, orientation, "family")
        except UsageError:
            fam = []
        ukeys = {e.key() for e in uni}
        fkeys = {e.key() for e in fam}
        merged = _extended(dtype, orientation, "both")
        out = _listing(_equation_output(merged, "extended"), dtype, orientation, "extended", merged)
        for row, key in zip(out.rows, [e.key() for e in merged]):
            row["source"] = "+".join(s for s, ks in (("family", fkeys), ("universal", ukeys)) if key in ks)
        out.text = [f"{r['equation']}  [{r['source']}]" for r in out.rows]
        out.summary = (
            f"{len(out.rows)} extended equations: {len(fam)} family, {len(uni)} universal, "
            f"{len(fkeys - ukeys)} family only, {len(ukeys - fkeys)} universal only"
        )
        return out
    eqs = _extended(dtype, orientation, args.source)
    return _listing(_equation_output(eqs, f"{args.source} extended"), dtype, orientation, args.source, eqs)


def cmd_local(args) -> Output:
    from .u_system import local_equations

    dtype, orientation = _type_and_orientation(args)
    eqs = local_equations(ar_walk(dtype, orientation))
    out = Output()
    for eq in eqs:
        out.rows.append({"equation": str(eq), **eq.to_json()})
        out.text.append(str(eq))
    out.summary = f"{len(eqs)} local equations"
    out.count = len(eqs)
    return _listing(out, dtype, orientation, "local", eqs)


def cmd_verify(args) -> Output:
    from .u_system import local_equations, primitive_equations, verify_many

    dtype, orientation = _type_and_orientation(args)
    walk = ar_walk(dtype, orientation)
    chosen = {k for k in ("primitive", "extended", "local") if getattr(args, k)}
    if args.all or not chosen:
        chosen = {"primitive", "extended", "local"}
    groups = []
    if "primitive" in chosen:
        groups.append(("primitive", primitive_equations(compatibility_table(walk))))
    if "extended" in chosen:
        groups.append(("extended", _extended(dtype, orientation, "both")))
    if "local" in chosen:
        groups.append(("local", local_equations(walk)))
    out = Output()
    parts = []
    total = 0
    for name, eqs in groups:
        certs = verify_many(eqs, dtype, orientation, jobs=args.jobs)
        for c in certs:
            out.rows.append({"group": name, "equation": c.equation, "ok": c.ok, "witness": c.witness})
            if not c.ok:
                out.text.append(f"FAIL {name}: {c.equation}: {c.witness}")
        out.ok &= all(c.ok for c in certs)
        parts.append(f"{len(certs)} {name}")
        total += len(certs)
    out.summary = " + ".join(parts) + (": pass" if out.ok else ": FAIL")
    out.count = total
    return out


def cmd_count_points(args) -> Output:
    from . import point_count as pc

    dtype, orientation = _type_and_orientation(args)
    p = args.prime
    if not pc.is_prime(p):
        raise UsageError(f"{p} is not prime")
    out = Output()
    detail = {"type": str(dtype), "prime": p, "method": args.method}
    if args.method == "torus":
        count = pc.count_points_torus(dtype, p, orientation, jobs=args.jobs)
    elif args.method == "u-brute":
        try:
            count = pc.count_points_u_bruteforce(dtype, p, orientation)
        except pc.InfeasibleSize as exc:
            raise UsageError(str(exc)) from exc
    elif args.method == "formula":
        try:
            count = pc.closed_form(dtype, p)
        except (pc.ExcludedCharacteristic, NotImplementedError) as exc:
            raise UsageError(str(exc)) from exc
    else:  # compare
        count = pc.count_points_torus(dtype, p, orientation, jobs=args.jobs)
        detail["torus"] = count
        try:
            detail["formula"] = pc.closed_form(dtype, p)
            out.ok &= detail["formula"] == count
        except (pc.ExcludedCharacteristic, NotImplementedError) as exc:
            detail["formula"] = None
            detail["note"] = str(exc)
        try:
            detail["u_brute"] = pc.count_points_u_bruteforce(dtype, p, orientation)
            out.ok &= detail["u_brute"] == count
        except pc.InfeasibleSize:
            detail["u_brute"] = None
    detail["count"] = count
    out.rows.append(detail)
    if args.method == "compare":
        shown = {k: ("skipped" if v is None else v) for k, v in detail.items() if k in ("torus", "formula", "u_brute")}
        out.summary = ", ".join(f"{k} {v}" for k, v in shown.items()) + (
            ": pass" if out.ok else ": FAIL"
        )
    out.count = count
    return out


def cmd_sign_patterns(args) -> Output:
    from .sign_patterns import count_sign_patterns, enumerate_sign_patterns

    dtype, orientation = _type_and_orientation(args)
    walk = ar_walk(dtype, orientation)
    eqs = _extended(dtype, orientation, args.source)
    out = Output()
    if args.emit_patterns:
        out.text.append("# " + " ".join(label_str(g) for g in walk.pi))
        pats = [str(p) for p in enumerate_sign_patterns(eqs, walk.pi)]
        out.text += pats
        out.rows = [{"pattern": p} for p in pats]
        count = len(pats)
    else:
        count = count_sign_patterns(eqs, walk.pi, jobs=args.jobs)
    out.summary = f"{count} consistent sign patterns against {len(eqs)} {args.source} equations"
    out.count = count
    return out


def cmd_trop_check(args) -> Output:
    from .tropical import run_checks

    dtype, orientation = _type_and_orientation(args)
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    unknown = set(checks) - {"delta", "mesh", "fan"}
    if unknown:
        raise UsageError(f"unknown checks {sorted(unknown)}; choose from delta, mesh, fan")
    out = Output()
    for rep in run_checks(dtype, orientation, checks):
        out.rows.append({"check": rep.name, "ok": rep.ok, "failures": len(rep.failures)})
        out.text.append(rep.line())
        out.ok &= rep.ok
    out.summary = "pass" if out.ok else "FAIL"
    return out


def cmd_fold_check(args) -> Output:
    from .folding import SUPPORTED_PAIRS, build_folding, check_folding_identities, parse_pair

    try:
        if args.pair:
            source, target = parse_pair(args.pair)
        elif args.type:
            target = parse_type(args.type)
            source = None
        else:
            raise UsageError("give --pair SOURCE:TARGET or --type TARGET")
        orientation = parse_orientation(args.orientation, target) if args.orientation else None
        fold = build_folding(target, orientation)
    except ValueError as exc:
        raise UsageError(f"{exc}; supported pairs: {', '.join(SUPPORTED_PAIRS)}") from exc
    if source is not None and source != fold.source:
        raise UsageError(f"{target} folds from {fold.source}; supported pairs: {', '.join(SUPPORTED_PAIRS)}")
    rep = check_folding_identities(fold)
    out = Output()
    out.text.append(f"{fold.source} -> {fold.target}  source orientation {fold.source_orientation}")
    out.text += rep.lines()
    out.rows = [{"check": n, "ok": ok, "detail": d} for n, ok, d in rep.checks]
    out.ok = rep.ok
    out.summary = "pass" if rep.ok else "FAIL"
    return out


def cmd_export_json(args) -> Output:
    from .export import dumps, export_document

    dtype, orientation = _type_and_orientation(args)
    text = dumps(export_document(dtype, orientation))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        return Output(summary=f"wrote {args.output}")
    return Output(text=[text.rstrip("\n")])


COMMANDS = {
    "enumerate": (cmd_enumerate, "walk the source sequence: F-polynomials, g-vectors, f_gamma"),
    "compat": (cmd_compat, "compatibility degree table"),
    "u-eqs": (cmd_u_eqs, "primitive u-equations"),
    "extended": (cmd_extended, "extended u-equations"),
    "local": (cmd_local, "local u-equations in X = u/(1-u)"),
    "verify": (cmd_verify, "symbolic verification of u-equations"),
    "count-points": (cmd_count_points, "count F_p-points"),
    "sign-patterns": (cmd_sign_patterns, "count consistent sign patterns"),
    "trop-check": (cmd_trop_check, "tropical checks: delta pairing, mesh relations, normal fan"),
    "fold-check": (cmd_fold_check, "folding identities"),
    "export-json": (cmd_export_json, "full JSON export"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clusterconf", description="Cluster configuration spaces of finite type.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        needs_type = name != "fold-check"
        p.add_argument("--type", required=needs_type, help="Dynkin type such as A3, B3, D4, G2")
        p.add_argument("--orientation", help="comma-separated arrows i>j; default is pinned per type")
        p.add_argument("--format", choices=["text", "json", "csv"], default="text")
        p.add_argument("--quiet", action="store_true", help="print only the trailing count")
        p.add_argument("--jobs", type=int, default=1, help="worker processes")
        if name == "extended":
            p.add_argument("--source", choices=["family", "universal", "both"], default="both")
        if name == "verify":
            p.add_argument("--all", action="store_true")
            p.add_argument("--primitive", action="store_true")
            p.add_argument("--extended", action="store_true")
            p.add_argument("--local", action="store_true")
        if name == "count-points":
            p.add_argument("--prime", type=int, required=True)
            p.add_argument("--method", choices=["torus", "u-brute", "formula", "compare"], default="torus")
        if name == "sign-patterns":
            p.add_argument("--source", choices=["family", "universal"], default="family")
            p.add_argument("--emit-patterns", action="store_true")
        if name == "trop-check":
            p.add_argument("--checks", default="delta,mesh,fan")
        if name == "fold-check":
            p.add_argument("--pair", help="SOURCE:TARGET such as D4:G2")
        if name == "export-json":
            p.add_argument("--output", help="file to write instead of standard output")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    func = COMMANDS[args.command][0]
    try:
        out = func(args)
    except UsageError as exc:
        print(f"clusterconf {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.command == "export-json":
        sys.stdout.write("\n".join(out.text + ([out.summary] if out.summary else [])) + "\n")
    else:
        sys.stdout.write(out.render(args.format, args.quiet))
    return 0 if out.ok else 1


if __name__ == "__main__":
    sys.exit(main())
