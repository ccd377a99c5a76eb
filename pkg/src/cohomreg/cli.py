"""Command-line front end.

Subcommands: `group rank`, `group abelians`, `screen`, `resolve`,
`ring hilbert`, `ring regularity`, `ring vsqr`, `ring table-check`.
Reports go to stdout as human-readable text or deterministic JSON
(-inf is rendered as the string "-inf").  Exit codes: 0 success, 1 domain
error (named diagnostic on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import __version__
from .errors import MalformedFile, ToolError
from .groups import defect_feasible, defect_profile, enumerate_elem_abelians, load_group
from .regularity import (
    NEG_INF,
    ParameterSystem,
    a_invariants,
    depth_delta_from_a,
    regularity_from_a,
    vsqr_check,
)
from .resolution import betti_numbers
from .rings import hilbert_function, load_presentation, parse_polynomial, poly_to_str


@dataclass
class RunReport:
    kind: str  # group | resolution | ring
    payload: dict
    inputs: dict
    tool_version: str = __version__
    text_lines: list = field(default_factory=list)
    exit_code: int = 0


def _jsonable(value):
    if isinstance(value, float) and value == NEG_INF:
        return "-inf"
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


def emit_report(report: RunReport, format: str = "text") -> str:
    """Deterministic serialization of a run report."""
    if format == "json":
        doc = {
            "kind": report.kind,
            "tool_version": report.tool_version,
            "inputs": _jsonable(report.inputs),
            "payload": _jsonable(report.payload),
        }
        return json.dumps(doc, sort_keys=True, indent=2)
    return "\n".join(report.text_lines)


def _fmt_inv(value) -> str:
    return "-inf" if value == NEG_INF else str(int(value))


def _parameter_payload(ring, system: ParameterSystem) -> list:
    return [
        {"element": poly_to_str(ring, el), "degree": deg, "power": mult}
        for el, deg, mult in zip(system.elements, system.degrees,
                                 system.power_multipliers)
    ]


def _vsqr_payload(status) -> dict:
    return {
        "status": status.status,
        "bounds": list(status.bounds),
        "witnesses": list(status.witnesses),
        "certified_through": status.certified_through,
    }


def _parse_params(ring, spec_text: str) -> ParameterSystem:
    polys = [parse_polynomial(ring, chunk) for chunk in spec_text.split(",") if chunk]
    return ParameterSystem.from_polynomials(ring, polys)


def _ring_and_params(args) -> tuple:
    ring = load_presentation(args.ringfile)
    if args.params:
        system = _parse_params(ring, args.params)
    else:
        if not ring.params:
            raise MalformedFile(
                f"{args.ringfile} declares no parameters; pass --params")
        system = ParameterSystem.from_polynomials(ring, ring.params)
    return ring, system


def cmd_group_rank(args) -> RunReport:
    g = load_group(args.groupfile)
    profile = defect_profile(g, args.prime)
    payload = {
        "name": profile.name,
        "prime": profile.prime,
        "order": g.order,
        "order_exponent": profile.exponent,
        "p_rank": profile.p_rank,
        "center_rank": profile.center_rank,
        "gtd": profile.gtd,
    }
    text = [
        f"group {profile.name}: order {g.order} = {profile.prime}^{profile.exponent}",
        f"  p-rank {profile.p_rank}, central rank {profile.center_rank}, "
        f"defect {profile.gtd}",
    ]
    return RunReport(kind="group", payload=payload,
                     inputs={"groupfile": str(args.groupfile), "prime": args.prime},
                     text_lines=text)


def cmd_group_abelians(args) -> RunReport:
    g = load_group(args.groupfile)
    subgroups = enumerate_elem_abelians(g, args.prime)
    payload = {
        "name": g.name,
        "prime": args.prime,
        "order": g.order,
        "count": len(subgroups),
        "subgroups": [
            {"rank": s.rank, "order": s.order, "elements": list(s.elements)}
            for s in subgroups
        ],
    }
    text = [f"group {g.name}: {len(subgroups)} elementary abelian subgroups "
            f"above the central core"]
    for s in subgroups:
        text.append(f"  rank {s.rank}: elements {list(s.elements)}")
    return RunReport(kind="group", payload=payload,
                     inputs={"groupfile": str(args.groupfile), "prime": args.prime},
                     text_lines=text)


def cmd_screen(args) -> RunReport:
    feasible = defect_feasible(args.prime, args.order_exp, args.gtd)
    payload = {
        "prime": args.prime,
        "order_exponent": args.order_exp,
        "target_gtd": args.gtd,
        "feasible": feasible,
    }
    verdict = "feasible" if feasible else "infeasible (divisibility screen)"
    text = [f"defect >= {args.gtd} at order {args.prime}^{args.order_exp}: {verdict}"]
    return RunReport(kind="group", payload=payload,
                     inputs={"prime": args.prime, "order_exp": args.order_exp,
                             "gtd": args.gtd},
                     text_lines=text)


def cmd_resolve(args) -> RunReport:
    g = load_group(args.groupfile)
    betti = betti_numbers(g, args.prime, args.max_degree)
    payload = {
        "name": g.name,
        "prime": args.prime,
        "max_degree": args.max_degree,
        "betti": betti,
    }
    text = [f"group {g.name}: minimal resolution ranks through degree "
            f"{args.max_degree}",
            "  " + " ".join(str(b) for b in betti)]
    return RunReport(kind="resolution", payload=payload,
                     inputs={"groupfile": str(args.groupfile), "prime": args.prime,
                             "max_degree": args.max_degree},
                     text_lines=text)


def cmd_ring_hilbert(args) -> RunReport:
    ring = load_presentation(args.ringfile)
    dims = hilbert_function(ring, args.max_degree)
    payload = {
        "name": ring.name,
        "prime": ring.prime,
        "max_degree": args.max_degree,
        "hilbert": dims,
    }
    text = [f"ring {ring.name}: Hilbert function through degree {args.max_degree}",
            "  " + " ".join(str(d) for d in dims)]
    return RunReport(kind="ring", payload=payload,
                     inputs={"ringfile": str(args.ringfile),
                             "max_degree": args.max_degree},
                     text_lines=text)


def cmd_ring_regularity(args) -> RunReport:
    ring, system = _ring_and_params(args)
    report = a_invariants(ring, system, cap=args.max_degree,
                          power_cap=args.power_cap)
    payload = {
        "name": ring.name,
        "prime": ring.prime,
        "krull_dimension": report.krull_dimension,
        "depth": report.depth,
        "delta": report.delta,
        "a_invariants": list(report.a),
        "regularity": report.regularity,
        "vsqr": _vsqr_payload(report.vsqr),
        "parameters": _parameter_payload(ring, report.parameters),
        "computed_through_degree": report.computed_through_degree,
    }
    a_text = ", ".join(_fmt_inv(v) for v in report.a)
    text = [
        f"ring {ring.name}: K {report.krull_dimension}, depth {report.depth}, "
        f"delta {report.delta}",
        f"  a-invariants ({a_text})",
        f"  regularity {report.regularity}, vsqr {report.vsqr.status}, "
        f"computed through degree {report.computed_through_degree}",
    ]
    raised = [i + 1 for i, m in enumerate(report.parameters.power_multipliers)
              if m > 1]
    if raised:
        text.append(f"  raised parameters at positions {raised}")
    return RunReport(kind="ring", payload=payload,
                     inputs={"ringfile": str(args.ringfile),
                             "max_degree": args.max_degree,
                             "params": args.params, "power_cap": args.power_cap},
                     text_lines=text)


def cmd_ring_vsqr(args) -> RunReport:
    ring, system = _ring_and_params(args)
    status = vsqr_check(ring, system, cap=args.max_degree)
    payload = {
        "name": ring.name,
        "prime": ring.prime,
        "status": status.status,
        "bounds": list(status.bounds),
        "witnesses": list(status.witnesses),
        "certified_through": status.certified_through,
        "parameters": _parameter_payload(ring, system),
    }
    text = [
        f"ring {ring.name}: very strong quasi-regularity {status.status}",
        "  bounds    " + " ".join(_fmt_inv(b) for b in status.bounds),
        "  witnesses " + " ".join(_fmt_inv(w) for w in status.witnesses),
        f"  certified through degree {status.certified_through}",
    ]
    return RunReport(kind="ring", payload=payload,
                     inputs={"ringfile": str(args.ringfile),
                             "max_degree": args.max_degree, "params": args.params},
                     text_lines=text)


def _default_table_path() -> Path:
    return Path(str(resources.files("cohomreg").joinpath("data/table2_order128.txt")))


def _parse_table_rows(text: str):
    rows = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) < 5:
            raise MalformedFile(f"line {line_no}: expected gp K d r delta a...")
        try:
            gp = int(tokens[0])
            dims = [int(t) for t in tokens[1:5]]
            a_raw = [NEG_INF if t == "-inf" else int(t) for t in tokens[5:]]
        except ValueError:
            raise MalformedFile(f"line {line_no}: bad token in table row")
        rows.append({"gp": gp, "K": dims[0], "d": dims[1], "r": dims[2],
                     "delta": dims[3], "a_tail": a_raw})
    return rows


def cmd_table_check(args) -> RunReport:
    path = Path(args.tablefile) if args.tablefile else _default_table_path()
    rows = _parse_table_rows(path.read_text(encoding="utf-8"))
    if any(not row["a_tail"] for row in rows):
        print("error[Usage]: table row with empty a-invariant list", file=sys.stderr)
        raise SystemExit(2)
    checked = []
    failures = []
    for row in rows:
        K = row["K"]
        tail = row["a_tail"]
        a_full = [NEG_INF] * (K + 1 - len(tail)) + list(tail)
        depth, delta = depth_delta_from_a(a_full, K)
        reg = regularity_from_a(a_full)
        problems = []
        if row["r"] != K - 3:
            problems.append(f"r {row['r']} != K-3 {K - 3}")
        if row["delta"] != K - row["d"]:
            problems.append(f"delta {row['delta']} != K-d {K - row['d']}")
        if depth != row["d"]:
            problems.append(f"depth from a-invariants {depth} != d {row['d']}")
        if delta != row["delta"]:
            problems.append(f"delta from a-invariants {delta} != {row['delta']}")
        if reg != 0:
            problems.append(f"regularity {reg} != 0")
        finite_tail = tail[0] != NEG_INF if len(tail) == 4 else None
        if finite_tail is not None and (row["delta"] == 3) != finite_tail:
            problems.append("delta-3 rows must be exactly those with finite a^{K-3}")
        checked.append({
            "gp": row["gp"], "K": K, "d": row["d"], "r": row["r"],
            "delta": row["delta"], "a_invariants": a_full,
            "depth": depth, "delta_from_a": delta, "regularity": reg,
            "consistent": not problems, "problems": problems,
        })
        if problems:
            failures.append(row["gp"])
    payload = {
        "source": str(path),
        "count": len(checked),
        "all_consistent": not failures,
        "failures": failures,
        "rows": checked,
    }
    text = [f"table check over {len(checked)} rows from {path.name}",
            "  gp     K  d  r  delta  reg  a-invariants"]
    for row in checked:
        mark = "ok " if row["consistent"] else "FAIL"
        a_text = ",".join(_fmt_inv(v) for v in row["a_invariants"])
        text.append(f"  {row['gp']:<6} {row['K']}  {row['d']}  {row['r']}  "
                    f"{row['delta']}      {row['regularity']}    ({a_text}) {mark}")
    text.append("all rows consistent" if not failures
                else f"inconsistent rows: {failures}")
    return RunReport(kind="ring", payload=payload,
                     inputs={"tablefile": str(path)},
                     text_lines=text,
                     exit_code=0 if not failures else 1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cohomreg",
        description="Desk-scale p-group and cohomology-ring invariants",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    group = sub.add_parser("group", help="group-theoretic invariants")
    group_sub = group.add_subparsers(dest="subcommand", required=True)
    rank = group_sub.add_parser("rank", help="p-rank, central rank, defect")
    rank.add_argument("groupfile")
    rank.add_argument("--prime", type=int, required=True)
    add_format(rank)
    rank.set_defaults(handler=cmd_group_rank)
    abelians = group_sub.add_parser("abelians",
                                    help="elementary abelian subgroups above the core")
    abelians.add_argument("groupfile")
    abelians.add_argument("--prime", type=int, required=True)
    add_format(abelians)
    abelians.set_defaults(handler=cmd_group_abelians)

    screen = sub.add_parser("screen", help="order screen for high defect targets")
    screen.add_argument("--prime", type=int, required=True)
    screen.add_argument("--order-exp", type=int, required=True)
    screen.add_argument("--gtd", type=int, required=True)
    add_format(screen)
    screen.set_defaults(handler=cmd_screen)

    resolve = sub.add_parser("resolve", help="minimal resolution ranks")
    resolve.add_argument("groupfile")
    resolve.add_argument("--prime", type=int, required=True)
    resolve.add_argument("--max-degree", type=int, default=10)
    add_format(resolve)
    resolve.set_defaults(handler=cmd_resolve)

    ring = sub.add_parser("ring", help="graded-algebra invariants")
    ring_sub = ring.add_subparsers(dest="subcommand", required=True)
    hilbert = ring_sub.add_parser("hilbert", help="Hilbert function")
    hilbert.add_argument("ringfile")
    hilbert.add_argument("--max-degree", type=int, default=10)
    add_format(hilbert)
    hilbert.set_defaults(handler=cmd_ring_hilbert)

    regularity = ring_sub.add_parser("regularity",
                                     help="a-invariants, depth, regularity")
    regularity.add_argument("ringfile")
    regularity.add_argument("--max-degree", type=int, default=None)
    regularity.add_argument("--params", default=None,
                            help="comma-separated parameter polynomials "
                                 "(overrides the file's param lines)")
    regularity.add_argument("--power-cap", type=int, default=4)
    add_format(regularity)
    regularity.set_defaults(handler=cmd_ring_regularity)

    vsqr = ring_sub.add_parser("vsqr", help="very strong quasi-regularity bounds")
    vsqr.add_argument("ringfile")
    vsqr.add_argument("--max-degree", type=int, default=None)
    vsqr.add_argument("--params", default=None)
    add_format(vsqr)
    vsqr.set_defaults(handler=cmd_ring_vsqr)

    table = ring_sub.add_parser("table-check",
                                help="arithmetic cross-check of bundled table rows")
    table.add_argument("tablefile", nargs="?", default=None)
    add_format(table)
    table.set_defaults(handler=cmd_table_check)

    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = args.handler(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ToolError as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error[FileNotFound]: {exc}", file=sys.stderr)
        return 1
    print(emit_report(report, args.format))
    return report.exit_code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
