"""Command-line interface.

Subcommands: validate, assess, whatif, heatmap, serve. Exit codes: 0 on
success (warnings allowed), 1 when the register or request fails domain
validation, 2 for environment problems (unreadable files, malformed input,
bad flag syntax, port already bound).
"""

from __future__ import annotations

import argparse
import os
import socket
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .appetite import (
    DEFAULT_ANCHORS,
    AppetiteAnchor,
    BandFractions,
    appetite_midpoint,
    build_heatmap,
)
from .controls import Control, ControlPlan, apply_plan, defense_in_depth_check
from .errors import DomainError, ParseError, RiskregError
from .model import RiskRegister
from .register_io import (
    FORMAT_VERSION,
    ReportFormat,
    ReportOptions,
    load_golden_register,
    load_seed_catalog,
    parse_catalog,
    parse_layout_json,
    parse_register_csv,
    render_heatmap_ascii,
    render_heatmap_svg,
    render_report,
)
from .scoring import Finding, ValidationReport, validate_register

ENV_CATALOG = "RISKREG_CATALOG"
ENV_STATIC = "RISKREG_STATIC"
DEFAULT_STATIC_DIR = "frontend/dist"


def _parse_anchor_spec(spec: str) -> tuple[AppetiteAnchor, AppetiteAnchor]:
    parts = spec.split(":")
    if len(parts) != 2:
        raise ParseError(f"appetite anchors must look like 'A,T,V:A,T,V', got {spec!r}")
    anchors = []
    for part in parts:
        fields = part.split(",")
        if len(fields) != 3:
            raise ParseError(f"each anchor needs three comma-separated integers, got {part!r}")
        try:
            numbers = [int(field) for field in fields]
        except ValueError:
            raise ParseError(f"anchor fields must be integers, got {part!r}") from None
        anchors.append(AppetiteAnchor(*numbers))
    return anchors[0], anchors[1]


def _parse_fraction_spec(spec: str) -> BandFractions:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ParseError(f"band fractions must look like 'R:Y:G', got {spec!r}")
    try:
        values = [Fraction(part.strip()) for part in parts]
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"band fractions must be rational numbers, got {spec!r}") from None
    return BandFractions(*values)


def _parse_apply_spec(spec: str) -> tuple[int, list[str]]:
    head, sep, tail = spec.partition(":")
    control_ids = [token.strip() for token in tail.split(",") if token.strip()]
    if not sep or not control_ids:
        raise ParseError(f"control application must look like 'ENTRY:CTRL[,CTRL...]', got {spec!r}")
    try:
        entry_id = int(head)
    except ValueError:
        raise ParseError(f"entry id must be an integer, got {head!r}") from None
    return entry_id, control_ids


def _resolve_appetite(
    args: argparse.Namespace,
) -> tuple[int, tuple[AppetiteAnchor, AppetiteAnchor] | None]:
    """The appetite to use, plus the anchors it came from (None when explicit)."""
    if args.appetite is not None:
        if args.appetite < 1:
            raise DomainError(f"appetite must be a positive integer, got {args.appetite}")
        return args.appetite, None
    if args.appetite_anchors is not None:
        low, high = _parse_anchor_spec(args.appetite_anchors)
    else:
        low, high = DEFAULT_ANCHORS
    return appetite_midpoint(low, high), (low, high)


def _load_register(path: str, appetite: int) -> tuple[RiskRegister, ValidationReport]:
    return parse_register_csv(Path(path).read_bytes(), appetite)


def _load_catalog(args: argparse.Namespace) -> list[Control]:
    path = args.catalog or os.environ.get(ENV_CATALOG)
    if path:
        return parse_catalog(Path(path).read_bytes())
    return load_seed_catalog()


def _format_finding(kind: str, finding: Finding) -> str:
    where = f"entry {finding.entry_id}" if finding.entry_id is not None else "register"
    return f"{kind} [{finding.code}] {where}: {finding.message}"


def _reject_bad_register(report: ValidationReport) -> bool:
    """Print findings to stderr; True when errors make the register unusable."""
    for finding in report.errors:
        print(_format_finding("ERROR", finding), file=sys.stderr)
    for finding in report.warnings:
        print(_format_finding("WARNING", finding), file=sys.stderr)
    return not report.ok


def _write_output(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_bytes(text.encode("utf-8"))


def cmd_validate(args: argparse.Namespace) -> int:
    appetite, _ = _resolve_appetite(args)
    register, report = _load_register(args.register, appetite)

    layout_path = args.layout
    if layout_path is None:
        sidecar = Path(args.register).with_suffix(".layout.json")
        if sidecar.exists():
            layout_path = str(sidecar)
    layout = parse_layout_json(Path(layout_path).read_bytes()) if layout_path else None

    report = report.merged(validate_register(register, presented_layout=layout))
    for finding in report.errors:
        print(_format_finding("ERROR", finding))
    for finding in report.warnings:
        print(_format_finding("WARNING", finding))
    print(
        f"{len(register.entries)} entries; "
        f"{len(report.errors)} error(s), {len(report.warnings)} warning(s)"
    )
    return 0 if report.ok else 1


def cmd_assess(args: argparse.Namespace) -> int:
    appetite, anchors = _resolve_appetite(args)
    fractions = _parse_fraction_spec(args.band_fractions)
    register, report = _load_register(args.register, appetite)
    if _reject_bad_register(report):
        return 1
    options = ReportOptions(
        format=ReportFormat(args.format), include_heatmap=args.heatmap
    )
    _write_output(args.output, render_report(register, options, fractions, anchors=anchors))
    return 0


def cmd_whatif(args: argparse.Namespace) -> int:
    appetite, _ = _resolve_appetite(args)
    fractions = _parse_fraction_spec(args.band_fractions)
    register, report = _load_register(args.register, appetite)
    if _reject_bad_register(report):
        return 1
    catalog = _load_catalog(args)

    plan_map: dict[int, list[str]] = {}
    for spec in args.apply:
        entry_id, control_ids = _parse_apply_spec(spec)
        plan_map.setdefault(entry_id, []).extend(control_ids)
    snapshot = apply_plan(register, catalog, ControlPlan.from_mapping(plan_map), fractions)

    by_id = {control.id: control for control in catalog}
    lines = [f"# riskreg-format: {FORMAT_VERSION}", f"appetite = {register.appetite}"]
    for delta in snapshot.deltas:
        if delta.entry_id not in plan_map:
            continue
        lines.append(
            f"entry {delta.entry_id}: risk {delta.risk_before} -> {delta.risk_after}; "
            f"band {delta.band_before.value} -> {delta.band_after.value}"
        )
        controls = [by_id[cid] for cid in sorted(set(plan_map[delta.entry_id]))]
        lines.append(
            "  controls: " + ", ".join(f"{c.id} ({c.category.value})" for c in controls)
        )
        check = defense_in_depth_check(register.entry(delta.entry_id), controls, register.appetite)
        if check.satisfied:
            lines.append("  defense in depth: satisfied")
        else:
            missing = ", ".join(category.value for category in check.missing_categories)
            lines.append(f"  defense in depth: not satisfied; missing categories: {missing}")
    lines.append(f"total risk: {snapshot.total_before} -> {snapshot.total_after}")
    _write_output(args.output, "\n".join(lines) + "\n")
    return 0


def cmd_heatmap(args: argparse.Namespace) -> int:
    appetite, _ = _resolve_appetite(args)
    fractions = _parse_fraction_spec(args.band_fractions)
    register, report = _load_register(args.register, appetite)
    if _reject_bad_register(report):
        return 1
    heatmap = build_heatmap(register, register.appetite, fractions)
    if args.format == "svg":
        text = render_heatmap_svg(heatmap)
    else:
        text = render_heatmap_ascii(heatmap) + "\n"
    _write_output(args.output, text)
    return 0


def _resolve_static_dir(args: argparse.Namespace) -> str | None:
    explicit = args.static_dir or os.environ.get(ENV_STATIC)
    if explicit:
        if not Path(explicit).is_dir():
            raise OSError(f"static directory not found: {explicit}")
        return explicit
    if Path(DEFAULT_STATIC_DIR).is_dir():
        return DEFAULT_STATIC_DIR
    return None


def cmd_serve(args: argparse.Namespace) -> int:
    appetite, _ = _resolve_appetite(args)
    if args.register:
        register, report = _load_register(args.register, appetite)
        if _reject_bad_register(report):
            return 1
        source_path = args.register
    else:
        register = RiskRegister(load_golden_register().entries, appetite)
        source_path = None
    catalog = _load_catalog(args)
    static_dir = _resolve_static_dir(args)

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((args.host, args.port))
    except OSError as exc:
        print(f"error: cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 2
    finally:
        probe.close()

    from .service import RegisterStore, create_app
    import uvicorn

    store = RegisterStore(register=register, catalog=catalog, source_path=source_path)
    app = create_app(store, static_dir=static_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _add_appetite_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--appetite", type=int, metavar="N", help="risk appetite threshold")
    group.add_argument(
        "--appetite-anchors",
        metavar="A,T,V:A,T,V",
        help="derive the appetite as the rounded midpoint of two scoring triples",
    )
    parser.add_argument(
        "--band-fractions",
        metavar="R:Y:G",
        default="1:2/3:1/3",
        help="severity band cutoffs as fractions of the appetite (default 1:2/3:1/3)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riskreg",
        description="Qualitative information-security risk register: score, band, and plan controls.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a register CSV for consistency")
    p.add_argument("register", metavar="REGISTER.csv")
    p.add_argument(
        "--layout",
        metavar="LAYOUT.json",
        help="published above/below placement to cross-check "
        "(defaults to REGISTER.layout.json when present)",
    )
    _add_appetite_options(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("assess", help="render the partitioned register report")
    p.add_argument("register", metavar="REGISTER.csv")
    p.add_argument("--format", choices=[f.value for f in ReportFormat], default="markdown")
    p.add_argument("--heatmap", action="store_true", help="append an ASCII heat map")
    p.add_argument("-o", "--output", metavar="FILE", help="write to FILE instead of stdout")
    _add_appetite_options(p)
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("whatif", help="show residual risk under a control plan")
    p.add_argument("register", metavar="REGISTER.csv")
    p.add_argument(
        "--apply",
        action="append",
        default=[],
        metavar="ENTRY:CTRL[,CTRL...]",
        help="apply catalog controls to an entry (repeatable); none means an identity snapshot",
    )
    p.add_argument("--catalog", metavar="CATALOG.ini", help="control catalog (overrides $RISKREG_CATALOG)")
    p.add_argument("-o", "--output", metavar="FILE", help="write to FILE instead of stdout")
    _add_appetite_options(p)
    p.set_defaults(func=cmd_whatif)

    p = sub.add_parser("heatmap", help="render the 5x10 heat map")
    p.add_argument("register", metavar="REGISTER.csv")
    p.add_argument("--format", choices=["ascii", "svg"], default="ascii")
    p.add_argument("-o", "--output", metavar="FILE", help="write to FILE instead of stdout")
    _add_appetite_options(p)
    p.set_defaults(func=cmd_heatmap)

    p = sub.add_parser("serve", help="serve the register over HTTP")
    p.add_argument("register", nargs="?", metavar="REGISTER.csv", help="register to load (defaults to the packaged dataset)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--catalog", metavar="CATALOG.ini", help="control catalog (overrides $RISKREG_CATALOG)")
    p.add_argument(
        "--static-dir",
        metavar="DIR",
        help="directory of web UI assets to serve at / "
        f"(overrides $RISKREG_STATIC, default {DEFAULT_STATIC_DIR!r} when present)",
    )
    _add_appetite_options(p)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RiskregError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
