"""Command-line front end.

    accex {flat|callgraph|ids|whatif|sweep|serve}
          [--gmon PATH --symbols PATH | --profile PATH]
          [--ptr-size {4,8}] [--quantum SECS] [--json] [--out PATH]

Exit codes: 0 success, 2 usage or input error, 1 internal failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import reports, server, whatif
from .errors import AccexError
from .ingest import read_gmon, read_portable_profile, read_symbol_map
from .model import DEFAULT_QUANTUM, RawProfile, SymbolTable

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2


class CliError(Exception):
    """Usage or input problem; maps to exit code 2."""


def _input_options(parser: argparse.ArgumentParser) -> None:
    grp = parser.add_argument_group("profile input")
    grp.add_argument("--gmon", metavar="PATH", help="binary gmon.out profile")
    grp.add_argument("--symbols", metavar="PATH", help="symbol map for --gmon")
    grp.add_argument("--profile", metavar="PATH", help="portable JSON profile")
    grp.add_argument(
        "--ptr-size", type=int, choices=(4, 8), default=8,
        help="pointer width in the binary profile (default 8)",
    )
    grp.add_argument(
        "--quantum", type=float, default=None,
        help="seconds per sample when the profile does not carry a rate "
        "(overrides ACCEX_QUANTUM; default 0.01)",
    )


def _output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", action="store_true", help="emit JSON instead of text")
    parser.add_argument("--out", metavar="PATH", help="write output here instead of stdout")


def _default_quantum(args) -> Fraction:
    if args.quantum is not None:
        q = Fraction(str(args.quantum))
    elif os.environ.get("ACCEX_QUANTUM"):
        try:
            q = Fraction(os.environ["ACCEX_QUANTUM"])
        except (ValueError, ZeroDivisionError):
            raise CliError(f"bad ACCEX_QUANTUM value {os.environ['ACCEX_QUANTUM']!r}")
    else:
        return DEFAULT_QUANTUM
    if q <= 0:
        raise CliError("quantum must be positive")
    return q


def _read_file(path: str, binary: bool = False):
    p = Path(path)
    try:
        return p.read_bytes() if binary else p.read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}")


def load_inputs(args) -> tuple[RawProfile, SymbolTable]:
    quantum = _default_quantum(args)
    if args.profile:
        if args.gmon or args.symbols:
            raise CliError("give either --profile or --gmon/--symbols, not both")
        profile, table = read_portable_profile(
            _read_file(args.profile), default_quantum=quantum
        )
        return profile, table
    if args.gmon and args.symbols:
        profile = read_gmon(
            _read_file(args.gmon, binary=True),
            ptr_size=args.ptr_size,
            default_quantum=quantum,
        )
        table = read_symbol_map(_read_file(args.symbols))
        return profile, table
    raise CliError("need --profile PATH, or both --gmon PATH and --symbols PATH")


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, payload: dict) -> None:
    _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def cmd_flat(args) -> int:
    ap = whatif.attribute(*load_inputs(args))
    if args.json:
        _emit_json(args, reports.profile_payload(ap))
    else:
        rows = reports.flat_profile(ap.graph, include_zero=args.all)
        _emit(args, reports.render_flat(rows, ap.quantum))
    return EXIT_OK


def cmd_callgraph(args) -> int:
    ap = whatif.attribute(*load_inputs(args))
    if args.json:
        _emit_json(args, reports.profile_payload(ap))
    else:
        entries = reports.callgraph_profile(ap.graph, include_zero=args.all)
        _emit(args, reports.render_callgraph(entries, ap.quantum))
    return EXIT_OK


def cmd_ids(args) -> int:
    ap = whatif.attribute(*load_inputs(args))
    if args.json:
        _emit_json(args, reports.ids_payload(ap))
    else:
        _emit(args, reports.render_ids(ap.records))
    return EXIT_OK


def _render_whatif_text(result: whatif.WhatIfResult) -> str:
    lines = [
        "What-if result:",
        "",
        f"  base total:    {float(result.base_total):.2f} s",
        f"  edited total:  {float(result.edited_total):.2f} s",
        f"  delta:         {float(result.delta_seconds):.2f} s"
        f" ({float(result.delta_percent):.1f}%)",
    ]
    if result.total_bin is not None:
        total_bin = float(result.total_bin)
        shown = f"{int(total_bin)}" if total_bin.is_integer() else f"{total_bin:.2f}"
        lines.append(f"  total_bin:     {shown}")
    lines.append("")
    lines.append(f"  {'function':<24} {'before%':>8} {'after%':>8}")
    names = sorted(set(result.shares_before) | set(result.shares_after))
    for name in names:
        before = float(result.shares_before.get(name, 0))
        after = float(result.shares_after.get(name, 0))
        lines.append(f"  {name:<24} {before:8.1f} {after:8.1f}")
    return "\n".join(lines) + "\n"


def cmd_whatif(args) -> int:
    ap = whatif.attribute(*load_inputs(args))
    scenario = whatif.load_scenario(_read_file(args.scenario))
    result = whatif.run_scenario(ap, scenario)
    if args.json:
        _emit_json(args, result.to_json_dict())
    else:
        _emit(args, _render_whatif_text(result))
    return EXIT_OK


def _parse_grid(text: str) -> list[Fraction]:
    try:
        return [Fraction(part.strip()) if "/" in part else Fraction(str(float(part)))
                for part in text.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError):
        raise CliError(f"bad --grid value {text!r}; expected comma-separated numbers")


def _render_sweep_csv(curve: whatif.SweepCurve) -> str:
    names = sorted({name for p in curve.points for name in p.shares})
    header = ["r", "total_reduction_pct"] + [f"share_pct_{n}" for n in names]
    rows = [",".join(header)]
    for p in curve.points:
        cells = [f"{float(p.r):g}", f"{float(p.total_reduction_percent):.4f}"]
        cells += [f"{float(p.shares.get(n, 0)):.4f}" for n in names]
        rows.append(",".join(cells))
    if curve.threshold is None:
        rows.append("# threshold r*: not reached in swept range")
    else:
        rows.append(f"# threshold r*: {float(curve.threshold):g}")
    return "\n".join(rows) + "\n"


def cmd_sweep(args) -> int:
    ap = whatif.attribute(*load_inputs(args))
    grid = _parse_grid(args.grid) if args.grid else whatif.DEFAULT_SWEEP_GRID
    curve = whatif.sweep(ap, args.target, grid)
    if args.json:
        _emit_json(args, curve.to_json_dict())
    else:
        _emit(args, _render_sweep_csv(curve))
    return EXIT_OK


def cmd_serve(args) -> int:
    ap = whatif.attribute(*load_inputs(args))
    try:
        httpd = server.make_server(ap, host=args.host, port=args.port,
                                   ui_dir=args.ui_dir)
    except OSError as exc:
        raise CliError(f"cannot bind {args.host}:{args.port}: {exc.strerror or exc}")
    print(f"serving profile API on http://{args.host}:{httpd.server_address[1]}")
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="accex",
        description="Analyze call-graph profiles and model hypothetical speedups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_flat = sub.add_parser("flat", help="flat profile report")
    p_cg = sub.add_parser("callgraph", help="call-graph profile report")
    p_ids = sub.add_parser("ids", help="stable attribution-record table")
    for p in (p_flat, p_cg):
        p.add_argument("--all", action="store_true",
                       help="include functions with no time and no calls")
    p_whatif = sub.add_parser("whatif", help="apply a scenario and report the delta")
    p_whatif.add_argument("--scenario", required=True, metavar="PATH",
                          help="scenario JSON document")
    p_sweep = sub.add_parser("sweep", help="sensitivity sweep over one function")
    p_sweep.add_argument("--target", required=True, help="function to scale down")
    p_sweep.add_argument("--grid", default=None,
                         help="comma-separated reduction fractions in [0,1]")
    p_serve = sub.add_parser("serve", help="serve the HTTP API")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--ui-dir", default=None, metavar="DIR",
                         help="also serve this directory of static files at /")

    handlers = {
        "flat": cmd_flat,
        "callgraph": cmd_callgraph,
        "ids": cmd_ids,
        "whatif": cmd_whatif,
        "sweep": cmd_sweep,
        "serve": cmd_serve,
    }
    for name, p in sub.choices.items():
        _input_options(p)
        if name != "serve":
            _output_options(p)
        p.set_defaults(handler=handlers[name])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (CliError, AccexError) as exc:
        print(f"accex: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BrokenPipeError:
        return EXIT_OK
    except Exception as exc:  # internal invariant failure
        print(f"accex: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
