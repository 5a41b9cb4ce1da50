"""Command-line front end: classify points, run iterations, verify
constructions, and render region plots.

    hardylane classify --N 5 --mu1 -2 --mu2 0 --p 2 --q 4 --witness
    hardylane iterate  --N 5 --mu1 -2 --mu2 -2 --p 2.5 --q 3.5 --variant clamped
    hardylane verify   --N 5 --mu1 -2 --mu2 0 --p 2 --q 3 --case C1
    hardylane plot     --N 5 --mu1 -2 --mu2 0 --p-range 0.1..8 --q-range 0.1..8 \
                       --res 400 --out region --format csv,svg

Single-record commands print JSON to stdout or write it to <out>.json;
plot writes <out>.csv / <out>.svg (and <out>.json metadata when requested).
A JSON run configuration can be supplied with --config; explicit flags
override config values.  LEH_THREADS caps grid-sweep parallelism.

Exit codes: 0 success, 1 validation error, 2 internal inconsistency
(classifier/engine disagreement), so automation can tell bugs from bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional

import numpy as np

from .constructions import (CASE_IDS, build_candidate, find_scale,
                            verify_on_grid)
from .exponents import DomainValidationError, HardyParams, Powers
from .iteration import Variant, iterate_clamped, iterate_plain
from .plotting import PlotSpec, emit_csv, emit_svg, region_markers
from .regions import (Verdict, WitnessMismatchError, classify,
                      classify_field, nonexistence_witness)
from .schemas import SCHEMA_VERSION

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INCONSISTENT = 2


def _json_safe(obj):
    """Replace non-finite floats so records stay strict JSON."""
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        if math.isinf(obj):
            return 1e308 if obj > 0 else -1e308
        return obj
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def _parse_range(text: str) -> tuple:
    try:
        lo, hi = text.split("..")
        lo, hi = float(lo), float(hi)
    except ValueError as exc:
        raise DomainValidationError(
            f"range must look like 'a..b', got {text!r}") from exc
    if not (0.0 < lo < hi):
        raise DomainValidationError(f"range must satisfy 0 < a < b, got {text}")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hardylane",
        description="Region classification and supersolution verification "
                    "for coupled Hardy-potential systems.")
    parser.add_argument("--config", help="JSON run configuration; explicit "
                                         "flags override its values")
    sub = parser.add_subparsers(dest="command")

    def common(sp):
        sp.add_argument("--N", type=int, default=None, help="dimension (>= 3)")
        sp.add_argument("--mu1", type=float, default=None)
        sp.add_argument("--mu2", type=float, default=None)
        sp.add_argument("--out", default=None, help="output path prefix")
        sp.add_argument("--format", default=None,
                        help="comma-separated subset of csv,json,svg")

    sp = sub.add_parser("classify", help="classify one (p, q) point")
    common(sp)
    sp.add_argument("--p", type=float, default=None)
    sp.add_argument("--q", type=float, default=None)
    sp.add_argument("--witness", action="store_true",
                    help="attach the nonexistence evidence chain")

    sp = sub.add_parser("iterate", help="run the exponent bootstrap")
    common(sp)
    sp.add_argument("--p", type=float, default=None)
    sp.add_argument("--q", type=float, default=None)
    sp.add_argument("--variant", choices=["plain", "clamped"], default=None)
    sp.add_argument("--cap", type=int, default=None)

    sp = sub.add_parser("verify", help="verify a supersolution construction")
    common(sp)
    sp.add_argument("--p", type=float, default=None)
    sp.add_argument("--q", type=float, default=None)
    sp.add_argument("--case", choices=list(CASE_IDS), default=None)
    sp.add_argument("--grid-points", type=int, default=None)
    sp.add_argument("--r-min", type=float, default=None)

    sp = sub.add_parser("plot", help="sweep a (p, q) window and render it")
    common(sp)
    sp.add_argument("--p-range", default=None, help="a..b")
    sp.add_argument("--q-range", default=None, help="a..b")
    sp.add_argument("--res", type=int, default=None)
    return parser


def _apply_config(args: argparse.Namespace, config: dict) -> None:
    for key, value in config.items():
        attr = key.replace("-", "_")
        if attr == "command":
            continue
        if getattr(args, attr, None) is None and not isinstance(
                getattr(args, attr, None), bool):
            setattr(args, attr, value)


def _require_args(args, names) -> None:
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise DomainValidationError(
            "missing required option(s): " + ", ".join(f"--{n}" for n in missing))


def _params(args) -> HardyParams:
    _require_args(args, ["N", "mu1", "mu2"])
    return HardyParams(args.N, args.mu1, args.mu2)


def _formats(args, default=("json",)) -> set:
    if args.format is None:
        return set(default)
    fmts = {f.strip() for f in args.format.split(",") if f.strip()}
    bad = fmts - {"csv", "json", "svg"}
    if bad:
        raise DomainValidationError(f"unknown format(s): {sorted(bad)}")
    return fmts


def _emit_record(record: dict, args, suffix: str = ".json") -> None:
    text = json.dumps(_json_safe(record), indent=2, sort_keys=True,
                      allow_nan=False)
    if args.out:
        with open(args.out + suffix, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _witness_record(params, pq, region) -> dict:
    w = nonexistence_witness(params, pq, region)
    rec = {"mechanism": w.mechanism, "provenance": w.provenance,
           "description": w.description}
    if w.mechanism == "integrability":
        rec["exponent"] = w.exponent
        rec["weight_mu"] = w.weight_mu
        rec["integrable"] = w.verdict.integrable
        rec["critical_exponent_gap"] = w.verdict.critical_exponent_gap
    else:
        cert = w.trace.outcome
        rec["certificate"] = {"kind": cert.kind.value, "step": cert.step,
                              "value": cert.value, "threshold": cert.threshold}
        rec["steps"] = len(w.trace.steps) - 1
    return rec


def cmd_classify(args) -> int:
    params = _params(args)
    _require_args(args, ["p", "q"])
    pq = Powers(args.p, args.q)
    region = classify(params, pq)
    record = {
        "schema_version": SCHEMA_VERSION,
        "command": "classify",
        "n": params.N, "mu1": params.mu1, "mu2": params.mu2,
        "p": pq.p, "q": pq.q,
        "verdict": region.verdict.value,
        "citation": region.citation,
        "margin": region.margin,
        "regime": region.regime,
        "swapped": region.swapped,
        "mu0_edge": region.mu0_edge,
        "domain": region.domain,
    }
    if args.witness and region.verdict is Verdict.NONEXISTENCE:
        record["witness"] = _witness_record(params, pq, region)
    _emit_record(record, args)
    return EXIT_OK


def cmd_iterate(args) -> int:
    params = _params(args)
    _require_args(args, ["p", "q"])
    pq = Powers(args.p, args.q)
    variant = args.variant or "plain"
    cap = args.cap if args.cap is not None else 10_000
    run = iterate_plain if variant == "plain" else iterate_clamped
    trace = run(params, pq, cap=cap)
    steps = [{"j": s.j, "tau1": s.tau1, "tau2": s.tau2,
              "tau1_clamped": s.tau1_clamped, "tau2_clamped": s.tau2_clamped,
              "tau1_carried": s.tau1_carried} for s in trace.steps]
    record = {
        "schema_version": SCHEMA_VERSION,
        "command": "iterate",
        "n": params.N, "mu1": params.mu1, "mu2": params.mu2,
        "p": pq.p, "q": pq.q,
        "variant": variant, "cap": cap,
        "steps": steps,
        "certificate": {"kind": trace.outcome.kind.value,
                        "step": trace.outcome.step,
                        "value": trace.outcome.value,
                        "threshold": trace.outcome.threshold},
    }
    fmts = _formats(args)
    if "json" in fmts:
        _emit_record(record, args)
    if "csv" in fmts:
        if not args.out:
            raise DomainValidationError("--out is required for csv output")
        lines = ["j,tau1,tau2,s_j"]
        prev = None
        for s in trace.steps:
            s_j = "" if prev is None else f"{s.tau1 - prev:.12g}"
            lines.append(f"{s.j},{s.tau1:.12g},{s.tau2:.12g},{s_j}")
            prev = s.tau1
        with open(args.out + ".csv", "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    params = _params(args)
    _require_args(args, ["p", "q", "case"])
    pq = Powers(args.p, args.q)
    cand = build_candidate(args.case, params, pq)
    grid_points = args.grid_points or 512
    r_min = args.r_min or 1e-6
    from .radial import RadialGrid
    grid = RadialGrid(r_min, cand.r_domain * (1.0 - 1e-3), grid_points)
    found = find_scale(cand, grid=grid)
    if found is None:
        t: Optional[float] = None
        report = verify_on_grid(cand, t=SCALE_FALLBACK, grid=grid)
    else:
        t, report = found
    record = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "n": params.N, "mu1": params.mu1, "mu2": params.mu2,
        "p": pq.p, "q": pq.q,
        "case": args.case,
        "ok": report.ok and t is not None,
        "t": t,
        "r_domain": cand.r_domain,
        "min_slack_u": report.min_slack_u,
        "min_slack_v": report.min_slack_v,
        "oracle_max_dev": report.oracle_max_dev,
        "oracle_exceeded": report.oracle_exceeded,
        "positivity_ok": report.positivity_ok,
        "diagnostic": report.diagnostic,
        "notes": list(cand.notes),
        "grid": {"r_min": grid.r_min, "r_max": grid.r_max,
                 "count": grid.count},
    }
    _emit_record(record, args)
    return EXIT_OK


SCALE_FALLBACK = 2.0 ** -60  # reported when no scale verifies


def cmd_plot(args) -> int:
    params = _params(args)
    _require_args(args, ["p-range", "q-range", "res"])
    p_range = _parse_range(args.p_range)
    q_range = _parse_range(args.q_range)
    res = args.res
    if not (2 <= res <= 4096):
        raise DomainValidationError(f"--res must lie in [2, 4096], got {res}")
    fmts = _formats(args, default=("csv", "svg"))
    if not args.out:
        raise DomainValidationError("--out is required for plot")

    p_values = np.linspace(p_range[0], p_range[1], res)
    q_values = np.linspace(q_range[0], q_range[1], res)
    codes, margins, _flags = classify_field(params, p_values, q_values)
    spec = PlotSpec(params=params, p_range=p_range, q_range=q_range,
                    resolution=res,
                    title=f"N={params.N} mu1={params.mu1:g} mu2={params.mu2:g}")
    files = {"csv": None, "svg": None}
    if "csv" in fmts:
        files["csv"] = args.out + ".csv"
        emit_csv(codes, margins, spec, files["csv"])
    if "svg" in fmts:
        files["svg"] = args.out + ".svg"
        emit_svg(codes, spec, files["svg"])
    if "json" in fmts:
        record = {
            "schema_version": SCHEMA_VERSION,
            "command": "plot",
            "n": params.N, "mu1": params.mu1, "mu2": params.mu2,
            "p_range": list(p_range), "q_range": list(q_range),
            "resolution": res,
            "markers": {k: list(v) for k, v in
                        sorted(region_markers(params, p_range,
                                              q_range).items())},
            "files": files,
        }
        _emit_record(record, args)
    return EXIT_OK


_COMMANDS = ("classify", "iterate", "verify", "plot")


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        config = None
        if "--config" in argv:
            i = argv.index("--config")
            if i + 1 >= len(argv):
                raise DomainValidationError("--config needs a file path")
            with open(argv[i + 1], encoding="utf-8") as fh:
                config = json.load(fh)
            argv = argv[:i] + argv[i + 2:]
            if not argv or argv[0] not in _COMMANDS:
                cmd = config.get("command")
                if cmd not in _COMMANDS:
                    raise DomainValidationError(
                        f"config must name a command from {_COMMANDS}")
                argv = [cmd] + argv
        args, unknown = parser.parse_known_args(argv)
        if unknown:
            print(f"error: unrecognized arguments: {' '.join(unknown)}",
                  file=sys.stderr)
            return EXIT_VALIDATION
        if config is not None:
            _apply_config(args, config)
        if args.command is None:
            parser.print_usage(sys.stderr)
            return EXIT_VALIDATION
        handler = {"classify": cmd_classify, "iterate": cmd_iterate,
                   "verify": cmd_verify, "plot": cmd_plot}[args.command]
        return handler(args)
    except WitnessMismatchError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (DomainValidationError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
