"""Command-line interface: scans, optimizers, and the reproduction harness.

Every subcommand renders either JSON (nested payload) or CSV (flat rows); the
--format flag switches between them, --out redirects to a file.  Angles are
radians; probabilities print with 12 significant digits in CSV.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .cglmp import optimize_cglmp, optimize_cglmp_state_and_settings
from .chsh import analytic_chsh_maximum, chsh_optimal_settings, optimize_chsh
from .detection import critical_efficiency_at, optimize_critical_efficiency
from .hardy import hardy_certificate, hardy_scan, lhv_contradiction, optimize_hardy_probability
from .polytope import enumerate_vertices, optimize_kl
from .prbox import chsh_of_behavior, empirical_behavior, pr_box_behavior, sample_pr_box
from .reproduce import ReproduceConfig, run_claims
from .states import entanglement_entropy, make_gamma_state, make_hardy_state, make_theta_state

_FLOAT_FMT = "%.12g"


def _fmt_cell(v) -> str:
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, float):
        return _FLOAT_FMT % v
    return str(v)


def _render_csv(fieldnames: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fieldnames)
    for row in rows:
        writer.writerow([_fmt_cell(row[k]) for k in fieldnames])
    return buf.getvalue()


def _emit(args, payload: dict, fieldnames: list[str], rows: list[dict], default_format: str) -> None:
    fmt = args.format if args.format else default_format
    if fmt == "csv":
        text = _render_csv(fieldnames, rows)
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _phases_dict(params: dict) -> dict:
    return {k: params[k] for k in ("alpha1", "alpha2", "beta1", "beta2") if k in params}


# -- subcommand handlers ------------------------------------------------------


def _cmd_chsh_scan(args) -> int:
    grid = np.linspace(args.theta_min, args.theta_max, args.steps)
    rows = []
    for th in grid:
        th = float(th)
        opt = optimize_chsh(th, seed=args.seed)
        rows.append(
            {
                "theta": th,
                "analytic": analytic_chsh_maximum(th),
                "optimized": opt.value,
                "entropy_bits": entanglement_entropy(make_theta_state(th)),
            }
        )
    payload = {"schema": "nonlocality-chsh-scan/1", "seed": args.seed, "rows": rows}
    _emit(args, payload, ["theta", "analytic", "optimized", "entropy_bits"], rows, "csv")
    return 0


def _cmd_detection_scan(args) -> int:
    grid = np.linspace(args.theta_min, args.theta_max, args.steps)
    rows = []
    for th in grid:
        th = float(th)
        opt = optimize_critical_efficiency(th, seed=args.seed)
        rows.append(
            {
                "theta": th,
                "eta_c_chsh_optimal": critical_efficiency_at(th, chsh_optimal_settings(th)),
                "eta_c_optimized": opt.value,
                "chsh_at_optimal_eta_settings": opt.extras["chsh_at_optimum"],
            }
        )
    payload = {"schema": "nonlocality-detection-scan/1", "seed": args.seed, "rows": rows}
    _emit(
        args,
        payload,
        ["theta", "eta_c_chsh_optimal", "eta_c_optimized", "chsh_at_optimal_eta_settings"],
        rows,
        "csv",
    )
    return 0


def _cmd_cglmp_opt(args) -> int:
    if args.global_:
        result = optimize_cglmp_state_and_settings(seed=args.seed)
        gamma = result.params["gamma"]
        state = make_gamma_state(gamma)
        value = result.value
        phases = _phases_dict(result.params)
    else:
        gamma = 1.0 if args.gamma is None else args.gamma
        state = make_gamma_state(gamma)
        result = optimize_cglmp(state, seed=args.seed)
        value = result.value
        phases = _phases_dict(result.params)
    payload = {
        "schema": "nonlocality-cglmp-opt/1",
        "seed": args.seed,
        "value": value,
        "gamma": gamma,
        "phases": phases,
        "entropy_bits": entanglement_entropy(state),
        "converged": result.converged,
    }
    row = {"value": value, "gamma": gamma, "entropy_bits": payload["entropy_bits"], **phases}
    _emit(args, payload, list(row.keys()), [row], "json")
    return 0


def _cmd_kl_opt(args) -> int:
    result = optimize_kl(gamma=args.gamma, seed=args.seed)
    payload = {
        "schema": "nonlocality-kl-opt/1",
        "seed": args.seed,
        "distance_bits": result.value,
        "gamma": result.params["gamma"],
        "phases": _phases_dict(result.params),
        "solver_gap": result.gap,
        "iterations": result.iterations,
        "solver": result.extras["solver"],
    }
    row = {
        "distance_bits": result.value,
        "gamma": result.params["gamma"],
        "solver_gap": result.gap,
        "iterations": result.iterations,
        **_phases_dict(result.params),
    }
    _emit(args, payload, list(row.keys()), [row], "json")
    return 0


def _cmd_hardy(args) -> int:
    if args.scan is not None:
        thetas = np.linspace(0.0, math.pi / 4.0, args.scan)
        rows = [
            {
                "theta": r.theta,
                "probability": r.probability,
                "zero_residual": r.zero_residual,
                "holds": r.holds,
            }
            for r in hardy_scan(thetas, seed=args.seed)
        ]
        payload = {"schema": "nonlocality-hardy-scan/1", "seed": args.seed, "rows": rows}
        _emit(args, payload, ["theta", "probability", "zero_residual", "holds"], rows, "csv")
        return 0
    if args.theta is not None:
        result = optimize_hardy_probability(args.theta, seed=args.seed)
        payload = {
            "schema": "nonlocality-hardy-opt/1",
            "seed": args.seed,
            "theta": args.theta,
            "probability": result.value,
            "zero_residual": result.extras["zero_residual"],
            "params": result.params,
            "converged": result.converged,
        }
        row = {
            "theta": args.theta,
            "probability": result.value,
            "zero_residual": result.extras["zero_residual"],
        }
        _emit(args, payload, list(row.keys()), [row], "json")
        return 0
    cert = hardy_certificate(make_hardy_state())
    lhv = lhv_contradiction()
    payload = {
        "schema": "nonlocality-hardy-certificate/1",
        "certificate": cert.to_json_dict(),
        "lhv": {
            "n_survivors": len(lhv.survivors),
            "n_xx_mm_survivors": len(lhv.xx_mm_survivors),
            "forces_zero": lhv.forces_zero,
        },
    }
    row = {
        "p_xx_mm": cert.p_xx_mm,
        "p_xz_mm": cert.p_xz_mm,
        "p_zx_mm": cert.p_zx_mm,
        "p_zz_pp": cert.p_zz_pp,
        "holds": cert.holds,
    }
    _emit(args, payload, list(row.keys()), [row], "json")
    return 0


def _cmd_prbox(args) -> int:
    table = pr_box_behavior()
    payload = {
        "schema": "nonlocality-prbox/1",
        "chsh": chsh_of_behavior(table),
        "table": table.to_json_dict(),
        "seed": args.seed,
    }
    rows = []
    if args.sample is not None:
        seed = 0 if args.seed is None else args.seed
        log = sample_pr_box(args.sample, seed=seed, shards=args.shards)
        empirical = empirical_behavior(log)
        payload["empirical_table"] = empirical.to_json_dict()
        payload["empirical_chsh"] = chsh_of_behavior(empirical)
        payload["n_samples"] = log.n_samples
        payload["seed"] = seed
        probs = empirical.probs
    else:
        probs = table.probs
    for x in range(2):
        for y in range(2):
            for a in range(2):
                for b in range(2):
                    rows.append({"x": x, "y": y, "a": a, "b": b, "probability": float(probs[x, y, a, b])})
    _emit(args, payload, ["x", "y", "a", "b", "probability"], rows, "json")
    return 0


def _cmd_polytope(args) -> int:
    if args.action != "vertices":
        raise AssertionError("unreachable: argparse restricts choices")
    try:
        shape = tuple(int(v) for v in args.shape.split(","))
    except ValueError:
        raise SystemExit(f"bad --shape {args.shape!r}: expected four comma-separated integers")
    if len(shape) != 4:
        raise SystemExit(f"bad --shape {args.shape!r}: expected four comma-separated integers")
    poly = enumerate_vertices(shape)
    sa, sb = shape[0], shape[1]
    fieldnames = (
        ["vertex"]
        + [f"a_x{i}" for i in range(sa)]
        + [f"b_y{j}" for j in range(sb)]
    )
    rows = []
    for i in range(poly.n_vertices):
        row = {"vertex": i}
        for k in range(sa):
            row[f"a_x{k}"] = int(poly.assignments[i, k])
        for k in range(sb):
            row[f"b_y{k}"] = int(poly.assignments[i, sa + k])
        rows.append(row)
    payload = {
        "schema": "nonlocality-polytope-vertices/1",
        "shape": list(shape),
        "n_vertices": poly.n_vertices,
        "assignments": poly.assignments.tolist(),
    }
    _emit(args, payload, fieldnames, rows, "csv")
    return 0


def _parse_overrides(pairs) -> dict:
    overrides = {}
    for pair in pairs or []:
        claim, sep, value = pair.partition("=")
        if not sep:
            raise SystemExit(f"bad --tolerance {pair!r}: expected CLAIM=VALUE")
        try:
            overrides[claim] = float(value)
        except ValueError:
            raise SystemExit(f"bad --tolerance value {value!r}: expected a number")
    return overrides


def _cmd_reproduce_all(args) -> int:
    if args.config:
        try:
            config = ReproduceConfig.from_file(args.config)
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            raise SystemExit(f"config error: {exc}")
    else:
        config = ReproduceConfig()
    updates = {}
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.tolerance_profile is not None:
        updates["tolerance_profile"] = args.tolerance_profile
    overrides = _parse_overrides(args.tolerance)
    if overrides:
        merged = dict(config.tolerance_overrides)
        merged.update(overrides)
        updates["tolerance_overrides"] = merged
    if args.claims:
        updates["claims"] = tuple(args.claims.split(","))
    if updates:
        from dataclasses import replace

        config = replace(config, **updates)
    try:
        report = run_claims(config)
    except ValueError as exc:
        raise SystemExit(f"config error: {exc}")

    sys.stdout.write(report.table() + "\n")
    fmt = args.format if args.format else "json"
    if args.out:
        if fmt == "csv":
            fieldnames = ["claim_id", "description", "reference_value", "computed_value", "tolerance", "pass", "runtime_s"]
            text = _render_csv(fieldnames, report.csv_rows())
        else:
            text = report.to_json() + "\n"
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0 if report.all_passed else 1


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="seed for every stochastic component")
    common.add_argument("--out", type=str, default=None, help="write output to this file instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default=None, help="output format (each command has a natural default)")
    common.add_argument(
        "--tolerance-profile",
        choices=("strict", "default"),
        default=None,
        help="tolerance profile for reproduce-all",
    )

    parser = argparse.ArgumentParser(
        prog="nonlocality",
        description="Numerical measures of quantum non-locality: scans, optimizers, and a reproduction harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chsh-scan", parents=[common], help="optimized CHSH across partially entangled states")
    p.add_argument("--theta-min", type=float, default=0.0)
    p.add_argument("--theta-max", type=float, default=math.pi / 4.0)
    p.add_argument("--steps", type=int, default=50)
    p.set_defaults(handler=_cmd_chsh_scan)

    p = sub.add_parser("detection-scan", parents=[common], help="critical detection efficiency across states")
    p.add_argument("--theta-min", type=float, default=0.02)
    p.add_argument("--theta-max", type=float, default=math.pi / 4.0)
    p.add_argument("--steps", type=int, default=20)
    p.set_defaults(handler=_cmd_detection_scan)

    p = sub.add_parser("cglmp-opt", parents=[common], help="three-outcome Bell value optimizer")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--gamma", type=float, default=None, help="fix the middle Schmidt weight")
    group.add_argument("--max-ent", action="store_true", help="maximally entangled pair (default)")
    group.add_argument("--global", dest="global_", action="store_true", help="optimize the state too")
    p.set_defaults(handler=_cmd_cglmp_opt)

    p = sub.add_parser("kl-opt", parents=[common], help="KL distance to the local polytope, maximized")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--gamma", type=float, default=None, help="fix the middle Schmidt weight")
    group.add_argument("--global", dest="global_", action="store_true", help="optimize the state too (default)")
    p.set_defaults(handler=_cmd_kl_opt)

    p = sub.add_parser("hardy", parents=[common], help="Hardy paradox certificate, optimizer, and scan")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--state", choices=("hardy",), default=None, help="fixed-state certificate (default)")
    group.add_argument("--theta", type=float, default=None, help="optimize the paradox probability at this theta")
    group.add_argument("--scan", type=int, default=None, help="scan N theta values across [0, pi/4]")
    p.set_defaults(handler=_cmd_hardy)

    p = sub.add_parser("prbox", parents=[common], help="nonlocal-box behavior and sampling")
    p.add_argument("--sample", type=int, default=None, help="also sample N rounds and report empirical frequencies")
    p.add_argument("--shards", type=int, default=1, help="independent sampling shards (seeds derived per shard)")
    p.set_defaults(handler=_cmd_prbox)

    p = sub.add_parser("polytope", parents=[common], help="local polytope utilities")
    p.add_argument("action", choices=("vertices",), help="what to emit")
    p.add_argument("--shape", type=str, required=True, help="scenario as a,b,oa,ob (settings then outcomes)")
    p.set_defaults(handler=_cmd_polytope)

    p = sub.add_parser("reproduce-all", parents=[common], help="run every claim and report pass/fail")
    p.add_argument("--config", type=str, default=None, help="JSON config file; explicit flags win")
    p.add_argument("--tolerance", action="append", metavar="CLAIM=VALUE", help="per-claim tolerance override (repeatable)")
    p.add_argument("--claims", type=str, default=None, help="comma-separated claim subset (default: all)")
    p.set_defaults(handler=_cmd_reproduce_all)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
