"""Command-line entry point.

Subcommands: scan (grid sweep to CSV), fit (bound coefficient from CSV),
ce1/ce2 (closed-form counterexample reports), verify (randomized invariant
suite), asym (partition-sum diagnostics), plot (SVG scatter).

Exit codes: 0 success, 1 invariant failure, 2 usage/config error,
3 empty-result error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys

from . import asymptotics, oscillator, plotting, scan, verify
from .errors import EmptyWindowError, ValidationError
from .scan import BoundFit, CostPoint, ScanConfig

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_EMPTY = 3


def _dump(data) -> None:
    print(json.dumps(data, indent=2, sort_keys=True))


def _default_threads() -> int | None:
    env = os.environ.get("ENTROBOUND_THREADS")
    if env is None:
        return None
    try:
        return max(1, int(env))
    except ValueError:
        raise ValidationError(f"ENTROBOUND_THREADS must be an integer, got {env!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entrobound",
        description="Numerical explorer for the entropy-constrained "
        "energy-space cost bound.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_scan = sub.add_parser("scan", help="sweep (beta1, beta2) grids to CSV")
    p_scan.add_argument("--config", required=True, help="scan config JSON path")
    p_scan.add_argument("--out", required=True, help="output CSV path")
    p_scan.add_argument("--beta1-lo", type=float)
    p_scan.add_argument("--beta1-hi", type=float)
    p_scan.add_argument("--beta1-steps", type=int)
    p_scan.add_argument("--beta2-lo", type=float)
    p_scan.add_argument("--beta2-hi", type=float)
    p_scan.add_argument("--beta2-steps", type=int)
    p_scan.add_argument("--c-min", type=float)
    p_scan.add_argument("--c-max", type=float)
    p_scan.add_argument("--threads", type=int)
    p_scan.add_argument("--no-prune", action="store_true")

    p_fit = sub.add_parser("fit", help="fit the bound coefficient from a scan CSV")
    p_fit.add_argument("--csv", required=True)
    p_fit.add_argument("--c-min", type=float, default=1.0)
    p_fit.add_argument("--c-max", type=float, default=100.0)

    p_ce1 = sub.add_parser("ce1", help="uniform-mixture oscillator counterexample")
    p_ce1.add_argument("--d", type=int, required=True)
    p_ce1.add_argument("--l", type=int, required=True)
    _add_params(p_ce1)

    p_ce2 = sub.add_parser("ce2", help="two-level oscillator counterexample")
    p_ce2.add_argument("--p", type=float, required=True)
    _add_params(p_ce2)

    p_verify = sub.add_parser("verify", help="run the randomized invariant suite")
    p_verify.add_argument("--dim", type=int, default=6)
    p_verify.add_argument("--seed", type=int, default=42)
    p_verify.add_argument("--trials", type=int, default=20)

    p_asym = sub.add_parser("asym", help="partition-sum diagnostics")
    p_asym.add_argument("--d", type=int, required=True)
    p_asym.add_argument("--beta", type=float, action="append", required=True)
    p_asym.add_argument("--l-max", type=int, default=64)
    p_asym.add_argument("--n-max", type=int, default=64)

    p_plot = sub.add_parser("plot", help="SVG scatter of a scan with its fit curve")
    p_plot.add_argument("--csv", required=True)
    p_plot.add_argument("--fit", help="fit JSON path (curve omitted when absent)")
    p_plot.add_argument("--out", required=True)

    return parser


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--omega", type=float, default=1.0)


def _load_config(args) -> ScanConfig:
    with open(args.config) as fh:
        config = ScanConfig.from_json_dict(json.load(fh))
    b1 = list(config.beta1_range)
    b2 = list(config.beta2_range)
    window = list(config.cost_window)
    for idx, name in ((0, "beta1_lo"), (1, "beta1_hi"), (2, "beta1_steps")):
        if getattr(args, name) is not None:
            b1[idx] = getattr(args, name)
    for idx, name in ((0, "beta2_lo"), (1, "beta2_hi"), (2, "beta2_steps")):
        if getattr(args, name) is not None:
            b2[idx] = getattr(args, name)
    if args.c_min is not None:
        window[0] = args.c_min
    if args.c_max is not None:
        window[1] = args.c_max
    threads = args.threads if args.threads is not None else _default_threads()
    return dataclasses.replace(
        config,
        beta1_range=tuple(b1),
        beta2_range=tuple(b2),
        cost_window=tuple(window),
        parallelism=threads if threads is not None else config.parallelism,
        prune=config.prune and not args.no_prune,
    )


def cmd_scan(args) -> int:
    config = _load_config(args)
    points = scan.run_scan(config)
    if not points:
        print("scan produced no points", file=sys.stderr)
        return EXIT_EMPTY
    scan.write_csv(points, config.cost_window, args.out)
    in_window = sum(p.in_window(config.cost_window) for p in points)
    print(
        f"wrote {len(points)} points ({in_window} in window "
        f"[{config.cost_window[0]:g}, {config.cost_window[1]:g}]) to {args.out}"
    )
    return EXIT_OK


def cmd_fit(args) -> int:
    points = scan.read_csv(args.csv)
    fit = scan.fit_alpha(points, (args.c_min, args.c_max))
    payload = fit.to_json_dict()
    payload["alpha_inverse"] = 1.0 / fit.alpha if fit.alpha > 0 else None
    _dump(payload)
    return EXIT_OK


def cmd_ce1(args) -> int:
    params = oscillator.OscillatorParams(hbar=args.hbar, mass=args.mass, omega=args.omega)
    report = oscillator.counterexample1(params, args.d, args.l)
    _dump(report.to_json_dict())
    return EXIT_OK


def cmd_ce2(args) -> int:
    params = oscillator.OscillatorParams(hbar=args.hbar, mass=args.mass, omega=args.omega)
    report = oscillator.counterexample2(params, args.p)
    _dump(report.to_json_dict())
    return EXIT_OK


def cmd_verify(args) -> int:
    summary = verify.run_all(seed=args.seed, dim=args.dim, trials=args.trials)
    _dump(summary)
    if not summary["all_passed"]:
        failures = [r["name"] for r in summary["results"] if not r["passed"]]
        print(f"failed invariants: {', '.join(failures)}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_asym(args) -> int:
    rows = []
    for beta in args.beta:
        params = asymptotics.SpectrumParams(
            d=args.d, beta=beta, l_max=args.l_max, n_max=args.n_max
        )
        row = asymptotics.partition_and_costs(params).to_json_dict()
        row["steepest_descent_error"] = asymptotics.steepest_descent_error(params)
        rows.append(row)
    _dump(rows)
    return EXIT_OK


def cmd_plot(args) -> int:
    points = scan.read_csv(args.csv)
    fit = None
    window = (1.0, 100.0)
    if args.fit:
        with open(args.fit) as fh:
            data = json.load(fh)
        window = (data["c_min"], data["c_max"])
        attaining = CostPoint(
            spec_id=data["spec_id"],
            beta1=data["beta1"],
            beta2=data["beta2"],
            entropy=data["entropy"],
            energy_cost=0.0,
            space_cost=0.0,
            product=data["product"],
        )
        fit = BoundFit(
            alpha=data["alpha"],
            attaining_point=attaining,
            window=window,
            n_points=data["n_points"],
        )
    plotting.write_svg(points, window, fit, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


_HANDLERS = {
    "scan": cmd_scan,
    "fit": cmd_fit,
    "ce1": cmd_ce1,
    "ce2": cmd_ce2,
    "verify": cmd_verify,
    "asym": cmd_asym,
    "plot": cmd_plot,
}


def main(argv=None) -> int:
    logging.basicConfig(
        level=logging.INFO, stream=sys.stderr, format="%(levelname)s %(message)s"
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except EmptyWindowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (ValidationError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
