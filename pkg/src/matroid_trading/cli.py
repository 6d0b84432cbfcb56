"""Command-line front end.

Subcommands: density, exact, simulate, hardness-sweep, random-order, certify.
Every subcommand reads a JSON config (--config); CSV outputs land in --out.
Exit codes: 0 success, 1 certification failure, 2 bad config or arguments,
3 capacity limit exceeded.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from fractions import Fraction

from . import analytics, engine
from .certify import run_certification
from .config import ExperimentConfig, load_config
from .engine import (
    IIDModel,
    MarketInstance,
    POLICY_OFFLINE,
    POLICY_ONLINE_IID,
    POLICY_ONLINE_RANDOM_ORDER,
    RandomOrderModel,
)
from .errors import CapacityError, InputError
from .pricing import format_fraction

SEED_ENV_VAR = "MATROID_TRADING_SEED"

EXIT_OK = 0
EXIT_CERTIFY_FAILED = 1
EXIT_BAD_CONFIG = 2
EXIT_CAPACITY = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matroid-trading",
        description="Trading policies over matroids with exact ratio analytics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("density", "print the exact density of the configured matroid"),
        ("exact", "exact per-step online/offline values and their ratio"),
        ("simulate", "Monte Carlo runs of the configured policies"),
        ("hardness-sweep", "exact ratio of a named hardness generator across epsilons"),
        ("random-order", "exact and simulated values for a random-order instance"),
        ("certify", "run the randomized property suite; exit 0 iff all hold"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to the JSON experiment config")
        p.add_argument("--out", default=".", help="directory for CSV outputs")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--trials", type=int, default=None, help="override the config trial count")
        p.add_argument("--quiet", action="store_true", help="suppress the summary table")
    return parser


def _require(cfg: ExperimentConfig, attr: str, what: str):
    value = getattr(cfg, attr)
    if value is None:
        raise InputError(f"config is missing {what!r}, required by mode {cfg.mode}")
    return value


def _say(quiet: bool, text: str) -> None:
    if not quiet:
        print(text)


def _report_line(rep: analytics.RatioReport) -> str:
    ratio = format_fraction(rep.ratio) if rep.ratio is not None else "undefined"
    return (
        f"online={format_fraction(rep.online_per_step)} "
        f"offline={format_fraction(rep.offline_per_step)} "
        f"ratio={ratio} bound={format_fraction(rep.bound)} "
        f"satisfied={'yes' if rep.satisfied else 'NO'}"
    )


def _cmd_density(cfg: ExperimentConfig, out_dir: str, quiet: bool) -> int:
    m = _require(cfg, "matroid", "matroid")
    print(format_fraction(m.density()))
    return EXIT_OK


def _cmd_exact(cfg: ExperimentConfig, out_dir: str, quiet: bool) -> int:
    m = _require(cfg, "matroid", "matroid")
    model = _require(cfg, "model", "model")
    if not isinstance(model, IIDModel):
        raise InputError("exact mode needs an iid model")
    bound = cfg.bound
    if bound is None:
        bound = Fraction(1) / (1 + m.density())
    rep = analytics.exact_ratio(
        m,
        model.distribution,
        bound,
        offline_matroid=cfg.offline_matroid,
        instance_id=cfg.label or "exact",
    )
    path = os.path.join(out_dir, "ratio_report.csv")
    analytics.write_ratio_reports([rep], path)
    _say(quiet, f"{rep.instance_id}: {_report_line(rep)}")
    _say(quiet, f"wrote {path}")
    return EXIT_OK


def _cmd_simulate(cfg: ExperimentConfig, out_dir: str, quiet: bool) -> int:
    m = _require(cfg, "matroid", "matroid")
    model = _require(cfg, "model", "model")
    if isinstance(model, RandomOrderModel):
        horizon = len(model.distributions)
        policies = [POLICY_ONLINE_RANDOM_ORDER, POLICY_OFFLINE]
    else:
        horizon = _require(cfg, "horizon", "horizon")
        policies = [POLICY_ONLINE_IID, POLICY_OFFLINE]
    inst = MarketInstance(m, model, horizon, cfg.seed)
    rows = []
    for policy in policies:
        stats = engine.monte_carlo(inst, policy, cfg.trials)
        rows.append((policy, stats))
        _say(
            quiet,
            f"{policy}: trials={stats.trials} mean={stats.mean_profit:.6g} "
            f"stderr={stats.stderr:.3g} per_step={stats.per_step_mean:.6g}",
        )
        if policy == POLICY_ONLINE_IID:
            trace = engine.run_online_iid(inst)
        elif policy == POLICY_ONLINE_RANDOM_ORDER:
            trace = engine.run_online_random_order(inst)
        else:
            trace, _ = engine.run_offline_optimal(engine.sample_price_path(inst), m)
        trace_path = os.path.join(out_dir, f"trace_{policy}.csv")
        engine.write_trace_csv(trace, trace_path)
        _say(quiet, f"wrote {trace_path}")
    stats_path = os.path.join(out_dir, "stats.csv")
    engine.write_stats_csv(rows, stats_path)
    _say(quiet, f"wrote {stats_path}")
    return EXIT_OK


def _cmd_hardness_sweep(cfg: ExperimentConfig, out_dir: str, quiet: bool) -> int:
    generator = _require(cfg, "generator", "generator")
    epsilons = _require(cfg, "epsilons", "epsilons")
    params = cfg.generator_params
    if "k" not in params:
        raise InputError("generator params must include k")
    rows = analytics.hardness_sweep(
        generator,
        epsilons,
        k=params["k"],
        r=params.get("r"),
        ell=params.get("ell"),
        ell_prime=params.get("ell_prime"),
    )
    path = os.path.join(out_dir, "hardness_sweep.csv")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["epsilon", "online", "offline", "ratio", "bound", "satisfied"])
        for eps, rep in rows:
            writer.writerow(
                [
                    format_fraction(eps),
                    format_fraction(rep.online_per_step),
                    format_fraction(rep.offline_per_step),
                    format_fraction(rep.ratio) if rep.ratio is not None else "undefined",
                    format_fraction(rep.bound),
                    "true" if rep.satisfied else "false",
                ]
            )
    for eps, rep in rows:
        _say(quiet, f"eps={format_fraction(eps)}: {_report_line(rep)}")
    _say(quiet, f"wrote {path}")
    return EXIT_OK


def _cmd_random_order(cfg: ExperimentConfig, out_dir: str, quiet: bool) -> int:
    m = _require(cfg, "matroid", "matroid")
    model = _require(cfg, "model", "model")
    if not isinstance(model, RandomOrderModel):
        raise InputError("random-order mode needs a random_order model")
    ds = list(model.distributions)
    n = len(ds)
    online = analytics.exact_random_order_online(m, ds)
    offline = analytics.exact_random_order_offline(m, ds)
    bound = Fraction(1) / (1 + m.density()) - Fraction(2, n)
    satisfied = online >= bound * offline
    inst = MarketInstance(m, model, n, cfg.seed)
    stats = engine.monte_carlo(inst, POLICY_ONLINE_RANDOM_ORDER, cfg.trials)
    path = os.path.join(out_dir, "random_order.csv")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["n", "density", "online", "offline", "bound", "satisfied",
             "sim_trials", "sim_per_step_mean", "sim_stderr"]
        )
        writer.writerow(
            [
                n,
                format_fraction(m.density()),
                format_fraction(online),
                format_fraction(offline),
                format_fraction(bound),
                "true" if satisfied else "false",
                stats.trials,
                repr(stats.per_step_mean),
                repr(stats.stderr),
            ]
        )
    _say(
        quiet,
        f"n={n} density={format_fraction(m.density())} "
        f"online={format_fraction(online)} offline={format_fraction(offline)} "
        f"bound={format_fraction(bound)} satisfied={'yes' if satisfied else 'NO'}",
    )
    _say(
        quiet,
        f"simulated per-step mean {stats.per_step_mean:.6g} "
        f"(stderr {stats.stderr:.3g}, {stats.trials} trials)",
    )
    _say(quiet, f"wrote {path}")
    return EXIT_OK


def _cmd_certify(cfg: ExperimentConfig, out_dir: str, quiet: bool) -> int:
    results = run_certification(cfg.seed, cfg.certify_counts)
    failed = [r for r in results if not r.ok]
    for r in results:
        if r.ok:
            _say(quiet, f"PASS {r.name} (trials={r.trials})")
        else:
            print(f"FAIL {r.name} (trials={r.trials}, failures={r.failures}): {r.detail}")
    if failed:
        print(f"{len(failed)} of {len(results)} properties violated")
        return EXIT_CERTIFY_FAILED
    _say(quiet, f"all {len(results)} properties hold")
    return EXIT_OK


_COMMANDS = {
    "density": _cmd_density,
    "exact": _cmd_exact,
    "simulate": _cmd_simulate,
    "hardness-sweep": _cmd_hardness_sweep,
    "random-order": _cmd_random_order,
    "certify": _cmd_certify,
}


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_CONFIG if exc.code else EXIT_OK
    try:
        cfg = load_config(args.config)
        if cfg.mode != args.command:
            raise InputError(
                f"config mode {cfg.mode!r} does not match subcommand {args.command!r}"
            )
        if args.seed is not None:
            cfg.seed = args.seed
        elif SEED_ENV_VAR in os.environ:
            try:
                cfg.seed = int(os.environ[SEED_ENV_VAR])
            except ValueError as exc:
                raise InputError(f"{SEED_ENV_VAR} must be an integer") from exc
        if args.trials is not None:
            if args.trials < 1:
                raise InputError("--trials must be at least 1")
            cfg.trials = args.trials
        os.makedirs(args.out, exist_ok=True)
        return _COMMANDS[args.command](cfg, args.out, args.quiet)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except InputError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
