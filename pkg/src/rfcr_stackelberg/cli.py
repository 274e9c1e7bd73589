"""Command-line entry point: ``rfcr-game {equilibrium,sweep,validate}``.

Exit codes: 0 success, 1 a validation suite failed, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import sys
from contextlib import contextmanager
from dataclasses import replace
from pathlib import Path

from .channel import DegenerateChannelError, effective_gains, sample_channel
from .config import KEYS, ConfigError, load_config, parse_channel, with_overrides
from .experiments import ExperimentConfig, Sweep, run_sweep, trial_rng
from .game import Mode, stackelberg_equilibrium
from .validation import SUITES, run_suites

DEFAULT_SWEEP = Sweep("d_st_sr", (0.6, 0.8, 1.0, 1.2, 1.4))

SWEEP_COLUMNS = (
    "pu_game",
    "pu_noncoop",
    "su_game",
    "su_noncoop",
    "welfare_game",
    "welfare_noncoop",
    "welfare_centralized",
    "coop_frequency",
    "trials",
    "skipped",
)

DUMP_COLUMNS = (
    "value", "trial", "mode", "alpha", "tau", "mu", "beta",
    "u_p", "u_s", "u_p_nc", "u_s_nc", "welfare_game", "welfare_noncoop",
    "welfare_centralized", "centralized_mode",
)


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return str(x)
    x = float(x)
    return "nan" if math.isnan(x) else f"{x:.9g}"


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


@contextmanager
def _open_out(path):
    if path is None or str(path) == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="ascii") as fh:
            yield fh


def _config(args) -> ExperimentConfig:
    if args.config:
        cfg = load_config(args.config)
    else:
        cfg = ExperimentConfig(sweep=DEFAULT_SWEEP)
    return with_overrides(cfg, seed=args.seed, trials=args.trials, grid_step=args.grid_step)


def equilibrium_report(cfg: ExperimentConfig, channel_path=None):
    """Solve one realization and list ``(quantity, value)`` pairs for the report."""
    params = cfg.params
    if channel_path:
        try:
            text = Path(channel_path).read_text()
        except OSError as exc:
            raise ConfigError(f"{channel_path}: {exc.strerror}") from None
        ch = parse_channel(text, str(channel_path))
        params = replace(params, n=ch.n)
    else:
        ch = sample_channel(cfg.topology, params.n, trial_rng(cfg.base_seed, 0))
    try:
        gains = effective_gains(ch)
    except DegenerateChannelError as exc:
        raise ConfigError(f"degenerate channel: {exc}") from None
    eq = stackelberg_equilibrium(params, gains, cfg.grid_step)
    coop = eq.mode is Mode.COOPERATIVE
    return [
        ("mode", eq.mode.value),
        ("alpha_star", eq.alpha_star),
        ("tau_star", eq.leader.tau if coop else math.nan),
        ("mu_star", eq.leader.mu if coop else math.nan),
        ("beta_star", eq.follower.beta if coop else math.nan),
        ("rate_p", eq.r_p),
        ("rate_s", eq.r_s),
        ("utility_p", eq.u_p),
        ("utility_s", eq.u_s),
        ("welfare", eq.welfare),
        ("utility_p_noncoop", eq.u_p_nc),
        ("utility_s_noncoop", eq.u_s_nc),
        ("utility_p_coop", eq.u_p_co),
        ("utility_s_coop", eq.u_s_co),
        ("hp2", gains.hp2),
        ("hps2", gains.hps2),
        ("hs2", gains.hs2),
        ("zf_gain_p", gains.zf_gain_p),
        ("zf_gain_s", gains.zf_gain_s),
    ]


def cmd_equilibrium(args) -> int:
    cfg = _config(args)
    rows = equilibrium_report(cfg, args.channel)
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k:<{width}}  {fmt(v)}")
    if args.output:
        with _open_out(args.output) as fh:
            w = _writer(fh)
            w.writerow(("quantity", "value"))
            w.writerows((k, fmt(v)) for k, v in rows)
    return 0


def sweep_csv(result, parameter: str) -> str:
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow((parameter,) + SWEEP_COLUMNS)
    for r in result.rows:
        w.writerow(
            [fmt(r.value)]
            + [fmt(x) for x in (r.pu_game, r.pu_nc, r.su_game, r.su_nc, r.welfare_game, r.welfare_nc,
                                r.welfare_central, r.coop_frequency)]
            + [str(r.trials), str(r.skipped)]
        )
    return buf.getvalue()


def _dump_rows(value, records):
    for rec in records:
        if rec is None:
            continue
        eq, c = rec.equilibrium, rec.centralized
        coop = eq.mode is Mode.COOPERATIVE
        yield [
            fmt(value), str(rec.trial_index), eq.mode.value, fmt(eq.alpha_star),
            fmt(eq.leader.tau if coop else math.nan), fmt(eq.leader.mu if coop else math.nan),
            fmt(eq.follower.beta if coop else math.nan),
            fmt(eq.u_p), fmt(eq.u_s), fmt(eq.u_p_nc), fmt(eq.u_s_nc),
            fmt(eq.welfare), fmt(rec.nc_welfare), fmt(c.welfare), c.mode.value,
        ]


def cmd_sweep(args) -> int:
    cfg = _config(args)
    if cfg.sweep is None:
        raise ConfigError("sweep command needs a 'sweep' key in the configuration")
    dump_rows = []
    on_records = (lambda v, recs: dump_rows.extend(_dump_rows(v, recs))) if args.dump else None
    result = run_sweep(cfg, workers=args.workers, on_records=on_records)
    label = next((k for k, v in KEYS.items() if v[1] == cfg.sweep.name), cfg.sweep.name)
    text = sweep_csv(result, label)
    with _open_out(args.output) as fh:
        fh.write(text)
    if args.dump:
        with _open_out(args.dump) as fh:
            w = _writer(fh)
            w.writerow(DUMP_COLUMNS)
            w.writerows(dump_rows)
    return 0


def cmd_validate(args) -> int:
    cfg = _config(args)
    names = [s.strip() for s in args.suites.split(",") if s.strip()] if args.suites else None
    try:
        results = run_suites(names, dominance_realizations=args.trials, config=cfg)
    except KeyError as exc:
        raise ConfigError(exc.args[0]) from None
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.name:<11} n={r.checked:<5} {r.seconds:7.2f}s  {r.detail}")
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key-value configuration file (default: configs/baseline.cfg setup)")
    common.add_argument("--seed", type=int, help="override the base seed")
    common.add_argument("--trials", type=int, help="override the number of channel realizations")
    common.add_argument("--grid-step", type=float, help="alpha/tau search step (default 1e-3)")
    common.add_argument("--output", metavar="PATH", help="CSV output path ('-' for stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="rfcr-game", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("equilibrium", parents=[common], help="Stackelberg equilibrium of one realization")
    p.add_argument("--channel", metavar="PATH", help="fixed channel file instead of a random draw")
    p.set_defaults(func=cmd_equilibrium)

    p = sub.add_parser("sweep", parents=[common], help="Monte Carlo averages over a parameter sweep")
    p.add_argument("--dump", metavar="PATH", help="also write one CSV row per realization")
    p.add_argument("--workers", type=int, default=1, help="worker processes for trials")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", parents=[common], help="run oracle and invariant suites")
    p.add_argument("--suites", metavar="LIST", help=f"comma-separated subset of: {', '.join(SUITES)}")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
