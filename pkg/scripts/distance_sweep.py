"""Average utilities and welfare versus the ST-SR distance for N = 4 and N = 6.

Both antenna counts share one fading draw per trial (drawn at N = 6), so the
two curves are paired.  Writes one CSV per antenna count.

    python scripts/distance_sweep.py --trials 2000 --out results
"""

import argparse
from dataclasses import replace
from pathlib import Path

from rfcr_stackelberg.cli import sweep_csv
from rfcr_stackelberg.experiments import ExperimentConfig, Sweep, run_sweep
from rfcr_stackelberg.rates import SystemParams


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--distances", type=float, nargs="+", default=[0.6, 0.8, 1.0, 1.2, 1.4])
    ap.add_argument("--out", type=Path, default=Path("results"))
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    base = ExperimentConfig(
        realizations=args.trials,
        base_seed=args.seed,
        sweep=Sweep("d_st_sr", tuple(sorted(args.distances))),
        draw_antennas=6,
    )
    for n in (4, 6):
        res = run_sweep(replace(base, params=SystemParams(n=n)), workers=args.workers)
        path = args.out / f"distance_sweep_n{n}.csv"
        path.write_text(sweep_csv(res, "dStSr"))
        print(f"N={n}: wrote {path}")
        for r in res.rows:
            gap = r.welfare_central - r.welfare_game
            print(f"  dStSr={r.value:.1f}  PU {r.pu_game:8.3f}  SU {r.su_game:8.3f}  welfare gap {gap:7.3f}  coop {r.coop_frequency:.2f}")


if __name__ == "__main__":
    main()
