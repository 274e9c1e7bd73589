"""Run every oracle and invariant suite at full size and print one line each.

    python scripts/run_validation.py [--dominance 1000]
"""

import argparse
import sys

from rfcr_stackelberg.validation import run_suites


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dominance", type=int, default=1000, help="realizations for the dominance suite")
    args = ap.parse_args()
    results = run_suites(dominance_realizations=args.dominance)
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name:<11} n={r.checked:<5} {r.seconds:7.2f}s  {r.detail}")
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
