"""Run every invariant suite and print a residual table.

    python3 scripts/verify_invariants.py --seed 7 --trials 200
"""

import argparse
import sys
import time

from flagqm import verify


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--tol", type=float, default=1e-9)
    args = ap.parse_args()

    t0 = time.perf_counter()
    checks = verify.run_all(args.seed, args.trials, args.tol)
    width = max(len(c.name) for c in checks)
    for c in checks:
        flag = "ok  " if c.passed else "FAIL"
        print(f"{flag} {c.name:<{width}}  residual {c.residual:.2e}  trials {c.trials:>4}  [{c.provenance}] {c.reference}")
    print(f"{sum(c.passed for c in checks)}/{len(checks)} passed in {time.perf_counter() - t0:.2f}s")
    return 0 if all(c.passed for c in checks) else 1


if __name__ == "__main__":
    sys.exit(main())
