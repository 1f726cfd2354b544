"""Run the metatheory property suites and write a summary.

    python scripts/run_suites.py --suite all --seed 0 --json reports.json
"""

from __future__ import annotations

import argparse
import json
import sys

from protoquipper.harness import SUITES, SuiteConfig, run_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--suite", default="all", choices=["all", *SUITES])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--cases", type=int, default=0, help="0 uses each suite's default")
    ap.add_argument("--size", type=int, default=12)
    ap.add_argument("--json", metavar="PATH", help="also write reports as JSON")
    args = ap.parse_args()

    cfg = SuiteConfig(seed=args.seed, cases=args.cases, size=args.size)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    reports = []
    for name in names:
        r = run_suite(name, cfg)
        print(r.to_text(), flush=True)
        reports.append(r)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump([r.to_dict() for r in reports], fh, indent=2, default=str)
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
