#!/usr/bin/env python3
"""Run every packaged scenario at full scale and print the digests."""

import argparse
import sys
import time

from wordavoid import run_all_scenarios


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--prefix-length", type=int, default=100_000)
    args = parser.parse_args()

    start = time.time()
    reports = run_all_scenarios(prefix_length=args.prefix_length)
    for report in reports:
        print(report.digest())
        print()
    failed = [r.name for r in reports if not r.ok]
    print(f"{len(reports) - len(failed)}/{len(reports)} scenarios passed"
          f" in {time.time() - start:.1f}s")
    if failed:
        print("failed:", ", ".join(failed))
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
