#!/usr/bin/env python3
"""Run every verification suite and write JSON + markdown reports."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from repverify.harness import SUITES, SuiteConfig, emit_report, run_suite


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--scale", type=float, default=1.0)
    parser.add_argument("--out-dir", default="reports")
    args = parser.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    failures = 0
    for suite in SUITES:
        report = run_suite(SuiteConfig(suite, master_seed=args.seed, scale=args.scale))
        (out / f"{suite}.json").write_text(emit_report(report, "json"))
        (out / f"{suite}.md").write_text(emit_report(report, "markdown-summary"))
        failures += report.failures
        status = "ok" if report.all_passed else "FAILURES"
        print(f"{suite:12} {report.passes}/{len(report.results)} {status} ({report.wall_clock_s:.1f} s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
