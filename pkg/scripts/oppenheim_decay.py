#!/usr/bin/env python3
"""Decay-curve experiment for small values of indefinite quadratic forms.

Writes a CSV of (T, running minimum, exact record) rows and prints the
fitted decay exponent.  The T = 10^3 value of the default form is the
brute-force oracle behind the 0.05 acceptance threshold.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from repverify import oppenheim


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--form", default="x1^2+x2^2-sqrt2*x3^2")
    parser.add_argument("--s", type=float, default=0.0)
    parser.add_argument("--t-list", default="10,100,1000")
    parser.add_argument("--out", default=None, help="CSV output path")
    args = parser.parse_args()

    form = oppenheim.parse_form(args.form)
    t_list = [int(t) for t in args.t_list.split(",")]
    curve = oppenheim.decay_curve(form, args.s, t_list)
    print(f"{'T':>7} {'min |Q(v)-s|':>14}  exact")
    for (t, val), exact in zip(curve.rows, curve.exact_values):
        print(f"{t:>7} {val:>14.6g}  {exact}")
    kappa = curve.kappa
    print(f"fitted decay exponent kappa = {kappa if kappa != float('inf') else 'inf (exact zero)'}")
    if args.out:
        lines = ["T,min_value,exact"]
        for (t, val), exact in zip(curve.rows, curve.exact_values):
            lines.append(f"{t},{val!r},{exact}")
        Path(args.out).write_text("\n".join(lines) + "\n")
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
