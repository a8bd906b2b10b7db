#!/usr/bin/env python3
"""Saturation scans for Cantor and Smith-Volterra-Cantor barrier arrangements.

Each generated cell is stretched to total width b and its tunneling time is
followed as b grows; the converged flag uses the default 1e-6 rule.
"""
import argparse

from tunneltime import make_cantor, saturation_scan


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--V", type=float, default=2.0)
    p.add_argument("--E", type=float, default=1.0)
    p.add_argument("--levels", type=int, nargs="+", default=[0, 1, 2, 3])
    p.add_argument("--b", type=float, nargs="+", default=[10, 20, 40, 80, 160, 320])
    args = p.parse_args()

    for variant in ("standard", "svc"):
        for level in args.levels:
            base = make_cantor(variant, level, args.V, 1.0)
            scan = saturation_scan(base.scaled, args.E, args.b)
            taus = " ".join("   flagged" if t is None else f"{t:10.6f}" for t in scan.taus)
            print(f"{variant:8s} level {level}: {taus}  converged={scan.converged}")


if __name__ == "__main__":
    main()
