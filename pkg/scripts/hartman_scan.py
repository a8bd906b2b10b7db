#!/usr/bin/env python3
"""Thickness scan of the stationary-phase time for rectangular barriers.

Prints the numeric (finite-difference) time, the closed-form time and its
distance to the thick-barrier limit 1/(qk).
"""
import argparse

from tunneltime import (hartman_deviation_rect, hartman_limit_rect, make_rectangular,
                        tunneling_time_rect_analytic, tunneling_time_single)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--V", type=float, default=2.0)
    p.add_argument("--E", type=float, default=1.0)
    p.add_argument("--b", type=float, nargs="+", default=[0.25, 0.5, 1, 2, 4, 8, 12, 16, 24, 32])
    args = p.parse_args()

    limit = hartman_limit_rect(args.V, args.E)
    print(f"V={args.V} E={args.E}  limit 1/(qk) = {limit:.12f}")
    print(f"{'b':>8} {'tau numeric':>18} {'tau analytic':>18} {'tau - limit':>12}")
    for b in args.b:
        num = tunneling_time_single(make_rectangular(args.V, b), args.E).tau
        ana = tunneling_time_rect_analytic(args.V, b, args.E).tau
        print(f"{b:8.3f} {num:18.12f} {ana:18.12f} {hartman_deviation_rect(args.V, b, args.E):12.3e}")


if __name__ == "__main__":
    main()
