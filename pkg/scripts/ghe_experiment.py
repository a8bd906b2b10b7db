#!/usr/bin/env python3
"""Gap (in)dependence of the N-cell tunneling time.

For a thick cell the time is the same for every N and gap L and equals the
single-cell time; for a thin cell it is not. Both are printed side by side.
"""
import argparse

from tunneltime import PeriodicSpec, ResonanceError, make_rectangular, tunneling_time_periodic, tunneling_time_single


def table(V, b, E, Ns, Ls):
    cell = make_rectangular(V, b)
    tau0 = tunneling_time_single(cell, E).tau
    print(f"\ncell V={V} b={b} E={E}: single-cell tau = {tau0:.12f}")
    print(f"{'N':>3} {'L':>6} {'tau_N':>18} {'tau_N - tau':>12}")
    for N in Ns:
        for L in Ls:
            try:
                tau = tunneling_time_periodic(cell, PeriodicSpec.for_cell(cell, N, L), E).tau
            except ResonanceError:
                print(f"{N:3d} {L:6.2f} {'(flagged)':>18}")
                continue
            print(f"{N:3d} {L:6.2f} {tau:18.12f} {tau - tau0:12.3e}")


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--V", type=float, default=2.0)
    p.add_argument("--E", type=float, default=1.0)
    p.add_argument("--thick", type=float, default=25.0)
    p.add_argument("--thin", type=float, default=1.0)
    args = p.parse_args()
    Ns, Ls = (2, 3, 5), (0.5, 2.0, 10.0)
    table(args.V, args.thick, args.E, Ns, Ls)
    table(args.V, args.thin, args.E, Ns, Ls)


if __name__ == "__main__":
    main()
