"""Characteristic polynomials, Perron roots and growth constants by strip height.

    python scripts/growth_table.py --m-max 10
"""

from __future__ import annotations

import argparse

from stripmix.transfer import charpoly, count_paths, growth_constants, perron


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m-max", type=int, default=8)
    ap.add_argument("--show-poly", action="store_true")
    args = ap.parse_args()

    print(f"{'m':>3} {'r_m':>12} {'q_m':>10} {'C_m':>10} {'c_m(60)/(q r^60)':>18}")
    for m in range(args.m_max + 1):
        if m == 0:
            print(f"{0:>3} {perron(0).r:>12.8f} {'':>10} {'':>10} {'':>18}")
            continue
        g = growth_constants(m)
        check = count_paths(m, 60) / (g.q * g.r**60)
        print(f"{m:>3} {g.r:>12.8f} {g.q:>10.6f} {g.C:>10.6f} {check:>18.12f}")
        if args.show_poly:
            print(f"      a_{m}(x) = {charpoly(m)}")


if __name__ == "__main__":
    main()
