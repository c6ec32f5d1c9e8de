"""Slow-mixing sweep for the symmetric chain on (m, n), n in a range.

For each n prints the number of paths, the SideB conductance bound, the
second eigenvalue modulus and both lower bounds on tau(eps).  Optionally
writes the table as CSV.

    python scripts/slow_mixing_sweep.py --m 2 --n-min 6 --n-max 14 --csv sweep.csv
"""

from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction

from stripmix.kernel import VertexClass, build_kernel_graph
from stripmix.markov import (
    ChainSpec,
    build_chain,
    conductance_upper_bound,
    lambda_max,
    mixing_lower_bounds,
    stationary,
)
from stripmix.transfer import perron


def sweep(m: int, ns: range, spec: ChainSpec, eps: float, with_lambda: bool):
    rows = []
    for n in ns:
        k = build_kernel_graph(m, n)
        P = build_chain(k, spec)
        pi = stationary(P)
        phi = conductance_upper_bound(P, pi, k.class_members(VertexClass.SIDE_B))
        lam = lambda_max(P, pi) if with_lambda else None
        usable = phi if 0 < phi < Fraction(1, 2) else None
        t_spec, t_cond = mixing_lower_bounds(lam, usable, eps)
        rows.append({"n": n, "states": P.size, "phi_ub": float(phi), "lambda_max": lam,
                     "tau_lb_spectral": t_spec, "tau_lb_conductance": t_cond})
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--n-min", type=int, default=6)
    ap.add_argument("--n-max", type=int, default=14)
    ap.add_argument("--chain", choices=["sym", "lazy"], default="sym")
    ap.add_argument("--p", default="1/2")
    ap.add_argument("--eps", type=float, default=0.125)
    ap.add_argument("--no-lambda", action="store_true", help="skip the eigenvalue (fast)")
    ap.add_argument("--csv")
    args = ap.parse_args()

    spec = ChainSpec.symmetric() if args.chain == "sym" else ChainSpec.lazy(Fraction(args.p))
    rows = sweep(args.m, range(args.n_min, args.n_max + 1), spec, args.eps, not args.no_lambda)
    r = perron(args.m).r
    print(f"chain {spec.label()}, m={args.m}, eps={args.eps}, r_m={r:.6f}")
    prev = None
    for row in rows:
        ratio = "" if prev is None or row["tau_lb_conductance"] is None else \
            f"{row['tau_lb_conductance'] / prev:.3f}"
        lam = "" if row["lambda_max"] is None else f"{row['lambda_max']:.8f}"
        tc = row["tau_lb_conductance"]
        print(f"n={row['n']:>3} |Omega|={row['states']:>7} Phi_ub={row['phi_ub']:.3e} "
              f"lambda={lam:>10} tau_cond={tc if tc is None else round(tc, 1)!s:>8} ratio={ratio}")
        prev = tc
    if args.csv:
        out = open(args.csv, "w", newline="") if args.csv != "-" else sys.stdout
        out.write(f"# slow_mixing_sweep m={args.m} chain={spec.label()} eps={args.eps}\n")
        w = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


if __name__ == "__main__":
    main()
