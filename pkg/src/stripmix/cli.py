"""Command-line front end: ``stripmix {count,growth,genfun,kernel,mix,simulate}``.

Exit codes: 0 success, 2 usage, 3 domain/precondition, 4 resource cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from importlib import resources

from . import __version__
from .errors import DomainError, ResourceCap
from .kernel import build_kernel_graph, verify_bottleneck
from .markov import ChainSpec, mix_report, simulate
from .transfer import charpoly, count_series, generating_function, growth_constants

EXIT_DOMAIN = 3
EXIT_RESOURCE = 4


def load_schema(name: str) -> dict:
    return json.loads(resources.files("stripmix.schemas").joinpath(f"{name}.json").read_text())


def _meta(argv: list[str]) -> str:
    return f"stripmix {__version__}; invocation: stripmix {' '.join(argv)}"


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("STRIPMIX_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def cmd_count(args, argv) -> None:
    series = count_series(args.m, args.n_max)
    if args.format == "json":
        text = _dumps({"m": args.m, "n_max": args.n_max, "series": [str(c) for c in series]})
    elif args.format == "csv":
        buf = io.StringIO()
        buf.write(f"# {_meta(argv)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "c"])
        for n, c in enumerate(series):
            w.writerow([n, c])
        text = buf.getvalue()
    else:
        text = ",".join(str(c) for c in series) + "\n"
    _emit(text, args.out)


def cmd_growth(args, argv) -> None:
    g = growth_constants(args.m, args.tol)
    lo, hi = g.bracket
    rec = {
        "m": args.m,
        "charpoly": list(charpoly(args.m).coefficients),
        "charpoly_text": str(charpoly(args.m)),
        "r": g.r,
        "r_bracket": [str(lo), str(hi)],
        "tol": args.tol,
        "q": g.q,
        "C": g.C,
    }
    _emit(_dumps(rec), args.out)


def cmd_genfun(args, argv) -> None:
    gf = generating_function(args.m)
    if args.format == "json":
        text = _dumps({
            "m": args.m,
            "numerator": list(gf.numerator.coefficients),
            "denominator": list(gf.denominator.coefficients),
            "series": gf.series(args.terms),
        })
    else:
        text = f"{gf}\n"
    _emit(text, args.out)


def cmd_kernel(args, argv) -> None:
    kernel = build_kernel_graph(args.m, args.n)
    report = verify_bottleneck(kernel)
    if args.format == "dot":
        text = kernel.to_dot()
    else:
        payload = kernel.to_json()
        payload["bottleneck"] = {
            "separator": report.sep_size, "side_a": report.side_a, "side_b": report.side_b,
        }
        text = _dumps(payload)
    _emit(text, args.out)
    print(report.summary(), file=sys.stderr)


def cmd_mix(args, argv) -> None:
    spec = ChainSpec.symmetric() if args.chain == "sym" else ChainSpec.lazy(Fraction(args.p))
    kernel = build_kernel_graph(args.m, args.n)
    report = mix_report(kernel, spec, eps=args.eps, tmax=args.tmax,
                        exact_phi=args.exact_phi, threads=_threads(args))
    _emit(_dumps(report.to_json()), args.out)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(report.curve_csv(_meta(argv)))


def cmd_simulate(args, argv) -> None:
    spec = ChainSpec.symmetric() if args.chain == "sym" else ChainSpec.lazy(Fraction(args.p))
    kernel = build_kernel_graph(args.m, args.n)
    start = kernel.index(args.start) if args.start else kernel.root
    traj = simulate(kernel, spec, start, args.steps, args.seed)
    _emit(_dumps({"m": args.m, "n": args.n, "chain": spec.label(), "seed": args.seed,
                  "trajectory": traj}), args.out)


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stripmix", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"stripmix {__version__}")
    ap.add_argument("--threads", type=int, default=None,
                    help="worker threads (default: $STRIPMIX_THREADS or all cores)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="c_m(0..n_max)")
    p.add_argument("--m", type=_nonneg, required=True)
    p.add_argument("--n-max", type=_nonneg, required=True)
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("growth", help="charpoly, Perron root, q_m and C_m")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--out")
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("genfun", help="reduced generating function")
    p.add_argument("--m", type=_nonneg, required=True)
    p.add_argument("--terms", type=_nonneg, default=10)
    p.add_argument("--format", choices=["text", "json"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_genfun)

    p = sub.add_parser("kernel", help="kernel graph with bottleneck classes")
    p.add_argument("--m", type=_nonneg, required=True)
    p.add_argument("--n", type=_nonneg, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--dot", dest="format", action="store_const", const="dot")
    g.add_argument("--json", dest="format", action="store_const", const="json")
    p.set_defaults(format="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_kernel)

    for name, func, helptext in (("mix", cmd_mix, "mixing report"),
                                 ("simulate", cmd_simulate, "simulate one trajectory")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--m", type=_nonneg, required=True)
        p.add_argument("--n", type=_nonneg, required=True)
        p.add_argument("--chain", choices=["sym", "lazy"], default="sym")
        p.add_argument("--p", default="1/2", help="move probability of the lazy chain")
        p.add_argument("--out")
        p.set_defaults(func=func)
        if name == "mix":
            p.add_argument("--eps", type=float, default=0.125)
            p.add_argument("--tmax", type=_nonneg, default=200)
            p.add_argument("--exact-phi", action="store_true")
            p.add_argument("--csv", help="write the d(t) curve here")
        else:
            p.add_argument("--steps", type=_nonneg, default=100)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--start", help="start path as a step string (default all E)")
    return ap


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    try:
        args.func(args, argv)
    except ResourceCap as exc:
        print(f"stripmix: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (DomainError, ValueError, KeyError) as exc:
        print(f"stripmix: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
