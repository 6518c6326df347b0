"""Command-line entry point: ``ggdiscord <subcommand> [options]``.

Exit codes: 0 success, 2 invalid or unphysical input, 3 optimizer
non-convergence when ``--strict`` is given.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import experiments as ex
from .csvio import RunMetadata, column, parse_csv, render_csv
from .errors import ContractError, DomainError, NumericalDegeneracyError, UnphysicalStateError
from .gaussian_core import PHYSICAL_TOL, StandardForm, read_matrix, require_physical, to_standard_form
from .optimize import OptimizerOptions
from .sampling import SamplerConfig
from .svg import plot

EXIT_INVALID = 2
EXIT_NOT_CONVERGED = 3


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def _command_line(argv) -> str:
    return " ".join(["ggdiscord", *argv])


def _emit(args, text: str, svg_text=None):
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
        if svg_text is not None:
            Path(args.out).with_suffix(".svg").write_text(svg_text)


def _opts(args) -> OptimizerOptions:
    return OptimizerOptions(starts=args.starts, seed=args.seed)


def _add_common(p, seed=True, n=None, cap=None, optimizer=False):
    p.add_argument("--out", default="-", help="output path ('-' for stdout)")
    p.add_argument("--svg", action="store_true", help="also write <out>.svg")
    p.add_argument("--tol", type=float, default=PHYSICAL_TOL, help="physicality tolerance")
    if seed:
        p.add_argument("--seed", type=_seed, default=0)
    if n is not None:
        p.add_argument("--n", type=_positive_int, default=n, help="number of sampled states")
    if cap is not None:
        p.add_argument("--energy-cap", type=float, default=cap, help="mean energy cap N")
    if optimizer:
        p.add_argument("--starts", type=_positive_int, default=OptimizerOptions.starts,
                       help="local searches per optimisation")
        p.add_argument("--strict", action="store_true", help="exit 3 on non-convergence")
    p.add_argument("--jobs", type=_positive_int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ggdiscord", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("state", help="report all measures for one state")
    p.add_argument("params", nargs="*", type=float, metavar="a b c d",
                   help="standard-form quadruple")
    p.add_argument("--matrix", help="file with a 4x4 covariance matrix")
    p.add_argument("--both", action="store_true", help="closed form and numeric GGD")
    _add_common(p, optimizer=True)

    p = sub.add_parser("fig1", help="GGD vs product-state variant on random states")
    _add_common(p, n=10_000, optimizer=True)
    p.add_argument("--a-range", type=float, nargs=2, default=(1.0, 50.0))
    p.add_argument("--b-range", type=float, nargs=2, default=(1.0, 50.0))
    p.add_argument("--energy-cap", type=float, default=None)

    p = sub.add_parser("fig2-lower", help="low-family boundary curves for N = 2^k")
    _add_common(p, seed=False)
    p.add_argument("--k", type=int, nargs="+", default=list(range(1, 11)))
    p.add_argument("--grid", type=_positive_int, default=200, help="epsilon grid points per curve")

    p = sub.add_parser("fig2-upper", help="energy-independent upper boundary curve")
    _add_common(p, seed=False)
    p.add_argument("--targets", type=float, nargs="+", default=None,
                   help="target discord values (default 0.025..8 step 0.025)")
    p.add_argument("--b-max", type=float, default=ex.B_MAX)
    p.add_argument("--eps-max", type=float, default=ex.EPS_MAX)

    p = sub.add_parser("fig2-cloud", help="random squeezed thermal states under an energy cap")
    _add_common(p, n=100_000, cap=25.0)
    p.add_argument("--boundary-fraction", type=float, default=0.0,
                   help="fraction of draws placed on the physical boundary")
    return parser


def cmd_state(args, argv) -> int:
    if args.matrix:
        sigma = read_matrix(args.matrix)
    elif len(args.params) == 4:
        sigma = StandardForm(*args.params)
    else:
        raise ContractError("give a standard-form quadruple 'a b c d' or --matrix FILE")
    require_physical(sigma, args.tol)
    if isinstance(sigma, StandardForm) and not sigma.satisfies_ordering(args.tol):
        raise DomainError("standard form needs a, b >= 1 and sqrt(ab - 1) >= c >= |d|")
    sf = to_standard_form(sigma)
    report = ex.state_report(sf, both=args.both, opts=_opts(args))
    lines = [f"{key}: {value:.12g}" if isinstance(value, float) and not isinstance(value, bool)
             else f"{key}: {value}" for key, value in report.items()]
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_NOT_CONVERGED if args.strict and not report["converged"] else 0


def _meta(args, argv, **kw) -> RunMetadata:
    tolerances = {"physical": args.tol}
    tolerances.update(kw.pop("tolerances", {}))
    return RunMetadata(command=_command_line(argv), tolerances=tolerances, **kw)


def cmd_fig1(args, argv) -> int:
    cfg = SamplerConfig(seed=args.seed, energy_cap=args.energy_cap,
                        a_range=tuple(args.a_range), b_range=tuple(args.b_range))
    opts = _opts(args)
    rows = ex.fig1_rows(args.n, cfg, opts, jobs=args.jobs)
    columns = ["a", "b", "c", "d", "ggd", "ggd_alternative", "converged"]
    meta = _meta(args, argv, seed=args.seed, sampler=cfg.describe(),
                 tolerances={"optimizer": asdict(opts)})
    text = render_csv(meta, columns, rows)
    svg_text = None
    if args.svg:
        _, _, parsed = parse_csv(text)
        x, y = column(parsed, "ggd"), column(parsed, "ggd_alternative")
        top = max([v for v in x + y if v is not None] or [1.0])
        svg_text = plot([{"x": x, "y": y}, {"x": [0, top], "y": [0, top], "kind": "line", "dashed": True}],
                        "GGD", "product-state variant")
    _emit(args, text, svg_text)
    failed = sum(not r["converged"] for r in rows)
    if failed:
        print(f"warning: {failed} rows did not converge", file=sys.stderr)
    return EXIT_NOT_CONVERGED if args.strict and failed else 0


def cmd_fig2_lower(args, argv) -> int:
    rows = ex.fig2_lower_rows(args.k, args.grid)
    meta = _meta(args, argv, extra={"k": sorted(args.k), "grid": args.grid,
                                    "epsilon_grid": "uniform on [0, N - 1]"})
    text = render_csv(meta, ["N", "a", "epsilon", "discord", "ggd"], rows)
    svg_text = None
    if args.svg:
        _, _, parsed = parse_csv(text)
        series = []
        for cap in sorted({r["N"] for r in parsed}, key=float):
            sel = [r for r in parsed if r["N"] == cap]
            series.append({"x": column(sel, "discord"), "y": column(sel, "ggd"), "kind": "line"})
        svg_text = plot(series, "discord", "GGD")
    _emit(args, text, svg_text)
    return 0


def cmd_fig2_upper(args, argv) -> int:
    targets = None if args.targets is None else np.asarray(args.targets)
    rows = ex.fig2_upper_rows(targets, args.b_max, args.eps_max)
    meta = _meta(args, argv, tolerances={"b_bisection_rtol": ex.BISECT_RTOL,
                                         "eps_golden_tol": ex.GOLDEN_TOL},
                 extra={"targets": "default 0.025..8 step 0.025" if targets is None else "user",
                        "b_max": args.b_max, "eps_max": args.eps_max, "eps_scan": ex.EPS_SCAN})
    text = render_csv(meta, ["target_discord", "b", "epsilon", "ggd_max", "reachable"], rows)
    svg_text = None
    if args.svg:
        _, _, parsed = parse_csv(text)
        svg_text = plot([{"x": column(parsed, "target_discord"), "y": column(parsed, "ggd_max"),
                          "kind": "line", "dashed": True}], "discord", "GGD")
    _emit(args, text, svg_text)
    unreachable = sum(not r["reachable"] for r in rows)
    if unreachable:
        print(f"warning: {unreachable} targets unreachable with b <= {args.b_max}", file=sys.stderr)
    return 0


def cmd_fig2_cloud(args, argv) -> int:
    rows = ex.fig2_cloud_rows(args.n, args.energy_cap, args.seed, args.boundary_fraction, args.jobs)
    cfg = SamplerConfig(seed=args.seed, energy_cap=args.energy_cap, family="sts",
                        boundary_fraction=args.boundary_fraction)
    meta = _meta(args, argv, seed=args.seed, sampler=cfg.describe(),
                 tolerances={"family_match_rtol": 1e-8})
    text = render_csv(meta, ["a", "b", "c", "ggd", "discord_if_on_family", "family"], rows)
    svg_text = None
    if args.svg:
        _, _, parsed = parse_csv(text)
        sel = [r for r in parsed if r["discord_if_on_family"] != ""]
        svg_text = plot([{"x": column(sel, "discord_if_on_family"), "y": column(sel, "ggd")}],
                        "discord", "GGD")
    _emit(args, text, svg_text)
    return 0


COMMANDS = {
    "state": cmd_state,
    "fig1": cmd_fig1,
    "fig2-lower": cmd_fig2_lower,
    "fig2-upper": cmd_fig2_upper,
    "fig2-cloud": cmd_fig2_cloud,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.svg and args.out in (None, "-"):
        parser.error("--svg needs --out PATH")
    try:
        return COMMANDS[args.command](args, argv)
    except UnphysicalStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ContractError, DomainError, NumericalDegeneracyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
