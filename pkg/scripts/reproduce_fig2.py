"""Fig. 2: lower boundary curves, the upper curve and the random cloud.

    python3 scripts/reproduce_fig2.py --out-dir results

Writes fig2_lower, fig2_upper and fig2_cloud as CSV and SVG, then checks that
the family points of the cloud sit between the two boundaries.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from ggdiscord.cli import main
from ggdiscord.csvio import parse_csv
from ggdiscord.experiments import lower_bound_at, upper_curve


def containment(cloud_csv: Path, cap: float) -> tuple[int, int, int]:
    _, _, rows = parse_csv(cloud_csv.read_text())
    on = [r for r in rows if r["discord_if_on_family"] != ""]
    d = np.array([float(r["discord_if_on_family"]) for r in on])
    g = np.array([float(r["ggd"]) for r in on])
    lower = np.nan_to_num(lower_bound_at(d, cap), nan=-np.inf)
    upper = upper_curve(d).ggd_max
    # the CSV holds 12 significant digits
    return len(on), int(np.sum(g < lower - 1e-9)), int(np.sum(g > upper + 1e-9))


def run(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", type=Path, default=Path("results"))
    parser.add_argument("--n", type=int, default=100_000)
    parser.add_argument("--energy-cap", type=float, default=25.0)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--boundary-fraction", type=float, default=0.1)
    args = parser.parse_args(argv)
    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)
    steps = [
        ["fig2-lower", "--out", str(out / "fig2_lower.csv"), "--svg"],
        ["fig2-upper", "--out", str(out / "fig2_upper.csv"), "--svg"],
        ["fig2-cloud", "--n", str(args.n), "--energy-cap", str(args.energy_cap), "--seed", str(args.seed),
         "--boundary-fraction", str(args.boundary_fraction), "--out", str(out / "fig2_cloud.csv"), "--svg"],
    ]
    for argv_step in steps:
        code = main(argv_step)
        if code:
            return code
    total, below, above = containment(out / "fig2_cloud.csv", args.energy_cap)
    print(f"{total} family points: {below} below the lower curve, {above} above the upper curve")
    return 0 if below == above == 0 else 1


if __name__ == "__main__":
    sys.exit(run())
