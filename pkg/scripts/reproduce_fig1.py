"""Fig. 1: GGD against the product-state variant on random two-mode states.

    python3 scripts/reproduce_fig1.py --out-dir results --n 10000

Writes fig1.csv and fig1.svg. The full 10^4-state run takes about 45 min on
one core; pass --jobs to spread it over several processes.
"""

import argparse
import sys
from pathlib import Path

from ggdiscord.cli import main


def run(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", type=Path, default=Path("results"))
    parser.add_argument("--n", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args(argv)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    return main(["fig1", "--n", str(args.n), "--seed", str(args.seed), "--jobs", str(args.jobs),
                 "--out", str(args.out_dir / "fig1.csv"), "--svg"])


if __name__ == "__main__":
    sys.exit(run())
