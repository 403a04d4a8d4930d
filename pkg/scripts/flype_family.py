"""Rank-3 witnesses for s1^w s2^delta s1^u s2^v over a parameter grid.

Each row records the route taken, the residual on the braid that carries the
assignment, the float rank, and whether that braid closes to a knot.
"""

import argparse
import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from cordcalc import augment as aug
from cordcalc.braid import is_knot


@dataclass
class Config:
    ws: list = field(default_factory=lambda: [2, 3, -2, -3])
    deltas: list = field(default_factory=lambda: [-1, 1])
    us: list = field(default_factory=lambda: [2, 3, 4])
    vs: list = field(default_factory=lambda: [3, 4, -3])
    mu0: str = "2"


def run(cfg: Config):
    for w, d, u, v in product(cfg.ws, cfg.deltas, cfg.us, cfg.vs):
        row = {"w": w, "delta": d, "u": u, "v": v}
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                R = aug.flype_rank3(w, d, u, v, Fraction(cfg.mu0))
            row.update(route=R.route, residual=R.residual, rank=aug.rank(R.assignment), braid=list(R.braid.letters), knot=is_knot(R.braid))
        except aug.AugmentError as exc:
            row["error"] = str(exc)
        print(json.dumps(row), flush=True)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mu0", default="2")
    ap.add_argument("--quick", action="store_true", help="only the three reference instances")
    a = ap.parse_args()
    if a.quick:
        for params in ((2, -1, 2, 3), (2, -1, 3, 3), (3, 1, 2, 3)):
            run(Config(*[[x] for x in params], mu0=a.mu0))
    else:
        run(Config(mu0=a.mu0))


if __name__ == "__main__":
    main()
