"""Augmentations on mu = mu0 slices for the table knots.

For each knot and slice: number of points, their ranks and fields, whether
every full-rank point obeys the writhe constraint, and whether the E-matrix
built from each point verifies with matching rank.
"""

import argparse
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from cordcalc import augment as aug
from cordcalc.braid import knot_braid, writhe
from cordcalc.cordgroup import e_from_assignment, verify_E, wirtinger_from_braid


@dataclass
class Config:
    knots: list = field(default_factory=lambda: ["trefoil", "figure8", "5_1", "5_2", "6_2", "6_3", "7_1", "T(3,4)"])
    mu0s: list = field(default_factory=lambda: ["2", "3", "-1/2"])
    symmetric: bool = False
    budget: int = 10**6


def survey(cfg: Config):
    for name in cfg.knots:
        b = knot_braid(name)
        P = wirtinger_from_braid(b)
        for m in cfg.mu0s:
            mu0 = Fraction(m)
            t = time.time()
            sols = aug.solve_on_slice(b, mu0, symmetric=cfg.symmetric, budget=cfg.budget)
            ranks = [aug.rank(A) for A in sols]
            writhe_ok = all(abs(complex(A.lambda0 * (-A.mu0) ** writhe(b)) - 1) < 1e-9 for A, r in zip(sols, ranks) if r == b.strands)
            cross = [verify_E(P, E) and E.rank() == r for A, r in zip(sols, ranks) for E in [e_from_assignment(A, b, P)]]
            print(json.dumps({
                "knot": name, "mu0": m, "points": len(sols), "ranks": ranks,
                "fields": [A.field for A in sols], "writhe_ok": writhe_ok,
                "cross_ok": all(cross), "seconds": round(time.time() - t, 2),
            }), flush=True)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--knots", nargs="+", default=Config().knots)
    ap.add_argument("--mu0", nargs="+", default=Config().mu0s)
    ap.add_argument("--symmetric", action="store_true")
    ap.add_argument("--budget", type=int, default=Config.budget)
    a = ap.parse_args()
    survey(Config(a.knots, a.mu0, a.symmetric, a.budget))


if __name__ == "__main__":
    main()
