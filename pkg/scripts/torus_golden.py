"""Augmentation polynomials of 2-strand torus knots against the closed form,
plus the rank-3 slice of T(3,4).
"""

import argparse
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from cordcalc import augment as aug
from cordcalc.braid import BraidWord, torus_braid


@dataclass
class Config:
    qs: list = field(default_factory=lambda: [3, 5, 7])
    mu0s: list = field(default_factory=lambda: ["2", "-1/2", "3"])
    budget: int = 10**8


def two_strand(cfg):
    for q in cfg.qs:
        t = time.time()
        try:
            res = aug.aug_poly(BraidWord(2, (1,) * q), cfg.budget)
        except aug.BudgetExceeded:
            print(json.dumps({"q": q, "status": "inconclusive"}))
            continue
        ok = res.principal and aug.same_up_to_unit(res.poly, aug.torus_aug_poly(2, q))
        print(json.dumps({"q": q, "match": ok, "seconds": round(time.time() - t, 3), "poly": str(res.poly)}), flush=True)


def t34(cfg):
    b = torus_braid(3, 4)
    print(json.dumps({"T(3,4) fullrank": aug.full_rank_solvable(b).status}))
    for m in cfg.mu0s:
        mu0 = Fraction(m)
        for A in aug.solve_on_slice(b, mu0, symmetric=True, branches=("full_rank",)):
            if aug.rank(A) == 3:
                print(json.dumps({"mu0": m, "lambda0": str(A.lambda0), "lam0*mu0^8": str(A.lambda0 * mu0**8), "avals": A.to_json()["avals"]}))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, nargs="+", default=Config().qs)
    ap.add_argument("--budget", type=int, default=Config.budget)
    a = ap.parse_args()
    cfg = Config(qs=a.q, budget=a.budget)
    two_strand(cfg)
    t34(cfg)


if __name__ == "__main__":
    main()
