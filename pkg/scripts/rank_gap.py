"""Decide whether Phi^L = Delta(B) has a solution for the four 3-braid knots.

Usage: python scripts/rank_gap.py [--budget N] [--nonsymmetric] [--out results.json]
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass, field

from cordcalc.augment import full_rank_solvable
from cordcalc.braid import knot_braid


@dataclass
class Config:
    knots: list = field(default_factory=lambda: ["8_17", "8_16", "10_91", "10_94"])
    budget: int = 50_000_000
    symmetric: bool = True
    out: str = ""


def run(cfg: Config):
    rows = []
    for name in cfg.knots:
        b = knot_braid(name)
        t = time.time()
        res = full_rank_solvable(b, symmetric=cfg.symmetric, budget=cfg.budget)
        row = {"knot": name, "braid": list(b.letters), "status": res.status, "seconds": round(time.time() - t, 2), **res.stats}
        print(json.dumps(row), flush=True)
        rows.append(row)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--knots", nargs="+", default=Config().knots)
    ap.add_argument("--budget", type=int, default=Config.budget)
    ap.add_argument("--nonsymmetric", action="store_true")
    ap.add_argument("--out", default="")
    a = ap.parse_args()
    cfg = Config(a.knots, a.budget, not a.nonsymmetric, a.out)
    rows = run(cfg)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            json.dump({"config": asdict(cfg), "results": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
