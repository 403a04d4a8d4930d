"""Which crossing convention makes HC0 augmentations verify as E-matrices.

A letter s_k^e swaps the strands at k and k+1; one of the two passes over.
We try both over-strand choices and both relator signs, build E from HC0
assignments of a few knots and their mirrors, and report which variant
passes verify_E.  Only the variant used by cordgroup passes everywhere.
"""

import warnings
from fractions import Fraction
from itertools import product

from cordcalc import augment as aug
from cordcalc import cordgroup as cg
from cordcalc.braid import knot_braid, mirror


def presentation(b, flip_over, flip_sign):
    n = b.strands
    current = list(range(n))
    raw, nxt = [], n
    for x in b.letters:
        k = abs(x) - 1
        e = 1 if x > 0 else -1
        left, right = current[k], current[k + 1]
        if (e > 0) != flip_over:
            over, under = left, right
            current[k], current[k + 1] = nxt, over
        else:
            over, under = right, left
            current[k], current[k + 1] = over, nxt
        raw.append((over, -e if flip_sign else e, under, nxt))
        nxt += 1
    uf = cg._UnionFind()
    for p in range(n):
        uf.union(p, current[p])
    labels = {}
    for a in range(nxt):
        labels.setdefault(uf.find(a), len(labels) + 1)

    def lab(a):
        return labels[uf.find(a)]

    rel = tuple((lab(o), e, lab(u), lab(out)) for o, e, u, out in raw)
    paths = {lab(p): (lab(p), ()) for p in range(n)}
    changed = True
    while changed:
        changed = False
        for o, e, u, out in raw:
            if lab(out) not in paths and lab(u) in paths:
                s, w = paths[lab(u)]
                paths[lab(out)] = (s, cg._free_reduce(w + ((lab(o), -e),)))
                changed = True
    return cg.WirtingerPresentation(len(labels), rel, n, tuple(paths[k] for k in range(1, len(labels) + 1)))


def main():
    variants = list(product((False, True), (False, True)))
    print("knot          rank  " + "  ".join(f"over={'R' if fo else 'L'}/sign={'-' if fs else '+'}" for fo, fs in variants))
    for name in ("trefoil", "5_1", "figure8", "T(3,4)"):
        for label, b in ((name, knot_braid(name)), ("m" + name, mirror(knot_braid(name)))):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                sols = aug.solve_on_slice(b, Fraction(2))
            for A in sols:
                row = []
                for fo, fs in variants:
                    P = presentation(b, fo, fs)
                    row.append(cg.verify_E(P, cg.e_from_assignment(A, b, P)))
                print(f"{label:12s}  {aug.rank(A):4d}  " + "  ".join(f"{str(v):>16s}" for v in row))


if __name__ == "__main__":
    main()
