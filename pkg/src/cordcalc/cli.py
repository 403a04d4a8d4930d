"""Command-line front end.

Exit codes: 0 success or solvable, 1 unsolvable or empty, 2 inconclusive or
out of budget, 3 bad input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from . import augment as aug
from .braid import BraidError, BraidWord, knot_braid, parse_braid
from .cordgroup import (
    CordGroupError,
    connect_sum_E,
    e_from_assignment,
    merge_presentations,
    verify_E,
    wirtinger_from_braid,
)
from .groebner import DEFAULT_BUDGET, BudgetExceeded
from .hc0 import ideal_generators
from .phi import chain_compose, chain_compose_R

EXIT_OK, EXIT_EMPTY, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    braid: BraidWord | None = None
    symmetric: bool = False
    reduced: bool = True
    budget: int = DEFAULT_BUDGET
    tolerance: float = aug.TOL
    as_json: bool = False
    as_float: bool = False
    mu0: list = field(default_factory=list)

    def __post_init__(self):
        if self.budget <= 0:
            raise InputError("--budget must be positive")


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _add_braid(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--braid", help='braid word, e.g. "1 1 1" or "s1^2 s2^-1"')
    g.add_argument("--knot", help="name from the bundled knot table, or T(p,q)")
    p.add_argument("--strands", type=int, help="strand count (default: max index + 1)")


def _add_common(p):
    p.add_argument("--json", action="store_true", help="emit JSON")
    p.add_argument("--float", action="store_true", help="print exact values as floats")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="Groebner reduction-step budget")
    p.add_argument("--tolerance", type=float, default=aug.TOL)


def build_parser():
    ap = argparse.ArgumentParser(prog="cordcalc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phi", help="print Phi^L or Phi^R")
    _add_braid(p)
    p.add_argument("--side", choices=["L", "R"], default="L")
    _add_common(p)

    p = sub.add_parser("ideal", help="HC0 ideal generators")
    _add_braid(p)
    p.add_argument("--unreduced", action="store_true", help="include A - Lam phi(A) Lam^-1")
    _add_common(p)

    p = sub.add_parser("augpoly", help="augmentation polynomial by elimination")
    _add_braid(p)
    p.add_argument("--expect-torus", nargs=2, type=int, metavar=("P", "Q"))
    _add_common(p)

    p = sub.add_parser("fullrank", help="decide Phi^L = Delta")
    _add_braid(p)
    p.add_argument("--nonsymmetric", action="store_true", help="use a_ij and a_ji as separate variables")
    _add_common(p)

    p = sub.add_parser("slice", help="augmentations at fixed mu0")
    _add_braid(p)
    p.add_argument("--mu0", type=_fraction, action="append", required=True)
    p.add_argument("--symmetric", action="store_true")
    _add_common(p)

    p = sub.add_parser("rank", help="verify an assignment and report its rank")
    _add_braid(p)
    p.add_argument("--assignment", required=True, help="JSON file")
    _add_common(p)

    p = sub.add_parser("extend", help="rank n+1 augmentation from a rank n one")
    _add_braid(p)
    p.add_argument("--base", required=True, help="JSON file with a symmetric rank-n assignment")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--delta", type=int, choices=[-1, 1], required=True)
    _add_common(p)

    p = sub.add_parser("flype", help="rank-3 augmentation of s1^w s2^delta s1^u s2^v")
    for name in ("w", "u", "v"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--delta", type=int, choices=[-1, 1], required=True)
    p.add_argument("--mu0", type=_fraction, default=Fraction(2))
    _add_common(p)

    p = sub.add_parser("connectsum", help="E-matrix of a connect sum")
    p.add_argument("--left", required=True, help="JSON file {braid, strands, assignment} or knot:NAME")
    p.add_argument("--right", required=True, help="same as --left")
    p.add_argument("--mu0", type=_fraction, default=Fraction(2), help="slice used for knot:NAME sources")
    _add_common(p)

    p = sub.add_parser("verify", help="run the built-in property checks")
    p.add_argument("--random", type=int, default=50, help="number of random braids")
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    return ap


# ---------------------------------------------------------------- helpers


def _braid(args) -> BraidWord:
    if getattr(args, "knot", None):
        b = knot_braid(args.knot)
        if args.strands and args.strands != b.strands:
            b = BraidWord(args.strands, b.letters)
        return b
    return parse_braid(args.braid, args.strands)


def _fmt(x, as_float):
    if isinstance(x, Fraction) and not as_float:
        return str(x)
    z = complex(x)
    if abs(z.imag) < 1e-15:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}j"


def _assignment_json(A, as_float):
    if as_float and A.exact:
        A = A.to_float()
    return A.to_json()


def _emit(cfg: RunConfig, payload, lines):
    if cfg.as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _assignment_lines(A, as_float):
    out = [f"  field={A.field} mu0={_fmt(A.mu0, as_float)} lambda0={_fmt(A.lambda0, as_float)} rank={aug.rank(A)}"]
    for (i, j), v in sorted(A.avals.items()):
        out.append(f"    a{i},{j} = {_fmt(v, as_float)}")
    return out


# ---------------------------------------------------------------- subcommands


def cmd_phi(cfg, args):
    b = cfg.braid
    M = chain_compose(b) if args.side == "L" else chain_compose_R(b)
    lines = [f"Phi^{args.side} for {b}:"] + ["  [" + ", ".join(str(p) for p in row) + "]" for row in M.rows]
    _emit(cfg, {"braid": list(b.letters), "strands": b.strands, "side": args.side, "matrix": M.to_json()}, lines)
    return EXIT_OK


def cmd_ideal(cfg, args):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        pres = ideal_generators(cfg.braid, reduced=cfg.reduced)
    lines = [str(w.message) for w in caught] + [str(p) for p in pres.generators]
    _emit(cfg, pres.to_json(), lines)
    return EXIT_OK


def cmd_augpoly(cfg, args):
    res = aug.aug_poly(cfg.braid, cfg.budget)
    payload = {"braid": list(cfg.braid.letters), "principal": res.principal, "generators": [str(g) for g in res.generators]}
    lines = [f"Aug = {res.poly}" if res.principal else "elimination ideal is not principal:"]
    if not res.principal:
        lines += [f"  {g}" for g in res.generators]
    if args.expect_torus:
        p, q = args.expect_torus
        want = aug.torus_aug_poly(p, q)
        ok = res.principal and aug.same_up_to_unit(res.poly, want)
        payload["expected"] = str(want)
        payload["match"] = bool(ok)
        lines.append("MATCH (up to sign)" if ok else f"MISMATCH: expected {want}")
        _emit(cfg, payload, lines)
        return EXIT_OK if ok else EXIT_EMPTY
    _emit(cfg, payload, lines)
    return EXIT_OK


def cmd_fullrank(cfg, args):
    res = aug.full_rank_solvable(cfg.braid, symmetric=not args.nonsymmetric, budget=cfg.budget)
    payload = {"braid": list(cfg.braid.letters), "status": res.status, "stats": res.stats}
    stats = " ".join(f"{k}={v}" for k, v in sorted(res.stats.items()))
    _emit(cfg, payload, [res.status, f"  {stats}"])
    return {"solvable": EXIT_OK, "unsolvable": EXIT_EMPTY}.get(res.status, EXIT_BUDGET)


def cmd_slice(cfg, args):
    payload, lines, total = [], [], 0
    for mu0 in cfg.mu0:
        sols = aug.solve_on_slice(cfg.braid, mu0, symmetric=args.symmetric, budget=cfg.budget)
        total += len(sols)
        payload.append({"mu0": str(mu0), "solutions": [_assignment_json(A, cfg.as_float) for A in sols]})
        lines.append(f"mu0 = {mu0}: {len(sols)} solution(s)")
        for A in sols:
            lines += _assignment_lines(A, cfg.as_float)
    _emit(cfg, payload, lines)
    return EXIT_OK if total else EXIT_EMPTY


def cmd_rank(cfg, args):
    A = aug.AugAssignment.from_json(_load_json(args.assignment))
    ok = aug.check_augmentation(cfg.braid, A, cfg.tolerance)
    res = aug.augmentation_residual(cfg.braid, A)
    r = aug.rank(A)
    _emit(cfg, {"verified": ok, "residual": res, "rank": r}, [f"verified={ok} residual={res:.3g} rank={r}"])
    return EXIT_OK if ok else EXIT_EMPTY


def cmd_extend(cfg, args):
    data = _load_json(args.base)
    base = aug.AugAssignment.from_json(data.get("assignment", data))
    A = aug.extend_rank(cfg.braid, base, args.i, args.u, args.v, args.delta)
    big = aug._extended_braid(cfg.braid, args.i, args.u, args.v, args.delta)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = aug.augmentation_residual(big, A)
    payload = {"braid": list(big.letters), "strands": big.strands, "residual": res, "rank": aug.rank(A), "assignment": A.to_json()}
    _emit(cfg, payload, [f"braid {big}", f"residual {res:.3g}"] + _assignment_lines(A, True))
    return EXIT_OK


def cmd_flype(cfg, args):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        R = aug.flype_rank3(args.w, args.delta, args.u, args.v, args.mu0)
    lines = [f"braid {R.braid} ({R.route})", f"residual {R.residual:.3g}"] + _assignment_lines(R.assignment, True)
    _emit(cfg, R.to_json(), lines)
    return EXIT_OK


def _summand(spec, mu0, budget):
    if spec.startswith("knot:"):
        b = knot_braid(spec[5:])
        sols = [A for A in aug.solve_on_slice(b, mu0, budget=budget) if A.exact]
        if not sols:
            raise InputError(f"no exact augmentation of {spec} at mu0={mu0}")
        A = max(sols, key=lambda s: (aug.rank(s), str(s.to_json())))
    else:
        data = _load_json(spec)
        b = BraidWord(data["strands"], tuple(data["braid"]))
        A = aug.AugAssignment.from_json(data["assignment"])
    if not aug.check_augmentation(b, A):
        raise InputError(f"assignment in {spec} does not verify")
    P = wirtinger_from_braid(b)
    return P, e_from_assignment(A, b, P)


def cmd_connectsum(cfg, args):
    P1, E1 = _summand(args.left, args.mu0, cfg.budget)
    P2, E2 = _summand(args.right, args.mu0, cfg.budget)
    E = connect_sum_E(E1, E2)
    P = merge_presentations(P1, P2)
    ok = verify_E(P, E, cfg.tolerance)
    r1, r2, r = E1.rank(), E2.rank(), E.rank()
    payload = {"ranks": [r1, r2, r], "verified": ok, "E": E.to_json(), "presentation": P.to_json()}
    lines = [f"rank {r1} # rank {r2} -> rank {r} (size {E.r})", f"verify_E: {ok}"]
    _emit(cfg, payload, lines)
    return EXIT_OK if ok else EXIT_EMPTY


def run_verify(count=50, seed=0, out=print):
    """Property checks over random braids plus the closed-form oracles; returns failures."""
    from .phi import abelian_phi, check_chain_rule, check_inverse, check_sandwich, check_transpose_bar

    rng = random.Random(seed)
    failures = 0

    def report(name, ok):
        nonlocal failures
        failures += not ok
        out(f"{'PASS' if ok else 'FAIL'} {name}")

    def rand_braid(n, length):
        return BraidWord(n, tuple(rng.choice([1, -1]) * rng.randint(1, n - 1) for _ in range(length)))

    ok = True
    for _ in range(count):
        n = rng.randint(2, 4)
        b1, b2 = rand_braid(n, rng.randint(0, 3)), rand_braid(n, rng.randint(0, 3))
        b = BraidWord(n, b1.letters + b2.letters)
        det = abelian_phi(b, side="R").det()
        ok &= check_chain_rule(b1, b2) and check_inverse(b) and check_transpose_bar(b) and check_sandwich(b)
        ok &= det == (-1) ** len(b)
    report(f"structure identities on {count} random braids", bool(ok))
    report("P_k recurrence, degree and parity for k <= 12", all(aug.pk_poly(k).degree == k and aug.pk_poly(k).parity_ok() for k in range(13)))
    for q in (3, 5):
        res = aug.aug_poly(BraidWord(2, (1,) * q))
        report(f"Aug of T(2,{q}) matches the torus formula", res.principal and aug.same_up_to_unit(res.poly, aug.torus_aug_poly(2, q)))
    tref = BraidWord(2, (1, 1, 1))
    sols = aug.solve_on_slice(tref, Fraction(2))
    report("trefoil slice: every point verifies", bool(sols) and all(aug.check_augmentation(tref, A) for A in sols))
    top = [A for A in sols if aug.rank(A) == 2]
    report("trefoil rank-2 point satisfies the writhe constraint", bool(top) and all(A.lambda0 * (-A.mu0) ** 3 == 1 for A in top))
    if top:
        P = wirtinger_from_braid(tref)
        E = e_from_assignment(top[0], tref, P)
        S = connect_sum_E(E, E)
        report("trefoil # trefoil has rank 3 and verifies", S.rank() == 3 and verify_E(merge_presentations(P, P), S))
    return failures


def cmd_verify(cfg, args):
    lines = []
    failures = run_verify(args.random, args.seed, out=lines.append)
    _emit(cfg, {"failures": failures, "checks": lines}, lines)
    return EXIT_OK if failures == 0 else EXIT_EMPTY


COMMANDS = {
    "phi": cmd_phi,
    "ideal": cmd_ideal,
    "augpoly": cmd_augpoly,
    "fullrank": cmd_fullrank,
    "slice": cmd_slice,
    "rank": cmd_rank,
    "extend": cmd_extend,
    "flype": cmd_flype,
    "connectsum": cmd_connectsum,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        braid = _braid(args) if hasattr(args, "braid") else None
        cfg = RunConfig(
            command=args.command,
            braid=braid,
            reduced=not getattr(args, "unreduced", False),
            budget=args.budget,
            tolerance=args.tolerance,
            as_json=args.json,
            as_float=args.float,
            mu0=getattr(args, "mu0", None) if isinstance(getattr(args, "mu0", None), list) else [],
        )
        return COMMANDS[args.command](cfg, args)
    except BudgetExceeded as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, BraidError, aug.AugmentError, CordGroupError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
