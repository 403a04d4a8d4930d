"""Augmentations of HC0 at U = 1: systems, verification, rank, construction.

An augmentation is stored as values for mu, lambda and every a_ij.  Checking
one never expands polynomials: a field-valued map kills commutators, so
``epsilon o phi_B`` can be pushed through the word letter by letter (see
:func:`cordcalc.phi.evaluate_phi`).  Groebner bases are used only where an
ideal has to be decided or eliminated.

Two fields are supported.  ``exact-rational`` values are ``Fraction``; the
``complex-float`` field holds Python complex numbers and is always re-checked
against a residual tolerance.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from .braid import BraidWord, band_generator, closure_permutation, concat, from_letters, include, power, writhe
from .groebner import Budget, BudgetExceeded, MonomialOrder, buchberger, eliminate, fglm
from .hc0 import abelian_generators
from .phi import abelian_phi, evaluate_phi
from .ring import CommPoly, PolyRing, a_var_name, a_var_names, gen

__all__ = [
    "EXACT",
    "FLOAT",
    "TOL",
    "SV_RATIO",
    "AugmentError",
    "AugAssignment",
    "AugSystem",
    "FullRankResult",
    "AugPolyResult",
    "PkPoly",
    "FlypeResult",
    "clear_laurent",
    "aug_system",
    "augmentation_residual",
    "check_augmentation",
    "matrix_rank",
    "rank",
    "full_rank_system",
    "full_rank_solvable",
    "solve_full_rank",
    "writhe_lambda",
    "pk_poly",
    "aug_poly",
    "torus_aug_poly",
    "same_up_to_unit",
    "solve_on_slice",
    "extend_rank",
    "flype_rank3",
]

log = logging.getLogger(__name__)

EXACT = "exact-rational"
FLOAT = "complex-float"
TOL = 1e-9
SV_RATIO = 1e-8


class AugmentError(ValueError):
    pass


def _is_exact(x):
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _to_field(x, fld):
    if fld == EXACT:
        if not _is_exact(x):
            raise AugmentError(f"{x!r} is not an exact rational")
        return Fraction(x)
    return complex(x)


def _value_str(x):
    if isinstance(x, Fraction):
        return str(x)
    return [float(x.real), float(x.imag)]


def _parse_value(v, fld):
    if fld == EXACT:
        return Fraction(v)
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


# ---------------------------------------------------------------- assignments


@dataclass(frozen=True)
class AugAssignment:
    """Values ``mu0``, ``lambda0`` and ``avals[(i, j)]`` for every ordered pair i != j."""

    field: str
    mu0: object
    lambda0: object
    avals: dict
    n: int
    symmetric: bool = False

    def __post_init__(self):
        if self.field not in (EXACT, FLOAT):
            raise AugmentError(f"unknown field {self.field!r}")
        fld = self.field
        mu0 = _to_field(self.mu0, fld)
        lam0 = _to_field(self.lambda0, fld)
        vals = {}
        for (i, j), v in self.avals.items():
            if i == j or not (1 <= i <= self.n and 1 <= j <= self.n):
                raise AugmentError(f"bad generator index ({i},{j}) for n={self.n}")
            vals[(i, j)] = _to_field(v, fld)
        if self.symmetric:
            for (i, j), v in list(vals.items()):
                if (j, i) not in vals:
                    vals[(j, i)] = v
        missing = [(i, j) for i in range(1, self.n + 1) for j in range(1, self.n + 1) if i != j and (i, j) not in vals]
        if missing:
            raise AugmentError(f"missing values for {missing}")
        if fld == EXACT:
            if mu0 in (0, 1):
                raise AugmentError("mu0 must avoid 0 and 1")
            if lam0 == 0:
                raise AugmentError("lambda0 must be nonzero")
            if self.symmetric and any(vals[(i, j)] != vals[(j, i)] for (i, j) in vals):
                raise AugmentError("symmetric assignment with a_ij != a_ji")
        else:
            if abs(mu0) < TOL or abs(mu0 - 1) < TOL:
                raise AugmentError("mu0 must avoid 0 and 1")
            if abs(lam0) < TOL:
                raise AugmentError("lambda0 must be nonzero")
            if self.symmetric and any(abs(vals[(i, j)] - vals[(j, i)]) > TOL for (i, j) in vals):
                raise AugmentError("symmetric assignment with a_ij != a_ji")
        object.__setattr__(self, "mu0", mu0)
        object.__setattr__(self, "lambda0", lam0)
        object.__setattr__(self, "avals", vals)

    @property
    def exact(self):
        return self.field == EXACT

    def gen_values(self):
        return {gen(i, j): v for (i, j), v in self.avals.items()}

    def eps_A(self):
        """The matrix epsilon(A)."""
        n, mu = self.n, self.mu0
        one = Fraction(1) if self.exact else 1.0
        return [
            [(one - mu) if i == j else (self.avals[(i, j)] if i < j else -mu * self.avals[(i, j)]) for j in range(1, n + 1)]
            for i in range(1, n + 1)
        ]

    def to_float(self):
        return AugAssignment(FLOAT, complex(self.mu0), complex(self.lambda0), {k: complex(v) for k, v in self.avals.items()}, self.n, self.symmetric)

    def to_json(self):
        return {
            "field": self.field,
            "n": self.n,
            "symmetric": self.symmetric,
            "mu0": _value_str(self.mu0),
            "lambda0": _value_str(self.lambda0),
            "avals": {a_var_name(i, j, False).replace("x", "a", 1): _value_str(v) for (i, j), v in sorted(self.avals.items())},
        }

    @classmethod
    def from_json(cls, data):
        fld = data["field"]
        avals = {}
        for name, v in data["avals"].items():
            from .ring import gen_ij, parse_gen

            avals[gen_ij(parse_gen(name))] = _parse_value(v, fld)
        n = data.get("n") or (max(max(k) for k in avals) if avals else 1)
        return cls(fld, _parse_value(data["mu0"], fld), _parse_value(data["lambda0"], fld), avals, n, data.get("symmetric", False))


# ---------------------------------------------------------------- verification


def _matmul(X, Y):
    n = len(X)
    return [[sum(X[i][k] * Y[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _residual_entries(b: BraidWord, A: AugAssignment):
    if A.n != b.strands:
        raise AugmentError(f"assignment has n={A.n} but the braid has {b.strands} strands")
    n = b.strands
    L, R = evaluate_phi(b, A.gen_values())
    EA = A.eps_A()
    top = A.lambda0 * A.mu0 ** writhe(b)
    LA = _matmul(L, EA)
    AR = _matmul(EA, R)
    out = []
    for i in range(n):
        for j in range(n):
            s = top if i == 0 else 1
            out.append(EA[i][j] - s * LA[i][j])
            out.append(EA[i][j] - AR[i][j] / (top if j == 0 else 1))
    return out


def augmentation_residual(b: BraidWord, A: AugAssignment) -> float:
    """Largest absolute value of an HC0 ideal generator at ``A``."""
    return max((abs(complex(r)) for r in _residual_entries(b, A)), default=0.0)


def check_augmentation(b: BraidWord, A: AugAssignment, tol: float = TOL) -> bool:
    if A.exact:
        return all(r == 0 for r in _residual_entries(b, A))
    return augmentation_residual(b, A) < tol


def _bareiss_rank(M):
    rows = []
    for row in M:
        den = 1
        for x in row:
            den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
        rows.append([int(Fraction(x) * den) for x in row])
    if not rows:
        return 0
    m, ncols = len(rows), len(rows[0])
    r, prev = 0, 1
    for c in range(ncols):
        piv = next((k for k in range(r, m) if rows[k][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for k in range(r + 1, m):
            for j in range(c + 1, ncols):
                rows[k][j] = (rows[r][c] * rows[k][j] - rows[k][c] * rows[r][j]) // prev
            rows[k][c] = 0
        prev = rows[r][c]
        r += 1
        if r == m:
            break
    return r


def matrix_rank(M, exact: bool | None = None) -> int:
    """Bareiss elimination for rationals, singular-value ratio for floats."""
    if exact is None:
        exact = all(_is_exact(x) for row in M for x in row)
    if exact:
        return _bareiss_rank(M)
    s = np.linalg.svd(np.array(M, dtype=complex), compute_uv=False)
    if not len(s) or s[0] == 0:
        return 0
    return int(np.sum(s > SV_RATIO * s[0]))


def rank(A: AugAssignment, n: int | None = None) -> int:
    if n is not None and n != A.n:
        raise AugmentError(f"assignment has n={A.n}, asked for {n}")
    return matrix_rank(A.eps_A(), A.exact)


# ---------------------------------------------------------------- systems


@dataclass(frozen=True)
class AugSystem:
    braid: BraidWord
    ring: PolyRing
    generators: tuple
    symmetric: bool = False

    @property
    def variables(self):
        return list(self.ring.names)


def clear_laurent(p: CommPoly) -> CommPoly:
    """Multiply by the least monomial in lam, mu making every exponent nonnegative.

    Expects ``lam_inv``/``mu_inv`` to carry negative powers, with at most one
    of each pair present per term.  The result uses ``lam`` and ``mu`` only.
    """
    ring = p.ring
    if not p:
        return p
    pairs = [(ring.index[a], ring.index[b]) for a, b in (("lam", "lam_inv"), ("mu", "mu_inv"))]
    shift = [min(e[a] - e[b] for e in p.terms) for a, b in pairs]
    out = {}
    for e, c in p.terms.items():
        f = list(e)
        for (a, b), s in zip(pairs, shift):
            f[a] = e[a] - e[b] - s
            f[b] = 0
        out[tuple(f)] = c
    return CommPoly(ring, out)


def _knot_guard(b):
    if closure_permutation(b)[1] != 1:
        raise AugmentError(f"closure of {b} is a link, not a knot")


def _dedupe(polys):
    seen, out = set(), []
    for p in polys:
        if not p:
            continue
        q = p.content_normalized()
        if q not in seen:
            seen.add(q)
            out.append(q)
    return out


@lru_cache(maxsize=64)
def aug_system(b: BraidWord, symmetric: bool = False) -> AugSystem:
    """Abelianized, Laurent-cleared HC0 generators plus lam*lam_inv - 1, mu*mu_inv - 1."""
    _knot_guard(b)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ring, gens = abelian_generators(b, symmetric)
    polys = _dedupe(clear_laurent(g) for g in gens)
    polys.append(ring.var("lam") * ring.var("lam_inv") - 1)
    polys.append(ring.var("mu") * ring.var("mu_inv") - 1)
    return AugSystem(b, ring, tuple(polys), symmetric)


def full_rank_system(b: BraidWord, symmetric: bool = True) -> AugSystem:
    """Entries of Phi^L_b - Delta(b) in the a-variables (n^2 of them, zeros kept)."""
    n = b.strands
    PL = abelian_phi(b, symmetric)
    ring = PL.rows[0][0].ring
    sign = -1 if writhe(b) % 2 else 1
    gens = []
    for i in range(n):
        for j in range(n):
            d = (sign if i == 0 else 1) if i == j else 0
            gens.append(PL.rows[i][j] - d)
    return AugSystem(b, ring, tuple(gens), symmetric)


@dataclass
class FullRankResult:
    status: str
    stats: dict = field(default_factory=dict)

    def __str__(self):
        return self.status


def full_rank_solvable(b: BraidWord, symmetric: bool = True, budget=None) -> FullRankResult:
    """``solvable``, ``unsolvable`` (Groebner basis is {1}) or ``inconclusive`` (budget)."""
    system = full_rank_system(b, symmetric)
    gens = [g for g in system.generators if g]
    stats = {"variables": len(system.ring), "generators": len(gens)}
    if not gens:
        return FullRankResult("solvable", stats | {"basis_size": 0})
    if any(g.is_constant() for g in gens):
        return FullRankResult("unsolvable", stats | {"basis_size": 1})
    try:
        gb = buchberger(gens, MonomialOrder("grevlex"), budget)
    except BudgetExceeded as exc:
        return FullRankResult("inconclusive", stats | {"reason": str(exc)})
    stats |= {"basis_size": len(gb)} | gb.stats
    return FullRankResult("unsolvable" if gb.is_trivial() else "solvable", stats)


def writhe_lambda(mu0, w: int):
    """The value (-mu0)^(-w) forced on lambda by a full-rank augmentation."""
    if mu0 == 0:
        raise AugmentError("mu0 must be nonzero")
    base = Fraction(-mu0) if _is_exact(mu0) else -complex(mu0)
    return base ** (-w)


# ---------------------------------------------------------------- P_k


@dataclass(frozen=True)
class PkPoly:
    """``coeffs[d]`` is the coefficient of x^d."""

    k: int
    coeffs: tuple

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, x):
        total = 0
        for c in reversed(self.coeffs):
            total = total * x + c
        return total

    def parity_ok(self):
        return all(c == 0 for d, c in enumerate(self.coeffs) if d % 2 != self.k % 2)

    def roots(self):
        if self.degree == 0:
            return []
        return sorted(np.roots(list(reversed(self.coeffs))).astype(complex), key=lambda z: (round(z.real, 12), round(z.imag, 12)))

    def __str__(self):
        terms = []
        for d, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if d == 0 else f"{c}*x^{d}" if d > 1 else f"{c}*x")
        return " + ".join(terms) or "0"


@lru_cache(maxsize=None)
def pk_poly(k: int) -> PkPoly:
    if k < 0:
        raise AugmentError("P_k needs k >= 0")
    if k == 0:
        return PkPoly(0, (1,))
    if k == 1:
        return PkPoly(1, (0, -1))
    a, b = pk_poly(k - 2).coeffs, pk_poly(k - 1).coeffs
    # x * P_{k-1}(-x): coefficient of x^(d+1) is b_d * (-1)^d
    out = [0] * (k + 1)
    for d, c in enumerate(a):
        out[d] += c
    for d, c in enumerate(b):
        out[d + 1] -= c * (-1) ** d
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return PkPoly(k, tuple(out))


# ---------------------------------------------------------------- augmentation polynomial

LAM_MU = PolyRing(["lam", "mu"])


def _strip_monomial(p: CommPoly) -> CommPoly:
    m = [min(e[k] for e in p.terms) for k in range(len(p.ring))]
    return CommPoly(p.ring, {tuple(x - y for x, y in zip(e, m)): c for e, c in p.terms.items()})


def normalize_lm(p: CommPoly) -> CommPoly:
    """Content 1, no monomial factor, positive leading coefficient in lex lam > mu."""
    if not p:
        return p
    return _strip_monomial(p).content_normalized()


def same_up_to_unit(p: CommPoly, q: CommPoly) -> bool:
    """Equal after dividing out monomials and an overall sign."""
    if not p or not q:
        return not p and not q
    return normalize_lm(p) == normalize_lm(q.to_ring(p.ring))


@dataclass
class AugPolyResult:
    poly: CommPoly | None
    generators: list
    stats: dict = field(default_factory=dict)

    @property
    def principal(self):
        return self.poly is not None


def aug_poly(b: BraidWord, budget=None, symmetric: bool = False) -> AugPolyResult:
    """Eliminate the a-variables and inverse variables from the augmentation system."""
    system = aug_system(b, symmetric)
    drop = [s for s in system.ring.names if s not in ("lam", "mu")]
    budget = budget if isinstance(budget, Budget) else Budget(10**6 if budget is None else int(budget))
    elim = eliminate(list(system.generators), drop, budget)
    gens = [normalize_lm(g.to_ring(LAM_MU)) for g in elim]
    gens = sorted(set(gens), key=lambda g: (g.degree(), str(g)))
    poly = gens[0] if len(gens) == 1 else None
    return AugPolyResult(poly, gens, {"steps": budget.used})


def torus_aug_poly(p: int, q: int) -> CommPoly:
    """Closed form for T(p, q), expanded."""
    if not (0 < p < q) or gcd(p, q) != 1:
        raise AugmentError(f"T({p},{q}) needs 0 < p < q coprime")
    R = LAM_MU
    lam, mu = R.var("lam"), R.var("mu")
    out = (1 - mu) * (lam * R.var("mu", (p - 1) * q) + (-1) ** p)
    for k in range(1, p):
        out = out * (R.var("lam", k) * R.var("mu", (k - 1) * p * q) - 1)
    return out


# ---------------------------------------------------------------- solving


def _leading_exp(p: CommPoly, key):
    return min(p.terms, key=key)


def _univariate(p: CommPoly, k: int, known: dict):
    """Coefficient list (ascending) of p in variable k after substituting ``known``."""
    coeffs: dict = {}
    for e, c in p.terms.items():
        t = c
        for idx, x in enumerate(e):
            if x and idx != k:
                t = t * known[idx] ** x
        coeffs[e[k]] = coeffs.get(e[k], 0) + t
    deg = max((d for d, c in coeffs.items() if c != 0), default=-1)
    return [coeffs.get(d, 0) for d in range(deg + 1)]


def _horner(cs, x):
    total = 0
    for c in reversed(cs):
        total = total * x + c
    return total


def _poly_gcd_q(a, b):
    def trim(p):
        while p and p[-1] == 0:
            p = p[:-1]
        return p

    a, b = trim([Fraction(x) for x in a]), trim([Fraction(x) for x in b])
    while b:
        r = list(a)
        while len(r) >= len(b) and r:
            f = r[-1] / b[-1]
            s = len(r) - len(b)
            for i, c in enumerate(b):
                r[s + i] -= f * c
            r = trim(r[:-1])
        a, b = b, r
    return a


def _roots(cs):
    cs = [complex(c) for c in cs]
    if len(cs) <= 1:
        return []
    return list(np.roots(cs[::-1]))


def _rational_roots(cs):
    """Exact rational roots of a rational polynomial, plus the leftover complex roots."""
    exact, rest = [], []
    for z in _roots(cs):
        if abs(z.imag) < 1e-6:
            r = Fraction(z.real).limit_denominator(10**6)
            if _horner(cs, r) == 0:
                if r not in exact:
                    exact.append(r)
                continue
        rest.append(complex(z))
    return exact, rest


def _cluster(zs, tol=1e-7):
    out = []
    for z in zs:
        if all(abs(z - w) > tol * max(1, abs(w)) for w in out):
            out.append(z)
    return out


def _back_substitute(gb, ring):
    """All points of a zero-dimensional lex Groebner basis, last variable first."""
    nv = len(ring)
    by_var = {k: [] for k in range(nv)}
    for g in gb:
        top = min(k for e in g.terms for k, x in enumerate(e) if x) if not g.is_constant() else nv
        if top < nv:
            by_var[top].append(g)
    partial = [{}]
    for k in range(nv - 1, -1, -1):
        nxt = []
        for known in partial:
            exact = all(_is_exact(v) for v in known.values())
            polys = [_univariate(g, k, known) for g in by_var[k]]
            if exact:
                polys = [[Fraction(c) for c in cs] for cs in polys]
                polys = [cs for cs in polys if any(cs)]
                if not polys:
                    raise AugmentError(f"variable {ring.names[k]} is not determined")
                g = polys[0]
                for cs in polys[1:]:
                    g = _poly_gcd_q(g, cs)
                rat, rest = _rational_roots(g)
                cands = [*rat, *_cluster(rest)]
            else:
                polys = [[complex(c) for c in cs] for cs in polys]
                polys = [cs for cs in polys if max(map(abs, cs), default=0) > 1e-12]
                if not polys:
                    raise AugmentError(f"variable {ring.names[k]} is not determined")
                base = min((cs for cs in polys if len(cs) > 1), key=len, default=None)
                if base is None:
                    continue
                cands = []
                for z in _cluster(_roots(base)):
                    scale = [max(1.0, max(abs(c) * max(1.0, abs(z)) ** d for d, c in enumerate(cs))) for cs in polys]
                    if all(abs(_horner(cs, z)) <= 1e-6 * s for cs, s in zip(polys, scale)):
                        cands.append(z)
            for z in cands:
                nxt.append({**known, k: z})
        partial = nxt
    return partial


def _pure_power_vars(gb, key):
    out = set()
    for g in gb:
        e = _leading_exp(g, key)
        used = [k for k, x in enumerate(e) if x]
        if len(used) == 1:
            out.add(used[0])
    return out


FREE_VALUES = (Fraction(0), Fraction(1), Fraction(-1), Fraction(2))


def _solve_polys(polys, ring, budget, free_candidates, depth=0):
    """Points of V(polys) as dicts name -> value; positive-dimensional parts are sliced."""
    polys = [p for p in polys if p]
    if not polys:
        if not free_candidates:
            return [{}]
        polys = [ring.zero()]
    if any(p.is_constant() for p in polys):
        return []
    # grevlex is far cheaper than lex; it decides triviality and dimension
    order = MonomialOrder("grevlex")
    gbr = buchberger(polys, order, budget)
    if gbr.is_trivial():
        return []
    gb = gbr.generators
    pure = _pure_power_vars(gb, order.key_function(len(ring)))
    free = [k for k in range(len(ring)) if k not in pure and ring.names[k] in free_candidates]
    if len(pure) == len(ring):
        lex = fglm(gbr, MonomialOrder("lex"), budget)
        pts = _back_substitute(lex.generators, ring)
        return [{ring.names[k]: v for k, v in pt.items()} for pt in pts]
    if not free:
        log.warning("positive-dimensional component with no variable left to slice; skipped")
        return []
    k = free[-1]
    name = ring.names[k]
    out = []
    for val in FREE_VALUES:
        sub = [g.substitute({name: val}) for g in gb]
        for pt in _solve_polys(sub, ring, budget, [s for s in free_candidates if s != name], depth + 1):
            pt[name] = val
            out.append(pt)
    return out


def _newton(fs, jac, x, iters=60, tol=1e-14):
    """Gauss-Newton with complex unknowns; returns the polished vector."""
    x = np.array(x, dtype=complex)
    for _ in range(iters):
        F = np.array(fs(x), dtype=complex)
        if not np.all(np.isfinite(F)) or np.max(np.abs(F), initial=0.0) < tol:
            break
        J = np.array(jac(x), dtype=complex)
        dx = np.linalg.lstsq(J, -F, rcond=None)[0]
        x = x + dx
        if np.max(np.abs(dx), initial=0.0) < 1e-16:
            break
    return x


def _poly_newton(polys, names, point):
    """Polish ``point`` (dict) on ``polys`` using exact partial derivatives."""
    grads = [[p.diff(s) for s in names] for p in polys]
    base = dict(point)

    def full(x):
        return {**base, **dict(zip(names, x))}

    def fs(x):
        pt = full(x)
        return [p.evaluate(pt) for p in polys]

    def jac(x):
        pt = full(x)
        return [[d.evaluate(pt) for d in row] for row in grads]

    x = _newton(fs, jac, [complex(point[s]) for s in names])
    return full(x)


NEWTON_STARTS = 48


def _newton_multistart(polys, names, starts=NEWTON_STARTS, seed=0, tol=1e-10):
    """Float points of V(polys) from seeded random complex starts."""
    rng = np.random.default_rng(seed)
    grads = [[p.diff(s) for s in names] for p in polys]

    def fs(x):
        pt = dict(zip(names, x))
        return [p.evaluate(pt) for p in polys]

    def jac(x):
        pt = dict(zip(names, x))
        return [[d.evaluate(pt) for d in row] for row in grads]

    found = []
    for _ in range(starts):
        x0 = rng.normal(size=len(names)) + 1j * rng.normal(size=len(names))
        with np.errstate(all="ignore"):
            x = _newton(fs, jac, x0)
            res = np.max(np.abs(np.array(fs(x), dtype=complex)), initial=0.0)
        if np.all(np.isfinite(x)) and res < tol:
            if all(np.max(np.abs(x - y)) > 1e-6 for y in found):
                found.append(x)
    return [dict(zip(names, x)) for x in found]


def _assignment_from_point(pt, n, mu0, lam0, symmetric):
    vals = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                vals[(i, j)] = pt[a_var_name(i, j, symmetric)]
    fld = EXACT if all(_is_exact(v) for v in [mu0, lam0, *vals.values()]) else FLOAT
    if fld == FLOAT:
        mu0, lam0 = complex(mu0), complex(lam0)
        vals = {k: complex(v) for k, v in vals.items()}
    return AugAssignment(fld, mu0, lam0, vals, n, False)


def solve_full_rank(b: BraidWord, symmetric: bool = True, budget=None) -> list[dict]:
    """Solutions of Phi^L_b = Delta(b) as dicts of a-variable values."""
    system = full_rank_system(b, symmetric)
    ring = system.ring
    budget = budget if isinstance(budget, Budget) else Budget(10**6 if budget is None else int(budget))
    pts = _solve_polys(list(system.generators), ring, budget, set(ring.names))
    polys = [g for g in system.generators if g]
    out = []
    for pt in pts:
        for s in ring.names:
            pt.setdefault(s, Fraction(0))
        if polys and not all(_is_exact(v) for v in pt.values()):
            pt = _poly_newton(polys, list(ring.names), pt)
        out.append(pt)
    return out


def _key(A: AugAssignment):
    vals = [A.lambda0, *[A.avals[k] for k in sorted(A.avals)]]
    return tuple((round(complex(v).real, 7), round(complex(v).imag, 7)) for v in vals)


def solve_on_slice(b: BraidWord, mu0, symmetric: bool = False, budget=None, branches=("full_rank", "general")) -> list[AugAssignment]:
    """Augmentations with mu = mu0 that the solver can reach, all verified.

    ``full_rank`` solves the mu-free system Phi^L = Delta in the symmetric
    ring and attaches lambda0 = (-mu0)^(-w).  ``general`` specializes the full
    augmentation system at mu0 and back-substitutes through a lex basis,
    slicing positive-dimensional components at a few small integers.  When
    the exact solve runs out of budget (or mu0 is not rational) the general
    branch falls back to float Newton from seeded random starts.
    """
    mu0 = Fraction(mu0) if _is_exact(mu0) else complex(mu0)
    if mu0 == 0 or mu0 == 1:
        raise AugmentError("mu0 must avoid 0 and 1")
    _knot_guard(b)
    n = b.strands
    budget = budget if isinstance(budget, Budget) else Budget(10**6 if budget is None else int(budget))
    found: dict = {}

    def keep(A):
        if check_augmentation(b, A):
            found.setdefault(_key(A), A)
        else:
            log.info("dropped candidate with residual %.3g", augmentation_residual(b, A))

    if "full_rank" in branches:
        lam0 = writhe_lambda(mu0, writhe(b))
        try:
            for pt in solve_full_rank(b, True, budget):
                keep(_assignment_from_point(pt, n, mu0, lam0, True))
        except BudgetExceeded:
            log.warning("full-rank branch of %s ran out of budget", b)

    if "general" in branches:
        system = aug_system(b, symmetric)
        avars = a_var_names(n, symmetric)
        names = [*avars, "lam_inv", "lam"]
        ring = PolyRing(names)
        mu_inv = 1 / mu0
        polys = []
        for g in system.generators:
            if "mu_inv" in g.variables() and "mu" in g.variables() and len(g.terms) == 2:
                continue
            s = g.substitute({"mu": mu0, "mu_inv": mu_inv})
            polys.append(s.to_ring(ring) if s else ring.zero())
        polys = _dedupe(polys)
        pts = None
        if isinstance(mu0, Fraction):
            try:
                pts = _solve_polys(polys, ring, budget, set(avars))
            except BudgetExceeded:
                log.warning("general branch of %s at mu0=%s ran out of budget; using Newton multi-start", b, mu0)
        if pts is None:
            pts = _newton_multistart(polys, names)
        for pt in pts:
            if not all(_is_exact(v) for v in pt.values()):
                pt = _poly_newton(polys, names, pt)
            if abs(complex(pt["lam"])) < TOL:
                continue
            keep(_assignment_from_point(pt, n, mu0, pt["lam"], symmetric))
    return [found[k] for k in sorted(found)]


# ---------------------------------------------------------------- rank extension


def _sym_solve_newton(b: BraidWord, start: dict, iters=80):
    """Polish a symmetric solution of Phi^L_b = Delta(b) by Gauss-Newton.

    ``start`` maps unordered pairs (i, j), i < j, to complex values.  The
    residual is evaluated through the numeric chain rule, derivatives by
    central differences.
    """
    n = b.strands
    pairs = sorted(start)
    sign = -1 if writhe(b) % 2 else 1
    target = [[(sign if i == 0 else 1) if i == j else 0 for j in range(n)] for i in range(n)]

    def vals_of(x):
        out = {}
        for (i, j), v in zip(pairs, x):
            out[gen(i, j)] = v
            out[gen(j, i)] = v
        return out

    def fs(x):
        L, _ = evaluate_phi(b, vals_of(x))
        return [L[i][j] - target[i][j] for i in range(n) for j in range(n)]

    def jac(x):
        h = 1e-6
        cols = []
        for k in range(len(x)):
            xp, xm = np.array(x, dtype=complex), np.array(x, dtype=complex)
            xp[k] += h
            xm[k] -= h
            cols.append([(p - m) / (2 * h) for p, m in zip(fs(xp), fs(xm))])
        return np.array(cols).T

    x = _newton(fs, jac, [complex(start[p]) for p in pairs], iters=iters, tol=1e-15)
    res = max(abs(v) for v in fs(x))
    return dict(zip(pairs, x)), res


def _x0_candidates(u, v, i, w_base):
    """Roots x0 of P_{|u|-1}, admissible ones first (sign rule for odd u)."""
    k = abs(u)
    roots = _cluster([complex(z) for z in pk_poly(k - 1).roots()])
    target = (-1) ** (v - 1)
    admissible = []
    if k % 2 == 1:
        for z in roots:
            for s in (z, -z):
                if abs(pk_poly(k - 2)(-s) - target) < 1e-8:
                    admissible.append(s)
    else:
        admissible = [z for z in roots if abs(z) < 1e-12]
    rest = [z for z in roots if all(abs(z - a) > 1e-9 for a in admissible)]
    order = lambda z: (round(z.real, 12), round(z.imag, 12))  # noqa: E731
    return sorted(_cluster(admissible), key=order) + sorted(rest, key=order)


def _X0_candidates(v):
    """Common roots of the two twist conditions on X0."""
    order = lambda z: (round(z.real, 12), round(z.imag, 12))  # noqa: E731
    target = (-1) ** (v - 1)
    if v >= 3:
        zeros, cond = pk_poly(v - 2), (lambda z: pk_poly(v - 1)(z) - target)
    else:
        zeros, cond = pk_poly(-v), (lambda z: pk_poly(-v + 1)(-z) - target)
    roots = _cluster([complex(z) for z in zeros.roots()])
    good = [z for z in roots if abs(cond(z)) < 1e-8]
    if not good:
        log.warning("no common root for the twist conditions with v=%d", v)
    return sorted(good, key=order), sorted([z for z in roots if z not in good], key=order)


def _extended_braid(b: BraidWord, i, u, v, delta):
    n = b.strands
    big = include(b, 1)
    return concat(big, from_letters([delta * n], n + 1), power(band_generator(i, n, n + 1), u), from_letters([n] * abs(v) if v > 0 else [-n] * abs(v), n + 1))


def _base_pairs(base: AugAssignment):
    return {(i, j): complex(base.avals[(i, j)]) for i in range(1, base.n + 1) for j in range(i + 1, base.n + 1)}


def _recipe_starts(base: AugAssignment, bw: int, i, u, v):
    """Candidate symmetric a-values on n+1 strands from the two lemmas."""
    n = base.n
    pairs = _base_pairs(base)
    good_X, other_X = _X0_candidates(v)
    for x0 in _x0_candidates(u, v, i, bw):
        for X0 in [*good_X, *other_X]:
            start = dict(pairs)
            for j in range(1, n):
                start[(j, n + 1)] = pairs[(min(j, n), max(j, n))]
            start[(i, n + 1)] = x0 * ((-1) ** bw if i == 1 else 1)
            start[(n, n + 1)] = X0
            yield start


def extend_rank(b: BraidWord, base: AugAssignment, i: int, u: int, v: int, delta: int, mu0=None) -> AugAssignment:
    """A verified rank n+1 augmentation for the closure of b s_n^delta s_{i,n}^u s_n^v.

    ``base`` must be a symmetric solution for ``b`` (rank n, verified).  The
    new a-values come from the P_k recipe: a_{i,n+1} is a root x0 of
    P_{|u|-1}, a_{n,n+1} a common root X0 of the two twist conditions, the
    other a_{j,n+1} copy a_{j,n}.  The candidate is then polished on the
    full-rank system of the bigger braid, so rounding in the P_k roots never
    leaks into the result.  For delta = -1 the first admissible candidate is
    already an exact solution.  For delta = +1 existence comes from the mirror
    knot, but no uniform rule carries a-values across the mirror; the same
    candidates (and their negatives) seed Newton on the braid's own system.
    """
    n = b.strands
    if abs(u) < 2 or abs(v) < 3 or delta not in (1, -1) or not (1 <= i < n):
        raise AugmentError("need |u| >= 2, |v| >= 3, delta = +-1 and 1 <= i < n")
    if not ((u + v - 1) % 2 == 0 or (i == 1 and u % 2 == 1)):
        raise AugmentError("hypothesis fails: need u+v-1 even, or i = 1 and u odd")
    if not base.symmetric and any(abs(complex(base.avals[(p, q)]) - complex(base.avals[(q, p)])) > TOL for (p, q) in base.avals):
        raise AugmentError("base augmentation must be symmetric")
    if not check_augmentation(b, base) or rank(base) != n:
        raise AugmentError("base is not a verified rank-n augmentation")
    big = _extended_braid(b, i, u, v, delta)
    if closure_permutation(big)[1] != 1:
        warnings.warn(f"closure of {big} is a link; continuing with the algebra", stacklevel=2)
    mu0 = base.mu0 if mu0 is None else mu0
    mu0 = complex(mu0)
    lam0 = writhe_lambda(mu0, writhe(big))
    bw = writhe(b)
    flips = (1, -1)
    for start in _recipe_starts(base, bw, i, u, v):
        for s in flips:
            seed = {k: s * z for k, z in start.items()}
            sol, res = _sym_solve_newton(big, seed)
            if res > 1e-10:
                continue
            A = AugAssignment(FLOAT, mu0, lam0, sol, n + 1, True)
            if check_augmentation(big, A) and rank(A) == n + 1:
                return A
    raise AugmentError(f"no admissible root produced a verified rank-{n + 1} augmentation")


@dataclass
class FlypeResult:
    braid: BraidWord
    assignment: AugAssignment
    route: str
    residual: float

    def to_json(self):
        return {
            "braid": list(self.braid.letters),
            "strands": self.braid.strands,
            "route": self.route,
            "residual": self.residual,
            "rank": rank(self.assignment),
            "assignment": self.assignment.to_json(),
        }


def _torus2_base(w: int, mu0):
    """Symmetric rank-2 point of sigma_1^w: x with Phi^L = Delta, i.e. P_{|w|-1}-type conditions."""
    b = BraidWord(2, tuple([1 if w > 0 else -1] * abs(w)))
    lam0 = writhe_lambda(mu0, w)
    sols = solve_full_rank(b, True)
    order = lambda pt: (round(complex(pt["x12"]).real, 12), round(complex(pt["x12"]).imag, 12))  # noqa: E731
    for pt in sorted(sols, key=order):
        A = _assignment_from_point(pt, 2, mu0, lam0, True)
        if not isinstance(mu0, Fraction):
            A = A.to_float()
        A = AugAssignment(A.field, A.mu0, A.lambda0, A.avals, 2, True)
        if check_augmentation(b, A) and rank(A) == 2:
            return b, A
    raise AugmentError(f"no rank-2 point for sigma_1^{w}")


def flype_rank3(w: int, delta: int, u: int, v: int, mu0=Fraction(2)) -> FlypeResult:
    """Rank-3 augmentation for the closure of s1^w s2^delta s1^u s2^v.

    Odd u extends directly with i = 1.  Even u needs odd w; the flype
    s1^w s2^d s1^u s2^v -> s1^u s2^d s1^w s2^v swaps them first, and the
    result lives on the flyped word.
    """
    if abs(u) < 2 or abs(w) < 2 or abs(v) < 3 or delta not in (1, -1):
        raise AugmentError("need |u|, |w| >= 2, |v| >= 3, delta = +-1")
    route = "direct"
    if u % 2 == 0:
        if w % 2 == 0:
            if (u + v - 1) % 2:
                raise AugmentError("u and w both even with u+v-1 odd: no route")
            route = "direct (u+v-1 even)"
        else:
            u, w = w, u
            route = "flype"
    if delta == 1:
        route += ", seeded Newton (delta=+1)"
    base_braid, base = _torus2_base(w, mu0)
    A = extend_rank(base_braid, base, 1, u, v, delta, mu0)
    big = _extended_braid(base_braid, 1, u, v, delta)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return FlypeResult(big, A, route, augmentation_residual(big, A))
