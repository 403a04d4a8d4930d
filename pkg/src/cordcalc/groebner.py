"""Buchberger's algorithm over the rationals.

Internally a polynomial is a dict ``{exponent tuple: rational}``; basis
elements are kept monic.  Rationals are ``gmpy2.mpq`` when gmpy2 is importable
and ``fractions.Fraction`` otherwise.  Fraction-free integer reduction was
tried first and lost to coefficient swell: scaling the whole running
polynomial at every step lets a single large leading coefficient inflate every
term, whereas rational arithmetic normalizes each coefficient on its own.

Monomial orders are expressed by a *descending key*: ``order.key(e)`` is smaller
for larger monomials, so the leading monomial is the ``min`` and a plain
``heapq`` min-heap pops leading terms first.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

from .ring import CommPoly, PolyRing

__all__ = [
    "BudgetExceeded",
    "MonomialOrder",
    "GroebnerBasis",
    "Budget",
    "normal_form",
    "buchberger",
    "is_trivial",
    "eliminate",
    "is_zero_dimensional",
    "fglm",
]

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    """The reduction-step budget ran out before the computation finished."""


@dataclass
class Budget:
    limit: int = DEFAULT_BUDGET
    used: int = 0

    def spend(self, k=1):
        self.used += k
        if self.used > self.limit:
            raise BudgetExceeded(f"exceeded budget of {self.limit} reduction steps")


@dataclass(frozen=True)
class MonomialOrder:
    """``grevlex``, ``lex`` or ``block``; variables rank in ring order.

    For ``block`` the variables at positions ``elim`` form the first
    (larger) block, compared by grevlex, and the rest break ties by grevlex.
    """

    kind: str = "grevlex"
    elim: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key_function(self, nvars):
        if self.kind == "lex":
            return lambda e: tuple([-x for x in e])
        if self.kind == "grevlex":
            return lambda e: (-sum(e), e[::-1])
        first = tuple(self.elim)
        rest = tuple(k for k in range(nvars) if k not in set(first))

        def key(e):
            a = [e[k] for k in first]
            b = [e[k] for k in rest]
            return (-sum(a), tuple(a[::-1]), -sum(b), tuple(b[::-1]))

        return key

    @classmethod
    def block_for(cls, ring: PolyRing, drop: Sequence[str]):
        return cls("block", tuple(ring.index[s] for s in drop))


# ---------------------------------------------------------------- internals


class _Ctx:
    """Per-computation caches: monomial keys and divisibility masks."""

    def __init__(self, nvars, order: MonomialOrder, budget: Budget):
        self.n = nvars
        self.keyf = order.key_function(nvars)
        self.keys: dict = {}
        self.budget = budget

    def key(self, e):
        k = self.keys.get(e)
        if k is None:
            k = self.keys[e] = self.keyf(e)
        return k

    def lm(self, f):
        return min(f, key=self.key)


def _mask(e):
    m = 0
    for k, x in enumerate(e):
        if x:
            m |= 1 << k
    return m


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple([x if x > y else y for x, y in zip(a, b)])


def _coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def _monic(f, ctx):
    if not f:
        return f
    lc = f[ctx.lm(f)]
    if lc == 1:
        return f
    inv = 1 / lc
    return {e: c * inv for e, c in f.items()}


class _Elem:
    __slots__ = ("poly", "lm", "tail", "mask", "deg")

    def __init__(self, poly, ctx):
        self.poly = poly
        self.lm = ctx.lm(poly)
        if poly[self.lm] != 1:
            raise ValueError("basis elements must be monic")
        self.tail = [(e, c) for e, c in poly.items() if e != self.lm]
        self.mask = _mask(self.lm)
        self.deg = sum(self.lm)


def _find_divisor(e, emask, basis):
    for g in basis:
        if g.mask & ~emask:
            continue
        if _divides(g.lm, e):
            return g
    return None


def _reduce(f, basis, ctx: _Ctx, full=True):
    """Normal form of ``f`` (dict) w.r.t. ``basis`` (list of monic _Elem)."""
    if not f or not basis:
        return dict(f)
    f = dict(f)
    rem: dict = {}
    key = ctx.key
    heap = [(key(e), e) for e in f]
    heapq.heapify(heap)
    spend = ctx.budget.spend
    while heap:
        _, e = heapq.heappop(heap)
        c = f.pop(e, None)
        if c is None:
            continue
        g = _find_divisor(e, _mask(e), basis)
        if g is None:
            rem[e] = c
            if not full:
                rem.update(f)
                return rem
            continue
        # charge by terms touched and coefficient size so the budget tracks work
        spend(1 + len(g.tail) * (1 + (c.numerator.bit_length() + c.denominator.bit_length()) // 128))
        q = tuple([x - y for x, y in zip(e, g.lm)])
        for eg, cg in g.tail:
            m = tuple([x + y for x, y in zip(q, eg)])
            v = f.get(m)
            if v is None:
                f[m] = -c * cg
                heapq.heappush(heap, (key(m), m))
            else:
                v -= c * cg
                if v:
                    f[m] = v
                else:
                    del f[m]
    return rem


def _spoly(gi: _Elem, gj: _Elem, L):
    qi = tuple([x - y for x, y in zip(L, gi.lm)])
    qj = tuple([x - y for x, y in zip(L, gj.lm)])
    out: dict = {}
    for e, c in gi.tail:
        m = tuple([x + y for x, y in zip(qi, e)])
        out[m] = out.get(m, 0) + c
    for e, c in gj.tail:
        m = tuple([x + y for x, y in zip(qj, e)])
        v = out.get(m, 0) - c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _to_q_dict(p: CommPoly):
    for c in p.terms.values():
        if not isinstance(c, (int, Fraction)):
            raise TypeError("Groebner bases need exact rational coefficients")
    return {e: _Q(c.numerator, c.denominator) if isinstance(c, Fraction) else _Q(c) for e, c in p.terms.items() if c}


def _from_q(c):
    c = Fraction(int(c.numerator), int(c.denominator))
    return c.numerator if c.denominator == 1 else c


def _to_comm(ring, f):
    return CommPoly(ring, {e: _from_q(c) for e, c in f.items()})


# ---------------------------------------------------------------- public API


@dataclass
class GroebnerBasis:
    generators: list
    order: MonomialOrder
    ring: PolyRing
    reduced: bool = True
    stats: dict = field(default_factory=dict)

    def is_trivial(self):
        return len(self.generators) == 1 and self.generators[0].is_constant() and bool(self.generators[0])

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def normal_form(self, p: CommPoly) -> CommPoly:
        return normal_form(p, self.generators, self.order)


def normal_form(p: CommPoly, basis: Sequence[CommPoly], order: MonomialOrder = MonomialOrder()) -> CommPoly:
    """Remainder of ``p`` on division by ``basis`` (divisors tried in the given order)."""
    ring = p.ring
    ctx = _Ctx(len(ring), order, Budget(10**12))
    elems = [_Elem(_monic(_to_q_dict(g), ctx), ctx) for g in basis if g]
    return _to_comm(ring, _reduce(_to_q_dict(p), elems, ctx))


def _update(G, B, h, elems, pairkey):
    """Gebauer-Moeller pair update.  ``G`` active indices, ``B`` pair dict."""
    eh = elems[h]
    C = [g for g in G]
    D = []
    lcms = {g: _lcm(eh.lm, elems[g].lm) for g in C}
    while C:
        g1 = C.pop()
        L1 = lcms[g1]
        if _coprime(eh.lm, elems[g1].lm):
            D.append(g1)
            continue
        if any(_divides(lcms[g2], L1) for g2 in C) or any(_divides(lcms[g2], L1) for g2 in D):
            continue
        D.append(g1)
    E = [g for g in D if not _coprime(eh.lm, elems[g].lm)]
    newB = {}
    for (i, j), L in B.items():
        if (
            _divides(eh.lm, L)
            and _lcm(elems[i].lm, eh.lm) != L
            and _lcm(eh.lm, elems[j].lm) != L
        ):
            continue
        newB[(i, j)] = L
    for g in E:
        i, j = (g, h) if g < h else (h, g)
        newB[(i, j)] = lcms[g]
    newG = [g for g in G if not _divides(eh.lm, elems[g].lm)] + [h]
    return newG, newB


def _buchberger_core(polys, ctx: _Ctx, stop_on_unit=True):
    elems: list[_Elem] = []
    G: list[int] = []
    B: dict = {}
    stats = {"pairs": 0, "zero_reductions": 0, "max_basis": 0}

    def add(h):
        nonlocal G, B
        elems.append(_Elem(h, ctx))
        idx = len(elems) - 1
        G, B = _update(G, B, idx, elems, None)
        stats["max_basis"] = max(stats["max_basis"], len(G))

    # interreduce the input to a fixed point, then feed it smallest leading monomial first
    polys = [p for p in polys if p]
    while True:
        prev = polys
        polys = []
        for k, p in enumerate(prev):
            r = _reduce(p, [_Elem(q, ctx) for q in prev[:k]], ctx)
            if r:
                r = _monic(r, ctx)
                if stop_on_unit and all(not any(e) for e in r):
                    return [r], stats, True
                polys.append(r)
        if polys == prev:
            break
    for p in sorted(polys, key=lambda f: ctx.key(ctx.lm(f)), reverse=True):
        add(p)
    while B:
        # normal strategy: smallest lcm (largest descending key), ties by index
        (i, j), L = max(B.items(), key=lambda kv: (ctx.key(kv[1]), -kv[0][0], -kv[0][1]))
        del B[(i, j)]
        stats["pairs"] += 1
        s = _spoly(elems[i], elems[j], L)
        # smallest leading monomials first as divisors
        divisors = sorted((elems[g] for g in G), key=lambda el: ctx.key(el.lm), reverse=True)
        h = _reduce(s, divisors, ctx) if s else {}
        if not h:
            stats["zero_reductions"] += 1
            continue
        h = _monic(h, ctx)
        if stop_on_unit and all(not any(e) for e in h):
            return [h], stats, True
        add(h)
    return [elems[g].poly for g in G], stats, False


def _interreduce(basis, ctx):
    basis = [b for b in basis if b]
    basis.sort(key=lambda f: ctx.key(ctx.lm(f)))
    # drop elements whose leading monomial is divisible by another's
    minimal = []
    lms = [ctx.lm(f) for f in basis]
    for k, f in enumerate(basis):
        if any(_divides(lms[m], lms[k]) and (lms[m] != lms[k] or m < k) for m in range(len(basis)) if m != k):
            continue
        minimal.append(f)
    out = []
    for k, f in enumerate(minimal):
        others = [_Elem(g, ctx) for m, g in enumerate(minimal) if m != k]
        r = _reduce(f, others, ctx)
        out.append(_monic(r, ctx))
    out.sort(key=lambda f: ctx.key(ctx.lm(f)), reverse=True)
    return out


def buchberger(gens: Sequence[CommPoly], order: MonomialOrder = MonomialOrder(), budget: Budget | int | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of ``gens``; raises :class:`BudgetExceeded` when out of steps."""
    gens = [g for g in gens if g]
    if not gens:
        raise ValueError("buchberger needs at least one nonzero generator")
    ring = gens[0].ring
    if any(g.ring != ring for g in gens):
        raise ValueError("generators live in different rings")
    if not isinstance(budget, Budget):
        budget = Budget(DEFAULT_BUDGET if budget is None else int(budget))
    ctx = _Ctx(len(ring), order, budget)
    polys = [_monic(_to_q_dict(g), ctx) for g in gens]
    basis, stats, unit = _buchberger_core(polys, ctx)
    if unit:
        out = [ring.one()]
    else:
        out = [_to_comm(ring, f) for f in _interreduce(basis, ctx)]
    stats["steps"] = budget.used
    return GroebnerBasis(out, order, ring, True, stats)


def is_trivial(gens: Sequence[CommPoly], budget: Budget | int | None = None) -> bool:
    """True iff the ideal is the whole ring (checked with grevlex)."""
    gens = [g for g in gens if g]
    if not gens:
        return False
    if any(g.is_constant() for g in gens):
        return True
    return buchberger(gens, MonomialOrder("grevlex"), budget).is_trivial()


def eliminate(gens: Sequence[CommPoly], drop: Sequence[str], budget: Budget | int | None = None) -> list[CommPoly]:
    """Generators of the elimination ideal with the variables ``drop`` removed."""
    gens = [g for g in gens if g]
    if not gens:
        return []
    ring = gens[0].ring
    order = MonomialOrder.block_for(ring, drop)
    gb = buchberger(gens, order, budget)
    dropped = [ring.index[s] for s in drop]
    return [g for g in gb.generators if all(not e[k] for e in g.terms for k in dropped)]


# ---------------------------------------------------------------- FGLM


class _Ascending:
    """Wraps a descending key so that a min-heap pops the smallest monomial first."""

    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return self.k > other.k

    def __eq__(self, other):
        return self.k == other.k


def is_zero_dimensional(gb: GroebnerBasis) -> bool:
    """Every variable has a pure power among the leading monomials."""
    if gb.is_trivial():
        return True
    key = gb.order.key_function(len(gb.ring))
    pure = set()
    for g in gb.generators:
        e = min(g.terms, key=key)
        used = [k for k, x in enumerate(e) if x]
        if len(used) == 1:
            pure.add(used[0])
    return len(pure) == len(gb.ring)


def fglm(gb: GroebnerBasis, target: MonomialOrder = MonomialOrder("lex"), budget: Budget | int | None = None) -> GroebnerBasis:
    """Change of order for a zero-dimensional reduced basis by linear algebra on normal forms."""
    ring = gb.ring
    nv = len(ring)
    if gb.is_trivial():
        return GroebnerBasis([ring.one()], target, ring, True, {"dimension": 0})
    if not is_zero_dimensional(gb):
        raise ValueError("FGLM needs a zero-dimensional ideal")
    if not isinstance(budget, Budget):
        budget = Budget(DEFAULT_BUDGET if budget is None else int(budget))
    src = _Ctx(nv, gb.order, budget)
    tgt = _Ctx(nv, target, budget)
    elems = [_Elem(_monic(_to_q_dict(g), src), src) for g in gb.generators]

    def times_var(f, k):
        out = {}
        for e, c in f.items():
            m = list(e)
            m[k] += 1
            out[tuple(m)] = c
        return _reduce(out, elems, src)

    one = (0,) * nv
    nfs = {one: _reduce({one: _Q(1)}, elems, src)}
    rows: list = []  # (pivot, vector, combination), kept fully reduced
    lms: list = []
    out: list = []
    staircase = 0
    heap = [(_Ascending(tgt.key(one)), one)]
    seen = {one}
    while heap:
        _, m = heapq.heappop(heap)
        if any(_divides(l, m) for l in lms):
            continue
        budget.spend()
        v = dict(nfs[m])
        comb = {m: _Q(1)}
        for piv, pv, pc in rows:
            c = v.get(piv)
            if not c:
                continue
            for e, x in pv.items():
                y = v.get(e, 0) - c * x
                if y:
                    v[e] = y
                else:
                    v.pop(e, None)
            for e, x in pc.items():
                y = comb.get(e, 0) - c * x
                if y:
                    comb[e] = y
                else:
                    comb.pop(e, None)
        if not v:
            out.append(comb)
            lms.append(m)
            continue
        piv = src.lm(v)
        inv = 1 / v[piv]
        v = {e: x * inv for e, x in v.items()}
        comb = {e: x * inv for e, x in comb.items()}
        for idx, (p2, pv, pc) in enumerate(rows):
            c = pv.get(piv)
            if not c:
                continue
            pv = dict(pv)
            pc = dict(pc)
            for e, x in v.items():
                y = pv.get(e, 0) - c * x
                if y:
                    pv[e] = y
                else:
                    pv.pop(e, None)
            for e, x in comb.items():
                y = pc.get(e, 0) - c * x
                if y:
                    pc[e] = y
                else:
                    pc.pop(e, None)
            rows[idx] = (p2, pv, pc)
        rows.append((piv, v, comb))
        staircase += 1
        for k in range(nv):
            m2 = list(m)
            m2[k] += 1
            m2 = tuple(m2)
            if m2 not in seen:
                seen.add(m2)
                nfs[m2] = times_var(nfs[m], k)
                heapq.heappush(heap, (_Ascending(tgt.key(m2)), m2))
    polys = [_to_comm(ring, _monic(f, tgt)) for f in out]
    polys.sort(key=lambda g: tgt.key(min(g.terms, key=tgt.key)), reverse=True)
    return GroebnerBasis(polys, target, ring, True, {"dimension": staircase, "steps": budget.used})
