"""Exact coefficient arithmetic.

Three rings live here:

* :class:`Laurent` -- Laurent polynomials in ``lam``, ``mu`` over the integers.
  A Laurent value with only a constant term is always returned as a plain
  ``int`` so the hot paths (braid action, Phi matrices) stay on machine-free
  integer arithmetic without wrapper objects.
* :class:`NCPoly` -- the free unital algebra on the ``a_ij`` with central
  Laurent coefficients.
* :class:`CommPoly` -- commutative polynomials with rational coefficients over
  a fixed, named variable list (:class:`PolyRing`).

Free-algebra generators are packed into ints, ``(i << 8) | j``; a word is a
tuple of such ints, so word concatenation is tuple concatenation and hashing
never touches nested objects.  The packing is a pure function, so there is no
shared intern table to guard.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Number
from typing import Iterable, Mapping

__all__ = [
    "RingError",
    "Laurent",
    "LAM",
    "MU",
    "gen",
    "gen_ij",
    "gen_name",
    "parse_gen",
    "NCPoly",
    "PolyRing",
    "CommPoly",
    "aug_ring",
    "a_var_name",
    "abelianize",
    "substitute_nc",
    "involution",
    "evaluate",
]


class RingError(ValueError):
    pass


# ---------------------------------------------------------------- Laurent


def _laurent_or_int(terms):
    if not terms:
        return 0
    if len(terms) == 1 and (0, 0) in terms:
        return terms[(0, 0)]
    return Laurent(terms, _trusted=True)


class Laurent:
    """Element of Z[lam^+-1, mu^+-1]; keys are ``(lam_exp, mu_exp)``."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], int], _trusted=False):
        if not _trusted:
            terms = {(int(a), int(b)): int(c) for (a, b), c in terms.items() if c}
        self.terms = terms
        self._hash = None

    @staticmethod
    def make(terms):
        return _laurent_or_int({k: v for k, v in terms.items() if v})

    @staticmethod
    def monomial(lam_exp=0, mu_exp=0, coeff=1):
        return _laurent_or_int({(lam_exp, mu_exp): coeff} if coeff else {})

    def _items(self):
        return self.terms.items()

    def __add__(self, other):
        if isinstance(other, int):
            if not other:
                return self
            out = dict(self.terms)
            v = out.get((0, 0), 0) + other
            if v:
                out[(0, 0)] = v
            else:
                del out[(0, 0)]
            return _laurent_or_int(out)
        if isinstance(other, Laurent):
            out = dict(self.terms)
            for k, c in other.terms.items():
                v = out.get(k, 0) + c
                if v:
                    out[k] = v
                else:
                    del out[k]
            return _laurent_or_int(out)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Laurent({k: -c for k, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return 0
            return Laurent({k: c * other for k, c in self.terms.items()}, _trusted=True)
        if isinstance(other, Laurent):
            out: dict = {}
            for (a1, b1), c1 in self.terms.items():
                for (a2, b2), c2 in other.terms.items():
                    k = (a1 + a2, b1 + b2)
                    out[k] = out.get(k, 0) + c1 * c2
            return _laurent_or_int({k: v for k, v in out.items() if v})
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            if len(self.terms) != 1:
                raise RingError("only Laurent monomials are invertible")
            ((a, b), c), = self.terms.items()
            if c not in (1, -1):
                raise RingError("only unit Laurent monomials are invertible")
            return _laurent_or_int({(a * e, b * e): c ** (-e)})
        out = 1
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Laurent):
            return self.terms == other.terms
        return False  # normalized constants are never Laurent instances

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return True

    def evaluate(self, lam, mu):
        total = 0
        for (a, b), c in self.terms.items():
            if (a < 0 and lam == 0) or (b < 0 and mu == 0):
                raise RingError("Laurent monomial evaluated at a zero of lam or mu")
            total += c * _power(lam, a) * _power(mu, b)
        return total

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0][0], kv[0][1]))

    def __str__(self):
        return laurent_str(self)

    __repr__ = __str__


def _power(x, e):
    if e >= 0:
        return x**e
    if isinstance(x, int):
        return Fraction(1, x ** (-e))
    return 1 / x ** (-e)


LAM = Laurent({(1, 0): 1})
MU = Laurent({(0, 1): 1})


def laurent_terms(c) -> list[tuple[int, int, int]]:
    """``[(lam_exp, mu_exp, coeff), ...]`` for an int or Laurent coefficient."""
    if isinstance(c, Laurent):
        return [(a, b, v) for (a, b), v in c.sorted_terms()]
    return [(0, 0, int(c))] if c else []


def _mono_str(parts):
    return "*".join(parts)


def laurent_str(c) -> str:
    if not isinstance(c, Laurent):
        return str(c)
    pieces = []
    for (a, b), v in c.sorted_terms():
        factors = []
        if a:
            factors.append("lam" if a == 1 else f"lam^{a}")
        if b:
            factors.append("mu" if b == 1 else f"mu^{b}")
        mono = _mono_str(factors)
        if not mono:
            body = str(abs(v))
        elif abs(v) == 1:
            body = mono
        else:
            body = f"{abs(v)}*{mono}"
        pieces.append(("-" if v < 0 else "+", body))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sgn, body in pieces[1:]:
        out += f"{sgn}{body}"
    return out


# ---------------------------------------------------------------- free algebra


def gen(i: int, j: int) -> int:
    if i == j or i < 1 or j < 1 or i > 255 or j > 255:
        raise RingError(f"a_{i}{j} is not a generator")
    return (i << 8) | j


def gen_ij(g: int) -> tuple[int, int]:
    return g >> 8, g & 255


def gen_name(g: int) -> str:
    i, j = gen_ij(g)
    return f"a{i}{j}" if i < 10 and j < 10 else f"a{i}_{j}"


def parse_gen(name: str) -> int:
    body = name.strip()
    if not body.startswith("a"):
        raise RingError(f"bad generator name {name!r}")
    body = body[1:]
    if "_" in body:
        i, j = body.split("_")
    elif len(body) == 2:
        i, j = body[0], body[1]
    else:
        raise RingError(f"ambiguous generator name {name!r}")
    return gen(int(i), int(j))


def _word_key(word):
    return (len(word), tuple(gen_ij(g) for g in word))


class NCPoly:
    """Noncommutative polynomial: ``{word: coeff}`` with ``coeff`` an int or Laurent.

    ``n`` is the ambient strand count (``None`` for scalars, which adapt to any
    ambient algebra).
    """

    __slots__ = ("terms", "n")

    def __init__(self, terms: Mapping[tuple, object] | None = None, n: int | None = None):
        self.terms = {w: c for w, c in (terms or {}).items() if c}
        self.n = n

    @classmethod
    def const(cls, c, n=None):
        return cls({(): c} if c else {}, n)

    @classmethod
    def generator(cls, i, j, n=None, coeff=1):
        if n is not None and (i > n or j > n):
            raise RingError(f"a_{i}{j} outside A_{n}")
        return cls({(gen(i, j),): coeff}, n)

    def _ambient(self, other):
        if self.n is None:
            return other.n
        if other.n is None or other.n == self.n:
            return self.n
        raise RingError(f"ambient mismatch: A_{self.n} vs A_{other.n}")

    @staticmethod
    def _coerce(x):
        if isinstance(x, NCPoly):
            return x
        if isinstance(x, (int, Laurent)):
            return NCPoly.const(x)
        raise TypeError(f"cannot use {type(x).__name__} as NCPoly")

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        other = self._coerce(other)
        n = self._ambient(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w)
            if v is None:
                out[w] = c
            else:
                v = v + c
                if v:
                    out[w] = v
                else:
                    del out[w]
        return NCPoly._raw(out, n)

    __radd__ = __add__

    @classmethod
    def _raw(cls, terms, n):
        p = cls.__new__(cls)
        p.terms = terms
        p.n = n
        return p

    def __neg__(self):
        return NCPoly._raw({w: -c for w, c in self.terms.items()}, self.n)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def scale(self, c):
        if not c:
            return NCPoly._raw({}, self.n)
        out = {}
        for w, v in self.terms.items():
            x = v * c
            if x:
                out[w] = x
        return NCPoly._raw(out, self.n)

    def __mul__(self, other):
        if isinstance(other, (int, Laurent)):
            return self.scale(other)
        other = self._coerce(other)
        n = self._ambient(other)
        out: dict = {}
        get = out.get
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                v = get(w)
                out[w] = c1 * c2 if v is None else v + c1 * c2
        return NCPoly._raw({w: c for w, c in out.items() if c}, n)

    def __rmul__(self, other):
        if isinstance(other, (int, Laurent)):
            return self.scale(other)
        return self._coerce(other) * self

    def __pow__(self, e):
        out = NCPoly.const(1, self.n)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Laurent)):
            other = NCPoly.const(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def generators(self) -> set[int]:
        return {g for w in self.terms for g in w}

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def constant(self):
        return self.terms.get((), 0)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _word_key(kv[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            word = "*".join(gen_name(g) for g in w)
            if isinstance(c, Laurent):
                cs = laurent_str(c)
                coef = f"({cs})"
                if not word:
                    parts.append(("+", coef))
                else:
                    parts.append(("+", f"{coef}*{word}"))
                continue
            sgn = "-" if c < 0 else "+"
            a = abs(c)
            if not word:
                body = str(a)
            elif a == 1:
                body = word
            else:
                body = f"{a}*{word}"
            parts.append((sgn, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sgn, body in parts[1:]:
            out += f" {sgn} {body}"
        return out

    __repr__ = __str__

    def to_json(self):
        return [
            {"coeff": {"terms": [list(t) for t in laurent_terms(c)]}, "word": [gen_name(g) for g in w]}
            for w, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data, n=None):
        terms = {}
        for item in data:
            c = Laurent.make({(a, b): v for a, b, v in item["coeff"]["terms"]})
            w = tuple(parse_gen(s) for s in item["word"])
            terms[w] = terms.get(w, 0) + c
        return cls(terms, n)


def involution(p: NCPoly) -> NCPoly:
    """Antihomomorphism with a_ij -> a_ji; coefficients fixed."""
    out = {}
    for w, c in p.terms.items():
        out[tuple(((g & 255) << 8) | (g >> 8) for g in reversed(w))] = c
    return NCPoly(out, p.n)


def substitute_nc(p: NCPoly, images: Mapping[int, NCPoly], n: int | None = None) -> NCPoly:
    """Apply the algebra homomorphism determined by ``images`` (gen code -> NCPoly)."""
    cache: dict[tuple, NCPoly] = {(): NCPoly.const(1, n)}

    def image(word):
        hit = cache.get(word)
        if hit is not None:
            return hit
        try:
            last = images[word[-1]]
        except KeyError:
            raise RingError(f"no image for generator {gen_name(word[-1])}") from None
        res = image(word[:-1]) * last
        cache[word] = res
        return res

    out = NCPoly.const(0, n if n is not None else p.n)
    acc: dict = {}
    for w, c in p.terms.items():
        img = image(w)
        for w2, c2 in img.terms.items():
            v = acc.get(w2)
            acc[w2] = c * c2 if v is None else v + c * c2
    out.terms = {w: c for w, c in acc.items() if c}
    return out


# ---------------------------------------------------------------- commutative


class PolyRing:
    """A fixed, ordered list of variable names."""

    __slots__ = ("names", "index")

    def __init__(self, names: Iterable[str]):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise RingError("duplicate variable names")
        self.index = {s: k for k, s in enumerate(self.names)}

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"PolyRing({', '.join(self.names)})"

    def zero(self):
        return CommPoly(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        return CommPoly(self, {(0,) * len(self.names): c} if c else {})

    def var(self, name: str, power: int = 1):
        e = [0] * len(self.names)
        e[self.index[name]] = power
        return CommPoly(self, {tuple(e): 1})

    def gens(self):
        return [self.var(s) for s in self.names]

    def monomial(self, exps, coeff=1):
        return CommPoly(self, {tuple(exps): coeff} if coeff else {})


def _add_exps(a, b):
    return tuple([x + y for x, y in zip(a, b)])


class CommPoly:
    """``{exponent tuple: coeff}`` over a :class:`PolyRing`; coeffs are int/Fraction."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Mapping[tuple, object]):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c}

    @classmethod
    def _raw(cls, ring, terms):
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        return p

    def _check(self, other):
        if isinstance(other, CommPoly):
            if other.ring != self.ring:
                raise RingError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, Number):
            return self.ring.const(other)
        raise TypeError(f"cannot combine CommPoly with {type(other).__name__}")

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return CommPoly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return CommPoly._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, Number):
            if not other:
                return self.ring.zero()
            return CommPoly._raw(self.ring, {e: c * other for e, c in self.terms.items()})
        other = self._check(other)
        out: dict = {}
        get = out.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exps(e1, e2)
                out[e] = get(e, 0) + c1 * c2
        return CommPoly._raw(self.ring, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, Number):
            other = self.ring.const(other)
        if not isinstance(other, CommPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def degree(self, var: str | None = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        k = self.ring.index[var]
        return max(e[k] for e in self.terms)

    def variables(self) -> list[str]:
        used = set()
        for e in self.terms:
            used.update(k for k, x in enumerate(e) if x)
        return [self.ring.names[k] for k in sorted(used)]

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant(self):
        return self.terms.get((0,) * len(self.ring), 0)

    def evaluate(self, point):
        """Evaluate at ``point`` (name -> value mapping, or a sequence in ring order)."""
        if isinstance(point, Mapping):
            vals = []
            for s in self.ring.names:
                if s in point:
                    vals.append(point[s])
                else:
                    vals.append(None)
        else:
            vals = list(point)
        total = 0
        for e, c in self.terms.items():
            term = c
            for k, x in enumerate(e):
                if x:
                    v = vals[k]
                    if v is None:
                        raise RingError(f"no value for variable {self.ring.names[k]}")
                    term = term * v**x
            total = total + term
        return total

    def substitute(self, values: Mapping[str, object]) -> "CommPoly":
        """Substitute numbers or CommPolys (same ring) for some variables."""
        idx = {self.ring.index[s]: v for s, v in values.items()}
        out = self.ring.zero()
        cache: dict = {}
        for e, c in self.terms.items():
            keep = list(e)
            factor = c
            poly_factor = None
            for k, v in idx.items():
                x = e[k]
                if not x:
                    continue
                keep[k] = 0
                if isinstance(v, CommPoly):
                    key = (k, x)
                    if key not in cache:
                        cache[key] = v**x
                    poly_factor = cache[key] if poly_factor is None else poly_factor * cache[key]
                else:
                    factor = factor * v**x
            term = CommPoly._raw(self.ring, {tuple(keep): factor} if factor else {})
            if poly_factor is not None:
                term = term * poly_factor
            out = out + term
        return out

    def diff(self, var: str) -> "CommPoly":
        k = self.ring.index[var]
        out = {}
        for e, c in self.terms.items():
            x = e[k]
            if x:
                f = list(e)
                f[k] = x - 1
                out[tuple(f)] = c * x
        return CommPoly(self.ring, out)

    def to_ring(self, ring: PolyRing) -> "CommPoly":
        """Re-express in another ring that contains every variable used here."""
        pos = []
        for k, s in enumerate(self.ring.names):
            pos.append(ring.index.get(s))
        out = {}
        n = len(ring)
        for e, c in self.terms.items():
            f = [0] * n
            for k, x in enumerate(e):
                if x:
                    if pos[k] is None:
                        raise RingError(f"variable {self.ring.names[k]} missing from target ring")
                    f[pos[k]] = x
            out[tuple(f)] = c
        return CommPoly(ring, out)

    def content_normalized(self) -> "CommPoly":
        """Scale to coprime integer coefficients with positive leading (lex) coefficient."""
        if not self.terms:
            return self
        from math import gcd, lcm

        den = 1
        for c in self.terms.values():
            den = lcm(den, Fraction(c).denominator)
        ints = {e: int(Fraction(c) * den) for e, c in self.terms.items()}
        g = 0
        for c in ints.values():
            g = gcd(g, c)
        lead = max(ints)
        sign = -1 if ints[lead] < 0 else 1
        return CommPoly(self.ring, {e: sign * c // g for e, c in ints.items()})

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), [-x for x in kv[0]]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for k, x in enumerate(e):
                if x:
                    s = self.ring.names[k]
                    factors.append(s if x == 1 else f"{s}^{x}")
            mono = "*".join(factors)
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append(("-" if neg else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sgn, body in parts[1:]:
            out += f" {sgn} {body}"
        return out

    __repr__ = __str__


def a_var_name(i: int, j: int, symmetric: bool = False) -> str:
    if symmetric and i > j:
        i, j = j, i
    return f"x{i}{j}" if i < 10 and j < 10 else f"x{i}_{j}"


def a_var_names(n: int, symmetric: bool = False) -> list[str]:
    if symmetric:
        return [a_var_name(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return [a_var_name(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]


def aug_ring(n: int, symmetric: bool = False, with_lam_mu: bool = True) -> PolyRing:
    head = ["lam", "lam_inv", "mu", "mu_inv"] if with_lam_mu else []
    return PolyRing(head + a_var_names(n, symmetric))


def _laurent_to_comm(c, ring: PolyRing):
    """int/Laurent coefficient -> CommPoly using lam_inv/mu_inv for negative powers."""
    if not isinstance(c, Laurent):
        return ring.const(c)
    nv = len(ring)
    il, ili, im, imi = (ring.index.get(s) for s in ("lam", "lam_inv", "mu", "mu_inv"))
    out = {}
    for (a, b), v in c.terms.items():
        e = [0] * nv
        for exp, pos, neg in ((a, il, ili), (b, im, imi)):
            if exp > 0:
                if pos is None:
                    raise RingError("ring lacks lam/mu variables")
                e[pos] += exp
            elif exp < 0:
                if neg is None:
                    raise RingError("ring lacks lam_inv/mu_inv variables")
                e[neg] += -exp
        key = tuple(e)
        out[key] = out.get(key, 0) + v
    return CommPoly(ring, out)


def abelianize(p: NCPoly, ring: PolyRing, symmetrize: bool = False) -> CommPoly:
    """Image of ``p`` in the commutative (optionally symmetrized) quotient.

    ``ring`` must contain a variable ``x_ij`` for every generator of ``p``
    (``x_ij`` with ``i < j`` when symmetrizing).
    """
    nv = len(ring)
    idx = ring.index
    gen_pos: dict[int, int] = {}
    out = ring.zero()
    acc: dict = {}
    for w, c in p.terms.items():
        e = [0] * nv
        for g in w:
            k = gen_pos.get(g)
            if k is None:
                i, j = gen_ij(g)
                name = a_var_name(i, j, symmetrize)
                if name not in idx:
                    raise RingError(f"ring has no variable {name}")
                k = gen_pos[g] = idx[name]
            e[k] += 1
        mono = tuple(e)
        if isinstance(c, Laurent):
            cp = _laurent_to_comm(c, ring)
            for e2, v in cp.terms.items():
                key = _add_exps(mono, e2)
                acc[key] = acc.get(key, 0) + v
        else:
            acc[mono] = acc.get(mono, 0) + c
    out.terms = {e: v for e, v in acc.items() if v}
    return out


def evaluate(p, point: Mapping):
    """Evaluate an NCPoly or CommPoly at ``point``.

    For NCPoly, ``point`` maps ``"lam"``, ``"mu"`` and generator keys -- either
    ``(i, j)`` tuples or names like ``"a12"`` -- to field elements.
    """
    if isinstance(p, CommPoly):
        return p.evaluate(point)
    if not isinstance(p, NCPoly):
        raise TypeError("evaluate expects NCPoly or CommPoly")
    vals: dict[int, object] = {}
    for key, v in point.items():
        if isinstance(key, tuple):
            vals[gen(*key)] = v
        elif isinstance(key, str) and key.startswith("a"):
            vals[parse_gen(key)] = v
    lam = point.get("lam")
    mu = point.get("mu")
    total = 0
    for w, c in p.terms.items():
        if isinstance(c, Laurent):
            if lam is None or mu is None:
                if any(a for (a, _b) in c.terms) and lam is None:
                    raise RingError("no value for lam")
                if any(b for (_a, b) in c.terms) and mu is None:
                    raise RingError("no value for mu")
            cv = c.evaluate(lam if lam is not None else 1, mu if mu is not None else 1)
        else:
            cv = c
        term = cv
        for g in w:
            try:
                term = term * vals[g]
            except KeyError:
                raise RingError(f"no value for {gen_name(g)}") from None
        total = total + term
    return total


def cancel_inverses(p: CommPoly, pairs=(("lam", "lam_inv"), ("mu", "mu_inv"))) -> CommPoly:
    """Rewrite ``v^a v_inv^b`` as the net power, using whichever variable fits."""
    idx = p.ring.index
    slots = [(idx[a], idx[b]) for a, b in pairs if a in idx and b in idx]
    out: dict = {}
    for e, c in p.terms.items():
        f = list(e)
        for i, j in slots:
            net = f[i] - f[j]
            f[i], f[j] = (net, 0) if net >= 0 else (0, -net)
        key = tuple(f)
        out[key] = out.get(key, 0) + c
    return CommPoly(p.ring, out)
