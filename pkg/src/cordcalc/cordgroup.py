"""Meridian presentations of braid closures and matrix-defined augmentations.

A value matrix E records epsilon([gamma_i gamma_j^-1]) for the paths gamma_i
that define the meridians g_i = gamma_i^-1 m gamma_i.  Brackets of longer
words follow from E alone by peeling one letter at a time:

    [gamma_i g_k^e h gamma_j^-1] = [gamma_i h gamma_j^-1]
                                   - e mu^((e-1)/2) E_ik [gamma_k h gamma_j^-1]

Diagram conventions.  Strands are read top to bottom; letter s_k^e swaps the
strands at positions k and k+1.  For e = +1 the strand leaving position k
passes over (for e = -1 the one leaving k+1), and the arc coming out under it is the over meridian conjugating
the incoming under meridian by the letter's sign.  Bottom position p is glued
to top position p.  Generators 1..n are the arcs at the top, so g_1 sits at
the first puncture of the disk and gamma_1 is the trivial path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .augment import TOL, AugAssignment, AugmentError, matrix_rank
from .braid import BraidWord, closure_permutation

__all__ = [
    "CordGroupError",
    "WirtingerPresentation",
    "EMatrix",
    "wirtinger_from_braid",
    "bracket_expand",
    "expand_word",
    "verify_E",
    "linking_numbers",
    "e_from_assignment",
    "connect_sum_E",
    "merge_presentations",
]


class CordGroupError(ValueError):
    pass


@dataclass(frozen=True)
class WirtingerPresentation:
    """Generators g_1..g_r; relator (l, e, m, k) means g_l^e g_m g_l^-e g_k^-1.

    ``paths[k]`` (when built from a braid) writes gamma_k as
    ``(s, word)``: the path to disk puncture s followed by a word in earlier
    generators, so that g_k = word^-1 g_s word.
    """

    r: int
    relators: tuple
    n: int = 0
    paths: tuple = ()

    def relator_words(self):
        return [((l, e), (m, 1), (l, -e), (k, -1)) for (l, e, m, k) in self.relators]

    def to_json(self):
        return {"r": self.r, "relators": [list(t) for t in self.relators], "n": self.n}

    @classmethod
    def from_json(cls, data):
        return cls(data["r"], tuple(tuple(t) for t in data["relators"]), data.get("n", 0))


def _num(x):
    return x if isinstance(x, (int, Fraction)) else complex(x)


def _is_exact_matrix(rows):
    return all(isinstance(x, (int, Fraction)) for row in rows for x in row)


@dataclass(frozen=True)
class EMatrix:
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(_num(x) for x in row) for row in self.rows)
        if any(len(row) != len(rows) for row in rows):
            raise CordGroupError("E must be square")
        object.__setattr__(self, "rows", rows)

    @property
    def r(self):
        return len(self.rows)

    @property
    def exact(self):
        return _is_exact_matrix(self.rows)

    @property
    def mu0(self):
        return 1 - self.rows[0][0]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i - 1][j - 1]

    def rank(self):
        return matrix_rank([list(r) for r in self.rows], self.exact)

    def to_json(self):
        def enc(x):
            return str(x) if isinstance(x, (int, Fraction)) else [x.real, x.imag]

        return {"r": self.r, "exact": self.exact, "rows": [[enc(x) for x in row] for row in self.rows]}

    @classmethod
    def from_json(cls, data):
        def dec(x):
            return complex(x[0], x[1]) if isinstance(x, list) else Fraction(x)

        return cls(tuple(tuple(dec(x) for x in row) for row in data["rows"]))


# ---------------------------------------------------------------- presentations


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, keep, drop):
        self.parent[self.find(drop)] = self.find(keep)


def _free_reduce(word):
    out = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def _inverse(word):
    return tuple((g, -e) for g, e in reversed(word))


def wirtinger_from_braid(b: BraidWord) -> WirtingerPresentation:
    """One generator per arc of the closed braid diagram, one relator per crossing."""
    n = b.strands
    if closure_permutation(b)[1] != 1:
        raise CordGroupError(f"closure of {b} is a link, not a knot")
    # arcs are labelled 0..n-1 at the top, then n, n+1, ... as crossings create them
    current = list(range(n))
    raw = []  # (over, sign, under_in, under_out)
    nxt = n
    for x in b.letters:
        k = abs(x) - 1
        e = 1 if x > 0 else -1
        left, right = current[k], current[k + 1]
        # after the crossing the strand from k+1 is at k and vice versa
        if e > 0:
            over, under = left, right
            current[k], current[k + 1] = nxt, over
        else:
            over, under = right, left
            current[k], current[k + 1] = over, nxt
        raw.append((over, e, under, nxt))
        nxt += 1
    uf = _UnionFind()
    for p in range(n):
        uf.union(p, current[p])
    labels = {}
    for a in range(nxt):
        root = uf.find(a)
        if root not in labels:
            labels[root] = len(labels) + 1
    relators = tuple((labels[uf.find(o)], e, labels[uf.find(u)], labels[uf.find(out)]) for o, e, u, out in raw)
    # paths: g_out = g_o^e g_u g_o^-e, so gamma_out = gamma_u g_o^-e
    paths = {labels[uf.find(p)]: (labels[uf.find(p)], ()) for p in range(n)}
    changed = True
    while changed:
        changed = False
        for o, e, u, out in raw:
            lo, lu, lout = labels[uf.find(o)], labels[uf.find(u)], labels[uf.find(out)]
            if lout not in paths and lu in paths:
                s, w = paths[lu]
                paths[lout] = (s, _free_reduce(w + ((lo, -e),)))
                changed = True
    r = len(labels)
    return WirtingerPresentation(r, relators, n, tuple(paths[k] for k in range(1, r + 1)))


def merge_presentations(p1: WirtingerPresentation, p2: WirtingerPresentation) -> WirtingerPresentation:
    """Connect sum: g_1 is shared, the other generators of ``p2`` shift past ``p1``'s."""
    shift = p1.r - 1

    def m(k):
        return 1 if k == 1 else k + shift

    rel2 = tuple((m(l), e, m(mm), m(k)) for (l, e, mm, k) in p2.relators)
    return WirtingerPresentation(p1.r + p2.r - 1, p1.relators + rel2)


# ---------------------------------------------------------------- brackets


def _mu_factor(mu0, e):
    return 1 if e > 0 else 1 / mu0


def expand_word(word, E: EMatrix):
    """Matrix of brackets [gamma_i word gamma_j^-1] for all i, j."""
    mu0 = E.mu0
    V = [list(row) for row in E.rows]
    r = E.r
    col = [[E.rows[i][k] for i in range(r)] for k in range(r)]
    for k, e in reversed(word):
        if not 1 <= k <= r:
            raise CordGroupError(f"generator g_{k} out of range 1..{r}")
        c = e * _mu_factor(mu0, e)
        Ek = col[k - 1]
        row_k = V[k - 1]
        V = [[V[i][j] - c * Ek[i] * row_k[j] for j in range(r)] for i in range(r)]
    return V


def bracket_expand(i: int, word, j: int, E: EMatrix):
    """epsilon([gamma_i word gamma_j^-1]) for a word of (generator, +-1) letters."""
    if not (1 <= i <= E.r and 1 <= j <= E.r):
        raise CordGroupError("index out of range")
    return expand_word(tuple(word), E)[i - 1][j - 1]


def _close(a, b, tol):
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return a == b
    return abs(complex(a) - complex(b)) <= tol * max(1.0, abs(complex(b)))


def verify_E(pres: WirtingerPresentation, E: EMatrix, tol: float = TOL) -> bool:
    """Equal diagonal outside {0, 1}, and [gamma_i R gamma_j^-1] = E_ij for every relator R."""
    if pres.r != E.r:
        raise CordGroupError(f"presentation has {pres.r} generators, E is {E.r}x{E.r}")
    d = E.rows[0][0]
    if any(not _close(E.rows[k][k], d, tol) for k in range(E.r)):
        return False
    if _close(d, 0, tol) or _close(d, 1, tol):
        return False
    for R in pres.relator_words():
        V = expand_word(R, E)
        for i in range(E.r):
            for j in range(E.r):
                if not _close(V[i][j], E.rows[i][j], tol):
                    return False
    return True


# ---------------------------------------------------------------- from HC0 data


def linking_numbers(b: BraidWord) -> list[int]:
    """r_i for the disk punctures: all zero for paths running straight along the disk."""
    return [0] * b.strands


def e_from_assignment(A: AugAssignment, b: BraidWord, pres: WirtingerPresentation | None = None) -> EMatrix:
    """E on all arcs of the closed braid, starting from E_ij = mu0^(r_i-r_j) eps(A)_ij on the disk."""
    if A.n != b.strands:
        raise AugmentError(f"assignment has n={A.n}, braid has {b.strands} strands")
    pres = pres or wirtinger_from_braid(b)
    n = b.strands
    mu0 = A.mu0
    rl = linking_numbers(b)
    EA = A.eps_A()
    disk = [[mu0 ** (rl[i] - rl[j]) * EA[i][j] for j in range(n)] for i in range(n)]
    if pres.r == n:
        return EMatrix(tuple(tuple(row) for row in disk))
    # rewrite every path in disk generators; paths only mention earlier arcs
    disk_words: dict = {}

    def disk_word(k):
        if k not in disk_words:
            s, w = pres.paths[k - 1]
            out = []
            for g, e in w:
                s2, w2 = disk_word(g)
                out.extend(_inverse(w2))
                out.append((s2, e))
                out.extend(w2)
            disk_words[k] = (s, _free_reduce(tuple(out)))
        return disk_words[k]

    full = {}
    Edisk = EMatrix(tuple(tuple(row) for row in disk))
    for k in range(1, pres.r + 1):
        for l in range(1, pres.r + 1):
            s, wk = disk_word(k)
            t, wl = disk_word(l)
            full[(k, l)] = bracket_expand(s, wk + _inverse(wl), t, Edisk)
    return EMatrix(tuple(tuple(full[(k, l)] for l in range(1, pres.r + 1)) for k in range(1, pres.r + 1)))


def connect_sum_E(E1: EMatrix, E2: EMatrix, tol: float = TOL) -> EMatrix:
    """Block matrix of size r1 + r2 - 1 for the connect sum; g_1 is shared."""
    if not _close(E1.rows[0][0], E2.rows[0][0], tol):
        raise CordGroupError("the two matrices have different mu0")
    d = E1.rows[0][0]
    r1, r2 = E1.r, E2.r
    size = r1 + r2 - 1
    out = [[0] * size for _ in range(size)]
    for i in range(r1):
        for j in range(r1):
            out[i][j] = E1.rows[i][j]
    for i in range(1, r2):
        for j in range(1, r2):
            out[r1 + i - 1][r1 + j - 1] = E2.rows[i][j]
    for i in range(r1):
        for j in range(1, r2):
            out[i][r1 + j - 1] = E1.rows[i][0] * E2.rows[0][j] / d
    for i in range(1, r2):
        for j in range(r1):
            out[r1 + i - 1][j] = E2.rows[i][0] * E1.rows[0][j] / d
    return EMatrix(tuple(tuple(row) for row in out))
