"""Braid-group action on the free algebra and the Phi^L / Phi^R calculus.

For a word ``B = l1 l2 ... lm`` the automorphism is ``phi_B = phi_l1 o ... o phi_lm``.
Generator images of a word are built left to right: if ``I`` holds the images
under ``phi_{l1..l(k-1)}`` then the images under ``phi_{l1..lk}`` are
``I(phi_lk(g))``.  Every substitution therefore plugs the (large) prefix images
into a tiny single-letter image, which is much cheaper than the reverse.
"""

from __future__ import annotations

from functools import lru_cache

from .braid import BraidWord, include
from .ring import (
    CommPoly,
    NCPoly,
    PolyRing,
    RingError,
    a_var_name,
    aug_ring,
    gen,
    gen_ij,
    involution,
    substitute_nc,
)

__all__ = [
    "PhiError",
    "FreeMatrix",
    "phi_generator_image",
    "phi_images",
    "phi_apply",
    "phi_L",
    "phi_R",
    "chain_compose",
    "chain_compose_R",
    "check_transpose_bar",
    "check_sandwich",
    "check_chain_rule",
    "check_inverse",
    "abelian_images",
    "abelian_phi",
    "evaluate_phi",
    "evaluate_phi_images",
]


class PhiError(RuntimeError):
    """Raised when extraction finds a term the braid action cannot produce."""


class FreeMatrix:
    """Square matrix over any ring whose elements support ``+``, ``*`` and ``== 0``."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = [list(r) for r in rows]
        if any(len(r) != len(self.rows) for r in self.rows):
            raise ValueError("matrix must be square")

    @property
    def size(self):
        return len(self.rows)

    @classmethod
    def identity(cls, n, one=1, zero=0, factory=None):
        f = factory or (lambda c: c)
        return cls([[f(one if i == j else zero) for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries, zero=0):
        n = len(entries)
        return cls([[entries[i] if i == j else zero for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def map(self, f):
        return FreeMatrix([[f(x) for x in r] for r in self.rows])

    def transpose(self):
        n = self.size
        return FreeMatrix([[self.rows[j][i] for j in range(n)] for i in range(n)])

    def __matmul__(self, other):
        n = self.size
        if other.size != n:
            raise ValueError("size mismatch")
        zero = _zero_like(self.rows + other.rows)
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = None
                for k in range(n):
                    a = self.rows[i][k]
                    b = other.rows[k][j]
                    if _is_zero(a) or _is_zero(b):
                        continue
                    t = a * b
                    acc = t if acc is None else acc + t
                row.append(zero if acc is None else acc)
            out.append(row)
        return FreeMatrix(out)

    def __add__(self, other):
        return FreeMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return FreeMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __eq__(self, other):
        if not isinstance(other, FreeMatrix) or other.size != self.size:
            return NotImplemented
        return all(_is_zero(a - b) for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def entries(self):
        return [x for r in self.rows for x in r]

    def is_zero(self):
        return all(_is_zero(x) for x in self.entries())

    def det(self):
        """Laplace expansion; only meant for commutative entries and small sizes."""
        return _det(self.rows)

    def __str__(self):
        return "\n".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)

    __repr__ = __str__

    def to_json(self):
        return [[x.to_json() if hasattr(x, "to_json") else str(x) for x in r] for r in self.rows]


def _is_zero(x):
    if isinstance(x, (NCPoly, CommPoly)):
        return not x.terms
    return x == 0


def _zero_like(rows):
    for r in rows:
        for x in r:
            if isinstance(x, NCPoly):
                return NCPoly({}, x.n)
            if isinstance(x, CommPoly):
                return x.ring.zero()
    return 0


def _det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = None
    for j in range(n):
        a = rows[0][j]
        if _is_zero(a):
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        t = a * _det(minor)
        if j % 2:
            t = -t
        total = t if total is None else total + t
    return 0 if total is None else total


# ---------------------------------------------------------------- case table


def _g(i, j, n, c=1):
    return NCPoly({(gen(i, j),): c}, n)


def _image_pos(k, i, j, n):
    """phi_{sigma_k}(a_ij)."""
    k1 = k + 1
    if i == k and j == k1:
        return _g(k1, k, n, -1)
    if i == k1 and j == k:
        return _g(k, k1, n, -1)
    if i == k1:
        return _g(k, j, n)
    if j == k1:
        return _g(i, k, n)
    if i == k:
        return NCPoly({(gen(k1, j),): 1, (gen(k1, k), gen(k, j)): -1}, n)
    if j == k:
        return NCPoly({(gen(i, k1),): 1, (gen(i, k), gen(k, k1)): -1}, n)
    return _g(i, j, n)


def _image_neg(k, i, j, n):
    """phi_{sigma_k^-1}(a_ij); the table above with k and k+1 exchanged."""
    k1 = k + 1
    if i == k and j == k1:
        return _g(k1, k, n, -1)
    if i == k1 and j == k:
        return _g(k, k1, n, -1)
    if i == k:
        return _g(k1, j, n)
    if j == k:
        return _g(i, k1, n)
    if i == k1:
        return NCPoly({(gen(k, j),): 1, (gen(k, k1), gen(k1, j)): -1}, n)
    if j == k1:
        return NCPoly({(gen(i, k),): 1, (gen(i, k1), gen(k1, k)): -1}, n)
    return _g(i, j, n)


def phi_generator_image(k: int, sign: int, g, n: int) -> NCPoly:
    """Image of one generator (an ``(i, j)`` pair or packed code) under phi_{sigma_k^sign}."""
    if not 1 <= k <= n - 1:
        raise PhiError(f"sigma_{k} is not in B_{n}")
    i, j = g if isinstance(g, tuple) else gen_ij(g)
    if i == j or not (1 <= i <= n and 1 <= j <= n):
        raise PhiError(f"a_{i}{j} is not a generator of A_{n}")
    return _image_pos(k, i, j, n) if sign > 0 else _image_neg(k, i, j, n)


@lru_cache(maxsize=None)
def _letter_images(k, sign, n):
    return {
        gen(i, j): phi_generator_image(k, sign, (i, j), n)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j
    }


def _all_gens(n):
    return [gen(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]


def phi_images(b: BraidWord, n: int | None = None) -> dict[int, NCPoly]:
    """Images of every generator of A_n under phi_b (``n`` defaults to ``b.strands``)."""
    n = b.strands if n is None else n
    if n < b.strands:
        raise PhiError("ambient algebra smaller than the braid")
    images = {g: NCPoly({(g,): 1}, n) for g in _all_gens(n)}
    for k, s in b.pairs():
        step = _letter_images(k, s, n)
        images = {g: substitute_nc(step[g], images, n) for g in images}
    return images


def phi_apply(b: BraidWord, p: NCPoly, n: int | None = None) -> NCPoly:
    n = b.strands if n is None else n
    if p.n is not None and p.n != n:
        raise RingError(f"ambient mismatch: A_{p.n} vs A_{n}")
    if not p.generators():
        return NCPoly(dict(p.terms), n)
    return substitute_nc(p, phi_images(b, n), n)


# ---------------------------------------------------------------- extraction


def _extract(poly: NCPoly, n: int, side: str) -> list[NCPoly]:
    """Split sum_j c_j a_{j,n+1} (side L) or sum_j a_{n+1,j} c_j (side R)."""
    top = n + 1
    parts = [dict() for _ in range(n)]
    for w, c in poly.terms.items():
        if not w:
            raise PhiError(f"constant term in phi image: {poly}")
        touches = [t for t, g in enumerate(w) if top in gen_ij(g)]
        pos = len(w) - 1 if side == "L" else 0
        if touches != [pos]:
            raise PhiError(f"malformed term {w} in phi image for side {side}")
        i, j = gen_ij(w[pos])
        if side == "L":
            if j != top:
                raise PhiError(f"term {w} does not end in a_(j,n+1)")
            col, rest = i, w[:-1]
        else:
            if i != top:
                raise PhiError(f"term {w} does not start with a_(n+1,j)")
            col, rest = j, w[1:]
        d = parts[col - 1]
        d[rest] = d.get(rest, 0) + c
    return [NCPoly(d, n) for d in parts]


def phi_L(b: BraidWord) -> FreeMatrix:
    """Whole-word Phi^L: coefficients of phi_b*(a_{i,n+1}) on a_{j,n+1}."""
    n = b.strands
    big = include(b)
    images = phi_images(big)
    return FreeMatrix([_extract(images[gen(i, n + 1)], n, "L") for i in range(1, n + 1)])


def phi_R(b: BraidWord) -> FreeMatrix:
    """Whole-word Phi^R: phi_b*(a_{n+1,i}) = sum_j a_{n+1,j} (Phi^R)_{ji}."""
    n = b.strands
    big = include(b)
    images = phi_images(big)
    cols = [_extract(images[gen(n + 1, i)], n, "R") for i in range(1, n + 1)]
    return FreeMatrix([[cols[i][j] for i in range(n)] for j in range(n)])


@lru_cache(maxsize=None)
def _letter_phi(k, sign, n):
    w = BraidWord(n, (k * sign,))
    return phi_L(w), phi_R(w)


def _apply_images(M: FreeMatrix, images, n) -> FreeMatrix:
    return M.map(lambda p: substitute_nc(p, images, n) if p.generators() else p)


def _nc_identity(n):
    return FreeMatrix([[NCPoly.const(1 if i == j else 0, n) for j in range(n)] for i in range(n)])


def chain_compose(b: BraidWord, side: str = "L") -> FreeMatrix:
    """Phi^L (or Phi^R) built letter by letter with the chain rule."""
    n = b.strands
    mat = _nc_identity(n)
    images = {g: NCPoly({(g,): 1}, n) for g in _all_gens(n)}
    for k, s in b.pairs():
        L, R = _letter_phi(k, s, n)
        if side == "L":
            mat = _apply_images(L, images, n) @ mat
        else:
            mat = mat @ _apply_images(R, images, n)
        step = _letter_images(k, s, n)
        images = {g: substitute_nc(step[g], images, n) for g in images}
    return mat


def chain_compose_R(b: BraidWord) -> FreeMatrix:
    return chain_compose(b, "R")


# ---------------------------------------------------------------- checks


def check_transpose_bar(b: BraidWord) -> bool:
    return phi_R(b) == phi_L(b).map(involution).transpose()


def check_sandwich(b: BraidWord) -> bool:
    from .hc0 import matrix_A

    n = b.strands
    A = matrix_A(n)
    lhs = _apply_images(A, phi_images(b), n)
    return lhs == phi_L(b) @ A @ phi_R(b)


def check_chain_rule(b1: BraidWord, b2: BraidWord) -> bool:
    from .braid import concat

    n = b1.strands
    both = concat(b1, b2)
    img = phi_images(b1)
    left = _apply_images(phi_L(b2), img, n) @ phi_L(b1)
    right = phi_R(b1) @ _apply_images(phi_R(b2), img, n)
    return phi_L(both) == left and phi_R(both) == right


def check_inverse(b: BraidWord) -> bool:
    """phi_b(Phi^L_{b^-1}) . Phi^L_b = 1.

    phi_b(Phi^L_{b^-1}) is expanded as the product of
    phi_{s_1..s_k}(Phi^L_{s_k^-1}) for k = 1..m, so images are only ever
    substituted into single-letter matrices.
    """
    n = b.strands
    letters = b.letters
    prod = _nc_identity(n)
    for k in range(1, len(letters) + 1):
        x = letters[k - 1]
        L, _ = _letter_phi(abs(x), -1 if x > 0 else 1, n)
        prod = prod @ _apply_images(L, phi_images(BraidWord(n, tuple(letters[:k]))), n)
    return prod @ phi_L(b) == _nc_identity(n)


# ---------------------------------------------------------------- commutative fast path


def _abelian_letter(k, s, n, ring, symmetric):
    out = {}
    for g, img in _letter_images(k, s, n).items():
        out[g] = _ab(img, ring, symmetric)
    return out


def _ab(p: NCPoly, ring: PolyRing, symmetric: bool) -> CommPoly:
    from .ring import abelianize

    return abelianize(p, ring, symmetric)


def _comm_substitute(p: CommPoly, images: dict[int, CommPoly], var_gen: dict[int, int]):
    """Substitute abelian generator images into a commutative polynomial.

    ``var_gen`` maps ring variable index -> generator code.
    """
    ring = p.ring
    out = ring.zero()
    powers: dict = {}
    for e, c in p.terms.items():
        term = None
        base = [0] * len(e)
        for k, x in enumerate(e):
            if not x:
                continue
            g = var_gen.get(k)
            if g is None:
                base[k] = x
                continue
            key = (g, x)
            pw = powers.get(key)
            if pw is None:
                pw = powers[key] = images[g] ** x
            term = pw if term is None else term * pw
        mono = ring.monomial(base, c)
        out = out + (mono if term is None else mono * term)
    return out


def abelian_images(b: BraidWord, ring: PolyRing, symmetric: bool = False, n: int | None = None):
    """Generator images of phi_b computed directly in the commutative quotient."""
    n = b.strands if n is None else n
    idx = ring.index
    var_gen = {}
    images = {}
    for g in _all_gens(n):
        i, j = gen_ij(g)
        name = a_var_name(i, j, symmetric)
        images[g] = ring.var(name)
        if not symmetric or i < j:
            var_gen[idx[name]] = g
    for k, s in b.pairs():
        step = _abelian_letter(k, s, n, ring, symmetric)
        images = {g: _comm_substitute(step[g], images, var_gen) for g in images}
    return images, var_gen


def abelian_phi(b: BraidWord, symmetric: bool = False, ring: PolyRing | None = None, side: str = "L"):
    """Phi^L (or Phi^R) of ``b`` in the commutative quotient, via the chain rule.

    Entries live in ``ring`` (default: the a-variables of A_n only).
    """
    n = b.strands
    if ring is None:
        ring = aug_ring(n, symmetric, with_lam_mu=False)
    idx = ring.index
    var_gen = {}
    images = {}
    for g in _all_gens(n):
        i, j = gen_ij(g)
        name = a_var_name(i, j, symmetric)
        images[g] = ring.var(name)
        if not symmetric or i < j:
            var_gen[idx[name]] = g
    mat = FreeMatrix([[ring.const(1 if i == j else 0) for j in range(n)] for i in range(n)])
    for k, s in b.pairs():
        L, R = _letter_phi(k, s, n)
        M = L if side == "L" else R
        Mc = M.map(lambda p: _comm_substitute(_ab(p, ring, symmetric), images, var_gen))
        mat = Mc @ mat if side == "L" else mat @ Mc
        step = _abelian_letter(k, s, n, ring, symmetric)
        images = {g: _comm_substitute(step[g], images, var_gen) for g in images}
    return mat


# ---------------------------------------------------------------- numeric evaluation


def _eval_nc(p: NCPoly, vals):
    total = 0
    for w, c in p.terms.items():
        t = c
        for g in w:
            t = t * vals[g]
        total = total + t
    return total


def _num_matmul(X, Y):
    n = len(X)
    return [[sum(X[i][k] * Y[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def evaluate_phi(b: BraidWord, values: dict):
    """epsilon(Phi^L_b) and epsilon(Phi^R_b) for a field-valued point.

    ``values`` maps every generator code of A_n to a number.  Any map to a
    field kills commutators, so ``epsilon o phi_prefix`` is again determined by
    its values on generators and can be carried letter by letter alongside
    the chain rule.  Cost is linear in the word length.
    """
    n = b.strands
    vals = dict(values)
    one, zero = 1, 0
    L = [[one if i == j else zero for j in range(n)] for i in range(n)]
    R = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for k, s in b.pairs():
        PL, PR = _letter_phi(k, s, n)
        eL = [[_eval_nc(p, vals) for p in row] for row in PL.rows]
        eR = [[_eval_nc(p, vals) for p in row] for row in PR.rows]
        L = _num_matmul(eL, L)
        R = _num_matmul(R, eR)
        step = _letter_images(k, s, n)
        vals = {g: _eval_nc(step[g], vals) for g in vals}
    return L, R


def evaluate_phi_images(b: BraidWord, values: dict) -> dict:
    """epsilon(phi_b(a_ij)) for every generator, by the same propagation."""
    n = b.strands
    vals = dict(values)
    for k, s in b.pairs():
        step = _letter_images(k, s, n)
        vals = {g: _eval_nc(step[g], vals) for g in vals}
    return vals
