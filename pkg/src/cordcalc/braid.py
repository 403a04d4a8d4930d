"""Braid words in the Artin generators.

A word is a tuple of signed indices: ``k`` stands for sigma_k and ``-k`` for
its inverse.  Words are never reduced implicitly; :func:`free_reduce` is the
only operation that cancels letters.

Permutation convention: sigma_k acts as the transposition (k, k+1), and the
letters are composed left to right, so the strand entering at position ``i``
leaves at position ``closure_permutation(b)[0][i - 1]``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from importlib import resources
from typing import Iterable

__all__ = [
    "BraidError",
    "BraidWord",
    "parse_braid",
    "writhe",
    "band_generator",
    "include",
    "mirror",
    "concat",
    "inverse",
    "power",
    "free_reduce",
    "closure_permutation",
    "is_knot",
    "torus_braid",
    "load_knot_table",
    "knot_braid",
    "from_letters",
]


class BraidError(ValueError):
    pass


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise BraidError(f"need at least one strand, got {self.strands}")
        letters = tuple(int(x) for x in self.letters)
        object.__setattr__(self, "letters", letters)
        for x in letters:
            if x == 0 or abs(x) >= self.strands:
                raise BraidError(f"letter {x} invalid in B_{self.strands}")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self):
        if not self.letters:
            return f"<empty braid in B_{self.strands}>"
        return " ".join(str(x) for x in self.letters)

    def pairs(self):
        """Letters as ``(k, sign)`` pairs."""
        return [(abs(x), 1 if x > 0 else -1) for x in self.letters]


_POWER_TOKEN = re.compile(r"^[sS](?:igma)?_?(\d+)(?:\^\{?([+-]?\d+)\}?)?$")


def _tokens(text):
    return [t for t in re.split(r"[\s,]+", text.strip().strip("[]")) if t]


def parse_braid(text: str, strands: int | None = None) -> BraidWord:
    """Parse ``"1 1 -2"``, ``"1,1,-2"``, ``"[1,1,-2]"`` or ``"s1^2 s2^-1"``."""
    letters: list[int] = []
    for tok in _tokens(text):
        m = _POWER_TOKEN.match(tok)
        if m:
            k = int(m.group(1))
            e = int(m.group(2)) if m.group(2) is not None else 1
            if k == 0:
                raise BraidError(f"generator index 0 in token {tok!r}")
            letters.extend([k if e > 0 else -k] * abs(e))
            continue
        try:
            x = int(tok)
        except ValueError:
            raise BraidError(f"malformed braid token {tok!r}") from None
        if x == 0:
            raise BraidError("braid letter 0 is not a generator")
        letters.append(x)
    if strands is None:
        strands = max((abs(x) for x in letters), default=0) + 1
    return BraidWord(strands, tuple(letters))


def writhe(b: BraidWord) -> int:
    return sum(1 if x > 0 else -1 for x in b.letters)


def band_generator(i: int, j: int, n: int) -> BraidWord:
    """sigma_i ... sigma_{j-2} sigma_{j-1} sigma_{j-2}^-1 ... sigma_i^-1."""
    if not 1 <= i < j <= n:
        raise BraidError(f"band generator needs 1 <= i < j <= n, got ({i}, {j}, {n})")
    up = list(range(i, j - 1))
    return BraidWord(n, tuple(up + [j - 1] + [-k for k in reversed(up)]))


def include(b: BraidWord, extra: int = 1) -> BraidWord:
    if extra < 0:
        raise BraidError("cannot remove strands")
    return BraidWord(b.strands + extra, b.letters)


def mirror(b: BraidWord) -> BraidWord:
    return BraidWord(b.strands, tuple(-x for x in b.letters))


def concat(*words: BraidWord) -> BraidWord:
    if not words:
        raise BraidError("concat needs at least one word")
    n = words[0].strands
    if any(w.strands != n for w in words):
        raise BraidError("strand counts differ")
    return BraidWord(n, tuple(x for w in words for x in w.letters))


def inverse(b: BraidWord) -> BraidWord:
    return BraidWord(b.strands, tuple(-x for x in reversed(b.letters)))


def power(b: BraidWord, e: int) -> BraidWord:
    if e < 0:
        b, e = inverse(b), -e
    return BraidWord(b.strands, b.letters * e)


def free_reduce(b: BraidWord) -> BraidWord:
    out: list[int] = []
    for x in b.letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return BraidWord(b.strands, tuple(out))


def closure_permutation(b: BraidWord) -> tuple[tuple[int, ...], int]:
    """Return ``(perm, cycles)``; ``perm[i-1]`` is where strand ``i`` exits."""
    n = b.strands
    # pos_of[s] = current position of the strand that started at s
    at = list(range(1, n + 1))  # at[p-1] = starting label of strand now at p
    for x in b.letters:
        k = abs(x)
        at[k - 1], at[k] = at[k], at[k - 1]
    perm = [0] * n
    for p, s in enumerate(at, start=1):
        perm[s - 1] = p
    seen = [False] * n
    cycles = 0
    for s in range(n):
        if not seen[s]:
            cycles += 1
            t = s
            while not seen[t]:
                seen[t] = True
                t = perm[t] - 1
    return tuple(perm), cycles


def is_knot(b: BraidWord) -> bool:
    return closure_permutation(b)[1] == 1


def torus_braid(p: int, q: int) -> BraidWord:
    """(sigma_1 ... sigma_{p-1})^q in B_p; its closure is T(p, q)."""
    if p < 1 or q < 0:
        raise BraidError("torus braid needs p >= 1, q >= 0")
    return BraidWord(p, tuple(range(1, p)) * q)


_TORUS_NAME = re.compile(r"^T\(?\s*(\d+)\s*[,_ ]\s*(\d+)\s*\)?$")


def load_knot_table(path=None) -> dict[str, tuple[BraidWord, str]]:
    """Read ``name<TAB>strands<TAB>word[<TAB>source]`` rows; ``#`` starts a comment."""
    if path is None:
        text = resources.files("cordcalc").joinpath("data/knots.tsv").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    table = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) < 3:
            raise BraidError(f"knot table line {lineno}: expected at least 3 columns")
        name, strands, word = cols[0].strip(), int(cols[1]), cols[2].strip()
        source = cols[3].strip() if len(cols) > 3 else ""
        table[name] = (parse_braid(word, strands), source)
    return table


def knot_braid(name: str, table: dict | None = None) -> BraidWord:
    m = _TORUS_NAME.match(name.strip())
    if m:
        p, q = int(m.group(1)), int(m.group(2))
        if math.gcd(p, q) != 1:
            raise BraidError(f"T({p},{q}) is not a knot")
        return torus_braid(p, q)
    if table is None:
        table = load_knot_table()
    try:
        return table[name][0]
    except KeyError:
        raise BraidError(f"unknown knot {name!r}") from None


def from_letters(letters: Iterable[int], strands: int) -> BraidWord:
    return BraidWord(strands, tuple(letters))
