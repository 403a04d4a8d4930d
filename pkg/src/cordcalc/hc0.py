"""The matrices A, Lambda, Delta(B) and the defining ideal of HC0 at U = 1.

Two builders share one layout.  ``ideal_generators`` works over the free
algebra and is exact but exponential in word length.  ``abelian_generators``
builds the same entries directly in the commutative quotient through the
chain rule; this is what the augmentation code feeds to Groebner bases.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from .braid import BraidWord, closure_permutation, writhe
from .phi import FreeMatrix, abelian_images, abelian_phi, phi_images, phi_L, phi_R
from .ring import MU, CommPoly, Laurent, NCPoly, PolyRing, a_var_name, aug_ring, cancel_inverses, gen, substitute_nc

__all__ = [
    "HC0Presentation",
    "matrix_A",
    "lambda_matrix",
    "lambda_inverse_matrix",
    "delta_matrix",
    "ideal_generators",
    "matrix_A_comm",
    "abelian_generators",
]


@dataclass(frozen=True)
class HC0Presentation:
    n: int
    braid: BraidWord
    reduced: bool
    generators: tuple = field(default_factory=tuple)

    def to_json(self):
        return {
            "n": self.n,
            "braid": list(self.braid.letters),
            "reduced": self.reduced,
            "generators": [p.to_json() for p in self.generators],
        }


def matrix_A(n: int) -> FreeMatrix:
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            if i == j:
                row.append(NCPoly.const(1 - MU, n))
            elif i < j:
                row.append(NCPoly({(gen(i, j),): 1}, n))
            else:
                row.append(NCPoly({(gen(i, j),): -MU}, n))
        rows.append(row)
    return FreeMatrix(rows)


def _diag_nc(n, first):
    return FreeMatrix([[NCPoly.const((first if i == 0 else 1) if i == j else 0, n) for j in range(n)] for i in range(n)])


def lambda_matrix(b: BraidWord) -> FreeMatrix:
    return _diag_nc(b.strands, Laurent.monomial(1, writhe(b)))


def lambda_inverse_matrix(b: BraidWord) -> FreeMatrix:
    return _diag_nc(b.strands, Laurent.monomial(-1, -writhe(b)))


def delta_matrix(b: BraidWord) -> FreeMatrix:
    return _diag_nc(b.strands, (-1) ** (writhe(b) % 2))


def _check_knot(b):
    if closure_permutation(b)[1] != 1:
        warnings.warn(f"closure of {b} is a link, not a knot", stacklevel=3)


def ideal_generators(b: BraidWord, reduced: bool = True) -> HC0Presentation:
    """Entries of A - Lam Phi^L A and A - A Phi^R Lam^-1 (plus A - Lam phi_b(A) Lam^-1 when unreduced)."""
    _check_knot(b)
    n = b.strands
    A = matrix_A(n)
    Lam = lambda_matrix(b)
    Lam_inv = lambda_inverse_matrix(b)
    mats = [A - Lam @ phi_L(b) @ A, A - A @ phi_R(b) @ Lam_inv]
    if not reduced:
        img = phi_images(b)
        phiA = A.map(lambda p: substitute_nc(p, img, n) if p.generators() else p)
        mats.insert(0, A - Lam @ phiA @ Lam_inv)
    gens = tuple(p for M in mats for p in M.entries())
    return HC0Presentation(n, b, reduced, gens)


# ---------------------------------------------------------------- commutative


def _mu_power(ring: PolyRing, e: int) -> CommPoly:
    return ring.var("mu", e) if e >= 0 else ring.var("mu_inv", -e)


def matrix_A_comm(n: int, ring: PolyRing, symmetric: bool = False) -> FreeMatrix:
    one_minus_mu = ring.one() - ring.var("mu")
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            if i == j:
                row.append(one_minus_mu)
            else:
                x = ring.var(a_var_name(i, j, symmetric))
                row.append(x if i < j else -ring.var("mu") * x)
        rows.append(row)
    return FreeMatrix(rows)


def _diag_comm(ring, n, first):
    return FreeMatrix([[(first if i == 0 else ring.one()) if i == j else ring.zero() for j in range(n)] for i in range(n)])


def abelian_generators(b: BraidWord, symmetric: bool = False, reduced: bool = True, ring: PolyRing | None = None):
    """Images of the HC0 generators in the commutative ring, before Laurent clearing.

    Negative powers of lam and mu are written with ``lam_inv`` and ``mu_inv``.
    Returns ``(ring, generators)``.
    """
    n = b.strands
    w = writhe(b)
    ring = ring or aug_ring(n, symmetric)
    A = matrix_A_comm(n, ring, symmetric)
    Lam = _diag_comm(ring, n, ring.var("lam") * _mu_power(ring, w))
    Lam_inv = _diag_comm(ring, n, ring.var("lam_inv") * _mu_power(ring, -w))
    PL = abelian_phi(b, symmetric, ring, "L")
    PR = abelian_phi(b, symmetric, ring, "R")
    mats = [A - Lam @ PL @ A, A - A @ PR @ Lam_inv]
    if not reduced:
        from .phi import _comm_substitute

        images, var_gen = abelian_images(b, ring, symmetric)
        phiA = A.map(lambda p: _comm_substitute(p, images, var_gen))
        mats.insert(0, A - Lam @ phiA @ Lam_inv)
    return ring, [cancel_inverses(p) for M in mats for p in M.entries()]
