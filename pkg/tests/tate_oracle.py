"""
Reduction type, Tamagawa number and geometric component count of
y^2 = x^3 + a2 x^2 + a4 x + a6 at a prime p >= 5, read off the valuations of
the discriminant and c4. Only the cases used as an oracle by the pipeline
tests are covered.
"""

from collections import namedtuple

import sympy
from sympy.ntheory import is_quad_residue

# components: geometric count of special-fibre components of the Neron model
Reduction = namedtuple("Reduction", ["symbol", "n", "tamagawa", "components"])

# v(Delta) of an additive fibre with v(c4) > 0: (symbol, c, components)
ADDITIVE = {
    2: ("II", 1, 1),
    3: ("III", 2, 2),
}


def _v(n: int, p: int) -> int:
    return sympy.multiplicity(p, abs(n)) if n else 10 ** 9


def invariants(a2: int, a4: int, a6: int):
    b2, b4, b6 = 4 * a2, 2 * a4, 4 * a6
    b8 = 4 * a2 * a6 - a4 ** 2
    c4 = 16 * a2 ** 2 - 48 * a4
    c6 = -64 * a2 ** 3 + 288 * a2 * a4 - 864 * a6
    disc = -b2 ** 2 * b8 - 8 * b4 ** 3 - 27 * b6 ** 2 + 9 * b2 * b4 * b6
    return c4, c6, disc


def reduction(a2: int, a4: int, a6: int, p: int) -> Reduction:
    if p < 5:
        raise NotImplementedError("the oracle works for p >= 5 only")
    c4, c6, disc = invariants(a2, a4, a6)
    vd = _v(disc, p)
    if vd == 0:
        return Reduction("I0", 0, 1, 1)
    if _v(c4, p) == 0:
        split = is_quad_residue(-c6 % p, p)
        c = vd if split else (2 if vd % 2 == 0 else 1)
        return Reduction(f"I{vd}", vd, c, vd)
    if vd not in ADDITIVE:
        raise NotImplementedError(f"additive reduction with v(Delta) = {vd}")
    symbol, c, components = ADDITIVE[vd]
    return Reduction(symbol, 0, c, components)
