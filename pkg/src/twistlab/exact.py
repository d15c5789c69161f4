"""Exact residue arithmetic on IEEE doubles.

A double x is the rational m / 2**k (``x.as_integer_ratio()``), so products
like n*x can be reduced modulo an integer without any rounding at all: only
the final conversion back to float rounds.  This is what makes quantities
such as ``{q * alpha}`` trustworthy for q up to 1e12 and beyond, where naive
float multiplication would have lost all the fractional information.
"""

from __future__ import annotations

import math


def mul_mod(n: int, x: float, modulus: int) -> float:
    """Exact representative of n*x mod modulus, returned in [0, modulus).

    n and modulus are integers, x is a float treated as the exact rational
    it stores.  The only rounding is the final int-ratio -> float division.
    """
    if modulus <= 0:
        raise ValueError("modulus must be a positive integer")
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    m, d = x.as_integer_ratio()
    r = (n * m) % (modulus * d)
    return r / d


def mul_mod_signed(n: int, x: float, modulus: int) -> float:
    """Like mul_mod but returned in [-modulus/2, modulus/2)."""
    m, d = x.as_integer_ratio()
    md = modulus * d
    r = (n * m) % md
    if 2 * r >= md:
        r -= md
    return r / d


def frac_dist_mult(n: int, x: float) -> float:
    """Exact distance of n*x to the nearest integer (values in [0, 1/2])."""
    m, d = x.as_integer_ratio()
    r = (n * m) % d
    return min(r, d - r) / d


def frac_part(x: float) -> float:
    """Fractional part {x} in [0, 1)."""
    return x - math.floor(x)
