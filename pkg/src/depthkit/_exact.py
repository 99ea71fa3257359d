"""Exact sign predicates and dyadic weight arithmetic.

Every finite float is a dyadic rational, so sign decisions on small
polynomials of the inputs can always fall back to exact Fraction
arithmetic.  The fast paths below trust the rounded value only when it
clears a forward error bound; ties are resolved exactly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

# A 2x2 determinant of floats suffers at most three roundings; 4 * 2^-53
# of the magnitude sum is a safe separation bound.
_DET_GUARD = 4.0e-16


def sign(value: float) -> int:
    if value > 0.0:
        return 1
    if value < 0.0:
        return -1
    return 0


def cross_sign(ax: float, ay: float, bx: float, by: float) -> int:
    """Exact sign of the determinant ax*by - ay*bx."""
    p = ax * by
    q = ay * bx
    det = p - q
    guard = _DET_GUARD * (abs(p) + abs(q))
    if det > guard:
        return 1
    if det < -guard:
        return -1
    exact = Fraction(float(ax)) * Fraction(float(by)) - Fraction(float(ay)) * Fraction(float(bx))
    if exact > 0:
        return 1
    if exact < 0:
        return -1
    return 0


def dot_sign(ax: float, ay: float, bx: float, by: float) -> int:
    """Exact sign of the inner product ax*bx + ay*by."""
    return cross_sign(ax, -ay, by, bx)


def dyadic_integer_weights(weights: Iterable[float]) -> tuple[list[int], int]:
    """Scale positive finite floats to exact integers over a common denominator.

    Float denominators are powers of two, so their maximum is their lcm and
    the conversion is exact.  Returns (numerators, total).
    """
    fracs = [Fraction(float(w)) for w in weights]
    den = 1
    for f in fracs:
        if f.denominator > den:
            den = f.denominator
    ints = [int(f * den) for f in fracs]
    return ints, sum(ints)


def exact_mass(numerators: Sequence[int], mask) -> int:
    """Sum of selected integer weights; mask is any boolean sequence."""
    return sum(w for w, keep in zip(numerators, mask) if keep)
