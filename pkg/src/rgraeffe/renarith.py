"""Renormalized log-polar arithmetic.

A nonzero complex number ``w`` is stored at renormalization index ``k`` as
the pair ``(2**-k * ln|w|, arg w)``.  Zero is the pair ``(-inf, 0)``.  The
operators below act on these pairs directly, so the stored magnitudes of
the ``k``-th Graeffe iterate stay bounded while the true coefficients grow
like ``|w|**(2**k)``.

The scalar functions whose names end in ``_raw`` work on bare floats and
are what the pure-Python kernel calls in its inner loop; the compiled
kernel reimplements exactly the same sequence of floating-point operations.
"""
from __future__ import annotations

import cmath
import math
import sys
import warnings
from dataclasses import dataclass

from .errors import IndexMismatchError, RenRangeError, TieError

__all__ = [
    "RenValue",
    "wrap",
    "rentimes",
    "renpow",
    "renscal",
    "renplus",
    "renplus_limit",
    "reindex",
    "logpolar",
    "unlogpolar",
    "SHORTCUT",
]

PI = math.pi
TWO_PI = 2.0 * math.pi
NEG_INF = -math.inf
LN2 = math.log(2.0)

#: Below this exponent the smaller summand is under one ulp of the larger.
SHORTCUT = math.log(sys.float_info.epsilon) - 1.0


def wrap(t: float) -> float:
    """Reduce an angle to [-pi, pi]; -pi maps to +pi."""
    r = math.remainder(t, TWO_PI)
    if r == -PI:
        return PI
    return r


def renplus_raw(a: float, alpha: float, b: float, beta: float, k: int):
    """Renormalized sum of ``(a, alpha)`` and ``(b, beta)`` at index ``k``.

    Follows the two-branch recipe: the operand with the strictly larger
    magnitude sets the frame, otherwise the second one does.  The sum
    ``e^{i*alpha} + e^{i*beta + 2^k (b - a)}`` is evaluated as
    ``e^{i*alpha} * (1 + e^{i*(beta - alpha) + t})`` so that antipodal
    arguments cancel exactly.
    """
    if a == NEG_INF:
        if b == NEG_INF:
            return NEG_INF, 0.0
        return b, beta
    if b == NEG_INF:
        return a, alpha
    if a > b:
        hi, ha, lo, la = a, alpha, b, beta
    else:
        hi, ha, lo, la = b, beta, a, alpha
    try:
        t = math.ldexp(lo - hi, k)
    except OverflowError:
        return hi, ha
    if t < SHORTCUT:
        return hi, ha
    delta = wrap(la - ha)
    e = math.exp(t)
    if delta == PI:
        re = 1.0 - e
        im = 0.0
    else:
        re = 1.0 + e * math.cos(delta)
        im = e * math.sin(delta)
    if re == 0.0 and im == 0.0:
        return NEG_INF, 0.0
    c = hi + math.ldexp(0.5 * math.log(re * re + im * im), -k)
    return c, wrap(ha + math.atan2(im, re))


@dataclass(frozen=True, slots=True)
class RenValue:
    """A complex quantity in renormalized log-polar coordinates.

    Attributes
    ----------
    mag : float
        ``2**-k * ln|w|``, or ``-inf`` when ``w == 0``.
    arg : float
        ``arg w`` in [-pi, pi]; always 0 for zero.
    k : int
        Renormalization index, ``k >= 0``.
    """

    mag: float
    arg: float = 0.0
    k: int = 0

    def __post_init__(self):
        mag = float(self.mag)
        if math.isnan(mag) or mag == math.inf:
            raise ValueError(f"invalid renormalized magnitude {mag!r}")
        if int(self.k) != self.k or self.k < 0:
            raise ValueError(f"renormalization index must be a non-negative integer, got {self.k!r}")
        arg = 0.0 if mag == NEG_INF else wrap(float(self.arg))
        if math.isnan(arg):
            raise ValueError("argument is NaN")
        object.__setattr__(self, "mag", mag)
        object.__setattr__(self, "arg", arg)
        object.__setattr__(self, "k", int(self.k))

    @property
    def is_zero(self) -> bool:
        return self.mag == NEG_INF


def _check_same_index(x: RenValue, y: RenValue) -> None:
    if x.k != y.k:
        raise IndexMismatchError(f"operands at indices {x.k} and {y.k}; reindex first")


def rentimes(x: RenValue, y: RenValue) -> RenValue:
    """Renormalized product: magnitudes add, arguments add."""
    _check_same_index(x, y)
    if x.mag == NEG_INF or y.mag == NEG_INF:
        return RenValue(NEG_INF, 0.0, x.k)
    return RenValue(x.mag + y.mag, wrap(x.arg + y.arg), x.k)


def renpow(x: RenValue, lam: float) -> RenValue:
    """Renormalized power ``x**lam``: both coordinates are scaled by ``lam``."""
    if x.mag == NEG_INF:
        if lam > 0:
            return x
        if lam == 0:
            return RenValue(0.0, 0.0, x.k)
        raise ZeroDivisionError("zero raised to a negative power")
    return RenValue(lam * x.mag, wrap(lam * x.arg), x.k)


def renscal(z: complex, x: RenValue) -> RenValue:
    """Multiply a renormalized value by an ordinary complex number ``z``."""
    if z == 0:
        warnings.warn("renscal by zero yields a zero coefficient", RuntimeWarning, stacklevel=2)
        return RenValue(NEG_INF, 0.0, x.k)
    if x.mag == NEG_INF:
        return x
    return RenValue(x.mag + math.ldexp(math.log(abs(z)), -x.k), wrap(x.arg + cmath.phase(z)), x.k)


def renplus(x: RenValue, y: RenValue) -> RenValue:
    """Renormalized sum at the common index of ``x`` and ``y``."""
    _check_same_index(x, y)
    c, gamma = renplus_raw(x.mag, x.arg, y.mag, y.arg, x.k)
    return RenValue(c, gamma, x.k)


def renplus_limit(x: RenValue, y: RenValue) -> RenValue:
    """The ``k -> infinity`` limit of :func:`renplus`: the larger operand wins.

    Equal finite magnitudes have no limit and raise :class:`TieError`.  Two
    zeros sum to zero.
    """
    _check_same_index(x, y)
    if x.mag > y.mag:
        return x
    if y.mag > x.mag:
        return y
    if x.mag == NEG_INF:
        return x
    raise TieError(f"limit sum undefined for equal magnitudes {x.mag!r}")


def reindex(x: RenValue, k_new: int) -> RenValue:
    """Express ``x`` at renormalization index ``k_new``."""
    if k_new < 0:
        raise ValueError("k_new must be non-negative")
    if x.mag == NEG_INF:
        return RenValue(NEG_INF, 0.0, k_new)
    return RenValue(math.ldexp(x.mag, x.k - k_new), x.arg, k_new)


def logpolar(w: complex, k: int = 0) -> RenValue:
    """Map a complex number to renormalized coordinates at index ``k``."""
    w = complex(w)
    if w == 0:
        return RenValue(NEG_INF, 0.0, k)
    return RenValue(math.ldexp(math.log(abs(w)), -k), cmath.phase(w), k)


def unlogpolar(x: RenValue) -> complex:
    """Inverse of :func:`logpolar`.

    Raises :class:`RenRangeError` when ``|w| = exp(2**k * mag)`` does not
    fit in a float.
    """
    if x.mag == NEG_INF:
        return 0j
    try:
        modulus = math.exp(math.ldexp(x.mag, x.k))
    except OverflowError:
        modulus = math.inf
    if math.isinf(modulus):
        raise RenRangeError(f"exp(2**{x.k} * {x.mag}) overflows")
    return cmath.rect(modulus, x.arg)
