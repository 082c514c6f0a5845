"""Polynomial containers: ordinary coefficients and renormalized coefficients."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import DegenerateInputError, IndexMismatchError
from .renarith import RenValue, unlogpolar

__all__ = ["Poly", "RenPoly"]


@dataclass(frozen=True)
class Poly:
    """Univariate complex polynomial ``f_0 + f_1 x + ... + f_d x^d``.

    ``coeffs`` is ascending and the leading coefficient must be nonzero.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128).reshape(-1)
        if c.size < 2:
            raise DegenerateInputError("polynomial must have degree >= 1")
        if not np.all(np.isfinite(c)):
            raise DegenerateInputError("coefficients must be finite")
        if c[-1] == 0:
            raise DegenerateInputError("degenerate leading coefficient")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.coeffs.imag == 0))

    @classmethod
    def from_roots(cls, roots, leading: complex = 1.0) -> "Poly":
        return cls(leading * P.polyfromroots(np.asarray(roots, dtype=np.complex128)))

    def __call__(self, x):
        return P.polyval(x, self.coeffs)

    def __len__(self):
        return self.coeffs.size


@dataclass(frozen=True)
class RenPoly:
    """Degree-d polynomial with all d + 1 coefficients at one renormalization index.

    ``mags[i]`` is ``2**-k * ln|f_i|`` (``-inf`` for a zero coefficient) and
    ``args[i]`` is ``arg f_i``.
    """

    mags: np.ndarray
    args: np.ndarray
    k: int = 0

    def __post_init__(self):
        m = np.array(self.mags, dtype=np.float64).reshape(-1)
        a = np.array(self.args, dtype=np.float64).reshape(-1)
        if m.shape != a.shape:
            raise ValueError("mags and args must have the same length")
        if m.size < 2:
            raise DegenerateInputError("polynomial must have degree >= 1")
        if np.any(np.isnan(m)) or np.any(m == np.inf) or np.any(~np.isfinite(a)):
            raise ValueError("renormalized coefficients must be finite or -inf")
        if not np.isfinite(m[-1]):
            raise DegenerateInputError("degenerate leading coefficient")
        if self.k < 0:
            raise ValueError("renormalization index must be non-negative")
        a = np.where(m == -np.inf, 0.0, a)
        m.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "mags", m)
        object.__setattr__(self, "args", a)
        object.__setattr__(self, "k", int(self.k))

    @property
    def degree(self) -> int:
        return self.mags.size - 1

    @property
    def coeffs(self) -> list[RenValue]:
        return [RenValue(m, a, self.k) for m, a in zip(self.mags.tolist(), self.args.tolist())]

    @classmethod
    def from_values(cls, values) -> "RenPoly":
        values = list(values)
        ks = {v.k for v in values}
        if len(ks) != 1:
            raise IndexMismatchError(f"coefficients at mixed indices {sorted(ks)}")
        return cls([v.mag for v in values], [v.arg for v in values], ks.pop())

    def to_poly(self) -> Poly:
        """Back to ordinary coefficients; raises RenRangeError on overflow."""
        return Poly([unlogpolar(v) for v in self.coeffs])
