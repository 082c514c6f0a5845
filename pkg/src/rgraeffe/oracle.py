"""Reference root finder (Aberth-Ehrlich simultaneous iteration).

Independent of the Graeffe machinery; used to validate moduli and to
compute separation statistics.  Reliable up to degree about 512 for
well-conditioned inputs such as Kostlan polynomials.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .poly import Poly

__all__ = ["OracleRoots", "find_roots", "sorted_log_moduli", "MAX_DEGREE"]

MAX_DEGREE = 512
_PHASE = 0.4


@dataclass(frozen=True)
class OracleRoots:
    roots: np.ndarray
    residual: float
    converged: bool
    iterations: int = 0


def _eval_ratio(desc, ddesc, rev, drev, n, z):
    """Newton correction p(z)/p'(z), evaluated in 1/z outside the unit disc."""
    out = np.empty_like(z)
    inner = np.abs(z) <= 1
    zi = z[inner]
    if zi.size:
        p = np.polyval(desc, zi)
        dp = np.polyval(ddesc, zi)
        out[inner] = np.where(p == 0, 0, p / dp)
    zo = z[~inner]
    if zo.size:
        u = 1.0 / zo
        q = np.polyval(rev, u)
        dq = np.polyval(drev, u)
        # p(z) = z^n q(1/z)  =>  p/p' = z / (n - u q'(u)/q(u)); an exact root needs no correction
        out[~inner] = np.where(q == 0, 0, zo / (n - u * dq / q))
    return out


def _backward_residual(c, z):
    """Largest component-wise backward error ``|f(z)| / sum_i |f_i| |z|^i`` over the roots."""
    z = np.asarray(z)
    if z.size == 0:
        return 0.0
    a = np.abs(c)
    big = np.abs(z) > 1
    r = np.empty(z.size)
    zs = z[~big]
    r[~big] = np.abs(np.polyval(c[::-1], zs)) / np.polyval(a[::-1], np.abs(zs))
    u = 1.0 / z[big]
    r[big] = np.abs(np.polyval(c, u)) / np.polyval(a, np.abs(u))
    return float(np.max(r))


def find_roots(f, tol: float = 1e-11, max_iter: int = 500) -> OracleRoots:
    """All roots of ``f`` by Aberth-Ehrlich iteration.

    Trailing zero coefficients are split off as exact zero roots.  The
    start is a circle of radius ``|f_0/f_d|**(1/d)`` with phase offset 0.4.
    The iteration stops when the relative corrections reach rounding level,
    or when they stop shrinking for five sweeps while the backward residual
    is already below ``tol``.  ``converged`` means one of these happened.
    """
    f = f if isinstance(f, Poly) else Poly(f)
    c = f.coeffs
    nz = int(np.argmax(c != 0))
    zeros = np.zeros(nz, dtype=np.complex128)
    c = c[nz:]
    n = c.size - 1
    if n == 0:
        return OracleRoots(zeros, 0.0, True, 0)
    c = c / c[-1]
    if n == 1:
        z = np.array([-c[0]])
        return OracleRoots(np.concatenate([z, zeros]), _backward_residual(c, z), True, 0)

    desc = c[::-1]
    ddesc = np.polyder(desc)
    rev = c.copy()
    drev = np.polyder(rev)
    radius = abs(c[0]) ** (1.0 / n)
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + _PHASE))
    eps = np.finfo(float).eps
    it = 0
    stalled = False
    eye = np.eye(n, dtype=bool)
    polish = False
    best, since_best = np.inf, 0
    with np.errstate(all="ignore"):
        for it in range(1, max_iter + 1):
            w = _eval_ratio(desc, ddesc, rev, drev, n, z)
            diff = z[:, None] - z[None, :]
            diff[eye] = 1.0
            s = (1.0 / diff).sum(axis=1) - 1.0
            corr = w / (1.0 - w * s)
            bad = ~np.isfinite(corr)
            if np.any(bad):
                corr[bad] = 1e-3 * (1 + np.abs(z[bad]))
            z = z - corr
            if polish:
                stalled = True
                break
            rel = float(np.max(np.abs(corr) / np.maximum(np.abs(z), 1e-300)))
            if rel < 0.5 * best:
                best, since_best = rel, 0
            else:
                since_best += 1
            # one more sweep once at rounding level, or once progress stops
            # with roots that are already backward stable (ill-conditioned cases)
            if rel <= 1e3 * eps or (since_best >= 5 and _backward_residual(c, z) < tol):
                polish = True
    res = _backward_residual(c, z)
    return OracleRoots(np.concatenate([z, zeros]), res, bool(stalled and res < tol), it)


def sorted_log_moduli(r) -> np.ndarray:
    """``ln|zeta_i|`` sorted non-increasing; zero roots give ``-inf``."""
    roots = r.roots if isinstance(r, OracleRoots) else np.asarray(r)
    with np.errstate(divide="ignore"):
        return np.sort(np.log(np.abs(roots)))[::-1]
