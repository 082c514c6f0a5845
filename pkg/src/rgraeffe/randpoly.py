"""Kostlan random polynomials, the Weyl norm, and separation statistics."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, ParameterError
from .poly import Poly, RenPoly

__all__ = [
    "GENERATOR_ID",
    "log_binomials",
    "gen_kostlan",
    "gen_kostlan_ren",
    "kostlan_batch",
    "weyl_inner",
    "weyl_norm",
    "weyl_distance_proj",
    "SeparationStats",
    "separation",
    "CntCheck",
    "cnt_constructive_check",
    "TailTable",
    "lemma6_tail_estimate",
]

#: Recorded in generated files so reruns can be reproduced exactly.
GENERATOR_ID = "numpy.random.PCG64"

_KINDS = ("real", "complex")


def _check_kind(kind):
    if kind not in _KINDS:
        raise ParameterError(f"kind must be 'real' or 'complex', got {kind!r}")


def log_binomials(d: int) -> np.ndarray:
    """``ln C(d, i)`` for i = 0..d via log-gamma."""
    i = np.arange(d + 1)
    lg = np.vectorize(math.lgamma, otypes=[float])
    return math.lgamma(d + 1) - lg(i + 1) - lg(d - i + 1)


def _gaussians(d, seed, kind):
    rng = np.random.Generator(np.random.PCG64(seed))
    if kind == "complex":
        g = rng.standard_normal((d + 1, 2))
        return g[:, 0], g[:, 1]
    return rng.standard_normal(d + 1), None


def gen_kostlan(d: int, seed: int, kind: str = "complex") -> Poly:
    """Kostlan polynomial: ``f_i = sqrt(C(d,i)) * g_i``.

    ``g_i`` is standard real normal (``kind="real"``) or standard complex
    normal ``(g1 + i g2)/sqrt(2)``.  Raises OverflowError when the binomials
    do not fit in a float; use :func:`gen_kostlan_ren` then.
    """
    if d < 1:
        raise ParameterError("degree must be >= 1")
    _check_kind(kind)
    try:
        scale = np.array([math.sqrt(math.comb(d, i)) for i in range(d + 1)])
    except OverflowError:
        raise OverflowError(f"binomials of degree {d} overflow; use gen_kostlan_ren") from None
    g1, g2 = _gaussians(d, seed, kind)
    if kind == "complex":
        coeffs = scale * (g1 + 1j * g2) / math.sqrt(2.0)
    else:
        coeffs = scale * g1
    return Poly(coeffs)


def gen_kostlan_ren(d: int, seed: int, kind: str = "complex") -> RenPoly:
    """Same distribution and random stream as :func:`gen_kostlan`, in log-polar form at k=0.

    Works for any degree since no binomial is ever formed.
    """
    if d < 1:
        raise ParameterError("degree must be >= 1")
    _check_kind(kind)
    half_lb = 0.5 * log_binomials(d)
    g1, g2 = _gaussians(d, seed, kind)
    if kind == "complex":
        with np.errstate(divide="ignore"):
            mags = half_lb + np.log(np.hypot(g1, g2)) - 0.5 * math.log(2.0)
        args = np.arctan2(g2, g1)
    else:
        with np.errstate(divide="ignore"):
            mags = half_lb + np.log(np.abs(g1))
        args = np.where(g1 < 0, math.pi, 0.0)
    args = np.where(args == -math.pi, math.pi, args)
    return RenPoly(mags, args, 0)


def kostlan_batch(d: int, n: int, seed: int, kind: str = "complex") -> np.ndarray:
    """``n`` Kostlan coefficient vectors as an ``(n, d+1)`` array from one stream."""
    _check_kind(kind)
    rng = np.random.Generator(np.random.PCG64(seed))
    scale = np.exp(0.5 * log_binomials(d))
    if kind == "complex":
        g = rng.standard_normal((n, d + 1, 2))
        return scale * (g[..., 0] + 1j * g[..., 1]) / math.sqrt(2.0)
    return scale * rng.standard_normal((n, d + 1))


def _coeffs(f):
    return f.coeffs if isinstance(f, Poly) else np.asarray(f, dtype=np.complex128)


def _padded(f, d):
    c = _coeffs(f)
    if c.size - 1 > d:
        raise ParameterError("polynomial degree exceeds the ambient degree")
    return np.concatenate([c, np.zeros(d + 1 - c.size, dtype=np.complex128)])


def weyl_inner(f, g, d: int | None = None) -> complex:
    """Weyl inner product ``sum_i f_i conj(g_i) / C(d, i)`` in P_d."""
    if d is None:
        d = max(_coeffs(f).size, _coeffs(g).size) - 1
    w = np.exp(-log_binomials(d))
    return complex(np.sum(_padded(f, d) * np.conj(_padded(g, d)) * w))


def weyl_norm(f, d: int | None = None) -> float:
    """``sqrt(sum_i |f_i|^2 / C(d, i))``; ``d`` defaults to the length minus one."""
    c = _coeffs(f)
    if d is None:
        d = c.size - 1
    c = _padded(c, d)
    return float(math.sqrt(np.sum(np.abs(c) ** 2 * np.exp(-log_binomials(d)))))


def weyl_distance_proj(f, g, d: int | None = None) -> float:
    """Projective sine distance ``min_lambda ||f - lambda g|| / ||f||``.

    The minimizer is the orthogonal projection, which gives
    ``sqrt(1 - |<f,g>|^2 / (||f||^2 ||g||^2))``.
    """
    if d is None:
        d = max(_coeffs(f).size, _coeffs(g).size) - 1
    nf = weyl_norm(f, d)
    ng = weyl_norm(g, d)
    if nf == 0 or ng == 0:
        raise DegenerateInputError("projective distance undefined for the zero polynomial")
    cos2 = abs(weyl_inner(f, g, d)) ** 2 / (nf * nf * ng * ng)
    return math.sqrt(max(0.0, 1.0 - cos2))


@dataclass(frozen=True)
class SeparationStats:
    """Modulus separation of a root set.

    ``rho`` is ``min 1 - |z_i|/|z_j|`` over pairs with ``|z_i| < |z_j|`` and
    ``rel_sep`` is ``min (|z_j| - |z_i|) / sqrt(1 + |z_i|^2)`` over the
    same pairs.  ``pair`` holds the indices (smaller, larger) attaining
    ``rho``.  When all moduli coincide both are 0 and ``equal_moduli`` is set.
    """

    rho: float
    rel_sep: float
    equal_moduli: bool = False
    pair: tuple[int, int] | None = None


def separation(roots) -> SeparationStats:
    roots = np.asarray(roots, dtype=np.complex128)
    if roots.size < 2:
        raise ParameterError("need at least two roots")
    mods = np.abs(roots)
    order = np.argsort(mods, kind="stable")
    r = mods[order]
    rho = math.inf
    rel = math.inf
    pair = None
    # for a fixed smaller modulus both statistics are minimized by the next larger one
    for q in range(r.size - 1):
        lo = r[q]
        nxt = np.flatnonzero(r[q + 1:] > lo)
        if nxt.size == 0:
            continue
        p = q + 1 + int(nxt[0])
        hi = r[p]
        val = 1.0 - lo / hi
        if val < rho:
            rho = val
            pair = (int(order[q]), int(order[p]))
        rel = min(rel, (hi - lo) / math.sqrt(1.0 + lo * lo))
    if pair is None:
        return SeparationStats(0.0, 0.0, True, None)
    return SeparationStats(float(rho), float(rel), False, pair)


@dataclass(frozen=True)
class CntCheck:
    """``lhs = ||f - h||/||f||`` against ``rhs = rho * sqrt(d)``.

    ``reconstruction`` is ``||f - f_d prod(x - z_i)|| / ||f||``, the
    backward error of the supplied roots; ``ok`` allows that much slack.
    """

    lhs: float
    rhs: float
    ok: bool
    rho: float
    reconstruction: float


def cnt_constructive_check(f, roots) -> CntCheck:
    """Check the constructive bound behind the condition-number theorem.

    Shrinks the larger root of the pair attaining ``rho(f)`` by the factor
    ``1 - rho`` so that the two moduli coincide, and measures how far the
    resulting polynomial ``h`` (which has two roots of equal modulus) is
    from ``f`` in the Weyl norm.
    """
    f = f if isinstance(f, Poly) else Poly(f)
    roots = np.asarray(roots, dtype=np.complex128)
    d = f.degree
    if roots.size != d:
        raise ParameterError(f"expected {d} roots, got {roots.size}")
    lead = f.coeffs[-1]
    nf = weyl_norm(f)
    rec = Poly.from_roots(roots, lead)
    recon = weyl_norm(f.coeffs - rec.coeffs, d) / nf
    st = separation(roots)
    if st.pair is None:
        return CntCheck(recon, 0.0, True, 0.0, recon)
    _, big = st.pair
    moved = roots.copy()
    moved[big] = roots[big] * (1.0 - st.rho)
    h = Poly.from_roots(moved, lead)
    lhs = weyl_norm(f.coeffs - h.coeffs, d) / nf
    rhs = st.rho * math.sqrt(d)
    return CntCheck(lhs, rhs, bool(lhs <= rhs + recon), st.rho, recon)


@dataclass
class TailTable:
    """Empirical tail ``P[min ratio <= 1 + eps]`` per eps, with fitted constants.

    ``slope`` is the least-squares log-log slope of tail vs eps over grid
    points with a nonzero count; ``m_hat`` is the through-origin fit of
    ``tail ~ M * eps``.
    """

    eps: np.ndarray
    prob_above: np.ndarray
    tail: np.ndarray
    counts: np.ndarray
    samples: int
    m_hat: float
    slope: float
    min_ratios: np.ndarray


def min_modulus_ratio(roots) -> float:
    """``min |z_i|/|z_j|`` over pairs with ``|z_i| > |z_j|``; ``inf`` if none."""
    r = np.sort(np.abs(np.asarray(roots)))
    with np.errstate(divide="ignore", invalid="ignore"):
        q = r[1:] / r[:-1]
    q = q[np.isfinite(q) & (q > 1)]
    return float(q.min()) if q.size else math.inf


def lemma6_tail_estimate(d: int, samples: int, eps_grid, seed: int = 0, root_finder=None) -> TailTable:
    """Monte Carlo estimate of ``P[min |z_i|/|z_j| > 1 + eps]`` for complex Kostlan polynomials."""
    from .oracle import find_roots

    finder = root_finder or (lambda c: find_roots(Poly(c)).roots)
    eps = np.asarray(sorted(eps_grid), dtype=np.float64)
    batch = kostlan_batch(d, samples, seed, "complex")
    ratios = np.array([min_modulus_ratio(finder(c)) for c in batch])
    gaps = ratios - 1.0
    counts = np.array([(gaps <= e).sum() for e in eps])
    tail = counts / samples
    prob_above = 1.0 - tail
    pos = (counts > 0) & (eps > 0)
    if pos.sum() >= 2:
        slope = float(np.polyfit(np.log(eps[pos]), np.log(tail[pos]), 1)[0])
    else:
        slope = math.nan
    m_hat = float(np.sum(tail * eps) / np.sum(eps * eps)) if np.any(eps > 0) else math.nan
    return TailTable(eps, prob_above, tail, counts, samples, m_hat, slope, ratios)
