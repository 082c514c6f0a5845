"""Graeffe iteration: classical step, renormalized step, and the solver loop."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _backend
from .errors import DegenerateInputError, ParameterError, TieError
from .newton import (
    SIGMA_FLOOR,
    SIGMA_GUARD,
    ClusterReport,
    build_diagram,
    choose_sigma,
    detect_clusters,
)
from .poly import Poly, RenPoly
from .renarith import NEG_INF, PI, wrap

__all__ = [
    "psi",
    "map_R",
    "eta",
    "graeffe_step_classical",
    "graeffe_step_ren",
    "graeffe_step_limit",
    "IterOptions",
    "ModuliResult",
    "iterate",
    "required_iterations",
    "conjectured_c1",
    "DEFAULT_TOL",
    "K_LIMIT",
]

DEFAULT_TOL = 2.0**-46
#: Hard cap on the renormalization index; 2**k must stay a finite double.
K_LIMIT = 1000
LN4 = math.log(4.0)


def psi(f: Poly, k: int = 0) -> RenPoly:
    """Log-polar coordinates of ``f`` at index ``k``."""
    if not isinstance(f, Poly):
        f = Poly(f)
    c = f.coeffs
    with np.errstate(divide="ignore"):
        mags = np.ldexp(np.log(np.abs(c)), -k)
    args = np.array([wrap(float(a)) for a in np.angle(c)])
    return RenPoly(mags, args, k)


def map_R(f: RenPoly) -> RenPoly:
    """Halve every magnitude and bump the index."""
    return RenPoly(np.ldexp(f.mags, -1), f.args, f.k + 1)


def eta(h) -> np.ndarray:
    """Root moduli ``exp(h_j - h_{j+1})``, j = 0..d-1 (ascending moduli)."""
    h = np.asarray(h, dtype=np.float64)
    with np.errstate(invalid="ignore"):
        return np.exp(h[:-1] - h[1:])


def graeffe_step_classical(f: Poly) -> Poly:
    """Coefficients of ``(-1)^d f(sqrt x) f(-sqrt x)``, computed term by term.

    ``h_i = (-1)^{d+i} f_i^2 + 2 sum_{j=1}^{min(i,d-i)} (-1)^{d+i-j} f_{i-j} f_{i+j}``.
    """
    c = f.coeffs
    d = f.degree
    h = np.empty(d + 1, dtype=np.complex128)
    for i in range(d + 1):
        s = (-1) ** (d + i) * c[i] * c[i]
        acc = 0j
        for j in range(1, min(i, d - i) + 1):
            acc += (-1) ** (d + i - j) * c[i - j] * c[i + j]
        h[i] = s + 2 * acc
    return Poly(h)


def graeffe_step_ren(f: RenPoly, backend: str | None = None) -> RenPoly:
    """One renormalized Graeffe step, index ``k`` to ``k + 1``."""
    kern = _backend.get_kernels(backend)
    mags, args = kern.graeffe_step(f.mags, f.args, f.k)
    return RenPoly(mags, args, f.k + 1)


def _limit_sum(a, alpha, b, beta):
    if a > b:
        return a, alpha
    if b > a:
        return b, beta
    if a == NEG_INF:
        return a, 0.0
    raise TieError(f"limit sum undefined for equal magnitudes {a!r}")


def graeffe_step_limit(f: RenPoly) -> RenPoly:
    """The step with every renormalized sum replaced by its limit.

    Raises TieError when two competing terms have equal magnitude.  The
    scalar factor 2 vanishes in the limit, so the result does not depend
    on ``f.k`` and keeps it.
    """
    m = 0.5 * f.mags
    a = f.args
    d = f.degree
    om = np.empty(d + 1)
    oa = np.empty(d + 1)
    for i in range(d + 1):
        sq = (2 * m[i], wrap(2 * a[i] + PI * ((d + i) & 1))) if m[i] != NEG_INF else (NEG_INF, 0.0)
        acc = (NEG_INF, 0.0)
        for j in range(1, min(i, d - i) + 1):
            t = (m[i - j] + m[i + j], wrap(a[i - j] + a[i + j] + PI * ((d + i - j) & 1)))
            acc = _limit_sum(*acc, *t)
        om[i], oa[i] = _limit_sum(*sq, *acc)
    return RenPoly(om, oa, f.k)


def conjectured_c1(d: int, c4: float = 2.0) -> float:
    """``c4 * log2 d``, the conjectured distribution constant for Kostlan polynomials."""
    return c4 * math.log2(d)


def required_iterations(b: float, delta: float, d: int, c1: float | None = None,
                        c2: float = 1.0, c3: float = 1.0) -> int:
    """Iteration count ``ceil(c1 + c2 log2 b - c3 log2 delta)``.

    Parameters
    ----------
    b : float
        Target relative precision of the ln-moduli, in bits.  Must satisfy
        ``b >= 1 + log2 d``.
    delta : float
        Allowed failure probability, ``0 < delta < 1``.
    d : int
        Degree.
    c1 : float, optional
        Distribution constant; defaults to ``2 log2 d + 8``.
    """
    if d < 1:
        raise ParameterError("degree must be >= 1")
    if b < 1 + math.log2(d):
        raise ParameterError(f"bits b={b} below 1 + log2 d = {1 + math.log2(d):.3f}")
    if not 0 < delta < 1:
        raise ParameterError("delta must lie in (0, 1)")
    if c1 is None:
        c1 = conjectured_c1(d) + 8.0
    return int(math.ceil(c1 + c2 * math.log2(b) - c3 * math.log2(delta)))


@dataclass
class IterOptions:
    """Solver settings.

    ``k_max=None`` derives the iteration cap from :func:`required_iterations`
    with ``bits``, ``delta``, ``c1``, ``c2``, ``c3``.  ``sigma=None`` uses
    :func:`~rgraeffe.newton.choose_sigma`.
    """

    tol: float = DEFAULT_TOL
    k_max: int | None = None
    bits: float = 53.0
    delta: float = 1e-3
    c1: float | None = None
    c2: float = 1.0
    c3: float = 1.0
    sigma: float | None = None
    backend: str | None = None

    def resolve_k_max(self, d: int) -> int:
        if self.k_max is not None:
            k_max = int(self.k_max)
        else:
            b = max(self.bits, 1 + math.log2(d))
            k_max = required_iterations(b, self.delta, d, self.c1, self.c2, self.c3)
        if not 1 <= k_max <= K_LIMIT:
            raise ParameterError(f"k_max must lie in [1, {K_LIMIT}], got {k_max}")
        return k_max


@dataclass
class ModuliResult:
    """Output of :func:`iterate`.

    ``log_moduli`` holds ``ln|zeta_1| >= ... >= ln|zeta_d|``; roots in one
    cluster share the cluster's ln-modulus and exact zero roots are
    ``-inf``.  ``residual`` is the largest magnitude change in the last
    step.  ``range_bound`` is the largest finite ``|mag|`` seen over the
    whole run and ``range_history[k]`` the same maximum at step ``k``.
    ``converged_by`` is ``"residual"`` when every coefficient settled,
    ``"clusters"`` when only coefficients strictly inside equal-modulus
    clusters were still moving, and ``None`` when ``k_max`` was reached.
    """

    log_moduli: np.ndarray
    iterations: int
    residual: float
    converged: bool
    range_bound: float
    clusters: ClusterReport
    converged_by: str | None = None
    range_history: list[float] = field(default_factory=list)
    residual_history: list[float] = field(default_factory=list)
    final: RenPoly | None = None
    backend: str = ""

    @property
    def moduli(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.log_moduli)

    @property
    def degree(self) -> int:
        return self.log_moduli.size


def _max_abs_finite(mags: np.ndarray) -> float:
    fin = mags[np.isfinite(mags)]
    return float(np.max(np.abs(fin))) if fin.size else 0.0


def _mag_change(old: np.ndarray, new: np.ndarray) -> np.ndarray:
    both_zero = (old == NEG_INF) & (new == NEG_INF)
    with np.errstate(invalid="ignore"):
        ch = np.abs(new - old)
    ch[both_zero] = 0.0
    return ch


def _final_sigma(k: int, prior: float | None) -> float:
    sigma = choose_sigma(k, prior)
    if sigma <= math.ldexp(LN4, -k):
        sigma = choose_sigma(k)
    return sigma


def iterate(f, opts: IterOptions | None = None, **overrides) -> ModuliResult:
    """Compute the ln-moduli of all roots of ``f``.

    Parameters
    ----------
    f : Poly, RenPoly, or sequence of ascending coefficients
    opts : IterOptions, optional
    **overrides
        Fields of :class:`IterOptions` to replace.

    Notes
    -----
    Stops when the largest coefficient change stays below ``tol`` for two
    consecutive steps.  Once ``k`` is large enough for the cluster test to
    be meaningful (``8 * 2**-k * ln 4`` below the separation threshold), it
    also stops when the cluster partition has been stable for two steps and
    every cluster endpoint has settled: coefficients strictly inside a
    cluster of equal moduli only converge like ``2**-k`` and are not needed.
    """
    opts = replace(opts or IterOptions(), **overrides)
    if isinstance(f, RenPoly):
        cur = f
    else:
        cur = psi(f if isinstance(f, Poly) else Poly(f))
    d = cur.degree
    if d < 1:
        raise DegenerateInputError("polynomial must have degree >= 1")
    k_max = opts.resolve_k_max(d)
    kern = _backend.get_kernels(opts.backend)
    tol = float(opts.tol)
    floor = float(opts.sigma) if opts.sigma is not None else SIGMA_FLOOR

    mags, args, k = cur.mags, cur.args, cur.k
    range_hist = [_max_abs_finite(mags)]
    res_hist: list[float] = []
    residual = math.inf
    full_streak = 0
    cl_streak = 0
    prev_part = None
    converged_by = None

    while k < k_max:
        new_m, new_a = kern.graeffe_step(mags, args, k)
        k += 1
        change = _mag_change(mags, new_m)
        mags, args = new_m, new_a
        residual = float(change.max())
        res_hist.append(residual)
        range_hist.append(_max_abs_finite(mags))

        full_streak = full_streak + 1 if residual < tol else 0
        if full_streak >= 2:
            converged_by = "residual"
            break

        if SIGMA_GUARD * math.ldexp(LN4, -k) <= floor:
            rep = detect_clusters(build_diagram(RenPoly(mags, args, k)), floor)
            part = rep.partition()
            settled = float(change[rep.boundary_indices()].max()) < tol
            if settled and part == prev_part:
                cl_streak += 1
            else:
                cl_streak = 1 if settled else 0
            prev_part = part if settled else None
            if cl_streak >= 2:
                converged_by = "clusters"
                break

    final = RenPoly(mags, args, k)
    report = detect_clusters(build_diagram(final), _final_sigma(k, opts.sigma))
    logm = np.sort(report.log_moduli())[::-1]
    return ModuliResult(
        log_moduli=logm,
        iterations=k - cur.k,
        residual=residual if res_hist else 0.0,
        converged=converged_by is not None,
        range_bound=max(range_hist),
        clusters=report,
        converged_by=converged_by,
        range_history=range_hist,
        residual_history=res_hist,
        final=final,
        backend=kern.NAME,
    )
