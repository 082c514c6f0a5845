"""Renormalized Newton diagram and equal-modulus cluster detection.

The diagram of a polynomial is ``g(i) = -ln|f_i|``; on a renormalized
polynomial this becomes ``g(i) = -mags[i]``.  In the limit of the Graeffe
iteration the slope of ``g`` over ``[i, i+1]`` is ``ln|zeta_{d-i}|``, so
breakpoints separate root moduli and a flat run of slopes is a cluster of
roots sharing one modulus.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .poly import RenPoly

__all__ = [
    "NewtonDiagram",
    "Cluster",
    "ClusterReport",
    "build_diagram",
    "detect_clusters",
    "choose_sigma",
    "SIGMA_FLOOR",
    "SIGMA_GUARD",
]

LN4 = math.log(4.0)
#: Smallest default separation threshold, in ln-modulus units.
SIGMA_FLOOR = 1e-6
#: Guard factor on the equal-modulus bound 2**-k * ln 4.
SIGMA_GUARD = 8.0


@dataclass(frozen=True)
class NewtonDiagram:
    """``values[i] = -mags[i]`` (``+inf`` for zero coefficients) and its slopes.

    ``slopes[i] = values[i+1] - values[i]``; NaN where both ends are infinite.
    """

    values: np.ndarray
    k: int
    slopes: np.ndarray = field(init=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        with np.errstate(invalid="ignore"):
            s = np.diff(v)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "slopes", s)

    @property
    def degree(self) -> int:
        return self.values.size - 1


@dataclass(frozen=True)
class Cluster:
    """``size`` roots starting at position ``start`` of the descending modulus list.

    The cluster spans coefficient indices ``lo..hi`` with ``hi - lo == size``.
    """

    start: int
    size: int
    ln_modulus: float
    lo: int
    hi: int

    @property
    def modulus(self) -> float:
        return math.exp(self.ln_modulus) if self.ln_modulus != -math.inf else 0.0


@dataclass(frozen=True)
class ClusterReport:
    clusters: list[Cluster]
    sigma_used: float

    @property
    def sizes(self) -> list[int]:
        return [c.size for c in self.clusters]

    def partition(self) -> tuple:
        return tuple((c.start, c.size) for c in self.clusters)

    def log_moduli(self) -> np.ndarray:
        """One entry per root, descending."""
        out = [c.ln_modulus for c in self.clusters for _ in range(c.size)]
        return np.array(out, dtype=np.float64)

    def boundary_indices(self) -> np.ndarray:
        """Coefficient indices that are cluster endpoints (not strictly interior)."""
        idx = {0}
        for c in self.clusters:
            idx.add(c.lo)
            idx.add(c.hi)
        return np.array(sorted(idx), dtype=np.intp)


def build_diagram(f: RenPoly) -> NewtonDiagram:
    return NewtonDiagram(-np.asarray(f.mags, dtype=np.float64), f.k)


def choose_sigma(k: int, prior: float | None = None) -> float:
    """Separation threshold for :func:`detect_clusters` at index ``k``.

    An explicit ``prior`` wins.  Otherwise take the larger of a guarded
    equal-modulus bound ``8 * 2**-k * ln 4`` and :data:`SIGMA_FLOOR`.
    """
    if prior is not None:
        return float(prior)
    return max(SIGMA_GUARD * math.ldexp(LN4, -k), SIGMA_FLOOR)


def _upper_hull(xs, ys):
    hull = []
    for x, y in zip(xs, ys):
        while len(hull) >= 2:
            x0, y0 = hull[-2]
            x1, y1 = hull[-1]
            # drop the middle point when it is on or below the chord
            if (y1 - y0) * (x - x0) <= (y - y0) * (x1 - x0):
                hull.pop()
            else:
                break
        hull.append((x, y))
    return hull


def detect_clusters(dg: NewtonDiagram, sigma: float) -> ClusterReport:
    """Group the roots into equal-modulus clusters.

    The diagram is first replaced by its convex minorant (points above it,
    including zero coefficients, cannot be breakpoints).  Walking from the
    largest modulus down, a breakpoint whose slope increase is below
    ``sigma`` merges its two neighbouring segments; runs merge greedily.
    A cluster over coefficients ``lo..hi`` gets the ln-modulus
    ``(g(hi) - g(lo)) / (hi - lo)``, the log of the geometric mean of the
    consecutive coefficient ratios it spans.  Leading zero coefficients
    ``f_0 = ... = f_{m-1} = 0`` become a final cluster of ``m`` zero roots.
    """
    k = int(dg.k)
    if not sigma > math.ldexp(LN4, -k):
        raise ParameterError(f"sigma={sigma!r} must exceed 2**-{k} * ln 4 = {math.ldexp(LN4, -k)!r}")
    g = dg.values
    d = g.size - 1
    finite = np.flatnonzero(np.isfinite(g))
    m = int(finite[0])
    # the hull of -g from above is the convex minorant of g
    hull = _upper_hull(finite.tolist(), (-g[finite]).tolist())
    verts = [int(x) for x, _ in hull]
    ahat = -g

    def segment_mod(lo, hi):
        return float((ahat[lo] - ahat[hi]) / (hi - lo))

    spans = []
    top = verts[-1]
    prev_mod = None
    for q in range(len(verts) - 1, 0, -1):
        lo, hi = verts[q - 1], verts[q]
        mod = segment_mod(lo, hi)
        if prev_mod is not None and prev_mod - mod >= sigma:
            spans.append((hi, top))
            top = hi
        prev_mod = mod
    if len(verts) > 1:
        spans.append((verts[0], top))

    out = [Cluster(d - hi, hi - lo, segment_mod(lo, hi), lo, hi) for lo, hi in spans]
    if m > 0:
        out.append(Cluster(d - m, m, -math.inf, 0, m))
    return ClusterReport(out, float(sigma))
