"""Renormalized Graeffe iteration for the moduli of polynomial roots."""
from ._backend import BACKEND, available_backends
from .core import (
    IterOptions,
    ModuliResult,
    eta,
    graeffe_step_classical,
    graeffe_step_limit,
    graeffe_step_ren,
    iterate,
    map_R,
    psi,
    required_iterations,
)
from .errors import (
    DegenerateInputError,
    GraeffeError,
    IndexMismatchError,
    ParameterError,
    RenRangeError,
    TieError,
)
from .newton import ClusterReport, NewtonDiagram, build_diagram, choose_sigma, detect_clusters
from .poly import Poly, RenPoly
from .renarith import (
    RenValue,
    logpolar,
    reindex,
    renplus,
    renplus_limit,
    renpow,
    renscal,
    rentimes,
    unlogpolar,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ClusterReport",
    "DegenerateInputError",
    "GraeffeError",
    "IndexMismatchError",
    "IterOptions",
    "ModuliResult",
    "NewtonDiagram",
    "ParameterError",
    "Poly",
    "RenPoly",
    "RenRangeError",
    "RenValue",
    "TieError",
    "available_backends",
    "build_diagram",
    "choose_sigma",
    "detect_clusters",
    "eta",
    "graeffe_step_classical",
    "graeffe_step_limit",
    "graeffe_step_ren",
    "iterate",
    "logpolar",
    "map_R",
    "psi",
    "reindex",
    "renplus",
    "renplus_limit",
    "renpow",
    "renscal",
    "rentimes",
    "required_iterations",
    "unlogpolar",
]
