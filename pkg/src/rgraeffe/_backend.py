"""Kernel selection.

The compiled kernel is used when it was built; ``GRAEFFE_PURE_PYTHON=1``
forces the pure-Python one.
"""
import os

from . import _pykernels


def _load_compiled():
    try:
        from . import _ckernels
    except ImportError:
        return None
    return _ckernels


_compiled = _load_compiled()

if _compiled is not None and not os.environ.get("GRAEFFE_PURE_PYTHON"):
    kernels = _compiled
else:
    kernels = _pykernels

BACKEND = kernels.NAME


def get_kernels(name=None):
    """Return the kernel module called ``name`` ("cython" or "python").

    ``None`` returns the one selected at import.
    """
    if name is None:
        return kernels
    if name == "python":
        return _pykernels
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernel rgraeffe._ckernels is not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def available_backends():
    return ["cython", "python"] if _compiled is not None else ["python"]
