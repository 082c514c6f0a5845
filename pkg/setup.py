"""Build the optional Cython kernel.

The package works without it: ``rgraeffe._backend`` falls back to the
pure-Python kernel when ``rgraeffe._ckernels`` cannot be imported.
Set ``RGRAEFFE_NO_EXT=1`` to skip compilation entirely.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("RGRAEFFE_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        libraries = ["m"] if os.name == "posix" else []
        ext_modules = cythonize(
            [
                Extension(
                    "rgraeffe._ckernels",
                    ["src/rgraeffe/_ckernels.pyx"],
                    libraries=libraries,
                    # no -ffast-math: the kernel relies on IEEE -inf propagation
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
