"""Builds the compiled sampling kernel. The package works without it: if the
extension is missing at import time, maskfill.kernels falls back to the pure
Python implementation."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "maskfill.kernels._csampling",
                ["src/maskfill/kernels/_csampling.pyx"],
            )
        ],
        language_level="3",
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
