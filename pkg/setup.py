"""Build script: compiles the optional fast kernels.

The compiled extension is a pure speedup; if Cython (or a C compiler)
is unavailable the package installs without it and falls back to the
Python kernels at import time. -ffp-contract=off keeps the C kernels
bit-identical to the Python reference (no fused multiply-adds).
"""

import os

from setuptools import Extension, setup


def extensions():
    if os.environ.get("COLORLEX_PURE"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "colorlex._kernels",
        ["src/colorlex/_kernels.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions())
