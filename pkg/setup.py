"""Build script for the optional compiled SDE kernel.

The package works without the extension (a NumPy fallback is selected at
import time), so a missing compiler must not break installation.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("XFPE_DISABLE_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext = Extension(
            "xfpe.sde._em_cython",
            ["src/xfpe/sde/_em_cython.pyx"],
            include_dirs=[numpy.get_include()],
            # -ffp-contract=off: keep float arithmetic reproducible
            # (no FMA contraction differences between builds).
            extra_compile_args=["-O3", "-ffp-contract=off"],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )
        ext_modules = cythonize([ext], compiler_directives={"language_level": "3"})
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
