"""Build script for the optional compiled kernels.

The package works without the extension (pure-Python fallback); the
build is skipped gracefully when Cython is unavailable.
"""

from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension(
            "debrisplan.kernels._speedups",
            ["src/debrisplan/kernels/_speedups.pyx"],
            include_dirs=[np.get_include()],
            # keep double arithmetic identical to the interpreter: no
            # FMA contraction, strict IEEE ordering
            extra_compile_args=["-O3", "-ffp-contract=off"],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
