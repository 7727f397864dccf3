"""Builds the optional compiled kernel backend.

The package is fully functional without the extension (a numpy fallback is
selected at import time); the extension just makes the Monte Carlo paths
faster. Build failures are therefore non-fatal.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "gaussradon.backends._kernels",
                ["src/gaussradon/backends/_kernels.pyx"],
                # -ffp-contract=off keeps the compiled arithmetic, op for op,
                # the same as the numpy fallback (no fused multiply-adds).
                extra_compile_args=["-O3", "-ffp-contract=off"],
                optional=True,
            )
        ],
        language_level="3",
    )

setup(ext_modules=ext_modules)
