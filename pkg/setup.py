"""Build script: compiles the optional fast kernels when Cython is available.

The package is fully functional without the extension; loramab._kernels
falls back to a NumPy implementation at import time.
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
                "loramab._kernels._speedups",
                ["src/loramab/_kernels/_speedups.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
