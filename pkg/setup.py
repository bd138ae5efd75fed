"""Build script: compiles the mod-p kernel extension when Cython is present.

A plain install without Cython still works; the package falls back to the
pure-Python kernels at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "quivdiff._kernels.modkernel",
                ["src/quivdiff/_kernels/modkernel.pyx"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
