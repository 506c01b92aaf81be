import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("COXOPS_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "coxops._speedups",
                    sources=["src/coxops/_speedups.pyx"],
                    optional=True,
                )
            ],
            language_level=3,
        )
    except ImportError:
        # No Cython: the pure-Python kernels in coxops._kernels are used.
        pass

setup(ext_modules=ext_modules)
