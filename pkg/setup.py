"""Builds the optional Cython kernels; the package falls back to pure Python without them."""

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("wlcover._kernels._ckernels", ["src/wlcover/_kernels/_ckernels.pyx"])],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        quiet=True,
    )

setup(ext_modules=ext_modules)
