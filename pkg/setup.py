"""Build hooks: compile the optional scan-kernel extension when Cython
and a C toolchain are available, fall back to pure Python otherwise.

The wheel is identical from the caller's point of view either way; the
kernels module picks the compiled path at call time when it imported.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/k3fm/_ckernels.pyx"],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
