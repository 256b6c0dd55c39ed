"""Build hook for the optional compiled kernel.

If Cython is importable at build time the labeling/cell-count kernel is
compiled; otherwise the package installs without it and the pure numpy
fallback in ``topoforge._kernels._pure`` is selected at import.

Build in place for development with::

    python setup.py build_ext --inplace
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
                "topoforge._kernels._native",
                ["src/topoforge/_kernels/_native.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
