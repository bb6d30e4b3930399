"""Builds the optional compiled assembly kernel.

The package works without it (a numpy fallback is selected at import);
any build failure here is deliberately non-fatal.
"""

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension(
            "viscmhd._kernels",
            ["src/viscmhd/_kernels.pyx"],
            include_dirs=[numpy.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )],
        language_level=3,
    )
except Exception:  # pragma: no cover
    ext_modules = []

setup(ext_modules=ext_modules)
