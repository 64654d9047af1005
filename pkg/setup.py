"""Build script: compiles the optional stepping kernels.

The package is fully functional without the extension (a numpy fallback is
selected at import time); set QSC_SKIP_EXT=1 to force a pure-Python build.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("QSC_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "qsc._kernels",
                    ["src/qsc/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                    optional=True,
                )
            ],
            language_level=3,
        )
    except Exception:
        ext_modules = []

setup(ext_modules=ext_modules)
