"""Build the optional compiled kernel.

The package works without it: ``comic.kernels`` falls back to the pure-Python
implementation when ``comic._ckernel`` cannot be imported.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("COMIC_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "comic._ckernel",
                    ["src/comic/_ckernel.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
