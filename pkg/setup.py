import os

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("KAON_TRIALITY_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "kaon_triality._jacobi",
                    ["src/kaon_triality/_jacobi.pyx"],
                    include_dirs=[np.get_include()],
                )
            ],
            language_level=3,
        )

setup(ext_modules=ext_modules)
