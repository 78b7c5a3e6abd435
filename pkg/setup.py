# Builds the optional compiled kernels; the package falls back to numpy without them.
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ONEBIT_CDG_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "onebit_cdg._kernels",
                    ["src/onebit_cdg/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
