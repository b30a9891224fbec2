import os

import numpy as np
from setuptools import Extension, setup

extensions = []
if os.environ.get("QAMPLIFY_NO_EXT") != "1":
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "qamplify._kernels_cy",
                ["src/qamplify/_kernels_cy.pyx"],
                # -fcx-limited-range inlines complex multiplies (no inf/nan
                # fixup calls); the kernels never divide by a complex value
                extra_compile_args=["-O3", "-fopenmp", "-fcx-limited-range"],
                extra_link_args=["-fopenmp"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=extensions)
