"""Build script for the optional compiled solver core.

The package works without the extension: nonlocality.kernels falls back to
the NumPy implementation when the compiled module is absent.  Building is
attempted unconditionally; a failed compile only disables the fast path.
"""

import numpy as np
from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "nonlocality._klcore",
        ["src/nonlocality/_klcore.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(ext_modules=cythonize(extensions, language_level=3))
