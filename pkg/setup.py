import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# The compiled rigid-body kernel is optional: the package falls back to the
# pure-Python kernel at import time if the extension is unavailable.
ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "aerialhighway.physics._kernels",
                ["src/aerialhighway/physics/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
