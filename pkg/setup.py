import numpy as np
from setuptools import Extension, setup

# The compiled kernels are an optional speedup; the package falls back to the
# numpy implementations in kondo._kernels_py when the extension is missing.
try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "kondo._kernels_cy",
                ["src/kondo/_kernels_cy.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
