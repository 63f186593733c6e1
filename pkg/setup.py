import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

define_macros = [("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")]

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "rscd._kernels",
                sources=["src/rscd/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=define_macros,
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
