import os

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("RCPSP_RAR_PURE_PYTHON"):
    ext_modules = cythonize(
        [Extension("rcpsp_rar._kernel", ["src/rcpsp_rar/_kernel.pyx"], include_dirs=[numpy.get_include()], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
