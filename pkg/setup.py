import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "finiteot.solver._core",
                ["src/finiteot/solver/_core.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # the pure-Python kernel is a full fallback; build without the extension
    extensions = []

setup(ext_modules=extensions)
