import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = [
    Extension(
        "corpuscompare._sgns",
        ["src/corpuscompare/_sgns.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

# Without Cython the package still installs; embedding training falls back
# to the numpy engine selected at import time in corpuscompare.embed.
ext_modules = (
    cythonize(extensions, compiler_directives={"language_level": "3"})
    if cythonize is not None
    else []
)

setup(ext_modules=ext_modules)
