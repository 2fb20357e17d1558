"""Build the optional compiled kernels; the package falls back to pure Python without them."""
from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:  # no build toolchain: ship the pure-Python kernels only
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("flatspec._kernels", ["src/flatspec/_kernels.pyx"],
                   include_dirs=[numpy.get_include()],
                   define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                   extra_compile_args=["-O3"],
                   optional=True)],
        language_level=3,
    )

setup(ext_modules=ext_modules)
