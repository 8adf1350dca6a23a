import os
import sys

from setuptools import Extension, setup

# The compiled kernels are optional: without them the package falls back to
# the pure-Python implementations in matfunc.backend.pykernels.
ext_modules = []
if not os.environ.get("MATFUNC_NO_EXT"):
    compile_args = [] if sys.platform == "win32" else ["-O3"]
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "matfunc.backend._corekernels",
                    ["src/matfunc/backend/_corekernels.pyx"],
                    extra_compile_args=compile_args,
                )
            ],
            language_level=3,
        )
    except ImportError:
        c_source = os.path.join("src", "matfunc", "backend", "_corekernels.c")
        if os.path.exists(c_source):
            ext_modules = [
                Extension(
                    "matfunc.backend._corekernels",
                    [c_source],
                    extra_compile_args=compile_args,
                )
            ]

setup(ext_modules=ext_modules, zip_safe=False)
