import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("QCLUSTER_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "qcluster.laurent._kernel",
                    ["src/qcluster/laurent/_kernel.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        # No Cython: install pure-Python only, the kernel falls back at import.
        ext_modules = []

setup(ext_modules=ext_modules)
