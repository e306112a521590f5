import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("BEVSIM_SKIP_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "bevsim.sim._kernel",
                    ["src/bevsim/sim/_kernel.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # No Cython: the pure-Python replay kernel is used instead.
        ext_modules = []

setup(ext_modules=ext_modules)
