"""Build script: the oracle kernel is compiled when Cython and a C compiler are
available; otherwise the package installs with its pure-Python backend only."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("SPGRAPHS_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "spgraphs.oracle._core",
                    ["src/spgraphs/oracle/_core.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
