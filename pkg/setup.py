"""Build script: compiles the optional Cython kernel backend.

Set BRANCHCUT_NO_EXT=1 to skip the extension entirely; the package then
falls back to the pure-Python kernels at import time.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("BRANCHCUT_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("branchcut._kernels._cy", ["src/branchcut/_kernels/_cy.pyx"])],
            language_level=3,
        )
    except ImportError:
        # No Cython available: install pure-Python only.
        ext_modules = []

setup(ext_modules=ext_modules)
