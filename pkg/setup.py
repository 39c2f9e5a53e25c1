from setuptools import setup

# The compiled kernel is an optimization, not a requirement: if Cython (or a
# C compiler) is unavailable the package falls back to the pure-Python kernel.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize("src/domkit/_kernel_cy.pyx", language_level="3")
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
