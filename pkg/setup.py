from setuptools import setup, Extension

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("mackeybox._snf_core", ["src/mackeybox/_snf_core.pyx"])],
        language_level=3,
    )
except ImportError:
    # The package works without the compiled kernel; the pure-Python
    # fallback is selected at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
