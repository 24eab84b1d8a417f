from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                name="muxcount._kernels._fastcount",
                sources=["src/muxcount/_kernels/_fastcount.pyx"],
            )
        ],
        language_level="3",
    )
except ImportError:
    # Pure-Python fallback kernel is selected at import time, so the package
    # stays installable without a compiler toolchain.
    ext_modules = []

setup(ext_modules=ext_modules)
