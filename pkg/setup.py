"""Build script: compiles the optional statevector kernel extension.

The compiled kernel is a speedup only; if Cython or a C compiler is
unavailable the build proceeds without it and the package falls back to
the numpy kernels at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools.extension import Extension
    import numpy

    ext_modules = cythonize(
        [
            Extension(
                "oneclean.kernels._statevec",
                sources=["src/oneclean/kernels/_statevec.pyx"],
                include_dirs=[numpy.get_include()],
                # contraction off keeps complex arithmetic bit-identical
                # to the numpy fallback kernels on FMA-capable hosts
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
