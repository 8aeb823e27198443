from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; the numpy kernel is used
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "qviability.lpmatch._simplex_core",
                ["src/qviability/lpmatch/_simplex_core.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
