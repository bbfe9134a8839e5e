"""Build script: compiles the optional speedup extension when Cython and a C
compiler are available, and falls back to the pure-Python kernels otherwise."""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Try to build extensions, but never fail the install over them."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            warnings.warn(f"speedup extension skipped ({exc}); using pure-Python kernels")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"building {ext.name} failed ({exc}); using pure-Python kernels")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [
            Extension(
                "ergmphase._kernels._speedups",
                ["src/ergmphase/_kernels/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
