"""Build the optional binary128 ellipsoid core; the package falls back to mpmath without it."""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # no compiler / no libquadmath
            print(f"warning: compiled core not built ({exc}); using the pure-Python path",
                  file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc})", file=sys.stderr)


def extensions():
    if os.environ.get("TENSORRHO_NO_EXT"):
        return []
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "tensorrho.ellipsoid._core",
        ["src/tensorrho/ellipsoid/_core.pyx", "src/tensorrho/ellipsoid/ellipsoid_core.c"],
        include_dirs=[np.get_include(), "src/tensorrho/ellipsoid"],
        libraries=["quadmath"],
        extra_compile_args=["-O2"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
