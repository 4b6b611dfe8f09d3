"""Build script: compiles the Cython stepping kernel when possible.

The package works without the extension (a pure-NumPy kernel is selected at
import time), so a failed compile only costs speed, not functionality.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Degrade to the pure-Python package if the extension cannot build."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: skipping extension build ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name} ({exc})", file=sys.stderr)


ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "wignerchain._kernel",
                ["src/wignerchain/_kernel.pyx"],
                # -ffp-contract=off keeps the floating-point results
                # reproducible against the NumPy kernel (no FMA fusion).
                extra_compile_args=["-O3", "-ffp-contract=off", "-funroll-loops"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )
except ImportError:
    print("warning: Cython not available, building pure-Python only", file=sys.stderr)

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
