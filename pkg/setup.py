"""Build script: compiles the optional saturation-kernel extension.

The package is fully functional without it (a pure-Python kernel is
selected at import time), so any failure here degrades to a warning.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler and the like
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(f"warning: building the compiled kernel failed ({exc}); "
              "falling back to the pure-Python kernel", file=sys.stderr)


ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("resmod._kernel", ["src/resmod/_kernel.pyx"], language="c++")],
        language_level="3",
    )
except ImportError:
    print("warning: Cython not available; skipping the compiled kernel", file=sys.stderr)

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
