"""Build the optional compiled kernels; the package falls back to pure Python without them."""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # no compiler available
            print(f"warning: compiled kernels skipped ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc})", file=sys.stderr)


ext_modules = []
if not os.environ.get("RZDG_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not found, building without compiled kernels", file=sys.stderr)
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "rzdg._ckernels",
                    ["src/rzdg/_ckernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
