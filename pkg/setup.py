"""Build the optional Cython core.

The package is fully functional without the extension (a pure-Python twin of
the kernels is selected at import time), so a failed compile must not abort
the install.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, etc.
            print(f"confball: skipping compiled core ({exc}); pure-Python kernels will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"confball: skipping {ext.name} ({exc}); pure-Python kernels will be used")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("confball: Cython not available; building without the compiled core")
        return []
    import numpy
    return cythonize(
        [
            Extension(
                "confball._core",
                ["src/confball/_core.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
