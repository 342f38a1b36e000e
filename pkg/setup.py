"""Build script. The compiled kernel is optional: if Cython or a C compiler
is unavailable the package installs with the pure-Python kernel only."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("lclre._kernel_cy", ["src/lclre/_kernel_cy.pyx"])],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - depends on build host
    print("skipping compiled kernel build: %s" % exc)

setup(ext_modules=ext_modules)
