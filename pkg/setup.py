from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("moralgraph._kernel_c", ["src/moralgraph/_kernel_c.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # No Cython: the package falls back to the pure Python kernel at import.
    extensions = []

setup(ext_modules=extensions)
