from setuptools import Extension, setup
from Cython.Build import cythonize

ext = Extension(
    "hypcount._ballscan",
    ["src/hypcount/_ballscan.pyx"],
    language="c++",
    extra_compile_args=["-O3"],
)

setup(ext_modules=cythonize([ext], language_level=3))
