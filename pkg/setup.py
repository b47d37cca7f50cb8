import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("SYNCWORD_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("syncword._kernels", ["src/syncword/_kernels.pyx"], language="c++",
                       extra_compile_args=["-O3"])],
            language_level=3,
        )

setup(ext_modules=ext_modules)
