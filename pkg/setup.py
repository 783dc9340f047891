from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("motzeta._kernels", ["src/motzeta/_kernels.pyx"],
                   include_dirs=[numpy.get_include()])],
        language_level=3,
    )
except ImportError:
    # no Cython: the package runs on the pure-Python kernels
    pass

setup(ext_modules=ext_modules)
