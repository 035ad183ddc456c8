from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # no Cython: the pure-Python kernels are used at import
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension("systemt._machine", ["src/systemt/_machine.pyx"], optional=True),
            Extension("systemt._model", ["src/systemt/_model.pyx"], optional=True),
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
