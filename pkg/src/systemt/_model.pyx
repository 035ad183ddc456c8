# cython: language_level=3, binding=False
# Compiled build of the model kernel; the source of truth is _model_py.py.
include "_model_py.py"
