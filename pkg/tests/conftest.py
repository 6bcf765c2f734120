"""Test bootstrap: single-threaded BLAS before numpy loads.

The degree-search engine forks worker processes; OpenBLAS thread pools are
not fork-safe and can deadlock a freshly forked child at its first BLAS
call. The blocks here are small, so single-threaded BLAS costs nothing.
"""

import os

for _var in ("OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS", "MKL_NUM_THREADS"):
    os.environ.setdefault(_var, "1")
