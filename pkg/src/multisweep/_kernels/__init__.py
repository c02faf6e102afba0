"""Branch engines for the nearest-neighbor planner.

Two interchangeable lanes: a numba-compiled loop kernel and a vectorized
numpy fallback. Setting MULTISWEEP_FORCE_NUMPY=1 in the environment forces
the fallback; otherwise the numba lane is used whenever numba imports.
scripts/bench_nn.py compares the two.
"""

import os

from . import nn_numpy

try:
    from . import nn_numba

    HAS_NUMBA = True
except ImportError:
    nn_numba = None
    HAS_NUMBA = False

if os.environ.get("MULTISWEEP_FORCE_NUMPY") or not HAS_NUMBA:
    ACTIVE_LANE = "numpy"
    complete_from_start = nn_numpy.complete_from_start
else:
    ACTIVE_LANE = "numba"
    complete_from_start = nn_numba.complete_from_start
