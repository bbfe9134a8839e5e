"""Kernel backend selection. The compiled Cython module is used when it
imported cleanly; set ERGMPHASE_PURE=1 to force the pure-Python kernels.
Both backends are exercised by the test suite and give bit-identical output.
"""

import os

from . import pure

if os.environ.get("ERGMPHASE_PURE"):
    _impl = pure
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = pure

BACKEND = _impl.BACKEND
triangle_table = _impl.triangle_table
make_state = _impl.make_state
state_rows = _impl.state_rows
sweep_triangle = _impl.sweep_triangle
