"""Kernel dispatch: compiled extension when built, pure Python otherwise.

Set TESTSCRIBE_PURE=1 to force the fallback (used by the benchmark and the
equivalence tests). Both implementations are exact integer computations and
produce identical results.
"""

from __future__ import annotations

import os

from . import _kernels_py

_compiled = None
if not os.environ.get("TESTSCRIBE_PURE"):
    try:
        from . import _speedups as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None

IMPLEMENTATION = "compiled" if _compiled is not None else "pure"

if _compiled is not None:
    import numpy as _np

    def lcs_length(a, b) -> int:
        return _compiled.lcs_length(_np.asarray(a, dtype=_np.intc),
                                    _np.asarray(b, dtype=_np.intc))

    def admissible_pairs(parents, depths, terminals, max_len):
        return _compiled.admissible_pairs(
            _np.asarray(parents, dtype=_np.intc),
            _np.asarray(depths, dtype=_np.intc),
            _np.asarray(terminals, dtype=_np.intc),
            max_len)
else:
    lcs_length = _kernels_py.lcs_length
    admissible_pairs = _kernels_py.admissible_pairs
