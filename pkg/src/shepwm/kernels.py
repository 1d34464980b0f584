"""Backend selection for the hot solver kernels.

Imports the compiled Cython extension when present, otherwise the pure-numpy
fallback. Set SHEPWM_PURE_PYTHON=1 to force the fallback (used by the
benchmark and for debugging). The active backend name is recorded in every
run manifest because the two backends can differ in the last bits of the
platform cosine, which a chaotic swarm trajectory then amplifies: outputs are
reproducible bit-for-bit per backend, not across backends.
"""

from __future__ import annotations

import os

_force_py = os.environ.get("SHEPWM_PURE_PYTHON", "").strip().lower() in {
    "1",
    "true",
    "yes",
}

if _force_py:
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

harmonic_sums = _impl.harmonic_sums
she_cost_batch = _impl.she_cost_batch


def backend() -> str:
    """Name of the kernel backend active in this process."""
    return BACKEND
