"""Kernel backend selection.

Prefers the compiled Cython kernel, falls back to the pure-Python twin.
Set ``DOMKIT_PURE=1`` to force the fallback (used by the benchmark and by
tests that compare the two backends).
"""

import os

if os.environ.get("DOMKIT_PURE"):
    from domkit import _kernel_py as _impl
else:
    try:
        from domkit import _kernel_cy as _impl  # type: ignore[no-redef]
    except ImportError:
        from domkit import _kernel_py as _impl

BACKEND = _impl.BACKEND
is_monotone = _impl.is_monotone
monotone_maps = _impl.monotone_maps
ep_pairs = _impl.ep_pairs
transitivity_witness = _impl.transitivity_witness
transitive_closure = _impl.transitive_closure
