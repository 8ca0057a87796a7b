"""Kernel backend selection.

The compiled Cython kernels are used when the extension built; otherwise
the pure-Python twins take over.  Set MASKRECON_KERNELS=python (or =c) to
force a backend; forcing "c" raises if the extension is missing.

Both backends produce identical results on identical inputs, so the
choice never affects report contents, only speed.
"""

from __future__ import annotations

import os

from . import _kernels_py

_choice = os.environ.get("MASKRECON_KERNELS", "auto").lower()

if _choice == "python":
    kernels = _kernels_py
elif _choice in ("auto", "c"):
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        if _choice == "c":
            raise ImportError(
                "MASKRECON_KERNELS=c requested but the compiled kernels are "
                "not built; reinstall with a C compiler available")
        kernels = _kernels_py
else:
    raise ValueError(f"MASKRECON_KERNELS must be auto, c or python, got {_choice!r}")

BACKEND = kernels.BACKEND

# The compiled kernels assume 64-bit-safe parameter ranges; anything
# beyond falls back to unbounded Python integers per call.
_MAX_KERNEL_Q = 1 << 31


def _fits_sweep(q: int) -> bool:
    return kernels is not _kernels_py and q < _MAX_KERNEL_Q


def _fits_cross(q: int, s: int, w: int) -> bool:
    return (kernels is not _kernels_py
            and q < _MAX_KERNEL_Q
            and 1 <= w <= 63
            and 0 <= s <= 62
            and (q << s) < (1 << 63))


def output_histogram(kind, q, off, t, x):
    mod = kernels if _fits_sweep(q) else _kernels_py
    return mod.output_histogram(kind, q, off, t, x)


def sweep_max_mult(kind, q, off, t, secrets):
    mod = kernels if _fits_sweep(q) else _kernels_py
    return mod.sweep_max_mult(kind, q, off, t, secrets)


def preimage_count(kind, q, off, t, x, v):
    mod = kernels if _fits_sweep(q) else _kernels_py
    return mod.preimage_count(kind, q, off, t, x, v)


def preimage_list(kind, q, off, t, x, v):
    mod = kernels if _fits_sweep(q) else _kernels_py
    return mod.preimage_list(kind, q, off, t, x, v)


def renewal_count(kind, q, off, t, x, w_target):
    mod = kernels if _fits_sweep(q) else _kernels_py
    return mod.renewal_count(kind, q, off, t, x, w_target)


def pipeline_histogram(kinds, q, offs, ts, x):
    mod = kernels if _fits_sweep(q) else _kernels_py
    return mod.pipeline_histogram(kinds, q, offs, ts, x)


def cross_check_sweep(q, s, w, q_prime, secrets):
    mod = kernels if _fits_cross(q, s, w) else _kernels_py
    return mod.cross_check_sweep(q, s, w, q_prime, secrets)
