"""Choose between the compiled binary128 loop and the mpmath fallback."""

from __future__ import annotations

import os

from ..errors import InputError
from . import _pycore

try:
    from . import _core as _compiled
except ImportError:  # extension not built
    _compiled = None

COMPILED_BITS = 113
DEFAULT_PRECISION = COMPILED_BITS


def compiled_available() -> bool:
    return _compiled is not None


def default_precision() -> int:
    """Working precision in bits; ``PRECISION_BITS`` in the environment overrides."""
    raw = os.environ.get("PRECISION_BITS")
    if raw is None or raw.strip() == "":
        return DEFAULT_PRECISION
    try:
        bits = int(raw)
    except ValueError:
        raise InputError(f"PRECISION_BITS must be an integer, got {raw!r}") from None
    if bits < 53:
        raise InputError("PRECISION_BITS must be at least 53")
    return bits


def select_backend(precision: int | None = None, backend: str = "auto"):
    """Return ``(name, run, precision)`` for the requested backend.

    ``auto`` uses the compiled loop when it is importable and the requested
    precision fits binary128, and the mpmath loop otherwise.
    """
    prec = default_precision() if precision is None else int(precision)
    if prec < 53:
        raise InputError("precision must be at least 53 bits")
    if backend not in ("auto", "compiled", "python"):
        raise InputError(f"unknown backend {backend!r}")
    if backend == "compiled" and _compiled is None:
        raise InputError("compiled backend is not available in this build")
    use_compiled = backend == "compiled" or (
        backend == "auto" and _compiled is not None and prec <= COMPILED_BITS
    )
    if use_compiled:
        return "compiled", _compiled.run, COMPILED_BITS

    def run(*args, **kw):
        return _pycore.run(*args, prec=prec, **kw)

    return "python", run, prec
