"""Kernel selector: prefer the compiled search, fall back to pure Python."""

from __future__ import annotations

from . import _kernel_py

try:  # pragma: no cover - depends on build environment
    from . import _kernel_c  # type: ignore[attr-defined]

    search_dispositions = _kernel_c.search_dispositions
    KERNEL = "c"
except ImportError:  # pragma: no cover
    search_dispositions = _kernel_py.search_dispositions
    KERNEL = "py"

iter_accepted_dispositions = _kernel_py.iter_accepted_dispositions
