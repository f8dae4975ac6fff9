"""Enumeration kernels: compiled core with a numpy fallback.

The compiled ``_core`` extension is used when it is importable, unless the
environment variable ``SCATTERFORGE_KERNELS=python`` forces the fallback.
Both backends expose the same functions with identical results.
"""

from __future__ import annotations

import os

from . import _fallback

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

_BACKENDS = {"python": _fallback}
if _core is not None:
    _BACKENDS["cython"] = _core


def available_backends() -> list[str]:
    return list(_BACKENDS)


def get_backend(name: str | None = None):
    if name is None:
        name = os.environ.get("SCATTERFORGE_KERNELS", "cython" if _core is not None else "python")
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} unavailable; have {available_backends()}") from None


backend = get_backend()
BACKEND = backend.NAME

projective_index = backend.projective_index
line_incidence = backend.line_incidence
batch_support = backend.batch_support
saturation_cover = backend.saturation_cover
coset_min_rank = backend.coset_min_rank
point_from_index = _fallback.point_from_index
