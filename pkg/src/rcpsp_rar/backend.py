"""Decoder backend selection: compiled kernel when built, pure Python otherwise."""
from __future__ import annotations

from . import _fallback

try:
    from . import _kernel
except ImportError:  # extension not built
    _kernel = None

BACKENDS = {"python": _fallback.Decoder}
if _kernel is not None:
    BACKENDS["cython"] = _kernel.Decoder

DEFAULT_BACKEND = "cython" if _kernel is not None else "python"

_active = DEFAULT_BACKEND


def set_backend(name: str) -> None:
    """Choose the kernel used by decoders created from now on."""
    global _active
    if name not in BACKENDS:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {sorted(BACKENDS)}")
    _active = name


def active_backend() -> str:
    return _active


def build_decoder(instance, backend: str | None = None):
    """Flatten ``instance`` into the arrays the kernels expect."""
    cls = BACKENDS[backend or _active]
    n, r = instance.activity_count, instance.resource_count
    durations = [0, *instance.durations]
    demands = [0] * r
    for dem in instance.demands:
        demands.extend(dem)
    pred_ptr, pred_idx = [0, 0], []
    for j in instance.activities:
        pred_idx.extend(sorted(instance.closure.preds(j)))
        pred_ptr.append(len(pred_idx))
    horizon = sum(instance.durations) + 1
    return cls(durations, demands, list(instance.capacities), pred_ptr, pred_idx, horizon)


def decoder_for(instance):
    """Cached decoder for ``instance`` using the active backend."""
    cache = instance.__dict__.setdefault("_decoders", {})
    dec = cache.get(_active)
    if dec is None:
        dec = cache[_active] = build_decoder(instance)
    return dec
