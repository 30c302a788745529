"""Process-local memo of guided-mode solutions."""

from __future__ import annotations

import threading

from ..guided import FiberSpec, GuidedModeSolution, solve_mode

_LOCK = threading.Lock()
_CACHE: dict = {}
_ENABLED = True


def cache_key(fiber: FiberSpec, omega: float) -> tuple:
    # 13 significant digits: keys agree to ~1e-12 relative
    return (fiber.a, fiber.n1, fiber.n2, float(f"{omega:.12e}"))


def set_cache_enabled(flag: bool):
    global _ENABLED
    _ENABLED = bool(flag)


def clear_cache():
    with _LOCK:
        _CACHE.clear()


def cache_size() -> int:
    return len(_CACHE)


def mode_cache(fiber: FiberSpec, omega: float) -> GuidedModeSolution:
    """Solved HE11 mode, memoized on (fiber, omega) unless caching is off."""
    if not _ENABLED:
        return solve_mode(fiber, omega)
    key = cache_key(fiber, omega)
    with _LOCK:
        hit = _CACHE.get(key)
    if hit is not None:
        return hit
    mode = solve_mode(fiber, omega)
    with _LOCK:
        return _CACHE.setdefault(key, mode)
