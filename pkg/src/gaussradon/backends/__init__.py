"""Kernel backend selection.

Two implementations of the hot kernels exist: a compiled Cython module
and a pure-numpy fallback with the same stream layout.  The compiled one
is preferred when importable.  Control with the environment variable
GAUSSRADON_BACKEND = auto | python | ext (default auto), or at runtime
with use(); the choice only affects speed, not which numbers are drawn
for a given (seed, index).
"""

from __future__ import annotations

import os

from . import purepy

try:
    from . import _kernels
except ImportError:
    _kernels = None

_BACKENDS = {"python": purepy}
if _kernels is not None:
    _BACKENDS["ext"] = _kernels


def _pick(name: str):
    if name == "auto":
        return _BACKENDS.get("ext", purepy)
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"backend {name!r} not available (choices: auto, "
            + ", ".join(sorted(_BACKENDS)) + ")") from None


_active = _pick(os.environ.get("GAUSSRADON_BACKEND", "auto"))


def use(name: str) -> str:
    """Switch the active backend ('auto', 'python' or 'ext'); returns its name."""
    global _active
    _active = _pick(name)
    return active_name()


def active_name() -> str:
    return "ext" if _active is _kernels and _kernels is not None else "python"


def available() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def raw64(seed, start, count):
    return _active.raw64(seed, start, count)


def uniforms(seed, start, count):
    return _active.uniforms(seed, start, count)


def normals(seed, start, count):
    return _active.normals(seed, start, count)


def span_moments(x, w, d, c):
    return _active.span_moments(x, w, d, c)
