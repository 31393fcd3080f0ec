"""Kernel backend selection.

The compiled extension ``trigsurf._kernels`` is used when importable;
otherwise the pure-Python twin ``trigsurf._kernels_py`` is used.  Both
expose ``march`` and ``lift`` with identical semantics.
"""

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # pragma: no cover - depends on build environment
    _compiled = None

CIRCLE = _kernels_py.CIRCLE
LINE = _kernels_py.LINE

_BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled

_active = _compiled if _compiled is not None else _kernels_py


def available_backends():
    return sorted(_BACKENDS)


def backend_name():
    return "compiled" if _active is _compiled and _compiled is not None else "python"


def use_backend(name):
    """Switch the active kernel implementation (``"compiled"`` or ``"python"``)."""
    global _active
    try:
        _active = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} not available; "
                         f"have {available_backends()}") from None


def march(*args):
    return _active.march(*args)


def lift(*args):
    return _active.lift(*args)
