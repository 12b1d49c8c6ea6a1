"""Backend selection for the entrywise hot kernels.

The compiled extension ``orthentropy._kernels`` is used when it imports;
otherwise the NumPy module ``orthentropy._pykernels`` is. Setting the
environment variable ``ORTHENTROPY_PURE_PYTHON=1`` forces the fallback.

Callers go through the module-level names below (``kernels.row_entropies``
and so on) so that :func:`set_backend` takes effect everywhere.
"""
import os

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_NAMES = (
    "row_entropies",
    "entropy_gradient",
    "power_sum",
    "power_gradient",
    "objective_gain",
    "stationarity_residual",
)

BACKEND = None


def available_backends():
    return ["cython", "python"] if _compiled is not None else ["python"]


def backend_module(name):
    if name == "python":
        return _pykernels
    if name == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available in this install")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def set_backend(name):
    """Rebind the kernel functions to backend ``name`` ('cython' or 'python')."""
    global BACKEND
    module = backend_module(name)
    g = globals()
    for fn in _NAMES:
        g[fn] = getattr(module, fn)
    BACKEND = name


if _compiled is not None and not os.environ.get("ORTHENTROPY_PURE_PYTHON"):
    set_backend("cython")
else:
    set_backend("python")
