"""Hot-loop kernels with a compiled backend and a pure-numpy fallback.

The Cython extension ``_ckernels`` is used when it was built; otherwise (or
when ``LMSVTAIL_PURE_PYTHON=1`` is set) the numpy versions in
``_pykernels`` are used.  ``BACKEND`` names the active choice.
"""
import os

from . import _pykernels

FAMILY_CODES = _pykernels.FAMILY_CODES

_impl = _pykernels
BACKEND = "python"
if os.environ.get("LMSVTAIL_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels


def available_backends():
    out = {"python": _pykernels}
    try:
        from . import _ckernels
        out["cython"] = _ckernels
    except ImportError:
        pass
    return out


hermite_table = _impl.hermite_table
count_exceedances = _impl.count_exceedances
hill_curve = _impl.hill_curve
conditional_exceedance_sums = _impl.conditional_exceedance_sums
