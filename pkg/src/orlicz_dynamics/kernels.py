"""Backend selection for the numerical kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy implementation in ``_pykernels`` is used. Setting the environment
variable ``ORLICZ_DYNAMICS_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _pykernels

if os.environ.get("ORLICZ_DYNAMICS_PURE_PYTHON", "") not in ("", "0"):
    _backend = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _backend
        BACKEND = "cython"
    except ImportError:
        _backend = _pykernels
        BACKEND = "python"

phi_scalar = _backend.phi_scalar
inverse = _backend.inverse
modular = _backend.modular
luxemburg = _backend.luxemburg
amemiya = _backend.amemiya

# generic routines used for table-defined Young functions
luxemburg_generic = _pykernels.luxemburg_generic
amemiya_generic = _pykernels.amemiya_generic
golden_min = _pykernels.golden_min
