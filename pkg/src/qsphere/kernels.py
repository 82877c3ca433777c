"""Kernel backend selection.

The compiled extension is used when it has been built; otherwise the numpy
implementation is used.  Setting ``QSPHERE_PURE_PYTHON=1`` forces the numpy
path.
"""
import os

from . import _kron_py

BACKEND = "python"
kron_coo = _kron_py.kron_coo

if os.environ.get("QSPHERE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kron
    except ImportError:
        pass
    else:
        kron_coo = _kron.kron_coo
        BACKEND = "cython"

__all__ = ["BACKEND", "kron_coo"]
