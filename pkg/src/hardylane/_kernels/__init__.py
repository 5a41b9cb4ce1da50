"""Kernel backend selection: compiled extension if available, else pure Python.

Set LEH_BACKEND=python to force the fallback (used by the benchmark and by
tests that compare the two backends).
"""

import os

from . import _pure

BACKEND = "python"
_impl = _pure

if os.environ.get("LEH_BACKEND", "").lower() != "python":
    try:
        from . import _core as _compiled
        _impl = _compiled
        BACKEND = "compiled"
    except ImportError:
        pass

# Region codes and flag bits are defined by the reference implementation.
CODE_INVALID = _pure.CODE_INVALID
CODE_OUT_OF_SCOPE = _pure.CODE_OUT_OF_SCOPE
CODE_T1_I = _pure.CODE_T1_I
CODE_T1_II = _pure.CODE_T1_II
CODE_T2_I = _pure.CODE_T2_I
CODE_T2_II = _pure.CODE_T2_II
CODE_T2_III = _pure.CODE_T2_III
CODE_T3_I_CASE1 = _pure.CODE_T3_I_CASE1
CODE_T3_I_CASE2 = _pure.CODE_T3_I_CASE2
CODE_T3_I_CASE3 = _pure.CODE_T3_I_CASE3
CODE_T3_II_A1 = _pure.CODE_T3_II_A1
CODE_T3_II_A2 = _pure.CODE_T3_II_A2
CODE_T3_II_B1 = _pure.CODE_T3_II_B1
CODE_T3_II_B2 = _pure.CODE_T3_II_B2
CODE_CURVE_AQ = _pure.CODE_CURVE_AQ
CODE_CURVE_AB = _pure.CODE_CURVE_AB
CODE_CURVE_BC = _pure.CODE_CURVE_BC
CODE_DOTTED = _pure.CODE_DOTTED
FLAG_SWAPPED = _pure.FLAG_SWAPPED
FLAG_MU0_EDGE = _pure.FLAG_MU0_EDGE
REGIME_SHIFT = _pure.REGIME_SHIFT
TOL = _pure.TOL


def classify_code(N, mu1, mu2, p, q):
    return _impl.classify_code(N, mu1, mu2, p, q)


def classify_codes(N, mu1, mu2, p, q):
    return _impl.classify_codes(N, mu1, mu2, p, q)


def tau_pair_arrays(N, mu):
    return _impl.tau_pair_arrays(N, mu)
