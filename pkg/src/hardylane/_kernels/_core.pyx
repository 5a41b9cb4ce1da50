# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled classification kernel.

Statement-for-statement mirror of _pure.py; keep the two in sync.  The
array entry point releases the GIL so grid sweeps can fan out over threads.
"""

from libc.math cimport sqrt, fabs, isfinite, NAN, INFINITY

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef int CODE_INVALID = -1
cdef int CODE_OUT_OF_SCOPE = 0
cdef int CODE_T1_I = 1
cdef int CODE_T1_II = 2
cdef int CODE_T2_I = 3
cdef int CODE_T2_II = 4
cdef int CODE_T2_III = 5
cdef int CODE_T3_I_CASE1 = 6
cdef int CODE_T3_I_CASE2 = 7
cdef int CODE_T3_I_CASE3 = 8
cdef int CODE_T3_II_A1 = 9
cdef int CODE_T3_II_A2 = 10
cdef int CODE_T3_II_B1 = 11
cdef int CODE_T3_II_B2 = 12
cdef int CODE_CURVE_AQ = 13
cdef int CODE_CURVE_AB = 14
cdef int CODE_CURVE_BC = 15
cdef int CODE_DOTTED = 16

cdef int FLAG_SWAPPED = 1
cdef int FLAG_MU0_EDGE = 2
cdef int REGIME_SHIFT = 2

cdef double TOL = 1e-12
cdef double MU0_SNAP_REL = 1e-13


cdef struct Result:
    int code
    double margin
    int flags


cdef inline double _tau_plus(long N, double mu0, double mu) nogil:
    return -(N - 2) / 2.0 + sqrt(mu - mu0)


cdef inline Result _mk(int code, double margin, int flags) nogil:
    cdef Result r
    r.code = code
    r.margin = margin
    r.flags = flags
    return r


cdef inline Result _gate(double p, double q, int code, double margin,
                         int flags) nogil:
    if p > 1.0 + TOL and q > 1.0 + TOL:
        return _mk(code, margin, flags)
    return _mk(CODE_DOTTED, (p if p < q else q) - 1.0, flags)


cdef Result _regime_a(long N, double mu0, double mu1, double mu2,
                      double p, double q, bint swapped) nogil:
    cdef int flags = FLAG_SWAPPED if swapped else 0
    cdef double t1 = _tau_plus(N, mu0, mu1)
    cdef double t2 = _tau_plus(N, mu0, mu2)
    cdef double qup = (N + t2) / (-t1)
    cdef double qlo = 2.0 / (-t1)
    cdef double e1 = t1 * (p * q - 1.0) + 2.0 * p + 2.0

    if q >= qup - TOL:
        return _mk(CODE_T1_I, q - qup, flags)
    if q > qlo + TOL:
        if mu1 == mu0:
            if e1 <= TOL:
                if fabs(e1) <= TOL:
                    flags = flags | FLAG_MU0_EDGE
                return _mk(CODE_T1_II, e1, flags)
            return _gate(p, q, CODE_T3_I_CASE1, e1, flags)
        if e1 < -TOL:
            return _mk(CODE_T1_II, e1, flags)
        if e1 <= TOL:
            return _mk(CODE_CURVE_AQ, e1, flags)
        return _gate(p, q, CODE_T3_I_CASE1, e1, flags)
    if q >= qlo - TOL:
        return _gate(p, q, CODE_T3_I_CASE3, 0.0, flags)
    return _gate(p, q, CODE_T3_I_CASE2, qlo - q, flags)


cdef Result _regime_b(long N, double mu0, double mu1, double mu2,
                      double p, double q) nogil:
    cdef double t1 = _tau_plus(N, mu0, mu1)
    cdef double t2 = _tau_plus(N, mu0, mu2)
    cdef double qup = (N + t2) / (-t1)
    cdef double pup = (N + t1) / (-t2)
    cdef double qlo = (2.0 - t2) / (-t1)
    cdef double plo = (2.0 - t1) / (-t2)
    cdef double e1 = t1 * (p * q - 1.0) + 2.0 * p + 2.0
    cdef double e2 = t2 * (p * q - 1.0) + 2.0 * q + 2.0
    cdef double margin
    cdef bint in_q, in_p, fires_ii, fires_iii, on_qlo, on_plo

    if p >= pup - TOL or q >= qup - TOL:
        margin = -INFINITY
        if p >= pup - TOL:
            margin = p - pup
        if q >= qup - TOL and q - qup > margin:
            margin = q - qup
        return _mk(CODE_T2_I, margin, 0)

    in_q = q > qlo + TOL
    in_p = p > plo + TOL
    fires_ii = in_q and e1 < -TOL
    fires_iii = in_p and e2 < -TOL
    if fires_ii and fires_iii:
        if e2 < e1:
            return _mk(CODE_T2_III, e2, 0)
        return _mk(CODE_T2_II, e1, 0)
    if fires_ii:
        return _mk(CODE_T2_II, e1, 0)
    if fires_iii:
        return _mk(CODE_T2_III, e2, 0)
    if in_q and fabs(e1) <= TOL:
        return _mk(CODE_CURVE_AB, e1, 0)
    if in_p and fabs(e2) <= TOL:
        return _mk(CODE_CURVE_BC, e2, 0)

    on_qlo = fabs(q - qlo) <= TOL
    on_plo = fabs(p - plo) <= TOL
    if in_q and e1 > TOL:
        return _gate(p, q, CODE_T3_II_A1, e1, 0)
    if in_p and e2 > TOL:
        return _gate(p, q, CODE_T3_II_B1, e2, 0)
    if on_plo and q < qlo - TOL:
        return _gate(p, q, CODE_T3_II_B2, qlo - q, 0)
    if (q < qlo - TOL or on_qlo) and p < plo - TOL:
        margin = qlo - q
        if plo - p < margin:
            margin = plo - p
        return _gate(p, q, CODE_T3_II_A2, margin, 0)
    return _mk(CODE_DOTTED, 0.0, 0)


cdef Result _classify(long N, double mu1, double mu2,
                      double p, double q) nogil:
    cdef double mu0 = -((N - 2) * (N - 2)) / 4.0
    cdef double band = MU0_SNAP_REL * (N - 2) * (N - 2)
    cdef Result r
    cdef bint neg1, neg2
    if N < 3 or not (p > 0.0 and q > 0.0) or not (isfinite(p) and isfinite(q)):
        return _mk(CODE_INVALID, NAN, 0)
    if mu1 < mu0 - band or mu2 < mu0 - band:
        return _mk(CODE_INVALID, NAN, 0)
    if mu1 <= mu0 + band:
        mu1 = mu0
    if mu2 <= mu0 + band:
        mu2 = mu0

    # regimes split on the sign of the computed exponent, which matches the
    # sign of mu except when mu is negative below double resolution (then
    # tau_+ rounds to exactly 0 and the point behaves as mu = 0)
    neg1 = _tau_plus(N, mu0, mu1) < 0.0
    neg2 = _tau_plus(N, mu0, mu2) < 0.0
    if neg1 and neg2:
        r = _regime_b(N, mu0, mu1, mu2, p, q)
        r.flags = r.flags | (1 << REGIME_SHIFT)
        return r
    if neg1:
        return _regime_a(N, mu0, mu1, mu2, p, q, 0)
    if neg2:
        return _regime_a(N, mu0, mu2, mu1, q, p, 1)
    return _mk(CODE_OUT_OF_SCOPE, mu1 if mu1 < mu2 else mu2, 2 << REGIME_SHIFT)


def classify_code(N, mu1, mu2, p, q):
    """Classify one parameter point; returns (code, margin, flags)."""
    cdef Result r = _classify(N, mu1, mu2, p, q)
    return r.code, r.margin, r.flags


def classify_codes(N, mu1, mu2, p, q):
    """Vector version: equal-length 1-D arrays in, (codes, margins, flags) out."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1] N_ = np.ascontiguousarray(N, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] mu1_ = np.ascontiguousarray(mu1, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] mu2_ = np.ascontiguousarray(mu2, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] p_ = np.ascontiguousarray(p, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] q_ = np.ascontiguousarray(q, dtype=np.float64)
    cdef Py_ssize_t n = p_.shape[0]
    cdef cnp.ndarray[cnp.int16_t, ndim=1] codes = np.empty(n, dtype=np.int16)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] margins = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] flags = np.empty(n, dtype=np.uint8)
    cdef Py_ssize_t i
    cdef Result r
    with nogil:
        for i in range(n):
            r = _classify(N_[i], mu1_[i], mu2_[i], p_[i], q_[i])
            codes[i] = <cnp.int16_t> r.code
            margins[i] = r.margin
            flags[i] = <cnp.uint8_t> r.flags
    return codes, margins, flags


def tau_pair_arrays(N, mu):
    """Vectorized tau_+(mu), tau_-(mu) for equal-length arrays."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] N_ = np.ascontiguousarray(N, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] mu_ = np.ascontiguousarray(mu, dtype=np.float64)
    cdef Py_ssize_t n = mu_.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tp = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tm = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    cdef double half, s
    with nogil:
        for i in range(n):
            half = (N_[i] - 2.0) / 2.0
            s = sqrt(mu_[i] + half * half)
            tp[i] = -half + s
            tm[i] = -half - s
    return tp, tm
