# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled replay kernel: the hot loop of the trip-replay simulator.

Semantics are defined by the pure-Python twin (_pykernel.replay); this
version must stay operation-for-operation identical so both engines produce
bit-identical results. Integer divisions are floored explicitly because C
division truncates.
"""

import numpy as np

ENGINE = "compiled"

cdef double TOL_KWH = 1e-9
cdef long long DAY_S = 86400


cdef inline long long _floordiv(long long a, long long b) noexcept:
    # b > 0 always; match Python's floor semantics for negative a
    cdef long long q = a // b
    return q


cdef inline int _weekday(long long day) noexcept:
    return <int>(((day % 7) + 10) % 7)


def replay(
    const long long[::1] start_s,
    const long long[::1] end_s,
    const double[::1] energy_kwh,
    double capacity_kwh,
    double initial_soc_kwh,
    double power_kw,
    double soc_trigger,
    long long min_duration_s,
    bint anytime,
    int day_mask,
    long long window_start_s,
    long long window_length_s,
):
    """See _pykernel.replay for the contract."""
    cdef Py_ssize_t n = start_s.shape[0]
    cdef Py_ssize_t n_park = n - 1 if n > 0 else 0

    feasible_arr = np.zeros(n, dtype=np.uint8)
    soc_before_arr = np.empty(n, dtype=np.float64)
    soc_after_arr = np.empty(n, dtype=np.float64)
    cb_arr = np.empty(n_park, dtype=np.float64)
    ce_arr = np.empty(n_park, dtype=np.float64)
    ck_arr = np.empty(n_park, dtype=np.float64)

    cdef unsigned char[::1] feasible = feasible_arr
    cdef double[::1] soc_before = soc_before_arr
    cdef double[::1] soc_after = soc_after_arr
    cdef double[::1] cb = cb_arr
    cdef double[::1] ce = ce_arr
    cdef double[::1] ck = ck_arr

    cdef Py_ssize_t i
    cdef Py_ssize_t m = 0
    cdef double soc = initial_soc_kwh
    cdef double e, hours, potential, room, delivered
    cdef long long p0, p1, day, last_day, w0, w1, o0, o1, begin, cend

    for i in range(n):
        soc_before[i] = soc
        e = energy_kwh[i]
        if e <= soc + TOL_KWH:
            feasible[i] = 1
            soc = soc - e
            if soc < 0.0:
                soc = 0.0
        else:
            soc = 0.0
        soc_after[i] = soc

        if i + 1 == n:
            break
        p0 = end_s[i]
        p1 = start_s[i + 1]

        begin = -1
        cend = -1
        if anytime:
            if p1 - p0 >= min_duration_s and soc / capacity_kwh < soc_trigger:
                begin = p0
                cend = p1
        else:
            day = _floordiv(p0 - window_length_s, DAY_S)
            last_day = _floordiv(p1, DAY_S)
            while day <= last_day:
                if (day_mask >> _weekday(day)) & 1:
                    w0 = day * DAY_S + window_start_s
                    if w0 >= p1:
                        break
                    o0 = p0 if p0 > w0 else w0
                    w1 = w0 + window_length_s
                    o1 = p1 if p1 < w1 else w1
                    if o1 - o0 >= min_duration_s:
                        if soc / capacity_kwh < soc_trigger:
                            begin = o0
                            cend = o1
                        break
                day += 1

        if begin >= 0:
            hours = (cend - begin) / 3600.0
            potential = power_kw * hours
            room = capacity_kwh - soc
            if potential >= room:
                delivered = room
                soc = capacity_kwh
            else:
                delivered = potential
                soc = soc + delivered
            if delivered > TOL_KWH:
                cb[m] = begin
                ce[m] = begin + delivered / power_kw * 3600.0
                ck[m] = delivered
                m += 1

    return (
        feasible_arr,
        soc_before_arr,
        soc_after_arr,
        cb_arr[:m].copy(),
        ce_arr[:m].copy(),
        ck_arr[:m].copy(),
        soc,
    )
