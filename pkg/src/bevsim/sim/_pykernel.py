"""Pure-Python replay kernel.

Fallback used when the compiled extension is unavailable (or forced via
BEVSIM_ENGINE=python). Mirrors the compiled kernel operation for operation:
both must produce bit-identical outputs.
"""

from __future__ import annotations

import numpy as np

ENGINE = "python"

TOL_KWH = 1e-9
DAY_S = 86400


def replay(
    start_s: np.ndarray,
    end_s: np.ndarray,
    energy_kwh: np.ndarray,
    capacity_kwh: float,
    initial_soc_kwh: float,
    power_kw: float,
    soc_trigger: float,
    min_duration_s: int,
    anytime: bool,
    day_mask: int,
    window_start_s: int,
    window_length_s: int,
):
    """Replay one user timeline against one vehicle and one policy.

    Returns (feasible, soc_before, soc_after, charge_begin_s, charge_end_s,
    charge_kwh, final_soc_kwh). Charge begins are whole epoch seconds; ends
    may be fractional (charging stops the moment the battery is full).
    """
    n = len(start_s)
    feasible = np.zeros(n, dtype=np.uint8)
    soc_before = np.empty(n, dtype=np.float64)
    soc_after = np.empty(n, dtype=np.float64)
    n_park = max(n - 1, 0)
    cb = np.empty(n_park, dtype=np.float64)
    ce = np.empty(n_park, dtype=np.float64)
    ck = np.empty(n_park, dtype=np.float64)
    m = 0

    soc = float(initial_soc_kwh)
    for i in range(n):
        soc_before[i] = soc
        e = energy_kwh[i]
        if e <= soc + TOL_KWH:
            feasible[i] = 1
            soc = soc - e
            if soc < 0.0:
                soc = 0.0
        else:
            soc = 0.0  # trip not feasible; battery pinned at empty
        soc_after[i] = soc

        if i + 1 == n:
            break
        # parking spans this trip's end to the next trip's start
        p0 = int(end_s[i])
        p1 = int(start_s[i + 1])

        begin = -1
        cend = -1
        if anytime:
            if p1 - p0 >= min_duration_s and soc / capacity_kwh < soc_trigger:
                begin, cend = p0, p1
        else:
            day = (p0 - window_length_s) // DAY_S
            last_day = p1 // DAY_S
            while day <= last_day:
                if (day_mask >> (((day % 7) + 10) % 7)) & 1:
                    w0 = day * DAY_S + window_start_s
                    if w0 >= p1:
                        break
                    o0 = p0 if p0 > w0 else w0
                    w1 = w0 + window_length_s
                    o1 = p1 if p1 < w1 else w1
                    if o1 - o0 >= min_duration_s:
                        if soc / capacity_kwh < soc_trigger:
                            begin, cend = o0, o1
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
        feasible,
        soc_before,
        soc_after,
        cb[:m].copy(),
        ce[:m].copy(),
        ck[:m].copy(),
        soc,
    )
