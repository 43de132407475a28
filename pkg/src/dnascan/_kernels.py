"""Compiled inner loops. All kernels release the GIL.

Locating kernels write into caller-supplied buffers and return the
number of matches found, which may exceed the buffer length; in that
case the caller reallocates and reruns. Positions are END offsets.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def scan_range(stt, f, text, lo, hi, ends, states):
    """Plain left-to-right scan of text[lo:hi) from the root."""
    cap = ends.shape[0]
    count = 0
    q = np.uint32(0)
    for c in range(lo, hi):
        q = stt[q, text[c]]
        if q >= f:
            if count < cap:
                ends[count] = c
                states[count] = q
            count += 1
    return count


@njit(cache=True, nogil=True)
def scan_lanes(stt, f, m, text, scan_lo, scan_hi, own_lo, own_hi, ends, states):
    """Advance all lanes in lockstep, keeping matches whose start each
    lane owns. Returns (match_count, delta_ops)."""
    v = scan_lo.shape[0]
    cap = ends.shape[0]
    count = 0
    ops = 0
    q = np.zeros(v, dtype=np.uint32)
    steps = 0
    for k in range(v):
        steps = max(steps, scan_hi[k] - scan_lo[k])
    for step in range(steps):
        for k in range(v):
            c = scan_lo[k] + step
            if c < scan_hi[k]:
                s = stt[q[k], text[c]]
                q[k] = s
                ops += 1
                if s >= f:
                    start = c - m + 1
                    if own_lo[k] <= start and start < own_hi[k]:
                        if count < cap:
                            ends[count] = c
                            states[count] = s
                        count += 1
    return count, ops


@njit(cache=True, nogil=True)
def count_lanes(stt, f, m, text, scan_lo, scan_hi, own_lo, own_hi):
    """Counting variant of :func:`scan_lanes`: per-final-state tallies."""
    v = scan_lo.shape[0]
    counts = np.zeros(stt.shape[0] - f, dtype=np.int64)
    ops = 0
    q = np.zeros(v, dtype=np.uint32)
    steps = 0
    for k in range(v):
        steps = max(steps, scan_hi[k] - scan_lo[k])
    for step in range(steps):
        for k in range(v):
            c = scan_lo[k] + step
            if c < scan_hi[k]:
                s = stt[q[k], text[c]]
                q[k] = s
                ops += 1
                if s >= f:
                    start = c - m + 1
                    if own_lo[k] <= start and start < own_hi[k]:
                        counts[s - f] += 1
    return counts, ops
