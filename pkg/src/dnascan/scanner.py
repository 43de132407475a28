"""Sequential and chunked/striped parallel scanning.

The text is split into ``p`` chunks, each owning a contiguous range of
match START positions and scanning ``m - 1`` bytes past it so that
windows straddling the boundary are seen. Each chunk is split the same
way into ``v`` lanes that advance in lockstep. A match is reported only
by the lane whose own range contains its start, so every occurrence is
reported exactly once.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import _kernels
from .automaton import Automaton
from .errors import InvalidPlan


class Match(NamedTuple):
    pattern_id: int
    start: int


class Span(NamedTuple):
    lo: int
    hi: int

    def __len__(self) -> int:
        return self.hi - self.lo


class Piece(NamedTuple):
    scan: Span
    own: Span


@dataclass(frozen=True)
class ChunkPlan:
    n: int
    p: int
    m: int
    chunks: tuple[Piece, ...]


@dataclass(frozen=True)
class LanePlan:
    parent: Piece
    v: int
    m: int
    lanes: tuple[Piece, ...]

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        cols = np.array(
            [(ln.scan.lo, ln.scan.hi, ln.own.lo, ln.own.hi) for ln in self.lanes],
            dtype=np.int64,
        ).reshape(-1, 4)
        return tuple(np.ascontiguousarray(cols[:, i]) for i in range(4))  # type: ignore[return-value]


def _split(lo: int, hi: int, parts: int, m: int, scan_end: int) -> tuple[Piece, ...]:
    length = hi - lo
    base, extra = divmod(length, parts)
    pieces = []
    own_lo = lo
    for i in range(parts):
        own_hi = own_lo + base + (1 if i < extra else 0)
        scan = Span(own_lo, min(own_hi + m - 1, scan_end))
        pieces.append(Piece(scan, Span(own_lo, own_hi)))
        own_lo = own_hi
    return tuple(pieces)


def _check(name: str, value: int) -> None:
    if value < 1:
        raise InvalidPlan(f"{name} must be >= 1, got {value}")


def plan_chunks(n: int, p: int, m: int) -> ChunkPlan:
    """Split ``[0, n)`` into ``p`` owned ranges; remainder goes to the first
    ``n % p`` chunks. Fewer bytes than chunks collapses to a single chunk."""
    _check("p", p)
    _check("m", m)
    if n < 0:
        raise InvalidPlan(f"n must be >= 0, got {n}")
    if n == 0:
        return ChunkPlan(n, p, m, ())
    parts = p if n >= p else 1
    return ChunkPlan(n, p, m, _split(0, n, parts, m, n))


def plan_lanes(chunk: Piece, v: int, m: int) -> LanePlan:
    """Split a chunk's own range into ``min(v, len(own))`` lanes, each
    scanning ``m - 1`` bytes past its own range, clamped to the chunk."""
    _check("v", v)
    _check("m", m)
    length = len(chunk.own)
    if length == 0:
        return LanePlan(chunk, v, m, ())
    lanes = _split(chunk.own.lo, chunk.own.hi, min(v, length), m, chunk.scan.hi)
    return LanePlan(chunk, v, m, lanes)


def owns(own: Span, match_start: int) -> bool:
    return own.lo <= match_start < own.hi


def _as_array(text: bytes | np.ndarray) -> np.ndarray:
    if isinstance(text, np.ndarray):
        return text
    return np.frombuffer(text, dtype=np.uint8)


class Matches(NamedTuple):
    """Columnar match set, sorted by (start, pattern_id)."""

    starts: np.ndarray
    pattern_ids: np.ndarray

    def __len__(self) -> int:
        return int(self.starts.shape[0])

    def to_list(self) -> list[Match]:
        return [Match(int(p), int(s)) for s, p in zip(self.starts, self.pattern_ids)]

    def to_set(self) -> set[Match]:
        return set(self.to_list())


def _canonical(aut: Automaton, ends: np.ndarray, states: np.ndarray) -> Matches:
    starts = ends - (aut.m - 1)
    pids = aut.final_pattern[states.astype(np.int64) - aut.f]
    order = np.lexsort((pids, starts))
    return Matches(starts[order], pids[order])


def _buffers(capacity: int) -> tuple[np.ndarray, np.ndarray]:
    return np.empty(capacity, np.int64), np.empty(capacity, np.uint32)


def _initial_capacity(length: int) -> int:
    return max(1024, length // 256)


def scan_sequential(aut: Automaton, text: bytes | np.ndarray) -> Matches:
    """Every (including overlapping) occurrence, one δ per byte."""
    arr = _as_array(text)
    n = int(arr.shape[0])
    ends, states = _buffers(_initial_capacity(n))
    count = _kernels.scan_range(aut.stt, aut.f, arr, 0, n, ends, states)
    if count > ends.shape[0]:
        ends, states = _buffers(count)
        _kernels.scan_range(aut.stt, aut.f, arr, 0, n, ends, states)
    return _canonical(aut, ends[:count], states[:count])


def _lane_scan(aut: Automaton, arr: np.ndarray, lanes: LanePlan):
    """Returns (ends, states, delta_ops) for one chunk."""
    if not lanes.lanes:
        return np.empty(0, np.int64), np.empty(0, np.uint32), 0
    cols = lanes.arrays()
    ends, states = _buffers(_initial_capacity(len(lanes.parent.scan)))
    count, ops = _kernels.scan_lanes(aut.stt, aut.f, aut.m, arr, *cols, ends, states)
    if count > ends.shape[0]:
        ends, states = _buffers(count)
        _kernels.scan_lanes(aut.stt, aut.f, aut.m, arr, *cols, ends, states)
    return ends[:count], states[:count], ops


def scan_chunk_striped(aut: Automaton, text: bytes | np.ndarray, lanes: LanePlan) -> Matches:
    """Owned matches of one chunk, lanes advanced in lockstep."""
    ends, states, _ = _lane_scan(aut, _as_array(text), lanes)
    return _canonical(aut, ends, states)


@dataclass
class ScanReport:
    p: int
    v: int
    m: int
    n: int
    counts: np.ndarray
    delta_ops: int
    wall_time: float
    worker_times: list[float] = field(default_factory=list)
    matches: Matches | None = None

    @property
    def total_matches(self) -> int:
        return int(self.counts.sum())

    def canonical(self) -> dict:
        """Timing-free view; identical inputs give identical dicts."""
        out = {
            "plan": {"p": self.p, "v": self.v, "m": self.m, "n": self.n},
            "counts": self.counts.tolist(),
            "total_matches": self.total_matches,
            "delta_ops": self.delta_ops,
        }
        if self.matches is not None:
            out["matches"] = [[int(s), int(p)] for s, p in zip(*self.matches)]
        return out


def scan_parallel(
    aut: Automaton,
    text: bytes | np.ndarray,
    p: int,
    v: int,
    *,
    locate: bool = True,
) -> ScanReport:
    """Scan with ``p`` chunk workers of ``v`` lanes each.

    With ``locate=False`` only per-pattern counts are produced.
    """
    arr = _as_array(text)
    n = int(arr.shape[0])
    plan = plan_chunks(n, p, aut.m)
    _check("v", v)
    lane_plans = [plan_lanes(chunk, v, aut.m) for chunk in plan.chunks]

    def work(lanes: LanePlan):
        t0 = time.perf_counter()
        if locate:
            res = _lane_scan(aut, arr, lanes)
        else:
            res = _kernels.count_lanes(aut.stt, aut.f, aut.m, arr, *lanes.arrays())
        return res, time.perf_counter() - t0

    t0 = time.perf_counter()
    if len(lane_plans) <= 1:
        results = [work(lp) for lp in lane_plans]
    else:
        with ThreadPoolExecutor(max_workers=len(lane_plans)) as pool:
            results = list(pool.map(work, lane_plans))
    wall = time.perf_counter() - t0

    delta_ops = sum(int(r[0][-1]) for r in results)
    worker_times = [r[1] for r in results]
    matches = None
    if locate:
        if results:
            ends = np.concatenate([r[0][0] for r in results])
            states = np.concatenate([r[0][1] for r in results])
        else:
            ends, states = np.empty(0, np.int64), np.empty(0, np.uint32)
        matches = _canonical(aut, ends, states)
        counts = np.bincount(matches.pattern_ids, minlength=aut.b).astype(np.int64)
    else:
        by_state = np.zeros(aut.b, np.int64)
        for (c, _), _t in results:
            by_state += c
        counts = np.zeros(aut.b, np.int64)
        np.add.at(counts, aut.final_pattern, by_state)
    return ScanReport(
        p=p,
        v=v,
        m=aut.m,
        n=n,
        counts=counts,
        delta_ops=delta_ops,
        wall_time=wall,
        worker_times=worker_times,
        matches=matches,
    )


@dataclass(frozen=True)
class WorkEstimate:
    paper_overhead: int
    exact_total: int
    exact_overhead: int
    per_worker: tuple[int, ...]


def work_model(n: int, p: int, v: int, m: int) -> WorkEstimate:
    """δ-operation counts for a plan, plus the ``v(m-1) + p(m-1)`` estimate."""
    _check("v", v)
    plan = plan_chunks(n, p, m)
    per_worker = tuple(
        sum(len(lane.scan) for lane in plan_lanes(chunk, v, m).lanes) for chunk in plan.chunks
    )
    total = sum(per_worker)
    return WorkEstimate(
        paper_overhead=v * (m - 1) + p * (m - 1),
        exact_total=total,
        exact_overhead=total - n,
        per_worker=per_worker,
    )
