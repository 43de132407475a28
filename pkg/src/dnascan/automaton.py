"""Failure-free Aho-Corasick automaton over raw bytes.

Compilation runs four steps: build the goto trie, compute failure links
breadth-first, fold the failure links into a total transition table, and
renumber states so that every final state sits at or above a threshold
``f``. Scanning then needs one table lookup and one integer comparison
per input byte.

The transition table has 256 columns indexed directly by byte value.
Only the four nucleotide columns carry real transitions; every other
byte sends the machine back to the root.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import DuplicatePattern, EmptyPatternSet, IllegalByte, UnequalLength

ALPHABET = b"acgt"
NUM_COLUMNS = 256
STATE_DTYPE = np.uint32


def normalize(data: bytes) -> bytes:
    """Fold ASCII upper case to lower case; other bytes are left alone."""
    return bytes(data).lower()


@dataclass(frozen=True)
class PatternSet:
    """Validated, ordered set of equal-length nucleotide patterns.

    Pattern ids are positions in ``patterns``.
    """

    patterns: tuple[bytes, ...]
    m: int

    @classmethod
    def from_iterable(cls, patterns: Iterable[bytes | str]) -> PatternSet:
        normalized = []
        for p in patterns:
            raw = p.encode("ascii") if isinstance(p, str) else bytes(p)
            normalized.append(normalize(raw))
        if not normalized:
            raise EmptyPatternSet("pattern set is empty")
        m = len(normalized[0])
        seen: set[bytes] = set()
        for pid, pat in enumerate(normalized):
            if len(pat) != m or m == 0:
                raise UnequalLength(
                    f"pattern {pid} ({pat!r}) has length {len(pat)}, expected {m}"
                    if m
                    else "patterns must be non-empty"
                )
            for col, byte in enumerate(pat):
                if byte not in ALPHABET:
                    raise IllegalByte(
                        f"pattern {pid} ({pat!r}) has byte {bytes([byte])!r} at {col}"
                    )
            if pat in seen:
                raise DuplicatePattern(f"pattern {pat!r} occurs more than once")
            seen.add(pat)
        return cls(tuple(normalized), m)

    @property
    def alphabet(self) -> bytes:
        return ALPHABET

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self):
        return iter(self.patterns)

    def __getitem__(self, pid: int) -> bytes:
        return self.patterns[pid]


def as_pattern_set(patterns: PatternSet | Iterable[bytes | str]) -> PatternSet:
    if isinstance(patterns, PatternSet):
        return patterns
    return PatternSet.from_iterable(patterns)


@dataclass
class TrieNode:
    depth: int
    children: dict[int, int] = field(default_factory=dict)
    failure: int = 0
    terminal: int | None = None


@dataclass(frozen=True)
class Automaton:
    """Total DFA with threshold finality.

    ``stt[s, c]`` is the successor of state ``s`` on byte ``c``. States
    ``>= f`` are final, and ``final_pattern[s - f]`` is the pattern id
    reported by final state ``s``. ``depths`` (when known) is the length
    of the prefix each state spells.
    """

    stt: np.ndarray
    f: int
    m: int
    final_pattern: np.ndarray
    patterns: PatternSet | None = None
    depths: np.ndarray | None = None
    start: int = 0

    @property
    def a(self) -> int:
        return int(self.stt.shape[0])

    @property
    def b(self) -> int:
        return self.a - self.f

    @property
    def outputs(self) -> dict[int, int]:
        return {self.f + i: int(pid) for i, pid in enumerate(self.final_pattern)}

    def delta(self, state: int, c: int) -> int:
        return int(self.stt[state, c])

    def is_final(self, state: int) -> bool:
        return state >= self.f

    def pattern_of(self, state: int) -> int:
        return int(self.final_pattern[state - self.f])


def delta(aut: Automaton, state: int, c: int) -> int:
    return aut.delta(state, c)


def is_final(aut: Automaton, state: int) -> bool:
    return aut.is_final(state)


def build_trie(patterns: PatternSet) -> list[TrieNode]:
    """One node per distinct prefix; node 0 is the root."""
    nodes = [TrieNode(depth=0)]
    for pid, pat in enumerate(patterns):
        cur = 0
        for byte in pat:
            nxt = nodes[cur].children.get(byte)
            if nxt is None:
                nxt = len(nodes)
                nodes.append(TrieNode(depth=nodes[cur].depth + 1))
                nodes[cur].children[byte] = nxt
            cur = nxt
        nodes[cur].terminal = pid
    return nodes


def _bfs_order(trie: list[TrieNode]) -> list[int]:
    order = [0]
    queue = deque([0])
    while queue:
        node = queue.popleft()
        for byte in sorted(trie[node].children):
            child = trie[node].children[byte]
            order.append(child)
            queue.append(child)
    return order


def compute_failures(trie: list[TrieNode]) -> list[TrieNode]:
    """Set each node's failure link to the longest proper suffix that is
    also a pattern prefix. Mutates and returns ``trie``."""
    trie[0].failure = 0
    for node in _bfs_order(trie):
        for byte, child in trie[node].children.items():
            if node == 0:
                trie[child].failure = 0
                continue
            fb = trie[node].failure
            while fb != 0 and byte not in trie[fb].children:
                fb = trie[fb].failure
            trie[child].failure = trie[fb].children.get(byte, 0)
    return trie


def eliminate_failures(trie: list[TrieNode]) -> np.ndarray:
    """Fold failure links into a total (nodes x 256) table in trie ids."""
    table = np.zeros((len(trie), NUM_COLUMNS), dtype=STATE_DTYPE)
    # BFS order guarantees a node's failure target row is already filled.
    for node in _bfs_order(trie):
        fb = trie[node].failure
        for byte in ALPHABET:
            child = trie[node].children.get(byte)
            if child is not None:
                table[node, byte] = child
            elif node != 0:
                table[node, byte] = table[fb, byte]
    return table


def renumber_finals(
    trie: list[TrieNode], table: np.ndarray, patterns: PatternSet | None = None
) -> Automaton:
    """Move terminal nodes to the top of the id range, ordered by pattern id."""
    order = _bfs_order(trie)
    regular = [n for n in order if trie[n].terminal is None]
    finals = sorted(
        (n for n in order if trie[n].terminal is not None),
        key=lambda n: trie[n].terminal,
    )
    new_ids = np.empty(len(trie), dtype=STATE_DTYPE)
    for new, old in enumerate(regular + finals):
        new_ids[old] = new
    old_of_new = np.array(regular + finals, dtype=np.intp)
    stt = new_ids[table[old_of_new]]
    stt.setflags(write=False)
    final_pattern = np.array([trie[n].terminal for n in finals], dtype=np.int64)
    final_pattern.setflags(write=False)
    depths = np.array([trie[n].depth for n in old_of_new], dtype=np.int64)
    depths.setflags(write=False)
    return Automaton(
        stt=stt,
        f=len(regular),
        m=trie[finals[0]].depth if finals else 0,
        final_pattern=final_pattern,
        patterns=patterns,
        depths=depths,
    )


def compile_patterns(patterns: PatternSet | Iterable[bytes | str]) -> Automaton:
    pset = as_pattern_set(patterns)
    trie = compute_failures(build_trie(pset))
    return renumber_finals(trie, eliminate_failures(trie), pset)


def dump(aut: Automaton) -> str:
    """Text dump: ``a b f m`` header, one 256-column row per state, then
    one ``final_state pattern_id`` line per final state."""
    lines = [f"{aut.a} {aut.b} {aut.f} {aut.m}"]
    lines.extend(" ".join(map(str, row.tolist())) for row in aut.stt)
    lines.extend(f"{s} {pid}" for s, pid in sorted(aut.outputs.items()))
    return "\n".join(lines) + "\n"


def load(text: str, patterns: PatternSet | None = None) -> Automaton:
    """Inverse of :func:`dump`. Rejects tables that are not total."""
    rows = [line.split() for line in text.splitlines() if line.strip()]
    a, b, f, m = (int(x) for x in rows[0])
    if f != a - b or f < 1:
        raise ValueError(f"inconsistent header: a={a} b={b} f={f}")
    if len(rows) != 1 + a + b:
        raise ValueError(f"expected {1 + a + b} lines, got {len(rows)}")
    stt = np.array([[int(x) for x in r] for r in rows[1 : 1 + a]], dtype=np.int64)
    if stt.shape != (a, NUM_COLUMNS):
        raise ValueError(f"transition rows must have {NUM_COLUMNS} columns")
    if stt.min() < 0 or stt.max() >= a:
        raise ValueError("transition table refers to a missing state")
    final_pattern = np.full(b, -1, dtype=np.int64)
    for r in rows[1 + a :]:
        state, pid = int(r[0]), int(r[1])
        if not f <= state < a:
            raise ValueError(f"state {state} listed as final but below f={f}")
        final_pattern[state - f] = pid
    if (final_pattern < 0).any():
        raise ValueError("every final state needs a pattern id")
    stt = stt.astype(STATE_DTYPE)
    stt.setflags(write=False)
    final_pattern.setflags(write=False)
    return Automaton(stt=stt, f=f, m=m, final_pattern=final_pattern, patterns=patterns)


def load_file(path: str | Path, patterns: PatternSet | None = None) -> Automaton:
    return load(Path(path).read_text(), patterns)


def table1_path() -> Path:
    return Path(__file__).with_name("data") / "table1.stt"


def load_table1() -> Automaton:
    """The hand-built 9-state machine for acg, act, cta, tga."""
    return load_file(table1_path(), PatternSet.from_iterable(["acg", "act", "cta", "tga"]))
