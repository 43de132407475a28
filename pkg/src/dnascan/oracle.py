"""Brute-force reference matcher. No automaton, no cleverness."""

from __future__ import annotations

from typing import Iterable

from .automaton import PatternSet, as_pattern_set
from .scanner import Match


def naive_scan(patterns: PatternSet | Iterable[bytes | str], text: bytes) -> set[Match]:
    pset = as_pattern_set(patterns)
    text = bytes(text)
    m = pset.m
    found = set()
    for i in range(len(text) - m + 1):
        window = text[i : i + m]
        for pid, pat in enumerate(pset.patterns):
            if window == pat:
                found.add(Match(pid, i))
    return found


def count_by_find(patterns: PatternSet | Iterable[bytes | str], text: bytes) -> int:
    """Total occurrences via repeated ``bytes.find``, overlaps included."""
    pset = as_pattern_set(patterns)
    text = bytes(text)
    total = 0
    for pat in pset.patterns:
        i = text.find(pat)
        while i != -1:
            total += 1
            i = text.find(pat, i + 1)
    return total
