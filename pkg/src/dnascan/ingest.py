"""Sequence loading and pattern-file parsing.

Pattern files use a tiny alternation-only grammar::

    expr := item+
    item := base | '(' base ('|' base)+ ')'
    base := a | c | g | t        (case-insensitive)

Each item contributes exactly one character, so every expansion of an
expression has the same length.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

from .automaton import ALPHABET, PatternSet, normalize
from .errors import EmptySequence, ParseError, UnequalLength

FORMATS = ("fasta", "raw")
_HEADER = re.compile(rb"^>[^\n]*(?:\n|$)", re.MULTILINE)
_RECORD_SEPARATOR = b"n"
_BASES = tuple(chr(b) for b in ALPHABET)


@dataclass(frozen=True)
class Sequence:
    data: bytes
    source: str
    format: str

    @property
    def n(self) -> int:
        return len(self.data)


def _strip_breaks(data: bytes) -> bytes:
    return data.translate(None, b"\r\n")


def parse_sequence(data: bytes, fmt: str = "fasta", *, record_separator: bool = False) -> bytes:
    """Normalize raw file contents to a contiguous lowercase byte string.

    With ``record_separator`` FASTA records are joined by a single ``n``
    so that no match can span two records.
    """
    if fmt == "raw":
        return normalize(_strip_breaks(data))
    if fmt != "fasta":
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    records = [_strip_breaks(r) for r in _HEADER.split(data)]
    joiner = _RECORD_SEPARATOR if record_separator else b""
    return normalize(joiner.join(r for r in records if r))


def load_sequence(
    path: str | Path, fmt: str = "fasta", *, record_separator: bool = False
) -> Sequence:
    path = Path(path)
    data = parse_sequence(path.read_bytes(), fmt, record_separator=record_separator)
    if not data:
        raise EmptySequence(f"{path}: no sequence bytes")
    return Sequence(data, str(path), fmt)


Token = Union[int, frozenset]


@dataclass(frozen=True)
class PatternExpr:
    """Tokens are either a nucleotide byte or a frozenset of 2-4 of them."""

    tokens: tuple[Token, ...]

    @property
    def m(self) -> int:
        return len(self.tokens)

    def expand(self) -> list[bytes]:
        choices = [
            sorted(tok) if isinstance(tok, frozenset) else [tok] for tok in self.tokens
        ]
        return [bytes(combo) for combo in itertools.product(*choices)]

    def matches(self, candidate: bytes) -> bool:
        if len(candidate) != self.m:
            return False
        return all(
            (c in tok) if isinstance(tok, frozenset) else c == tok
            for c, tok in zip(candidate, self.tokens)
        )


def _base(line: str, pos: int, lineno: int) -> int:
    if pos >= len(line):
        raise ParseError("unexpected end of expression", lineno, pos + 1)
    ch = line[pos].lower()
    if ch not in _BASES:
        raise ParseError(f"expected a nucleotide, found {line[pos]!r}", lineno, pos + 1)
    return ord(ch)


def parse_expression(line: str, lineno: int = 1) -> PatternExpr:
    """Parse one expression; surrounding whitespace is ignored but still
    counted in reported columns."""
    tokens: list[Token] = []
    pos = len(line) - len(line.lstrip())
    line = line.rstrip()
    while pos < len(line):
        if line[pos] != "(":
            tokens.append(_base(line, pos, lineno))
            pos += 1
            continue
        group_col = pos + 1
        members = [_base(line, pos + 1, lineno)]
        pos += 2
        while pos < len(line) and line[pos] == "|":
            members.append(_base(line, pos + 1, lineno))
            pos += 2
        if pos >= len(line) or line[pos] != ")":
            found = repr(line[pos]) if pos < len(line) else "end of line"
            raise ParseError(f"expected '|' or ')', found {found}", lineno, pos + 1)
        if len(members) < 2:
            raise ParseError("group needs at least two alternatives", lineno, group_col)
        if len(set(members)) != len(members):
            raise ParseError("group repeats a nucleotide", lineno, group_col)
        tokens.append(frozenset(members))
        pos += 1
    if not tokens:
        raise ParseError("empty expression", lineno, pos + 1)
    return PatternExpr(tuple(tokens))


def parse_patterns(text: str) -> list[PatternExpr]:
    exprs: list[PatternExpr] = []
    first_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        expr = parse_expression(line, lineno)
        if exprs and expr.m != exprs[0].m:
            raise UnequalLength(
                f"line {lineno}: expression has {expr.m} positions, "
                f"line {first_line} has {exprs[0].m}"
            )
        if not exprs:
            first_line = lineno
        exprs.append(expr)
    return exprs


def parse_pattern_file(path: str | Path) -> list[PatternExpr]:
    return parse_patterns(Path(path).read_text(encoding="utf-8"))


def expand_alternations(exprs: Iterable[PatternExpr]) -> PatternSet:
    """Union of all expansions, in first-seen order, duplicates dropped."""
    seen: dict[bytes, None] = {}
    for expr in exprs:
        for literal in expr.expand():
            seen.setdefault(literal, None)
    return PatternSet.from_iterable(seen)


def regex_dna_path() -> Path:
    return Path(__file__).with_name("data") / "regex_dna.txt"


def load_regex_dna() -> PatternSet:
    return expand_alternations(parse_pattern_file(regex_dna_path()))
