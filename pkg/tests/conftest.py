import itertools
import random

import pytest

from dnascan import compile_patterns

FIG3 = ["acg", "act", "cta", "tga"]


def all_strings(max_len, alphabet="acgt"):
    for length in range(max_len + 1):
        for combo in itertools.product(alphabet, repeat=length):
            yield "".join(combo).encode()


def random_instance(rng: random.Random, *, max_k=16, m_range=(3, 12), max_n=10_000,
                    alphabet=b"acgtn"):
    """Random pattern set plus a text with some of the patterns planted."""
    m = rng.randint(*m_range)
    k = rng.randint(1, max_k)
    # Small alphabets per instance make overlaps and shared prefixes common.
    base = bytes(rng.sample(b"acgt", rng.randint(1, 4)))
    pats = set()
    for _ in range(k * 4):
        if len(pats) == k:
            break
        pats.add(bytes(rng.choice(base) for _ in range(m)))
    pats = sorted(pats)
    n = rng.randint(0, max_n)
    text = bytearray(rng.choice(alphabet) for _ in range(n))
    for _ in range(rng.randint(0, 20)):
        if n >= m:
            i = rng.randint(0, n - m)
            text[i:i + m] = rng.choice(pats)
    return pats, bytes(text)


@pytest.fixture(scope="session")
def fig3():
    return compile_patterns(FIG3)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict(request):
    """Record one pass/fail line per acceptance criterion."""

    def record(label: str, ok: bool | None, detail: str = "") -> None:
        status = {True: "PASS", False: "FAIL", None: "N/A "}[ok]
        ACCEPTANCE_LINES.append(f"[{status}] {label}" + (f" -- {detail}" if detail else ""))

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
