from __future__ import annotations

import random

import pytest


def random_text(rng: random.Random, n: int, alphabet: str, periodic: float = 0.5) -> str:
    """A random string, half the time built from a short repeated unit with noise."""
    if n <= 0:
        return ""
    if rng.random() < periodic:
        unit = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 6)))
        return "".join(unit[k % len(unit)] if rng.random() < 0.93 else rng.choice(alphabet)
                       for k in range(n))
    return "".join(rng.choice(alphabet) for _ in range(n))


def random_codes(rng: random.Random, n: int, sigma: int, periodic: float = 0.5) -> list[int]:
    letters = "".join(chr(c) for c in range(1, sigma))
    return [ord(c) for c in random_text(rng, n, letters, periodic)]


def brute_lcp(a: str, b: str) -> int:
    k = 0
    while k < min(len(a), len(b)) and a[k] == b[k]:
        k += 1
    return k


def brute_period(s: str) -> int:
    return next(p for p in range(1, len(s) + 1)
                if all(s[i] == s[i + p] for i in range(len(s) - p)))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance lines, which pytest would otherwise capture."""
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
