"""Acceptance suite: one PASS/FAIL line per primary criterion.

Run with ``pytest tests/test_acceptance.py`` (the lines are repeated in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
Every workload is seeded, so a failure is reproducible from its seed.
"""

from __future__ import annotations

import itertools
import math
import random
import statistics
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from dynsa import oracle  # noqa: E402
from dynsa.dstrings import (LONG, CFrag, DynamicStrings, d_compare, d_insert, d_ipm,  # noqa: E402
                            d_lcp, d_lcs, d_period)
from dynsa.grammar import Grammar  # noqa: E402
from dynsa.sa_engine import DynText  # noqa: E402
from dynsa.syncset import SPARSITY_CONSTANT, sparsity_ratio, sync_set  # noqa: E402
from checks import (dct_violations, geom_mismatches, modq_mismatches,  # noqa: E402
                    parse_violations, random_labels, shortest_period)
from conftest import brute_lcp, random_codes, random_text  # noqa: E402

RESULTS: list[str] = []
pytestmark = pytest.mark.slow

# Regression pins for the complexity smoke test: the measured ratios at
# n = 2^15 versus n = 2^10 were 1.83 (symbols) and 6.0 to 6.5 (query time).
PINNED_SYMBOL_RATIO = 2.0
PINNED_QUERY_RATIO = 8.0


def _report(name: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    RESULTS.append(line)
    print(line)


# -- suffix array ------------------------------------------------------------------------

GOLDEN_TEXT = "bbabaababababaababa"
GOLDEN_SA = [20, 19, 14, 5, 17, 12, 3, 15, 10, 8, 6, 18, 13, 4, 16, 11, 2, 9, 7, 1]


def check_golden() -> tuple[bool, str]:
    t0 = time.perf_counter()
    d = DynText(3)
    for k, c in enumerate(GOLDEN_TEXT, 1):
        d.insert(k, ord(c) - 96)
    got = [d.sa(i) for i in range(1, d.n + 1)]
    secs = time.perf_counter() - t0
    return got == GOLDEN_SA and secs < 1.0, f"sa(1..20) {'matches' if got == GOLDEN_SA else got}, {secs:.3f}s"


E2E_SCRIPTS = 1000
E2E_UPDATES = 8
E2E_MAX_N = 512


def _edit_script(rng: random.Random) -> tuple[int, list[int], list[tuple]]:
    """Initial codes and a list of updates that keep ``|T| <= 512`` with the sentinel."""
    sigma = rng.choice([2, 3, 26])
    codes = random_codes(rng, rng.randint(0, E2E_MAX_N - 1), sigma, periodic=0.5)
    n = len(codes) + 1
    ops = []
    for _ in range(E2E_UPDATES):
        r = rng.random()
        if (r < 0.4 or n == 1) and n < E2E_MAX_N:
            ops.append(("insert", rng.randint(1, n), rng.randrange(1, sigma)))
            n += 1
        elif r < 0.7 and n > 1:
            ops.append(("delete", rng.randint(1, n - 1)))
            n -= 1
        else:
            ops.append(("swap",) + tuple(sorted(rng.randint(1, n) for _ in range(3))))
    return sigma, codes, ops


def check_end_to_end(scripts: int = E2E_SCRIPTS) -> tuple[bool, str]:
    t0 = time.perf_counter()
    rng = random.Random(1000)
    bad, checks = [], 0
    for k in range(scripts):
        sigma, codes, ops = _edit_script(rng)
        d = DynText.from_codes(sigma, codes)
        for op in ops:
            d.apply_update(*op)
            plain = "".join(map(chr, d.text()))
            n = d.n
            checks += 1
            if ([d.sa(i) for i in range(1, n + 1)] != oracle.sa(plain)
                    or [d.isa(j) for j in range(1, n + 1)] != oracle.isa(plain)):
                bad.append(k)
                break
    secs = time.perf_counter() - t0
    ok = not bad and secs < 600
    return ok, (f"{scripts} scripts, {checks} full SA+ISA checks, {len(bad)} mismatching "
                f"scripts {bad[:5]}, {secs:.0f}s")


# -- dynamic strings ---------------------------------------------------------------------

def _denote(s: str, f: CFrag) -> str:
    return "".join(s[i % len(s)] for i in range(f.start, f.end))


def _dstrings_case(rng: random.Random, w: DynamicStrings, alphabet: str, kind: int) -> bool:
    n = rng.randint(1, 2048)
    if kind == 0:
        x = random_text(rng, n, alphabet)
        y = x[:rng.randint(0, n)] + random_text(rng, rng.randint(1, 64), alphabet)
        return d_lcp(w, d_insert(w, x), d_insert(w, y)) == brute_lcp(x, y)
    if kind == 1:
        x = random_text(rng, n, alphabet)
        y = random_text(rng, rng.randint(1, 64), alphabet) + x[rng.randint(0, n):]
        return d_lcs(w, d_insert(w, x), d_insert(w, y)) == brute_lcp(x[::-1], y[::-1])
    if kind == 2:
        p = rng.randint(1, n // 2 + 1)
        pat = random_text(rng, p, alphabet, periodic=0.8)
        if rng.random() < 0.5:
            txt = (pat * 3)[rng.randint(0, p):][:rng.randint(p, 2 * p)]
        else:
            txt = random_text(rng, rng.randint(p, 2 * p), alphabet, periodic=0.8)
        if len(txt) < p:
            txt = pat
        occ = [o for o in range(len(txt) - p + 1) if txt.startswith(pat, o)]
        first, diff, count = d_ipm(w, d_insert(w, pat), d_insert(w, txt))
        return [first + j * diff for j in range(count)] == occ
    if kind == 3:
        txt = random_text(rng, n, alphabet, periodic=0.8)
        per = shortest_period(txt)
        return d_period(w, d_insert(w, txt)) == (per if 2 * per <= n else LONG)
    frags = []
    base = random_text(rng, rng.randint(1, 64), alphabet, periodic=0.7)
    for _ in range(2):
        s = base if rng.random() < 0.5 else random_text(rng, rng.randint(1, 64), alphabet, 0.7)
        a = rng.randint(-64, 64)
        f = CFrag(d_insert(w, s), a, a + rng.randint(0, 2048), rng.random() < 0.3)
        key = _denote(s, f)
        if f.padded:
            key = (key + w.max_char * 2100)[:2100]
        frags.append((f, key))
    (f1, k1), (f2, k2) = frags
    return d_compare(w, f1, f2) == (k1 > k2) - (k1 < k2)


def check_dstrings(cases: int = 10_000) -> tuple[bool, str]:
    rng = random.Random(2048)
    pools = {a: DynamicStrings(a) for a in ("ab", "abc", "abcdefghijklmnopqrstuvwxyz")}
    bad = 0
    t0 = time.perf_counter()
    for k in range(cases):
        alphabet = rng.choice(list(pools))
        bad += not _dstrings_case(rng, pools[alphabet], alphabet, k % 5)
    secs = time.perf_counter() - t0
    return bad == 0, f"{cases} lcp/lcs/ipm/period/compare cases, {bad} mismatches, {secs:.0f}s"


def check_necklace(max_len: int = 12) -> tuple[bool, str]:
    w = DynamicStrings("ab")
    bad = words = 0
    for m in range(1, max_len + 1):
        seen: dict[str, str] = {}
        for tup in itertools.product("ab", repeat=m):
            t = "".join(tup)
            words += 1
            rot = min(t[s:] + t[:s] for s in range(m))
            image = w.canonical_rotation(d_insert(w, t))
            if seen.setdefault(rot, image) != image:
                bad += 1
    return bad == 0, f"{words} binary words of length <= {max_len}, {bad} inconsistent images"


# -- synchronizing sets and parsing --------------------------------------------------------

def check_sync(cases: int = 500) -> tuple[bool, str]:
    rng = random.Random(22)
    pools = {a: DynamicStrings(a) for a in ("ab", "abc", "abcdefghijklmnopqrstuvwxyz")}
    bad, worst = 0, 0.0
    for _ in range(cases):
        alphabet = rng.choice(list(pools))
        n = rng.randint(2, 2048)
        text = random_text(rng, n, alphabet)
        tau = max(1, int(2 ** rng.uniform(0, math.log2(max(1, n // 2)))))
        w = pools[alphabet]
        positions = sync_set(text, tau, w)
        ratio = sparsity_ratio(positions, tau, n, w.sigma)
        worst = max(worst, ratio)
        bad += bool(oracle.sync_check(text, positions, tau)) or ratio > SPARSITY_CONSTANT
    return bad == 0, (f"{cases} (T, tau) pairs, {bad} failing, worst sparsity ratio "
                      f"{worst:.1f} <= pinned {SPARSITY_CONSTANT}")


def check_parsing(cases: int = 500) -> tuple[bool, str]:
    rng = random.Random(4096)
    bad = 0
    for _ in range(cases):
        alphabet = rng.choice(["ab", "abc", "abcdefghijklmnopqrstuvwxyz"])
        text = random_text(rng, rng.randint(1, 4096), alphabet, periodic=0.5)
        bad += bool(parse_violations(Grammar(), text, len(alphabet)))
    return bad == 0, f"{cases} texts up to 4096, {bad} with violations"


def check_dct(cases: int = 10_000) -> tuple[bool, str]:
    rng = random.Random(1000)
    bad = 0
    for _ in range(cases):
        h = rng.randint(1, 5)
        labels = random_labels(rng, rng.randint(1, 1000), h)
        bad += bool(dct_violations(h, labels, rng, samples=16))
    return bad == 0, f"{cases} label sequences, locality at 16 sampled positions each, {bad} failing"


# -- range structures ----------------------------------------------------------------------

def check_substructures() -> tuple[bool, str]:
    rng = random.Random(2000)
    bad = runs = 0
    for target in (10, 100, 500, 2000, 2000):
        for fn in (geom_mismatches, modq_mismatches):
            bad += fn(rng, target, queries=300)
            runs += 1
    return bad == 0, f"{runs} randomized sets up to 2000 elements, {bad} wrong answers"


# -- complexity smoke ----------------------------------------------------------------------

def _smoke_medians(n: int, updates: int = 40, queries: int = 150) -> tuple[float, float]:
    rng = random.Random(n)
    syms, times = [], []
    for periodic in (0.0, 1.0):
        d = DynText.from_codes(3, random_codes(rng, n - 1, 3, periodic=periodic))
        for u in range(updates):
            before = len(d.index.W.g)
            if u % 2:
                d.insert(rng.randint(1, d.n), rng.randrange(1, 3))
            else:
                d.delete(rng.randint(1, d.n - 1))
            syms.append(len(d.index.W.g) - before)
        for i in rng.sample(range(1, d.n + 1), queries):
            # best of three runs per query, dropping the memoized answer each time
            best = None
            for _ in range(3):
                d._memo.pop(i, None)
                t0 = time.perf_counter_ns()
                d.sa(i)
                dt = time.perf_counter_ns() - t0
                best = dt if best is None else min(best, dt)
            times.append(best)
    return statistics.median(syms), statistics.median(times)


def check_complexity() -> tuple[bool, str]:
    s_small, q_small = _smoke_medians(2 ** 10)
    s_big, q_big = _smoke_medians(2 ** 15)
    rs, rq = s_big / max(1, s_small), q_big / q_small
    ok = rs <= min(8, PINNED_SYMBOL_RATIO) and rq <= min(8, PINNED_QUERY_RATIO)
    return ok, (f"symbols/update {s_small:g} -> {s_big:g} (x{rs:.2f}, pin {PINNED_SYMBOL_RATIO}), "
                f"query {q_small / 1e3:.0f}us -> {q_big / 1e3:.0f}us "
                f"(x{rq:.2f}, pin {PINNED_QUERY_RATIO})")


CRITERIA = [
    ("golden suffix array", check_golden),
    ("end-to-end oracle equivalence", check_end_to_end),
    ("dynamic-strings suite", check_dstrings),
    ("synchronizing-set suite", check_sync),
    ("parsing invariants", check_parsing),
    ("coin-tossing properties", check_dct),
    ("sub-structure oracles", check_substructures),
    ("complexity smoke", check_complexity),
    ("necklace consistency", check_necklace),
]


@pytest.mark.parametrize("name,check", CRITERIA, ids=[c[0].replace(" ", "_") for c in CRITERIA])
def test_primary_criterion(name, check):
    ok, detail = check()
    _report(name, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for name, check in CRITERIA:
        ok, detail = check()
        _report(name, ok, detail)
        failed += not ok
    raise SystemExit(1 if failed else 0)
