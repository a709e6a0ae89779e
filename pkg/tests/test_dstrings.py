from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from dynsa.dstrings import (LONG, CFrag, DynamicStrings, d_access, d_canshift, d_compare,
                            d_concat, d_insert, d_ipm, d_lcp, d_lcs, d_period, d_split)
from conftest import brute_lcp, brute_period, random_text


@pytest.fixture
def w() -> DynamicStrings:
    return DynamicStrings("abcxyz")


def test_access_reads_one_character(w):
    assert d_access(w, d_insert(w, "abc"), 2) == "b"


def test_concat_of_two_copies(w):
    h = d_insert(w, "ab")
    assert w.expand(d_concat(w, h, h)) == "abab"


def test_split_returns_handles_equal_to_fresh_inserts(w):
    left, right = d_split(w, d_insert(w, "abab"), 2)
    assert left == right == d_insert(w, "ab")


def test_out_of_range_positions_are_rejected(w):
    h = d_insert(w, "abc")
    with pytest.raises(IndexError):
        d_access(w, h, 4)
    with pytest.raises(IndexError):
        d_split(w, h, 3)
    with pytest.raises(ValueError):
        d_insert(w, "")


def test_lcp_and_lcs_small_cases(w):
    assert d_lcp(w, d_insert(w, "abab"), d_insert(w, "abba")) == 2
    h = d_insert(w, "abcabc")
    assert d_lcp(w, h, h) == 6
    assert d_lcs(w, d_insert(w, "xabc"), d_insert(w, "yabc")) == 3


def test_compare_prefix_padding_and_rotation(w):
    ab, ba = d_insert(w, "ab"), d_insert(w, "ba")
    assert d_compare(w, CFrag(ab, 0, 2), CFrag(ab, 0, 4)) == -1
    assert d_compare(w, CFrag(ab, 0, 2, padded=True), CFrag(ab, 0, 2)) == 1
    assert d_compare(w, CFrag(ba, 1, 3), CFrag(ab, 0, 2)) == 0


def test_internal_pattern_matching_small_cases(w):
    assert d_ipm(w, d_insert(w, "aba"), d_insert(w, "ababa")) == (0, 2, 2)
    assert d_ipm(w, d_insert(w, "ab"), d_insert(w, "ba"))[2] == 0
    assert d_ipm(w, d_insert(w, "aa"), d_insert(w, "aaa")) == (0, 1, 2)
    with pytest.raises(ValueError):
        d_ipm(w, d_insert(w, "ab"), d_insert(w, "ababa"))


def test_period_small_cases(w):
    assert d_period(w, d_insert(w, "abab")) == 2
    assert d_period(w, d_insert(w, "abc")) == LONG
    assert d_period(w, d_insert(w, "aaaa")) == 1


def test_canonical_shift_of_a_unary_and_a_two_letter_word(w):
    s = d_canshift(w, d_insert(w, "aa"))
    assert ("aa"[s:] + "aa"[:s]) == "aa"
    assert w.canonical_rotation(d_insert(w, "ab")) == w.canonical_rotation(d_insert(w, "ba"))


def test_equal_strings_get_equal_handles_regardless_of_history():
    w = DynamicStrings("ab")
    first = d_insert(w, "abbaab" * 7)
    for s in ("a", "bab", "ab" * 40, "b" * 33):
        d_insert(w, s)
    assert d_insert(w, "abbaab" * 7) == first
    assert d_concat(w, d_insert(w, "abbaab" * 3), d_insert(w, "abbaab" * 4)) == first


case_seeds = st.tuples(st.sampled_from(["ab", "abc", "abcdefghijklmnopqrstuvwxyz"]),
                       st.integers(0, 2 ** 32))


@settings(max_examples=120, deadline=None)
@given(case_seeds)
def test_lcp_and_lcs_match_brute_force(case):
    alphabet, seed = case
    rnd = random.Random(seed)
    w = DynamicStrings(alphabet)
    x = random_text(rnd, rnd.randint(1, 300), alphabet)
    y = x[:rnd.randint(0, len(x))] + random_text(rnd, rnd.randint(1, 40), alphabet)
    hx, hy = d_insert(w, x), d_insert(w, y)
    assert d_lcp(w, hx, hy) == brute_lcp(x, y)
    assert d_lcs(w, hx, hy) == brute_lcp(x[::-1], y[::-1])


@settings(max_examples=120, deadline=None)
@given(case_seeds)
def test_ipm_and_period_match_brute_force(case):
    alphabet, seed = case
    rnd = random.Random(seed)
    w = DynamicStrings(alphabet)
    p = rnd.randint(1, 60)
    pat = random_text(rnd, p, alphabet, periodic=0.8)
    if rnd.random() < 0.5:
        txt = (pat * 3)[rnd.randint(0, p):][:rnd.randint(p, 2 * p)]
    else:
        txt = random_text(rnd, rnd.randint(p, 2 * p), alphabet, periodic=0.8)
    if len(txt) >= p:
        occ = [o for o in range(len(txt) - p + 1) if txt[o:o + p] == pat]
        first, diff, count = d_ipm(w, d_insert(w, pat), d_insert(w, txt))
        assert [first + j * diff for j in range(count)] == occ
    per = brute_period(txt)
    assert d_period(w, d_insert(w, txt)) == (per if 2 * per <= len(txt) else LONG)


def _denote(s: str, f: CFrag) -> tuple[str, bool]:
    return "".join(s[i % len(s)] for i in range(f.start, f.end)), f.padded


def _key(text: str, padded: bool, top: str) -> str:
    # a padded fragment is infinite; any prefix longer than every finite
    # fragment decides its order, and two equal infinite strings get equal keys
    return (text + top * 64)[:64] if padded else text


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_compare_is_consistent_with_expanded_order(seed):
    rnd = random.Random(seed)
    w = DynamicStrings("abc")
    pool = []
    for _ in range(8):
        s = random_text(rnd, rnd.randint(1, 12), "abc", periodic=0.7)
        a = rnd.randint(0, 20)
        f = CFrag(d_insert(w, s), a, a + rnd.randint(0, 30), rnd.random() < 0.3)
        pool.append((f, _key(*_denote(s, f), w.max_char)))
    for (f1, k1), (f2, k2) in itertools.product(pool, repeat=2):
        assert d_compare(w, f1, f2) == (k1 > k2) - (k1 < k2)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_canonical_rotation_is_the_same_for_every_rotation(seed):
    rnd = random.Random(seed)
    w = DynamicStrings("abc")
    t = random_text(rnd, rnd.randint(1, 64), rnd.choice(["ab", "abc"]), periodic=0.3)
    images = {w.canonical_rotation(d_insert(w, t[s:] + t[:s])) for s in range(len(t))}
    assert len(images) == 1
    assert images.pop() in {t[s:] + t[:s] for s in range(len(t))}


def test_canonical_rotation_is_exhaustively_consistent_for_short_ternary_words():
    w = DynamicStrings("abc")
    for n in range(1, 6):
        for tup in itertools.product("abc", repeat=n):
            t = "".join(tup)
            images = {w.canonical_rotation(d_insert(w, t[s:] + t[:s])) for s in range(n)}
            assert len(images) == 1, t
