from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from dynsa import oracle
from dynsa.parsing import ceil_log2
from dynsa.sa_engine import (DynText, RefineState, UnsupportedOperation, doubling_rounds,
                             naive_suffix_array)
from conftest import random_codes

GOLDEN_TEXT = "bbabaababababaababa"
GOLDEN_SA = [20, 19, 14, 5, 17, 12, 3, 15, 10, 8, 6, 18, 13, 4, 16, 11, 2, 9, 7, 1]


def _codes(word: str) -> list[int]:
    return [ord(c) - 96 for c in word]


def _plain(codes) -> str:
    return "".join(map(chr, codes)) + "\0"


def _inserted(sigma: int, codes) -> DynText:
    d = DynText(sigma)
    for k, c in enumerate(codes, 1):
        d.insert(k, c)
    return d


@pytest.fixture
def golden() -> DynText:
    return _inserted(3, _codes(GOLDEN_TEXT))


def test_golden_text_suffix_array(golden):
    assert [golden.sa(i) for i in range(1, 21)] == GOLDEN_SA


def test_golden_text_first_and_last_ranks(golden):
    assert (golden.sa(1), golden.sa(2), golden.sa(3), golden.sa(20)) == (20, 19, 14, 1)


def test_golden_text_inverse_of_the_first_position(golden):
    assert golden.isa(1) == 20


def test_golden_text_count_of_ab(golden):
    assert golden.count([1, 2]) == 7
    assert golden.count("\x01\x02") == 7


def test_initialize_gives_the_sentinel_alone():
    d = DynText(4)
    assert d.n == 1
    assert d.text() == [0]
    assert d.sa(1) == 1 and d.isa(1) == 1


def test_insert_then_delete_restores_the_text():
    d = _inserted(3, _codes("abbab"))
    before = d.text()
    d.insert(3, 1)
    d.delete(3)
    assert d.text() == before


def test_swap_with_an_empty_block_is_a_no_op():
    d = _inserted(3, _codes("abbab"))
    before = d.text()
    d.swap(2, 2, 5)
    d.swap(1, 4, 4)
    assert d.text() == before


def test_swap_moves_the_middle_block_first():
    d = _inserted(4, _codes("abcab"))
    d.swap(1, 3, 5)
    assert d.text() == _codes("caabb") + [0]


def test_substitute_replaces_one_letter():
    d = _inserted(3, _codes("aaa"))
    d.apply_update("substitute", 2, 2)
    assert d.text() == _codes("aba") + [0]


def test_copy_paste_is_rejected():
    d = DynText(3)
    with pytest.raises(UnsupportedOperation):
        d.apply_update("copy_paste", 1, 1, 1)


def test_argument_errors():
    with pytest.raises(ValueError):
        DynText(1)
    with pytest.raises(ValueError):
        DynText().sa(1)
    d = _inserted(3, _codes("ab"))
    with pytest.raises(IndexError):
        d.sa(4)
    with pytest.raises(IndexError):
        d.isa(0)
    with pytest.raises((IndexError, ValueError)):
        d.insert(5, 1)
    with pytest.raises((IndexError, ValueError)):
        d.insert(1, 3)
    with pytest.raises((IndexError, ValueError)):
        d.delete(3)
    with pytest.raises(IndexError):
        d.swap(2, 1, 3)
    with pytest.raises(ValueError):
        d.count([])
    with pytest.raises(ValueError):
        d.count([0])
    with pytest.raises(ValueError):
        d.apply_update("reverse")


def test_bulk_load_answers_like_single_inserts():
    rnd = random.Random(5)
    codes = random_codes(rnd, 90, 3, periodic=0.5)
    a, b = DynText.from_codes(3, codes), _inserted(3, codes)
    assert a.text() == b.text()
    assert [a.sa(i) for i in range(1, a.n + 1)] == [b.sa(i) for i in range(1, b.n + 1)]


def test_doubling_rounds_reach_the_text_length():
    assert doubling_rounds(1) == 0
    assert doubling_rounds(20) == 1
    for n in (17, 100, 512, 513):
        assert 16 * 2 ** doubling_rounds(n) >= n


def test_unique_context_keeps_the_block():
    d = DynText.from_codes(3, _codes("ab" * 20 + "bb" + "ab" * 20))
    t = _plain(d.text()[:-1])
    i = 1
    st_ = RefineState(16, i, 0, 1, oracle.sa(t)[0])
    assert d.refine_range(st_) == RefineState(32, i, 0, 1, st_.j)


def _refinement_matches_oracle(d: DynText, t: str, i: int) -> None:
    """Walk the doubling loop by hand and compare every state with the oracle."""
    ix = d.index
    lab, rb, re = ix.base_rank16(i)
    state = RefineState(16, i, rb, re, ix.unlabel(lab))
    target = oracle.sa(t)[i - 1]
    for _ in range(4, ceil_log2(len(t))):
        state = d.refine_range(state)
        ell = state.ell
        assert state.rb == oracle.rangebeg(t, ell, target)
        assert state.re == oracle.rangeend(t, ell, target)
        assert state.j in oracle.occ(t, ell, target)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_every_refinement_state_matches_the_oracle(seed):
    rnd = random.Random(seed)
    sigma = rnd.choice([2, 3, 26])
    codes = random_codes(rnd, rnd.randint(17, 160), sigma, periodic=0.5)
    d = DynText.from_codes(sigma, codes)
    t = _plain(codes)
    for i in rnd.sample(range(1, len(t) + 1), 6):
        _refinement_matches_oracle(d, t, i)


def _periodic_step_oracle(t: str, ell: int, x: int) -> tuple:
    """Type, exponent, the three subset sizes and the new block size for ``SA[i] = x``."""
    tau = ell // 3
    o = oracle.run_decomp(t, tau, x)
    p, s, sign = o["p"], o["s"], o["type"]
    same = {}
    for j in oracle.R(t, tau):
        q = oracle.run_decomp(t, tau, j)
        if (q["root"], q["s"], q["type"]) == (o["root"], s, sign):
            same[j] = q["k"]
    k1 = min(same[x], (ell - s) // p)
    k2 = min(same[x], (2 * ell - s) // p)

    def beyond(j: int) -> bool:
        return t[j - 1:] >= t[x - 1:] if sign < 0 else t[j - 1:] <= t[x - 1:]

    low = sum(1 for j, k in same.items()
              if k == k1 and (beyond(j) or oracle.lce(t, j, x) >= ell))
    mid = sum(1 for k in same.values() if k1 < k <= k2)
    high = sum(1 for j, k in same.items()
               if k == k2 and (beyond(j) or oracle.lce(t, j, x) >= 2 * ell))
    return sign, same[x], low, mid, high, len(oracle.occ(t, 2 * ell, x))


@pytest.mark.parametrize("unit,m", [("a", 40), ("a", 130), ("ab", 100), ("abb", 100)])
def test_periodic_steps_record_oracle_values(unit, m):
    codes = _codes((unit * m)[:m])
    t = _plain(codes)
    d = DynText.from_codes(3, codes)
    sa = oracle.sa(t)
    seen = 0
    for i in range(1, len(t) + 1):
        d.trace = []
        assert d.sa(i) == sa[i - 1]
        for rec in d.trace:
            if rec["route"] != "periodic":
                continue
            seen += 1
            got = (rec["type"], rec["exp"], rec["low"], rec["mid"], rec["high"], rec["occ"])
            assert got == _periodic_step_oracle(t, rec["ell"], sa[i - 1])
            assert rec["low"] + rec["mid"] - rec["high"] == len(
                oracle.pos(t, rec["ell"], sa[i - 1], rec["type"]))
    assert seen > 0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_random_edit_scripts_match_the_naive_suffix_array(seed):
    rnd = random.Random(seed)
    sigma = rnd.choice([2, 3, 26])
    d = DynText.from_codes(sigma, random_codes(rnd, rnd.randint(0, 120), sigma, periodic=0.5))
    for _ in range(5):
        n = d.n
        op = rnd.random()
        if op < 0.4 or n == 1:
            d.insert(rnd.randint(1, n), rnd.randrange(1, sigma))
        elif op < 0.7:
            d.delete(rnd.randint(1, n - 1))
        else:
            i, j, k = sorted(rnd.randint(1, n) for _ in range(3))
            d.swap(i, j, k)
        want = naive_suffix_array(d.text())
        assert [d.sa(i) for i in range(1, d.n + 1)] == want


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_sa_and_isa_are_inverse(seed):
    rnd = random.Random(seed)
    sigma = rnd.choice([2, 3, 26])
    d = DynText.from_codes(sigma, random_codes(rnd, rnd.randint(0, 150), sigma, periodic=0.5))
    for i in range(1, d.n + 1):
        assert d.isa(d.sa(i)) == i
        assert d.sa(d.isa(i)) == i


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_count_matches_a_cyclic_scan(seed):
    rnd = random.Random(seed)
    sigma = rnd.choice([2, 3])
    codes = random_codes(rnd, rnd.randint(1, 100), sigma, periodic=0.5)
    d = DynText.from_codes(sigma, codes)
    t = _plain(codes)
    a = rnd.randrange(len(codes))
    pat = codes[a:a + rnd.randint(1, 12)]
    if rnd.random() < 0.3:
        pat = [rnd.randrange(1, sigma) for _ in range(rnd.randint(1, 5))]
    word = "".join(map(chr, pat))
    want = sum(1 for j in range(1, len(t) + 1) if oracle.cyc(t, j, j + len(pat)) == word)
    assert d.count(pat) == want


def test_isa_calls_sa_a_logarithmic_number_of_times():
    rnd = random.Random(11)
    d = DynText.from_codes(3, random_codes(rnd, 300, 3, periodic=0.5))
    calls = []
    real = d.sa

    def counting(i: int) -> int:
        calls.append(i)
        return real(i)

    d.sa = counting
    for j in (1, 77, d.n):
        calls.clear()
        d.isa(j)
        assert len(calls) <= ceil_log2(d.n) + 1


def test_rebuild_happens_after_the_budget_is_spent():
    d = DynText(3)
    for k in range(1, 40):
        d.insert(k, 1 + k % 2)
    assert d.epoch > 0
    assert d.n - 1 <= d.capacity
    assert [d.sa(i) for i in range(1, d.n + 1)] == naive_suffix_array(d.text())
