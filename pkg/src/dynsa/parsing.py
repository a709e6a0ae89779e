"""Deterministic coin tossing and balanced signature parsing.

Level ``k`` of the parsing of a string is a sequence ``T_k`` of grammar
symbols whose expansions concatenate to the string.  ``T_0`` holds the
letters.  Odd levels apply restricted run parsing (runs of an equal
active symbol collapse into one power), even levels apply restricted
signature parsing (block ends are chosen by the coin-tossing bit string
computed over the signatures of active symbols, inactive symbols stand
alone).  Every block, including length-1 blocks, becomes a new symbol of
level ``k``.

The coin-tossing bits are produced in two layers.  An inner marker
reduces labels with the classic lowest-differing-bit rule until at most
six colours remain, recolours down to three colours, and marks strict
local maxima.  A wrapper then fixes the bits at both ends of every
maximal active fragment, which gives the three contractual properties:
both ends are 1, there is no proper ``11`` and no ``000000``, and each bit
depends only on labels ``(i-h-7 .. i+4]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .grammar import Grammar, active_length

BOTTOM = None


def tower(h: int) -> int:
    """``2^2^...^2`` with ``h`` twos (``tower(0) == 1``).  Only small h."""
    if h > 5:
        raise ValueError("tower(h) is only materialised for h <= 5")
    v = 1
    for _ in range(h):
        v = 1 << v
    return v


def ceil_log2(x: int) -> int:
    return (x - 1).bit_length()


def log_star(x: int) -> int:
    """Smallest ``h`` with ``tower(h) >= x``."""
    h = 0
    while x > 1:
        x = ceil_log2(x)
        h += 1
    return h


@lru_cache(maxsize=None)
def dct_rounds(h: int) -> int:
    """Number of label-reduction rounds used for labels below ``tower(h)``.

    The count depends on ``h`` only, so the marker is a fixed function of
    its input window.  Beyond ``h = 5`` every extra tower level costs one
    extra round.
    """
    if h > 5:
        return dct_rounds(5) + (h - 5)
    bound = tower(h)
    rounds = 0
    while bound > 6:
        bound = 2 * ceil_log2(bound)
        rounds += 1
    return rounds


def _reduce_labels(labels: list[int], rounds: int) -> list[int]:
    for _ in range(rounds):
        prev = labels[0]
        new = [prev & 1]
        for cur in labels[1:]:
            diff = cur ^ prev
            idx = (diff & -diff).bit_length() - 1
            new.append(2 * idx + ((cur >> idx) & 1))
            prev = cur
        labels = new
    return labels


def _three_colour(colours: list[int]) -> list[int]:
    m = len(colours)
    for c in (5, 4, 3):
        new = colours[:]
        for j, col in enumerate(colours):
            if col == c:
                used = set()
                if j > 0:
                    used.add(colours[j - 1])
                if j + 1 < m:
                    used.add(colours[j + 1])
                new[j] = min({0, 1, 2} - used)
        colours = new
    return colours


def fragment_marks(h: int, labels: Sequence[int]) -> list[int]:
    """Inner marker bits for one maximal active fragment.

    Returns a list ``F`` aligned with ``labels`` (no ``11`` and no ``0000``
    inside).  Bit ``j`` depends on labels ``j-rounds-4 .. j+4``.
    """
    if not labels:
        return []
    colours = _three_colour(_reduce_labels(list(labels), dct_rounds(h)))
    m = len(colours)
    out = []
    for j in range(m):
        left = colours[j - 1] if j > 0 else -1
        right = colours[j + 1] if j + 1 < m else -1
        c = colours[j]
        out.append(1 if c > left and c > right else 0)
    return out


def _fragment_bits(h: int, labels: Sequence[int]) -> list[int]:
    """Wrapper bits ``G[1..m]`` (as a 0-based list) for one fragment."""
    m = len(labels)
    inner = fragment_marks(h, labels)
    bits = inner[:]
    if m >= 2:
        bits[0] = 0
        bits[m - 2] = 0
    bits[m - 1] = 1
    return bits


def dct_bits(h: int, labels: Sequence[int]) -> list[int]:
    """The bit string ``G[0..n]`` for a fully active label sequence."""
    labels = list(labels)
    for a, b in zip(labels, labels[1:]):
        if a == b:
            raise ValueError("adjacent labels must differ")
    if any((not isinstance(x, int)) or x < 0 for x in labels):
        raise ValueError("labels must be nonnegative integers")
    if not labels:
        return [1]
    return [1] + _fragment_bits(h, labels)


def g_window(h: int, window: Sequence[int | None]) -> int:
    """Evaluate the bit for the centre of a window ``T(i-h-7 .. i+4]``.

    ``None`` marks an inactive position.  This is the per-window form of
    :func:`dct_bits`; tests compare the two.
    """
    size = h + 11
    if len(window) != size:
        raise ValueError(f"window must have {size} entries")
    c = h + 6  # 0-based index of position i
    if window[c] is None:
        return 1
    lo = c
    while lo > 0 and window[lo - 1] is not None:
        lo -= 1
    hi = c
    while hi + 1 < size and window[hi + 1] is not None:
        hi += 1
    ell, r = lo, hi + 1  # the fragment is window(ell..r] in 1-based terms
    if r == c + 1:
        return 1
    if ell == c and r > c + 1:
        return 0
    if r == c + 2:
        return 0
    return fragment_marks(h, window[lo:hi + 1])[c - lo]


def signature_ends(h: int, sigs: Sequence[int | None]) -> list[int]:
    """Bits ``G[1..n]`` (0-based list) for a sequence with inactive entries."""
    n = len(sigs)
    out = [1] * n
    j = 0
    while j < n:
        if sigs[j] is None:
            j += 1
            continue
        k = j
        while k < n and sigs[k] is not None:
            k += 1
        out[j:k] = _fragment_bits(h, sigs[j:k])
        j = k
    return out


@dataclass(frozen=True)
class LevelParams:
    k: int
    d: int
    h: int
    alpha: int
    beta: int


@lru_cache(maxsize=None)
def _h(k: int, sigma: int) -> int:
    d = active_length(k)
    bound = pow(sigma, d) * pow(k + 1, d - 1)
    return log_star(bound)


@lru_cache(maxsize=None)
def level_params(k: int, sigma: int = 2) -> LevelParams:
    """``d_k``, ``h_k`` and the context radii ``alpha_k``, ``beta_k``."""
    if k < 0:
        raise ValueError("level must be nonnegative")
    if sigma < 1:
        raise ValueError("alphabet size must be positive")
    if k == 0:
        return LevelParams(0, 1, _h(0, sigma), 0, 0)
    prev = level_params(k - 1, sigma)
    if k % 2 == 1:
        alpha = prev.alpha + prev.d
        beta = prev.beta + prev.d
    else:
        alpha = prev.alpha + (prev.h + 7) * prev.d
        beta = prev.beta + 4 * prev.d
    return LevelParams(k, active_length(k), _h(k, sigma), alpha, beta)


def is_active(g: Grammar, sid: int, k: int) -> bool:
    return g.level[sid] == k and g.length[sid] <= active_length(k)


def run_ends(g: Grammar, k: int, prev: Sequence[int]) -> list[int]:
    """Block-end bits for restricted run parsing of ``T_{k-1}`` (k odd)."""
    level, length = g.level, g.length
    cap = active_length(k - 1)
    n = len(prev)
    out = [1] * n
    for j in range(n - 1):
        x = prev[j]
        if x == prev[j + 1] and level[x] == k - 1 and length[x] <= cap:
            out[j] = 0
    return out


def sig_view(g: Grammar, k: int, seq: Sequence[int]) -> list[int | None]:
    """Level-``k`` signatures of ``seq`` with ``None`` for inactive symbols."""
    level, length, sig = g.level, g.length, g.sig
    cap = active_length(k)
    return [sig[x] if level[x] == k and length[x] <= cap else None for x in seq]


def block_ends(g: Grammar, k: int, seq: Sequence[int], sigma: int) -> list[int]:
    """Block-end bits for turning ``T_{k-1}`` into ``T_k``."""
    if k % 2 == 1:
        return run_ends(g, k, seq)
    h = level_params(k - 1, sigma).h
    return signature_ends(h, sig_view(g, k - 1, seq))


def collapse(g: Grammar, seq: Sequence[int], ends: Sequence[int]) -> list[int]:
    out = []
    start = 0
    for j, e in enumerate(ends):
        if e:
            out.append(g.block(seq[start:j + 1]))
            start = j + 1
    if start != len(seq):
        raise AssertionError("the last position must end a block")
    return out


def parse_step(g: Grammar, k: int, prev: Sequence[int], sigma: int = 2) -> list[int]:
    """Derive ``T_k`` from ``T_{k-1}``."""
    if k < 1:
        raise ValueError("parse_step needs k >= 1")
    return collapse(g, prev, block_ends(g, k, prev, sigma))


def parse_levels(g: Grammar, text: Sequence[int], sigma: int = 2) -> list[list[int]]:
    """All levels ``T_0, T_1, ..., T_K`` up to the first single-symbol one."""
    if not text:
        raise ValueError("cannot parse an empty string")
    cur = [g.letter(a) for a in text]
    levels = [cur]
    k = 0
    while len(cur) > 1:
        k += 1
        cur = parse_step(g, k, cur, sigma)
        levels.append(cur)
    return levels


def boundaries(g: Grammar, level_seq: Sequence[int]) -> list[int]:
    """Phrase boundaries ``B_k`` induced by one parsing level."""
    out = [0]
    acc = 0
    length = g.length
    for x in level_seq:
        acc += length[x]
        out.append(acc)
    return out
