"""Highly periodic fragments and the parsing-based synchronizing set.

A ``tau``-run is a maximal fragment ``T[p..q]`` of length at least ``tau``
whose shortest period is at most ``tau / 3``.  Runs are found from pairs
of consecutive aligned blocks of length ``b = tau // 3``: every such run
covers a whole pair, and a pair covered by a run has exactly the run's
period as its shortest period, so each pair with a period of at most
``b`` is extended in both directions and kept when long enough.

The synchronizing set takes ``i`` when

1. ``i + tau - 1`` is a phrase boundary of the parsing level ``k`` chosen
   as the largest ``k`` with ``tau >= 3 * alpha_k``, and
   ``T[i..i+2tau)`` does not lie inside a run,
2. a run starts at ``i + 1``, or
3. a run ends at ``i + 2tau - 2``,

restricted to ``i`` in ``[1..n-2tau+1]``.  Membership of ``i`` only
depends on ``T[i..i+2tau)``, which is what incremental maintenance relies
on.

Positions are 1-based throughout.  Periods and extensions are computed
on a flat copy of the text (see :class:`TextView`); phrase boundaries
come from the grammar-compressed copy.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .dstrings import LONG, DynamicStrings, StrHandle
from .parsing import level_params, log_star

#: Pinned bound on ``max_i |S ∩ [i..i+tau)| / (log*(tau * sigma) + 1)``.
#: The largest ratio seen over 1500 random texts (length up to 2048,
#: alphabets of size 2, 3 and 26, log-uniform ``tau``) was 18.2; the
#: acceptance suite fails if a change to the parsing pushes past this.
SPARSITY_CONSTANT = 20


class TauRun(NamedTuple):
    p: int
    q: int
    per: int


# -- string primitives on a flat copy ----------------------------------------

def flat_lce(t: str, i: int, j: int) -> int:
    """Common prefix length of ``t[i:]`` and ``t[j:]`` (0-based)."""
    lim = len(t) - max(i, j)
    if lim <= 0 or t[i] != t[j]:
        return 0
    good, step = 1, 1
    while True:
        nxt = min(good + step, lim)
        if t[i + good:i + nxt] != t[j + good:j + nxt]:
            hi = nxt - 1
            break
        good = nxt
        if good == lim:
            return lim
        step *= 2
    lo = good
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if t[i + lo:i + mid] == t[j + lo:j + mid]:
            lo = mid
        else:
            hi = mid - 1
    return lo


def flat_lce_back(t: str, i: int, j: int) -> int:
    """Common suffix length of ``t[:i]`` and ``t[:j]``."""
    lim = min(i, j)
    k = 0
    step = 1
    while k < lim:
        nxt = min(k + step, lim)
        if t[i - nxt:i - k] != t[j - nxt:j - k]:
            lo, hi = k, nxt - 1
            while lo < hi:
                mid = (lo + hi + 1) // 2
                if t[i - mid:i - k] == t[j - mid:j - k]:
                    lo = mid
                else:
                    hi = mid - 1
            return lo
        k = nxt
        step *= 2
    return k


def flat_period(w: str) -> int | None:
    """Shortest period of ``w`` when it is at most ``len(w) / 2``."""
    m = len(w)
    half = m // 2
    if half == 0:
        return None
    u = w[:half]
    o = w.find(u, 1)
    while o != -1 and o <= half:
        if w[o:] == w[:m - o]:
            return o
        o = w.find(u, o + 1)
    return None


@dataclass
class TextView:
    """A text seen both as a flat string and as a grammar handle.

    ``text`` is the 0-based flat copy.  The grammar side is created on
    demand when phrase boundaries are first requested.
    """

    text: str
    strings: DynamicStrings | None = None
    handle: StrHandle | None = None
    use_grammar: bool = False

    @classmethod
    def of(cls, src, strings: DynamicStrings | None = None, *,
           use_grammar: bool = False) -> "TextView":
        if isinstance(src, TextView):
            return src
        if isinstance(src, StrHandle):
            if strings is None:
                raise ValueError("a handle needs its DynamicStrings instance")
            return cls(strings.expand(src), strings, src, use_grammar)
        return cls(src, strings, None, use_grammar)

    @property
    def n(self) -> int:
        return len(self.text)

    def _grammar(self) -> tuple[DynamicStrings, StrHandle]:
        if self.strings is None:
            self.strings = DynamicStrings(set(self.text))
        if self.handle is None:
            self.handle = self.strings.insert(self.text)
        return self.strings, self.handle

    def period(self, a: int, b: int) -> int | None:
        """Shortest period of ``T[a..b)`` if at most half its length."""
        if self.use_grammar:
            w, h = self._grammar()
            per = w.period(w.substring(h, a - 1, b - 1))
            return None if per == LONG else per
        return flat_period(self.text[a - 1:b - 1])

    def lce(self, i: int, j: int) -> int:
        """Common prefix length of ``T[i..]`` and ``T[j..]``."""
        if self.use_grammar:
            w, h = self._grammar()
            return w.lce(h, i - 1, h, j - 1)
        return flat_lce(self.text, i - 1, j - 1)

    def lce_back(self, i: int, j: int) -> int:
        """Common suffix length of ``T[..i]`` and ``T[..j]``."""
        if self.use_grammar:
            w, h = self._grammar()
            return w.lce_rev(h, i, h, j)
        return flat_lce_back(self.text, i, j)

    def boundaries(self, k: int, x: int, y: int) -> list[int]:
        """Elements of ``B_k`` inside ``[x, y]``."""
        w, h = self._grammar()
        return w._boundaries_between(h.sid, k, x, y)

    @property
    def sigma(self) -> int:
        return self._grammar()[0].sigma


# -- runs ----------------------------------------------------------------------

def runs_near(view: TextView, tau: int, lo: int, hi: int) -> list[TauRun]:
    """Runs covering an aligned block pair that lies inside ``[lo, hi]``."""
    b = tau // 3
    n = view.n
    if b == 0:
        return []
    lo = max(lo, 1)
    hi = min(hi, n)
    t = max(0, -(-(lo - 1) // b))
    found: dict[tuple[int, int], TauRun] = {}
    while (t + 2) * b <= hi:
        a, e = t * b + 1, (t + 2) * b
        t += 1
        per = view.period(a, e + 1)
        if per is None:
            continue
        p = a - view.lce_back(a - 1, a - 1 + per) if a > 1 else a
        q = e + view.lce(e + 1, e + 1 - per) if e < n else e
        if q - p + 1 >= tau and (p, q) not in found:
            found[(p, q)] = TauRun(p, q, per)
    return sorted(found.values())


def tau_runs(src, tau: int, strings: DynamicStrings | None = None, *,
             use_grammar: bool = False) -> list[TauRun]:
    """All ``tau``-runs of a text, sorted by starting position.

    ``src`` is a string, a :class:`TextView`, or a handle of ``strings``.
    """
    if tau < 1:
        raise ValueError("tau must be positive")
    view = TextView.of(src, strings, use_grammar=use_grammar)
    return runs_near(view, tau, 1, view.n)


def boundary_level(tau: int, sigma: int) -> int:
    """The largest ``k`` with ``tau >= 3 * alpha_k``."""
    k = 0
    while 3 * level_params(k + 1, sigma).alpha <= tau:
        k += 1
    return k


def inside_run(runs: list[TauRun], starts: list[int], a: int, b: int) -> bool:
    """Whether ``T[a..b]`` lies inside one of the (sorted) runs."""
    idx = bisect_right(starts, a) - 1
    return idx >= 0 and runs[idx].q >= b


def sync_candidates(view: TextView, tau: int, runs: list[TauRun],
                    lo: int, hi: int) -> list[int]:
    """Members of the synchronizing set inside ``[lo, hi]``.

    ``runs`` must contain every run that can start at ``lo + 1 ..`` or end
    at ``.. hi + 2tau - 2`` together with every run that may contain a
    window ``T[i..i+2tau)`` for ``i`` in the range.
    """
    n = view.n
    lo = max(lo, 1)
    hi = min(hi, n - 2 * tau + 1)
    if lo > hi:
        return []
    out = set()
    starts = [r.p for r in runs]
    k = boundary_level(tau, view.sigma)
    for bnd in view.boundaries(k, lo + tau - 1, hi + tau - 1):
        i = bnd - tau + 1
        if not inside_run(runs, starts, i, i + 2 * tau - 1):
            out.add(i)
    for r in runs:
        for i in (r.p - 1, r.q - 2 * tau + 2):
            if lo <= i <= hi:
                out.add(i)
    return sorted(out)


def sync_set(src, tau: int, strings: DynamicStrings | None = None, *,
             runs: Iterable[TauRun] | None = None) -> list[int]:
    """The synchronizing set of a text for parameter ``tau`` (sorted)."""
    if tau < 1:
        raise ValueError("tau must be positive")
    view = TextView.of(src, strings)
    if 2 * tau > view.n:
        return []
    runs = list(runs) if runs is not None else runs_near(view, tau, 1, view.n)
    return sync_candidates(view, tau, runs, 1, view.n)


def local_sparsity(positions: Iterable[int], tau: int, n: int) -> int:
    """``max_i |S ∩ [i..i+tau)|`` over ``i`` in ``[1..n]``."""
    marks = [0] * (n + tau + 1)
    for s in positions:
        marks[s] += 1
    best = window = 0
    for i in range(1, n + tau + 1):
        window += marks[i]
        if i > tau:
            window -= marks[i - tau]
        best = max(best, window)
    return best


def sparsity_ratio(positions: Iterable[int], tau: int, n: int, sigma: int) -> float:
    """Local sparsity normalised by ``log*(tau * sigma) + 1``."""
    return local_sparsity(positions, tau, n) / (log_star(tau * sigma) + 1)


def sync_positions(src, tau: int, strings: DynamicStrings | None = None) -> list[int]:
    """Alias of :func:`sync_set` returning the sorted position list."""
    return sync_set(src, tau, strings)
