"""Suffix-array queries over a dynamic text.

:class:`DynText` keeps a :class:`~dynsa.text_index.TextIndex` and answers
``sa(i)`` by prefix doubling.  The state after each round is a
:class:`RefineState` ``(ell, i, rb, re, j)``: ``rb`` and ``re`` bound the
block of suffixes whose length-``ell`` cyclic context equals that of
``SA[i]``, and ``j`` is any position with that context.  The first state
comes from the rank structure over length-16 contexts, and once ``ell``
reaches ``n`` the block is a single suffix, so ``j = SA[i]``.

One round from ``ell`` to ``2 ell`` takes one of two routes.

*Nonperiodic* (``j`` not in ``R``): the first synchronizing position
``s`` after ``j`` lies within ``tau``, so every occurrence of the context
is found through a point of the string-string structure whose reversed
left context starts with ``T[j..s)``.  Counting and selecting by right
context gives the new block and a new witness.

*Periodic* (``j`` in ``R``): every occurrence shares root, head and
period with ``j``.  Within the block the occurrences of type ``-1``
come first, ordered by growing exponent, and those of type ``+1`` come
last, ordered by shrinking exponent.  The round finds the type and the
exponent of ``SA[i]`` with the per-root interval sets, then a witness
for ``2 ell`` with the per-root point sets, and finally the shift of the
new block from the sizes of three subsets of occurrences (the ones
with the lowest exponent, with intermediate exponents, and with the
exponent of the witness).  Type ``+1`` runs the same steps with the
order inside the block read from its right end.
"""

from __future__ import annotations

from dataclasses import dataclass

from .parsing import ceil_log2
from .text_index import TextIndex, RunDecomposition, cyclic


class UnsupportedOperation(ValueError):
    """Raised for edits the structure deliberately does not offer."""


@dataclass(frozen=True)
class RefineState:
    """Block ``(rb, re]`` of suffixes sharing ``ell`` characters with ``SA[i]``."""

    ell: int
    i: int
    rb: int
    re: int
    j: int

    def check(self) -> None:
        if not self.rb < self.i <= self.re:
            raise AssertionError(f"rank {self.i} outside block ({self.rb}, {self.re}]")


class DynText:
    """A text ``T`` over ``[1..sigma)`` followed by the sentinel, with SA queries.

    The structure is rebuilt from scratch after a budget of updates that
    is proportional to the text length, which keeps the capacity ``N``
    (and thereby the set of doubling levels) within a constant factor
    of ``|T|``.
    """

    def __init__(self, sigma: int | None = None) -> None:
        self.index: TextIndex | None = None
        self.sigma = 0
        self.capacity = 0
        self.budget = 0
        self.epoch = 0
        self.version = 0
        self._memo: dict[int, int] = {}
        self.trace: list[dict] | None = None
        if sigma is not None:
            self.initialize(sigma)

    # -- updates --------------------------------------------------------------------

    def _ix(self) -> TextIndex:
        if self.index is None:
            raise ValueError("the text is not initialized; call initialize(sigma) first")
        return self.index

    def initialize(self, sigma: int) -> None:
        """Reset to ``T = $`` over an alphabet of size ``sigma``."""
        if sigma < 2:
            raise ValueError("sigma must be at least 2")
        self.sigma = sigma
        self.capacity = sigma
        self.budget = 1
        self.index = TextIndex(sigma, self.capacity)
        self._touch()

    @classmethod
    def from_codes(cls, sigma: int, codes) -> DynText:
        """Bulk-load ``T = codes + $`` in one build.

        The result answers every query exactly as if the codes had been
        inserted one at a time, with the update budget of a fresh rebuild.
        """
        d = cls(sigma)
        codes = list(codes)
        if codes:
            n = len(codes) + 1
            d.capacity = max(sigma, -(-3 * n // 2) - 1)
            d.budget = -(-n // 2)
            d.index = TextIndex(sigma, d.capacity, codes)
            d._touch()
        return d

    def _touch(self) -> None:
        self.version += 1
        self._memo = {}

    def _spend(self) -> None:
        self._touch()
        self.budget -= 1
        if self.budget == 0:
            self.rebuild()

    def rebuild(self) -> None:
        ix = self._ix()
        n = ix.n
        codes = [ord(c) for c in ix.text[:-1]]
        self.capacity = max(self.sigma, -(-3 * n // 2) - 1)
        self.budget = -(-n // 2)
        self.index = TextIndex(self.sigma, self.capacity, codes)
        self.epoch += 1

    def insert(self, i: int, a: int) -> None:
        """``T := T[1..i) a T[i..n]`` for ``i`` in ``[1..n]``."""
        self._ix().insert(i, a)
        self._spend()

    def delete(self, i: int) -> None:
        """``T := T[1..i) T(i..n]`` for ``i`` in ``[1..n)``."""
        self._ix().delete(i)
        self._spend()

    def swap(self, i: int, j: int, k: int) -> None:
        """``T := T[1..i) T[j..k) T[i..j) T[k..n]`` for ``1 <= i <= j <= k <= n``."""
        ix = self._ix()
        n = ix.n
        if not 1 <= i <= j <= k <= n:
            raise IndexError(f"swap needs 1 <= i <= j <= k <= {n}, got {i}, {j}, {k}")
        if i == j or j == k:
            return
        ix.swap(i, j, k)
        self._spend()

    def substitute(self, i: int, a: int) -> None:
        self.delete(i)
        self.insert(i, a)

    def copy_paste(self, *args) -> None:
        raise UnsupportedOperation(
            "copy-paste is not supported: maintaining suffix-array access under "
            "copy-paste is as hard as online boolean matrix-vector multiplication")

    def apply_update(self, op: str, *args) -> None:
        """Dispatch ``initialize``, ``insert``, ``delete``, ``swap`` or ``substitute``."""
        handlers = {"initialize": self.initialize, "insert": self.insert,
                    "delete": self.delete, "swap": self.swap,
                    "substitute": self.substitute, "copy_paste": self.copy_paste}
        try:
            fn = handlers[op]
        except KeyError:
            raise ValueError(f"unknown update {op!r}") from None
        fn(*args)

    # -- plain access ----------------------------------------------------------------

    @property
    def n(self) -> int:
        return self._ix().n

    def access(self, i: int) -> int:
        return self._ix().access(i)

    def text(self) -> list[int]:
        """Letter codes of ``T`` including the trailing sentinel ``0``."""
        return [ord(c) for c in self._ix().text]

    # -- suffix array ------------------------------------------------------------------

    def sa(self, i: int) -> int:
        ix = self._ix()
        n = ix.n
        if not 1 <= i <= n:
            raise IndexError(f"rank {i} outside [1..{n}]")
        hit = self._memo.get(i)
        if hit is not None:
            return hit
        lab, rb, re = ix.base_rank16(i)
        state = RefineState(16, i, rb, re, ix.unlabel(lab))
        for q in range(4, ceil_log2(n)):
            state = self.refine_range(state)
        self._memo[i] = state.j
        return state.j

    def isa(self, j: int) -> int:
        """Rank of suffix ``j`` by binary search over ranks."""
        ix = self._ix()
        n = ix.n
        if not 1 <= j <= n:
            raise IndexError(f"position {j} outside [1..{n}]")
        t = ix.text
        suf = t[j - 1:]
        lo, hi = 1, n
        while lo < hi:
            mid = (lo + hi) // 2
            if t[self.sa(mid) - 1:] < suf:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def count(self, pattern) -> int:
        """Occurrences of a nonempty pattern (a string of codes or a list of ints)."""
        ix = self._ix()
        if isinstance(pattern, str):
            pattern = [ord(c) for c in pattern]
        if not pattern:
            raise ValueError("the pattern must be nonempty")
        if any(not 1 <= c < self.sigma for c in pattern):
            raise ValueError("pattern letters must be codes in [1..sigma)")
        pat = "".join(map(chr, pattern))
        m = len(pat)
        t = ix.text
        n = ix.n

        def first_rank(key) -> int:
            lo, hi = 1, n + 1
            while lo < hi:
                mid = (lo + hi) // 2
                if key(cyclic(t, self.sa(mid), self.sa(mid) + m)):
                    lo = mid + 1
                else:
                    hi = mid
            return lo

        return first_rank(lambda c: c <= pat) - first_rank(lambda c: c < pat)

    # -- one doubling round ---------------------------------------------------------------

    def refine_range(self, state: RefineState) -> RefineState:
        """The block and a witness for ``2 ell`` from those for ``ell``."""
        state.check()
        ix = self._ix()
        if ix.in_R(state.ell, state.j):
            out = self._periodic(state)
        else:
            out = self._nonperiodic(state)
        out.check()
        return out

    def _nonperiodic(self, st: RefineState) -> RefineState:
        ix = self._ix()
        ell, i, rb, re, j = st.ell, st.i, st.rb, st.re, st.j
        tau = ell // 3
        n = ix.n
        if re - rb == 1:
            return RefineState(2 * ell, i, rb, re, j)
        s = ix.sync_succ(ell, j)
        ql = s - j
        if not 0 <= ql < tau:
            raise AssertionError(f"no synchronizing position within tau after {j}")
        m, _ = ix.ss_count(ell, s, ql, j + ell - s)
        pos = ix.ss_select(ell, s, ql, m + (i - rb))
        j2 = pos - ql
        if j2 > n - 3 * tau + 1:
            delta, occ = 0, 1
        else:
            s2 = ix.sync_succ(ell, j2)
            ql2 = s2 - j2
            lo_a, _ = ix.ss_count(ell, s2, ql2, j2 + ell - s2)
            lo_b, hi_b = ix.ss_count(ell, s2, ql2, j2 + 2 * ell - s2)
            delta, occ = lo_b - lo_a, hi_b - lo_b
        if self.trace is not None:
            self.trace.append({"ell": ell, "i": i, "route": "nonperiodic", "j2": j2,
                               "delta": delta, "occ": occ})
        return RefineState(2 * ell, i, rb + delta, rb + delta + occ, j2)

    # periodic helpers ------------------------------------------------------------------

    def _occ_size(self, ell: int, d: int, j: int, dec: RunDecomposition, sign: int) -> int:
        """Occurrences of ``T^inf[j..j+d)`` among periodic positions of one type."""
        ix = self._ix()
        p, s = dec.p, dec.s
        xc = s + dec.exp_cut(d) * p
        lo, hi, _ = ix.periodic_query(ell, dec.key, sign, "is_count", xc, j + xc, d - xc)
        eq = hi - lo
        gt = 0
        if dec.rend - j >= d:
            gt = (ix.periodic_query(ell, dec.key, sign, "mcount", p, s, ix.n)
                  - ix.periodic_query(ell, dec.key, sign, "mcount", p, s, (d - s) // p))
        return eq + gt

    def _delta_edge(self, ell: int, d: int, j: int, dec: RunDecomposition, sign: int) -> int:
        """Size of the set of occurrences with the cut exponent of ``j`` at length ``d``.

        For type ``-1`` these are the ones preceding ``j`` or sharing ``d``
        characters with it, for type ``+1`` the ones following it or sharing.
        """
        ix = self._ix()
        xc = dec.s + dec.exp_cut(d) * dec.p
        lo, hi, total = ix.periodic_query(ell, dec.key, sign, "is_count", xc, j + xc, d - xc)
        return total - lo if sign < 0 else hi

    def _periodic(self, st: RefineState) -> RefineState:
        ix = self._ix()
        ell, i, rb, re, j = st.ell, st.i, st.rb, st.re, st.j
        n = ix.n
        dec = ix.run_decomp(ell, j)
        p, s, key = dec.p, dec.s, dec.key

        def mcount(sign: int, q: int) -> int:
            return ix.periodic_query(ell, key, sign, "mcount", p, s, q)

        # 1. type of SA[i]
        sign = -1 if i - rb <= self._occ_size(ell, ell, j, dec, -1) else 1
        # rank of SA[i] counted from the end of the block where its type starts
        rank = i - rb if sign < 0 else re - i + 1
        # 2. occurrences with the lowest exponent
        k1 = dec.exp_cut(ell)
        d_low = self._delta_edge(ell, ell, j, dec, sign)
        # 3. exponent of SA[i]
        if rank <= d_low:
            exp = k1
        else:
            exp = ix.periodic_query(ell, key, sign, "mselect", p, s, mcount(sign, k1) + rank - d_low)
        # 4. occurrences with intermediate exponents
        ka = min(exp, (ell - s) // p)
        kb = min(exp, (2 * ell - s) // p)
        d_mid = mcount(sign, kb) - mcount(sign, ka)
        # 5. a witness for 2 ell
        if rank <= d_low + d_mid:
            x = s + kb * p
            back = d_low + d_mid - rank
            if sign < 0:
                m = ix.periodic_query(ell, key, sign, "is_count", x, 1, 0)[2]
                pos = ix.periodic_query(ell, key, sign, "is_select", x, m - back)
            else:
                pos = ix.periodic_query(ell, key, sign, "is_select", x, back + 1)
        else:
            x = s + ((2 * ell - s) // p + 1) * p
            pos = ix.periodic_query(ell, key, sign, "is_select", x, 1)
        j2 = pos - x
        # 6. occurrences sharing the exponent of the witness
        dec2 = ix.run_decomp(ell, j2)
        d_high = self._delta_edge(ell, 2 * ell, j2, dec2, sign)
        # 7. the new block
        m = self._occ_size(ell, 2 * ell, j2, dec2, -1) + self._occ_size(ell, 2 * ell, j2, dec2, 1)
        delta = d_low + d_mid - d_high
        if self.trace is not None:
            self.trace.append({"ell": ell, "i": i, "route": "periodic", "type": sign,
                               "exp": exp, "low": d_low, "mid": d_mid, "high": d_high,
                               "j2": j2, "occ": m})
        if sign < 0:
            return RefineState(2 * ell, i, rb + delta, rb + delta + m, j2)
        return RefineState(2 * ell, i, re - delta - m, re - delta, j2)


def naive_suffix_array(codes) -> list[int]:
    """1-based suffix array of a code sequence that ends with its sentinel."""
    t = "".join(map(chr, codes))
    return sorted(range(1, len(t) + 1), key=lambda i: t[i - 1:])


def doubling_rounds(n: int) -> int:
    """Number of refinement rounds ``sa`` performs on a text of length ``n``."""
    return max(0, ceil_log2(n) - 4) if n > 1 else 0


__all__ = ["DynText", "RefineState", "UnsupportedOperation", "naive_suffix_array",
           "doubling_rounds"]
