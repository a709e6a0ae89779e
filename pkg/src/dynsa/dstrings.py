"""A growing collection of strings stored as balanced-parse grammar symbols.

Each string is identified by the top symbol of its parse, so equal strings
always get the same handle.  New strings are produced from pieces of
existing ones (concatenation, splitting, substrings, powers) by
:meth:`DynamicStrings.assemble`, which keeps every level-``k`` node of a
piece whose surroundings inside the piece are wide enough (``alpha_k`` to
the left, ``beta_k`` to the right) and re-parses only the gaps between
such kept spans.

Comparison queries walk two parse trees side by side with a stack of
``(symbol, repetitions)`` entries.  Equal symbols are skipped wholesale,
including whole runs of a repeated child, so the walk only descends near
the first mismatch.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

from .grammar import BLOCK, LETTER, POWER, Grammar
from .parsing import (collapse, level_params, parse_levels, run_ends,
                      sig_view, signature_ends)

LONG = "long"
_BIG = 1 << 62


@dataclass(frozen=True)
class StrHandle:
    """A string of the collection, named by its top parse symbol."""

    sid: int


@dataclass(frozen=True)
class CFrag:
    """The cyclic fragment ``T^inf[start, end)`` of ``base``.

    With ``padded`` set, the fragment is followed by infinitely many copies
    of the largest alphabet character.
    """

    base: StrHandle
    start: int
    end: int
    padded: bool = False

    def __post_init__(self) -> None:
        if self.end < self.start:
            raise ValueError("a cyclic fragment needs start <= end")


def _lt(a, b) -> int:
    return -1 if a < b else (1 if a > b else 0)


class DynamicStrings:
    """A grow-only family of strings over a fixed alphabet."""

    def __init__(self, alphabet: Iterable[str] | None = None) -> None:
        if alphabet is None:
            alphabet = (chr(i) for i in range(256))
        self.alphabet = frozenset(alphabet)
        if not self.alphabet:
            raise ValueError("the alphabet must be nonempty")
        self.sigma = len(self.alphabet)
        self.max_char = max(self.alphabet)
        self.g = Grammar()
        self._canshift: dict[int, int] = {}

    # -- basic handles ------------------------------------------------------

    def insert(self, s: Sequence[str]) -> StrHandle:
        if len(s) == 0:
            raise ValueError("cannot insert the empty string")
        bad = set(s) - self.alphabet
        if bad:
            raise ValueError(f"characters outside the alphabet: {sorted(bad)!r}")
        return StrHandle(parse_levels(self.g, s, self.sigma)[-1][0])

    def length(self, h: StrHandle) -> int:
        return self.g.length[h.sid]

    def expand(self, h: StrHandle) -> str:
        return "".join(self.g.expand(h.sid))

    def access(self, h: StrHandle, i: int) -> str:
        """Character ``T[i]`` (1-based)."""
        n = self.length(h)
        if not 1 <= i <= n:
            raise IndexError(f"position {i} outside [1..{n}]")
        return self.g.access(h.sid, i - 1)

    def concat(self, left: StrHandle, right: StrHandle) -> StrHandle:
        return StrHandle(self.assemble([(left.sid, 0, self.length(left)),
                                        (right.sid, 0, self.length(right))]))

    def split(self, h: StrHandle, i: int) -> tuple[StrHandle, StrHandle]:
        n = self.length(h)
        if not 1 <= i < n:
            raise IndexError(f"split position {i} outside [1..{n - 1}]")
        return self.substring(h, 0, i), self.substring(h, i, n)

    def substring(self, h: StrHandle, a: int, b: int) -> StrHandle:
        """Handle of ``T[a:b]`` (0-based, half-open, nonempty)."""
        n = self.length(h)
        if not 0 <= a < b <= n:
            raise IndexError(f"substring [{a}, {b}) outside [0, {n})")
        return StrHandle(self.assemble([(h.sid, a, b)]))

    def power(self, h: StrHandle, c: int) -> StrHandle:
        """Handle of ``T^c`` built by repeated squaring."""
        if c < 1:
            raise ValueError("power exponent must be positive")
        result = None
        base = h
        while True:
            if c & 1:
                result = base if result is None else self.concat(result, base)
            c >>= 1
            if not c:
                return result
            base = self.concat(base, base)

    # -- tree navigation ----------------------------------------------------

    def _node_at(self, sid: int, k: int, x: int) -> tuple[int, int]:
        """Interval of the level-``k`` node of ``sid`` covering offset ``x``."""
        g = self.g
        kind, payload, level, length, prefix = g.kind, g.payload, g.level, g.length, g._prefix
        off = 0
        while level[sid] > k:
            if kind[sid] == POWER:
                c, _ = payload[sid]
                lc = length[c]
                off += ((x - off) // lc) * lc
                sid = c
            else:
                pre = prefix[sid]
                j = bisect_right(pre, x - off) - 1
                off += pre[j]
                sid = payload[sid][j]
        return off, off + length[sid]

    def _ceil(self, sid: int, k: int, x: int) -> int:
        n = self.g.length[sid]
        if x <= 0:
            return 0
        if x >= n:
            return n
        s, e = self._node_at(sid, k, x)
        return s if s == x else e

    def _floor(self, sid: int, k: int, x: int) -> int:
        n = self.g.length[sid]
        if x <= 0:
            return 0
        if x >= n:
            return n
        return self._node_at(sid, k, x)[0]

    def _nodes(self, sid: int, k: int, a: int, b: int) -> list[int]:
        """Level-``k`` symbols of ``sid`` exactly covering ``[a, b)``.

        ``a`` and ``b`` must be level-``k`` boundaries of ``sid``.
        """
        out: list[int] = []
        if a >= b:
            return out
        g = self.g
        kind, payload, level, length, prefix = g.kind, g.payload, g.level, g.length, g._prefix
        stack = [(sid, 0)]
        while stack:
            s, off = stack.pop()
            if level[s] <= k:
                out.append(s)
                continue
            if kind[s] == POWER:
                c, m = payload[s]
                lc = length[c]
                j0 = max(0, (a - off) // lc)
                j1 = min(m, -(-(b - off) // lc))
                if level[c] <= k:
                    out.extend([c] * (j1 - j0))
                else:
                    for j in range(j1 - 1, j0 - 1, -1):
                        stack.append((c, off + j * lc))
            else:
                pre = prefix[s]
                ch = payload[s]
                for j in range(len(ch) - 1, -1, -1):
                    lo = off + pre[j]
                    hi = off + pre[j + 1]
                    if hi > a and lo < b:
                        stack.append((ch[j], lo))
        return out

    def boundaries(self, h: StrHandle, k: int) -> list[int]:
        """The phrase-boundary set ``B_k`` of ``T`` in increasing order."""
        sid = h.sid
        out = [0]
        acc = 0
        length = self.g.length
        for x in self._nodes(sid, k, 0, length[sid]):
            acc += length[x]
            out.append(acc)
        return out

    def level_sequence(self, h: StrHandle, k: int) -> list[int]:
        """The parsing level ``T_k`` as a list of symbol ids."""
        return self._nodes(h.sid, k, 0, self.g.length[h.sid])

    # -- assembly -----------------------------------------------------------

    def assemble(self, pieces: Sequence[tuple[int, int, int]]) -> int:
        """Top symbol of the concatenation of ``str(sid)[lo:hi]`` pieces."""
        g = self.g
        length, level = g.length, g.level
        pieces = [(sid, lo, hi) for sid, lo, hi in pieces if hi > lo]
        if not pieces:
            raise ValueError("cannot assemble the empty string")
        for sid, lo, hi in pieces:
            if lo < 0 or hi > length[sid]:
                raise IndexError("piece outside its base string")
        if len(pieces) == 1 and pieces[0][1] == 0 and pieces[0][2] == length[pieces[0][0]]:
            return pieces[0][0]
        offs = []
        acc = 0
        for sid, lo, hi in pieces:
            offs.append(acc)
            acc += hi - lo
        total = acc
        if total == 1:
            sid, lo, _ = pieces[0]
            return self._nodes(sid, 0, lo, lo + 1)[0]
        last = len(pieces) - 1
        spans: list[tuple[int, int] | None] = [(lo, hi) for _, lo, hi in pieces]
        gaps: list[tuple[int, int, list[int]]] = []
        k = 0
        while True:
            k += 1
            par = level_params(k, self.sigma)
            new_spans: list[tuple[int, int] | None] = []
            for idx, (sid, lo, hi) in enumerate(pieces):
                if spans[idx] is None or level[sid] < k:
                    new_spans.append(None)
                    continue
                left = lo if (idx == 0 and lo == 0) else lo + par.alpha
                right = hi if (idx == last and hi == length[sid]) else hi - par.beta
                if left >= right:
                    new_spans.append(None)
                    continue
                s = self._ceil(sid, k, left)
                e = self._floor(sid, k, right)
                new_spans.append((s, e) if s < e else None)
            segs = self._segments(pieces, offs, spans, gaps)
            new_gaps = []
            cur = 0
            for idx, span in enumerate(new_spans):
                if span is None:
                    continue
                start = offs[idx] + span[0] - pieces[idx][1]
                if cur < start:
                    new_gaps.append(self._parse_gap(segs, k, cur, start, total))
                cur = offs[idx] + span[1] - pieces[idx][1]
            if cur < total:
                new_gaps.append(self._parse_gap(segs, k, cur, total, total))
            spans, gaps = new_spans, new_gaps
            if (len(gaps) == 1 and len(gaps[0][2]) == 1
                    and all(s is None for s in spans)):
                return gaps[0][2][0]

    @staticmethod
    def _segments(pieces, offs, spans, gaps):
        segs = []
        for idx, span in enumerate(spans):
            if span is not None:
                sid, lo, _ = pieces[idx]
                start = offs[idx] + span[0] - lo
                segs.append((start, start + span[1] - span[0], sid, lo - offs[idx], None))
        for g0, g1, syms in gaps:
            segs.append((g0, g1, None, 0, syms))
        segs.sort(key=lambda t: t[0])
        return segs

    def _gather(self, segs, k: int, a: int, b: int) -> list[int]:
        """Level-``k`` symbols lying entirely inside result range ``[a, b)``."""
        out: list[int] = []
        length = self.g.length
        for s0, s1, sid, shift, syms in segs:
            if s1 <= a or s0 >= b:
                continue
            if syms is None:
                xa = self._ceil(sid, k, max(a, s0) + shift)
                xb = self._floor(sid, k, min(b, s1) + shift)
                if xa < xb:
                    out.extend(self._nodes(sid, k, xa, xb))
            else:
                pos = s0
                for x in syms:
                    nxt = pos + length[x]
                    if pos >= a and nxt <= b:
                        out.append(x)
                    pos = nxt
        return out

    def _parse_gap(self, segs, k: int, g0: int, g1: int, total: int):
        g = self.g
        seq = self._gather(segs, k - 1, g0, g1)
        prev = level_params(k - 1, self.sigma)
        if k % 2 == 1:
            right = self._gather(segs, k - 1, g1, min(total, g1 + prev.d))
            ends = run_ends(g, k, seq + right[:1])[:len(seq)]
        else:
            h, d = prev.h, prev.d
            left = self._gather(segs, k - 1, max(0, g0 - (h + 6) * d), g0)
            right = self._gather(segs, k - 1, g1, min(total, g1 + 4 * d))
            sigs = sig_view(g, k - 1, left + seq + right)
            bits = signature_ends(h, [None] + sigs + [None])
            ends = bits[1 + len(left):1 + len(left) + len(seq)]
        if not ends or ends[-1] != 1:
            raise AssertionError("re-parsed gap does not end on a phrase boundary")
        return (g0, g1, collapse(g, seq, ends))

    # -- longest common extensions -----------------------------------------

    def _entries(self, sid: int, a: int, b: int) -> list[tuple[int, int]]:
        """Maximal nodes of ``sid`` covering ``[a, b)``, left to right."""
        out: list[tuple[int, int]] = []
        if a >= b:
            return out
        g = self.g
        kind, payload, length, prefix = g.kind, g.payload, g.length, g._prefix

        def rec(s: int, off: int) -> None:
            ln = length[s]
            if a <= off and off + ln <= b:
                out.append((s, 1))
                return
            if kind[s] == POWER:
                c, m = payload[s]
                lc = length[c]
                j0 = max(0, (a - off) // lc)
                f0 = min(m, max(0, -(-(a - off) // lc)))
                f1 = max(0, min(m, (b - off) // lc))
                j1 = min(m, -(-(b - off) // lc))
                if j0 < f0:
                    rec(c, off + j0 * lc)
                if f1 > f0:
                    out.append((c, f1 - f0))
                if f1 < j1 and f1 >= f0:
                    rec(c, off + f1 * lc)
            else:
                pre = prefix[s]
                for j, c in enumerate(payload[s]):
                    lo = off + pre[j]
                    hi = off + pre[j + 1]
                    if hi > a and lo < b:
                        rec(c, lo)

        rec(sid, 0)
        return out

    def _cyclic_entries(self, sid: int, start: int, ln: int) -> list[tuple[int, int]]:
        n = self.g.length[sid]
        if ln <= 0:
            return []
        i0 = start % n
        first = min(ln, n - i0)
        out = self._entries(sid, i0, i0 + first)
        q, r = divmod(ln - first, n)
        if q:
            out.append((sid, q))
        if r:
            out.extend(self._entries(sid, 0, r))
        return out

    def _lce(self, s1: list, s2: list, rev: bool = False, cap: int = _BIG) -> int:
        """Consume two stacks while they spell the same characters."""
        g = self.g
        kind, payload, length, level = g.kind, g.payload, g.length, g.level
        m = 0
        while s1 and s2 and m < cap:
            a, ca = s1[-1]
            b, cb = s2[-1]
            if a == b:
                t = ca if ca < cb else cb
                m += t * length[a]
                if ca == t:
                    s1.pop()
                else:
                    s1[-1] = (a, ca - t)
                if cb == t:
                    s2.pop()
                else:
                    s2[-1] = (b, cb - t)
                continue
            ka, kb = kind[a], kind[b]
            if ka == LETTER and kb == LETTER:
                break
            if ka == LETTER:
                target = s2
            elif kb == LETTER:
                target = s1
            elif (length[a], level[a]) >= (length[b], level[b]):
                target = s1
            else:
                target = s2
            x, cx = target.pop()
            if cx > 1:
                target.append((x, cx - 1))
            if kind[x] == POWER:
                target.append(payload[x])
            elif rev:
                target.extend((c, 1) for c in payload[x])
            else:
                target.extend((c, 1) for c in reversed(payload[x]))
        return m if m < cap else cap

    def lce(self, h1: StrHandle, i1: int, h2: StrHandle, i2: int) -> int:
        """Length of the common prefix of ``T1[i1:]`` and ``T2[i2:]``."""
        s1 = self._entries(h1.sid, i1, self.length(h1))
        s2 = self._entries(h2.sid, i2, self.length(h2))
        s1.reverse()
        s2.reverse()
        return self._lce(s1, s2)

    def lce_rev(self, h1: StrHandle, j1: int, h2: StrHandle, j2: int) -> int:
        """Length of the common suffix of ``T1[:j1]`` and ``T2[:j2]``."""
        s1 = self._entries(h1.sid, 0, j1)
        s2 = self._entries(h2.sid, 0, j2)
        return self._lce(s1, s2, rev=True)

    def lcp(self, h1: StrHandle, h2: StrHandle) -> int:
        return self._lce([(h1.sid, 1)], [(h2.sid, 1)])

    def lcs(self, h1: StrHandle, h2: StrHandle) -> int:
        return self._lce([(h1.sid, 1)], [(h2.sid, 1)], rev=True)

    # -- cyclic fragment comparison ------------------------------------------

    def compare(self, f1: CFrag, f2: CFrag, reverse: bool = False) -> int:
        """Order of the strings denoted by two cyclic fragments (-1, 0, 1).

        With ``reverse`` set, the reversed fragments are compared instead
        (padding then follows the reversed fragment).
        """
        s1 = self._frag_stack(f1, reverse)
        s2 = self._frag_stack(f2, reverse)
        m = self._lce(s1, s2, rev=reverse)
        if m >= _BIG // 2:
            return 0
        c1 = self.g.payload[s1[-1][0]] if s1 else None
        c2 = self.g.payload[s2[-1][0]] if s2 else None
        if c1 is None and c2 is None:
            return 0
        if c1 is None:
            return -1
        if c2 is None:
            return 1
        return _lt(c1, c2)

    def _frag_stack(self, f: CFrag, reverse: bool) -> list[tuple[int, int]]:
        entries = self._cyclic_entries(f.base.sid, f.start, f.end - f.start)
        stack = [(self.g.letter(self.max_char), _BIG)] if f.padded else []
        stack.extend(entries if reverse else reversed(entries))
        return stack

    # -- internal pattern matching and periods -----------------------------

    def _anchor(self, sid: int) -> tuple[int, int]:
        """A level and a boundary of that level with full context inside."""
        n = self.g.length[sid]
        for k in range(self.g.level[sid], -1, -1):
            par = level_params(k, self.sigma)
            b = self._ceil(sid, k, par.alpha)
            if b <= n - par.beta and b >= par.alpha:
                return k, b
        return 0, 0

    def _boundaries_between(self, sid: int, k: int, x: int, y: int) -> list[int]:
        """Elements of ``B_k`` of ``sid`` inside ``[x, y]``."""
        n = self.g.length[sid]
        x = max(0, x)
        y = min(n, y)
        if x > y:
            return []
        a = self._ceil(sid, k, x)
        b = self._floor(sid, k, y)
        if a > y:
            return []
        out = [a]
        length = self.g.length
        pos = a
        for s in self._nodes(sid, k, a, b):
            pos += length[s]
            out.append(pos)
        return out

    def ipm_fragments(self, p_sid: int, t_sid: int, t_lo: int, t_hi: int) -> tuple[int, int, int]:
        """Occurrences of ``str(p_sid)`` in ``str(t_sid)[t_lo:t_hi]``."""
        g = self.g
        p = g.length[p_sid]
        t = t_hi - t_lo
        if t < p:
            return (0, 0, 0)
        k, b = self._anchor(p_sid)
        occ: list[int] = []
        ph = StrHandle(p_sid)
        th = StrHandle(t_sid)
        for j in self._boundaries_between(t_sid, k, t_lo + b, t_lo + t - p + b):
            o = j - b - t_lo
            if self.lce(ph, 0, th, t_lo + o) >= p:
                occ.append(o)
                if len(occ) == 2:
                    break
        if not occ:
            return (0, 0, 0)
        if len(occ) == 1:
            return (occ[0], 0, 1)
        o1, o2 = occ
        delta = o2 - o1
        ext = delta + min(self.lce(th, t_lo + o1, th, t_lo + o1 + delta),
                          t - o1 - delta)
        count = 1 + (ext - p) // delta
        return (o1, delta, count)

    def ipm(self, pattern: StrHandle, text: StrHandle) -> tuple[int, int, int]:
        """All occurrences of ``pattern`` in ``text`` as ``(first, diff, count)``.

        Requires ``|P| <= |T| <= 2|P|``.  Offsets are 0-based.
        """
        p = self.length(pattern)
        t = self.length(text)
        if not p <= t <= 2 * p:
            raise ValueError("ipm needs |P| <= |T| <= 2|P|")
        return self.ipm_fragments(pattern.sid, text.sid, 0, t)

    def period(self, h: StrHandle) -> int | str:
        """Shortest period if it is at most half the length, else ``LONG``."""
        n = self.length(h)
        if n < 2:
            return LONG
        m = n // 2
        head = self.substring(h, 0, m)
        first, diff, count = self.ipm_fragments(head.sid, h.sid, 1, 1 + min(n - 1, 2 * m))
        for j in range(count):
            cand = first + 1 + j * diff
            if 2 * cand > n:
                break
            if self.lce(h, 0, h, cand) >= n - cand:
                return cand
        return LONG

    # -- canonical cyclic shift ---------------------------------------------

    def canshift(self, h: StrHandle) -> int:
        """Shift ``s`` such that ``T[s:] + T[:s]`` is the class representative."""
        cached = self._canshift.get(h.sid)
        if cached is not None:
            return cached
        n = self.length(h)
        k = 0
        while level_params(k, self.sigma).d < 4 * n:
            k += 1
        par = level_params(k, self.sigma)
        c = -(-(par.alpha + par.beta + 3 * par.d) // n)
        u = self.power(h, c)
        start, _ = self._node_at(u.sid, k, par.alpha - 1)
        s = start % n
        self._canshift[h.sid] = s
        return s

    def canonical_rotation(self, h: StrHandle) -> str:
        s = self.canshift(h)
        t = self.expand(h)
        return t[s:] + t[:s]


# -- module-level operation names -------------------------------------------

def d_insert(w: DynamicStrings, s: str) -> StrHandle:
    return w.insert(s)


def d_concat(w: DynamicStrings, left: StrHandle, right: StrHandle) -> StrHandle:
    return w.concat(left, right)


def d_split(w: DynamicStrings, h: StrHandle, i: int) -> tuple[StrHandle, StrHandle]:
    return w.split(h, i)


def d_access(w: DynamicStrings, h: StrHandle, i: int) -> str:
    return w.access(h, i)


def d_lcp(w: DynamicStrings, h1: StrHandle, h2: StrHandle) -> int:
    return w.lcp(h1, h2)


def d_lcs(w: DynamicStrings, h1: StrHandle, h2: StrHandle) -> int:
    return w.lcs(h1, h2)


def d_compare(w: DynamicStrings, f1: CFrag, f2: CFrag) -> int:
    return w.compare(f1, f2)


def d_ipm(w: DynamicStrings, pattern: StrHandle, text: StrHandle) -> tuple[int, int, int]:
    return w.ipm(pattern, text)


def d_period(w: DynamicStrings, h: StrHandle) -> int | str:
    return w.period(h)


def d_canshift(w: DynamicStrings, h: StrHandle) -> int:
    return w.canshift(h)
