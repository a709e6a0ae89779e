"""Brute-force reference values computed straight from the definitions.

Nothing here imports the rest of the package.  Texts are plain Python
strings, positions are 1-based, and the last character of a text is
expected to be a unique smallest sentinel whenever suffix order matters.
Every function refuses texts longer than :data:`MAX_N` because the
algorithms are quadratic or worse.

Necklace-dependent notions (run decompositions and the per-root point
and interval sets) take the necklace function ``f`` as a parameter; the
default maps a string to its lexicographically smallest rotation.
"""

from __future__ import annotations

from typing import Callable, Iterable

MAX_N = 8192
TOP = "\U0010ffff"


def _check(text: str) -> int:
    n = len(text)
    if n > MAX_N:
        raise ValueError(f"oracle texts are capped at {MAX_N} characters")
    return n


def cyc(text: str, a: int, b: int) -> str:
    """``T^inf[a..b)`` for 1-based ``a`` (``a`` may be below 1)."""
    n = len(text)
    return "".join(text[(i - 1) % n] for i in range(a, b))


def min_rotation(s: str) -> str:
    return min(s[i:] + s[:i] for i in range(len(s)))


def per(s: str) -> int:
    """Shortest period of a nonempty string (longest border via the failure table)."""
    m = len(s)
    fail = [0] * m
    k = 0
    for i in range(1, m):
        while k and s[i] != s[k]:
            k = fail[k - 1]
        if s[i] == s[k]:
            k += 1
        fail[i] = k
    return m - fail[-1] if m else 0


# -- suffix array --------------------------------------------------------------

def sa(text: str) -> list[int]:
    n = _check(text)
    return sorted(range(1, n + 1), key=lambda i: text[i - 1:])


def isa(text: str) -> list[int]:
    """``isa[j-1]`` is the rank of suffix ``j``."""
    order = sa(text)
    out = [0] * len(order)
    for r, j in enumerate(order, 1):
        out[j - 1] = r
    return out


def lce(text: str, j1: int, j2: int) -> int:
    _check(text)
    a, b = text[j1 - 1:], text[j2 - 1:]
    k = 0
    while k < min(len(a), len(b)) and a[k] == b[k]:
        k += 1
    return k


def occ(text: str, ell: int, j: int) -> list[int]:
    n = _check(text)
    w = cyc(text, j, j + ell)
    return [i for i in range(1, n + 1) if cyc(text, i, i + ell) == w]


def rangebeg(text: str, ell: int, j: int) -> int:
    n = _check(text)
    suf = text[j - 1:]
    return sum(1 for i in range(1, n + 1)
               if text[i - 1:] < suf and lce(text, i, j) < ell)


def rangeend(text: str, ell: int, j: int) -> int:
    return rangebeg(text, ell, j) + len(occ(text, ell, j))


def pos(text: str, ell: int, j: int, side: int = -1) -> list[int]:
    """Positions before (side -1) or after (side +1) ``j`` sharing ``[ell, 2ell)``."""
    n = _check(text)
    suf = text[j - 1:]
    out = []
    for i in range(1, n + 1):
        lo = text[i - 1:] < suf if side < 0 else text[i - 1:] > suf
        if lo and ell <= lce(text, i, j) < 2 * ell:
            out.append(i)
    return out


# -- periodic positions --------------------------------------------------------

def R(text: str, tau: int) -> list[int]:
    n = _check(text)
    return [i for i in range(1, n - 3 * tau + 3)
            if 3 * per(text[i - 1:i + 3 * tau - 2]) <= tau]


def runs(text: str, tau: int) -> list[tuple[int, int, int]]:
    """Maximal fragments of length at least ``tau`` with period at most ``tau/3``."""
    n = _check(text)
    out = []
    for p0 in range(1, tau // 3 + 1):
        i = 1
        while i <= n:
            j = i
            while j + p0 <= n and text[j - 1] == text[j + p0 - 1]:
                j += 1
            # T[i..j+p0-1] has period p0 and cannot be extended to the right
            q = j + p0 - 1
            if q - i + 1 >= tau and per(text[i - 1:q]) == p0:
                out.append((i, q, p0))
            i = j + 1 if j > i else i + 1
    return sorted(set(out))


def sync_check(text: str, S: Iterable[int], tau: int) -> list[str]:
    """Violations of the consistency and density conditions (empty if none)."""
    n = _check(text)
    S = set(S)
    bad = []
    top = n - 2 * tau + 1
    for s in S:
        if not 1 <= s <= top:
            bad.append(f"position {s} outside [1..{top}]")
    ctx: dict[str, bool] = {}
    for i in range(1, top + 1):
        key = text[i - 1:i + 2 * tau - 1]
        mem = i in S
        if ctx.setdefault(key, mem) != mem:
            bad.append(f"consistency fails at {i}")
    rset = set(R(text, tau))
    below = [0] * (n + tau + 2)  # below[i] counts members of S smaller than i
    for i in range(1, n + tau + 2):
        below[i] = below[i - 1] + (i - 1 in S)
    for i in range(1, n - 3 * tau + 3):
        empty = below[i + tau] == below[i]
        if empty != (i in rset):
            bad.append(f"density fails at {i}")
    return bad


def run_decomp(text: str, tau: int, j: int,
               f: Callable[[str], str] = min_rotation) -> dict:
    """The run decomposition of ``j`` in ``R(tau)``."""
    n = _check(text)
    rset = set(R(text, tau))
    if j not in rset:
        raise ValueError(f"{j} is not a periodic position for tau={tau}")
    p = per(text[j - 1:j + 3 * tau - 2])
    jj = j
    while jj in rset:
        jj += 1
    rend = jj + 3 * tau - 2
    root = f(text[j - 1:j - 1 + p])
    s = next(s for s in range(p) if text[j - 1 + s:j - 1 + s + p] == root)
    k, tail = divmod(rend - j - s, p)
    typ = 1 if rend <= n and text[rend - 1] > text[rend - 1 - p] else -1
    return {"p": p, "s": s, "k": k, "tail": tail, "rend": rend, "type": typ,
            "root": root}


def rend_cut(d: dict, j: int, t: int) -> int:
    return j + d["s"] + min(d["k"], (t - d["s"]) // d["p"]) * d["p"]


# -- point and interval sets ------------------------------------------------------

def sync_points(text: str, S: Iterable[int], q: int) -> list[tuple[str, str, int]]:
    """``Points_q(T, S)``: reversed left context, right context, position."""
    _check(text)
    return [(cyc(text, p - q, p)[::-1], cyc(text, p, p + q), p) for p in S]


def periodic_sets(text: str, tau: int, f: Callable[[str], str] = min_rotation):
    """Per-root point and interval sets of both types.

    Returns ``{(root, type): (points, intervals)}`` where points are
    ``(x, y, position)`` with ``y`` of length ``7 tau`` and intervals are
    ``(b + 1, e + 1, j)``.
    """
    n = _check(text)
    rlist = R(text, tau)
    rset = set(rlist)
    out: dict = {}
    for j in rlist:
        if j - 1 in rset:
            continue
        d = run_decomp(text, tau, j, f)
        full = rend_cut(d, j, n)
        e = full - j
        t = d["rend"] - j - 3 * tau + 2
        b = e - t
        pts, ivs = out.setdefault((d["root"], d["type"]), ([], []))
        pts.append((e, cyc(text, full, full + 7 * tau), full))
        ivs.append((b + 1, e + 1, j))
    return out


def rcount_points(points, xl=None, xr=None, yu=None, inclusive=False) -> int:
    def ok(x, y):
        if xl is not None and x < xl:
            return False
        if xr is not None and not x < xr:
            return False
        if yu is None:
            return True
        return y <= yu if inclusive else y < yu
    return sum(1 for x, y, _ in points if ok(x, y))


def mcount_intervals(intervals, h: int, r: int, q: int) -> int:
    return sum(1 for b, e, _ in intervals for j in range(b, e)
               if j % h == r and j // h <= q)


# -- dispatcher -----------------------------------------------------------------

_TABLE: dict[str, Callable] = {
    "sa": sa, "isa": isa, "lce": lce, "occ": occ, "rangebeg": rangebeg,
    "rangeend": rangeend, "pos": pos, "R": R, "runs": runs,
    "sync_check": sync_check, "run_decomp": run_decomp,
    "sync_points": sync_points, "periodic_sets": periodic_sets,
    "rcount": rcount_points, "mcount": mcount_intervals,
}


def oracle_eval(what: str, *args, **kwargs):
    """Evaluate a named reference quantity, e.g. ``oracle_eval("sa", "ab$")``."""
    try:
        fn = _TABLE[what]
    except KeyError:
        raise ValueError(f"unknown oracle quantity {what!r}") from None
    return fn(*args, **kwargs)
