"""The labelled text and every per-level index the suffix-array queries use.

The text ``T`` (codes ``0..sigma-1`` stored as ``chr(code)``, code ``0``
being the sentinel ``$`` at the end) is kept in three forms:

* a flat string mirror used for slicing contexts,
* a list of immutable character labels (labels come from a counter and
  are never reused),
* a handle into a :class:`~dynsa.dstrings.DynamicStrings` family, which
  provides phrase boundaries for synchronizing sets and the necklace
  keys of periodic roots.

For every ``ell = 2**q`` with ``q`` in ``[4..ceil(log2 N)]`` a
:class:`LevelIndex` with ``tau = ell // 3`` holds the ``tau``-runs (with
cached root key, head and type for every run long enough to contain a
periodic position), the synchronizing set, the string-string point set
over synchronizing positions and, per root and type, the int-string
point set and the interval set built from the run starts.

Edits are described by an :class:`Edit`: which old boundaries got cut,
which old position vanished, and where the new seams are.  An entry
survives an edit when the window of text it was computed from contains
no cut; it is then only shifted.  Everything whose window was cut is
dropped, and fresh entries are computed in windows around the new
seams.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right, insort
from dataclasses import dataclass, field

from .dstrings import DynamicStrings, StrHandle
from .geom import TOP, PointSet
from .modq import IntervalSet
from .parsing import ceil_log2
from .syncset import TauRun, TextView, runs_near, sync_candidates

SENTINEL = "\x00"
BASE = 16


def cyclic(text: str, a: int, b: int) -> str:
    """``T^inf[a..b)`` for a 1-based start ``a`` (any integer)."""
    n = len(text)
    length = b - a
    if length <= 0:
        return ""
    s = (a - 1) % n
    if s + length <= n:
        return text[s:s + length]
    return (text * ((s + length) // n + 1))[s:s + length]


# -- edits ---------------------------------------------------------------------

@dataclass
class Edit:
    """How an edit maps old positions and where it broke the text.

    ``segments`` lists ``(lo, hi, shift)``: old positions ``lo..hi`` move
    to ``pos + shift``.  ``cuts`` are old boundaries (boundary ``c`` sits
    between positions ``c - 1`` and ``c``, cyclically) whose two sides are
    no longer adjacent.  ``seams`` are the new boundaries around which
    fresh content may appear.
    """

    n_old: int
    segments: list[tuple[int, int, int]]
    cuts: list[int]
    seams: list[int]
    deleted: int | None = None
    inserted: int | None = None

    @classmethod
    def insert(cls, n: int, i: int) -> "Edit":
        segs = [(1, i - 1, 0), (i, n, 1)]
        return cls(n, segs, [i], [i, i + 1], inserted=i)

    @classmethod
    def delete(cls, n: int, i: int) -> "Edit":
        segs = [(1, i - 1, 0), (i + 1, n, -1)]
        return cls(n, segs, [i, i + 1], [i], deleted=i)

    @classmethod
    def swap(cls, n: int, i: int, j: int, k: int) -> "Edit":
        segs = [(1, i - 1, 0), (i, j - 1, k - j), (j, k - 1, i - j), (k, n, 0)]
        return cls(n, segs, [i, j, k], [i, i + k - j, k])

    def map(self, pos: int) -> int | None:
        for lo, hi, shift in self.segments:
            if lo <= pos <= hi:
                return pos + shift
        return None

    def breaks(self, a: int, length: int) -> bool:
        """Whether the cyclic window ``[a, a + length)`` was cut."""
        n = self.n_old
        if length >= n:
            return True
        for c in self.cuts:
            if 1 <= (c - a) % n <= length - 1:
                return True
        d = self.deleted
        return d is not None and (d - a) % n < length


# -- per-level state -----------------------------------------------------------

@dataclass(frozen=True)
class RunDecomposition:
    """``T[j..rend)`` written as a head, ``k`` copies of the root and a tail."""

    p: int
    s: int
    k: int
    tail: int
    rend: int
    type: int
    key: int

    def exp_cut(self, t: int) -> int:
        return min(self.k, (t - self.s) // self.p)

    def rend_cut(self, j: int, t: int) -> int:
        return j + self.s + self.exp_cut(t) * self.p

    def rend_full(self, j: int) -> int:
        return j + self.s + self.k * self.p


@dataclass
class _Run:
    p: int
    q: int
    per: int
    key: int | None = None
    head: int = 0
    type: int = -1
    e: int = 0
    pt_label: int | None = None
    iv_label: int | None = None


@dataclass
class _RootSets:
    points: dict[int, PointSet] = field(default_factory=lambda: {-1: PointSet(), 1: PointSet()})
    intervals: dict[int, IntervalSet] = field(
        default_factory=lambda: {-1: IntervalSet(), 1: IntervalSet()})


class LevelIndex:
    """Runs, synchronizing positions and range structures for one ``ell``."""

    def __init__(self, ell: int) -> None:
        self.ell = ell
        self.tau = ell // 3
        self.runs: list[_Run] = []
        self.starts: list[int] = []
        self.S: list[int] = []
        self.sync_points = PointSet()
        self.roots: dict[int, _RootSets] = {}

    @property
    def ctx(self) -> int:
        return 7 * self.tau

    def _sorted(self) -> None:
        self.runs.sort(key=lambda r: r.p)
        self.starts = [r.p for r in self.runs]

    def run_at(self, j: int) -> _Run | None:
        """The run whose block of periodic positions contains ``j``."""
        idx = bisect_right(self.starts, j) - 1
        if idx < 0:
            return None
        r = self.runs[idx]
        if r.key is not None and j <= r.q - 3 * self.tau + 2:
            return r
        return None

    def tau_runs(self) -> list[TauRun]:
        return [TauRun(r.p, r.q, r.per) for r in self.runs]

    def root_sets(self, key: int) -> _RootSets | None:
        return self.roots.get(key)


# -- the index -----------------------------------------------------------------

class TextIndex:
    """A dynamic text with all augmentations needed for SA queries."""

    def __init__(self, sigma: int, capacity: int, codes=()) -> None:
        if sigma < 2:
            raise ValueError("the alphabet needs the sentinel and at least one letter")
        self.sigma = sigma
        self.capacity = max(capacity, 1)
        self.W = DynamicStrings(chr(c) for c in range(sigma))
        codes = list(codes)
        if any(not 1 <= c < sigma for c in codes):
            raise ValueError("letters must be codes in [1..sigma)")
        self.text = "".join(map(chr, codes)) + SENTINEL
        self._next_label = 0
        self.labels = [self._fresh() for _ in self.text]
        self._pos: dict[int, int] | None = None
        self.h = self.W.insert(self.text)
        top = max(4, ceil_log2(max(self.capacity, 2)))
        self.levels: dict[int, LevelIndex] = {1 << q: LevelIndex(1 << q) for q in range(4, top + 1)}
        self._build()

    # -- labels -----------------------------------------------------------------

    def _fresh(self) -> int:
        self._next_label += 1
        return self._next_label

    @property
    def n(self) -> int:
        return len(self.text)

    def label_at(self, pos: int) -> int:
        return self.labels[pos - 1]

    def unlabel(self, label: int) -> int:
        if self._pos is None:
            self._pos = {lab: i for i, lab in enumerate(self.labels, 1)}
        return self._pos[label]

    def access(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise IndexError(f"position {i} outside [1..{self.n}]")
        return ord(self.text[i - 1])

    def view(self) -> TextView:
        return TextView(self.text, self.W, self.h)

    def ctx(self, a: int, b: int) -> str:
        return cyclic(self.text, a, b)

    # -- construction from scratch ------------------------------------------------

    def _build(self) -> None:
        n = self.n
        self.ctx16 = sorted((self.ctx(j, j + BASE), self.labels[j - 1]) for j in range(1, n + 1))
        view = self.view()
        for lv in self.levels.values():
            tau = lv.tau
            lv.runs = []
            lv.roots = {}
            for r in runs_near(view, tau, 1, n):
                run = _Run(r.p, r.q, r.per)
                lv.runs.append(run)
                self._add_entries(lv, run)
            lv._sorted()
            lv.sync_points = PointSet()
            lv.S = sync_candidates(view, tau, lv.tau_runs(), 1, n) if 2 * tau <= n else []
            for s in lv.S:
                self._add_sync_point(lv, s)

    def _root_key(self, p: int, per: int) -> tuple[int, int]:
        """Necklace key of the root starting at ``p`` and the head at ``p``."""
        W = self.W
        hroot = W.substring(self.h, p - 1, p - 1 + per)
        c = W.canshift(hroot)
        if c == 0:
            return hroot.sid, 0
        return W.assemble([(hroot.sid, c, per), (hroot.sid, 0, c)]), c

    def _add_entries(self, lv: LevelIndex, run: _Run) -> None:
        tau = lv.tau
        if run.q - run.p + 1 < 3 * tau - 1:
            return
        p, per = run.p, run.per
        run.key, run.head = self._root_key(p, per)
        rend = run.q + 1
        run.type = 1 if rend <= self.n and self.text[rend - 1] > self.text[rend - 1 - per] else -1
        k = (rend - p - run.head) // per
        run.e = run.head + k * per
        self._insert_entries(lv, run)

    def _insert_entries(self, lv: LevelIndex, run: _Run) -> None:
        tau = lv.tau
        sets = lv.roots.get(run.key)
        if sets is None:
            sets = lv.roots[run.key] = _RootSets()
        full = run.p + run.e
        t = run.q + 1 - run.p - 3 * tau + 2
        run.pt_label = self.labels[full - 1]
        run.iv_label = self.labels[run.p - 1]
        sets.points[run.type].insert(run.e, self.ctx(full, full + lv.ctx), run.pt_label)
        sets.intervals[run.type].insert(run.e - t + 1, run.e + 1, run.iv_label)

    def _remove_point(self, lv: LevelIndex, run: _Run) -> None:
        lv.roots[run.key].points[run.type].delete(run.pt_label)

    def _remove_entries(self, lv: LevelIndex, run: _Run) -> None:
        if run.key is None:
            return
        sets = lv.roots[run.key]
        sets.points[run.type].delete(run.pt_label)
        sets.intervals[run.type].delete(run.iv_label)

    def _add_sync_point(self, lv: LevelIndex, s: int) -> None:
        q = lv.ctx
        lv.sync_points.insert(self.ctx(s - q, s)[::-1], self.ctx(s, s + q), self.labels[s - 1])

    # -- edits ----------------------------------------------------------------------

    def insert(self, i: int, code: int) -> None:
        """Insert letter ``code`` so that it becomes ``T[i]``."""
        n = self.n
        if not 1 <= i <= n:
            raise IndexError(f"insert position {i} outside [1..{n}]")
        if not 1 <= code < self.sigma:
            raise ValueError(f"letter code {code} outside [1..{self.sigma})")
        ch = chr(code)
        text = self.text[:i - 1] + ch + self.text[i - 1:]
        labels = self.labels[:i - 1] + [self._fresh()] + self.labels[i - 1:]
        letter = self.W.insert(ch).sid
        h = self.W.assemble([(self.h.sid, 0, i - 1), (letter, 0, 1), (self.h.sid, i - 1, n)])
        self._commit(Edit.insert(n, i), text, labels, StrHandle(h))

    def delete(self, i: int) -> None:
        """Remove ``T[i]`` (the sentinel cannot be removed)."""
        n = self.n
        if not 1 <= i < n:
            raise IndexError(f"delete position {i} outside [1..{n - 1}]")
        text = self.text[:i - 1] + self.text[i:]
        labels = self.labels[:i - 1] + self.labels[i:]
        h = self.W.assemble([(self.h.sid, 0, i - 1), (self.h.sid, i, n)])
        self._commit(Edit.delete(n, i), text, labels, StrHandle(h))

    def swap(self, i: int, j: int, k: int) -> None:
        """Exchange the adjacent blocks ``T[i..j)`` and ``T[j..k)``."""
        n = self.n
        if not 1 <= i <= j <= k <= n:
            raise IndexError(f"swap needs 1 <= i <= j <= k <= {n}, got {i}, {j}, {k}")
        if i == j or j == k:
            return
        t = self.text
        text = t[:i - 1] + t[j - 1:k - 1] + t[i - 1:j - 1] + t[k - 1:]
        lab = self.labels
        labels = lab[:i - 1] + lab[j - 1:k - 1] + lab[i - 1:j - 1] + lab[k - 1:]
        sid = self.h.sid
        h = self.W.assemble([(sid, 0, i - 1), (sid, j - 1, k - 1), (sid, i - 1, j - 1), (sid, k - 1, n)])
        self._commit(Edit.swap(n, i, j, k), text, labels, StrHandle(h))

    def _commit(self, edit: Edit, text: str, labels: list[int], h: StrHandle) -> None:
        old_text, old_labels = self.text, self.labels
        n_old, n = len(old_text), len(text)
        # base contexts: drop the cut ones while the old text is at hand
        if n_old <= BASE + 1 or n <= BASE + 1:
            stale = None
        else:
            stale = set()
            for c in edit.cuts:
                stale.update((c - d - 1) % n_old + 1 for d in range(1, BASE))
            if edit.deleted is not None:
                stale.update((edit.deleted - d - 1) % n_old + 1 for d in range(BASE))
            for j in stale:
                entry = (cyclic(old_text, j, j + BASE), old_labels[j - 1])
                del self.ctx16[bisect_left(self.ctx16, entry)]
        self.text, self.labels, self.h = text, labels, h
        self._pos = None
        if stale is None:
            self.ctx16 = sorted((self.ctx(j, j + BASE), labels[j - 1]) for j in range(1, n + 1))
        else:
            fresh = [edit.map(j) for j in stale if j != edit.deleted]
            if edit.inserted is not None:
                fresh.append(edit.inserted)
            for j in fresh:
                insort(self.ctx16, (self.ctx(j, j + BASE), labels[j - 1]))
        view = self.view()
        for lv in self.levels.values():
            self._repair(lv, edit, old_labels, view)

    def _repair(self, lv: LevelIndex, edit: Edit, old_labels: list[int], view: TextView) -> None:
        tau = lv.tau
        n = self.n
        b = tau // 3
        # runs and their per-root entries
        kept: list[_Run] = []
        rekey: list[_Run] = []
        for run in lv.runs:
            if edit.breaks(run.p - 1, run.q - run.p + 3):
                self._remove_entries(lv, run)
                continue
            if run.key is not None and edit.breaks(run.p + run.e, lv.ctx):
                self._remove_point(lv, run)
                rekey.append(run)
            shift = edit.map(run.p) - run.p
            run.p += shift
            run.q += shift
            kept.append(run)
        known = {(r.p, r.q) for r in kept}
        for x in edit.seams:
            for r in runs_near(view, tau, x - 3 * b - 3, x + 3 * b + 3):
                if (r.p, r.q) not in known:
                    known.add((r.p, r.q))
                    run = _Run(r.p, r.q, r.per)
                    kept.append(run)
                    self._add_entries(lv, run)
        for run in rekey:
            full = run.p + run.e
            run.pt_label = self.labels[full - 1]
            lv.roots[run.key].points[run.type].insert(
                run.e, self.ctx(full, full + lv.ctx), run.pt_label)
        lv.runs = kept
        lv._sorted()
        # synchronizing positions and their points
        if 2 * tau > n:
            if lv.S:
                lv.S = []
                lv.sync_points = PointSet()
            return
        pts = lv.sync_points
        members = set()
        for s in lv.S:
            lab = old_labels[s - 1]
            if edit.breaks(s, 2 * tau):
                pts.delete(lab)
                continue
            if edit.breaks(s - lv.ctx, 2 * lv.ctx):
                pts.delete(lab)
            members.add(edit.map(s))
        runs = lv.tau_runs()
        for x in edit.seams:
            members.update(sync_candidates(view, tau, runs, x - 2 * tau - 1, x + 1))
        lv.S = sorted(members)
        for s in lv.S:
            if self.labels[s - 1] not in pts:
                self._add_sync_point(lv, s)

    # -- queries used by the suffix-array engine ------------------------------------

    def level(self, ell: int) -> LevelIndex:
        try:
            return self.levels[ell]
        except KeyError:
            raise ValueError(f"no level for ell={ell}") from None

    def base_rank16(self, r: int) -> tuple[int, int, int]:
        """``(label, #contexts < c, #contexts <= c)`` for the ``r``-th smallest context ``c``."""
        if not 1 <= r <= self.n:
            raise IndexError(f"rank {r} outside [1..{self.n}]")
        c, lab = self.ctx16[r - 1]
        lo = bisect_left(self.ctx16, (c,))
        hi = bisect_left(self.ctx16, (c + SENTINEL,))
        return lab, lo, hi

    def in_R(self, ell: int, j: int) -> bool:
        return self.level(ell).run_at(j) is not None

    def run_decomp(self, ell: int, j: int) -> RunDecomposition:
        lv = self.level(ell)
        run = lv.run_at(j)
        if run is None:
            raise ValueError(f"position {j} is not periodic at ell={ell}")
        per = run.per
        s = (run.head - (j - run.p)) % per
        rend = run.q + 1
        k, tail = divmod(rend - j - s, per)
        return RunDecomposition(per, s, k, tail, rend, run.type, run.key)

    def sync_succ(self, ell: int, j: int) -> int:
        lv = self.level(ell)
        idx = bisect_left(lv.S, j)
        if idx < len(lv.S):
            return lv.S[idx]
        return self.n - 2 * lv.tau + 2

    def ss_count(self, ell: int, i: int, q_l: int, q_r: int) -> tuple[int, int]:
        """String-string counts for ``X_l = rev(T^inf[i-q_l..i))`` and ``Y_l = T^inf[i..i+q_r)``."""
        pts = self.level(ell).sync_points
        xl = self.ctx(i - q_l, i)[::-1]
        yl = self.ctx(i, i + q_r)
        return pts.rcount(xl, xl + TOP, yl), pts.rcount(xl, xl + TOP, yl + TOP)

    def ss_select(self, ell: int, i: int, q_l: int, r: int) -> int:
        pts = self.level(ell).sync_points
        xl = self.ctx(i - q_l, i)[::-1]
        return self.unlabel(pts.rselect(xl, xl + TOP, r))

    def ss_query(self, ell: int, kind: str, *args):
        if kind == "count":
            return self.ss_count(ell, *args)
        if kind == "select":
            return self.ss_select(ell, *args)
        raise ValueError(f"unknown string-string query {kind!r}")

    def root_key(self, i: int, p: int) -> int:
        """Necklace key of the root with an occurrence ``T[i..i+p)``."""
        return self._root_key(i, p)[0]

    def periodic_query(self, ell: int, root, sign: int, kind: str, *args):
        """Queries on the per-root structures of one type.

        ``root`` is a key from :meth:`run_decomp` or an occurrence
        ``(i, p)``.  Kinds: ``is_count(x, i, q_r)`` returns the counts
        below ``Y_l``, below ``Y_l c^inf`` and in total; ``is_select(x, r)``
        returns a position; ``mcount(h, r, q)`` and ``mselect(h, r, c)``.
        """
        if sign not in (-1, 1):
            raise ValueError("sign must be -1 or +1")
        key = self.root_key(*root) if isinstance(root, tuple) else root
        sets = self.level(ell).root_sets(key)
        n = self.n
        if kind == "is_count":
            x, i, q_r = args
            if sets is None:
                return 0, 0, 0
            pts = sets.points[sign]
            y = self.ctx(i, i + q_r)
            return pts.rcount(x, n, y), pts.rcount(x, n, y + TOP), pts.rcount(x, n)
        if kind == "is_select":
            x, r = args
            if sets is None:
                raise ValueError("no periodic points for this root")
            return self.unlabel(sets.points[sign].rselect(x, n, r))
        if kind == "mcount":
            return 0 if sets is None else sets.intervals[sign].mcount(*args)
        if kind == "mselect":
            if sets is None:
                raise ValueError("no periodic intervals for this root")
            return sets.intervals[sign].mselect(*args)
        raise ValueError(f"unknown periodic query {kind!r}")

    # -- inspection -----------------------------------------------------------------

    def rebuilt(self) -> "TextIndex":
        """A from-scratch build of the current text over the same string family.

        Phrase boundaries and necklace representatives depend on the
        family's symbol history, so this (rather than a brand new index)
        is the reference an incrementally maintained index must equal.
        """
        other = object.__new__(TextIndex)
        other.sigma, other.capacity, other.W = self.sigma, self.capacity, self.W
        other.text, other.labels, other.h = self.text, list(self.labels), self.h
        other._next_label = self._next_label
        other._pos = None
        other.levels = {ell: LevelIndex(ell) for ell in self.levels}
        other._build()
        return other

    def snapshot(self) -> dict:
        """Position-based contents of every structure, for comparisons in tests."""
        W = self.W
        out = {"text": self.text, "ctx16": sorted((c, self.unlabel(lab)) for c, lab in self.ctx16)}
        for ell, lv in self.levels.items():
            roots = {}
            for key, sets in lv.roots.items():
                root = W.expand(StrHandle(key))
                for sign in (-1, 1):
                    pts = sorted((x, y, self.unlabel(lab)) for x, y, lab in sets.points[sign].points())
                    ivs = sorted((b, e, self.unlabel(lab)) for b, e, lab in sets.intervals[sign].intervals())
                    if pts or ivs:
                        roots[(root, sign)] = (pts, ivs)
            out[ell] = {
                "runs": [(r.p, r.q, r.per) for r in lv.runs],
                "heads": [(r.p, r.head, r.type, r.e) for r in lv.runs if r.key is not None],
                "S": list(lv.S),
                "sync_points": sorted((x, y, self.unlabel(lab))
                                      for x, y, lab in lv.sync_points.points()),
                "roots": roots,
            }
        return out


def tf_edit(index: TextIndex, op: str, *args) -> None:
    """``tf_edit(ix, "insert", i, code)``, ``"delete", i`` or ``"swap", i, j, k``."""
    if op == "insert":
        index.insert(*args)
    elif op == "delete":
        index.delete(*args)
    elif op == "swap":
        index.swap(*args)
    else:
        raise ValueError(f"unknown edit {op!r}")
