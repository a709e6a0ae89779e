"""Modular constraint counting and selection over labelled intervals.

For a set of half-open integer intervals ``[b, e)`` the query
``mcount(h, r, q)`` counts the integers ``j`` covered by the intervals
(with multiplicity) such that ``j mod h == r`` and ``j // h <= q``.

An interval is handled as the difference of its two one-sided prefixes
``[0, e)`` and ``[0, b)``.  For a single prefix ``[0, e)`` write
``y = e // h`` and ``x = e % h``; the number of admissible ``j`` is
``min(y, q + 1) + [r < x and y <= q]``.  Summed over a set of endpoints
the first term needs the count and the sum of the ``y`` values up to
``q`` (a Fenwick tree over ``y``), and the second term is a dominance
count over the points ``(x, y)`` (a :class:`~dynsa.geom.PointSet`).
Both components are kept per ``h`` and built lazily on the first query
with that ``h``.
"""

from __future__ import annotations

from .geom import PointSet


class _Fenwick:
    """Counts and sums of nonnegative integer keys, growing on demand."""

    def __init__(self, size: int = 16) -> None:
        self.size = size
        self.cnt = [0] * (size + 1)
        self.tot = [0] * (size + 1)
        self.maxkey = -1

    def _grow(self, key: int) -> None:
        size = self.size
        while size <= key:
            size *= 2
        keys = []
        for y in range(self.size):
            c = self.count_le(y) - self.count_le(y - 1)
            if c:
                keys.append((y, c))
        self.size = size
        self.cnt = [0] * (size + 1)
        self.tot = [0] * (size + 1)
        for y, c in keys:
            self._add(y, c)

    def _add(self, key: int, c: int) -> None:
        i = key + 1
        while i <= self.size:
            self.cnt[i] += c
            self.tot[i] += c * key
            i += i & -i

    def add(self, key: int, c: int) -> None:
        if key >= self.size:
            self._grow(key)
        self.maxkey = max(self.maxkey, key)
        self._add(key, c)

    def _prefix(self, key: int) -> tuple[int, int]:
        if key < 0:
            return 0, 0
        i = min(key + 1, self.size)
        c = s = 0
        while i > 0:
            c += self.cnt[i]
            s += self.tot[i]
            i -= i & -i
        return c, s

    def count_le(self, key: int) -> int:
        return self._prefix(key)[0]

    def sum_le(self, key: int) -> int:
        return self._prefix(key)[1]

    def total(self) -> int:
        return self._prefix(self.size - 1)[0]


class _Side:
    """The two components for one endpoint side and one modulus."""

    def __init__(self, h: int) -> None:
        self.h = h
        self.ys = _Fenwick()
        self.pts = PointSet()

    def add(self, endpoint: int, label) -> None:
        y, x = divmod(endpoint, self.h)
        self.ys.add(y, 1)
        self.pts.insert(x, y, label)

    def remove(self, endpoint: int, label) -> None:
        y, _ = divmod(endpoint, self.h)
        self.ys.add(y, -1)
        self.pts.delete(label)

    def terms(self, r: int, q: int) -> tuple[int, int]:
        """``(sum of min(y, q+1), #{x > r and y <= q})`` over the endpoints."""
        c_le, s_le = self.ys._prefix(q)
        first = s_le + (q + 1) * (self.ys.total() - c_le)
        second = self.pts.rcount(r + 1, None, q, inclusive=True)
        return first, second

    def count(self, r: int, q: int) -> int:
        a, b = self.terms(r, q)
        return a + b


class IntervalSet:
    """Labelled intervals ``[b, e)`` with modular counting and selection."""

    def __init__(self) -> None:
        self._items: dict = {}
        self._cache: dict[int, tuple[_Side, _Side]] = {}

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, label) -> bool:
        return label in self._items

    def intervals(self) -> list[tuple[int, int, object]]:
        return [(b, e, lab) for lab, (b, e) in self._items.items()]

    def insert(self, b: int, e: int, label) -> None:
        if label in self._items:
            raise ValueError(f"label {label!r} already present")
        if not 0 <= b <= e:
            raise ValueError(f"bad interval [{b}, {e})")
        self._items[label] = (b, e)
        for left, right in self._cache.values():
            left.add(b, label)
            right.add(e, label)

    def delete(self, label) -> None:
        if label not in self._items:
            raise KeyError(f"label {label!r} not present")
        b, e = self._items.pop(label)
        for left, right in self._cache.values():
            left.remove(b, label)
            right.remove(e, label)

    def _sides(self, h: int) -> tuple[_Side, _Side]:
        sides = self._cache.get(h)
        if sides is None:
            left, right = _Side(h), _Side(h)
            for label, (b, e) in self._items.items():
                left.add(b, label)
                right.add(e, label)
            sides = self._cache[h] = (left, right)
        return sides

    def decomposition(self, h: int, r: int, q: int) -> dict[str, tuple[int, int]]:
        """Per-side ``(min-sum, dominance)`` terms, for inspection in tests."""
        left, right = self._sides(h)
        return {"right": right.terms(r, q), "left": left.terms(r, q)}

    def mcount(self, h: int, r: int, q: int) -> int:
        if h < 1 or not 0 <= r < h:
            raise ValueError(f"need h >= 1 and 0 <= r < h, got h={h}, r={r}")
        if q < 0 or not self._items:
            return 0
        left, right = self._sides(h)
        return right.count(r, q) - left.count(r, q)

    def mselect(self, h: int, r: int, c: int) -> int:
        """Smallest ``q`` with ``mcount(h, r, q) >= c``."""
        if h < 1 or not 0 <= r < h:
            raise ValueError(f"need h >= 1 and 0 <= r < h, got h={h}, r={r}")
        _, right = self._sides(h)
        hi = max(right.ys.maxkey, 0)
        if c < 1 or c > self.mcount(h, r, hi):
            raise ValueError(f"rank {c} outside the admissible population")
        lo = 0
        while lo < hi:
            mid = (lo + hi) // 2
            if self.mcount(h, r, mid) >= c:
                hi = mid
            else:
                lo = mid + 1
        return lo


def i_update(intervals: IntervalSet, op: str, *args) -> None:
    """``i_update(s, "insert", b, e, label)`` or ``i_update(s, "delete", label)``."""
    if op == "insert":
        intervals.insert(*args)
    elif op == "delete":
        intervals.delete(*args)
    else:
        raise ValueError(f"unknown interval-set operation {op!r}")


def mcount(intervals: IntervalSet, h: int, r: int, q: int) -> int:
    return intervals.mcount(h, r, q)


def mselect(intervals: IntervalSet, h: int, r: int, c: int) -> int:
    return intervals.mselect(h, r, c)
