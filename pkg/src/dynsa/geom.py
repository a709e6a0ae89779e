"""Dynamic range counting and range selection over labelled points.

Points are ``(x, y, label)`` triples whose coordinates may come from any
totally ordered universe (integers, strings).  The store is a
weight-balanced search tree ordered by ``(y, label)`` in which every node
keeps the ``(x, label)`` pairs of its subtree in a sorted list.  Counting
points below a ``y`` threshold inside an ``x`` range walks one root-to-leaf
path and bisects the lists of the subtrees hanging to the left, and
selecting the ``r``-th smallest ``y`` inside an ``x`` range descends the tree
by the same counts.  Both take ``O(log^2 n)`` comparisons.

Deleted points are tombstoned and the tree is rebuilt once tombstones
outnumber live points; subtrees that lose weight balance after an
insertion are rebuilt in place.
"""

from __future__ import annotations

from bisect import bisect_left, insort
from typing import Any, Hashable

#: A key larger than every character, used to express "followed by c^inf".
TOP = "\U0010ffff"

_ALPHA = 0.72


class _Node:
    __slots__ = ("y", "label", "x", "alive", "left", "right", "size", "xs")

    def __init__(self, y, label, x) -> None:
        self.y = y
        self.label = label
        self.x = x
        self.alive = True
        self.left: _Node | None = None
        self.right: _Node | None = None
        self.size = 1
        self.xs: list = [(x, label)]


def _size(node: _Node | None) -> int:
    return node.size if node is not None else 0


def _count_x(node: _Node | None, xl, xr) -> int:
    if node is None:
        return 0
    xs = node.xs
    if xr is None:
        hi = len(xs)
    else:
        hi = bisect_left(xs, (xr,))
    lo = 0 if xl is None else bisect_left(xs, (xl,))
    return hi - lo if hi > lo else 0


class PointSet:
    """A multiset of labelled points supporting ``rcount`` and ``rselect``.

    ``xl``/``xr`` bounds of ``None`` mean unbounded.  Coordinates of one set
    must be mutually comparable; labels must be unique and comparable.
    """

    def __init__(self) -> None:
        self._root: _Node | None = None
        self._points: dict[Hashable, tuple[Any, Any]] = {}
        self._dead = 0

    def __len__(self) -> int:
        return len(self._points)

    def __contains__(self, label) -> bool:
        return label in self._points

    def point(self, label):
        x, y = self._points[label]
        return (x, y, label)

    def points(self) -> list[tuple]:
        return [(x, y, lab) for lab, (x, y) in self._points.items()]

    # -- updates ------------------------------------------------------------

    def insert(self, x, y, label) -> None:
        if label in self._points:
            raise ValueError(f"label {label!r} already present")
        self._points[label] = (x, y)
        key = (y, label)
        entry = (x, label)
        if self._root is None:
            self._root = _Node(y, label, x)
            return
        path = []
        node = self._root
        while node is not None:
            path.append(node)
            node.size += 1
            insort(node.xs, entry)
            node = node.left if key < (node.y, node.label) else node.right
        leaf = _Node(y, label, x)
        parent = path[-1]
        if key < (parent.y, parent.label):
            parent.left = leaf
        else:
            parent.right = leaf
        # rebuild the highest subtree that lost weight balance
        for depth, node in enumerate(path):
            limit = _ALPHA * node.size
            if _size(node.left) > limit or _size(node.right) > limit:
                rebuilt = self._build(self._collect(node))
                if depth == 0:
                    self._root = rebuilt
                else:
                    up = path[depth - 1]
                    if up.left is node:
                        up.left = rebuilt
                    else:
                        up.right = rebuilt
                    # tombstones dropped by the rebuild shrink ancestors
                    drop = node.size - _size(rebuilt)
                    if drop:
                        for anc in path[:depth]:
                            anc.size -= drop
                self._dead -= node.size - _size(rebuilt)
                break

    def delete(self, label) -> None:
        if label not in self._points:
            raise KeyError(f"label {label!r} not present")
        x, y = self._points.pop(label)
        key = (y, label)
        entry = (x, label)
        node = self._root
        while node is not None:
            xs = node.xs
            del xs[bisect_left(xs, entry)]
            nk = (node.y, node.label)
            if key == nk and node.alive:
                node.alive = False
                break
            # a dead node with an equal key was inserted earlier, so the
            # live copy sits in its right subtree
            node = node.left if key < nk else node.right
        self._dead += 1
        if self._dead > len(self._points):
            self._root = self._build(self._collect(self._root))
            self._dead = 0

    def _collect(self, node: _Node | None) -> list[_Node]:
        out: list[_Node] = []
        stack = []
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = node.left
            node = stack.pop()
            if node.alive:
                out.append(node)
            node = node.right
        return out

    def _build(self, nodes: list[_Node]) -> _Node | None:
        def rec(lo: int, hi: int) -> _Node | None:
            if lo >= hi:
                return None
            mid = (lo + hi) // 2
            node = nodes[mid]
            node.left = rec(lo, mid)
            node.right = rec(mid + 1, hi)
            node.size = 1 + _size(node.left) + _size(node.right)
            merged = []
            if node.left is not None:
                merged.extend(node.left.xs)
            merged.append((node.x, node.label))
            if node.right is not None:
                merged.extend(node.right.xs)
            merged.sort()
            node.xs = merged
            return node

        return rec(0, len(nodes))

    # -- queries --------------------------------------------------------------

    def rcount(self, xl=None, xr=None, yu=None, inclusive: bool = False) -> int:
        """Points with ``xl <= x < xr`` and ``y < yu`` (``<=`` if inclusive)."""
        if yu is None:
            return _count_x(self._root, xl, xr)
        total = 0
        node = self._root
        while node is not None:
            below = node.y <= yu if inclusive else node.y < yu
            if below:
                total += _count_x(node.left, xl, xr)
                if node.alive and (xl is None or xl <= node.x) and (xr is None or node.x < xr):
                    total += 1
                node = node.right
            else:
                node = node.left
        return total

    def rselect(self, xl, xr, r: int):
        """Label of a point with the ``r``-th smallest ``y`` in the x-range."""
        if r < 1 or r > _count_x(self._root, xl, xr):
            raise ValueError(f"rank {r} outside the x-range population")
        node = self._root
        while node is not None:
            c = _count_x(node.left, xl, xr)
            if r <= c:
                node = node.left
                continue
            r -= c
            if node.alive and (xl is None or xl <= node.x) and (xr is None or node.x < xr):
                if r == 1:
                    return node.label
                r -= 1
            node = node.right
        raise AssertionError("selection walked off the tree")


def p_update(points: PointSet, op: str, *args) -> None:
    """``p_update(s, "insert", x, y, label)`` or ``p_update(s, "delete", label)``."""
    if op == "insert":
        points.insert(*args)
    elif op == "delete":
        points.delete(*args)
    else:
        raise ValueError(f"unknown point-set operation {op!r}")


def rcount(points: PointSet, xl, xr, yu=None, inclusive: bool = False) -> int:
    return points.rcount(xl, xr, yu, inclusive)


def rselect(points: PointSet, xl, xr, r: int):
    return points.rselect(xl, xr, r)
