"""Deduplicating store of parse symbols and navigable parse-tree handles.

Symbols come in three shapes:

* ``letter(a)`` with level 0 and length 1,
* an explicit block of one to six child symbols,
* a power ``(child, m)`` with ``m >= 2`` copies of a single child.

A block whose children are all the same symbol is stored as a power, so
the two spellings of the same content share one id.  A block's level is
one more than the largest child level, which keeps every level of the
balanced parsing on its own layer of the tree.

Symbols that are *active* at their level (length at most ``2**(level//2)``)
get a per-level signature from a counter, so the active symbols of level
``k`` are numbered ``0, 1, 2, ...`` in order of creation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

LETTER = 0
BLOCK = 1
POWER = 2

KIND_NAMES = {LETTER: "letter", BLOCK: "block", POWER: "power"}

MAX_EXPLICIT = 6


class GrammarError(ValueError):
    """Raised on structurally invalid symbol content or arguments."""


def active_length(level: int) -> int:
    """Return ``d_k = 2**floor(k/2)``, the length cap for active symbols."""
    return 1 << (level >> 1)


class SymbolInfo(NamedTuple):
    kind: str
    deg: int
    level: int
    length: int


@dataclass(frozen=True)
class NodeHandle:
    """A node of the parse tree of some symbol.

    ``start``/``end`` delimit the half-open character interval of the
    root expansion spelled by this node.  ``parent`` links form a
    persistent list shared by all handles below the same ancestor.
    """

    symbol: int
    start: int
    end: int
    index: int | None = None
    parent: NodeHandle | None = None

    @property
    def frag(self) -> tuple[int, int]:
        return (self.start, self.end)


class Grammar:
    """Grow-only symbol store with structural deduplication."""

    def __init__(self) -> None:
        self.kind: list[int] = []
        # letter: the character; block: tuple of child ids; power: (child, m)
        self.payload: list = []
        self.level: list[int] = []
        self.length: list[int] = []
        self.sig: list[int | None] = []
        # prefix lengths for explicit blocks, None otherwise
        self._prefix: list[tuple[int, ...] | None] = []
        self._lookup: dict[tuple, int] = {}
        self._sig_counter: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self.kind)

    # -- insertion ---------------------------------------------------------

    def _add(self, key: tuple, kind: int, payload, level: int, length: int,
             prefix: tuple[int, ...] | None) -> int:
        sid = len(self.kind)
        self.kind.append(kind)
        self.payload.append(payload)
        self.level.append(level)
        self.length.append(length)
        self._prefix.append(prefix)
        if length <= active_length(level):
            nxt = self._sig_counter.get(level, 0)
            self._sig_counter[level] = nxt + 1
            self.sig.append(nxt)
        else:
            self.sig.append(None)
        self._lookup[key] = sid
        return sid

    def _check(self, sid: int) -> None:
        if not isinstance(sid, int) or sid < 0 or sid >= len(self.kind):
            raise GrammarError(f"unknown symbol id {sid!r}")

    def letter(self, a: int) -> int:
        key = (LETTER, a)
        sid = self._lookup.get(key)
        if sid is None:
            sid = self._add(key, LETTER, a, 0, 1, None)
        return sid

    def power(self, child: int, m: int) -> int:
        self._check(child)
        if m < 1:
            raise GrammarError("power multiplicity must be at least 1")
        if m == 1:
            return self.block((child,))
        key = (POWER, child, m)
        sid = self._lookup.get(key)
        if sid is None:
            sid = self._add(key, POWER, (child, m), self.level[child] + 1,
                            self.length[child] * m, None)
        return sid

    def block(self, children: Sequence[int]) -> int:
        """Insert a block of explicit children (detecting ``Y**m``)."""
        children = tuple(children)
        if not children:
            raise GrammarError("a block needs at least one child")
        first = children[0]
        if len(children) > 1 and all(c == first for c in children):
            return self.power(first, len(children))
        if len(children) > MAX_EXPLICIT:
            raise GrammarError(f"explicit blocks hold at most {MAX_EXPLICIT} symbols")
        key = (BLOCK,) + children
        sid = self._lookup.get(key)
        if sid is not None:
            return sid
        for c in children:
            self._check(c)
        level = 1 + max(self.level[c] for c in children)
        acc = 0
        prefix = [0]
        for c in children:
            acc += self.length[c]
            prefix.append(acc)
        return self._add(key, BLOCK, children, level, acc, tuple(prefix))

    def insert_symbol(self, content) -> int:
        """Insert ``("letter", a)``, ``("power", X, m)`` or a sequence of ids."""
        if isinstance(content, tuple) and content and content[0] == "letter":
            return self.letter(content[1])
        if isinstance(content, tuple) and content and content[0] == "power":
            return self.power(content[1], content[2])
        return self.block(content)

    # -- structural queries ------------------------------------------------

    def deg(self, sid: int) -> int:
        k = self.kind[sid]
        if k == LETTER:
            return 0
        if k == POWER:
            return self.payload[sid][1]
        return len(self.payload[sid])

    def info(self, sid: int) -> SymbolInfo:
        self._check(sid)
        return SymbolInfo(KIND_NAMES[self.kind[sid]], self.deg(sid),
                          self.level[sid], self.length[sid])

    def plen(self, sid: int, i: int) -> int:
        """Total expansion length of the first ``i`` children."""
        self._check(sid)
        d = self.deg(sid)
        if i < 0 or i > d:
            raise GrammarError(f"child count {i} outside [0..{d}]")
        k = self.kind[sid]
        if k == LETTER:
            return 0
        if k == POWER:
            return i * self.length[self.payload[sid][0]]
        return self._prefix[sid][i]

    def child(self, sid: int, i: int) -> int:
        """Return the id of the ``i``-th child (1-based)."""
        d = self.deg(sid)
        if i < 1 or i > d:
            raise GrammarError(f"child index {i} outside [1..{d}]")
        if self.kind[sid] == POWER:
            return self.payload[sid][0]
        return self.payload[sid][i - 1]

    def child_list(self, sid: int) -> list[int]:
        k = self.kind[sid]
        if k == LETTER:
            return []
        if k == POWER:
            c, m = self.payload[sid]
            return [c] * m
        return list(self.payload[sid])

    def expand(self, sid: int) -> list[int]:
        """Fully decompress a symbol (test and debugging helper)."""
        out: list[int] = []
        stack = [sid]
        kind, payload = self.kind, self.payload
        while stack:
            s = stack.pop()
            k = kind[s]
            if k == LETTER:
                out.append(payload[s])
            elif k == POWER:
                c, m = payload[s]
                stack.extend([c] * m)
            else:
                stack.extend(reversed(payload[s]))
        return out

    def access(self, sid: int, pos: int) -> int:
        """Character at 0-based offset ``pos`` of ``str(sid)``."""
        if pos < 0 or pos >= self.length[sid]:
            raise GrammarError(f"offset {pos} outside the expansion")
        kind, payload, length = self.kind, self.payload, self.length
        while True:
            k = kind[sid]
            if k == LETTER:
                return payload[sid]
            if k == POWER:
                c, _ = payload[sid]
                pos %= length[c]
                sid = c
                continue
            for c in payload[sid]:
                lc = length[c]
                if pos < lc:
                    sid = c
                    break
                pos -= lc

    # -- parse-tree handles ------------------------------------------------

    def root(self, sid: int) -> NodeHandle:
        self._check(sid)
        return NodeHandle(sid, 0, self.length[sid])

    def node_child(self, h: NodeHandle, i: int) -> NodeHandle:
        sid = h.symbol
        c = self.child(sid, i)
        lo = h.start + self.plen(sid, i - 1)
        return NodeHandle(c, lo, lo + self.length[c], i, h)

    @staticmethod
    def node_parent(h: NodeHandle) -> NodeHandle | None:
        return h.parent

    @staticmethod
    def node_index(h: NodeHandle) -> int | None:
        return h.index

    def node_right(self, h: NodeHandle) -> NodeHandle | None:
        """The node right after ``h`` on the same tree level, if any."""
        up = 0
        cur = h
        while cur.parent is not None and cur.index == self.deg(cur.parent.symbol):
            cur = cur.parent
            up += 1
        if cur.parent is None:
            return None
        nxt = self.node_child(cur.parent, cur.index + 1)
        for _ in range(up):
            nxt = self.node_child(nxt, 1)
        return nxt

    def iter_level(self, sid: int, depth: int) -> Iterator[int]:
        """Yield the symbols ``depth`` levels below the root, left to right."""
        if depth == 0:
            yield sid
            return
        kind, payload = self.kind, self.payload
        if kind[sid] == POWER:
            c, m = payload[sid]
            for _ in range(m):
                yield from self.iter_level(c, depth - 1)
        else:
            for c in payload[sid]:
                yield from self.iter_level(c, depth - 1)
