"""Batch front end for :class:`~dynsa.sa_engine.DynText`.

A script has one command per line; ``#`` starts a comment::

    ALPHA <sigma>
    INS <pos> <char>
    DEL <pos>
    SWAP <i> <j> <k>
    ACCESS <i>
    SA <i>
    ISA <j>
    COUNT <string>

Characters are printable ASCII: ``a..z`` are letters ``1..26``, then
``A..Z``, then the digits, then the remaining punctuation, each mapped
to the next code.  A character must map into ``[1..sigma)``.  Every
query prints ``= <integer>``; ``ACCESS`` prints the code of the letter.

Modes: ``apply`` runs the script, ``verify`` also checks every query
(and the full suffix array every ``--stride`` commands) against the
brute-force oracle, and ``bench`` prints per-command timing percentiles
as CSV, including a naive suffix sort for comparison.
"""

from __future__ import annotations

import argparse
import contextlib
import string
import sys
import time
from dataclasses import dataclass
from statistics import quantiles
from typing import Iterable, TextIO

from . import oracle
from .sa_engine import DynText

LETTERS = (string.ascii_lowercase + string.ascii_uppercase + string.digits
           + "".join(c for c in string.punctuation if c != "#"))
CODE = {c: k for k, c in enumerate(LETTERS, 1)}

_ARITY = {"ALPHA": 1, "INS": 2, "DEL": 1, "SWAP": 3, "ACCESS": 1, "SA": 1, "ISA": 1, "COUNT": 1}
QUERIES = ("ACCESS", "SA", "ISA", "COUNT")


class ScriptError(ValueError):
    """A malformed script line or a command the library rejected."""


@dataclass(frozen=True)
class Command:
    line: int
    op: str
    args: tuple


def parse_script(lines: Iterable[str]) -> list[Command]:
    """Parse a script; raises :class:`ScriptError` naming the offending line."""
    out = []
    for no, raw in enumerate(lines, 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        op, *fields = body.split()
        op = op.upper()
        if op not in _ARITY:
            raise ScriptError(f"line {no}: unknown command {op!r}")
        if len(fields) != _ARITY[op]:
            raise ScriptError(f"line {no}: {op} takes {_ARITY[op]} argument(s), got {len(fields)}")
        try:
            if op == "INS":
                args = (int(fields[0]), _code(fields[1], no))
            elif op == "COUNT":
                args = (tuple(_code(c, no) for c in fields[0]),)
            else:
                args = tuple(int(f) for f in fields)
        except ValueError as exc:
            if isinstance(exc, ScriptError):
                raise
            raise ScriptError(f"line {no}: expected integer arguments in {body!r}") from None
        out.append(Command(no, op, args))
    return out


def _code(ch: str, line: int) -> int:
    if len(ch) != 1 or ch not in CODE:
        raise ScriptError(f"line {line}: {ch!r} is not a single printable character")
    return CODE[ch]


class Runner:
    """Executes parsed commands against a :class:`DynText`."""

    def __init__(self) -> None:
        self.text: DynText | None = None

    def _need(self, cmd: Command) -> DynText:
        if self.text is None:
            raise ScriptError(f"line {cmd.line}: ALPHA must come before {cmd.op}")
        return self.text

    def execute(self, cmd: Command) -> int | None:
        try:
            if cmd.op == "ALPHA":
                self.text = DynText(cmd.args[0])
                return None
            d = self._need(cmd)
            if cmd.op == "INS":
                d.insert(*cmd.args)
            elif cmd.op == "DEL":
                d.delete(*cmd.args)
            elif cmd.op == "SWAP":
                d.swap(*cmd.args)
            elif cmd.op == "ACCESS":
                return d.access(*cmd.args)
            elif cmd.op == "SA":
                return d.sa(*cmd.args)
            elif cmd.op == "ISA":
                return d.isa(*cmd.args)
            elif cmd.op == "COUNT":
                return d.count(list(cmd.args[0]))
        except ScriptError:
            raise
        except (ValueError, IndexError) as exc:
            raise ScriptError(f"line {cmd.line}: {exc}") from None
        return None

    def plain(self) -> str:
        return "".join(map(chr, self.text.text())) if self.text is not None else ""


def expected(plain: str, cmd: Command) -> int:
    """The oracle's answer to a query on the plain text."""
    if cmd.op == "ACCESS":
        return ord(plain[cmd.args[0] - 1])
    if cmd.op == "SA":
        return oracle.sa(plain)[cmd.args[0] - 1]
    if cmd.op == "ISA":
        return oracle.isa(plain)[cmd.args[0] - 1]
    pat = "".join(map(chr, cmd.args[0]))
    return sum(1 for i in range(1, len(plain) + 1) if oracle.cyc(plain, i, i + len(pat)) == pat)


def run_apply(cmds: list[Command], out: TextIO) -> int:
    r = Runner()
    for cmd in cmds:
        val = r.execute(cmd)
        if cmd.op in QUERIES:
            out.write(f"= {val}\n")
    return 0


def run_verify(cmds: list[Command], out: TextIO, err: TextIO, stride: int = 1) -> int:
    r = Runner()
    for step, cmd in enumerate(cmds, 1):
        val = r.execute(cmd)
        plain = r.plain()
        if cmd.op in QUERIES:
            want = expected(plain, cmd)
            out.write(f"= {val}\n")
            if val != want:
                err.write(f"line {cmd.line}: {cmd.op} gave {val}, oracle says {want}\n")
                return 1
        if stride and step % stride == 0 and r.text is not None:
            got = [r.text.sa(i) for i in range(1, r.text.n + 1)]
            want_sa = oracle.sa(plain)
            if got != want_sa:
                err.write(f"line {cmd.line}: suffix array differs from the oracle\n")
                return 1
            if [r.text.isa(j) for j in range(1, r.text.n + 1)] != oracle.isa(plain):
                err.write(f"line {cmd.line}: inverse suffix array differs from the oracle\n")
                return 1
    return 0


def _naive_sa(plain: str) -> list[int]:
    return sorted(range(1, len(plain) + 1), key=lambda i: plain[i - 1:])


def run_bench(cmds: list[Command], out: TextIO) -> int:
    r = Runner()
    samples: dict[str, list[int]] = {}
    sizes: dict[str, int] = {}

    def record(op: str, ns: int) -> None:
        samples.setdefault(op, []).append(ns)
        sizes[op] = max(sizes.get(op, 0), r.text.n if r.text is not None else 0)

    for cmd in cmds:
        t0 = time.perf_counter_ns()
        r.execute(cmd)
        record(cmd.op, time.perf_counter_ns() - t0)
        if cmd.op == "SA":
            plain = r.plain()
            t0 = time.perf_counter_ns()
            _naive_sa(plain)[cmd.args[0] - 1]
            record("SA_naive", time.perf_counter_ns() - t0)
    out.write("op,n,p50_ns,p99_ns\n")
    for op in sorted(samples):
        xs = sorted(samples[op])
        if len(xs) == 1:
            p50 = p99 = xs[0]
        else:
            cuts = quantiles(xs, n=100, method="inclusive")
            p50, p99 = cuts[49], cuts[98]
        out.write(f"{op},{sizes[op]},{int(p50)},{int(p99)}\n")
    return 0


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="dynsa", description="Dynamic suffix array scripts.")
    ap.add_argument("mode", choices=("apply", "verify", "bench"))
    ap.add_argument("script", nargs="?", default="-", help="script file, '-' for stdin")
    ap.add_argument("--stride", type=int, default=1,
                    help="verify: check the full SA and ISA every STRIDE commands (0 disables)")
    args = ap.parse_args(argv)
    src = sys.stdin if args.script == "-" else open(args.script, encoding="utf-8")
    try:
        with src if src is not sys.stdin else contextlib.nullcontext(src):
            cmds = parse_script(src)
        if args.mode == "apply":
            return run_apply(cmds, sys.stdout)
        if args.mode == "verify":
            return run_verify(cmds, sys.stdout, sys.stderr, args.stride)
        return run_bench(cmds, sys.stdout)
    except ScriptError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
