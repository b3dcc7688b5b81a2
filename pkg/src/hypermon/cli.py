"""Command-line front end.

Trace files hold one event per line: a comma-separated list of proposition
names, or ``-`` for the empty event. Blank lines separate traces and ``#``
starts a comment. A line holding only ``--`` also ends the current trace; with
``--online`` events are read from standard input and that is the only
separator that triggers the end-of-trace check before more input arrives.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

from .formula import SpecError, parse_spec, Spec
from .monitor import MonitorConfig, MonitorSession
from .semantics import Verdict, oracle_monitor

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_DISAGREE = 0, 1, 2, 3

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class TraceFormatError(ValueError):
    pass


def parse_event(line: str, lineno: int = 0) -> frozenset[str]:
    line = line.strip()
    if line == "-":
        return frozenset()
    props = [p.strip() for p in line.split(",")]
    for p in props:
        if not _NAME.match(p):
            raise TraceFormatError(f"line {lineno}: malformed proposition name {p!r}")
    return frozenset(props)


def parse_trace_file(text: str) -> list[tuple[frozenset[str], ...]]:
    traces: list[tuple[frozenset[str], ...]] = []
    current: list[frozenset[str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.strip() == "--":
            if current:
                traces.append(tuple(current))
                current = []
            continue
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue  # comment-only lines do not separate traces
        current.append(parse_event(line, lineno))
    if current:
        traces.append(tuple(current))
    if not traces:
        raise TraceFormatError("no traces")
    return traces


@dataclass
class RunReport:
    verdict: Verdict
    blame: tuple[str, int] | None = None
    stats: dict[str, int] = field(default_factory=dict)
    wall_time: float = 0.0

    def lines(self) -> list[str]:
        """Deterministic rendering; wall time is deliberately left out."""
        if self.blame is None:
            out = ["VERDICT: NO_VIOLATION"]
        else:
            out = [f"VERDICT: VIOLATION trace={self.blame[0]} event={self.blame[1]}"]
        out.extend(f"STATS: {k}={v}" for k, v in self.stats.items())
        return out


def _names(n: int) -> list[str]:
    return [f"t{k}" for k in range(1, n + 1)]


def _report(verdict: Verdict, names: Sequence[str], stats: dict[str, int] | None = None) -> RunReport:
    blame = (names[verdict.trace_index], verdict.event_index) if verdict.violation else None
    return RunReport(verdict, blame, dict(stats or {}))


def _online_traces(stream: TextIO) -> Iterable[list[frozenset[str]] | None]:
    """Yield events; ``None`` marks the end of a trace."""
    open_trace = False
    for lineno, raw in enumerate(stream, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "--":
            if not open_trace:
                raise TraceFormatError(f"line {lineno}: empty trace")
            open_trace = False
            yield None
            continue
        open_trace = True
        yield [parse_event(line, lineno)]
    if open_trace:
        yield None


def _run_online(spec: Spec, config: MonitorConfig, stream: TextIO, out: TextIO, progress: bool):
    """Feed events as they arrive; input after a violation is still read (the verdict is sticky)."""
    session = MonitorSession(spec, config)
    seen: list[tuple] = []
    events: list[frozenset[str]] = []
    for item in _online_traces(stream):
        if item is None:
            session.end_trace()
            seen.append(tuple(events))
            events = []
            continue
        if not events:
            session.begin_trace()
        e = item[0]
        events.append(e)
        already = session.verdict.violation
        verdict = session.feed_event(e)
        if progress and not already:
            status = "violation" if verdict.violation else "ok"
            print(f"PROGRESS: trace=t{session.trace_index + 1} event={len(events) - 1} status={status}", file=out)
    if not seen:
        raise TraceFormatError("no traces")
    return session, seen


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypermon", description="Monitor trace sets against a forall-two HyperLTL formula.")
    p.add_argument("-f", "--formula", required=True, help="file holding the specification")
    p.add_argument("-t", "--trace", action="append", default=[], help="trace file (repeatable)")
    p.add_argument("--online", action="store_true", help="read events from standard input")
    p.add_argument("--oracle", action="store_true", help="use the brute-force oracle instead of the monitor")
    p.add_argument("--check", action="store_true", help="run monitor and oracle, exit 3 if they disagree")
    p.add_argument("--no-tree", action="store_true", help="disable the node tree")
    p.add_argument("--no-split", action="store_true", help="disable conjunct splitting")
    p.add_argument("--stats", action="store_true", help="print STATS lines")
    p.add_argument("--dump-cnf", metavar="FILE", help="write the final clause set in DIMACS format")
    p.add_argument("--alphabet", default="", help="comma-separated extra propositions")
    return p


def run(argv: Sequence[str] | None = None, stdin: TextIO | None = None, stdout: TextIO | None = None,
        stderr: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    def usage(msg: str) -> int:
        print(f"hypermon: error: {msg}", file=stderr)
        return EXIT_USAGE

    if args.online == bool(args.trace):
        return usage("give either --trace files or --online")
    if args.oracle and (args.check or args.dump_cnf):
        return usage("--oracle cannot be combined with --check or --dump-cnf")
    try:
        with open(args.formula, encoding="utf-8") as fh:
            spec = parse_spec(fh.read())
        extra = frozenset(parse_event(args.alphabet)) if args.alphabet.strip() else frozenset()
        config = MonitorConfig(
            node_tree=not args.no_tree,
            split=not args.no_split,
            alphabet=extra,
            stats=args.stats,
        )
        spec = spec.with_alphabet(extra)
        start = time.perf_counter()
        session = None
        if args.online:
            if args.oracle:
                traces = parse_trace_file(stdin.read())
            else:
                session, traces = _run_online(spec, config, stdin, stdout, args.stats)
        else:
            traces = []
            for path in args.trace:
                with open(path, encoding="utf-8") as fh:
                    traces.extend(parse_trace_file(fh.read()))
    except (OSError, SpecError, TraceFormatError) as exc:
        return usage(str(exc))

    names = _names(len(traces))
    if args.oracle:
        report = _report(oracle_monitor(spec, traces), names)
    else:
        if session is None:
            session = MonitorSession(spec, config)
            for t in traces:
                session.begin_trace()
                for e in t:
                    if session.feed_event(e).violation:
                        break
                session.end_trace()
                if session.verdict.violation:
                    break
        verdict, stats = session.finish()
        report = _report(verdict, names, stats.as_dict() if args.stats else None)
        if args.dump_cnf:
            try:
                with open(args.dump_cnf, "w", encoding="utf-8") as fh:
                    fh.write(session.engine.to_dimacs())
            except OSError as exc:
                return usage(str(exc))
    report.wall_time = time.perf_counter() - start

    code = EXIT_VIOLATION if report.verdict.violation else EXIT_OK
    if args.check:
        expected = oracle_monitor(spec, traces)
        if expected.violation != report.verdict.violation:
            print(f"hypermon: monitor ({report.verdict}) and oracle ({expected}) disagree", file=stderr)
            code = EXIT_DISAGREE
    for line in report.lines():
        print(line, file=stdout)
    return code


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
