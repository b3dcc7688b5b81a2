import io
import subprocess
import sys

import pytest

from hypermon.cli import TraceFormatError, parse_trace_file, run

OD = "forall p1, p2. (out_p1 <-> out_p2) W !(in_p1 <-> in_p2)\n"
TRACES = "in\nout\n\nin\n-\n"


@pytest.fixture
def files(tmp_path):
    f = tmp_path / "od.hl"
    f.write_text(OD)
    t = tmp_path / "traces.txt"
    t.write_text(TRACES)
    return tmp_path, str(f), str(t)


def call(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdin=io.StringIO(stdin), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_parse_trace_file_examples():
    assert parse_trace_file("in\nout\n\nin\n-\n") == [
        (frozenset(["in"]), frozenset(["out"])),
        (frozenset(["in"]), frozenset()),
    ]
    assert parse_trace_file("a,b\na") == [(frozenset("ab"), frozenset("a"))]
    assert parse_trace_file("a # note\n# whole line\nb\n--\nb\n") == [(frozenset("a"), frozenset("b")), (frozenset("b"),)]


@pytest.mark.parametrize("text", ["# nothing\n", "", "\n\n", "a,,b\n", "1a\n", "a b\n"])
def test_parse_trace_file_errors(text):
    with pytest.raises(TraceFormatError):
        parse_trace_file(text)


def test_offline_violation(files):
    _, f, t = files
    assert call("-f", f, "-t", t) == (1, "VERDICT: VIOLATION trace=t2 event=1\n", "")


def test_oracle_same_line(files):
    _, f, t = files
    assert call("-f", f, "-t", t, "--oracle")[:2] == (1, "VERDICT: VIOLATION trace=t2 event=1\n")


def test_no_violation_and_stats(files):
    tmp, f, _ = files
    ok = tmp / "ok.txt"
    ok.write_text("in,out\n-\n\n-\n-\n")
    code, out, _ = call("-f", f, "-t", str(ok), "--stats")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "VERDICT: NO_VIOLATION"
    assert [l.split("=")[0] for l in lines[1:]] == [
        "STATS: sat_calls", "STATS: sat_calls_skipped", "STATS: variables_created",
        "STATS: clauses_created", "STATS: tree_nodes_created", "STATS: tree_hits",
    ]


def test_multiple_trace_files_number_globally(files):
    tmp, f, _ = files
    (tmp / "a.txt").write_text("in\nout\n")
    (tmp / "b.txt").write_text("in\n-\n")
    assert call("-f", f, "-t", str(tmp / "a.txt"), "-t", str(tmp / "b.txt"))[1] == "VERDICT: VIOLATION trace=t2 event=1\n"


@pytest.mark.parametrize("flags", [[], ["--no-tree"], ["--no-split"], ["--no-tree", "--no-split"]])
def test_check_agrees(files, flags):
    _, f, t = files
    assert call("-f", f, "-t", t, "--check", *flags)[0] == 1


def test_online_progress(files):
    _, f, _ = files
    code, out, _ = call("-f", f, "--online", "--stats", stdin="in\nout\n--\nin\n-\n--\n")
    assert code == 1
    assert out.splitlines()[:5] == [
        "PROGRESS: trace=t1 event=0 status=ok",
        "PROGRESS: trace=t1 event=1 status=ok",
        "PROGRESS: trace=t2 event=0 status=ok",
        "PROGRESS: trace=t2 event=1 status=violation",
        "VERDICT: VIOLATION trace=t2 event=1",
    ]


def test_online_check_and_oracle(files):
    _, f, _ = files
    assert call("-f", f, "--online", "--check", stdin="in\nout\n--\nin\n-\n")[0] == 1
    assert call("-f", f, "--online", "--oracle", stdin="in\nout\n--\nin\n-\n")[1] == "VERDICT: VIOLATION trace=t2 event=1\n"


def test_dump_cnf(files):
    tmp, f, t = files
    target = tmp / "out.cnf"
    assert call("-f", f, "-t", t, "--dump-cnf", str(target))[0] == 1
    header = target.read_text().splitlines()[0].split()
    assert header[:2] == ["p", "cnf"] and int(header[2]) > 0


def test_alphabet_flag(files):
    _, f, t = files
    assert call("-f", f, "-t", t, "--alphabet", "in,out,extra")[0] == 1
    assert call("-f", f, "-t", t, "--alphabet", "bad name")[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["-t", "x"],
        ["-f", "missing.hl", "-t", "missing.txt"],
        ["-f", "{f}"],
        ["-f", "{f}", "-t", "{t}", "--online"],
        ["-f", "{f}", "-t", "{t}", "--oracle", "--check"],
        ["-f", "{f}", "-t", "{bad}"],
        ["-f", "{bad}", "-t", "{t}"],
    ],
)
def test_usage_errors(files, argv):
    tmp, f, t = files
    bad = tmp / "bad.txt"
    bad.write_text("exists p. nope\n")
    argv = [a.format(f=f, t=t, bad=bad) for a in argv]
    code, out, _ = call(*argv)
    assert code == 2 and out == ""


def test_deterministic_output(files):
    _, f, t = files
    runs = {call("-f", f, "-t", t, "--stats") for _ in range(3)}
    assert len(runs) == 1


def test_module_entry_point(files):
    _, f, t = files
    proc = subprocess.run([sys.executable, "-m", "hypermon.cli", "-f", f, "-t", t], capture_output=True, text=True)
    assert proc.returncode == 1
    assert proc.stdout == "VERDICT: VIOLATION trace=t2 event=1\n"
