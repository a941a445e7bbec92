import subprocess
import sys

import pytest

from dedp.cli import run
from dedp.instance import parse_instance, parse_solution, verify_solution

from test_instance import G1_TEXT


@pytest.fixture
def g1_file(tmp_path):
    p = tmp_path / "g1.dedp"
    p.write_text(G1_TEXT)
    return p


def _with_d(path, d):
    text = path.read_text().replace("p dedp 5 4 2 4 1", f"p dedp 5 4 2 {d} 1")
    out = path.with_name(f"g1_d{d}.dedp")
    out.write_text(text)
    return out


@pytest.mark.parametrize("algo", ["oracle", "xp", "kernel"])
def test_solve_g1(algo, g1_file, tmp_path, capsys):
    out = tmp_path / f"{algo}.sol"
    assert run(["solve", "--algo", algo, "--in", str(g1_file), "--out", str(out)]) == 0
    assert capsys.readouterr().out.strip() == "yes"
    assert run(["verify", "--instance", str(g1_file), "--solution", str(out)]) == 0


def test_solve_negative(g1_file, capsys):
    assert run(["solve", "--algo", "kernel", "--in", str(_with_d(g1_file, 5))]) == 1
    assert capsys.readouterr().out.strip() == "no"


def test_verify_tampered_path(g1_file, tmp_path, capsys):
    sol = tmp_path / "bad.sol"
    sol.write_text("s yes\nx 1 2 4 5\nq 1 1 4\nq 2 2 3 5\n")
    assert run(["verify", "--instance", str(g1_file), "--solution", str(sol)]) == 1
    assert "(1, 4)" in capsys.readouterr().out


def test_stats_g1(g1_file, capsys):
    assert run(["stats", "--in", str(_with_d(g1_file, 1))]) == 0
    lines = dict(line.split(" ", 1) for line in capsys.readouterr().out.splitlines())
    assert lines["kernel_bound"] == "8" and lines["blocking"] == "1" and lines["nonterminals"] == "1"


def test_kernelize_reduced_with_trace(g1_file, tmp_path, capsys):
    out, trace = tmp_path / "k.dedp", tmp_path / "k.trace"
    assert run(["kernelize", "--in", str(_with_d(g1_file, 1)), "--out", str(out), "--trace", str(trace)]) == 0
    reduced = parse_instance(out.read_text())
    assert reduced.n == 4
    assert "e 1 4 : 3" in trace.read_text()


def test_format_error_exit_code(tmp_path):
    bad = tmp_path / "bad.dedp"
    bad.write_text("p dedp 3 1 0 0 0\na 3 3\n")
    assert run(["stats", "--in", str(bad)]) == 3


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        run(["solve"])
    assert exc.value.code == 2
    assert run(["gen", "--kind", "random", "--seed", "1"]) == 2


def test_missing_file_is_usage_error(tmp_path):
    assert run(["stats", "--in", str(tmp_path / "nope")]) == 2


def test_oracle_cap_exit_code(tmp_path):
    n = 8
    arcs = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v]
    text = f"p dedp {n} {len(arcs)} 1 1 0\n" + "".join(f"a {u} {v}\n" for u, v in arcs) + "r 1 2\n"
    f = tmp_path / "dense.dedp"
    f.write_text(text)
    assert run(["solve", "--algo", "oracle", "--in", str(f), "--limit", "10"]) == 4


def test_check_decomp(tmp_path, capsys):
    g = tmp_path / "c.dedp"
    g.write_text("p dedp 2 2 0 0 0\na 1 2\na 2 1\n")
    d = tmp_path / "c.dec"
    d.write_text("t 2\nn 1 0 w: 1\nn 2 1 w: 2\ng 2 x: 1\n")
    assert run(["check-decomp", "--graph", str(g), "--decomp", str(d)]) == 0
    assert capsys.readouterr().out.strip() == "width 1"
    d.write_text("t 2\nn 1 0 w: 1\nn 2 1 w: 2\n")
    assert run(["check-decomp", "--graph", str(g), "--decomp", str(d)]) == 1
    assert "guard" in capsys.readouterr().out


@pytest.mark.parametrize(
    "flags",
    [
        ["--kind", "random", "--n", "6", "--m", "9", "--k", "2", "--d", "2", "--s", "1", "--connected"],
        ["--kind", "ddpc", "--n", "4", "--m", "5", "--k", "2", "--s", "1"],
        ["--kind", "indset", "--n", "4", "--d", "2", "--s", "1"],
        ["--kind", "amplify", "--n", "4", "--m", "5", "--k", "2", "--d", "1", "--s", "1", "--connected"],
    ],
)
def test_gen_then_kernel_and_oracle_agree(flags, tmp_path, capsys):
    inst_file = tmp_path / "g.dedp"
    assert run(["gen", "--seed", "3", "--out", str(inst_file), *flags]) == 0
    inst = parse_instance(inst_file.read_text())
    answers = {}
    for algo in ("oracle", "kernel"):
        sol_file = tmp_path / f"{algo}.sol"
        answers[algo] = run(["solve", "--algo", algo, "--in", str(inst_file), "--out", str(sol_file)])
        if answers[algo] == 0:
            assert verify_solution(inst, parse_solution(sol_file.read_text()))
    assert answers["oracle"] == answers["kernel"]


def test_module_entry_point(g1_file):
    res = subprocess.run(
        [sys.executable, "-m", "dedp", "solve", "--algo", "xp", "--in", str(g1_file)],
        capture_output=True, text=True,
    )
    assert res.returncode == 0 and res.stdout.strip() == "yes"
