import pytest

from recspec.cli import main

DOC = """
actions a, b;
term step = a . b;
term cycle = <X | X = a . X>;
term still = <X | X = X>;
spec loop { X = a . X };
spec idle { X = X };
eq comm : P + Q = Q + P;
eq bad : X = a . X;
"""


@pytest.fixture()
def doc(tmp_path):
    p = tmp_path / "doc.pa"
    p.write_text(DOC)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_lts(doc, capsys):
    code, out, _ = run(capsys, "lts", doc, "cycle")
    assert code == 0
    assert "states: 1" in out and "0 a 0" in out


def test_lts_formats(doc, capsys):
    code, out, _ = run(capsys, "lts", doc, "step", "--format", "graph")
    assert code == 0
    assert out.strip() == "0 a 1\n1 b TICK"
    code, out, _ = run(capsys, "lts", doc, "step", "--format", "dot")
    assert code == 0
    assert out.startswith("digraph")


def test_lts_of_unproductive_recursion(doc, capsys):
    code, out, _ = run(capsys, "lts", doc, "still")
    assert code == 0
    assert "(no transitions)" in out


def test_guarded_exits_zero_either_way(doc, capsys):
    code, out, _ = run(capsys, "guarded", doc, "loop")
    assert code == 0 and out.strip() == "guarded"
    code, out, _ = run(capsys, "guarded", doc, "idle")
    assert code == 0 and "unguarded: cycle X ⇒ X" in out


def test_bisim(doc, capsys):
    code, out, _ = run(capsys, "bisim", doc, "cycle", "<Y | Y = a . a . Y>")
    assert code == 0 and "bisimilar" in out
    code, out, _ = run(capsys, "bisim", doc, "step", "a . a")
    assert code == 3
    assert "not bisimilar" in out and "distinguishing formula: <a><b>true" in out


def test_solve(doc, capsys):
    code, out, _ = run(capsys, "solve", doc, "idle")
    assert code == 0
    assert "4 solution(s)" in out
    assert "X=g0" in out and "X=g3" in out


def test_solve_budget(doc, capsys):
    code, _, err = run(capsys, "solve", doc, "idle", "--actions", "a,b",
                       "--budget", "3")
    assert code == 2
    assert "budget" in err


def test_check(doc, capsys):
    code, out, _ = run(capsys, "check", doc, "comm", "loop")
    assert code == 0 and out.strip() == "holds"
    code, out, _ = run(capsys, "check", doc, "bad", "idle")
    assert code == 3
    assert out.startswith("FAILS, witness X=")


def test_check_conditional(doc, capsys):
    code, out, _ = run(capsys, "check", doc, "bad", "idle", "--conditional")
    assert code == 3 and "FAILS" in out


def test_approx_and_compare(doc, capsys):
    code, out, _ = run(capsys, "approx", doc, "cycle", "--depth", "2",
                       "--format", "graph")
    assert code == 0 and out.strip() == "0 a 1\n1 a 2"
    code, out, _ = run(capsys, "compare", doc, "cycle", "--depth", "3")
    assert code == 0
    assert "depth 3: agree" in out


def test_universe_listing(capsys):
    code, out, _ = run(capsys, "universe")
    assert code == 0
    assert "4 members" in out and "g3: 0 a 0" in out
    code, out, _ = run(capsys, "universe", "--actions", "a,b")
    assert code == 0 and "16 members" in out


def test_corpus_runs_clean(capsys):
    code, out, _ = run(capsys, "corpus")
    assert code == 0
    assert "spec loop: guarded" in out
    assert "eq comm_plus under idle over U({a,b},1): holds" in out


def test_exit_code_parse_error(tmp_path, capsys):
    p = tmp_path / "bad.pa"
    p.write_text("actions a;\nterm t = a +;\n")
    code, _, err = run(capsys, "lts", str(p), "t")
    assert code == 1 and "parse error" in err


def test_exit_code_missing_file(capsys):
    code, _, err = run(capsys, "lts", "/definitely/not/here.pa", "t")
    assert code == 1 and "cannot read" in err


def test_exit_code_unknown_name(doc, capsys):
    code, _, err = run(capsys, "lts", doc, "nosuch")
    assert code == 2 and "no term named" in err
    code, _, err = run(capsys, "guarded", doc, "nosuch")
    assert code == 2
    code, _, err = run(capsys, "check", doc, "nosuch", "loop")
    assert code == 2


def test_exit_code_limit(doc, capsys):
    code, _, err = run(capsys, "bisim", doc, "<X | X = a . (X . b)>", "cycle",
                       "--limit", "40")
    assert code == 2 and "exceeded" in err
