import json
import subprocess
import sys

import pytest

from rsp import corpus
from rsp.bench import run_bench
from rsp.cli import main
from rsp.presentation import parse, serialize


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


@pytest.fixture
def q8_file(write):
    return write("q8.rsp", serialize(corpus.quaternion8()))


@pytest.fixture
def bs_file(write):
    return write("bs.rsp", serialize(corpus.baumslag_solitar(2)))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate(capsys, q8_file, write):
    assert run(capsys, "validate", q8_file)[0] == 0
    bad = write("bad.rsp", "rsp 1\ngen x1 block 1 order inf\ngen x2 block 2 order inf\n"
                           "gen x3 block 2 order inf\ncnj x2 x3 = x2^2\n")
    code, out, _ = run(capsys, "validate", bad)
    assert code == 1
    assert len(out.strip().splitlines()) == 1 and "type1" in out
    assert run(capsys, "validate", write("empty.rsp", ""))[0] == 2
    assert run(capsys, "validate", "/nonexistent/file.rsp")[0] == 2


def test_nf(capsys, q8_file, bs_file):
    code, out, _ = run(capsys, "nf", q8_file, "x1 x2 x1 x2")
    assert (code, out.strip()) == (0, "x1^2")
    assert run(capsys, "nf", q8_file, "1")[1].strip() == "1"
    code, out, err = run(capsys, "nf", bs_file, "x1 x2")
    assert code == 1 and out == ""
    assert "inconsistent" in err and "det=2" in err
    assert run(capsys, "nf", q8_file, "x9")[0] == 2


def test_check_non_polycyclic(capsys, bs_file):
    code, out, _ = run(capsys, "check", bs_file, "--method", "solv", "--json")
    assert code == 1
    [rep] = json.loads(out)["reports"]
    f = rep["failures"][0]
    assert (rep["verdict"], f["condition"], f["z"], f["det"]) == ("inconsistent", "5", "x2", 2)
    code, out, _ = run(capsys, "check", bs_file, "--method", "overlap")
    assert code == 1 and "det=2" in out


def test_check_both(capsys, write):
    fa = write("fa.rsp", serialize(corpus.free_abelian(3)))
    code, out, _ = run(capsys, "check", fa, "--method", "both", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["agree"] is True
    assert [r["method"] for r in doc["reports"]] == ["solv", "overlap"]
    tower = write("tower.rsp", serialize(corpus.random_tower(2, depth=10)))
    code, out, _ = run(capsys, "check", tower, "--method", "both")
    assert code == 0 and "agree: yes" in out


def test_check_abort_exit_code(capsys, q8_file, monkeypatch):
    big = corpus.ut(7, 2)
    path = q8_file.replace("q8.rsp", "ut7.rsp")
    with open(path, "w") as fh:
        fh.write(serialize(big))
    monkeypatch.setenv("RSP_STEP_LIMIT", "2")
    code, out, _ = run(capsys, "check", path)
    assert code == 2 and "aborted" in out


def test_exit_codes_do_not_depend_on_method(capsys, bs_file, q8_file):
    for f, want in [(bs_file, 1), (q8_file, 0)]:
        codes = {run(capsys, "check", f, "--method", m)[0] for m in ("solv", "overlap", "both")}
        assert codes == {want}


def test_gen(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "ut(4,3)")
    assert code == 0 and parse(out) == corpus.ut(4, 3)
    target = tmp_path / "t.rsp"
    assert run(capsys, "gen", "tower(3,4)", "-o", str(target))[0] == 0
    assert parse(target.read_text()) == corpus.random_tower(3, 4)
    assert run(capsys, "gen", "bogus(1)")[0] == 2


def test_bench(capsys, q8_file):
    code, out, _ = run(capsys, "bench", "--inputs", "ut(6,2)", q8_file, "--reps", "3", "--json")
    assert code == 0
    records = json.loads(out)["records"]
    assert len(records) == 4
    for r in records:
        assert set(r) == {"input", "gens", "method", "verdict", "ms", "steps"}
        assert r["ms"] >= 0 and r["steps"] >= 0 and r["verdict"] == "consistent"
    code, out, _ = run(capsys, "bench", "--inputs", "ut(6,2)")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 2
    assert "solv ms" in lines[0] and "overlap steps" in lines[0]


def test_bench_deterministic_except_timing():
    strip = [{k: v for k, v in r.to_dict().items() if k != "ms"}
             for r in run_bench(["ut(5,2)", "tower(4,5)"], reps=2)]
    again = [{k: v for k, v in r.to_dict().items() if k != "ms"}
             for r in run_bench(["ut(5,2)", "tower(4,5)"], reps=2)]
    assert strip == again


def test_single_generator_bench_is_fast():
    for r in run_bench(["free_abelian(1)", "cyclic(7)"], reps=3):
        assert r.ms < 1.0


def test_module_entry_point(q8_file):
    res = subprocess.run([sys.executable, "-m", "rsp", "nf", q8_file, "x2 x2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "x1^2"
