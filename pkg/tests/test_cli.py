import csv
import io
import json

import pytest
from click.testing import CliRunner

from cfentropy.cli import main


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, list(args), catch_exceptions=False)

    return invoke


def test_entropy_csv(run):
    res = run("entropy", "-a", "-1", "-b", "1")
    assert res.exit_code == 0
    rows = list(csv.reader(io.StringIO(res.output)))
    assert rows[0][:4] == ["a_num", "a_den", "b_num", "b_den"]
    assert rows[1][4].startswith("0.4812118250")
    assert rows[1][6] == "markov"


def test_entropy_json(run):
    res = run("entropy", "-a", "-1", "-b", "0", "--format", "json")
    doc = json.loads(res.output)
    assert doc["entropy"] == pytest.approx(0.3822450858, abs=1e-9)
    assert doc["cycle_witness"]["m_b"] is None


def test_entropy_lapcount(run):
    res = run("entropy", "-a", "-4/5", "-b", "2/5", "--method", "lapcount_only", "--depth", "16")
    assert res.exit_code == 0 and ",lapcount," in res.output


def test_invalid_inputs_exit_2(run):
    assert run("entropy", "-a", "0", "-b", "0").exit_code == 2
    assert run("entropy", "-a", "x", "-b", "0").exit_code == 2
    assert run("entropy", "-a", "-1").exit_code == 2
    assert run("verify", "nope").exit_code == 2
    assert run("sweep", "--a-range", "1:0").exit_code == 2
    assert run("recode", "--word", "35").exit_code == 2
    assert run("psi", "-x", "abc").exit_code == 2


def test_sweep_to_file_and_plot(run, tmp_path):
    out, fig = tmp_path / "s.csv", tmp_path / "s.png"
    res = run("sweep", "--a-range", "-1:-1/2", "--b-range", "1/2:1", "--step", "1/4",
              "--out", str(out), "--plot", str(fig))
    assert res.exit_code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 10
    assert fig.stat().st_size > 1000


def test_sweep_json(run):
    res = run("sweep", "--a-range", "-1:0", "--b-range", "0:1", "--step", "1/2", "--format", "json")
    doc = json.loads(res.output.split("\ngrid:")[0])
    assert doc["n_candidates"] == 9


def test_verify_gauss(run):
    res = run("verify", "gauss", "--seed", "7")
    assert res.exit_code == 0
    assert "seed 7: PASS" in res.output


def test_verify_failure_exit_1(run, monkeypatch):
    import cfentropy.verify as verify

    def broken(rep, seed):
        rep.add("always fails", False)

    monkeypatch.setitem(verify._SUITES, "gauss", broken)
    res = run("verify", "gauss")
    assert res.exit_code == 1
    assert "FAIL" in res.output


def test_psi(run):
    res = run("psi", "-x", "-1/2")
    lines = res.output.strip().splitlines()
    assert [ln.split("\t")[0] for ln in lines] == ["artin", "hurwitz"]
    assert float(lines[0].split("\t")[1]) == pytest.approx(-0.236068, abs=1e-6)
    assert run("psi", "-x", "inf", "--regime", "artin").exit_code == 0


def test_recode(run):
    res = run("recode", "--word", "3,7,6,2")
    assert res.exit_code == 0
    assert "hurwitz\t3512" in res.output
    assert "interval\t[-2/3, -1/2]" in res.output


def test_laps(run):
    res = run("laps", "-a", "-1", "-b", "1", "--depth", "6")
    assert res.output.splitlines()[:3] == ["1\t3", "2\t6", "3\t10"]
    res = run("laps", "--gauss", "--depth", "5")
    assert res.output.splitlines()[-1].startswith("entropy\t")


def test_help(run):
    res = run("--help")
    for cmd in ("entropy", "sweep", "conjectures", "verify", "psi", "recode", "laps"):
        assert cmd in res.output
