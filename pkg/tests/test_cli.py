import json

import numpy as np
import pytest
from click.testing import CliRunner

from pauli_duality.cli import _expected, default_suite, main, run_entry
from pauli_duality.circuit import CliffordCircuit
from pauli_duality.tableau import load_hamiltonian


@pytest.fixture
def runner():
    return CliRunner()


def _invoke(runner, args, **kw):
    result = runner.invoke(main, args, catch_exceptions=False, **kw)
    return result


class TestGenDualize:
    def test_gen_writes_hamiltonian(self, runner, tmp_path):
        out = tmp_path / "m.ham"
        res = _invoke(runner, ["gen", "toric2d", "3", "-o", str(out)])
        assert res.exit_code == 0
        t = load_hamiltonian(str(out))
        assert t.n == 18 and t.m == 18

    def test_dualize_produces_classical_dual(self, runner, tmp_path):
        ham = tmp_path / "m.ham"
        circ = tmp_path / "c.cliff"
        dual = tmp_path / "d.ham"
        _invoke(runner, ["gen", "toric2d", "2", "-o", str(ham)])
        res = _invoke(runner, ["dualize", "-i", str(ham), "-o", str(circ),
                               "-o2", str(dual)])
        assert res.exit_code == 0
        d = load_hamiltonian(str(dual), validate=False)
        assert d.X.max(initial=0) == 0
        c = CliffordCircuit.load(str(circ))
        assert len(c) > 0

    def test_dualize_skip_gauss(self, runner, tmp_path):
        ham = tmp_path / "m.ham"
        _invoke(runner, ["gen", "toric2d", "2", "-o", str(ham)])
        res = _invoke(runner, ["dualize", "-i", str(ham),
                               "-o", str(tmp_path / "c.cliff"),
                               "-o2", str(tmp_path / "d.ham"), "--skip-gauss"])
        assert res.exit_code == 0
        d = load_hamiltonian(str(tmp_path / "d.ham"), validate=False)
        assert d.X.max(initial=0) == 0

    def test_dualize_noncommuting_exits_2(self, runner, tmp_path):
        bad = tmp_path / "bad.ham"
        bad.write_text("PAULI-HAM v1\nn 1\n1.0 X\n1.0 Z\n")
        res = runner.invoke(
            main, ["dualize", "-i", str(bad), "-o", str(tmp_path / "c"),
                   "-o2", str(tmp_path / "d")]
        )
        assert res.exit_code == 2


class TestClassify:
    def test_report_json(self, runner, tmp_path):
        ham = tmp_path / "m.ham"
        dual = tmp_path / "d.ham"
        rep = tmp_path / "rep.json"
        _invoke(runner, ["gen", "toric2d", "3", "-o", str(ham)])
        _invoke(runner, ["dualize", "-i", str(ham),
                         "-o", str(tmp_path / "c"), "-o2", str(dual)])
        res = _invoke(runner, ["classify", "-i", str(dual), "--report", str(rep)])
        assert res.exit_code == 0
        data = json.loads(rep.read_text())
        assert data["header"]["tool"] == "pauli-duality"
        assert data["report"]["free_spins"] == 2
        kinds = [c["classification"] for c in data["report"]["components"]]
        assert kinds.count("IsingChainEndFields") == 2


class TestToricExplicit:
    def test_validate(self, runner, tmp_path):
        out = tmp_path / "c.cliff"
        res = _invoke(runner, ["toric-explicit", "--L", "3", "-o", str(out),
                               "--validate"])
        assert res.exit_code == 0
        c = CliffordCircuit.load(str(out))
        L = 3
        assert c.gate_counts()["CX"] == L**3 + 4 * L**2 - 2 * L - 9
        assert c.gate_counts()["H"] == L * L - 1


class TestSample:
    def test_shots_and_reproducibility(self, runner, tmp_path):
        out1, out2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        args = ["sample", "--model", "toric2d", "--L", "2", "--beta", "0.7",
                "--shots", "6", "--seed", "11"]
        _invoke(runner, args + ["-o", str(out1), "--circuit",
                                str(tmp_path / "p.cliff")])
        _invoke(runner, args + ["-o", str(out2)])
        lines1 = out1.read_text().splitlines()
        assert lines1 == out2.read_text().splitlines()
        assert len(lines1) == 6
        rec = json.loads(lines1[0])
        assert set(rec) == {"config", "energy", "component_energies"}
        assert len(rec["config"]) == 8 and set(rec["config"]) <= {"+", "-"}
        c = CliffordCircuit.load(str(tmp_path / "p.cliff"))
        assert len(c) > 0

    def test_beta_inf_ground_states(self, runner, tmp_path):
        out = tmp_path / "g.jsonl"
        res = _invoke(runner, ["sample", "--model", "toric2d", "--L", "2",
                               "--beta", "inf", "--shots", "8", "--seed", "0",
                               "-o", str(out)])
        assert res.exit_code == 0
        energies = [json.loads(l)["energy"] for l in out.read_text().splitlines()]
        assert all(e == energies[0] for e in energies)


class TestLindbladVerify:
    def test_pass_and_report(self, runner, tmp_path):
        out = tmp_path / "lv.jsonl"
        res = _invoke(runner, ["lindblad-verify", "--dim", "2", "--trials", "2",
                               "--seed", "9", "-o", str(out)])
        assert res.exit_code == 0
        recs = [json.loads(l) for l in out.read_text().splitlines()]
        assert recs[0]["record"] == "header" and recs[0]["seed"] == 9
        assert recs[-1]["record"] == "summary" and recs[-1]["failed"] == 0
        assert sum(r["record"] == "instance" for r in recs) == 2


class TestRegress:
    def test_default_suite_contents(self):
        suite = default_suite()
        assert ("toric2d", 20) in suite and ("haah", 9) in suite
        assert ("toric2d", 90) not in suite
        assert ("toric2d", 90) in default_suite(paper_scale=True)

    def test_run_entry_pass(self):
        rec = run_entry("xcube", 2)
        assert rec["status"] == "pass" and not rec["mismatches"]

    def test_expected_formulas(self):
        kinds, free = _expected("xcube", 3)
        assert free == 41
        kinds, free = _expected("subsystem_stabilizer", 4)
        assert free == 130

    def test_custom_suite(self, runner, tmp_path, monkeypatch):
        monkeypatch.setenv("PAULI_DUALITY_THREADS", "1")
        suite = tmp_path / "suite.json"
        suite.write_text(json.dumps([["toric2d", 2], ["xcube", 2]]))
        out = tmp_path / "r.jsonl"
        res = _invoke(runner, ["regress", "--suite", str(suite), "-o", str(out)])
        assert res.exit_code == 0
        recs = [json.loads(l) for l in out.read_text().splitlines()]
        assert recs[0]["version"]
        entries = [r for r in recs if r["record"] == "entry"]
        assert len(entries) == 2 and all(r["status"] == "pass" for r in entries)
        assert recs[-1] == {"record": "summary", "entries": 2, "failed": 0}

    def test_mismatch_exits_nonzero(self, runner, tmp_path, monkeypatch):
        import pauli_duality.cli as cli_mod

        monkeypatch.setenv("PAULI_DUALITY_THREADS", "1")
        monkeypatch.setattr(cli_mod, "_expected", lambda name, L: ({}, 99))
        suite = tmp_path / "suite.json"
        suite.write_text(json.dumps([["toric2d", 2]]))
        res = runner.invoke(main, ["regress", "--suite", str(suite)])
        assert res.exit_code == 1


class TestOracle:
    def test_toric2d_small(self, runner, tmp_path):
        out = tmp_path / "o.jsonl"
        res = _invoke(runner, ["oracle", "--model", "toric2d", "--L", "2",
                               "-o", str(out)])
        assert res.exit_code == 0
        recs = [json.loads(l) for l in out.read_text().splitlines()]
        checks = recs[-1]["checks"]
        assert checks["isospectral"]["pass"]
        assert checks["isospectral"]["max_dev"] < 1e-10
        assert checks["exact_mixture"]["pass"]
        assert checks["mutation_detected"]["pass"]
        assert recs[-1]["passed"]

    def test_ising_chain(self, runner):
        res = _invoke(runner, ["oracle", "--model", "ising_chain_open", "--L", "8"])
        assert res.exit_code == 0

    def test_too_large(self, runner):
        res = runner.invoke(main, ["oracle", "--model", "toric2d", "--L", "3"])
        assert res.exit_code != 0
