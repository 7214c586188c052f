import csv
import io

import pytest

from holevo_auth.cli import main


def body(text):
    """CSV body without the ``#`` manifest lines."""
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith("#"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestEntropy:
    def test_uniform_pair(self, capsys):
        assert run(capsys, "entropy", "--dist", "0.5,0.5")[:2] == (0, "H=1.0 Hmin=1.0 H0=1.0\n")

    def test_point_mass(self, capsys):
        assert run(capsys, "entropy", "--dist", "1.0")[1] == "H=0.0 Hmin=0.0 H0=0.0\n"

    def test_three_symbols(self, capsys):
        out = run(capsys, "entropy", "--dist", "0.7,0.2,0.1")[1]
        vals = dict(tok.split("=") for tok in out.split())
        assert float(vals["H"]) == pytest.approx(1.15678, abs=1e-5)
        assert float(vals["Hmin"]) == pytest.approx(0.51457, abs=1e-5)
        assert float(vals["H0"]) == pytest.approx(1.58496, abs=1e-5)

    def test_from_file(self, capsys, tmp_path):
        f = tmp_path / "d.txt"
        f.write_text("0.25\n0.25\n0.5\n")
        assert run(capsys, "entropy", "--file", str(f))[1].startswith("H=1.5 ")

    @pytest.mark.parametrize("dist", ["0.5,0.6", "0.5,x", "-0.5,1.5"])
    def test_malformed(self, capsys, dist):
        assert run(capsys, "entropy", "--dist", dist)[0] == 2


class TestHolevo:
    def write(self, tmp_path, text):
        f = tmp_path / "ens.txt"
        f.write_text(text)
        return str(f)

    def test_orthogonal(self, capsys, tmp_path):
        path = self.write(tmp_path, "0.5 | 1,0; 0,0; 0,0; 0,0\n0.5 | 0,0; 0,0; 0,0; 1,0\n")
        assert run(capsys, "holevo", path)[1].startswith("chi=1.0 ")

    def test_single_state(self, capsys, tmp_path):
        path = self.write(tmp_path, "# one component\n1.0 | 0.5,0; 0.5,0; 0.5,0; 0.5,0\n")
        assert run(capsys, "holevo", path)[1].startswith("chi=0.0 ")

    def test_zero_plus(self, capsys, tmp_path):
        path = self.write(tmp_path, "0.5 | 1,0; 0,0; 0,0; 0,0\n0.5 | 0.5,0; 0.5,0; 0.5,0; 0.5,0\n")
        out = run(capsys, "holevo", path)[1]
        assert float(out.split()[0].split("=")[1]) == pytest.approx(0.60088, abs=1e-5)

    def test_invalid_state_names_invariant(self, capsys, tmp_path):
        path = self.write(tmp_path, "1.0 | 1,0; 0,0; 0,0; 1,0\n")
        code, _, err = run(capsys, "holevo", path)
        assert code == 2 and "trace" in err

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "holevo", str(tmp_path / "nope.txt"))[0] == 2


class TestFano:
    @pytest.mark.parametrize("m, chi, expected", [("2", "0", "0.500000000"), ("2", "1", "0.000000000")])
    def test_exact(self, capsys, m, chi, expected):
        assert run(capsys, "fano", "--m", m, "--chi", chi)[1].strip() == expected

    def test_m4(self, capsys):
        assert float(run(capsys, "fano", "--m", "4", "--chi", "1")[1]) == pytest.approx(0.189, abs=1e-3)

    def test_invalid(self, capsys):
        assert run(capsys, "fano", "--m", "1", "--chi", "0")[0] == 2


def test_hash_test(capsys):
    code, out, _ = run(capsys, "hash-test", "--n", "8", "--d", "4", "--trials", "50000")
    assert code == 0 and "rate=" in out


class TestSimulate:
    def test_default_run(self, capsys, tmp_path):
        out_path = tmp_path / "run.csv"
        code, stdout, _ = run(capsys, "simulate", "--trials", "2000", "--out", str(out_path))
        assert code == 0
        text = out_path.read_text()
        assert text.startswith("# subcommand: simulate\n")
        for key in ("config", "seed", "output", "emitted_at"):
            assert f"# {key}: " in text
        rows = list(csv.DictReader(io.StringIO(body(text))))
        assert len(rows) >= 6 and all(r["pass"] in ("true", "vacuous") for r in rows)
        assert "security report" in stdout

    def test_full_leakage(self, capsys, tmp_path):
        cfg = tmp_path / "leak.cfg"
        cfg.write_text("q_leak = 1\n")
        code, out, err = run(capsys, "simulate", "--config", str(cfg), "--trials", "300")
        assert code == 0
        assert "Infeasible" in err and "keys issued 0" in err

    def test_deterministic_across_runs_and_threads(self, capsys, tmp_path):
        bodies = []
        for threads in ("1", "1", "3"):
            path = tmp_path / f"r{len(bodies)}.csv"
            run(capsys, "simulate", "--trials", "600", "--threads", threads, "--out", str(path))
            bodies.append(body(path.read_text()))
        assert bodies[0] == bodies[1] == bodies[2]

    def test_env_seed_override(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("HOLEVO_AUTH_SEED", "7")
        path = tmp_path / "env.csv"
        run(capsys, "simulate", "--trials", "100", "--seed", "1", "--out", str(path))
        assert "# seed: 7\n" in path.read_text()

    def test_bad_config(self, capsys, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("tag_bits = 12\n")
        assert run(capsys, "simulate", "--config", str(cfg))[0] == 2


class TestSweep:
    def test_three_values(self, capsys, tmp_path):
        code, _, _ = run(capsys, "sweep", "--param", "q_leak", "--values", "0,0.25,0.5",
                         "--trials", "300", "--out", str(tmp_path))
        assert code in (0, 1)
        single = [tmp_path / f"sweep_q_leak_{v}.csv" for v in ("0", "0.25", "0.5")]
        assert all(p.exists() for p in single)
        combined = list(csv.DictReader(io.StringIO(body((tmp_path / "sweep_q_leak.csv").read_text()))))
        per_run = len(list(csv.DictReader(io.StringIO(body(single[0].read_text())))))
        assert len(combined) == 3 * per_run
        assert {r["param_value"] for r in combined} == {"0", "0.25", "0.5"}

    def test_tag_bits_trend(self, capsys, tmp_path):
        run(capsys, "sweep", "--param", "tag_bits", "--values", "2,4,6,8",
            "--trials", "2000", "--out", str(tmp_path))
        rows = csv.DictReader(io.StringIO(body((tmp_path / "sweep_tag_bits.csv").read_text())))
        forge = [float(r["measured"]) for r in rows if r["bound_name"].startswith("p_forge")]
        assert forge == sorted(forge, reverse=True)

    def test_empty_values(self, capsys, tmp_path):
        assert run(capsys, "sweep", "--param", "q_leak", "--values", "", "--out", str(tmp_path))[0] == 2
