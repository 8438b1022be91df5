import io
import json

import pytest

from imgflib import mixture
from imgflib.cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, main, run_sweep, selfcheck

RAY_LOWER = 0.5179132265677134
BOB = json.dumps({"kind": "kappa-mu-shadowed", "kappa": 1.5, "mu": 2, "m": 2,
                  "mean_snr_db": 20})
EVE = json.dumps({"kind": "rayleigh", "mean_snr_db": 15})


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestSinglePoint:
    def test_imgf_point(self, capsys):
        code, out, _ = run(["imgf", "--model", "rayleigh", "--mean-snr-db", "0",
                            "--s", "-0.5", "--zeta", "1", "--tail", "lower"], capsys)
        assert code == EXIT_OK
        assert float(out.strip()) == pytest.approx(RAY_LOWER, abs=1e-9)

    def test_imgf_upper_deriv(self, capsys):
        code, out, _ = run(["imgf", "--model", "rayleigh", "--mean-snr-db", "0",
                            "--s", "-0.5", "--zeta", "1", "--tail", "upper",
                            "--deriv-order", "1"], capsys)
        assert code == EXIT_OK
        assert float(out.strip()) == pytest.approx(0.24792240016492203, abs=1e-9)

    def test_opsc(self, capsys):
        code, out, _ = run(["opsc", "--bob", BOB, "--eve", EVE, "--rate", "0.1"], capsys)
        assert code == EXIT_OK
        assert 0.0 < float(out.strip()) < 1.0

    def test_opsc_with_validation(self, capsys):
        code, out, _ = run(["opsc", "--bob", BOB, "--eve", EVE, "--rate", "0.1",
                            "--validate", "100000", "--seed", "4"], capsys)
        assert code == EXIT_OK
        assert "mc=" in out and "mc_std_error=" in out

    def test_capacity(self, capsys):
        code, out, _ = run(["capacity", "--channel",
                            json.dumps({"kind": "rayleigh", "mean_snr_db": 10})], capsys)
        assert code == EXIT_OK
        assert float(out.strip()) == pytest.approx(2.9794218653801097, rel=1e-6)

    def test_aber(self, capsys):
        code, out, _ = run(["aber", "--channel",
                            json.dumps({"kind": "rayleigh", "mean_snr_db": 9.0309}),
                            "--thresholds", "0", "--bits", "4"], capsys)
        assert code == EXIT_OK
        assert float(out.strip()) == pytest.approx(0.2 / (1 + 1.5 * 8.0 / 15.0), rel=1e-4)

    def test_bad_model_kind_exits_2(self, capsys):
        code, _, err = run(["imgf", "--model", "warp", "--mean-snr-db", "0",
                            "--s", "0", "--zeta", "1"], capsys)
        assert code == EXIT_CONFIG
        assert "warp" in err

    def test_bad_json_exits_2(self, capsys):
        code, _, _ = run(["opsc", "--bob", "{not json", "--eve", EVE,
                          "--rate", "0.1"], capsys)
        assert code == EXIT_CONFIG

    def test_numerical_failure_exits_3(self, capsys):
        # s at the MGF pole is a numerical-domain failure at evaluation time
        code, _, err = run(["imgf", "--model", "rayleigh", "--mean-snr-db", "0",
                            "--s", "5.0", "--zeta", "2", "--tail", "upper"], capsys)
        assert code == EXIT_CONFIG or code == EXIT_NUMERICAL
        assert err


class TestSweep:
    SPEC = {
        "metric": "opsc",
        "axis": {"field": "bob.mean_snr_db", "start": 0, "stop": 10, "step": 5,
                 "unit": "db"},
        "fixed": {
            "bob": {"kind": "kappa-mu-shadowed", "kappa": 1.5, "mu": 2, "m": 2,
                    "mean_snr_db": 0},
            "eve": {"kind": "rayleigh", "mean_snr_db": 15},
            "rate_rs": 0.1,
        },
        "output": {"path": "", "format": "csv"},
        "validate": {"n_samples": 50_000, "seed": 12},
    }

    def test_rows_sorted_and_complete(self):
        spec = json.loads(json.dumps(self.SPEC))
        rows = run_sweep(spec)
        assert [r["axis"] for r in rows] == [0.0, 5.0, 10.0]
        assert all(0.0 <= r["value"] <= 1.0 for r in rows)
        assert all("mc_estimate" in r for r in rows)

    def test_byte_identical_reruns(self, tmp_path, capsys):
        spec = json.loads(json.dumps(self.SPEC))
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        spec["output"]["path"] = str(out1)
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps(spec))
        assert main(["sweep", "--spec", str(spec_path)]) == EXIT_OK
        assert main(["sweep", "--spec", str(spec_path), "--out", str(out2)]) == EXIT_OK
        capsys.readouterr()
        assert out1.read_bytes() == out2.read_bytes()

    def test_json_output(self, tmp_path, capsys):
        spec = json.loads(json.dumps(self.SPEC))
        del spec["validate"]
        out = tmp_path / "rows.json"
        spec["output"] = {"path": str(out), "format": "json"}
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps(spec))
        assert main(["sweep", "--spec", str(spec_path)]) == EXIT_OK
        capsys.readouterr()
        rows = json.loads(out.read_text())
        assert len(rows) == 3 and {"axis", "curve", "value"} <= set(rows[0])

    def test_worker_pool_matches_serial(self, monkeypatch):
        spec = json.loads(json.dumps(self.SPEC))
        del spec["validate"]
        serial = run_sweep(json.loads(json.dumps(spec)))
        monkeypatch.setenv("IMGFLIB_WORKERS", "2")
        pooled = run_sweep(json.loads(json.dumps(spec)))
        assert pooled == serial

    def test_preset_runs(self, tmp_path, capsys):
        out = tmp_path / "fig8.csv"
        assert main(["sweep", "--preset", "fig8", "--out", str(out)]) == EXIT_OK
        capsys.readouterr()
        lines = out.read_text().strip().splitlines()
        assert lines[0].startswith("curve,")
        assert len(lines) > 10

    def test_bad_metric_exits_2(self, tmp_path, capsys):
        spec = json.loads(json.dumps(self.SPEC))
        spec["metric"] = "teleport"
        spec["output"]["path"] = str(tmp_path / "x.csv")
        p = tmp_path / "spec.json"
        p.write_text(json.dumps(spec))
        code = main(["sweep", "--spec", str(p)])
        capsys.readouterr()
        assert code == EXIT_CONFIG

    def test_numerical_failure_names_grid_point(self, tmp_path, capsys):
        spec = {
            "metric": "imgf",
            "axis": {"field": "s", "start": 0.0, "stop": 2.0, "step": 1.0,
                     "unit": "linear"},
            "fixed": {"model": {"kind": "rayleigh", "mean_snr_db": 0},
                      "s": 0.0, "zeta": 1.0, "tail": "upper"},
            "output": {"path": str(tmp_path / "x.csv"), "format": "csv"},
        }
        p = tmp_path / "spec.json"
        p.write_text(json.dumps(spec))
        code = main(["sweep", "--spec", str(p)])
        captured = capsys.readouterr()
        assert code == EXIT_NUMERICAL
        assert "s=" in captured.err


class TestSelfcheck:
    def test_passes_and_counts(self):
        buf = io.StringIO()
        assert selfcheck(out=buf) == EXIT_OK
        lines = [l for l in buf.getvalue().splitlines() if l]
        assert len(lines) >= 10  # at least one check per acceptance criterion
        assert all(l.startswith("PASS") for l in lines)

    def test_fault_injection_names_failure(self, monkeypatch):
        # corrupt one mixture coefficient and expect the named check to fail
        real = mixture.mixture_params

        def corrupt(kappa, mu, m, mean_snr):
            mix = real(kappa, mu, m, mean_snr)
            terms = list(mix.terms)
            c, omega, mi = terms[0]
            terms[0] = (c, omega * 1.01, mi)
            object.__setattr__(mix, "terms", tuple(terms))
            return mix

        monkeypatch.setattr(mixture, "mixture_params", corrupt)
        buf = io.StringIO()
        code = selfcheck(out=buf)
        text = buf.getvalue()
        assert code != EXIT_OK
        assert any(l.startswith("FAIL mixture-vs-cdf") for l in text.splitlines())

    def test_cli_entry(self, capsys):
        assert main(["selfcheck"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.count("PASS") >= 10
