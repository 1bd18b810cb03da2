import json
import subprocess
import sys

import numpy as np
import pytest

from bellspin.cli import main
from bellspin.config import ConfigError, RunConfig, parse_config
from bellspin.relax import RateMatrix, read_curve_csv
from bellspin.seq import shipped_program_path
from bellspin.spectra import read_spectrum_csv


def run(argv, tmp_path):
    return main(argv + ["--out", str(tmp_path)])


def test_prepare_ideal(tmp_path, capsys):
    assert run(["prepare", "S0"], tmp_path) == 0
    report = json.loads((tmp_path / "report_S0.json").read_text())
    assert report["fidelity"] >= 0.999
    dev = json.loads((tmp_path / "deviation_S0.json").read_text())
    assert np.array(dev["re"]).shape == (4, 4)
    trace = json.loads((tmp_path / "trace_S0.json").read_text())
    assert len(trace["states"]) == 11
    assert "fidelity" in capsys.readouterr().out


def test_prepare_with_rf_spread(tmp_path):
    assert run(["prepare", "psi_plus", "--rf-spread", "0.05"], tmp_path) == 0
    report = json.loads((tmp_path / "report_psi_plus.json").read_text())
    assert report["fidelity"] < 1
    assert report["ensemble_size"] == 200


def test_prepare_bogus_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as info:
        run(["prepare", "bogus"], tmp_path)
    assert info.value.code == 2


def test_tomo_outputs(tmp_path):
    assert run(["tomo", "S0"], tmp_path) == 0
    d = json.loads((tmp_path / "tomogram_S0.json").read_text())
    re = np.array(d["real"])
    assert d["labels"] == ["00", "01", "10", "11"]
    assert re[1, 2] == pytest.approx(-0.5, abs=1e-9) and re[2, 1] == pytest.approx(-0.5, abs=1e-9)
    assert re[1, 1] == pytest.approx(0.5, abs=1e-9) and re[2, 2] == pytest.approx(0.5, abs=1e-9)
    assert run(["tomo", "psi_plus"], tmp_path) == 0
    re = np.array(json.loads((tmp_path / "tomogram_psi_plus.json").read_text())["real"])
    assert re[0, 3] == pytest.approx(0.5, abs=1e-9) and re[3, 0] == pytest.approx(0.5, abs=1e-9)


def test_tomo_seed_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(["tomo", "T0", "--rf-spread", "0.05", "--seed", "11", "--out", str(d)]) == 0
    assert (a / "tomogram_T0.json").read_bytes() == (b / "tomogram_T0.json").read_bytes()


def _peaks(spec):
    lo = spec.amplitudes.real[np.argmin(np.abs(spec.offsets + 69))]
    hi = spec.amplitudes.real[np.argmin(np.abs(spec.offsets - 69))]
    return lo, hi


def test_spectrum_signs(tmp_path):
    for kind in ("S0", "psi_plus", "eq"):
        assert run(["spectrum", kind], tmp_path) == 0
    lo, hi = _peaks(read_spectrum_csv(tmp_path / "spectrum_S0.csv"))
    assert lo < 0 < hi
    lo, hi = _peaks(read_spectrum_csv(tmp_path / "spectrum_psi_plus.csv"))
    assert hi < 0 < lo
    lo, hi = _peaks(read_spectrum_csv(tmp_path / "spectrum_eq.csv"))
    assert lo == pytest.approx(hi, rel=1e-9)
    ga = json.loads((tmp_path / "ga_S0.json").read_text())["G_a"]
    assert ga > 0


def test_relax_and_fit(tmp_path, capsys):
    for kind in ("S0", "psi_plus"):
        assert run(["relax", kind], tmp_path) == 0
    curve = read_curve_csv(tmp_path / "decay_S0.csv")
    assert curve.times[0] == 0 and curve.times[-1] == 16 and len(curve.times) == 33
    capsys.readouterr()
    taus = {}
    for kind in ("S0", "psi_plus"):
        assert main(["fit", str(tmp_path / f"decay_{kind}.csv"), "--window", "6"]) == 0
        out = capsys.readouterr().out
        taus[kind] = float(out.split("tau_init = ")[1].split()[0])
        assert "residual" in out
    assert taus["S0"] == pytest.approx(2.4, rel=0.05)
    assert taus["psi_plus"] == pytest.approx(3.0, rel=0.05)


def test_uncoupled_config_fits_agree(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# no cross-correlation\ndelta1 = 0\ndelta2 = 0\n")
    taus = []
    for kind in ("S0", "psi_plus"):
        assert main(["relax", kind, "--config", str(cfg), "--out", str(tmp_path)]) == 0
        capsys.readouterr()
        assert main(["fit", str(tmp_path / f"decay_{kind}.csv")]) == 0
        taus.append(float(capsys.readouterr().out.split("tau_init = ")[1].split()[0]))
    assert taus[0] == pytest.approx(taus[1], abs=1e-6)
    assert taus[0] == pytest.approx(1 / 0.375, abs=1e-6)


def test_fit_negative_values_is_domain_error(tmp_path):
    f = tmp_path / "neg.csv"
    f.write_text("tau_s,ga\n0,1\n1,0.7\n2,-0.2\n3,0.3\n")
    assert main(["fit", str(f)]) == 3


def test_fit_unparseable_file(tmp_path):
    f = tmp_path / "junk.csv"
    f.write_text("hello\n")
    assert main(["fit", str(f)]) == 2


def test_run_shipped_equals_prepare(tmp_path):
    assert run(["prepare", "S0"], tmp_path) == 0
    assert run(["run", str(shipped_program_path("S0"))], tmp_path) == 0
    assert (tmp_path / "trace_bell_s0.json").read_bytes() == (tmp_path / "trace_S0.json").read_bytes()


def test_run_empty_program(tmp_path):
    f = tmp_path / "empty.seq"
    f.write_text("")
    assert run(["run", str(f)], tmp_path) == 0
    trace = json.loads((tmp_path / "trace_empty.json").read_text())
    assert len(trace["states"]) == 1 and trace["acquisitions"] == []


def test_run_with_acquisition(tmp_path):
    f = tmp_path / "fid.seq"
    f.write_text("pulse H 90 y\nacquire H 64 dwell=1e-3\n")
    assert run(["run", str(f)], tmp_path) == 0
    assert (tmp_path / "fid_fid_0.csv").read_text().startswith("t_s,re,im")


def test_run_invalid_program(tmp_path, capsys):
    f = tmp_path / "bad.seq"
    f.write_text("pulse H 90 y\n\npulse H 90 q\n")
    assert run(["run", str(f)], tmp_path) == 2
    assert "bad.seq:3:" in capsys.readouterr().err


@pytest.mark.parametrize(
    "text",
    ["J_hz = -138\n", "mu12 = 0\ndelta1 = 1\n", "B = zero\n", "colour = red\n", "just words\n", "J_hz = 1000\n"],
)
def test_bad_config_exit_1(tmp_path, text):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(text)
    assert main(["prepare", "S0", "--config", str(cfg), "--out", str(tmp_path)]) == 1
    assert not (tmp_path / "report_S0.json").exists()


def test_missing_config_exit_1(tmp_path):
    assert main(["prepare", "S0", "--config", str(tmp_path / "nope.cfg")]) == 1


def test_parse_config_values():
    cfg = parse_config("J_hz = 140\npoints=1024\namplitude_step = none\nmu1 = 0.5 # 1/s\n")
    assert cfg.J_hz == 140.0 and cfg.points == 1024 and isinstance(cfg.points, int)
    assert cfg.amplitude_step is None
    assert cfg.rate_matrix().mu1 == 0.5
    assert cfg.rate_matrix().mu12 == RateMatrix.calibrated(cfg.spin_system()).mu12
    with pytest.raises(ConfigError):
        parse_config("points = 2.5")


def test_default_config_matches_reference_values():
    cfg = RunConfig().validate()
    s = cfg.spin_system()
    assert s.J_hz == 138.0 and s.B == 11.7
    assert cfg.rf_error().ensemble_size == 1


def test_module_entry_point(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "bellspin", "prepare", "T0", "--out", str(tmp_path)],
        capture_output=True,
        text=True,
        check=False,
    )
    assert out.returncode == 0
    assert (tmp_path / "report_T0.json").exists()
