import json
import math

import numpy as np
import pytest

import pauli_scft as ps


def test_constants_and_tables():
    assert round(ps.pauli_strength(), 6) == 5.742468
    assert ps.default_modes(18) == 1200
    assert ps.shell_groups(11) == [2, 8, 1]
    assert ps.element_symbol(ps.atomic_number("ar")) == "Ar"
    lines = ps.reference_table_csv().splitlines()
    assert len(lines) == 19
    assert lines[-1].startswith("Ar,18,529.22,512.8")


def test_config_kwargs_and_parsing():
    cfg = ps.ScfConfig(beta=20, modes=200, mixer="linear")
    assert cfg.beta_schedule == [5.0, 10.0, 20.0]
    assert cfg.modes == 200
    assert cfg.mixer == "linear"
    cfg.mixer = "anderson"
    assert cfg.mixer == "anderson"
    assert ps.load_config('{"beta_schedule": [10, 80]}').beta_schedule == [10.0, 80.0]
    with pytest.raises(ValueError):
        ps.ScfConfig(colour="blue")


def test_hydrogen_run_and_outputs(tmp_path):
    rep, prof = ps.run_element("H")
    assert rep.converged
    assert abs(rep.binding - 0.5) < 1e-3
    assert rep.energy["binding"] == rep.binding
    assert len(rep.stages) == 5
    assert len(prof) == 512
    assert isinstance(prof.r, np.ndarray)
    assert prof.peak_count() == 1
    assert abs(prof.electron_count() - 1.0) < 1e-3

    back = ps.RunReport.from_json(rep.to_json())
    assert back.to_json() == rep.to_json()
    assert json.loads(rep.to_json())["symbol"] == "H"

    out = ps.write_outputs([rep], [prof], tmp_path)
    cols = ps.read_density_csv(out / "H_density.csv")
    assert list(cols) == ["r", "n_total", "rad_density", "n_g1"]
    r = np.array(cols["r"])
    rad = np.array(cols["rad_density"])
    assert abs(np.trapezoid(np.r_[0.0, rad], np.r_[0.0, r]) - 1.0) < 1e-3
    np.testing.assert_allclose(rad, 4 * math.pi * r**2 * np.array(cols["n_total"]), rtol=1e-12)

    rows = ps.read_comparison_csv(out / "comparison.csv")
    assert len(rows) == 1
    assert rows[0]["symbol"] == "H" and rows[0]["Z"] == 1
    assert rows[0]["nist"] == pytest.approx(0.4997332)
    assert rows[0]["pct_diff_paper"] == pytest.approx(0.05, abs=0.006)


def test_empty_comparison_is_header_only(tmp_path):
    path = tmp_path / "comparison.csv"
    path.write_text(ps.compare_table([]))
    assert path.read_text().strip() == ",".join(ps.COMPARISON_COLUMNS)
    assert ps.read_comparison_csv(path) == []


def test_failures_are_reported_not_raised():
    rep, prof = ps.run_element("Be", ps.ScfConfig(max_iters=1))
    assert not rep.converged
    assert "Be" in rep.error
    assert len(prof) == 0


def test_peak_count_on_arrays():
    r = np.linspace(0.01, 6, 800)
    two = 50 * r**2 * np.exp(-r / 0.1) + 0.5 * r**2 * np.exp(-r)
    assert ps.shell_peak_count(two) == 2
    with pytest.raises(ValueError):
        ps.shell_peak_count(np.ones(10))
