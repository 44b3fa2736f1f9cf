import numpy as np
import pytest

from qudit_readout.eigen import build_spectral_model
from qudit_readout.export import (
    SHIFT_COLUMNS,
    TRACE_COLUMNS,
    export_csv,
    export_shifts_csv,
    export_svg,
)
from qudit_readout.inout import CavityParams, transmission_spectrum
from qudit_readout.model import CouplingVector, toy_field_for_xi, toy_s1_config

CAV = CavityParams(2.6899, 4e-5, 4e-5)


@pytest.fixture
def trace():
    sm = build_spectral_model(toy_s1_config(2.87), toy_field_for_xi(0.5), CouplingVector(0.0096, 0, 0), eta=0.0094)
    return transmission_spectrum([2.6895, 2.6899, 2.6903], CAV, sm)


def test_trace_csv_layout(tmp_path, trace):
    path = export_csv([(0, trace)], tmp_path / "t.csv")
    raw = path.read_bytes()
    assert raw.endswith(b"\n") and b"\r" not in raw
    lines = raw.decode("utf-8").splitlines()
    assert lines[0] == ",".join(TRACE_COLUMNS)
    assert len(lines) == 4
    cols = lines[1].split(",")
    assert float(cols[0]) == 2.6895 and cols[-1] == "0"
    assert float(cols[3]) == pytest.approx(np.hypot(float(cols[1]), float(cols[2])))


def test_csv_roundtrip_exact(tmp_path, trace):
    path = export_csv([(2, trace)], tmp_path / "t.csv")
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    np.testing.assert_array_equal(data[:, 1] + 1j * data[:, 2], trace.t)


def test_shifts_csv(tmp_path):
    path = export_shifts_csv([1e-4 + 2e-6j, -3e-4], tmp_path / "s.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(SHIFT_COLUMNS)
    assert lines[1] == "0,0.0001,2e-06"
    assert lines[2].startswith("1,-0.0003,")


def test_deterministic_bytes(tmp_path, trace):
    a = export_csv([(0, trace)], tmp_path / "a.csv").read_bytes()
    b = export_csv([(0, trace)], tmp_path / "b.csv").read_bytes()
    assert a == b


def test_svg(tmp_path, trace):
    path = export_svg([("state 0", trace.omega_grid, trace.abs_t)], tmp_path / "p.svg")
    text = path.read_text()
    assert text.startswith("<svg") and "<polyline" in text and "href" not in text
    # empty and flat inputs still render
    export_svg([], tmp_path / "e.svg")
    export_svg([("flat", [1.0, 1.0], [0.0, 0.0])], tmp_path / "f.svg")


def test_unwritable_path(tmp_path, trace):
    with pytest.raises(OSError):
        export_csv([(0, trace)], tmp_path / "missing" / "t.csv")
