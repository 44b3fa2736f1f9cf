import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qudit_readout.eigen import EigenSystem, Pure, SpectralModel, Thermal, build_spectral_model
from qudit_readout.errors import (
    DispersiveRegimeWarning,
    InvalidArgumentError,
    SingularEvaluationError,
    UnclassifiableError,
)
from qudit_readout.inout import (
    CavityParams,
    classify_s1_phase,
    dispersive_shift,
    field_sweep_fixed_frequency,
    guard_violations,
    line_width,
    parabolic_peak,
    phase_signs,
    self_energy,
    shift_table,
    transmission_amplitude,
    transmission_spectrum,
)
from qudit_readout.model import CouplingVector, toy_field_for_xi, toy_s1_config

D, OMEGA, LG = 2.87, 2.6899, 0.0192
CAV = CavityParams(OMEGA, 4e-5, 4e-5)


def toy(xi=0.5, eta=0.0, n=1.0, prep=Pure(0)):
    return build_spectral_model(toy_s1_config(D), toy_field_for_xi(xi), CouplingVector(LG / 2, 0, 0),
                                prep, n=n, eta=eta)


def two_level(delta=1.0, lam=1e-3, eta=0.0):
    es = EigenSystem(np.array([0.0, delta]), np.eye(2, dtype=complex))
    coupling = np.array([[0, lam], [lam, 0]], dtype=complex)
    return SpectralModel(es, coupling, np.array([1.0, 0.0]), eta=eta)


def test_cavity_validation():
    with pytest.raises(InvalidArgumentError):
        CavityParams(0.0, 1e-3, 1e-3)
    with pytest.raises(InvalidArgumentError):
        CavityParams(1.0, -1e-3, 1e-3)
    with pytest.raises(InvalidArgumentError):
        CavityParams(1.0, 0.0, 0.0)


def test_bare_cavity_on_resonance(kernel_backend):
    sm = two_level(lam=0.0)
    t = transmission_amplitude(OMEGA, CAV, sm)
    assert t == pytest.approx(-1.0 + 0j, abs=1e-14)


def test_transmission_spectrum_shapes():
    sm = toy(eta=1e-3)
    tr = transmission_spectrum(np.linspace(2.68, 2.70, 11), CAV, sm)
    assert len(tr) == 11 and tr.t.dtype == complex
    assert len(transmission_spectrum([], CAV, sm)) == 0
    with pytest.raises(InvalidArgumentError):
        transmission_spectrum([2.7, 2.69], CAV, sm)
    with pytest.raises(InvalidArgumentError):
        transmission_amplitude(np.nan, CAV, sm)


def test_phase_is_continuous():
    sm = toy(eta=0.0094)
    tr = transmission_spectrum(np.linspace(OMEGA - 2e-3, OMEGA + 2e-3, 2001), CAV, sm)
    assert np.max(np.abs(np.diff(tr.phase))) < np.pi


def test_exact_pole_raises():
    sm = two_level(delta=1.0)
    with pytest.raises(SingularEvaluationError):
        self_energy([1.0], sm)
    # any damping removes the singularity
    assert np.isfinite(self_energy([1.0], two_level(delta=1.0, eta=1e-6))).all()


def test_two_level_shift_closed_form(kernel_backend):
    delta, lam = 3.0, 2e-3
    sm = two_level(delta, lam)
    cav = CavityParams(2.0, 1e-5, 1e-5)
    expected = -2 * lam**2 * delta / (delta**2 - 2.0**2)
    assert dispersive_shift(0, sm, cav).real == pytest.approx(expected, rel=1e-13)
    assert dispersive_shift(1, sm, cav).real == pytest.approx(-expected, rel=1e-13)


def test_shift_table_exact_resonance_raises():
    with pytest.raises(SingularEvaluationError):
        shift_table(two_level(delta=2.0), CavityParams(2.0, 1e-5, 1e-5))


def test_guard_warning():
    sm = two_level(delta=2.0005, lam=1e-3)
    cav = CavityParams(2.0, 1e-5, 1e-5)
    assert guard_violations(sm, cav) == [(0, 1)]
    with pytest.warns(DispersiveRegimeWarning):
        table = shift_table(sm, cav)
    assert not table.ok


def test_ensemble_scaling():
    a = toy(eta=1e-3, n=50.0)
    b = SpectralModel(a.eigensystem, np.sqrt(50.0) * a.coupling, a.populations, 1.0, 1e-3)
    np.testing.assert_allclose(shift_table(a, CAV).shifts, shift_table(b, CAV).shifts, rtol=1e-13)


def test_line_width_and_peak():
    sm = toy(eta=0.0094)
    for beta in range(3):
        s = dispersive_shift(beta, sm.prepared(beta), CAV, at_omega=OMEGA)
        w = line_width(beta, sm.prepared(beta), CAV)
        assert w == pytest.approx(CAV.gamma + 2 * abs(s.imag))


def test_parabolic_peak():
    x = np.linspace(-1, 1, 21)
    y = 1 - (x - 0.033) ** 2
    xp, yp = parabolic_peak(x, y)
    assert xp == pytest.approx(0.033, abs=1e-12)
    assert yp == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(InvalidArgumentError):
        parabolic_peak([], [])


def test_thermal_preparation_mixes():
    hot = toy(eta=1e-3, prep=Thermal(np.inf))
    # equal populations cancel every pair contribution
    np.testing.assert_allclose(self_energy([OMEGA], hot), 0.0, atol=1e-20)


@pytest.mark.parametrize("signs, m", [(("+", "+"), -1), (("+", "-"), 1), (("-", "-"), 0), ((1, -1), 1)])
def test_truth_table(signs, m):
    assert classify_s1_phase(*signs) == m


def test_truth_table_rejects():
    with pytest.raises(UnclassifiableError):
        classify_s1_phase("-", "+")
    with pytest.raises(InvalidArgumentError):
        classify_s1_phase("x", "+")


def test_truth_table_from_simulated_phase():
    # at xi_z = 0.1 GHz the M=-1, M=+1, M=0 peaks sit high, middle, low
    sm = toy(xi=0.1, eta=0.0094)
    labels = {0: 0, 1: -1, 2: 1}
    center = OMEGA + dispersive_shift(2, sm, CAV, at_omega=OMEGA).real
    for beta, m in labels.items():
        left, right = phase_signs(CAV, sm.prepared(beta), center, 3e-5)
        assert classify_s1_phase(left, right) == m


def test_field_sweep():
    sweep = field_sweep_fixed_frequency(np.linspace(0.005, 0.02, 4), [0, 0, 1], CAV, toy_s1_config(D),
                                        CouplingVector(LG / 2, 0, 0), eta=1e-3)
    assert sweep.t.shape == (3, 4)
    assert np.all(sweep.abs_t <= CAV.peak_transmission + 1e-12)
    empty = field_sweep_fixed_frequency([], [0, 0, 1], CAV, toy_s1_config(D), CouplingVector(LG / 2, 0, 0))
    assert empty.states == ()


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 1.2), st.floats(1e-6, 1e-1), st.floats(1.0, 1e6), st.floats(-0.01, 0.01),
       st.floats(0.1, 10.0))
def test_ground_state_passive(xi, eta, n, dw, ratio):
    cav = CavityParams(OMEGA, 4e-5, 4e-5 * ratio)
    sm = toy(xi=xi, eta=eta, n=n)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        t = transmission_amplitude(OMEGA + dw, cav, sm)
    assert abs(t) <= cav.peak_transmission * (1 + 1e-12)
