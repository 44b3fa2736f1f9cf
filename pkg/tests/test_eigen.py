import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qudit_readout.constants import K_B
from qudit_readout.eigen import (
    EigenSystem,
    Explicit,
    Pure,
    SpectralModel,
    Thermal,
    build_spectral_model,
    diagonalize,
    fix_phases,
    lambda_giant_spin_explicit,
    lambda_tensor,
    populations,
)
from qudit_readout.errors import DegeneracyWarning, InvalidArgumentError
from qudit_readout.model import (
    CouplingVector,
    FieldVector,
    GiantSpinConfig,
    coupling_operator,
    gdw30_config,
    hamiltonian,
    toy_field_for_xi,
    toy_s1_config,
)


def test_diagonalize_sorted_unitary_and_phase(rng):
    a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    es = diagonalize(a + a.conj().T)
    assert np.all(np.diff(es.energies) >= 0)
    np.testing.assert_allclose(es.vectors.conj().T @ es.vectors, np.eye(6), atol=1e-10)
    for col in es.vectors.T:
        k = np.argmax(np.abs(col))
        assert col[k].imag == 0 and col[k].real > 0


def test_diagonalize_rejects_non_hermitian():
    with pytest.raises(InvalidArgumentError):
        diagonalize(np.array([[0, 1], [0, 0]], dtype=complex))


def test_fix_phases_tie_goes_to_first():
    v = np.array([[1, 1], [-1, 1]], dtype=complex) / np.sqrt(2) * 1j
    out = fix_phases(v)
    assert out[0, 0].real > 0 and out[0, 0].imag == 0
    assert out[0, 1].real > 0 and out[0, 1].imag == 0


def test_toy_lambda_elements():
    cfg = toy_s1_config(2.87)
    sm = build_spectral_model(cfg, toy_field_for_xi(0.5), CouplingVector(0.0096, 0, 0))
    lam = np.abs(sm.coupling)
    # |Lambda| = lambda_x g_x / sqrt(2) between M=0 and M=+-1, zero between +-1
    np.testing.assert_allclose(lam[0, 1], 0.0192 / np.sqrt(2), rtol=1e-13)
    np.testing.assert_allclose(lam[0, 2], 0.0192 / np.sqrt(2), rtol=1e-13)
    assert lam[1, 2] < 1e-15


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([0.5, 1.0, 1.5, 3.5]), st.integers(0, 2**31))
def test_explicit_lambda_matches_tensor(s, seed):
    rng = np.random.default_rng(seed)
    g = tuple(rng.uniform(1, 3, 3))
    stevens = {(2, 0): rng.uniform(-1, 1), (2, 2): rng.uniform(-0.3, 0.3)} if s >= 1 else {}
    cfg = GiantSpinConfig(s=s, g=g, stevens=stevens)
    lam = CouplingVector(*rng.uniform(-1e-3, 1e-3, 3))
    es = diagonalize(hamiltonian(cfg, FieldVector(*rng.uniform(-0.3, 0.3, 3))))
    np.testing.assert_allclose(lambda_giant_spin_explicit(es, g, lam),
                               lambda_tensor(es, coupling_operator(cfg, lam)), atol=1e-15)


def test_explicit_lambda_needs_diagonal_g():
    es = diagonalize(hamiltonian(gdw30_config(), FieldVector(0, 0, 0.1)))
    g = np.diag([2.0, 2.0, 2.0])
    g[0, 1] = g[1, 0] = 0.1
    with pytest.raises(InvalidArgumentError):
        lambda_giant_spin_explicit(es, g, CouplingVector(1, 0, 0))


def test_populations():
    es = EigenSystem(np.array([0.0, 0.0, 1.0]), np.eye(3, dtype=complex))
    np.testing.assert_allclose(populations(es, Pure(2)), [0, 0, 1])
    np.testing.assert_allclose(populations(es, Thermal(0.0)), [0.5, 0.5, 0])
    np.testing.assert_allclose(populations(es, Thermal(np.inf)), [1 / 3] * 3)
    p = populations(es, Thermal(0.05))
    assert p[2] / p[0] == pytest.approx(np.exp(-1.0 / (K_B * 0.05)))
    np.testing.assert_allclose(populations(es, Explicit((1, 1, 2))), [0.25, 0.25, 0.5])
    with pytest.raises(InvalidArgumentError):
        populations(es, Pure(3))
    with pytest.raises(InvalidArgumentError):
        populations(es, Explicit((1, -1, 1)))


def test_spectral_model_weight_and_validation():
    es = EigenSystem(np.array([0.0, 1.0]), np.eye(2, dtype=complex))
    lam = np.array([[0, 1], [1, 0]], dtype=complex)
    sm = SpectralModel(es, lam, np.array([1.0, 0.0]), n=4.0)
    assert sm.weight == 4.0
    assert SpectralModel(es, lam, np.array([1.0, 0.0]), coupling_scales=(1.0, 2.0)).weight == 5.0
    with pytest.raises(InvalidArgumentError):
        SpectralModel(es, lam, np.array([1.0, 0.0]), eta=-1)
    with pytest.raises(InvalidArgumentError):
        SpectralModel(es, lam, np.array([1.0, 0.0]), n=0.5)
    np.testing.assert_allclose(sm.prepared(1).populations, [0, 1])


def test_degeneracy_warning():
    with pytest.warns(DegeneracyWarning):
        build_spectral_model(gdw30_config(), FieldVector(), CouplingVector(0, 1e-9, 0), warn_degenerate=True)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        build_spectral_model(gdw30_config(), FieldVector(0.1, 0, 0), CouplingVector(0, 1e-9, 0))
