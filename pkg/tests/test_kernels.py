import os
import subprocess
import sys

import numpy as np
import pytest

from qudit_readout import _kernels


def _random_hermitian(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (a + a.conj().T)


@pytest.mark.parametrize("d", [2, 5, 8])
def test_backends_agree(rng, d):
    lam = np.ascontiguousarray(_random_hermitian(rng, d) * 1e-3)
    e = np.sort(rng.uniform(-3, 3, d))
    omega = 2.3
    a = _kernels.second_order_numba(lam, e, omega, 1e-9)
    b = _kernels.second_order_numpy(lam, e, omega, 1e-9)
    for x, y in zip(a, b):
        np.testing.assert_allclose(x, y, atol=1e-15)

    lam2 = np.ascontiguousarray(np.abs(lam) ** 2)
    z = complex(omega, 1e-3)
    np.testing.assert_allclose(_kernels.state_shifts_numba(lam2, e, z, 7.0),
                               _kernels.state_shifts_numpy(lam2, e, z, 7.0), rtol=1e-13)

    w = np.linspace(2, 3, 257)
    e_pair = rng.uniform(-3, 3, 6)
    w_pair = rng.standard_normal(6)
    np.testing.assert_allclose(_kernels.self_energy_numba(w, e_pair, w_pair, 1e-3),
                               _kernels.self_energy_numpy(w, e_pair, w_pair, 1e-3), rtol=1e-12)


def test_lambda_explicit_backends(rng):
    s = 1.5
    m = s - np.arange(4)
    gam = np.sqrt(s * (s + 1) - m * (m + 1))
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    c = np.ascontiguousarray(q.conj().T)
    a = _kernels.lambda_explicit_numba(c, m, gam, 0.1, 0.2, 0.3)
    b = _kernels.lambda_explicit_numpy(c, m, gam, 0.1, 0.2, 0.3)
    np.testing.assert_allclose(a, b, atol=1e-15)


def test_resonant_denominator_dropped(kernel_backend):
    lam = np.array([[0, 1e-3], [1e-3, 0]], dtype=complex)
    e = np.array([0.0, 2.0])
    const, number, create, annih = _kernels.second_order(lam, e, 2.0, 1e-9)
    assert np.all(np.isfinite(const)) and np.all(np.isfinite(number))


def test_self_energy_chunking():
    w = np.linspace(0, 1, 10001)
    e_pair, w_pair = np.array([-0.5]), np.array([1.0])
    np.testing.assert_allclose(_kernels.self_energy_numpy(w, e_pair, w_pair, 0.01, chunk=7),
                               _kernels.self_energy_numpy(w, e_pair, w_pair, 0.01), rtol=1e-15)


def test_env_flag_selects_numpy():
    code = "from qudit_readout import _kernels as k; print(k.USE_NUMBA, k.self_energy is k.self_energy_numpy)"
    env = dict(os.environ, QUDIT_READOUT_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout
    assert out.split() == ["False", "True"]
