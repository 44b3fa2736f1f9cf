"""Hot numerical kernels.

Each kernel exists twice: an explicit-loop version compiled with numba and a
vectorised numpy version. ``QUDIT_READOUT_NUMBA=0`` (or a missing numba)
selects the numpy path. Both paths are public so tests and the benchmark can
compare them directly.
"""

import os

import numpy as np

_FLAG = os.environ.get("QUDIT_READOUT_NUMBA", "1").strip().lower()
USE_NUMBA = _FLAG not in ("0", "false", "no", "off")

if USE_NUMBA:
    try:
        import numba
    except ImportError:  # pragma: no cover
        USE_NUMBA = False


def _jit(func):
    if USE_NUMBA:
        return numba.njit(cache=True)(func)
    return func


# ---------------------------------------------------------------- self-energy
# sigma(w) = sum_k weight_k / (w + e_k + i*eta)


def _self_energy_loops(omega, e_pair, w_pair, eta):
    out = np.zeros(omega.shape[0], dtype=np.complex128)
    for i in range(omega.shape[0]):
        acc = 0.0 + 0.0j
        for k in range(e_pair.shape[0]):
            acc += w_pair[k] / (omega[i] + e_pair[k] + 1j * eta)
        out[i] = acc
    return out


def self_energy_numpy(omega, e_pair, w_pair, eta, chunk=4096):
    omega = np.asarray(omega, dtype=float)
    out = np.empty(omega.shape[0], dtype=complex)
    for start in range(0, omega.shape[0], chunk):
        w = omega[start:start + chunk, None]
        out[start:start + chunk] = np.sum(w_pair / (w + e_pair + 1j * eta), axis=1)
    return out


self_energy_numba = _jit(_self_energy_loops)

# ---------------------------------------------------------------- explicit Lambda
# coefficient table c[alpha, j] = <alpha|M_j>, M_j = s - j


def _lambda_explicit_loops(c, m, gam, lzgz, lxgx, lygy):
    d = c.shape[0]
    n = c.shape[1]
    out = np.zeros((d, d), dtype=np.complex128)
    up = 0.5 * (lxgx - 1j * lygy)
    down = 0.5 * (lxgx + 1j * lygy)
    for a1 in range(d):
        for a2 in range(d):
            acc = 0.0 + 0.0j
            for j in range(n):
                acc += lzgz * m[j] * c[a1, j] * np.conj(c[a2, j])
                # index of M+1 is j-1 in descending order
                if j >= 1:
                    acc += gam[j] * up * c[a1, j - 1] * np.conj(c[a2, j])
                    acc += gam[j] * down * c[a1, j] * np.conj(c[a2, j - 1])
            out[a1, a2] = acc
    return out


def lambda_explicit_numpy(c, m, gam, lzgz, lxgx, lygy):
    cc = c.conj()
    out = lzgz * (c * m) @ cc.T
    up = 0.5 * (lxgx - 1j * lygy)
    down = 0.5 * (lxgx + 1j * lygy)
    out = out + up * (c[:, :-1] * gam[1:]) @ cc[:, 1:].T
    out = out + down * (c[:, 1:] * gam[1:]) @ cc[:, :-1].T
    return out


lambda_explicit_numba = _jit(_lambda_explicit_loops)

# ---------------------------------------------------------------- second-order blocks
# For every (b1, b2): sum_a L[b1,a] L[a,b2] * f(E[b1]-E[a], E[b2]-E[a]) with
#   const:  (1/(x-W) + 1/(y-W)) / 2
#   number: x/(x^2-W^2) + y/(y^2-W^2)
#   create: (1/(x+W) + 1/(y-W)) / 2      coefficient of (a^dagger)^2
#   annih:  (1/(x-W) + 1/(y+W)) / 2      coefficient of a^2
# Denominators with |.| < tol are dropped (the caller has already warned).


def _safe_inv_scalar(x, tol):
    if abs(x) < tol:
        return 0.0
    return 1.0 / x


_safe_inv_scalar = _jit(_safe_inv_scalar)


def _second_order_loops(lam, energies, omega, tol):
    d = energies.shape[0]
    const = np.zeros((d, d), dtype=np.complex128)
    number = np.zeros((d, d), dtype=np.complex128)
    create = np.zeros((d, d), dtype=np.complex128)
    annih = np.zeros((d, d), dtype=np.complex128)
    for b1 in range(d):
        for b2 in range(d):
            c0 = 0.0 + 0.0j
            c1 = 0.0 + 0.0j
            c2 = 0.0 + 0.0j
            c3 = 0.0 + 0.0j
            for a in range(d):
                prod = lam[b1, a] * lam[a, b2]
                if prod == 0:
                    continue
                x = energies[b1] - energies[a]
                y = energies[b2] - energies[a]
                ixm = _safe_inv_scalar(x - omega, tol)
                ixp = _safe_inv_scalar(x + omega, tol)
                iym = _safe_inv_scalar(y - omega, tol)
                iyp = _safe_inv_scalar(y + omega, tol)
                c0 += prod * 0.5 * (ixm + iym)
                # x/(x^2-W^2) = (1/(x-W) + 1/(x+W)) / 2
                c1 += prod * 0.5 * (ixm + ixp + iym + iyp)
                c2 += prod * 0.5 * (ixp + iym)
                c3 += prod * 0.5 * (ixm + iyp)
            const[b1, b2] = c0
            number[b1, b2] = c1
            create[b1, b2] = c2
            annih[b1, b2] = c3
    return const, number, create, annih


def _safe_inv(x, tol):
    out = np.zeros_like(x)
    ok = np.abs(x) >= tol
    out[ok] = 1.0 / x[ok]
    return out


def second_order_numpy(lam, energies, omega, tol):
    # prod[b1, a, b2] = L[b1,a] L[a,b2]
    prod = lam[:, :, None] * lam[None, :, :]
    gap = energies[:, None] - energies[None, :]  # gap[b, a] = E_b - E_a
    ixm, ixp = _safe_inv(gap - omega, tol), _safe_inv(gap + omega, tol)
    # x-terms depend on (b1, a), y-terms on (b2, a)
    xm, xp = ixm[:, :, None], ixp[:, :, None]
    ym, yp = ixm.T[None, :, :], ixp.T[None, :, :]
    const = 0.5 * np.sum(prod * (xm + ym), axis=1)
    number = 0.5 * np.sum(prod * (xm + xp + ym + yp), axis=1)
    create = 0.5 * np.sum(prod * (xp + ym), axis=1)
    annih = 0.5 * np.sum(prod * (xm + yp), axis=1)
    return const, number, create, annih


second_order_numba = _jit(_second_order_loops)

# ---------------------------------------------------------------- state shifts
# shift[b] = n * sum_a 2 |L[a,b]|^2 E_ab / (z^2 - E_ab^2),  z = w + i*eta


def _state_shifts_loops(lam_abs2, energies, z, n):
    d = energies.shape[0]
    out = np.zeros(d, dtype=np.complex128)
    for b in range(d):
        acc = 0.0 + 0.0j
        for a in range(d):
            if a == b or lam_abs2[a, b] == 0:
                continue
            e = energies[a] - energies[b]
            acc += 2.0 * lam_abs2[a, b] * e / (z * z - e * e)
        out[b] = n * acc
    return out


def state_shifts_numpy(lam_abs2, energies, z, n):
    e = energies[:, None] - energies[None, :]  # e[a, b] = E_a - E_b
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(lam_abs2 != 0, 2.0 * lam_abs2 * e / (z * z - e * e), 0.0)
    np.fill_diagonal(terms, 0.0)
    return n * terms.sum(axis=0).astype(complex)


state_shifts_numba = _jit(_state_shifts_loops)


if USE_NUMBA:
    self_energy = self_energy_numba
    lambda_explicit = lambda_explicit_numba
    second_order = second_order_numba
    state_shifts = state_shifts_numba
else:
    self_energy = self_energy_numpy
    lambda_explicit = lambda_explicit_numpy
    second_order = second_order_numpy
    state_shifts = state_shifts_numpy


def warmup():
    """Compile the selected kernels on tiny inputs so later timings exclude JIT cost."""
    lam = np.array([[0.0, 1e-3], [1e-3, 0.0]], dtype=complex)
    e = np.array([0.0, 1.0])
    self_energy(np.array([0.5]), np.array([-1.0]), np.array([1e-6]), 1e-3)
    lambda_explicit(np.eye(2, dtype=complex), np.array([0.5, -0.5]), np.array([1.0, 0.0]), 0.0, 1e-3, 0.0)
    second_order(lam, e, 0.5, 1e-9)
    state_shifts(np.abs(lam) ** 2, e, complex(0.5), 1.0)
    state_shifts(np.abs(lam) ** 2, e, complex(0.5, 1e-3), 1.0)
