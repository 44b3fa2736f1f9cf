"""Second-order Schrieffer-Wolff effective Hamiltonian and QND diagnostics.

Operators are expressed in the spin eigenbasis with Hubbard operators
X^{b1 b2} = |b1><b2|. A coefficient matrix C therefore stands for
sum_{b1 b2} C[b1, b2] X^{b1 b2}.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .constants import RESONANCE_TOL
from .eigen import SpectralModel, build_spectral_model, Pure
from .errors import (
    DispersiveRegimeWarning,
    InvalidArgumentError,
    NoWorkingPointError,
    QuditReadoutError,
    ResonantDenominatorError,
)
from .inout import CavityParams, guard_violations
from .oracle import annihilation, build_full_hamiltonian, dressed_energies


def _resonant_pairs(sm: SpectralModel, omega: float, tol: float):
    """Ordered pairs (b1, b2) with Lambda != 0 and |E_b1 - E_b2 +- Omega| < tol."""
    e = sm.energies
    gap = e[:, None] - e[None, :]
    near = (np.abs(gap + omega) < tol) | (np.abs(gap - omega) < tol)
    hit = near & (np.abs(sm.coupling) > 0)
    return [(int(a), int(b)) for a, b in np.argwhere(hit)]


def _check_resonances(sm, cav, strict, tol=RESONANCE_TOL):
    pairs = _resonant_pairs(sm, cav.omega, tol)
    if pairs and strict:
        a, b = pairs[0]
        e = sm.energies
        det = min(abs(e[a] - e[b] + cav.omega), abs(e[a] - e[b] - cav.omega))
        raise ResonantDenominatorError((a, b), det)
    if pairs:
        warnings.warn(f"resonant pairs {pairs} excluded from the transformation",
                      DispersiveRegimeWarning, stacklevel=3)
    return tuple(pairs)


@dataclass(frozen=True)
class SWGenerator:
    """S = sum_b (gamma_plus[b] a^dagger + gamma_minus[b] a) X^b."""

    gamma_plus: np.ndarray
    gamma_minus: np.ndarray
    resonant: tuple = ()

    def operator(self, n_max: int) -> np.ndarray:
        a = annihilation(n_max)
        return np.kron(self.gamma_plus, a.conj().T) + np.kron(self.gamma_minus, a)


def sw_generator(sm: SpectralModel, cav: CavityParams, strict: bool = True) -> SWGenerator:
    resonant = _check_resonances(sm, cav, strict)
    e = sm.energies
    gap = e[:, None] - e[None, :]
    lam = sm.coupling
    with np.errstate(divide="ignore", invalid="ignore"):
        gp = np.where(np.abs(gap + cav.omega) < RESONANCE_TOL, 0.0, lam / (gap + cav.omega))
        gm = np.where(np.abs(gap - cav.omega) < RESONANCE_TOL, 0.0, lam / (gap - cav.omega))
    return SWGenerator(gp, gm, resonant)


@dataclass(frozen=True)
class EffectiveModel:
    """Second-order dressed Hamiltonian.

    diagonal mode: H = sum_a (E_a + lamb_a) X^{aa} + a^dagger a (Omega + sum_a chi_a X^{aa})
    full mode additionally keeps the off-diagonal X^{b1 b2} parts of the
    constant and photon-number blocks and the (a^dagger)^2, a^2 blocks.
    """

    mode: str
    omega: float
    energies: np.ndarray
    lamb: np.ndarray  # per-state level shift, GHz
    chi: np.ndarray  # per-state cavity pull, GHz
    const: np.ndarray | None = None
    number: np.ndarray | None = None
    create: np.ndarray | None = None
    annih: np.ndarray | None = None

    def operator(self, n_max: int) -> np.ndarray:
        """Matrix on spin-eigenbasis (x) Fock space truncated at n_max."""
        a = annihilation(n_max)
        num = a.conj().T @ a
        eye_c = np.eye(n_max + 1)
        d = self.energies.shape[0]
        h = np.kron(np.diag(self.energies), eye_c) + self.omega * np.kron(np.eye(d), num)
        if self.mode == "diagonal":
            h = h + np.kron(np.diag(self.lamb), eye_c) + np.kron(np.diag(self.chi), num)
        else:
            h = (h + np.kron(self.const, eye_c) + np.kron(self.number, num)
                 + np.kron(self.create, a.conj().T @ a.conj().T) + np.kron(self.annih, a @ a))
        return h

    def levels(self, n_photons: int) -> np.ndarray:
        """Diagonal-mode energies E_a + lamb_a + n (Omega + chi_a), shape (d, n_photons+1)."""
        n = np.arange(n_photons + 1)
        return (self.energies + self.lamb)[:, None] + n[None, :] * (self.omega + self.chi)[:, None]


def effective_hamiltonian(sm: SpectralModel, cav: CavityParams, mode: str = "diagonal",
                          strict: bool = True) -> EffectiveModel:
    """Single-molecule effective Hamiltonian (the ensemble weight is not applied)."""
    if mode not in ("diagonal", "full"):
        raise InvalidArgumentError(f"mode must be 'diagonal' or 'full', got {mode!r}")
    _check_resonances(sm, cav, strict)
    lam = np.ascontiguousarray(sm.coupling, dtype=complex)
    e = np.ascontiguousarray(sm.energies, dtype=float)
    const, number, create, annih = _kernels.second_order(lam, e, float(cav.omega), RESONANCE_TOL)
    lamb = np.real(np.diag(const)).copy()
    chi = np.real(np.diag(number)).copy()
    if mode == "diagonal":
        return EffectiveModel(mode, cav.omega, e, lamb, chi)
    return EffectiveModel(mode, cav.omega, e, lamb, chi, const, number, create, annih)


@dataclass(frozen=True)
class QNDReport:
    commutator: np.ndarray  # [H_S, V~] in the eigenbasis, from the Phi formula
    direct: np.ndarray  # same, from explicit matrix products in the product basis
    phi: np.ndarray
    norm: float  # Frobenius norm of the commutator
    normalized_norm: float  # norm / sum |Lambda|^2
    discrepancy: float  # max |commutator - direct|


def qnd_commutator(sm: SpectralModel, cav: CavityParams, h_s: np.ndarray | None = None,
                   strict: bool = True, rtol: float = 1e-12) -> QNDReport:
    """Commutator of the spin Hamiltonian with the photon-number part of the effective model.

    ``h_s`` is the spin Hamiltonian in its original basis; if omitted it is
    rebuilt from the eigensystem.
    """
    eff = effective_hamiltonian(sm, cav, "full", strict=strict)
    phi = eff.number
    e = sm.energies
    comm = (e[:, None] - e[None, :]) * phi
    u = sm.eigensystem.vectors
    if h_s is None:
        h_s = u @ np.diag(e) @ u.conj().T
    v_prod = u @ phi @ u.conj().T
    direct = u.conj().T @ (h_s @ v_prod - v_prod @ h_s) @ u
    discrepancy = float(np.max(np.abs(comm - direct), initial=0.0))
    scale = np.linalg.norm(h_s, 2) * np.linalg.norm(phi, 2)
    if discrepancy > rtol * max(scale, np.finfo(float).tiny):
        raise QuditReadoutError(
            f"Phi-formula commutator disagrees with direct commutator by {discrepancy:.3e}"
        )
    norm = float(np.linalg.norm(comm))
    total = float(np.sum(np.abs(sm.coupling) ** 2))
    return QNDReport(comm, direct, phi, norm, norm / total if total > 0 else 0.0, discrepancy)


def qnd_working_point_s1(d: float, omega: float) -> float:
    """Zeeman energy xi_z = sqrt(D^2 - Omega^2) cancelling the S=1 commutator."""
    if d < omega:
        raise NoWorkingPointError(f"no real working point for D={d} < Omega={omega}")
    return float(np.sqrt(d * d - omega * omega))


# ---------------------------------------------------------------- oracle comparison


@dataclass(frozen=True)
class SWComparison:
    fields: tuple
    discrepancy: np.ndarray  # max |E_eff - E_exact| over compared levels, GHz
    min_overlap: np.ndarray
    flagged: np.ndarray  # True where the point is outside the dispersive regime


def sw_vs_ed_compare(model, cav: CavityParams, lam, n_max: int, field_grid,
                     n_photons: int = 2) -> SWComparison:
    """Diagonal effective levels vs exact dressed levels, field by field."""
    if n_photons >= n_max:
        raise InvalidArgumentError("n_photons must be below the cutoff")
    field_grid = tuple(field_grid)
    disc = np.zeros(len(field_grid))
    min_ov = np.zeros(len(field_grid))
    flagged = np.zeros(len(field_grid), dtype=bool)
    for k, b in enumerate(field_grid):
        sm = build_spectral_model(model, b, lam, Pure(0))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DispersiveRegimeWarning)
            eff = effective_hamiltonian(sm, cav, "diagonal", strict=False)
            resonant = bool(_resonant_pairs(sm, cav.omega, RESONANCE_TOL))
        approx = eff.levels(n_photons)
        fs = build_full_hamiltonian(model, b, cav, lam, n_max)
        labels = [(beta, n) for beta in range(sm.dim) for n in range(n_photons + 1)]
        exact = dressed_energies(fs, labels, threshold=None)
        disc[k] = max(abs(exact[lab][0] - approx[lab]) for lab in labels)
        min_ov[k] = min(exact[lab][1] for lab in labels)
        flagged[k] = resonant or bool(guard_violations(sm, cav)) or min_ov[k] < 0.7
    return SWComparison(field_grid, disc, min_ov, flagged)
