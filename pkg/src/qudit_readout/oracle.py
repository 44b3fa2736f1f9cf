"""Exact diagonalization of spin (x) truncated photon mode.

Independent of the perturbative code paths: builds the full Rabi-type
Hamiltonian from the raw product-basis matrices and labels dressed states by
overlap with bare |spin eigenstate, n> product states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, NonDispersiveError
from .model import coupling_operator, hamiltonian

OVERLAP_THRESHOLD = 0.7
CONVERGED_DRIFT = 1e-10  # GHz


def annihilation(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_max + 1)), k=1).astype(complex)


@dataclass(frozen=True)
class FullSystem:
    spin_dim: int
    n_max: int
    omega: float
    hamiltonian: np.ndarray
    spin_energies: np.ndarray
    spin_vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.spin_dim * (self.n_max + 1)

    def eigh(self):
        if not hasattr(self, "_eig"):
            object.__setattr__(self, "_eig", np.linalg.eigh(self.hamiltonian))
        return self._eig

    def bare_state(self, beta: int, n: int) -> np.ndarray:
        photon = np.zeros(self.n_max + 1)
        photon[n] = 1.0
        return np.kron(self.spin_vectors[:, beta], photon)


def full_hamiltonian_from_operators(h_s, v, omega: float, n_max: int) -> FullSystem:
    """H_S (x) 1 + 1 (x) Omega a^dagger a + V (x) (a + a^dagger)."""
    if n_max < 1:
        raise InvalidArgumentError("photon cutoff n_max must be >= 1")
    h_s = np.asarray(h_s, dtype=complex)
    v = np.asarray(v, dtype=complex)
    d = h_s.shape[0]
    a = annihilation(n_max)
    eye_s, eye_c = np.eye(d), np.eye(n_max + 1)
    h = np.kron(h_s, eye_c) + omega * np.kron(eye_s, a.conj().T @ a) + np.kron(v, a + a.conj().T)
    h = 0.5 * (h + h.conj().T)
    e_s, u_s = np.linalg.eigh(0.5 * (h_s + h_s.conj().T))
    return FullSystem(d, n_max, float(omega), h, e_s, u_s)


def build_full_hamiltonian(model, b, cav, lam, n_max: int = 8) -> FullSystem:
    return full_hamiltonian_from_operators(hamiltonian(model, b), coupling_operator(model, lam), cav.omega, n_max)


def dressed_energies(fs: FullSystem, labels, threshold: float | None = OVERLAP_THRESHOLD):
    """Map each bare label (beta, n) to (dressed energy, overlap).

    With a threshold, a best overlap below it raises NonDispersiveError.
    """
    energies, vectors = fs.eigh()
    out = {}
    for beta, n in labels:
        ov = np.abs(vectors.conj().T @ fs.bare_state(beta, n)) ** 2
        k = int(np.argmax(ov))
        if threshold is not None and ov[k] < threshold:
            raise NonDispersiveError(
                f"dressed state for |{beta}, n={n}> is ambiguous (max overlap {ov[k]:.3f})"
            )
        out[(beta, n)] = (float(energies[k]), float(ov[k]))
    return out


def ed_cavity_frequency(fs: FullSystem, beta: int) -> float:
    """E(beta, n=1) - E(beta, n=0) from the exact dressed spectrum."""
    if not 0 <= beta < fs.spin_dim:
        raise InvalidArgumentError(f"state index {beta} out of range")
    lab = dressed_energies(fs, [(beta, 0), (beta, 1)])
    return lab[(beta, 1)][0] - lab[(beta, 0)][0]


@dataclass(frozen=True)
class CutoffRow:
    n_max: int
    drift: float  # vs the previous cutoff; nan for the first
    converged: bool


def cutoff_report(model, b, cav, lam, n_max_list) -> list[CutoffRow]:
    """Drift of the lowest 2d eigenvalues between successive photon cutoffs."""
    n_max_list = list(n_max_list)
    if any(b2 <= b1 for b1, b2 in zip(n_max_list, n_max_list[1:])):
        raise InvalidArgumentError("cutoffs must be strictly ascending")
    rows, prev = [], None
    for n_max in n_max_list:
        fs = build_full_hamiltonian(model, b, cav, lam, n_max)
        k = min(2 * fs.spin_dim, fs.dim)
        low = np.linalg.eigvalsh(fs.hamiltonian)[:k]
        if prev is None or prev.shape[0] < k:
            drift = float("nan")
        else:
            drift = float(np.max(np.abs(low - prev[:k])))
        rows.append(CutoffRow(n_max, drift, bool(drift < CONVERGED_DRIFT)))
        prev = low
    return rows
