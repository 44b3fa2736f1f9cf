"""Eigenbasis of the spin Hamiltonian and the coupling tensor in that basis."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import _kernels
from .constants import DEGENERACY_TOL, K_B
from .errors import DegeneracyWarning, InvalidArgumentError
from .model import HERMITIAN_TOL, CouplingVector, is_hermitian, spin_matrices


@dataclass(frozen=True)
class EigenSystem:
    energies: np.ndarray  # ascending, GHz
    vectors: np.ndarray  # columns are eigenvectors

    @property
    def dim(self) -> int:
        return self.energies.shape[0]

    def degenerate_pairs(self, tol: float = DEGENERACY_TOL) -> list[tuple[int, int]]:
        e = self.energies
        return [(i, j) for i in range(len(e)) for j in range(i + 1, len(e)) if abs(e[j] - e[i]) < tol]


def fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude entry of every column real and non-negative.

    Among entries tied to within 1e-10 the first one in basis order wins.
    """
    v = np.array(vectors, dtype=complex)
    mag = np.abs(v)
    for col in range(v.shape[1]):
        idx = int(np.argmax(mag[:, col] >= mag[:, col].max() - 1e-10))
        ref = v[idx, col]
        v[:, col] *= np.conj(ref) / abs(ref)
        v[idx, col] = abs(ref)
    return v


def diagonalize(h: np.ndarray) -> EigenSystem:
    h = np.asarray(h)
    if not is_hermitian(h, tol=HERMITIAN_TOL * max(1.0, np.max(np.abs(h), initial=0.0))):
        raise InvalidArgumentError("diagonalize requires a Hermitian matrix")
    energies, vectors = np.linalg.eigh(0.5 * (h + h.conj().T))
    return EigenSystem(energies, fix_phases(vectors))


def lambda_tensor(es: EigenSystem, v: np.ndarray) -> np.ndarray:
    """Lambda[a1, a2] = <a1|V|a2>."""
    v = np.asarray(v)
    if v.shape != (es.dim, es.dim):
        raise InvalidArgumentError(f"coupling operator shape {v.shape} does not match dimension {es.dim}")
    if not is_hermitian(v, tol=HERMITIAN_TOL * max(1.0, np.max(np.abs(v), initial=0.0))):
        raise InvalidArgumentError("coupling operator must be Hermitian")
    u = es.vectors
    lam = u.conj().T @ v @ u
    return 0.5 * (lam + lam.conj().T)


def lambda_giant_spin_explicit(es: EigenSystem, g_diag, lam: CouplingVector) -> np.ndarray:
    """Coupling tensor from the |S, M> expansion coefficients (diagonal g only)."""
    g = np.asarray(g_diag, dtype=float)
    if g.shape == (3, 3):
        if np.any(np.abs(g - np.diag(np.diag(g))) > 0):
            raise InvalidArgumentError("explicit Lambda formula needs a diagonal g-tensor; use lambda_tensor")
        g = np.diag(g)
    if g.shape != (3,):
        raise InvalidArgumentError("g_diag must have three entries")
    s = (es.dim - 1) / 2
    m = spin_matrices(s).m
    gam = np.sqrt(s * (s + 1) - m * (m + 1))
    # c[alpha, j] = <alpha|M_j>
    c = np.ascontiguousarray(es.vectors.conj().T)
    lx, ly, lz = lam.as_array()
    return _kernels.lambda_explicit(c, m, gam, lz * g[2], lx * g[0], ly * g[1])


# ---------------------------------------------------------------- populations


@dataclass(frozen=True)
class Pure:
    index: int


@dataclass(frozen=True)
class Thermal:
    temperature_k: float


@dataclass(frozen=True)
class Explicit:
    weights: Sequence[float]


PreparationSpec = Union[Pure, Thermal, Explicit]


def populations(es: EigenSystem, spec: PreparationSpec) -> np.ndarray:
    d = es.dim
    if isinstance(spec, Pure):
        if not 0 <= spec.index < d:
            raise InvalidArgumentError(f"state index {spec.index} out of range for dimension {d}")
        p = np.zeros(d)
        p[spec.index] = 1.0
        return p
    if isinstance(spec, Thermal):
        if spec.temperature_k < 0:
            raise InvalidArgumentError("temperature must be non-negative")
        if spec.temperature_k == 0:
            p = (es.energies - es.energies[0] < DEGENERACY_TOL).astype(float)
            return p / p.sum()
        if np.isinf(spec.temperature_k):
            return np.full(d, 1.0 / d)
        x = -(es.energies - es.energies[0]) / (K_B * spec.temperature_k)
        w = np.exp(x)
        return w / w.sum()
    if isinstance(spec, Explicit):
        w = np.asarray(spec.weights, dtype=float)
        if w.shape != (d,):
            raise InvalidArgumentError(f"expected {d} weights, got {w.shape}")
        if np.any(w < 0) or w.sum() <= 0:
            raise InvalidArgumentError("weights must be non-negative with positive sum")
        return w / w.sum()
    raise InvalidArgumentError(f"unknown preparation {spec!r}")


# ---------------------------------------------------------------- spectral model


@dataclass(frozen=True)
class SpectralModel:
    """Everything the input-output formulas need.

    ``n`` is the number of identical molecules. If ``coupling_scales`` is
    given, molecule i couples with Lambda * scale_i and the ensemble weight is
    sum(scale_i**2) instead of ``n``.
    """

    eigensystem: EigenSystem
    coupling: np.ndarray
    populations: np.ndarray
    n: float = 1.0
    eta: float = 0.0
    coupling_scales: tuple | None = None

    def __post_init__(self):
        d = self.eigensystem.dim
        if self.coupling.shape != (d, d) or self.populations.shape != (d,):
            raise InvalidArgumentError("inconsistent dimensions in SpectralModel")
        if self.eta < 0:
            raise InvalidArgumentError("broadening eta must be non-negative")
        if self.n < 1:
            raise InvalidArgumentError("ensemble multiplicity must be >= 1")

    @property
    def energies(self) -> np.ndarray:
        return self.eigensystem.energies

    @property
    def dim(self) -> int:
        return self.eigensystem.dim

    @property
    def weight(self) -> float:
        """Ensemble factor multiplying |Lambda|^2."""
        if self.coupling_scales is not None:
            return float(sum(float(s) ** 2 for s in self.coupling_scales))
        return float(self.n)

    def with_populations(self, p) -> "SpectralModel":
        return SpectralModel(self.eigensystem, self.coupling, np.asarray(p, dtype=float),
                             self.n, self.eta, self.coupling_scales)

    def prepared(self, index: int) -> "SpectralModel":
        return self.with_populations(populations(self.eigensystem, Pure(index)))


def build_spectral_model(cfg, b, lam, preparation: PreparationSpec = Pure(0), n: float = 1.0,
                         eta: float = 0.0, coupling_scales=None, warn_degenerate=False) -> SpectralModel:
    from .model import coupling_operator, hamiltonian

    es = diagonalize(hamiltonian(cfg, b))
    if warn_degenerate and es.degenerate_pairs():
        warnings.warn(f"degenerate levels {es.degenerate_pairs()}", DegeneracyWarning, stacklevel=2)
    coupling = lambda_tensor(es, coupling_operator(cfg, lam))
    return SpectralModel(es, coupling, populations(es, preparation), n, eta, coupling_scales)
