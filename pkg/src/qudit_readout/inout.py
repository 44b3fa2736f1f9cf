"""Cavity transmission, state-dependent dispersive shifts and readout helpers."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .eigen import Pure, SpectralModel, build_spectral_model
from .errors import DispersiveRegimeWarning, InvalidArgumentError, SingularEvaluationError, UnclassifiableError
from .model import FieldVector


@dataclass(frozen=True)
class CavityParams:
    omega: float  # GHz
    gamma1: float  # GHz
    gamma2: float  # GHz

    def __post_init__(self):
        if self.omega <= 0:
            raise InvalidArgumentError("cavity frequency must be positive")
        if self.gamma1 < 0 or self.gamma2 < 0 or self.gamma <= 0:
            raise InvalidArgumentError("port losses must be non-negative with positive total")

    @property
    def gamma(self) -> float:
        return self.gamma1 + self.gamma2

    @property
    def peak_transmission(self) -> float:
        """|t_c| of the bare cavity on resonance, 2 sqrt(g1 g2) / g."""
        return 2 * np.sqrt(self.gamma1 * self.gamma2) / self.gamma


@dataclass(frozen=True)
class TransmissionTrace:
    omega_grid: np.ndarray
    t: np.ndarray
    abs_t: np.ndarray
    phase: np.ndarray  # unwrapped, radians

    def __len__(self):
        return self.omega_grid.shape[0]

    def peak(self) -> tuple[float, float]:
        """(frequency, height) of max |t_c| with parabolic refinement."""
        return parabolic_peak(self.omega_grid, self.abs_t)


@dataclass(frozen=True)
class ShiftTable:
    shifts: np.ndarray  # complex, one entry per state
    violations: tuple  # (alpha, beta) pairs breaking the dispersive guard

    @property
    def ok(self) -> bool:
        return not self.violations


# ---------------------------------------------------------------- transmission


def _pair_terms(sm: SpectralModel):
    """Energies and weights of all ordered pairs with nonzero p_pair |Lambda|^2."""
    e = sm.energies
    p = sm.populations
    lam2 = np.abs(sm.coupling) ** 2
    dp = p[:, None] - p[None, :]
    w = sm.weight * dp * lam2
    np.fill_diagonal(w, 0.0)
    idx = np.nonzero(w)
    e_pair = (e[:, None] - e[None, :])[idx]
    return np.ascontiguousarray(e_pair), np.ascontiguousarray(w[idx])


def self_energy(omega, sm: SpectralModel) -> np.ndarray:
    """N * sum_pairs p |Lambda|^2 / (omega + E_pair + i eta) on a frequency array."""
    omega = np.ascontiguousarray(np.atleast_1d(np.asarray(omega, dtype=float)))
    e_pair, w_pair = _pair_terms(sm)
    if sm.eta == 0 and e_pair.size:
        hit = np.isin(-e_pair, omega)
        if np.any(hit):
            raise SingularEvaluationError(
                f"transmission evaluated on an undamped spin pole at {-e_pair[hit][0]:.12g} GHz"
            )
    if e_pair.size == 0:
        return np.zeros(omega.shape, dtype=complex)
    return _kernels.self_energy(omega, e_pair, w_pair, float(sm.eta))


def transmission_values(omega, cav: CavityParams, sm: SpectralModel) -> np.ndarray:
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    sigma = self_energy(omega, sm)
    return 1j * np.sqrt(cav.gamma1 * cav.gamma2) / (cav.omega - omega - 0.5j * cav.gamma + sigma)


def transmission_amplitude(omega: float, cav: CavityParams, sm: SpectralModel) -> complex:
    if not np.isfinite(omega):
        raise InvalidArgumentError("omega must be finite")
    return complex(transmission_values([omega], cav, sm)[0])


def transmission_spectrum(grid, cav: CavityParams, sm: SpectralModel) -> TransmissionTrace:
    grid = np.asarray(grid, dtype=float)
    if grid.size and np.any(np.diff(grid) < 0):
        raise InvalidArgumentError("frequency grid must be sorted ascending")
    if grid.size == 0:
        empty = np.zeros(0)
        return TransmissionTrace(empty, empty.astype(complex), empty, empty)
    t = transmission_values(grid, cav, sm)
    return TransmissionTrace(grid, t, np.abs(t), np.unwrap(np.angle(t)))


def parabolic_peak(x, y) -> tuple[float, float]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size == 0:
        raise InvalidArgumentError("cannot locate a peak on an empty grid")
    i = int(np.argmax(y))
    if 0 < i < x.size - 1:
        y0, y1, y2 = y[i - 1], y[i], y[i + 1]
        denom = y0 - 2 * y1 + y2
        if denom < 0:
            h = 0.5 * (x[i + 1] - x[i - 1])
            off = 0.5 * (y0 - y2) / denom
            return float(x[i] + off * h), float(y1 - 0.25 * (y0 - y2) * off)
    return float(x[i]), float(y[i])


# ---------------------------------------------------------------- shifts


def guard_violations(sm: SpectralModel, cav: CavityParams) -> list[tuple[int, int]]:
    """Pairs with collective coupling sqrt(N)|Lambda| >= ||E_pair| - Omega|."""
    e = sm.energies
    lam = np.sqrt(sm.weight) * np.abs(sm.coupling)
    detune = np.abs(np.abs(e[:, None] - e[None, :]) - cav.omega)
    bad = (lam >= detune) & (lam > 0)
    np.fill_diagonal(bad, False)
    return [(int(a), int(b)) for a, b in zip(*np.nonzero(bad)) if a < b]


def shift_table(sm: SpectralModel, cav: CavityParams, at_omega: float | None = None) -> ShiftTable:
    """Dispersive shift of every state.

    Without ``at_omega`` this is the undamped shift evaluated at the cavity
    frequency; with it, the complex ensemble form at (at_omega + i eta).
    """
    lam2 = np.ascontiguousarray(np.abs(sm.coupling) ** 2)
    e = np.ascontiguousarray(sm.energies)
    probe = cav.omega if at_omega is None else float(at_omega)
    z = complex(probe) if at_omega is None else complex(probe, sm.eta)
    if z.imag == 0:
        hit = (lam2 > 0) & (np.abs(e[:, None] - e[None, :]) == abs(probe))
        np.fill_diagonal(hit, False)
        if np.any(hit):
            a, b = (int(i) for i in np.argwhere(hit)[0])
            raise SingularEvaluationError(
                f"transition {a}<->{b} exactly resonant with the probe frequency {probe} GHz"
            )
    shifts = _kernels.state_shifts(lam2, e, z, sm.weight)
    violations = tuple(guard_violations(sm, cav))
    if violations:
        warnings.warn(
            f"dispersive condition violated for pairs {list(violations)}", DispersiveRegimeWarning, stacklevel=2
        )
    return ShiftTable(np.asarray(shifts), violations)


def dispersive_shift(beta: int, sm: SpectralModel, cav: CavityParams, at_omega: float | None = None) -> complex:
    if not 0 <= beta < sm.dim:
        raise InvalidArgumentError(f"state index {beta} out of range")
    return complex(shift_table(sm, cav, at_omega).shifts[beta])


def line_width(beta: int, sm: SpectralModel, cav: CavityParams) -> float:
    """Full width at half maximum of the state-beta peak: gamma + 2|Im shift(Omega)|."""
    return cav.gamma + 2 * abs(dispersive_shift(beta, sm, cav, at_omega=cav.omega).imag)


# ---------------------------------------------------------------- S=1 phase readout


_TRUTH_TABLE = {(1, 1): -1, (1, -1): 1, (-1, -1): 0}


def _sign(s) -> int:
    if s in ("+", 1, True):
        return 1
    if s in ("-", -1, False):
        return -1
    raise InvalidArgumentError(f"sign must be '+'/'-' or +1/-1, got {s!r}")


def classify_s1_phase(left_sign, right_sign) -> int:
    """Map the phase signs left/right of the central frequency to M."""
    key = (_sign(left_sign), _sign(right_sign))
    if key not in _TRUTH_TABLE:
        raise UnclassifiableError(f"phase signs {key} do not correspond to any S=1 state")
    return _TRUTH_TABLE[key]


def phase_signs(cav: CavityParams, sm: SpectralModel, center: float, delta: float) -> tuple[int, int]:
    """Signs of arg t_c at center - delta and center + delta."""
    t = transmission_values([center - delta, center + delta], cav, sm)
    ang = np.angle(t)
    return tuple(1 if a >= 0 else -1 for a in ang)


# ---------------------------------------------------------------- field sweeps


@dataclass(frozen=True)
class FieldSweep:
    fields: np.ndarray  # magnitudes, tesla
    states: tuple
    t: np.ndarray  # [state, field] complex transmission

    @property
    def abs_t(self) -> np.ndarray:
        return np.abs(self.t)


def field_sweep_fixed_frequency(b_grid, direction, cav: CavityParams, model, lam, states=None,
                                n: float = 1.0, eta: float = 0.0, omega: float | None = None) -> FieldSweep:
    """|t_c| at a single probe frequency versus field, one curve per prepared eigenstate.

    States are labelled by their ascending-energy index at each field.
    """
    b_grid = np.asarray(b_grid, dtype=float)
    probe = cav.omega if omega is None else omega
    out = None
    for k, b in enumerate(b_grid):
        sm = build_spectral_model(model, FieldVector.along(direction, b), lam, Pure(0), n=n, eta=eta)
        if out is None:
            states = tuple(range(sm.dim)) if states is None else tuple(states)
            out = np.zeros((len(states), b_grid.size), dtype=complex)
        for row, beta in enumerate(states):
            out[row, k] = transmission_amplitude(probe, cav, sm.prepared(beta))
    if out is None:
        out = np.zeros((0, 0), dtype=complex)
        states = ()
    return FieldSweep(b_grid, states, out)

