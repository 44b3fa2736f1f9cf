"""Spin operators, Stevens operators and the molecular spin Hamiltonians.

Conventions
-----------
* Single-spin basis is ordered by descending projection: M = s, s-1, ..., -s.
* Composite bases are Kronecker products with a fixed factor order:
  ion 1 (x) ion 2 for dimers, electron (x) nucleus for electronuclear models.
* All energies are E/h in GHz, fields in tesla.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

import numpy as np

from .constants import MU_B, MU_N
from .errors import InvalidArgumentError, UnsupportedOperatorError

HERMITIAN_TOL = 1e-12


def _as_half_integer(s) -> float:
    try:
        two_s = Fraction(s).limit_denominator(1000) * 2
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"spin must be a half-integer, got {s!r}") from None
    if two_s.denominator != 1 or two_s < 0 or abs(float(two_s) - 2 * float(s)) > 1e-12:
        raise InvalidArgumentError(f"spin must be a non-negative half-integer, got {s!r}")
    return float(two_s) / 2


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and np.max(np.abs(a - a.conj().T), initial=0.0) < tol


@dataclass(frozen=True)
class SpinOps:
    s: float
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray
    splus: np.ndarray
    sminus: np.ndarray

    @property
    def dim(self) -> int:
        return self.sz.shape[0]

    @property
    def vector(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.sx, self.sy, self.sz)

    @property
    def m(self) -> np.ndarray:
        """Projections in basis order."""
        return np.real(np.diag(self.sz))


def spin_matrices(s) -> SpinOps:
    s = _as_half_integer(s)
    dim = int(round(2 * s)) + 1
    m = s - np.arange(dim)
    splus = np.zeros((dim, dim), dtype=complex)
    # <M+1|S+|M> sits one row above M in descending order
    for i in range(1, dim):
        splus[i - 1, i] = np.sqrt(s * (s + 1) - m[i] * (m[i] + 1))
    sminus = splus.conj().T
    sx = 0.5 * (splus + sminus)
    sy = -0.5j * (splus - sminus)
    sz = np.diag(m).astype(complex)
    return SpinOps(s, sx, sy, sz, splus, sminus)


_STEVENS_BUILTIN = {(2, -2), (2, -1), (2, 0), (2, 1), (2, 2)}


def stevens_operator(k: int, q: int, s) -> np.ndarray:
    """Rank-2 extended Stevens operator O_k^q(S).

    Only k = 2 is built in; higher ranks must be supplied as raw matrices
    through ``GiantSpinConfig.raw_terms``.
    """
    s = _as_half_integer(s)
    if abs(q) > k or k < 0:
        raise InvalidArgumentError(f"invalid Stevens indices (k={k}, q={q})")
    if k > 2 * s:
        raise InvalidArgumentError(f"O_{k}^{q} vanishes identically for s={s}")
    if (k, q) not in _STEVENS_BUILTIN:
        raise UnsupportedOperatorError(
            f"O_{k}^{q} has no built-in definition; supply it as a raw matrix"
        )
    op = spin_matrices(s)
    sx, sy, sz = op.vector
    if q == 0:
        return 3 * sz @ sz - s * (s + 1) * np.eye(op.dim)
    if q == 2:
        return sx @ sx - sy @ sy
    if q == -2:
        return sx @ sy + sy @ sx
    if q == 1:
        return 0.5 * (sz @ sx + sx @ sz)
    return 0.5 * (sz @ sy + sy @ sz)


# ---------------------------------------------------------------- configs


@dataclass(frozen=True)
class FieldVector:
    bx: float = 0.0
    by: float = 0.0
    bz: float = 0.0

    def __post_init__(self):
        if not np.all(np.isfinite(self.as_array())):
            raise InvalidArgumentError("field components must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.bx, self.by, self.bz], dtype=float)

    @classmethod
    def along(cls, direction, magnitude: float) -> "FieldVector":
        d = np.asarray(direction, dtype=float)
        norm = np.linalg.norm(d)
        if norm == 0:
            raise InvalidArgumentError("field direction must be nonzero")
        return cls(*(magnitude * d / norm))


@dataclass(frozen=True)
class CouplingVector:
    """Zero-point coupling lambda = mu_B * B_rms in GHz per unit g-factor.

    ``nuclear`` holds lambda_I = mu_N * B_rms for electronuclear models.
    """

    lx: float = 0.0
    ly: float = 0.0
    lz: float = 0.0
    nuclear: tuple[float, float, float] | None = None

    def as_array(self) -> np.ndarray:
        return np.array([self.lx, self.ly, self.lz], dtype=float)

    def nuclear_array(self) -> np.ndarray:
        if self.nuclear is None:
            return np.zeros(3)
        return np.asarray(self.nuclear, dtype=float)

    def with_nuclear_scaled(self) -> "CouplingVector":
        """Same B_rms seen by the nucleus: lambda_I = lambda_S * mu_N / mu_B."""
        return CouplingVector(self.lx, self.ly, self.lz, tuple(self.as_array() * MU_N / MU_B))

    def scaled(self, factor: float) -> "CouplingVector":
        nuc = None if self.nuclear is None else tuple(factor * self.nuclear_array())
        return CouplingVector(*(factor * self.as_array()), nuclear=nuc)


def _g_tensor(g) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.shape == (3,):
        return np.diag(g)
    if g.shape == (3, 3):
        return g
    raise InvalidArgumentError(f"g must be a 3-vector or 3x3 matrix, got shape {g.shape}")


@dataclass(frozen=True)
class GiantSpinConfig:
    """Single effective spin with anisotropy and Zeeman coupling.

    ``axial_d`` adds D*Sz^2 with no constant offset (the S=1 toy model);
    ``raw_terms`` carries caller-built Hermitian matrices (e.g. k=4,6 terms).
    """

    s: float
    stevens: Mapping[tuple[int, int], float] = field(default_factory=dict)
    g: np.ndarray = field(default_factory=lambda: 2.0 * np.eye(3))
    zeeman_sign: int = 1
    axial_d: float = 0.0
    raw_terms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "s", _as_half_integer(self.s))
        object.__setattr__(self, "g", _g_tensor(self.g))
        if self.zeeman_sign not in (1, -1):
            raise InvalidArgumentError("zeeman_sign must be +1 or -1")
        dim = int(round(2 * self.s)) + 1
        for term in self.raw_terms:
            term = np.asarray(term)
            if term.shape != (dim, dim) or not is_hermitian(term):
                raise InvalidArgumentError("raw terms must be Hermitian and match 2s+1")

    @property
    def dim(self) -> int:
        return int(round(2 * self.s)) + 1


@dataclass(frozen=True)
class DimerConfig:
    """Two exchange-coupled spins; ion 2's g-tensor is rotated by ``theta`` in x-z."""

    s1: float = 0.5
    s2: float = 0.5
    g1_diag: tuple = (1.0, 1.0, 1.0)
    g2_diag: tuple = (1.0, 1.0, 1.0)
    theta: float = 0.0
    j12: float = 0.0
    gj1: float = 1.0
    gj2: float = 1.0
    zeeman_sign: int = -1

    def __post_init__(self):
        object.__setattr__(self, "s1", _as_half_integer(self.s1))
        object.__setattr__(self, "s2", _as_half_integer(self.s2))
        if not (0.0 <= self.theta < np.pi):
            raise InvalidArgumentError("theta must lie in [0, pi)")
        if not np.isfinite(self.j12):
            raise InvalidArgumentError("j12 must be finite")
        if self.gj1 == 0 or self.gj2 == 0:
            raise InvalidArgumentError("Lande factors must be nonzero")
        if self.zeeman_sign not in (1, -1):
            raise InvalidArgumentError("zeeman_sign must be +1 or -1")

    @property
    def dim(self) -> int:
        return (int(round(2 * self.s1)) + 1) * (int(round(2 * self.s2)) + 1)

    @property
    def g1(self) -> np.ndarray:
        return np.diag(np.asarray(self.g1_diag, dtype=float))

    @property
    def g2(self) -> np.ndarray:
        return rotated_g_tensor(self.g2_diag, self.theta)


@dataclass(frozen=True)
class ElectroNuclearConfig:
    s: float = 0.5
    i: float = 2.5
    g_perp: float = 2.0
    g_par: float = 2.0
    g_i: float = 0.0
    a_par: float = 0.0
    a_perp: float = 0.0
    p: float = 0.0
    zeeman_sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "s", _as_half_integer(self.s))
        object.__setattr__(self, "i", _as_half_integer(self.i))
        if self.zeeman_sign not in (1, -1):
            raise InvalidArgumentError("zeeman_sign must be +1 or -1")

    @property
    def dim(self) -> int:
        return (int(round(2 * self.s)) + 1) * (int(round(2 * self.i)) + 1)

    @property
    def g(self) -> np.ndarray:
        return np.diag([self.g_perp, self.g_perp, self.g_par])


ModelConfig = Union[GiantSpinConfig, DimerConfig, ElectroNuclearConfig]


def rotated_g_tensor(g_diag, theta: float) -> np.ndarray:
    """R diag(g) R^T for a rotation by theta in the x-z plane."""
    c, s = np.cos(theta), np.sin(theta)
    rot = np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    return rot @ np.diag(np.asarray(g_diag, dtype=float)) @ rot.T


def _dot(vec: np.ndarray, g: np.ndarray, ops: Sequence[np.ndarray]) -> np.ndarray:
    """vec . g . (Ox, Oy, Oz)"""
    w = vec @ g
    return w[0] * ops[0] + w[1] * ops[1] + w[2] * ops[2]


def _embed(ops: Sequence[np.ndarray], left: int, right: int) -> list[np.ndarray]:
    return [np.kron(np.kron(np.eye(left), o), np.eye(right)) for o in ops]


# ---------------------------------------------------------------- Hamiltonians


def giant_spin_hamiltonian(cfg: GiantSpinConfig, b: FieldVector) -> np.ndarray:
    op = spin_matrices(cfg.s)
    h = np.zeros((op.dim, op.dim), dtype=complex)
    for (k, q), coeff in sorted(cfg.stevens.items()):
        if coeff != 0:
            h += coeff * stevens_operator(k, q, cfg.s)
    if cfg.axial_d:
        h += cfg.axial_d * (op.sz @ op.sz)
    for term in cfg.raw_terms:
        h += np.asarray(term, dtype=complex)
    h += cfg.zeeman_sign * MU_B * _dot(b.as_array(), cfg.g, op.vector)
    return h


def dimer_operators(cfg: DimerConfig) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Spin vectors of ion 1 and ion 2 in the joint basis."""
    o1, o2 = spin_matrices(cfg.s1), spin_matrices(cfg.s2)
    return _embed(o1.vector, 1, o2.dim), _embed(o2.vector, o1.dim, 1)


def dimer_hamiltonian(cfg: DimerConfig, b: FieldVector) -> np.ndarray:
    s1, s2 = dimer_operators(cfg)
    g1, g2 = cfg.g1, cfg.g2
    bvec = b.as_array()
    h = cfg.zeeman_sign * MU_B * (_dot(bvec, g1, s1) + _dot(bvec, g2, s2))
    # (g1 . S1) . (g2 . S2)
    gs1 = [sum(g1[j, k] * s1[k] for k in range(3)) for j in range(3)]
    gs2 = [sum(g2[j, k] * s2[k] for k in range(3)) for j in range(3)]
    h = h - cfg.j12 / (cfg.gj1 * cfg.gj2) * sum(gs1[j] @ gs2[j] for j in range(3))
    return h


def electronuclear_operators(cfg: ElectroNuclearConfig) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Electron and nuclear spin vectors in the electron (x) nucleus basis."""
    se, si = spin_matrices(cfg.s), spin_matrices(cfg.i)
    return _embed(se.vector, 1, si.dim), _embed(si.vector, se.dim, 1)


def electronuclear_hamiltonian(cfg: ElectroNuclearConfig, b: FieldVector) -> np.ndarray:
    s, i = electronuclear_operators(cfg)
    bvec = b.as_array()
    h = cfg.zeeman_sign * MU_B * _dot(bvec, cfg.g, s)
    h = h + cfg.zeeman_sign * MU_N * cfg.g_i * _dot(bvec, np.eye(3), i)
    h = h + cfg.p * (i[2] @ i[2])
    h = h + cfg.a_par * (s[2] @ i[2]) + cfg.a_perp * (s[0] @ i[0] + s[1] @ i[1])
    return h


def hamiltonian(cfg: ModelConfig, b: FieldVector) -> np.ndarray:
    if isinstance(cfg, GiantSpinConfig):
        return giant_spin_hamiltonian(cfg, b)
    if isinstance(cfg, DimerConfig):
        return dimer_hamiltonian(cfg, b)
    if isinstance(cfg, ElectroNuclearConfig):
        return electronuclear_hamiltonian(cfg, b)
    raise InvalidArgumentError(f"unknown model config {type(cfg).__name__}")


def coupling_operator(cfg: ModelConfig, lam: CouplingVector) -> np.ndarray:
    """Spin part V of the spin-photon interaction (a + a^dagger) V."""
    lvec = lam.as_array()
    if not np.all(np.isfinite(lvec)) or not np.all(np.isfinite(lam.nuclear_array())):
        raise InvalidArgumentError("coupling components must be finite")
    if isinstance(cfg, GiantSpinConfig):
        return _dot(lvec, cfg.g, spin_matrices(cfg.s).vector)
    if isinstance(cfg, DimerConfig):
        s1, s2 = dimer_operators(cfg)
        return _dot(lvec, cfg.g1, s1) + _dot(lvec, cfg.g2, s2)
    if isinstance(cfg, ElectroNuclearConfig):
        s, i = electronuclear_operators(cfg)
        return _dot(lvec, cfg.g, s) + cfg.g_i * _dot(lam.nuclear_array(), np.eye(3), i)
    raise InvalidArgumentError(f"unknown model config {type(cfg).__name__}")


# ---------------------------------------------------------------- molecule presets


def toy_s1_config(d: float, g=(2.0, 2.0, 2.0)) -> GiantSpinConfig:
    """S=1 with D*Sz^2 (ground level at exactly zero energy for B=0)."""
    return GiantSpinConfig(s=1, g=g, axial_d=d, zeeman_sign=1)


def toy_field_for_xi(xi_z: float, g_z: float = 2.0) -> FieldVector:
    """Longitudinal field giving Zeeman energy xi_z = g_z mu_B b_z."""
    return FieldVector(0.0, 0.0, xi_z / (g_z * MU_B))


def gdw30_config(d: float = 1.281, e: float = 0.294, g: float = 2.0) -> GiantSpinConfig:
    return GiantSpinConfig(
        s=3.5, stevens={(2, 0): d / 3, (2, 2): e}, g=g * np.eye(3), zeeman_sign=-1
    )


def ceer_config(j12_over_kb: float = -0.015, theta_deg: float = 70.0) -> DimerConfig:
    from .constants import K_B

    return DimerConfig(
        s1=0.5,
        s2=0.5,
        g1_diag=(1.8, 3.7, 10.0),
        g2_diag=(1.0, 1.75, 2.67),
        theta=np.deg2rad(theta_deg),
        j12=j12_over_kb * K_B,
        gj1=6 / 5,
        gj2=6 / 7,
        zeeman_sign=-1,
    )


def yb_trensal_config() -> ElectroNuclearConfig:
    return ElectroNuclearConfig(
        s=0.5, i=2.5, g_perp=2.935, g_par=4.225, g_i=-0.02592,
        a_par=-0.897, a_perp=-0.615, p=-0.066, zeeman_sign=1,
    )
