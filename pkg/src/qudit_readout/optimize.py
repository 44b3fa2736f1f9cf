"""Working-point search: pick the static field that best separates the per-state shifts.

The magnitude axis is a lattice k * step anchored at zero. Each lattice cell is
refined on its own with a fixed zoom schedule, and the optimum is the best
value over all cells, so widening the magnitude range can only add candidates.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .eigen import Pure, build_spectral_model
from .errors import DispersiveRegimeWarning, InvalidArgumentError, SingularEvaluationError
from .inout import CavityParams, shift_table
from .model import FieldVector

SEPARATION_FLOOR = 1e-12  # GHz; below this two shifts count as coincident


@dataclass(frozen=True)
class PointEval:
    field: FieldVector
    objective: float
    shifts: np.ndarray
    guard_ok: bool
    degenerate: bool
    singular: bool = False

    @property
    def feasible(self) -> bool:
        return self.guard_ok and not self.singular and self.objective > SEPARATION_FLOOR


@dataclass(frozen=True)
class WorkingPointResult:
    field: FieldVector | None
    shifts: np.ndarray
    objective: float
    guard_ok: bool
    feasible: bool
    diagnostics: dict = field(default_factory=dict)
    evaluations: int = 0


def min_pairwise_gap(values) -> float:
    v = np.sort(np.real(np.asarray(values)))
    if v.size < 2:
        return 0.0
    return float(np.min(np.diff(v)))


def evaluate_point(model, cav: CavityParams, lam, b: FieldVector, n: float = 1.0) -> PointEval:
    sm = build_spectral_model(model, b, lam, Pure(0), n=n)
    degenerate = bool(sm.eigensystem.degenerate_pairs())
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DispersiveRegimeWarning)
            table = shift_table(sm, cav)
    except SingularEvaluationError:
        return PointEval(b, 0.0, np.full(sm.dim, np.nan), False, degenerate, singular=True)
    return PointEval(b, min_pairwise_gap(table.shifts), table.shifts.real.copy(), table.ok, degenerate)


def _score(p: PointEval) -> float:
    return p.objective if p.feasible else -np.inf


def _direction_grid(polar_points: int, azimuth_points: int) -> list[np.ndarray]:
    """Upper hemisphere; reversed fields give the same spectrum up to time reversal."""
    dirs = [np.array([0.0, 0.0, 1.0])]
    for theta in np.linspace(0, np.pi / 2, polar_points + 1)[1:]:
        for phi in np.arange(azimuth_points) * (2 * np.pi / azimuth_points):
            dirs.append(np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]))
    return dirs


def _refine_cell(evalf, lo: float, hi: float, levels: int, cache: dict):
    """Zoom on the best of five equispaced samples, ``levels`` times."""
    best = None
    a, b = lo, hi
    for _ in range(levels + 1):
        xs = np.linspace(a, b, 5)
        for x in xs:
            key = float(x)
            if key not in cache:
                cache[key] = evalf(key)
            p = cache[key]
            if best is None or _score(p) > _score(best):
                best = p
        h = (b - a) / 4
        c = float(np.linalg.norm(best.field.as_array()))
        a, b = max(lo, c - h), min(hi, c + h)
    return best


def optimize_working_point(model, cav: CavityParams, lam, magnitude, direction=None, directions=None,
                           n: float = 1.0, refine_levels: int = 4) -> WorkingPointResult:
    """Maximize the minimum pairwise real-shift gap subject to the dispersive guard.

    ``magnitude`` is (start_t, stop_t, step_t). Give either a fixed
    ``direction`` or ``directions=(polar_points, azimuth_points)``.
    """
    start, stop, step = (float(x) for x in magnitude)
    if step <= 0 or stop < start or start < 0:
        raise InvalidArgumentError("magnitude range needs 0 <= start <= stop and step > 0")
    if (direction is None) == (directions is None):
        raise InvalidArgumentError("give exactly one of direction or directions")
    dirs = [np.asarray(direction, dtype=float)] if direction is not None else _direction_grid(*directions)

    k0, k1 = int(np.ceil(start / step - 1e-9)), int(np.floor(stop / step + 1e-9))
    lattice = [k * step for k in range(k0, k1 + 1)]
    if not lattice:
        raise InvalidArgumentError("magnitude range contains no lattice point")

    best, count = None, 0
    diag = {"evaluated": 0, "guard_violations": 0, "degenerate": 0, "unseparated": 0, "singular": 0}
    for d in dirs:
        d = d / np.linalg.norm(d)
        cache: dict = {}

        def evalf(mag, d=d):
            return evaluate_point(model, cav, lam, FieldVector.along(d, mag), n)

        cells = [(lattice[i], lattice[i + 1]) for i in range(len(lattice) - 1)] or [(lattice[0], lattice[0])]
        for lo, hi in cells:
            p = _refine_cell(evalf, lo, hi, refine_levels if hi > lo else 0, cache)
            if best is None or _score(p) > _score(best):
                best = p
        for p in cache.values():
            diag["evaluated"] += 1
            diag["guard_violations"] += not p.guard_ok and not p.singular
            diag["degenerate"] += p.degenerate
            diag["unseparated"] += p.objective <= SEPARATION_FLOOR
            diag["singular"] += p.singular
        count += len(cache)

    if not best.feasible:
        return WorkingPointResult(None, np.zeros(0), 0.0, False, False, diag, count)
    return WorkingPointResult(best.field, best.shifts, best.objective, True, True, diag, count)
