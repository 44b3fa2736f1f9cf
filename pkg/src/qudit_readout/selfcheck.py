"""Invariant suite run by ``qudit-readout selfcheck``."""

from __future__ import annotations

import tempfile
import time
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import bundled_scenarios, parse_scenario
from .dispersive import effective_hamiltonian
from .eigen import EigenSystem, Pure, SpectralModel, build_spectral_model, lambda_tensor
from .errors import DispersiveRegimeWarning
from .inout import CavityParams, shift_table, transmission_values
from .model import (
    CouplingVector,
    FieldVector,
    ceer_config,
    coupling_operator,
    gdw30_config,
    hamiltonian,
    is_hermitian,
    toy_s1_config,
    yb_trensal_config,
)
from .runner import run_scenario

SEED = 20240611


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _cases():
    """(label, config, field, coupling, cavity) for the four molecule families."""
    return [
        ("toy", toy_s1_config(2.87), FieldVector(0, 0, 0.0179), CouplingVector(0.0096, 0, 0),
         CavityParams(2.6899, 4e-5, 4e-5)),
        ("gdw30", gdw30_config(), FieldVector(0.1475, 0.04425, 0.04425), CouplingVector(0, 1.4e-9, 0),
         CavityParams(5.0, 1e-6, 1e-6)),
        ("ceer", ceer_config(), FieldVector(0, 0, 0.02), CouplingVector(1.4e-9, 0, 0),
         CavityParams(2.45, 1e-4, 1e-4)),
        ("yb", yb_trensal_config(), FieldVector(0, 0, 0.1), CouplingVector(0.02, 0, 0).with_nuclear_scaled(),
         CavityParams(6.0, 5e-7, 5e-7)),
    ]


def check_hermiticity():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for label, cfg, b, lam, _ in _cases():
        for _ in range(3):
            bb = FieldVector(*(b.as_array() + 0.05 * rng.standard_normal(3)))
            h = hamiltonian(cfg, bb)
            v = coupling_operator(cfg, lam)
            sm = build_spectral_model(cfg, bb, lam)
            for m in (h, v, sm.coupling):
                worst = max(worst, float(np.max(np.abs(m - m.conj().T))))
            if not (is_hermitian(h) and is_hermitian(v) and is_hermitian(sm.coupling)):
                return False, f"{label}: non-Hermitian operator"
    return worst < 1e-12, f"max |A - A^dagger| = {worst:.1e}"


def check_n_scaling():
    worst = 0.0
    for label, cfg, b, lam, cav in _cases():
        n = 37.0
        big = build_spectral_model(cfg, b, lam, Pure(0), n=n, eta=1e-4)
        one = SpectralModel(big.eigensystem, np.sqrt(n) * big.coupling, big.populations, 1.0, 1e-4)
        grid = cav.omega + np.linspace(-5e-3, 5e-3, 41)
        ta, tb = transmission_values(grid, cav, big), transmission_values(grid, cav, one)
        worst = max(worst, float(np.max(np.abs(ta - tb) / np.abs(ta))))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DispersiveRegimeWarning)
            sa, sb = shift_table(big, cav).shifts, shift_table(one, cav).shifts
        worst = max(worst, float(np.max(np.abs(sa - sb)) / max(np.max(np.abs(sa)), 1e-300)))
    return worst < 1e-10, f"max relative difference {worst:.1e}"


def check_phase_gauge():
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for label, cfg, b, lam, _ in _cases():
        sm = build_spectral_model(cfg, b, lam)
        es = sm.eigensystem
        phases = np.exp(2j * np.pi * rng.random(es.dim))
        regauged = EigenSystem(es.energies, es.vectors * phases[None, :])
        lam2 = lambda_tensor(regauged, coupling_operator(cfg, lam))
        ref = np.abs(sm.coupling) ** 2
        worst = max(worst, float(np.max(np.abs(np.abs(lam2) ** 2 - ref)) / max(ref.max(), 1e-300)))
    return worst < 1e-12, f"max relative change of |Lambda|^2 {worst:.1e}"


def check_passivity():
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for label, cfg, b, lam, cav in _cases():
        for _ in range(3):
            eta = 10 ** rng.uniform(-5, -1)
            n = 10 ** rng.uniform(0, 14)
            sm = build_spectral_model(cfg, b, lam, Pure(0), n=n, eta=eta)
            grid = cav.omega + np.linspace(-0.05, 0.05, 201)
            ratio = np.abs(transmission_values(grid, cav, sm)) / cav.peak_transmission
            worst = max(worst, float(ratio.max()))
    return worst <= 1 + 1e-12, f"max |t_c| / bound = {worst:.6f}"


def check_s2_scaling():
    worst = 0.0
    s = 0.37
    for label, cfg, b, lam, cav in _cases():
        a = build_spectral_model(cfg, b, lam, Pure(0))
        c = build_spectral_model(cfg, b, lam.scaled(s), Pure(0))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DispersiveRegimeWarning)
            pairs = [(shift_table(a, cav).shifts, shift_table(c, cav).shifts)]
            ea = effective_hamiltonian(a, cav, "full", strict=False)
            ec = effective_hamiltonian(c, cav, "full", strict=False)
        for name in ("lamb", "chi", "const", "number", "create", "annih"):
            pairs.append((getattr(ea, name), getattr(ec, name)))
        for x, y in pairs:
            scale = max(np.max(np.abs(x)), 1e-300)
            worst = max(worst, float(np.max(np.abs(s * s * x - y)) / scale))
    return worst < 1e-12, f"max relative deviation from s^2 law {worst:.1e}"


def check_csv_determinism():
    text = bundled_scenarios()["toy-nv"]
    digests = []
    with tempfile.TemporaryDirectory() as tmp:
        for k in range(2):
            out = Path(tmp) / str(k)
            out.mkdir()
            res = run_scenario(parse_scenario(text, "toy-nv"), out, svg=True)
            digests.append([f.read_bytes() for f in res.files])
    same = digests[0] == digests[1]
    return same, f"{len(digests[0])} files byte-identical" if same else "outputs differ between runs"


CHECKS = (
    ("hermiticity", check_hermiticity),
    ("n-scaling equivalence", check_n_scaling),
    ("phase-gauge invariance", check_phase_gauge),
    ("ground-state passivity", check_passivity),
    ("s^2 scaling", check_s2_scaling),
    ("csv determinism", check_csv_determinism),
)


def run_selfcheck() -> list[CheckResult]:
    results = []
    for name, fn in CHECKS:
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check, not a crashed suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(ok), detail, time.perf_counter() - t0))
    return results
