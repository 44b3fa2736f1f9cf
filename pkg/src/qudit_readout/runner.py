"""Execute a parsed scenario and write its output files."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import export
from .config import Scenario
from .dispersive import qnd_commutator, sw_vs_ed_compare
from .eigen import Pure, build_spectral_model
from .errors import ConfigError
from .inout import field_sweep_fixed_frequency, shift_table, transmission_spectrum
from .model import FieldVector
from .optimize import optimize_working_point


@dataclass
class RunResult:
    task: str
    files: list
    summary: str = ""


def _model(scn: Scenario, preparation=None):
    prep = scn.preparation if preparation is None else preparation
    return build_spectral_model(scn.model, scn.field, scn.coupling, prep, n=scn.n, eta=scn.eta,
                                warn_degenerate=True)


def _states(scn: Scenario, dim: int):
    return tuple(range(dim)) if scn.states is None else scn.states


def run_spectrum(scn: Scenario, outdir: Path, svg: bool) -> RunResult:
    start, stop, points = scn.task_params["grid"]
    grid = np.linspace(start, stop, points)
    sm = _model(scn)
    if isinstance(scn.preparation, Pure):
        traces = [(b, transmission_spectrum(grid, scn.cavity, sm.prepared(b))) for b in _states(scn, sm.dim)]
    else:
        traces = [(-1, transmission_spectrum(grid, scn.cavity, sm))]
    files = [export.export_csv(traces, outdir / f"{scn.name}_spectrum.csv")]
    if svg:
        curves = [(f"state {i}" if i >= 0 else "mixed", tr.omega_grid, tr.abs_t) for i, tr in traces]
        files.append(export.export_svg(curves, outdir / f"{scn.name}_spectrum.svg"))
    peaks = ", ".join(f"{i}: {tr.peak()[0]:.7f} GHz" for i, tr in traces if len(tr))
    return RunResult("spectrum", files, f"peak positions {peaks}")


def run_shifts(scn: Scenario, outdir: Path, at_omega: bool = False) -> RunResult:
    sm = _model(scn)
    table = shift_table(sm, scn.cavity, scn.cavity.omega if at_omega else None)
    path = export.export_shifts_csv(table.shifts, outdir / f"{scn.name}_shifts.csv")
    lines = [f"{i:4d}  {s.real * 1e3:+.6f} MHz  {s.imag * 1e3:+.3e} MHz" for i, s in enumerate(table.shifts)]
    return RunResult("shifts", [path], "state  Re shift  Im shift\n" + "\n".join(lines))


def run_field_sweep(scn: Scenario, outdir: Path, svg: bool) -> RunResult:
    start, stop, points = scn.task_params["sweep"]
    probe = scn.task_params.get("probe_ghz")
    sweep = field_sweep_fixed_frequency(np.linspace(start, stop, points), scn.direction, scn.cavity,
                                        scn.model, scn.coupling, states=scn.states, n=scn.n, eta=scn.eta,
                                        omega=probe)
    files = [export.export_sweep_csv(sweep, outdir / f"{scn.name}_field_sweep.csv")]
    if svg:
        curves = [(f"state {b}", sweep.fields, sweep.abs_t[r]) for r, b in enumerate(sweep.states)]
        files.append(export.export_svg(curves, outdir / f"{scn.name}_field_sweep.svg", xlabel="B (T)"))
    return RunResult("field-sweep", files, f"{len(sweep.states)} states x {points} fields")


def run_sw_check(scn: Scenario, outdir: Path) -> RunResult:
    start, stop, points = scn.task_params["sweep"]
    grid = [FieldVector.along(scn.direction, b) for b in np.linspace(start, stop, points)]
    cmp = sw_vs_ed_compare(scn.model, scn.cavity, scn.coupling, scn.task_params["n_max"], grid,
                           scn.task_params["photons"])
    rows = [(float(np.linalg.norm(b.as_array())), d, o, int(f))
            for b, d, o, f in zip(cmp.fields, cmp.discrepancy, cmp.min_overlap, cmp.flagged)]
    path = export.write_rows(outdir / f"{scn.name}_sw_check.csv",
                             ("field_t", "discrepancy_ghz", "min_overlap", "flagged"), rows)
    ok = ~cmp.flagged
    worst = float(np.max(cmp.discrepancy[ok])) if np.any(ok) else float("nan")
    return RunResult("sw-check", [path], f"max discrepancy in dispersive regime {worst:.3e} GHz, "
                                         f"{int(np.sum(cmp.flagged))} flagged points")


def run_qnd(scn: Scenario, outdir: Path) -> RunResult:
    sm = build_spectral_model(scn.model, scn.field, scn.coupling, Pure(0))
    rep = qnd_commutator(sm, scn.cavity)
    d = sm.dim
    rows = [(i, j, rep.phi[i, j].real, rep.phi[i, j].imag, rep.commutator[i, j].real, rep.commutator[i, j].imag)
            for i in range(d) for j in range(d)]
    path = export.write_rows(outdir / f"{scn.name}_qnd.csv",
                             ("row", "col", "re_phi_ghz", "im_phi_ghz", "re_commutator", "im_commutator"), rows)
    return RunResult("qnd", [path], f"commutator norm {rep.norm:.6e}, normalized {rep.normalized_norm:.6e}")


def run_optimize(scn: Scenario, outdir: Path) -> RunResult:
    opt = scn.task_params.get("optimize")
    if opt is None:
        raise ConfigError("optimize needs a task of kind 'optimize' or a top-level 'optimize' block",
                          None, scn.source)
    res = optimize_working_point(
        scn.model, scn.cavity, scn.coupling, opt["magnitude"],
        direction=None if opt["directions"] else scn.direction, directions=opt["directions"],
        n=scn.n, refine_levels=opt["refine_levels"],
    )
    b = res.field.as_array() if res.field is not None else np.full(3, np.nan)
    files = [export.write_rows(outdir / f"{scn.name}_optimize.csv",
                               ("bx_t", "by_t", "bz_t", "objective_ghz", "feasible", "guard_ok"),
                               [(b[0], b[1], b[2], res.objective, int(res.feasible), int(res.guard_ok))])]
    if res.feasible:
        files.append(export.export_shifts_csv(res.shifts, outdir / f"{scn.name}_optimize_shifts.csv"))
        summary = (f"optimum B = ({b[0]:.6g}, {b[1]:.6g}, {b[2]:.6g}) T, "
                   f"min shift gap {res.objective * 1e3:.6g} MHz")
    else:
        diag = ", ".join(f"{k}={v}" for k, v in res.diagnostics.items())
        summary = f"no feasible working point ({diag})"
    return RunResult("optimize", files, summary)


def run_scenario(scn: Scenario, outdir, svg: bool | None = None) -> RunResult:
    outdir = Path(outdir)
    p = scn.task_params
    want_svg = p.get("svg", False) if svg is None else svg
    if scn.task == "spectrum":
        return run_spectrum(scn, outdir, want_svg)
    if scn.task == "field-sweep":
        return run_field_sweep(scn, outdir, want_svg)
    if scn.task == "shifts":
        return run_shifts(scn, outdir, p.get("at_omega", False))
    if scn.task == "sw-check":
        return run_sw_check(scn, outdir)
    if scn.task == "qnd":
        return run_qnd(scn, outdir)
    return run_optimize(scn, outdir)
