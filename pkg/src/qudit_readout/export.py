"""CSV and SVG writers. Output bytes depend only on the data."""

from __future__ import annotations

from pathlib import Path

import numpy as np

TRACE_COLUMNS = ("omega_ghz", "re_t", "im_t", "abs_t", "phase_rad", "state_index")
SHIFT_COLUMNS = ("state_index", "re_shift_ghz", "im_shift_ghz")
SWEEP_COLUMNS = ("field_t", "re_t", "im_t", "abs_t", "phase_rad", "state_index")


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def write_rows(path, columns, rows) -> Path:
    path = Path(path)
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def trace_rows(trace, state_index: int):
    for w, t, a, ph in zip(trace.omega_grid, trace.t, trace.abs_t, trace.phase):
        yield (w, t.real, t.imag, a, ph, int(state_index))


def export_csv(traces, path) -> Path:
    """``traces`` is a list of (state_index, TransmissionTrace); -1 marks a mixed preparation."""
    rows = [r for idx, tr in traces for r in trace_rows(tr, idx)]
    return write_rows(path, TRACE_COLUMNS, rows)


def export_shifts_csv(shifts, path) -> Path:
    shifts = np.asarray(shifts, dtype=complex)
    return write_rows(path, SHIFT_COLUMNS, [(i, s.real, s.imag) for i, s in enumerate(shifts)])


def export_sweep_csv(sweep, path) -> Path:
    rows = []
    for row, beta in enumerate(sweep.states):
        phase = np.unwrap(np.angle(sweep.t[row])) if sweep.t.shape[1] else []
        for b, t, ph in zip(sweep.fields, sweep.t[row], phase):
            rows.append((b, t.real, t.imag, abs(t), ph, int(beta)))
    return write_rows(path, SWEEP_COLUMNS, rows)


# ---------------------------------------------------------------- svg

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
            "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939")


def export_svg(curves, path, xlabel: str = "omega (GHz)", ylabel: str = "|t_c|",
               width: int = 640, height: int = 400) -> Path:
    """Line plot of ``curves``, a list of (label, x, y)."""
    left, right, top, bottom = 70, 20, 20, 50
    xs = [np.asarray(x, dtype=float) for _, x, _ in curves]
    ys = [np.asarray(y, dtype=float) for _, _, y in curves]
    allx = np.concatenate(xs) if xs else np.zeros(1)
    ally = np.concatenate(ys) if ys else np.zeros(1)
    if allx.size == 0:
        allx = ally = np.zeros(1)
    x0, x1 = float(allx.min()), float(allx.max())
    y0, y1 = min(0.0, float(ally.min())), float(ally.max())
    x1 = x1 if x1 > x0 else x0 + 1.0
    y1 = y1 if y1 > y0 else y0 + 1.0
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + ph - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
        f'<text x="{left + pw / 2:.1f}" y="{height - 10}" text-anchor="middle" font-size="13">{xlabel}</text>',
        f'<text x="15" y="{top + ph / 2:.1f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 15 {top + ph / 2:.1f})">{ylabel}</text>',
        f'<text x="{left}" y="{top + ph + 18}" font-size="11">{x0:.6g}</text>',
        f'<text x="{left + pw}" y="{top + ph + 18}" font-size="11" text-anchor="end">{x1:.6g}</text>',
        f'<text x="{left - 5}" y="{top + ph}" font-size="11" text-anchor="end">{y0:.3g}</text>',
        f'<text x="{left - 5}" y="{top + 10}" font-size="11" text-anchor="end">{y1:.3g}</text>',
    ]
    for k, ((label, _, _), x, y) in enumerate(zip(curves, xs, ys)):
        color = _PALETTE[k % len(_PALETTE)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
        out.append(f'<text x="{left + pw - 5}" y="{top + 15 + 14 * k}" font-size="11" '
                   f'text-anchor="end" fill="{color}">{label}</text>')
    out.append("</svg>")
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")
    return path
