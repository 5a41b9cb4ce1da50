"""Deterministic SVG region plots and CSV grid export.

The SVG is assembled as a plain string with fixed 6-decimal coordinates and
sorted legend entries, so identical inputs produce byte-identical files
regardless of thread count or platform dict order.  Axes: p horizontal,
q vertical (increasing upward).

Marked corner points (present when inside the plotted ranges):

  regime A:  E = (0, q_upper)        top of the integrability half-plane
             M = (0, q_lower)        foot of the log-construction line
             A = (p_A, q_upper)      end of the critical curve e1 = 0
             Q = curve exit at the right edge of the plot
  regime B:  E = (0, q_upper),  D = (p_upper, 0)
             B = (p_lower, q_lower)  intersection of the two critical curves
             A = (p_A, q_upper),  C = (p_upper, q_C)  curve endpoints
             F = (0, q_lower),  G = (p_lower, 0)      construction segments

The coordinates follow from the boundary formulas: A and C solve e1 = 0 and
e2 = 0 on the respective closed edges, B solves both simultaneously.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import _kernels as K
from .exponents import HardyParams, Powers
from .regions import _CITATIONS, Verdict, _wrap

# Fill colors per region code: reds for nonexistence, greens for existence,
# yellows for open boundaries, grey outside scope.
_COLORS = {
    K.CODE_OUT_OF_SCOPE: "#bdbdbd",
    K.CODE_T1_I: "#b2182b",
    K.CODE_T1_II: "#ef8a62",
    K.CODE_T2_I: "#b2182b",
    K.CODE_T2_II: "#ef8a62",
    K.CODE_T2_III: "#fddbc7",
    K.CODE_T3_I_CASE1: "#1a9850",
    K.CODE_T3_I_CASE2: "#91cf60",
    K.CODE_T3_I_CASE3: "#d9ef8b",
    K.CODE_T3_II_A1: "#1a9850",
    K.CODE_T3_II_A2: "#91cf60",
    K.CODE_T3_II_B1: "#66bd63",
    K.CODE_T3_II_B2: "#d9ef8b",
    K.CODE_CURVE_AQ: "#ffd92f",
    K.CODE_CURVE_AB: "#ffd92f",
    K.CODE_CURVE_BC: "#ffe99f",
    K.CODE_DOTTED: "#fff7bc",
}

_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 56.0, 248.0, 24.0, 44.0
_PLOT_W, _PLOT_H = 560.0, 560.0


@dataclass(frozen=True)
class PlotSpec:
    """Grid geometry and decoration for one region plot."""

    params: HardyParams
    p_range: Tuple[float, float]
    q_range: Tuple[float, float]
    resolution: int
    title: str = ""
    overlay_samples: int = 256


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def region_markers(params: HardyParams, p_range: Tuple[float, float],
                   q_range: Tuple[float, float]) -> Dict[str, Tuple[float, float]]:
    """Corner points of the region pictures, keyed by their letter."""
    t1 = params.tau1.tau_plus
    t2 = params.tau2.tau_plus
    N = params.N
    markers: Dict[str, Tuple[float, float]] = {}
    regime_a = params.mu1 < 0.0 <= params.mu2
    regime_b = params.mu1 < 0.0 and params.mu2 < 0.0
    swapped_a = params.mu2 < 0.0 <= params.mu1
    if swapped_a:
        sw = region_markers(params.swapped(), q_range, p_range)
        return {name: (xy[1], xy[0]) for name, xy in sw.items()}
    if not (regime_a or regime_b):
        return markers

    qup = (N + t2) / (-t1)
    markers["E"] = (0.0, qup)
    if N - 2 + t2 > 0.0:
        markers["A"] = ((2.0 - t1) / (N - 2 + t2), qup)
    if regime_a:
        qlo = 2.0 / (-t1)
        markers["M"] = (0.0, qlo)
        p_max = p_range[1]
        q_exit = (t1 - 2.0 * p_max - 2.0) / (t1 * p_max)
        if q_range[0] <= q_exit <= q_range[1]:
            markers["Q"] = (p_max, q_exit)
    else:
        pup = (N + t1) / (-t2)
        qlo = (2.0 - t2) / (-t1)
        plo = (2.0 - t1) / (-t2)
        markers["D"] = (pup, 0.0)
        markers["B"] = (plo, qlo)
        markers["F"] = (0.0, qlo)
        markers["G"] = (plo, 0.0)
        if N - 2 + t1 > 0.0:
            markers["C"] = (pup, (2.0 - t2) / (N - 2 + t1))
    return markers


def critical_curve_points(params: HardyParams, which: str,
                          p_range: Tuple[float, float],
                          q_range: Tuple[float, float],
                          samples: int = 256) -> List[Tuple[float, float]]:
    """Sample the curve e1 = 0 (which='e1') or e2 = 0 ('e2') inside the window.

    e1 = 0 is solved for q as a function of p; e2 = 0 for p as a function
    of q.  Points outside the window are dropped.
    """
    t1 = params.tau1.tau_plus
    t2 = params.tau2.tau_plus
    pts: List[Tuple[float, float]] = []
    if which == "e1":
        if t1 >= 0.0:
            return pts
        for p in np.linspace(p_range[0], p_range[1], samples):
            denom = t1 * p
            q = (t1 - 2.0 * p - 2.0) / denom
            if q_range[0] <= q <= q_range[1]:
                pts.append((float(p), float(q)))
    elif which == "e2":
        if t2 >= 0.0:
            return pts
        for q in np.linspace(q_range[0], q_range[1], samples):
            denom = t2 * q
            p = (t2 - 2.0 * q - 2.0) / denom
            if p_range[0] <= p <= p_range[1]:
                pts.append((float(p), float(q)))
    else:
        raise ValueError(f"unknown curve {which!r}")
    return pts


def render_svg(codes: np.ndarray, spec: PlotSpec) -> str:
    """Render the classified grid to an SVG 1.1 document string.

    codes has shape (resolution, resolution), row index = q ascending,
    column index = p ascending, as produced by classify_field.
    """
    res = spec.resolution
    p_lo, p_hi = spec.p_range
    q_lo, q_hi = spec.q_range

    def sx(p: float) -> float:
        return _MARGIN_L + (p - p_lo) / (p_hi - p_lo) * _PLOT_W

    def sy(q: float) -> float:
        return _MARGIN_T + (q_hi - q) / (q_hi - q_lo) * _PLOT_H

    width = _MARGIN_L + _PLOT_W + _MARGIN_R
    height = _MARGIN_T + _PLOT_H + _MARGIN_B
    cell_w = _PLOT_W / res
    cell_h = _PLOT_H / res

    out: List[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
               f'width="{_fmt(width)}" height="{_fmt(height)}" '
               f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">')
    out.append(f'<rect x="0" y="0" width="{_fmt(width)}" '
               f'height="{_fmt(height)}" fill="#ffffff"/>')
    if spec.title:
        out.append(f'<text x="{_fmt(_MARGIN_L)}" y="16" font-size="13" '
                   f'font-family="monospace">{spec.title}</text>')

    # one rect per grid cell, centered on its sample point
    for i in range(res):
        for j in range(res):
            code = int(codes[i, j])
            color = _COLORS.get(code, "#000000")
            x = _MARGIN_L + j * cell_w
            y = _MARGIN_T + (res - 1 - i) * cell_h
            out.append(f'<rect x="{_fmt(x)}" y="{_fmt(y)}" '
                       f'width="{_fmt(cell_w)}" height="{_fmt(cell_h)}" '
                       f'fill="{color}"/>')

    # axes frame
    out.append(f'<rect x="{_fmt(_MARGIN_L)}" y="{_fmt(_MARGIN_T)}" '
               f'width="{_fmt(_PLOT_W)}" height="{_fmt(_PLOT_H)}" '
               f'fill="none" stroke="#000000" stroke-width="1"/>')
    out.append(f'<text x="{_fmt(_MARGIN_L + _PLOT_W / 2)}" '
               f'y="{_fmt(height - 10)}" font-size="12" '
               f'font-family="monospace" text-anchor="middle">p</text>')
    out.append(f'<text x="16" y="{_fmt(_MARGIN_T + _PLOT_H / 2)}" '
               f'font-size="12" font-family="monospace" '
               f'text-anchor="middle">q</text>')
    for val, label_axis in ((p_lo, "x0"), (p_hi, "x1")):
        out.append(f'<text x="{_fmt(sx(val))}" y="{_fmt(height - 26)}" '
                   f'font-size="10" font-family="monospace" '
                   f'text-anchor="middle">{val:g}</text>')
    for val in (q_lo, q_hi):
        out.append(f'<text x="{_fmt(_MARGIN_L - 6)}" y="{_fmt(sy(val) + 3)}" '
                   f'font-size="10" font-family="monospace" '
                   f'text-anchor="end">{val:g}</text>')

    # critical curve overlays
    for which, color in (("e1", "#08306b"), ("e2", "#4a1486")):
        pts = critical_curve_points(spec.params, which, spec.p_range,
                                    spec.q_range, spec.overlay_samples)
        if len(pts) >= 2:
            path = " ".join(f"{_fmt(sx(p))},{_fmt(sy(q))}" for p, q in pts)
            out.append(f'<polyline points="{path}" fill="none" '
                       f'stroke="{color}" stroke-width="1.5" '
                       f'stroke-dasharray="6,3"/>')

    # corner markers; axis intercepts (p = 0 or q = 0) map into the margin
    # strip next to the frame and are kept as long as they stay on canvas
    markers = region_markers(spec.params, spec.p_range, spec.q_range)
    for name in sorted(markers):
        p, q = markers[name]
        if not (6.0 <= sx(p) <= width - 6.0 and 6.0 <= sy(q) <= height - 6.0):
            continue
        out.append(f'<circle cx="{_fmt(sx(p))}" cy="{_fmt(sy(q))}" r="3.5" '
                   f'fill="#000000"/>')
        out.append(f'<text x="{_fmt(sx(p) + 6)}" y="{_fmt(sy(q) - 5)}" '
                   f'font-size="12" font-family="monospace">{name}</text>')

    # legend: one entry per code present in the grid
    present = sorted(set(int(c) for c in codes.ravel()))
    lx = _MARGIN_L + _PLOT_W + 18.0
    ly = _MARGIN_T + 8.0
    out.append(f'<text x="{_fmt(lx)}" y="{_fmt(ly)}" font-size="12" '
               f'font-family="monospace">legend</text>')
    for k, code in enumerate(present):
        y = ly + 16.0 + 16.0 * k
        region = _wrap(code, 0.0, _legend_flags(code))
        out.append(f'<rect x="{_fmt(lx)}" y="{_fmt(y - 9)}" width="12" '
                   f'height="12" fill="{_COLORS.get(code, "#000000")}" '
                   f'stroke="#000000" stroke-width="0.5"/>')
        out.append(f'<text x="{_fmt(lx + 18)}" y="{_fmt(y + 1)}" '
                   f'font-size="11" font-family="monospace">'
                   f'{region.verdict.value}: {region.citation}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _legend_flags(code: int) -> int:
    if code == K.CODE_OUT_OF_SCOPE:
        return 2 << K.REGIME_SHIFT
    return 0


def emit_svg(codes: np.ndarray, spec: PlotSpec, path: str) -> None:
    """Write the SVG; identical inputs produce byte-identical files."""
    text = render_svg(codes, spec)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def grid_csv_lines(codes: np.ndarray, margins: np.ndarray,
                   spec: PlotSpec) -> List[str]:
    """CSV rows (p,q,verdict,citation,margin) in row-major grid order."""
    res = spec.resolution
    p_values = np.linspace(spec.p_range[0], spec.p_range[1], res)
    q_values = np.linspace(spec.q_range[0], spec.q_range[1], res)
    lines = ["p,q,verdict,citation,margin"]
    for i in range(res):
        for j in range(res):
            code = int(codes[i, j])
            region = _wrap(code, margins[i, j], _legend_flags(code))
            lines.append(f"{p_values[j]:.12g},{q_values[i]:.12g},"
                         f"{region.verdict.value},{region.citation},"
                         f"{margins[i, j]:.12g}")
    return lines


def emit_csv(codes: np.ndarray, margins: np.ndarray, spec: PlotSpec,
             path: str) -> None:
    """UTF-8, LF-terminated CSV with a header row."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(grid_csv_lines(codes, margins, spec)) + "\n")
