"""Plot-data tables and minimal SVG charts built from sweep results."""

from __future__ import annotations

import math
from collections import defaultdict
from typing import Sequence

import numpy as np

from .harness import CURVE_HEADER, _csv, aggregate_critical, curve_rows, fold_angles

__all__ = ["FIGURES", "MissingDataError", "figure_csv", "figure_svg"]

FIGURES = ("fig2", "fig3", "fig4", "fig5", "fig6")

CRITICAL_HEADER = ["problem", "D", "n", "method", "mean_depth", "std_depth", "absent",
                   "mean_p", "std_p"]
ANGLE_HEADER = ["problem", "D", "n", "method", "layer", "mean_beta", "std_beta",
                "mean_gamma", "std_gamma"]


class MissingDataError(KeyError):
    def __str__(self):
        return str(self.args[0])


def _require(cells: list[dict], methods: Sequence[str], figure: str) -> None:
    if not cells:
        raise MissingDataError(f"{figure}: results contain no cells")
    for cell in cells:
        have = set(cell["curves"])
        for m in methods:
            if m not in have:
                raise MissingDataError(
                    f"{figure}: cell {cell['problem']} n={cell['n']} D={cell['D']} lacks method {m}")


def _critical_rows(cells: list[dict], method: str) -> list[list]:
    by_d = defaultdict(list)
    for cell in cells:
        by_d[(cell["problem"], cell["D"])].append(cell)
    rows = []
    for (problem, d), group in sorted(by_d.items()):
        for r in aggregate_critical(group, method):
            rows.append([problem, d, r["n"], method, r["mean_depth"], r["std_depth"], r["absent"],
                         r["mean_p"], r["std_p"]])
    return rows


def _angle_rows(cells: list[dict]) -> list[list]:
    rows = []
    for cell in cells:
        for m in ("GMa", "GMc"):
            if m not in cell["curves"]:
                continue
            folded = [fold_angles(r["schedules"][m]["betas"], r["schedules"][m]["gammas"])
                      for r in cell["instances"]]
            betas = np.array([b for b, _ in folded])
            gammas = np.array([g for _, g in folded])
            for k in range(betas.shape[1]):
                rows.append([cell["problem"], cell["D"], cell["n"], m, k + 1,
                             float(betas[:, k].mean()), float(betas[:, k].std()),
                             float(gammas[:, k].mean()), float(gammas[:, k].std())])
    return rows


def figure_csv(cells: list[dict], figure: str) -> str:
    """CSV text for one figure.

    fig2: mean P vs depth for XM and GM.  fig3: GM-over-XM critical depth vs n.
    fig4: folded GMa/GMc angles vs layer.  fig5: all methods vs depth.
    fig6: GMa-over-XM critical depth vs n.
    """
    if figure == "fig2":
        _require(cells, ("XM", "GM"), figure)
        return _csv(CURVE_HEADER, curve_rows(cells, ("XM", "GM")))
    if figure == "fig3":
        _require(cells, ("XM", "GM"), figure)
        return _csv(CRITICAL_HEADER, _critical_rows(cells, "GM"))
    if figure == "fig4":
        _require(cells, ("GMa",), figure)
        return _csv(ANGLE_HEADER, _angle_rows(cells))
    if figure == "fig5":
        present = [m for m in ("XM", "GM", "GMa", "GMc") if m in cells[0]["curves"]] if cells else []
        _require(cells, present or ("GM",), figure)
        return _csv(CURVE_HEADER, curve_rows(cells, present))
    if figure == "fig6":
        _require(cells, ("XM", "GMa"), figure)
        return _csv(CRITICAL_HEADER, _critical_rows(cells, "GMa"))
    raise ValueError(f"unknown figure {figure!r}; expected one of {FIGURES}")


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


def line_chart_svg(series: dict[str, tuple[Sequence[float], Sequence[float]]],
                   xlabel: str, ylabel: str, title: str = "") -> str:
    """Self-contained SVG with one polyline per named series."""
    width, height, pad = 640, 400, 56
    xs = [x for xv, _ in series.values() for x in xv]
    ys = [y for _, yv in series.values() for y in yv if y is not None and math.isfinite(y)]
    if not xs or not ys:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(0.0, min(ys)), max(ys)
    x1 = x1 if x1 > x0 else x0 + 1
    y1 = y1 if y1 > y0 else y0 + 1

    def sx(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def sy(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
           '<rect width="100%" height="100%" fill="white"/>',
           f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
           f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
           f'<text x="{width / 2}" y="{height - 16}" text-anchor="middle">{xlabel}</text>',
           f'<text x="16" y="{height / 2}" text-anchor="middle" '
           f'transform="rotate(-90 16 {height / 2})">{ylabel}</text>',
           f'<text x="{width / 2}" y="24" text-anchor="middle">{title}</text>',
           f'<text x="{pad}" y="{height - pad + 16}" text-anchor="middle">{x0:g}</text>',
           f'<text x="{width - pad}" y="{height - pad + 16}" text-anchor="middle">{x1:g}</text>',
           f'<text x="{pad - 6}" y="{height - pad}" text-anchor="end">{y0:.3g}</text>',
           f'<text x="{pad - 6}" y="{pad + 4}" text-anchor="end">{y1:.3g}</text>']
    for i, (name, (xv, yv)) in enumerate(series.items()):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xv, yv)
                       if y is not None and math.isfinite(y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{width - pad + 4}" y="{pad + 14 * i}" fill="{color}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def figure_svg(cells: list[dict], figure: str) -> str:
    figure_csv(cells, figure)  # validates presence of the data
    series = {}
    if figure in ("fig2", "fig5"):
        methods = ("XM", "GM") if figure == "fig2" else ("XM", "GM", "GMa", "GMc")
        for cell in cells:
            for m in methods:
                if m in cell["curves"]:
                    mean = cell["curves"][m]["mean"]
                    series[f"{m} n={cell['n']} D={cell['D']}"] = (range(1, len(mean) + 1), mean)
        return line_chart_svg(series, "depth", "P(E_min)", figure)
    if figure in ("fig3", "fig6"):
        method = "GM" if figure == "fig3" else "GMa"
        for row in _critical_rows(cells, method):
            series.setdefault(f"{row[0]} D={row[1]}", ([], []))
            series[f"{row[0]} D={row[1]}"][0].append(row[2])
            series[f"{row[0]} D={row[1]}"][1].append(row[4])
        return line_chart_svg(series, "n", "critical depth", figure)
    for row in _angle_rows(cells):
        key = f"{row[3]} beta n={row[2]} D={row[1]}"
        series.setdefault(key, ([], []))
        series[key][0].append(row[4])
        series[key][1].append(row[5])
    return line_chart_svg(series, "layer", "beta", figure)
