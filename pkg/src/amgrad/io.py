"""Readers and writers for fronts, traces and scatter plots."""

import csv
import io
import json
import re
from pathlib import Path

import numpy as np

from .exceptions import InputError

__all__ = [
    "write_front_csv",
    "read_front_csv",
    "read_objectives_csv",
    "write_traces_jsonl",
    "read_traces_jsonl",
    "write_trace_summary_csv",
    "read_trace_summary_csv",
    "front_svg",
]


def _fmt(value):
    return repr(float(value))


def write_front_csv(path, result, n, m):
    """One row per subproblem: ``x1..xn, F1..Fm, subproblem, termination``.

    Subproblems without a terminal point get empty ``x`` and ``F`` cells.
    """
    header = [f"x{i + 1}" for i in range(n)] + [f"F{j + 1}" for j in range(m)] + ["subproblem", "termination"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for (x, f), trace in zip(result.points, result.traces):
        if x is None:
            cells = [""] * (n + m)
        else:
            cells = [_fmt(v) for v in x] + [_fmt(v) for v in f]
        writer.writerow(cells + [trace.subproblem, trace.termination])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def read_front_csv(path):
    """Return ``(X, F, subproblems, terminations)``; rows with empty cells become NaN."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        return np.zeros((0, 0)), np.zeros((0, 0)), [], []
    xcols = [c for c in rows[0] if re.fullmatch(r"x\d+", c)]
    fcols = [c for c in rows[0] if re.fullmatch(r"F\d+", c)]

    def num(cell):
        return float(cell) if cell != "" else np.nan

    X = np.array([[num(r[c]) for c in xcols] for r in rows]).reshape(len(rows), len(xcols))
    F = np.array([[num(r[c]) for c in fcols] for r in rows]).reshape(len(rows), len(fcols))
    subs = [int(r["subproblem"]) for r in rows] if "subproblem" in rows[0] else list(range(len(rows)))
    terms = [r.get("termination", "") for r in rows]
    return X, F, subs, terms


def read_objectives_csv(path):
    """Objective vectors (columns ``F1..Fm``) of every complete row of a front file."""
    _, F, _, _ = read_front_csv(path)
    if F.shape[1] == 0:
        raise InputError(f"{path}: no F1..Fm columns found")
    return F[np.all(np.isfinite(F), axis=1)]


def write_traces_jsonl(path, traces):
    with open(path, "w", encoding="utf-8") as fh:
        for trace in traces:
            for rec in trace.iterations:
                fh.write(json.dumps(rec.to_dict()) + "\n")


def read_traces_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def write_trace_summary_csv(path, traces, m):
    header = ["subproblem", "iter"] + [f"F{j + 1}" for j in range(m)] + ["alpha", "theta", "passed"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for trace in traces:
            for rec in trace.iterations:
                passed = "" if rec.passed is None else int(rec.passed)
                writer.writerow([rec.subproblem, rec.iteration, *map(_fmt, rec.F),
                                 _fmt(rec.alpha), _fmt(rec.theta), passed])


def read_trace_summary_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def _scatter_panel(points, i, j, x0, y0, size, pad=30):
    xs, ys = points[:, i], points[:, j]
    lo_x, hi_x = float(xs.min()), float(xs.max())
    lo_y, hi_y = float(ys.min()), float(ys.max())
    span_x = hi_x - lo_x or 1.0
    span_y = hi_y - lo_y or 1.0
    inner = size - 2 * pad
    parts = [
        f'<rect x="{x0 + pad}" y="{y0 + pad}" width="{inner}" height="{inner}" '
        'fill="none" stroke="#444"/>',
        f'<text x="{x0 + size / 2}" y="{y0 + size - 6}" text-anchor="middle" font-size="12">F{i + 1}</text>',
        f'<text x="{x0 + 10}" y="{y0 + size / 2}" font-size="12" '
        f'transform="rotate(-90 {x0 + 10} {y0 + size / 2})" text-anchor="middle">F{j + 1}</text>',
    ]
    for a, b in zip(xs, ys):
        cx = x0 + pad + (a - lo_x) / span_x * inner
        cy = y0 + pad + inner - (b - lo_y) / span_y * inner
        parts.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="3.5" fill="#1f77b4"/>')
    return parts


def front_svg(objectives, title="", size=320):
    """Objective-space scatter; three objectives give three pairwise panels."""
    pts = np.asarray(objectives, dtype=np.float64)
    pts = pts[np.all(np.isfinite(pts), axis=1)] if pts.size else pts.reshape(0, 2)
    m = pts.shape[1] if pts.ndim == 2 else 2
    pairs = [(0, 1)] if m == 2 else [(0, 1), (0, 2), (1, 2)]
    width = size * len(pairs)
    body = [f'<text x="{width / 2}" y="16" text-anchor="middle" font-size="14">{title}</text>']
    if pts.shape[0]:
        for p, (i, j) in enumerate(pairs):
            body += _scatter_panel(pts, i, j, p * size, 20, size)
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{size + 20}">\n'
            + "\n".join(body) + "\n</svg>\n")
