"""Byte-stream randomness statistics in the style of the classic ENT battery.

Five statistics over a byte buffer: Shannon entropy (bits/byte), chi-square
against the uniform byte distribution (255 degrees of freedom), arithmetic
mean, Monte-Carlo estimate of pi from 24-bit coordinate pairs, and the
wraparound serial correlation coefficient. Byte-level mode throughout
(the optimal chi-square reference is 256).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputTooShort

OPTIMAL = {
    "entropy": 8.0,
    "chi_square": 256.0,
    "mean": 127.5,
    "mc_pi": math.pi,
    "serial_corr": 0.0,
}

_ROWS = (
    ("Entropy", "entropy", "{:.6f}"),
    ("Chi-square", "chi_square", "{:.2f}"),
    ("Arithmetic Mean", "mean", "{:.4f}"),
    ("Monte-Carlo Pi", "mc_pi", "{:.9f}"),
    ("Serial Correlation Coefficient", "serial_corr", "{:.6f}"),
)


@dataclass(frozen=True)
class EntReport:
    entropy: float        # bits per byte, 0..8
    chi_square: float     # vs uniform expectation, 255 dof
    mean: float           # 0..255
    mc_pi: float          # estimate of pi
    serial_corr: float    # in [-1, 1]
    n_bytes: int


def analyze(data: bytes) -> EntReport:
    """Compute the five statistics for ``data``.

    Needs at least 6 bytes (one Monte-Carlo point). Definitions:

    * entropy = -sum (c_i/N) log2 (c_i/N) over nonzero byte counts c_i
    * chi_square = sum (c_i - N/256)^2 / (N/256)
    * mean = sum(bytes) / N
    * mc_pi: consecutive non-overlapping 6-byte groups give a point
      (X, Y) with X = first 3 bytes big-endian / 2^24 and Y likewise;
      a point is inside when X^2 + Y^2 < 1; mc_pi = 4 * inside / points
    * serial_corr = (N*sum x_i*x_{i+1 mod N} - (sum x_i)^2)
      / (N*sum x_i^2 - (sum x_i)^2), 0 when the denominator is 0
    """
    n = len(data)
    if n < 6:
        raise InputTooShort(f"need at least 6 bytes, got {n}")
    x = np.frombuffer(data, dtype=np.uint8)

    counts = np.bincount(x, minlength=256).astype(np.float64)
    p = counts[counts > 0] / n
    entropy = float(-(p * np.log2(p)).sum())

    expected = n / 256.0
    chi_square = float(((counts - expected) ** 2 / expected).sum())

    xs = x.astype(np.float64)
    mean = float(xs.sum() / n)

    groups = x[: (n // 6) * 6].reshape(-1, 6).astype(np.float64)
    scale = float(1 << 24)
    cx = (groups[:, 0] * 65536.0 + groups[:, 1] * 256.0 + groups[:, 2]) / scale
    cy = (groups[:, 3] * 65536.0 + groups[:, 4] * 256.0 + groups[:, 5]) / scale
    inside = int((cx * cx + cy * cy < 1.0).sum())
    mc_pi = 4.0 * inside / groups.shape[0]

    sx = xs.sum()
    sxx = (xs * xs).sum()
    sxy = (xs * np.roll(xs, -1)).sum()
    den = n * sxx - sx * sx
    serial_corr = float((n * sxy - sx * sx) / den) if den != 0.0 else 0.0

    return EntReport(entropy, chi_square, mean, mc_pi, serial_corr, n)


def report_table(reports: dict[str, EntReport]) -> str:
    """Render the comparison table: one optimal-values column, then one
    column per named report. Cell precision follows the statistic."""
    if not reports:
        raise ValueError("need at least one report")
    names = list(reports)
    header = ["Parameters", "Optimal values", *names]
    rows = [header]
    for label, attr, fmt in _ROWS:
        row = [label, fmt.format(OPTIMAL[attr])]
        row += [fmt.format(getattr(reports[name], attr)) for name in names]
        rows.append(row)
    widths = [max(len(r[c]) for r in rows) for c in range(len(header))]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("-" * len(lines[0]))
    return "\n".join(lines)


def report_kv(report: EntReport, prefix: str = "") -> str:
    """Flat machine-readable rendering: one ``name value`` pair per line."""
    pre = f"{prefix}." if prefix else ""
    lines = [
        f"{pre}{attr} " + fmt.format(getattr(report, attr))
        for _, attr, fmt in _ROWS
    ]
    lines.append(f"{pre}n_bytes {report.n_bytes}")
    return "\n".join(lines)
