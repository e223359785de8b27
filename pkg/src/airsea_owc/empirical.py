"""Sampled tilt-angle PDFs and their CSV representation.

The CSV layout is a two-column table with header ``angle_deg,density_per_deg``,
strictly increasing angles, UTF-8 and ``.`` as decimal separator.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

CSV_HEADER = ("angle_deg", "density_per_deg")


class EmpiricalPdfError(ValueError):
    """Raised when a sampled PDF violates its invariants or cannot be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _trapezoid(y: np.ndarray, x: np.ndarray) -> float:
    return float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(x)))


@dataclass(frozen=True)
class EmpiricalPdf:
    """Sampled density of the transmitter tilt angle.

    Parameters
    ----------
    angles_deg : array_like
        Strictly increasing angles in degrees.
    densities_per_deg : array_like
        Non-negative density values in 1/degree.
    metadata : dict, optional
        Free-form provenance (sea, wind speed, reconstruction resolution, ...).
    area_bounds : tuple of float
        Accepted range of the trapezoidal area.
    """

    angles_deg: np.ndarray
    densities_per_deg: np.ndarray
    metadata: dict = field(default_factory=dict, compare=False)
    area_bounds: tuple[float, float] = (0.9, 1.1)

    def __post_init__(self):
        a = np.asarray(self.angles_deg, dtype=float)
        d = np.asarray(self.densities_per_deg, dtype=float)
        if a.ndim != 1 or a.shape != d.shape:
            raise EmpiricalPdfError("angles and densities must be 1-D and of equal length")
        if a.size < 8:
            raise EmpiricalPdfError(f"need at least 8 samples, got {a.size}")
        if not np.all(np.isfinite(a)) or not np.all(np.isfinite(d)):
            raise EmpiricalPdfError("non-finite values in PDF table")
        if np.any(np.diff(a) <= 0):
            raise EmpiricalPdfError("angles must be strictly increasing")
        if np.any(d < 0):
            raise EmpiricalPdfError("densities must be non-negative")
        area = _trapezoid(d, a)
        lo, hi = self.area_bounds
        if not lo <= area <= hi:
            raise EmpiricalPdfError(f"trapezoidal area {area:.4f} outside [{lo}, {hi}]")
        a.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "angles_deg", a)
        object.__setattr__(self, "densities_per_deg", d)

    @property
    def area(self) -> float:
        return _trapezoid(self.densities_per_deg, self.angles_deg)

    def moments(self) -> tuple[float, float]:
        """Mean and variance (deg, deg^2) of the area-normalised table."""
        a, d = self.angles_deg, self.densities_per_deg
        area = self.area
        mean = _trapezoid(a * d, a) / area
        var = _trapezoid((a - mean) ** 2 * d, a) / area
        return mean, var

    def __len__(self):
        return self.angles_deg.size


def parse_empirical_csv(text: str, **kwargs) -> EmpiricalPdf:
    """Parse CSV text into an :class:`EmpiricalPdf`.

    Malformed rows raise :class:`EmpiricalPdfError` carrying the 1-based line number.
    """
    reader = csv.reader(io.StringIO(text))
    angles, dens = [], []
    header_seen = False
    for lineno, row in enumerate(reader, start=1):
        if not row or row[0].lstrip().startswith("#"):
            continue
        cells = [c.strip() for c in row]
        if not header_seen:
            if tuple(cells) != CSV_HEADER:
                raise EmpiricalPdfError(
                    f"expected header {','.join(CSV_HEADER)!r}, got {','.join(cells)!r}", lineno
                )
            header_seen = True
            continue
        if len(cells) != 2:
            raise EmpiricalPdfError(f"expected 2 columns, got {len(cells)}", lineno)
        try:
            a, d = float(cells[0]), float(cells[1])
        except ValueError:
            raise EmpiricalPdfError(f"non-numeric cell in {row!r}", lineno) from None
        if angles and a <= angles[-1]:
            raise EmpiricalPdfError("angles must be strictly increasing", lineno)
        angles.append(a)
        dens.append(d)
    if not header_seen:
        raise EmpiricalPdfError("empty file")
    return EmpiricalPdf(np.array(angles), np.array(dens), **kwargs)


def read_empirical_csv(path, **kwargs) -> EmpiricalPdf:
    path = Path(path)
    pdf = parse_empirical_csv(path.read_text(encoding="utf-8"), **kwargs)
    pdf.metadata.setdefault("source", str(path))
    return pdf


def format_empirical_csv(pdf: EmpiricalPdf) -> str:
    lines = [",".join(CSV_HEADER)]
    lines += [f"{a!r},{d!r}" for a, d in zip(pdf.angles_deg.tolist(), pdf.densities_per_deg.tolist())]
    return "\n".join(lines) + "\n"
