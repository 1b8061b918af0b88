"""Observables extracted from sampled packet fields."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import trapezoid

from .packet import PacketField

__all__ = [
    "ClearanceError",
    "PacketObservables",
    "density",
    "refine_peak",
    "half_line_masses",
    "observe",
    "numeric_probabilities",
    "peak_trajectory",
]


class ClearanceError(ValueError):
    """A packet has not yet separated from the step."""


@dataclass(frozen=True)
class PacketObservables:
    tau: float
    peak_x: float
    peak_density: float
    half_line_mass_neg: float
    half_line_mass_pos: float

    def as_dict(self):
        return asdict(self)


def density(field: PacketField) -> np.ndarray:
    return field.density()


def refine_peak(grid, dens) -> tuple[float, float]:
    """Peak of a sampled density, refined by a parabola through log-density.

    Exact for gaussians.  Falls back to the raw sample at grid edges or
    where the neighbours vanish.
    """
    grid = np.asarray(grid, dtype=float)
    dens = np.asarray(dens, dtype=float)
    i = int(np.argmax(dens))
    if i == 0 or i == dens.size - 1 or dens[i - 1] <= 0 or dens[i + 1] <= 0:
        return float(grid[i]), float(dens[i])
    xm, x0, xp = grid[i - 1 : i + 2]
    ym, y0, yp = np.log(dens[i - 1 : i + 2])
    # parabola through three (possibly unevenly spaced) points
    d1 = (y0 - ym) / (x0 - xm)
    d2 = (yp - y0) / (xp - x0)
    curv = (d2 - d1) / (xp - xm)
    if curv >= 0:
        return float(x0), float(dens[i])
    slope = d1 + curv * (x0 - xm)
    shift = -slope / (2 * curv)
    peak_x = x0 + shift
    peak_log = y0 + slope * shift + curv * shift**2
    return float(peak_x), float(np.exp(peak_log))


def half_line_masses(grid, dens) -> tuple[float, float]:
    """Trapezoid integrals of the density over ``x <= 0`` and ``x >= 0``."""
    grid = np.asarray(grid, dtype=float)
    dens = np.asarray(dens, dtype=float)
    neg, pos = grid <= 0, grid >= 0
    m_neg = trapezoid(dens[neg], grid[neg]) if neg.sum() > 1 else 0.0
    m_pos = trapezoid(dens[pos], grid[pos]) if pos.sum() > 1 else 0.0
    return float(m_neg), float(m_pos)


def observe(field: PacketField) -> PacketObservables:
    dens = field.density()
    peak_x, peak_d = refine_peak(field.grid, dens)
    m_neg, m_pos = half_line_masses(field.grid, dens)
    return PacketObservables(field.tau, peak_x, peak_d, m_neg, m_pos)


def _spread(grid, dens):
    mass = trapezoid(dens, grid)
    if mass <= 0:
        return 0.0, np.inf
    mean = trapezoid(grid * dens, grid) / mass
    var = trapezoid((grid - mean) ** 2 * dens, grid) / mass
    return mean, np.sqrt(var)


def _check_clearance(field, name, clearance):
    dens = field.density()
    peak_x, _ = refine_peak(field.grid, dens)
    _, std = _spread(field.grid, dens)
    if not abs(peak_x) > clearance * std:
        raise ClearanceError(
            f"{name} packet at tau={field.tau} peaks at x={peak_x:.3g}, "
            f"within {clearance} widths ({std:.3g}) of the step"
        )


def numeric_probabilities(
    inc: PacketField, ref: PacketField, tra: PacketField, clearance: float = 5.0
) -> tuple[float, float]:
    """Reflection and transmission probabilities from half-line masses.

    ``inc`` is the incident packet at ``-tau0``; ``ref`` and ``tra`` are
    the reflected and transmitted packets at ``+tau0``.
    """
    if not (np.array_equal(inc.grid, ref.grid) and np.array_equal(inc.grid, tra.grid)):
        raise ValueError("fields must share one grid")
    for f, name in ((inc, "incident"), (ref, "reflected"), (tra, "transmitted")):
        _check_clearance(f, name, clearance)
    norm, _ = half_line_masses(inc.grid, inc.density())
    ref_neg, _ = half_line_masses(ref.grid, ref.density())
    _, tra_pos = half_line_masses(tra.grid, tra.density())
    return ref_neg / norm, tra_pos / norm


def peak_trajectory(fields: Sequence[PacketField]) -> tuple[float, float, float]:
    """Least-squares line through refined peak positions.

    Returns ``(velocity, intercept, residual)`` with velocity in ``a`` per
    unit ``tau`` and ``residual`` the rms deviation from the line.
    """
    if len(fields) < 3:
        raise ValueError("need at least three time samples")
    kinds = {(f.case, f.component) for f in fields}
    if len(kinds) != 1:
        raise ValueError("fields must share case and component")
    taus = np.array([f.tau for f in fields])
    if np.ptp(taus) == 0:
        raise ValueError("degenerate fit: all tau equal")
    peaks = np.array([refine_peak(f.grid, f.density())[0] for f in fields])
    velocity, intercept = np.polyfit(taus, peaks, 1)
    resid = peaks - (velocity * taus + intercept)
    return float(velocity), float(intercept), float(np.sqrt(np.mean(resid**2)))
