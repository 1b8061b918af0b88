"""Wave packets built by superposing step plane waves.

A packet component is the spectral integral::

    Omega(x, tau) = integral d(eps) g(eps) psi_component(eps, x) exp(-i eps^2 tau / 2)

evaluated with composite Gauss-Legendre panels over a truncated window
around the spectral peak.  The time factor multiplies from the right, so
it scales both symplectic parts of the quaternion alike.
"""
from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .quaternion import Quaternion, norm_sq
from .step import Kinematics, coefficients

__all__ = [
    "COMPONENTS",
    "REGION_I",
    "REGION_II",
    "SpectralParams",
    "PacketField",
    "QuadratureResolutionError",
    "WindowError",
    "CutoffWarning",
    "gaussian_weight",
    "required_nodes",
    "synthesize",
    "total_field",
    "default_grid",
    "DEFAULT_TAUS",
]

REGION_I = ("incident", "reflected", "evanescent-I")
REGION_II = ("transmitted", "evanescent-II")
COMPONENTS = REGION_I + REGION_II + ("total-I", "total-II")

PANEL_ORDER = 16
NODES_PER_CYCLE = 10
MIN_NODES = 64
CHUNK = 256
CUTOFF_WARN = 1e-6

DEFAULT_TAUS = (-0.15, -0.10, -0.05, 0.0, 0.05, 0.10, 0.15)


def default_grid(x_min=-30.0, x_max=30.0, points=4801):
    return np.linspace(x_min, x_max, points)


class QuadratureResolutionError(RuntimeError):
    """The phase-resolution rule needs more nodes than were allotted."""


class WindowError(ValueError):
    """The spectral window lies entirely below the step cutoff."""


class CutoffWarning(UserWarning):
    """The spectrum has non-negligible weight at the step cutoff."""


@dataclass(frozen=True)
class SpectralParams:
    """Gaussian spectrum and its quadrature window.

    ``width`` is the standard deviation of ``g`` in ``a*eps`` units;
    ``sqrt(2)`` corresponds to the unit-width packet ``exp(-(x/a)^2)``.
    ``nodes`` fixes the node count; ``None`` lets the phase-resolution rule
    choose it.
    """

    eps0: float
    eps_min: float = 0.0
    width: float = math.sqrt(2.0)
    truncation: float = 6.0
    nodes: int | None = None

    @classmethod
    def for_kinematics(cls, kin: Kinematics, **kwargs) -> "SpectralParams":
        return cls(kin.eps0, kin.eps_min, **kwargs)

    @property
    def window(self) -> tuple[float, float]:
        half = self.truncation * self.width
        return max(self.eps_min, self.eps0 - half), self.eps0 + half

    @property
    def cutoff_ratio(self) -> float:
        """``g(eps_min) / g(eps0)``; must be tiny for the closed forms."""
        return math.exp(-0.5 * ((self.eps_min - self.eps0) / self.width) ** 2)

    def check_window(self):
        lo, hi = self.window
        if self.eps_min >= hi:
            raise WindowError(f"eps_min={self.eps_min} lies above the window edge {hi}")
        if self.eps_min > 0 and self.cutoff_ratio > CUTOFF_WARN:
            warnings.warn(
                f"g(eps_min)/g(eps0) = {self.cutoff_ratio:.3g} exceeds {CUTOFF_WARN:g}",
                CutoffWarning,
                stacklevel=3,
            )
        return lo, hi


def gaussian_weight(sp: SpectralParams, eps):
    """Normalized gaussian ``g(eps)``; ``1/(2 sqrt(pi))`` at the peak for unit packets."""
    eps = np.asarray(eps, dtype=float)
    s = sp.width
    return np.exp(-0.5 * ((eps - sp.eps0) / s) ** 2) / (s * math.sqrt(2 * math.pi))


@dataclass(frozen=True)
class PacketField:
    """Samples of ``Omega(x, tau) = z1 + j z2`` on a grid."""

    tau: float
    grid: np.ndarray
    z1: np.ndarray
    z2: np.ndarray
    component: str
    case: str

    def __post_init__(self):
        if self.grid.shape != self.z1.shape or self.grid.shape != self.z2.shape:
            raise ValueError("grid and values must have equal length")
        if self.grid.size > 1 and np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing")

    @property
    def values(self) -> Quaternion:
        return Quaternion(self.z1, self.z2)

    def __len__(self):
        return self.grid.size

    def __getitem__(self, i) -> Quaternion:
        return Quaternion(self.z1[i], self.z2[i])

    def density(self):
        return norm_sq(self.values)


@lru_cache(maxsize=None)
def _gauss_legendre(order):
    return np.polynomial.legendre.leggauss(order)


def _panel_nodes(lo, hi, n_nodes):
    n_panels = max(1, -(-n_nodes // PANEL_ORDER))
    t, w = _gauss_legendre(PANEL_ORDER)
    edges = np.linspace(lo, hi, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _wavenumber(kin, case, component):
    """Oscillatory wavenumber ``k(eps)`` of a component, ``None`` if evanescent."""
    if component in ("incident", "reflected"):
        return lambda e: np.asarray(e, dtype=float)
    if component == "transmitted":
        return kin.sigma if case == "complex" else kin.rho
    return None


def required_nodes(sp: SpectralParams, kin: Kinematics, case: str, component: str, tau, grid) -> int:
    """Node count demanded by the phase-resolution rule.

    At least ``NODES_PER_CYCLE`` nodes per ``2 pi`` of the total phase swing
    ``|k(hi) - k(lo)| * max|x| + (hi^2 - lo^2) |tau| / 2`` across the window.
    """
    lo, hi = sp.window
    taus = np.atleast_1d(np.abs(np.asarray(tau, dtype=float)))
    x_max = float(np.max(np.abs(grid)))
    parts = _parts(case, component)
    swing_x = 0.0
    for part in parts:
        k = _wavenumber(kin, case, part)
        if k is not None:
            swing_x = max(swing_x, abs(float(k(hi)) - float(k(lo))) * x_max)
    swing = swing_x + 0.5 * (hi**2 - lo**2) * float(taus.max())
    need = max(MIN_NODES, math.ceil(NODES_PER_CYCLE * swing / (2 * math.pi)))
    return -(-need // PANEL_ORDER) * PANEL_ORDER


def _parts(case, component):
    if component == "total-I":
        parts = REGION_I
    elif component == "total-II":
        parts = REGION_II
    elif component in COMPONENTS:
        parts = (component,)
    else:
        raise ValueError(f"unknown component {component!r}")
    if case == "complex":
        if component in ("evanescent-I", "evanescent-II"):
            raise ValueError(f"component {component!r} exists only in the quaternionic case")
        parts = tuple(p for p in parts if not p.startswith("evanescent"))
    elif case != "quaternionic":
        raise ValueError(f"unknown case {case!r}")
    return parts


def _terms(kin, case, part, eps):
    """``(rate, a1, a2)`` so the part contributes ``(a1 + j a2) exp(rate x)``."""
    if part == "incident":
        return 1j * eps, np.ones_like(eps, dtype=complex), None
    c = coefficients(case, kin, eps)
    if part == "reflected":
        return -1j * eps, c.r, None
    if part == "evanescent-I":
        return eps + 0j, None, c.r_tilde
    if part == "transmitted":
        return 1j * c.k_tra, c.t, c.w * c.t
    if part == "evanescent-II":
        return -c.k_eva + 0j, np.conj(c.w) * c.t_tilde, c.t_tilde
    raise ValueError(part)


def _check_domain(part, grid):
    if part == "evanescent-I" and np.any(grid > 0):
        raise ValueError("evanescent-I is defined for x <= 0 only")
    if part == "evanescent-II" and np.any(grid < 0):
        raise ValueError("evanescent-II is defined for x >= 0 only")


def _threads(threads):
    if threads is None:
        env = os.environ.get("QUATWAVE_THREADS")
        threads = int(env) if env else min(8, os.cpu_count() or 1)
    return max(1, int(threads))


def _accumulate(grid, terms, threads):
    """Sum ``weight * exp(rate x)`` over nodes for every grid point.

    The grid is cut into fixed-size chunks and each chunk is reduced with
    the same numpy summation, so the result does not depend on ``threads``.
    """
    chunks = [grid[i:i + CHUNK] for i in range(0, grid.size, CHUNK)]

    def work(xs):
        z1 = np.zeros(xs.size, dtype=complex)
        z2 = np.zeros(xs.size, dtype=complex)
        for rate, c1, c2 in terms:
            phase = np.exp(xs[:, None] * rate[None, :])
            if c1 is not None:
                z1 += (phase * c1[None, :]).sum(axis=1)
            if c2 is not None:
                z2 += (phase * c2[None, :]).sum(axis=1)
        return z1, z2

    if threads == 1 or len(chunks) == 1:
        out = [work(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            out = list(pool.map(work, chunks))
    if not out:
        return np.zeros(0, complex), np.zeros(0, complex)
    return np.concatenate([o[0] for o in out]), np.concatenate([o[1] for o in out])


def synthesize(
    sp: SpectralParams,
    kin: Kinematics,
    case: str,
    component: str,
    tau: float,
    grid,
    threads: int | None = None,
) -> PacketField:
    """Quadrature of one packet component on ``grid`` at time ``tau``.

    Raises
    ------
    QuadratureResolutionError
        If ``sp.nodes`` is set below the phase-resolution requirement.
    WindowError
        If the spectral window is empty above ``eps_min``.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("grid is empty")
    parts = _parts(case, component)
    for part in parts:
        _check_domain(part, grid)
    lo, hi = sp.check_window()

    need = required_nodes(sp, kin, case, component, tau, grid)
    if sp.nodes is None:
        n_nodes = need
    elif sp.nodes < need:
        raise QuadratureResolutionError(
            f"tau={tau}: {need} quadrature nodes required, {sp.nodes} allotted"
        )
    else:
        n_nodes = sp.nodes
    eps, wts = _panel_nodes(lo, hi, n_nodes)
    weight = wts * gaussian_weight(sp, eps) * np.exp(-0.5j * eps**2 * tau)

    terms = []
    for part in parts:
        rate, a1, a2 = _terms(kin, case, part, eps)
        terms.append((rate, None if a1 is None else weight * a1, None if a2 is None else weight * a2))
    z1, z2 = _accumulate(grid, terms, _threads(threads))
    if case == "complex":
        z2 = np.zeros_like(z1)
    return PacketField(float(tau), grid, z1, z2, component, case)


def total_field(sp, kin, case, tau, grid, threads=None) -> PacketField:
    """Region I sum for ``x < 0`` joined to the region II sum for ``x >= 0``."""
    grid = np.asarray(grid, dtype=float)
    left = grid < 0
    z1 = np.zeros(grid.size, dtype=complex)
    z2 = np.zeros(grid.size, dtype=complex)
    if left.any():
        f = synthesize(sp, kin, case, "total-I", tau, grid[left], threads)
        z1[left], z2[left] = f.z1, f.z2
    if (~left).any():
        f = synthesize(sp, kin, case, "total-II", tau, grid[~left], threads)
        z1[~left], z2[~left] = f.z1, f.z2
    return PacketField(float(tau), grid, z1, z2, "total", case)
