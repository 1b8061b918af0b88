"""Plane-wave scattering at a complex or quaternionic potential step.

Units are fixed by ``hbar = m = a = 1``: positions are ``x/a``,
wavenumbers are ``a*eps`` and energies are ``E = eps**2 / 2``.  The step
sits at ``x = 0``; the potential ``i V1 + j V2 + k V3`` acts for ``x > 0``.

The stationary equation solved is::

    i/2 psi'' - V psi + psi (E i) = 0

with ``V`` multiplying from the left and ``E i`` from the right.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .quaternion import Quaternion, complex_left_mul, complex_right_mul, mul, norm_sq

__all__ = [
    "DomainError",
    "PotentialSpec",
    "Kinematics",
    "StepCoefficients",
    "canonicalize",
    "complex_coeffs",
    "quaternionic_coeffs",
    "solve_step",
    "coefficients",
    "eval_planewave",
    "matching_residual",
    "schrodinger_residual",
    "ode_residual",
    "unitarity_sum",
]

Case = Literal["complex", "quaternionic"]
CASES = ("complex", "quaternionic")


class DomainError(ValueError):
    """Raised outside the diffusion regime ``E > V0``."""


@dataclass(frozen=True)
class PotentialSpec:
    """Step amplitudes of ``i V1 + j V2 + k V3`` in energy units."""

    v1: float
    v2: float = 0.0
    v3: float = 0.0

    @property
    def v_perp(self) -> float:
        return math.hypot(self.v2, self.v3)

    @property
    def theta(self) -> float:
        if self.v_perp == 0.0:
            return 0.0
        theta = math.atan2(self.v3, self.v2)
        return math.pi if theta == -math.pi else theta

    @property
    def magnitude(self) -> float:
        return math.hypot(self.v1, self.v_perp)

    @property
    def j_part(self) -> complex:
        """Complex ``P`` with ``j V2 + k V3 = j P``."""
        return complex(self.v2, -self.v3)

    def as_quaternion(self) -> Quaternion:
        return Quaternion(1j * self.v1, self.j_part)


def canonicalize(p: PotentialSpec) -> tuple[PotentialSpec, float]:
    """Rotate the ``(j, k)`` part of the potential onto ``j``.

    Returns the canonical potential ``(v1, v_perp, 0)`` and the phase
    ``alpha = -theta/2``.  If ``psi`` solves the canonical problem then
    ``exp(-i alpha) psi`` (left multiplication) solves the original one.

    >>> canonicalize(PotentialSpec(0, 3, 4))[0]
    PotentialSpec(v1=0, v2=5.0, v3=0.0)
    """
    return PotentialSpec(p.v1, p.v_perp, 0.0), -0.5 * p.theta


@dataclass(frozen=True)
class Kinematics:
    """Wavenumber scales of a step scenario.

    Parameters
    ----------
    eps0 : float
        Central incident wavenumber ``a*eps0``.
    eps_min : float
        Step wavenumber ``a*sqrt(2 m V0)/hbar``; zero means no step.
    """

    eps0: float
    eps_min: float

    def __post_init__(self):
        if self.eps_min < 0:
            raise ValueError("eps_min must be non-negative")
        if not self.eps0 > self.eps_min:
            raise DomainError(
                f"diffusion regime requires eps0 > eps_min (got {self.eps0} <= {self.eps_min})"
            )

    @classmethod
    def from_ratio(cls, e0_over_v0: float, av0: float = 100.0) -> "Kinematics":
        """Kinematics for ``E0/V0`` and ``a sqrt(2 m V0)/hbar = av0``."""
        if not e0_over_v0 > 1:
            raise DomainError(f"E0/V0 must exceed 1 (got {e0_over_v0})")
        return cls(av0 * math.sqrt(e0_over_v0), av0)

    @property
    def v0(self) -> float:
        return 0.5 * self.eps_min**2

    @property
    def e0(self) -> float:
        return 0.5 * self.eps0**2

    @property
    def e_over_v(self) -> float:
        return math.inf if self.v0 == 0 else self.e0 / self.v0

    @property
    def sigma0(self) -> float:
        return float(self.sigma(self.eps0))

    @property
    def rho0(self) -> float:
        return float(self.rho(self.eps0))

    @property
    def w0(self) -> complex:
        return complex(self.w(self.eps0))

    def sigma(self, eps):
        """Transmitted wavenumber over a complex step."""
        eps = np.asarray(eps, dtype=float)
        return np.sqrt((eps - self.eps_min) * (eps + self.eps_min))

    def rho(self, eps):
        """Transmitted wavenumber over a pure quaternionic step."""
        eps = np.asarray(eps, dtype=float)
        e2, m2 = eps**2, self.eps_min**2
        return np.sqrt(np.sqrt((e2 - m2) * (e2 + m2)))

    def w(self, eps):
        """Mixing scalar ``-i V0 / (E + sqrt(E^2 - V0^2))``."""
        eps = np.asarray(eps, dtype=float)
        return -1j * self.eps_min**2 / (eps**2 + self.rho(eps) ** 2)

    def check_regime(self, eps):
        if np.any(np.asarray(eps) <= self.eps_min):
            raise DomainError("eps must exceed eps_min (total reflection is not modelled)")


@dataclass(frozen=True)
class StepCoefficients:
    """Plane-wave coefficients at wavenumber ``eps``.

    Region I (``x < 0``)::

        exp(i eps x) + r exp(-i eps x) + j r_tilde exp(eps x)

    Region II (``x > 0``)::

        (1 + j w) t exp(i k_tra x) + (conj(w) + j) t_tilde exp(-k_eva x)

    ``flux`` is the ratio of transmitted to incident group velocity, so
    that ``|r|^2 + flux (1 + |w|^2) |t|^2 = 1``.
    Fields are scalars or arrays broadcast against ``eps``.
    """

    case: str
    eps: np.ndarray
    r: np.ndarray
    t: np.ndarray
    r_tilde: np.ndarray
    t_tilde: np.ndarray
    w: np.ndarray
    k_tra: np.ndarray
    k_eva: np.ndarray
    flux: np.ndarray

    @property
    def p_ref(self):
        return np.abs(self.r) ** 2

    @property
    def p_tra(self):
        return self.flux * (1 + np.abs(self.w) ** 2) * np.abs(self.t) ** 2


def complex_coeffs(kin: Kinematics, eps) -> StepCoefficients:
    """Coefficients for the complex step ``i V0``."""
    kin.check_regime(eps)
    eps = np.asarray(eps, dtype=float)
    sigma = kin.sigma(eps)
    zero = np.zeros_like(eps, dtype=complex)
    return StepCoefficients(
        case="complex",
        eps=eps,
        r=(eps - sigma) / (eps + sigma) + zero,
        t=2 * eps / (eps + sigma) + zero,
        r_tilde=zero,
        t_tilde=zero,
        w=zero,
        k_tra=sigma,
        k_eva=np.sqrt(eps**2 + kin.eps_min**2),
        flux=sigma / eps,
    )


def quaternionic_coeffs(kin: Kinematics, eps) -> StepCoefficients:
    """Coefficients for the pure quaternionic step ``j V0``.

    ``t_tilde`` carries the sign that makes ``psi`` and ``psi'``
    continuous at ``x = 0``.
    """
    kin.check_regime(eps)
    eps = np.asarray(eps, dtype=float)
    rho = kin.rho(eps)
    w = kin.w(eps)
    hyp = np.hypot(eps, rho)
    return StepCoefficients(
        case="quaternionic",
        eps=eps,
        r=(eps - rho) * np.exp(1j * np.arctan2(eps, rho)) / hyp,
        t=eps / rho + 0j,
        r_tilde=(1 + 1j) * eps * w / (eps + rho),
        t_tilde=-hyp * eps * w * np.exp(-1j * np.arctan2(rho, eps)) / (rho * (eps + rho)),
        w=w,
        k_tra=rho,
        k_eva=rho,
        flux=(rho / eps) ** 3,
    )


def coefficients(case: str, kin: Kinematics, eps) -> StepCoefficients:
    if case == "complex":
        return complex_coeffs(kin, eps)
    if case == "quaternionic":
        return quaternionic_coeffs(kin, eps)
    raise ValueError(f"unknown case {case!r}")


def solve_step(potential: PotentialSpec, eps) -> StepCoefficients:
    """Coefficients for an arbitrary step ``i V1 + j V2 + k V3``.

    The four continuity conditions at ``x = 0`` are solved as a linear
    system, one per wavenumber.  This makes no use of the closed-form
    coefficients and doubles as a check on them.
    """
    eps = np.atleast_1d(np.asarray(eps, dtype=float))
    energy = 0.5 * eps**2
    v1, p = potential.v1, potential.j_part
    if np.any(energy <= potential.magnitude):
        raise DomainError("energy must exceed the step magnitude")
    big_r = np.sqrt((energy - abs(p)) * (energy + abs(p)))
    w = -1j * p / (energy + big_r)
    wb = np.conj(w)
    k_tra = np.sqrt(2 * (big_r - v1))
    k_eva = np.sqrt(2 * (big_r + v1))

    n = eps.size
    a = np.zeros((n, 4, 4), dtype=complex)
    b = np.zeros((n, 4), dtype=complex)
    # unknowns: r, r_tilde, t, t_tilde
    a[:, 0] = np.stack([np.ones(n), np.zeros(n), -np.ones(n), -wb], axis=-1)
    b[:, 0] = -1
    a[:, 1] = np.stack([np.zeros(n), np.ones(n), -w, -np.ones(n)], axis=-1)
    a[:, 2] = np.stack([-1j * eps, np.zeros(n), -1j * k_tra, k_eva * wb], axis=-1)
    b[:, 2] = -1j * eps
    a[:, 3] = np.stack([np.zeros(n), eps, -1j * k_tra * w, k_eva], axis=-1)
    sol = np.linalg.solve(a, b[..., None])[..., 0]
    return StepCoefficients(
        case="general",
        eps=eps,
        r=sol[:, 0],
        t=sol[:, 2],
        r_tilde=sol[:, 1],
        t_tilde=sol[:, 3],
        w=w,
        k_tra=k_tra,
        k_eva=k_eva,
        flux=big_r * k_tra / (energy * eps),
    )


def eval_planewave(coeffs: StepCoefficients, x, deriv: int = 0) -> Quaternion:
    """Evaluate ``psi(eps, x)`` or its ``deriv``-th derivative in ``x``.

    Region I is used for ``x < 0`` and region II for ``x >= 0``.  The
    exponentials are evaluated only inside their own region so the
    evanescent terms never overflow.
    """
    x = np.asarray(x, dtype=float)
    c = coeffs
    eps = c.eps
    xl = np.minimum(x, 0.0)
    xr = np.maximum(x, 0.0)
    ik, ike = 1j * eps, 1j * c.k_tra

    inc = ik**deriv * np.exp(ik * xl)
    ref = (-ik) ** deriv * np.exp(-ik * xl)
    eva1 = eps**deriv * np.exp(eps * xl)
    z1_left = inc + c.r * ref
    z2_left = c.r_tilde * eva1

    tra = ike**deriv * np.exp(ike * xr)
    eva2 = (-c.k_eva) ** deriv * np.exp(-c.k_eva * xr)
    z1_right = c.t * tra + np.conj(c.w) * c.t_tilde * eva2
    z2_right = c.w * c.t * tra + c.t_tilde * eva2

    left = x < 0
    return Quaternion(np.where(left, z1_left, z1_right), np.where(left, z2_left, z2_right))


def matching_residual(coeffs: StepCoefficients):
    """Relative jump of ``psi`` and ``psi'`` across ``x = 0``.

    ``eval_planewave`` treats ``x = 0`` as region II, so the left limit
    is taken from the region I formula directly.
    """
    c = coeffs
    eps = c.eps
    left0 = Quaternion(1 + c.r, c.r_tilde)
    left1 = Quaternion(1j * eps * (1 - c.r), eps * c.r_tilde)
    right0 = eval_planewave(c, 0.0)
    right1 = eval_planewave(c, 0.0, deriv=1)
    jump0 = np.sqrt(norm_sq(left0 - right0) / (norm_sq(left0) + norm_sq(right0)))
    jump1 = np.sqrt(norm_sq(left1 - right1) / (norm_sq(left1) + norm_sq(right1)))
    return np.maximum(jump0, jump1)


def schrodinger_residual(potential: Quaternion, energy, psi: Quaternion, psi_xx: Quaternion):
    """Relative residual of ``i/2 psi'' - V psi + psi (E i)``."""
    kinetic = complex_left_mul(0.5j, psi_xx)
    pot = mul(potential, psi)
    rhs = complex_right_mul(psi, 1j * energy)
    res = kinetic - pot + rhs
    scale = np.sqrt(norm_sq(kinetic)) + np.sqrt(norm_sq(pot)) + np.sqrt(norm_sq(rhs))
    return np.sqrt(norm_sq(res)) / scale


def ode_residual(kin: Kinematics, eps, x, case: str, coeffs: StepCoefficients | None = None):
    """Residual of the exact plane wave in its own region.

    ``x = 0`` is excluded.  ``coeffs`` may be passed to test a modified
    solution; it defaults to the exact coefficients for ``case``.
    Note that region I is free, so the residual there is insensitive to
    the values of ``r`` and ``r_tilde``; use ``matching_residual`` for those.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x == 0):
        raise ValueError("x = 0 is the potential discontinuity")
    if coeffs is None:
        coeffs = coefficients(case, kin, eps)
    if case == "complex":
        step = Quaternion(1j * kin.v0, 0)
    elif case == "quaternionic":
        step = Quaternion(0, kin.v0)
    else:
        raise ValueError(f"unknown case {case!r}")
    pot = Quaternion(np.where(x > 0, step.z1, 0), np.where(x > 0, step.z2, 0))
    psi = eval_planewave(coeffs, x)
    psi_xx = eval_planewave(coeffs, x, deriv=2)
    return schrodinger_residual(pot, 0.5 * np.asarray(eps) ** 2, psi, psi_xx)


def unitarity_sum(coeffs: StepCoefficients):
    """``|r|^2 + flux (1 + |w|^2) |t|^2``; equals one for exact coefficients."""
    return coeffs.p_ref + coeffs.p_tra
