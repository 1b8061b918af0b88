"""Closed-form gaussian approximations to the step packets.

Every closed form is the free incident packet evaluated at a rescaled
position, times a constant amplitude and (for transmission) a linear phase.
They hold when the spectrum is negligible at the step cutoff and the
coefficients vary slowly across it; ``is_valid`` checks the first of
these conditions and the functions here warn when it fails.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .packet import CutoffWarning, SpectralParams
from .quaternion import Quaternion
from .step import DomainError, Kinematics, coefficients

__all__ = [
    "VALIDITY_LIMIT",
    "is_valid",
    "incident_closed_form",
    "reflected_closed_form",
    "transmitted_closed_form",
    "ClosedFormPacket",
    "closed_form_packet",
    "Envelope",
    "small_tau_envelopes",
    "velocities",
    "peak_position_ratio",
    "probabilities",
    "W0Fit",
    "fit_w0",
    "fit_w0_velocity",
    "complex_reflection_at",
]

VALIDITY_LIMIT = 1e-6
UNIT_WIDTH = math.sqrt(2.0)


def is_valid(sp: SpectralParams) -> bool:
    """True when ``g(eps_min)/g(eps0)`` is below ``VALIDITY_LIMIT``."""
    return sp.eps_min == 0 or sp.cutoff_ratio <= VALIDITY_LIMIT


def _check(sp: SpectralParams):
    if not math.isclose(sp.width, UNIT_WIDTH):
        raise ValueError("closed forms assume the unit packet (width = sqrt(2))")
    if not is_valid(sp):
        warnings.warn(
            f"closed form outside its validity regime: g(eps_min)/g(eps0) = {sp.cutoff_ratio:.3g}",
            CutoffWarning,
            stacklevel=3,
        )


def _incident(eps0, x, tau):
    x = np.asarray(x, dtype=float)
    phase = np.exp(1j * (eps0 * x - 0.5 * eps0**2 * tau) - 0.5j * np.arctan(2 * tau))
    return phase * np.exp(-((x - eps0 * tau) ** 2) / (1 + 2j * tau)) / (1 + 4 * tau**2) ** 0.25


def incident_closed_form(sp: SpectralParams, x, tau):
    """Free gaussian packet that starts as ``exp(i eps0 x) exp(-x^2)`` at ``tau = 0``."""
    _check(sp)
    return _incident(sp.eps0, x, tau)


def reflected_closed_form(case: str, kin: Kinematics, sp: SpectralParams, x, tau):
    """``r(eps0)`` times the mirrored incident packet."""
    _check(sp)
    r = complex(coefficients(case, kin, kin.eps0).r)
    return r * _incident(kin.eps0, -np.asarray(x, dtype=float), tau)


def transmitted_closed_form(case: str, kin: Kinematics, sp: SpectralParams, x, tau) -> Quaternion:
    """Transmitted packet from a first-order expansion of ``k_tra(eps)``.

    The argument of the incident packet is stretched by ``1 / k_tra'(eps0)``
    (``eps0/sigma0`` or ``eps0^3/rho0^3``), and a linear phase
    ``(k0 - eps0 * stretch) x`` restores the carrier wavenumber.
    """
    _check(sp)
    p = closed_form_packet(f"transmitted-{case[0]}", kin)
    return p(x, tau)


@dataclass(frozen=True)
class ClosedFormPacket:
    """``prefactor * exp(i phase_rate x) * incident(scale * x, tau)``.

    ``prefactor`` is a quaternion, so the transmitted quaternionic packet
    carries its ``(1 + j w0)`` direction here.
    """

    kind: str
    eps0: float
    prefactor: Quaternion
    scale: float
    phase_rate: float

    def __call__(self, x, tau) -> Quaternion:
        x = np.asarray(x, dtype=float)
        base = np.exp(1j * self.phase_rate * x) * _incident(self.eps0, self.scale * x, tau)
        return Quaternion(self.prefactor.z1 * base, self.prefactor.z2 * base)

    @property
    def center_velocity(self) -> float:
        return self.eps0 / self.scale


def closed_form_packet(kind: str, kin: Kinematics) -> ClosedFormPacket:
    """Build one of ``incident``, ``reflected-c``, ``reflected-q``,
    ``transmitted-c``, ``transmitted-q``."""
    e0 = kin.eps0
    if kind == "incident":
        return ClosedFormPacket(kind, e0, Quaternion(1, 0), 1.0, 0.0)
    case = {"c": "complex", "q": "quaternionic"}.get(kind[-1])
    if case is None:
        raise ValueError(f"unknown packet kind {kind!r}")
    coeffs = coefficients(case, kin, e0)
    if kind.startswith("reflected"):
        return ClosedFormPacket(kind, e0, Quaternion(complex(coeffs.r), 0), -1.0, 0.0)
    if kind.startswith("transmitted"):
        if case == "complex":
            s0 = kin.sigma0
            scale = e0 / s0
            rate = (s0**2 - e0**2) / s0
            pref = Quaternion(complex(coeffs.t), 0)
        else:
            r0 = kin.rho0
            scale = e0**3 / r0**3
            rate = (r0**4 - e0**4) / r0**3
            t0 = complex(coeffs.t)
            pref = Quaternion(t0, kin.w0 * t0)
        return ClosedFormPacket(kind, e0, pref, scale, rate)
    raise ValueError(f"unknown packet kind {kind!r}")


@dataclass(frozen=True)
class Envelope:
    """Non-spreading envelope ``amplitude * exp(-(x - velocity tau)^2 / width^2)``."""

    amplitude: float
    velocity: float
    width: float

    def __call__(self, x, tau):
        x = np.asarray(x, dtype=float)
        return self.amplitude * np.exp(-(((x - self.velocity * tau) / self.width) ** 2))

    def peak(self, tau) -> float:
        return self.velocity * tau


def small_tau_envelopes(case: str, kin: Kinematics, sp: SpectralParams | None = None) -> dict[str, Envelope]:
    """Envelopes of the incident, reflected and transmitted packets for ``|tau| << 1``."""
    if sp is not None:
        _check(sp)
    e0 = kin.eps0
    c = coefficients(case, kin, e0)
    if case == "complex":
        s0 = kin.sigma0
        tra = Envelope(float(abs(c.t)), s0, s0 / e0)
    else:
        r0 = kin.rho0
        amp = math.sqrt(1 + abs(kin.w0) ** 2) * float(abs(c.t))
        tra = Envelope(amp, r0**3 / e0**2, (r0 / e0) ** 3)
    return {
        "incident": Envelope(1.0, e0, 1.0),
        "reflected": Envelope(float(abs(c.r)), -e0, 1.0),
        "transmitted": tra,
    }


def velocities(kin: Kinematics) -> dict[str, float]:
    """Packet-center velocities in units of ``hbar/(m a)``."""
    v_c = kin.sigma0
    v_q = kin.rho0**3 / kin.eps0**2
    return {
        "v_inc": kin.eps0,
        "v_ref": -kin.eps0,
        "v_tra_c": v_c,
        "v_tra_q": v_q,
        "v_ratio": v_q / v_c,
    }


def peak_position_ratio(e0_over_v0: float) -> float:
    """``x_q / x_c`` for the transmitted peaks, as a function of ``E0/V0``."""
    r = e0_over_v0
    return ((r - 1) * (r + 1) ** 3 / r**4) ** 0.25


def probabilities(case: str, kin: Kinematics) -> tuple[float, float]:
    """Reflection and transmission probabilities at the spectral peak."""
    c = coefficients(case, kin, kin.eps0)
    return float(c.p_ref), float(c.p_tra)


def complex_reflection_at(e0: float, w0: float) -> float:
    """``|r_c|^2`` for energy ``e0`` over a complex step of height ``w0``."""
    a, b = math.sqrt(e0), math.sqrt(e0 - w0)
    return ((a - b) / (a + b)) ** 2


class W0Fit(NamedTuple):
    w0: float
    p_ref: float


def fit_w0(kin: Kinematics) -> W0Fit:
    """Complex step ``W0`` that reproduces the quaternionic transmitted motion.

    Solves ``sqrt(E0/W0 - 1) = ((E0/V0)^2 - 1)^(3/4) V0/E0``, i.e. the
    ratio of the two peak-position formulas with the step scale
    ``a sqrt(2 m V0)/hbar`` held at its quaternionic value.  Returns ``W0``
    in internal energy units and ``|r_c|^2`` at ``W0``.
    See ``fit_w0_velocity`` for the match with the ``W0`` scale included.
    """
    ratio = kin.e_over_v
    if not ratio > 1:
        raise DomainError("E0 must exceed V0")
    rhs = (ratio**2 - 1) ** 0.75 / ratio
    w0 = kin.e0 / (1 + rhs**2)
    assert w0 < kin.e0
    return W0Fit(w0, complex_reflection_at(kin.e0, w0))


def fit_w0_velocity(kin: Kinematics) -> W0Fit:
    """Complex step ``W0`` whose transmitted velocity ``sqrt(2 (E0 - W0))``
    equals the quaternionic ``rho0^3 / eps0^2`` exactly."""
    ratio = kin.e_over_v
    if not ratio > 1:
        raise DomainError("E0 must exceed V0")
    w0 = kin.e0 * (1 - (1 - ratio**-2) ** 1.5)
    return W0Fit(w0, complex_reflection_at(kin.e0, w0))
