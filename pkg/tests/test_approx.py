import math

import numpy as np
import pytest

from quatwave.approx import (
    closed_form_packet,
    complex_reflection_at,
    fit_w0,
    fit_w0_velocity,
    incident_closed_form,
    is_valid,
    peak_position_ratio,
    probabilities,
    reflected_closed_form,
    small_tau_envelopes,
    transmitted_closed_form,
    velocities,
)
from quatwave.metrics import refine_peak
from quatwave.packet import CutoffWarning, SpectralParams, synthesize
from quatwave.step import DomainError, Kinematics

SQ3 = math.sqrt(3)


def test_incident_normalisation(sp):
    assert abs(incident_closed_form(sp, 0.0, 0.0)) == pytest.approx(1.0, abs=1e-15)
    x = sp.eps0 * 0.5
    assert abs(incident_closed_form(sp, x, 0.5)) == pytest.approx(2**-0.25, rel=1e-14)


def test_incident_matches_free_quadrature(grid):
    k = Kinematics(100 * math.sqrt(2), 0.0)
    sp = SpectralParams.for_kinematics(k)
    for tau in (-0.1, 0.0, 0.12):
        f = synthesize(sp, k, "complex", "incident", tau, grid)
        assert np.max(np.abs(f.z1 - incident_closed_form(sp, grid, tau))) <= 1e-6


def test_reflected_peak_amplitudes(kin, sp):
    x = np.array([-kin.eps0 * 0.1])
    c = abs(reflected_closed_form("complex", kin, sp, x, 0.1)[0]) ** 2
    q = abs(reflected_closed_form("quaternionic", kin, sp, x, 0.1)[0]) ** 2
    scale = 1 / math.sqrt(1 + 4 * 0.1**2)
    assert c / scale == pytest.approx((3 - 2 * math.sqrt(2)) ** 2, rel=1e-12)
    assert c / scale == pytest.approx(2.94e-2, abs=5e-5)
    assert q / scale == pytest.approx(2.58e-3, abs=5e-6)
    assert c / q == pytest.approx(11.4, abs=0.05)


def test_reflected_center(kin):
    p = closed_form_packet("reflected-q", kin)
    assert p.center_velocity == pytest.approx(-kin.eps0)


def test_transmitted_trajectories(kin, sp):
    x = np.linspace(0, 30, 30001)
    tau = 0.15
    c = transmitted_closed_form("complex", kin, sp, x, tau).norm_sq()
    q = transmitted_closed_form("quaternionic", kin, sp, x, tau).norm_sq()
    assert x[np.argmax(c)] == pytest.approx(100 * tau, abs=2e-3)
    ratio = x[np.argmax(q)] / x[np.argmax(c)]
    assert ratio == pytest.approx(peak_position_ratio(2.0), abs=1e-3)
    assert peak_position_ratio(2.0) == pytest.approx(1.14, abs=5e-3)


def test_transmitted_quaternion_direction(kin):
    p = closed_form_packet("transmitted-q", kin)
    assert p.prefactor.z2 / p.prefactor.z1 == pytest.approx(kin.w0)
    assert abs(kin.w0) == pytest.approx(2 - SQ3, rel=1e-14)


def test_envelopes(kin, sp):
    ec = small_tau_envelopes("complex", kin, sp)
    eq = small_tau_envelopes("quaternionic", kin, sp)
    assert ec["transmitted"].width == pytest.approx(1 / math.sqrt(2), rel=1e-14)
    assert eq["transmitted"].width == pytest.approx(3**0.75 / 2**1.5, rel=1e-14)
    assert eq["transmitted"].width == pytest.approx(0.806, abs=5e-4)
    assert ec["incident"].width == ec["reflected"].width == 1.0
    assert eq["transmitted"].amplitude**2 * eq["transmitted"].width == pytest.approx(
        probabilities("quaternionic", kin)[1], rel=1e-12
    )
    assert eq["reflected"].peak(0.1) == pytest.approx(-kin.eps0 * 0.1)


@pytest.mark.parametrize("case", ["complex", "quaternionic"])
def test_envelope_matches_closed_form_early(kin, sp, grid, case):
    env = small_tau_envelopes(case, kin, sp)["transmitted"]
    full = np.sqrt(transmitted_closed_form(case, kin, sp, grid, 0.05).norm_sq())
    assert np.max(np.abs(full - env(grid, 0.05))) <= 1e-2 * env.amplitude


def test_velocities(kin):
    v = velocities(kin)
    assert v["v_inc"] == pytest.approx(100 * math.sqrt(2))
    assert v["v_tra_c"] == pytest.approx(100.0, rel=1e-14)
    assert v["v_tra_q"] == pytest.approx(100 * 3**0.75 / 2, rel=1e-14)
    assert v["v_ratio"] == pytest.approx(math.sqrt(3 * SQ3) / 2, rel=1e-14)
    assert v["v_ratio"] == pytest.approx(peak_position_ratio(2.0), rel=1e-14)


def test_reference_probabilities(kin):
    rc, tc = probabilities("complex", kin)
    rq, tq = probabilities("quaternionic", kin)
    assert rc == pytest.approx(2.94e-2, abs=5e-5)
    assert tc == pytest.approx(0.97056, abs=5e-5)
    assert rq == pytest.approx(2.58e-3, abs=5e-6)
    assert tq == pytest.approx(0.99742, abs=5e-6)


def test_probability_completeness(rng):
    for ratio in rng.uniform(1.05, 50, 100):
        k = Kinematics.from_ratio(float(ratio), 100.0)
        for case in ("complex", "quaternionic"):
            r, t = probabilities(case, k)
            assert 0 <= r <= 1 and 0 <= t <= 1
            assert r + t == pytest.approx(1.0, abs=1e-12)


def test_fit_w0_reference(kin):
    fit = fit_w0(kin)
    assert kin.e0 / fit.w0 == pytest.approx(1 + 3 * SQ3 / 4, rel=1e-14)
    assert kin.e0 / fit.w0 == pytest.approx(2.299, abs=5e-4)
    assert fit.p_ref == pytest.approx(2.01e-2, abs=5e-5)
    gap = fit.p_ref / probabilities("quaternionic", kin)[0]
    assert gap == pytest.approx(7.8, abs=0.05)


def test_fit_w0_satisfies_its_condition(rng):
    for ratio in rng.uniform(1.05, 20, 50):
        k = Kinematics.from_ratio(float(ratio), 100.0)
        fit = fit_w0(k)
        lhs = math.sqrt(k.e0 / fit.w0 - 1)
        rhs = (ratio**2 - 1) ** 0.75 / ratio
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_fit_w0_velocity_matches_trajectory(rng):
    for ratio in [2.0, *rng.uniform(1.05, 20, 50)]:
        k = Kinematics.from_ratio(float(ratio), 100.0)
        fit = fit_w0_velocity(k)
        v_c = math.sqrt(2 * (k.e0 - fit.w0))
        assert v_c == pytest.approx(velocities(k)["v_tra_q"], rel=1e-12)


def test_fixed_step_scale_velocity_gap(kin):
    # the step-scale convention leaves a velocity mismatch
    fit = fit_w0(kin)
    v_c = math.sqrt(2 * (kin.e0 - fit.w0))
    mismatch = v_c / velocities(kin)["v_tra_q"] - 1
    assert mismatch == pytest.approx(-0.0673, abs=5e-4)


@pytest.mark.parametrize("ratio", [1.0, 0.5])
def test_below_barrier_rejected(ratio):
    with pytest.raises(DomainError):
        Kinematics.from_ratio(ratio, 100.0)


def test_complex_reflection_at_zero_step():
    assert complex_reflection_at(5.0, 0.0) == 0.0


def test_validity_flag():
    k = Kinematics(10.0, 8.0)
    sp = SpectralParams.for_kinematics(k)
    assert not is_valid(sp)
    with pytest.warns(CutoffWarning):
        transmitted_closed_form("complex", k, sp, np.array([0.0]), 0.0)


def test_closed_form_rejects_other_widths(kin):
    sp = SpectralParams.for_kinematics(kin, width=1.0)
    with pytest.raises(ValueError):
        incident_closed_form(sp, 0.0, 0.0)


def test_unknown_kind(kin):
    with pytest.raises(ValueError):
        closed_form_packet("transmitted-x", kin)


def _quadrature_vs_closed(kin, sp, grid, fields, case, comp, tau):
    f = fields(case, comp, tau)
    if comp == "transmitted":
        d = transmitted_closed_form(case, kin, sp, grid, tau).norm_sq()
    else:
        d = np.abs(reflected_closed_form(case, kin, sp, grid, tau)) ** 2
    x1, p1 = refine_peak(grid, f.density())
    x2, p2 = refine_peak(grid, d)
    return abs(x1 - x2), abs(p2 / p1 - 1)


@pytest.mark.parametrize("case", ["complex", "quaternionic"])
@pytest.mark.parametrize("comp", ["reflected", "transmitted"])
@pytest.mark.parametrize("tau", [0.05, 0.10, 0.15])
def test_closed_form_peak_position(kin, sp, grid, fields, case, comp, tau):
    dx, _ = _quadrature_vs_closed(kin, sp, grid, fields, case, comp, tau)
    assert dx <= 0.2


# first-order expansion of k_tra ignores dispersion; density drifts past 2%
_DISPERSIVE = pytest.mark.xfail(strict=True, reason="first-order transmitted closed form omits dispersion")


@pytest.mark.parametrize("case", ["complex", "quaternionic"])
@pytest.mark.parametrize(
    "comp, tau",
    [
        ("reflected", 0.05),
        ("reflected", 0.10),
        ("reflected", 0.15),
        ("transmitted", 0.05),
        pytest.param("transmitted", 0.10, marks=_DISPERSIVE),
        pytest.param("transmitted", 0.15, marks=_DISPERSIVE),
    ],
)
def test_closed_form_peak_density(kin, sp, grid, fields, case, comp, tau):
    _, rel = _quadrature_vs_closed(kin, sp, grid, fields, case, comp, tau)
    assert rel <= 0.02
