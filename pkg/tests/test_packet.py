import math
import warnings

import numpy as np
import pytest
from scipy.integrate import quad, trapezoid

from quatwave.packet import (
    CutoffWarning,
    PacketField,
    QuadratureResolutionError,
    SpectralParams,
    WindowError,
    gaussian_weight,
    required_nodes,
    synthesize,
    total_field,
)
from quatwave.step import Kinematics


def free_packet(eps0, x, tau):
    """Exact free gaussian packet (the integral done by completing the square)."""
    x = np.asarray(x, dtype=float)
    a = 1 + 2j * tau
    return np.exp(1j * eps0 * x - 0.5j * eps0**2 * tau - (x - eps0 * tau) ** 2 / a) / np.sqrt(a)


@pytest.fixture(scope="module")
def free():
    k = Kinematics(100 * math.sqrt(2), 0.0)
    return k, SpectralParams.for_kinematics(k)


def test_gaussian_weight_peak(sp):
    assert gaussian_weight(sp, sp.eps0) == pytest.approx(1 / (2 * math.sqrt(math.pi)), rel=1e-15)
    assert gaussian_weight(sp, sp.eps0 + 2) == pytest.approx(math.exp(-1) / (2 * math.sqrt(math.pi)), rel=1e-14)
    assert gaussian_weight(sp, sp.eps0 - 2) == pytest.approx(math.exp(-1) / (2 * math.sqrt(math.pi)), rel=1e-14)


def test_gaussian_weight_integral(sp):
    # closed form: integral of exp(-u^2/4) du = sqrt(4 pi), divided by 2 sqrt(pi)
    expected = math.sqrt(4 * math.pi) / (2 * math.sqrt(math.pi))
    got, _ = quad(lambda e: gaussian_weight(sp, e), sp.eps0 - 60, sp.eps0 + 60, points=[sp.eps0])
    assert got == pytest.approx(expected, abs=1e-12)


def test_window_and_cutoff(sp):
    lo, hi = sp.window
    assert lo == pytest.approx(sp.eps0 - 6 * math.sqrt(2))
    assert hi == pytest.approx(sp.eps0 + 6 * math.sqrt(2))
    assert sp.cutoff_ratio < 1e-100


def test_window_clipped_and_warns():
    k = Kinematics(10.0, 8.0)
    sp = SpectralParams.for_kinematics(k)
    assert sp.window[0] == 8.0
    with pytest.warns(CutoffWarning):
        synthesize(sp, k, "complex", "reflected", 0.0, np.linspace(-3, 0, 5), threads=1)


def test_empty_window_raises():
    sp = SpectralParams(eps0=10.0, eps_min=30.0)
    with pytest.raises(WindowError):
        sp.check_window()


def test_quadrature_budget_enforced(kin, grid):
    need = required_nodes(SpectralParams.for_kinematics(kin), kin, "complex", "transmitted", 0.15, grid)
    sp = SpectralParams.for_kinematics(kin, nodes=need // 2)
    with pytest.raises(QuadratureResolutionError):
        synthesize(sp, kin, "complex", "transmitted", 0.15, grid)


def test_phase_rule_scales_with_grid_and_time(kin, sp):
    small = required_nodes(sp, kin, "complex", "incident", 0.0, np.linspace(-1, 1, 3))
    wide = required_nodes(sp, kin, "complex", "incident", 0.0, np.linspace(-30, 30, 3))
    late = required_nodes(sp, kin, "complex", "incident", 0.2, np.linspace(-30, 30, 3))
    assert small < wide < late
    lo, hi = sp.window
    swing = (hi - lo) * 30 + 0.5 * (hi**2 - lo**2) * 0.2
    assert late >= 10 * swing / (2 * math.pi)


@pytest.mark.parametrize("tau", [-0.1, 0.0, 0.1])
def test_free_packet_oracle(free, grid, tau):
    k, sp = free
    f = synthesize(sp, k, "complex", "incident", tau, grid)
    assert np.max(np.abs(f.z1 - free_packet(k.eps0, grid, tau))) <= 1e-6


def test_free_packet_brute_force(free):
    # independent route: dense trapezoid over a wide window
    k, sp = free
    x = np.array([-1.3, 0.0, 0.4, 2.2])
    tau = 0.07
    eps = np.linspace(k.eps0 - 20, k.eps0 + 20, 200_001)
    g = np.exp(-((eps - k.eps0) ** 2) / 4) / (2 * math.sqrt(math.pi))
    integrand = g[None, :] * np.exp(1j * (np.outer(x, eps) - 0.5 * eps**2 * tau))
    brute = trapezoid(integrand, eps, axis=1)
    f = synthesize(sp, k, "complex", "incident", tau, x)
    assert np.max(np.abs(f.z1 - brute)) <= 1e-8


def test_convergence_under_node_doubling(kin, grid):
    for case in ("complex", "quaternionic"):
        for tau in (-0.2, 0.2):
            comp = "total-II" if tau > 0 else "total-I"
            g = grid[grid >= 0] if tau > 0 else grid[grid < 0]
            base = SpectralParams.for_kinematics(kin)
            n = required_nodes(base, kin, case, comp, tau, g)
            f1 = synthesize(SpectralParams.for_kinematics(kin, nodes=n), kin, case, comp, tau, g)
            f2 = synthesize(SpectralParams.for_kinematics(kin, nodes=2 * n), kin, case, comp, tau, g)
            d1 = f1.density()
            peak = np.argmax(d1)
            scale = math.sqrt(d1[peak])
            diff = np.sqrt(np.abs(f1.z1 - f2.z1) ** 2 + np.abs(f1.z2 - f2.z2) ** 2)
            assert np.max(diff) / scale <= 1e-8, (case, tau)


def test_component_linearity(kin):
    sp = SpectralParams.for_kinematics(kin, nodes=2048)
    x = np.linspace(-3, 0, 301)
    parts = [synthesize(sp, kin, "quaternionic", c, 0.01, x) for c in ("incident", "reflected", "evanescent-I")]
    total = synthesize(sp, kin, "quaternionic", "total-I", 0.01, x)
    assert np.allclose(total.z1, parts[0].z1 + parts[1].z1 + parts[2].z1, rtol=0, atol=1e-15)
    assert np.allclose(total.z2, parts[2].z2, rtol=0, atol=1e-15)


def test_complex_fields_have_no_j_part(kin, fields):
    for comp in ("incident", "reflected", "transmitted"):
        assert not np.any(fields("complex", comp, 0.1).z2)


def test_complex_rejects_evanescent(kin, sp):
    with pytest.raises(ValueError):
        synthesize(sp, kin, "complex", "evanescent-I", 0.0, np.array([-1.0]))


def test_evanescent_domain(kin, sp):
    with pytest.raises(ValueError):
        synthesize(sp, kin, "quaternionic", "evanescent-I", 0.0, np.array([0.5]))
    with pytest.raises(ValueError):
        synthesize(sp, kin, "quaternionic", "evanescent-II", 0.0, np.array([-0.5]))


def test_continuity_at_origin(kin, sp):
    for case in ("complex", "quaternionic"):
        for tau in (-0.01, 0.0, 0.01):
            left = synthesize(sp, kin, case, "total-I", tau, np.array([0.0]))
            right = synthesize(sp, kin, case, "total-II", tau, np.array([0.0]))
            assert abs(left.z1[0] - right.z1[0]) <= 1e-6
            assert abs(left.z2[0] - right.z2[0]) <= 1e-6


def test_early_time_is_incident_only(kin, sp, grid):
    g = grid[grid < 0]
    inc = synthesize(sp, kin, "quaternionic", "incident", -0.1, g)
    tot = synthesize(sp, kin, "quaternionic", "total-I", -0.1, g)
    peak = np.max(np.abs(inc.z1))
    rest = np.sqrt(np.abs(tot.z1 - inc.z1) ** 2 + np.abs(tot.z2) ** 2)
    assert np.max(rest) <= 1e-3 * peak


def test_evanescent_vanish_late(kin, sp, grid):
    tra = synthesize(sp, kin, "quaternionic", "transmitted", 0.15, grid[grid >= 0])
    peak = np.sqrt(tra.density().max())
    e1 = synthesize(sp, kin, "quaternionic", "evanescent-I", 0.15, grid[grid <= 0])
    e2 = synthesize(sp, kin, "quaternionic", "evanescent-II", 0.15, grid[grid >= 0])
    assert np.sqrt(e1.density().max()) <= 1e-2 * peak
    assert np.sqrt(e2.density().max()) <= 1e-2 * peak


def test_transmitted_peaks(fields, grid):
    c = fields("complex", "transmitted", 0.15)
    q = fields("quaternionic", "transmitted", 0.15)
    right = grid >= 0
    assert grid[right][np.argmax(c.density()[right])] == pytest.approx(15.0, abs=0.2)
    assert grid[right][np.argmax(q.density()[right])] == pytest.approx(17.1, abs=0.2)


def test_total_field_joins_regions(kin, sp):
    x = np.linspace(-2, 2, 9)
    f = total_field(sp, kin, "quaternionic", 0.0, x)
    left = synthesize(sp, kin, "quaternionic", "total-I", 0.0, x[x < 0])
    right = synthesize(sp, kin, "quaternionic", "total-II", 0.0, x[x >= 0])
    assert np.array_equal(f.z1, np.concatenate([left.z1, right.z1]))
    assert np.array_equal(f.z2, np.concatenate([left.z2, right.z2]))


@pytest.mark.parametrize("threads", [2, 3, 7])
def test_bit_identical_across_threads(kin, sp, grid, threads):
    ref = synthesize(sp, kin, "quaternionic", "total-II", 0.1, grid[grid >= 0], threads=1)
    got = synthesize(sp, kin, "quaternionic", "total-II", 0.1, grid[grid >= 0], threads=threads)
    assert np.array_equal(ref.z1, got.z1) and np.array_equal(ref.z2, got.z2)


def test_packetfield_validation():
    x = np.array([0.0, 1.0])
    with pytest.raises(ValueError):
        PacketField(0.0, x, np.zeros(3, complex), np.zeros(3, complex), "incident", "complex")
    with pytest.raises(ValueError):
        PacketField(0.0, x[::-1], np.zeros(2, complex), np.zeros(2, complex), "incident", "complex")
    f = PacketField(0.0, x, np.array([1, 2j]), np.array([0, 1]), "incident", "complex")
    assert len(f) == 2 and f[1].z1 == 2j
    assert f.density().tolist() == [1.0, 5.0]


def test_no_warning_in_reference_scenario(kin, sp):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        synthesize(sp, kin, "complex", "reflected", 0.0, np.array([-1.0]))
