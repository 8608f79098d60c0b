"""Frequency-synthesized packet propagation and its calibration."""

import numpy as np
import pytest

import slgreen as sg
from slgreen.errors import CalibrationFailure, SpectralTruncation
from slgreen.runner import GreenFamily

from conftest import free_evolution_quadrature

ETA = 1e-9


@pytest.fixture(scope="module")
def packet():
    return sg.GaussianPacket(x0=-10.0, k0=2.0, sigma=1.0)


@pytest.fixture(scope="module")
def free_family():
    return GreenFamily(sg.constant_mass(1.0), sg.free_potential(window=1.0))


@pytest.fixture(scope="module")
def omega_grid(packet):
    prob = sg.ProblemSpec(mass=sg.constant_mass(1.0),
                          potential=sg.free_potential(window=1.0),
                          omega=0.5 + 1j * ETA)
    return sg.omega_quadrature(packet, sg.channel_for(prob), eta=ETA)


@pytest.fixture(scope="module")
def constant(free_family, packet, omega_grid):
    x_cal = np.linspace(-26.0, 6.0, 641)
    return sg.calibrate_propagator(free_family, packet, 1.0, x_cal, omega_grid)


def test_packet_normalization(packet):
    x = np.linspace(-20, 0, 2001)
    assert sg.norm_l2(packet.values(x), x) == pytest.approx(1.0, abs=1e-10)


def test_closed_form_matches_quadrature_oracle(packet):
    # Freeze the analytic evolution against direct momentum quadrature
    # before trusting it as the reference elsewhere.
    x = np.linspace(-16, -2, 301)
    for t in (0.0, 0.7, 1.5):
        a = sg.free_gaussian_evolution(packet, 1.0, t, x)
        b = free_evolution_quadrature(packet, 1.0, t, x)
        assert np.max(np.abs(a - b)) < 1e-9


def test_calibration_constant(constant):
    # The empirical constant for this operator normalization sits at -2/pi.
    assert constant.real == pytest.approx(-2.0 / np.pi, abs=2e-7)
    assert abs(constant.imag) < 1e-6


def test_calibration_stable_under_refinement(free_family, packet, omega_grid,
                                             constant):
    prob = sg.ProblemSpec(mass=sg.constant_mass(1.0),
                          potential=sg.free_potential(window=1.0),
                          omega=0.5 + 1j * ETA)
    finer = sg.omega_quadrature(packet, sg.channel_for(prob), eta=ETA,
                                nodes_per_panel=32)
    x_cal = np.linspace(-26.0, 6.0, 641)
    c2 = sg.calibrate_propagator(free_family, packet, 1.0, x_cal, finer)
    assert abs(c2 - constant) < 1e-6 * abs(constant)


def test_free_norm_and_shape(free_family, packet, omega_grid, constant):
    x_out = np.linspace(-26.0, 6.0, 641)
    psi = sg.propagate_wavepacket(free_family, packet, 1.0, x_out, omega_grid,
                                  constant)
    assert abs(sg.norm_l2(psi, x_out) - 1.0) < 1e-6
    ref = sg.free_gaussian_evolution(packet, 1.0, 1.0, x_out)
    err = np.sqrt(np.trapezoid(np.abs(psi - ref) ** 2, x_out))
    assert err < 1e-6


def test_zero_duration_is_identity(free_family, packet, omega_grid, constant):
    x_out = np.linspace(-18.0, -2.0, 321)
    psi = sg.propagate_wavepacket(free_family, packet, 0.0, x_out, omega_grid,
                                  constant)
    ref = packet.values(x_out)
    err = np.sqrt(np.trapezoid(np.abs(psi - ref) ** 2, x_out))
    assert err < 1e-6


def test_derivative_coupling_blocks_packet(free_family, packet, omega_grid,
                                           constant):
    params = sg.SingularParams(alpha=0.0, beta=0.7, p=None)
    family = GreenFamily(sg.constant_mass(1.0), sg.free_potential(window=1.0),
                         params)
    family._cache = free_family._cache
    x_out = np.linspace(-30.0, 10.0, 801)
    psi = sg.propagate_wavepacket(family, packet, 1.0, x_out, omega_grid,
                                  constant)
    right = x_out > 0
    transmitted = np.trapezoid(np.abs(psi[right]) ** 2, x_out[right])
    assert transmitted < 1e-8
    assert abs(sg.norm_l2(psi, x_out) - 1.0) < 1e-5


def test_spectral_truncation_guard(free_family, omega_grid, constant):
    # A faster packet pushes weight beyond the frequency window.
    hot = sg.GaussianPacket(x0=-10.0, k0=5.0, sigma=1.0)
    with pytest.raises(SpectralTruncation):
        sg.propagate_wavepacket(free_family, hot, 1.0,
                                np.linspace(-20, 0, 101), omega_grid, constant)


def test_inadequate_grid_fails_calibration(free_family, packet):
    # A handful of nodes cannot resolve the spectral integrand; the norm and
    # composition estimates of the constant then disagree.
    prob = sg.ProblemSpec(mass=sg.constant_mass(1.0),
                          potential=sg.free_potential(window=1.0),
                          omega=0.5 + 1j * ETA)
    crude = sg.omega_quadrature(packet, sg.channel_for(prob), eta=ETA,
                                panel_width=7.0, nodes_per_panel=4)
    x_cal = np.linspace(-26.0, 6.0, 321)
    with pytest.raises(CalibrationFailure):
        sg.calibrate_propagator(free_family, packet, 1.0, x_cal, crude)


def test_concurrent_kernel_reads(free_family):
    # Constructed evaluators are immutable; concurrent readers must agree
    # with the serial path.
    from concurrent.futures import ThreadPoolExecutor

    ev = free_family(0.5 + 1j * ETA)
    pts = [(0.1 * i, -0.07 * i) for i in range(1, 40)]
    serial = [ev.value(x, xp) for x, xp in pts]
    with ThreadPoolExecutor(max_workers=8) as pool:
        threaded = list(pool.map(lambda p: ev.value(*p), pts))
    assert serial == threaded
