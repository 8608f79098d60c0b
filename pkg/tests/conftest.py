"""Shared fixtures and independent numerical oracles.

The oracles here (finite differences, direct quadrature, plane-wave
closed forms) never call the code paths they are used to check.
"""

import numpy as np
import pytest

import slgreen as sg


# ---------------------------------------------------------------- oracles

def fd_partial_first(ev, x, xp, h=1e-6):
    """Central-difference d/dx of the kernel away from the diagonal."""
    return (ev.value(x + h, xp) - ev.value(x - h, xp)) / (2 * h)


def fd_partial_second(ev, x, xp, h=1e-6):
    return (ev.value(x, xp + h) - ev.value(x, xp - h)) / (2 * h)


def fd_jump(ev, mass, xp, eps=2e-4, h=1e-6):
    """Richardson-refined finite-difference estimate of the derivative jump
    of the kernel across x = x', divided by m(x')."""

    def jump(e):
        dplus = fd_partial_first(ev, xp + e, xp, h)
        dminus = fd_partial_first(ev, xp - e, xp, h)
        return dplus - dminus

    j = 2.0 * jump(eps / 2) - jump(eps)
    return j / mass(xp)


def defect_residual(green, problem, x, xp, h=1e-3):
    """|(1/m G')' + V G| at (x, x'), via five-point differences in x.

    Normalized against the auxiliary-kernel magnitude so the check stays
    meaningful where the dressed kernel itself vanishes identically.
    """
    m = problem.mass
    coeff = sg.effective_coefficient(problem.potential, problem.omega)

    def gp_over_m(s):
        g = (green.value(s - 2 * h, xp) - 8 * green.value(s - h, xp)
             + 8 * green.value(s + h, xp) - green.value(s + 2 * h, xp)) / (12 * h)
        return g / m(s)

    second = (gp_over_m(x - 2 * h) - 8 * gp_over_m(x - h)
              + 8 * gp_over_m(x + h) - gp_over_m(x + 2 * h)) / (12 * h)
    resid = second + coeff(x) * green.value(x, xp)
    base = getattr(green, "g0", green)
    scale = max(abs(coeff(x)), 1.0) * abs(base.value(x, xp))
    return abs(resid) / scale


def gaussian_momentum_amplitude(packet, k):
    """Exact momentum-space amplitude of the Gaussian packet."""
    s = packet.sigma
    return ((2 * s * s / np.pi) ** 0.25
            * np.exp(-s * s * (k - packet.k0) ** 2 - 1j * k * packet.x0))


def free_evolution_quadrature(packet, mass, t, x, n=4001, span=9.0):
    """Free evolution by direct momentum quadrature; independent of both the
    closed form and the kernel synthesis."""
    k_lo = packet.k0 - span / packet.sigma
    k_hi = packet.k0 + span / packet.sigma
    k = np.linspace(k_lo, k_hi, n)
    amp = gaussian_momentum_amplitude(packet, k)
    phase = np.exp(1j * (np.outer(x, k) - k * k * t / (2 * mass)))
    return np.trapezoid(phase * amp, k, axis=1) / np.sqrt(2 * np.pi)


# ---------------------------------------------------------------- fixtures

@pytest.fixture(scope="session")
def free_problem():
    return sg.ProblemSpec(mass=sg.constant_mass(1.0),
                          potential=sg.free_potential(window=1.0),
                          omega=0.5 + 1e-9j)


@pytest.fixture(scope="session")
def free_pair(free_problem):
    return sg.build_pair(free_problem)


@pytest.fixture(scope="session")
def free_g0(free_pair):
    return sg.g0(free_pair)


@pytest.fixture(scope="session")
def harmonic_problem():
    return sg.ProblemSpec(mass=sg.constant_mass(1.0),
                          potential=sg.harmonic_potential(window=8.0),
                          omega=0.25 + 1e-6j)


@pytest.fixture(scope="session")
def harmonic_pair(harmonic_problem):
    return sg.build_pair(harmonic_problem)


@pytest.fixture(scope="session")
def harmonic_g0(harmonic_pair):
    return sg.g0(harmonic_pair)


@pytest.fixture(scope="session")
def linear_problem():
    return sg.ProblemSpec(mass=sg.constant_mass(1.0),
                          potential=sg.linear_potential(slope=0.25, window=6.0),
                          omega=0.5 + 1e-6j)


@pytest.fixture(scope="session")
def varmass_problem():
    return sg.ProblemSpec(mass=sg.gaussian_bump_mass(1.0, 0.5, 1.0, 8.0),
                          potential=sg.free_potential(window=1.0),
                          omega=0.5 + 1e-6j)


@pytest.fixture(scope="session")
def backgrounds(free_problem, harmonic_problem, linear_problem, varmass_problem):
    return {"free": free_problem, "harmonic": harmonic_problem,
            "linear": linear_problem, "varmass": varmass_problem}
