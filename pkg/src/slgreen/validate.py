"""Built-in invariant suite for the `validate` scenario.

Fast desk-scale checks of the core constructions; each returns a measured
value and its threshold so failures are diagnosable from the output table.
"""

from __future__ import annotations

import numpy as np

from . import profiles
from .dressing import SingularParams, dress_delta, dress_delta_prime, assemble_general
from .reglab import (RegularizationSpec, build_regularized_potential,
                     mollifier, transfer_matrix_scatter)
from .scattering import channel_for, transmission_from_green
from .slcore import ProblemSpec, build_pair, g0, ode_residual


def _free_problem(eta=1e-9):
    return ProblemSpec(mass=profiles.constant_mass(1.0),
                       potential=profiles.free_potential(window=1.0),
                       omega=0.5 + 1j * eta)


def _harmonic_problem(eta=1e-6):
    return ProblemSpec(mass=profiles.constant_mass(1.0),
                       potential=profiles.harmonic_potential(window=8.0),
                       omega=0.25 + 1j * eta)


def run_default_suite() -> list[tuple[str, bool, float, float]]:
    checks: list[tuple[str, bool, float, float]] = []

    def record(name, measured, threshold):
        checks.append((name, bool(measured < threshold), float(measured),
                       float(threshold)))

    # Free-particle closed form.
    prob = _free_problem()
    ev = g0(build_pair(prob))
    k = prob.k_flank("lower")
    xs = np.linspace(-4.0, 4.0, 9)
    worst = 0.0
    for x in xs:
        for xp in xs:
            ref = np.exp(1j * k * abs(x - xp)) / (2j * k)
            worst = max(worst, abs(ev.value(x, xp) - ref) / abs(ref))
    record("free_g0_closed_form", worst, 1e-8)

    # ODE residual on the harmonic background.
    hprob = _harmonic_problem()
    hpair = build_pair(hprob)
    res = ode_residual(hpair.y1, hprob, np.linspace(-7.5, 7.5, 41))
    record("ode_residual_harmonic", float(np.max(res)), 1e-8)

    # Reduced-constant spread.
    probes = np.linspace(-8.5, 8.5, 25)
    red = np.array([1.0 / (hpair.y1.state(x)[0] * hpair.y2.state(x)[1]
                           - hpair.y1.state(x)[1] * hpair.y2.state(x)[0])
                    for x in probes])
    record("reduced_constant_spread",
           float(np.std(red) / abs(np.mean(red))), 1e-8)

    # Kernel symmetry.
    hev = g0(hpair)
    rng = np.random.default_rng(20240811)
    pts = rng.uniform(-6, 6, size=(12, 2))
    sym = max(abs(hev.value(a, b) - hev.value(b, a)) / abs(hev.value(a, b))
              for a, b in pts)
    record("g0_symmetry", float(sym), 1e-10)

    # Zero transmission through the derivative coupling.
    worst = 0.0
    for background in (_free_problem(1e-6), hprob):
        bev = g0(build_pair(background))
        dressed = dress_delta_prime(bev)
        for x, xp in ((1.5, -2.0), (3.0, -0.7), (0.4, -4.0)):
            denom = abs(bev.value(x, xp))
            worst = max(worst, abs(dressed.value(x, xp)) / denom)
    record("zero_transmission", worst, 1e-12)

    # Delta-barrier transmission against the algebraic value.
    prob_t = ProblemSpec(mass=profiles.constant_mass(1.0),
                         potential=profiles.free_potential(window=1.0),
                         omega=0.5 + 1e-12j)
    ev_t = g0(build_pair(prob_t))
    res_t = transmission_from_green(dress_delta(ev_t, 2.0), channel_for(prob_t),
                                    2.0, -2.0)
    record("delta_transmission", abs(res_t.T - 0.5), 1e-10)

    # Finite-surrogate convergence toward the limit kernel.
    pvals = np.array([1e2, 1e3, 1e4, 1e5, 1e6])
    ev_f = g0(build_pair(_free_problem(1e-6)))
    mags = np.array([abs(assemble_general(
        ev_f, SingularParams(alpha=3.0, beta=1.0, p=p)).value(1.0, -1.0))
        for p in pvals])
    slope = np.polyfit(np.log(pvals), np.log(mags), 1)[0]
    record("finite_p_decay_exponent", abs(slope + 1.0), 0.1)

    # Mollifier moments, split at the jump points of the piecewise shape.
    from scipy.integrate import quad
    worst = 0.0
    for shape in ("gaussian", "lorentzian-truncated", "paired-rectangles"):
        spec = RegularizationSpec(shape=shape, eps=0.1)
        g, gp = mollifier(spec)
        pts = [-spec.eps, 0.0, spec.eps]
        mass = quad(lambda s: float(g(np.array(s))), -spec.support,
                    spec.support, points=pts, limit=400)[0]
        first = quad(lambda s: s * float(gp(np.array(s))), -spec.support,
                     spec.support, points=pts, limit=400)[0]
        worst = max(worst, abs(mass - 1.0), abs(first + 1.0))
    record("mollifier_moments", worst, 1e-8)

    # Oracle unitarity at one regularized width.
    pot = build_regularized_potential(0.0, 0.7, RegularizationSpec(eps=0.1))
    res_u = transfer_matrix_scatter(pot, 1.0, 0.5)
    record("oracle_unitarity", res_u.unitarity_defect, 1e-8)

    return checks
