"""Transmission and reflection amplitudes extracted from kernel values.

The kernel is the primitive object here, so amplitudes come from ratios of
kernel values at probe points beyond the interaction window rather than
from wavefunction matching. For an incident wave on the left flank,

    G(x, x')  ->  t * (m_-/(2 i k_-)) exp(i (k_+ x - k_- x'))   (x right, x' left)
    G(x, x')  ->  (m_-/(2 i k_-)) [exp(i k_- |x-x'|) + r exp(-i k_- (x+x'))]
                                                                (both points left)

with flux-weighted probabilities  T = |t|^2 (m_- k_+)/(m_+ k_-),  R = |r|^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EvanescentChannel, WindowViolation
from .slcore import ProblemSpec, asymptotic_wavenumber


@dataclass(frozen=True)
class AsymptoticChannel:
    """Flank masses, potentials and wavenumbers of the scattering problem."""

    m_minus: float
    m_plus: float
    v_minus: float
    v_plus: float
    k_minus: complex
    k_plus: complex
    omega: complex

    @property
    def propagating(self) -> bool:
        return (self.omega.real > self.v_minus) and (self.omega.real > self.v_plus)


def channel_for(problem: ProblemSpec) -> AsymptoticChannel:
    m, p = problem.mass, problem.potential
    return AsymptoticChannel(
        m_minus=m.m_minus, m_plus=m.m_plus,
        v_minus=p.v_minus, v_plus=p.v_plus,
        k_minus=asymptotic_wavenumber(m.m_minus, p.v_minus, problem.omega),
        k_plus=asymptotic_wavenumber(m.m_plus, p.v_plus, problem.omega),
        omega=problem.omega)


@dataclass(frozen=True)
class ScatteringResult:
    t: complex
    r: complex
    T: float
    R: float
    channel: AsymptoticChannel | None = None

    @property
    def unitarity_defect(self) -> float:
        return abs(self.T + self.R - 1.0)


def transmission_from_green(green, channel: AsymptoticChannel,
                            x: float, xp: float,
                            r_offset: float = 0.5) -> ScatteringResult:
    """Extract t and r from a kernel evaluator at probe points (x, x').

    Parameters
    ----------
    green : G0Evaluator or DressedGreen
        Must expose ``value`` and ``problem``.
    channel : AsymptoticChannel
    x : float
        Transmission probe, beyond the window on the right.
    xp : float
        Source probe, beyond the window on the left.
    r_offset : float
        The reflection pair is (xp, xp - r_offset), both on the left flank.
    """
    if not channel.propagating:
        raise EvanescentChannel(
            f"omega = {channel.omega} below a flank potential: no open channel")
    window = green.problem.window
    if x <= window or xp >= -window:
        raise WindowViolation(
            f"probes ({x}, {xp}) must lie beyond the window |x| > {window}")
    km, kp = channel.k_minus, channel.k_plus
    mm = channel.m_minus
    norm = 2j * km / mm

    t = complex(green.value(x, xp) * norm * np.exp(-1j * (kp * x - km * xp)))

    xr1, xr2 = xp, xp - r_offset
    incident = np.exp(1j * km * abs(xr1 - xr2)) / norm
    r = complex((green.value(xr1, xr2) - incident) * norm
                * np.exp(1j * km * (xr1 + xr2)))

    flux = (channel.m_minus * kp.real) / (channel.m_plus * km.real)
    return ScatteringResult(t=t, r=r, T=abs(t) ** 2 * flux, R=abs(r) ** 2,
                            channel=channel)
