"""Mollifier regularization laboratory: the brute-force scattering oracle.

The point couplings are replaced by smooth profiles of width eps, the
resulting ordinary potential is fed through the same wave operator as any
smooth background, and transmission is computed by direct integration with
plane-wave matching. Scanning eps downward confronts the closed-form
distributional results with regularized physics.

Sign bookkeeping: a point profile u(x) added at the operator-coefficient
level corresponds to v(x) + u(x)/2 in energy units, since the coefficient
is 2*(omega - v). The delta part (strength alpha) is attractive for
alpha > 0; the delta-derivative part (strength beta) is an antisymmetric
dipole whose peak height scales like 1/eps^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.special import erf

from .errors import EvanescentChannel, IntegrationFailure, ValidationError
from .profiles import MassProfile, Potential
from .scattering import AsymptoticChannel, ScatteringResult
from .slcore import ProblemSpec, build_g0

_SHAPES = ("gaussian", "lorentzian-truncated", "paired-rectangles")
_DEFAULT_CUTOFF = {"gaussian": 8.0, "lorentzian-truncated": 40.0,
                   "paired-rectangles": 1.0}


@dataclass(frozen=True)
class RegularizationSpec:
    """Mollifier family: shape tag, width eps, support cutoff in units of eps."""

    shape: str = "gaussian"
    eps: float = 0.1
    cutoff: float | None = None

    def __post_init__(self):
        if self.shape not in _SHAPES:
            raise ValidationError(f"unknown mollifier shape {self.shape!r}")
        if self.eps <= 0:
            raise ValidationError("mollifier width eps must be positive")
        if self.cutoff is None:
            object.__setattr__(self, "cutoff", _DEFAULT_CUTOFF[self.shape])
        if self.shape == "gaussian" and self.cutoff < 8.0:
            raise ValidationError("gaussian support cutoff must be >= 8 eps")

    @property
    def support(self) -> float:
        return self.cutoff * self.eps


def mollifier(spec: RegularizationSpec) -> tuple[Callable, Callable]:
    """Unit-mass profile g_eps and its exact analytic derivative."""
    eps, cut = spec.eps, spec.support

    if spec.shape == "gaussian":
        # Renormalized by the truncated mass so the zeroth moment is exact.
        mass = erf(spec.cutoff / math.sqrt(2.0))
        norm = 1.0 / (eps * math.sqrt(2.0 * math.pi) * mass)

        def g(x):
            x = np.asarray(x, dtype=float)
            out = norm * np.exp(-x * x / (2.0 * eps * eps))
            return np.where(np.abs(x) <= cut, out, 0.0)

        def gp(x):
            x = np.asarray(x, dtype=float)
            out = -x / (eps * eps) * norm * np.exp(-x * x / (2.0 * eps * eps))
            return np.where(np.abs(x) <= cut, out, 0.0)

        return g, gp

    if spec.shape == "lorentzian-truncated":
        # A bare truncated Lorentzian has fat tails that spoil the first
        # moment of the derivative; a Gaussian taper of width cutoff/6
        # suppresses them below 1e-10 while keeping the heavy core.
        taper = cut / 6.0

        def core(x):
            return (eps / (x * x + eps * eps)) * np.exp(-x * x / (2.0 * taper * taper))

        mass = quad(lambda s: float(core(np.array(s))), -cut, cut, limit=200)[0]
        norm = 1.0 / mass

        def g(x):
            x = np.asarray(x, dtype=float)
            return np.where(np.abs(x) <= cut, norm * core(x), 0.0)

        def gp(x):
            x = np.asarray(x, dtype=float)
            lor = eps / (x * x + eps * eps)
            dlor = -2.0 * x * eps / (x * x + eps * eps) ** 2
            tap = np.exp(-x * x / (2.0 * taper * taper))
            dtap = -x / (taper * taper) * tap
            out = norm * (dlor * tap + lor * dtap)
            return np.where(np.abs(x) <= cut, out, 0.0)

        return g, gp

    # paired-rectangles: triangular hat whose derivative is a pair of
    # opposite rectangles on (-eps, 0) and (0, eps).
    def g(x):
        x = np.asarray(x, dtype=float)
        return np.where(np.abs(x) < eps, (eps - np.abs(x)) / (eps * eps), 0.0)

    def gp(x):
        x = np.asarray(x, dtype=float)
        return np.where((np.abs(x) < eps) & (x != 0.0),
                        -np.sign(x) / (eps * eps), 0.0)

    return g, gp


def regularized_profile(alpha: float, beta: float,
                        spec: RegularizationSpec) -> Callable:
    """Operator-level point profile u(x) = -alpha g_eps(x) + beta g_eps'(x)."""
    g, gp = mollifier(spec)

    def u(x):
        return -alpha * g(x) + beta * gp(x)

    return u


def build_regularized_potential(alpha: float, beta: float,
                                spec: RegularizationSpec,
                                base: Potential | None = None) -> Potential:
    """Fold the mollified point profile into the smooth-potential pathway.

    The profile enters the operator coefficient directly, which in energy
    units is v(x) -> v(x) + u(x)/2.
    """
    u = regularized_profile(alpha, beta, spec)
    sup = spec.support

    if base is None:
        def v(x):
            return 0.5 * u(np.asarray(x, dtype=float))
        v_minus = v_plus = 0.0
        window = sup
        breaks: tuple = ()
        kind = "regularized"
    else:
        def v(x):
            x = np.asarray(x, dtype=float)
            return base(x) + 0.5 * u(x)
        v_minus, v_plus = base.v_minus, base.v_plus
        window = max(base.window, sup)
        breaks = base.breakpoints
        kind = f"regularized+{base.kind}"

    if spec.shape == "paired-rectangles":
        breaks = tuple(sorted(set(breaks) | {-spec.eps, 0.0, spec.eps}))
    return Potential(func=v, kind=kind, v_minus=v_minus, v_plus=v_plus,
                     window=window, breakpoints=breaks)


def transfer_matrix_scatter(potential: Potential, mass: float,
                            energy: float,
                            rtol: float = 1e-10, atol: float = 1e-12) -> ScatteringResult:
    """Direct plane-wave-matched scattering at real energy, constant mass.

    Integrates the homogeneous equation from the right window edge to the
    left one and decomposes the state into incident and reflected waves.
    """
    if energy <= potential.v_minus or energy <= potential.v_plus:
        raise EvanescentChannel(
            f"energy {energy} not above both flank potentials")
    m = float(mass)
    km = math.sqrt(2.0 * m * (energy - potential.v_minus))
    kp = math.sqrt(2.0 * m * (energy - potential.v_plus))
    w = potential.window

    def rhs(x, u):
        return np.array([u[1], -2.0 * m * (energy - potential(x)) * u[0]],
                        dtype=complex)

    pts = [w] + sorted((b for b in potential.breakpoints if -w < b < w),
                       reverse=True) + [-w]
    state = np.array([np.exp(1j * kp * w), 1j * kp * np.exp(1j * kp * w)],
                     dtype=complex)
    for a, b in zip(pts[:-1], pts[1:]):
        if a == b:
            continue
        sol = solve_ivp(rhs, (a, b), state, method="DOP853",
                        rtol=rtol, atol=atol)
        if not sol.success:
            raise IntegrationFailure(f"transfer sweep failed on [{a}, {b}]: {sol.message}")
        state = sol.y[:, -1]

    psi, dpsi = state
    a_inc = 0.5 * (psi + dpsi / (1j * km)) * np.exp(1j * km * w)
    b_ref = 0.5 * (psi - dpsi / (1j * km)) * np.exp(-1j * km * w)
    t = 1.0 / a_inc
    r = b_ref / a_inc
    channel = AsymptoticChannel(m_minus=m, m_plus=m,
                                v_minus=potential.v_minus, v_plus=potential.v_plus,
                                k_minus=km, k_plus=kp, omega=complex(energy))
    return ScatteringResult(t=complex(t), r=complex(r),
                            T=abs(t) ** 2 * kp / km, R=abs(r) ** 2,
                            channel=channel)


@dataclass
class ScanResult:
    """Per-eps transmission table with a fitted decay exponent."""

    eps: np.ndarray
    results: list
    decay_exponent: float
    non_monotonic: bool

    def rows(self):
        for e, res in zip(self.eps, self.results):
            yield (float(e), res.T, res.R,
                   res.t.real, res.t.imag, res.r.real, res.r.imag)

    @property
    def max_unitarity_defect(self) -> float:
        return max(res.unitarity_defect for res in self.results)


def epsilon_scan(alpha: float, beta: float, energy: float,
                 eps_list: Sequence[float], shape: str = "gaussian",
                 cutoff: float | None = None, mass: float = 1.0) -> ScanResult:
    """Transmission versus mollifier width, finest width last.

    The eps list must be strictly decreasing. Rows where T rises as eps
    shrinks are flagged (resonant couplings exist for some mollifiers),
    never failed.
    """
    eps = np.asarray(list(eps_list), dtype=float)
    if eps.ndim != 1 or len(eps) < 1 or np.any(np.diff(eps) >= 0):
        raise ValidationError("eps list must be strictly decreasing")
    results = []
    for e in eps:
        spec = RegularizationSpec(shape=shape, eps=float(e), cutoff=cutoff)
        pot = build_regularized_potential(alpha, beta, spec)
        results.append(transfer_matrix_scatter(pot, mass, energy))
    ts = np.array([r.T for r in results])
    if len(eps) >= 2 and np.all(ts > 0):
        slope = np.polyfit(np.log(eps), np.log(ts), 1)[0]
    else:
        slope = float("nan")
    non_mono = bool(np.any(np.diff(ts) > 0))
    return ScanResult(eps=eps, results=results, decay_exponent=float(slope),
                      non_monotonic=non_mono)


def oracle_green(potential: Potential, mass: MassProfile, omega: complex,
                 x: float, xp: float) -> complex:
    """Direct numerical kernel for the regularized problem at one point pair."""
    problem = ProblemSpec(mass=mass, potential=potential, omega=omega)
    return complex(build_g0(problem).value(x, xp))


def extrapolate_to_zero(values: Sequence, eps: Sequence[float]) -> complex:
    """Polynomial (Neville) extrapolation of f(eps) to eps = 0.

    Mollified point couplings converge with a leading first-order term in
    eps (the in-profile separation enters the second scattering order), so
    the table eliminates successive powers of eps rather than eps^2.
    """
    e = np.asarray(eps, dtype=float)
    p = np.asarray(values, dtype=complex).copy()
    if len(e) != len(p) or len(e) < 2:
        raise ValidationError("extrapolation needs matching lists, length >= 2")
    for lvl in range(1, len(p)):
        p = (e[lvl:] * p[:-1] - e[:-lvl] * p[1:]) / (e[lvl:] - e[:-lvl])
    return complex(p[0])
