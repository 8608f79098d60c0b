"""Auxiliary Green's function of the smooth-background Sturm-Liouville operator.

The operator acting on y is  d/dx[(1/m(x)) dy/dx] + V(x; omega) y  with the
effective coefficient V(x; omega) = 2*(omega - v(x)), so constant-coefficient
solutions obey k^2 = 2 m (omega - v). Two homogeneous solutions, one matching
an outgoing/decaying plane wave on each flank, are integrated inward across
the interaction window and continued analytically as plane waves outside it.
The kernel is assembled as

    G0(x, x') = C * [ step(x'-x) y1(x) y2(x') + step(x-x') y2(x) y1(x') ]

with C = m(x')/Wronskian(y1, y2), which is position independent for this
operator, and step(0) = 1/2 at coincidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (DependentSolutions, IntegrationFailure, NonConstantReduced,
                     ValidationError)
from .profiles import MassProfile, Potential, check_positive_mass

# Adaptive-stepping tolerances: two orders of headroom over the 1e-8
# acceptance thresholds.
RTOL = 1e-10
ATOL = 1e-12
_RESCALE_LIMIT = 1e120

# |reduced Wronskian| below this fraction of its natural scale signals a
# bound-state pole; relative spread above NONCONST_TOL signals bad integration.
DEPENDENT_TOL = 1e-8
NONCONST_TOL = 1e-8


@dataclass(frozen=True)
class ProblemSpec:
    """Background problem: mass profile, smooth potential, complex frequency.

    The retarded prescription requires Im(omega) > 0 strictly; real-axis
    quantities are obtained with a small configurable offset.
    """

    mass: MassProfile
    potential: Potential
    omega: complex
    half_length: float | None = None

    def __post_init__(self):
        if not (self.omega.imag > 0):
            raise ValidationError(
                f"retarded prescription needs Im(omega) > 0, got {self.omega.imag}")
        w = self.window
        hl = self.half_length
        if hl is None:
            object.__setattr__(self, "half_length", w + 2.0)
        elif hl < w:
            raise ValidationError("half_length must not be inside the window")

    @property
    def window(self) -> float:
        return max(self.mass.window, self.potential.window)

    def k_flank(self, side: str) -> complex:
        if side == "lower":
            m, v = self.mass.m_minus, self.potential.v_minus
        else:
            m, v = self.mass.m_plus, self.potential.v_plus
        return asymptotic_wavenumber(m, v, self.omega)


def effective_coefficient(potential: Potential, omega: complex) -> Callable:
    """Coefficient multiplying y in the wave operator: x -> 2*(omega - v(x))."""

    def coeff(x):
        return 2.0 * (omega - potential(x))

    return coeff


def asymptotic_wavenumber(m: float, v: float, omega: complex) -> complex:
    """k = sqrt(2 m (omega - v)) on the branch Im k >= 0."""
    k = complex(np.sqrt(complex(2.0 * m * (omega - v))))
    if k.imag < 0:
        k = -k
    return k


class _PlaneZone:
    """Exact two-wave continuation y = a e^{ik(x-x0)} + b e^{-ik(x-x0)}."""

    __slots__ = ("x0", "k", "m", "a", "b")

    def __init__(self, x0: float, k: complex, m: float, a: complex, b: complex):
        self.x0, self.k, self.m, self.a, self.b = x0, k, m, a, b

    @classmethod
    def from_state(cls, x0: float, k: complex, m: float, y: complex, w: complex):
        # w = y'/m; decompose the state into the two plane-wave amplitudes.
        yp = m * w
        a = 0.5 * (y + yp / (1j * k))
        b = 0.5 * (y - yp / (1j * k))
        return cls(x0, k, m, a, b)

    def state(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        ep = np.exp(1j * self.k * (x - self.x0))
        em = np.exp(-1j * self.k * (x - self.x0))
        y = self.a * ep + self.b * em
        w = (1j * self.k / self.m) * (self.a * ep - self.b * em)
        return y, w


@dataclass
class HomogeneousSolution:
    """One flank-matched solution with value and derivative evaluators.

    The integration runs at unit magnitude from the window edge; the exact
    plane-wave normalization (y1 = e^{-ik-x} on the left flank, y2 =
    e^{+ik+x} on the right) is restored by the analytic gauge factor
    ``amp``. ``log_scale`` records any magnitude renormalizations applied
    during the inward integration (overflow control); the kernel is
    invariant under all such rescalings.
    """

    side: str
    problem: ProblemSpec
    log_scale: float
    amp: complex
    _left: _PlaneZone
    _right: _PlaneZone
    _segments: list  # (lo, hi, dense solution, log-scale offset)
    _wlo: float
    _whi: float

    def state(self, x) -> tuple[np.ndarray, np.ndarray]:
        """(y, y'/m) at x; accepts scalars or arrays."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.empty(xs.shape, dtype=complex)
        w = np.empty(xs.shape, dtype=complex)
        left = xs < self._wlo
        right = xs > self._whi
        if left.any():
            y[left], w[left] = self._left.state(xs[left])
        if right.any():
            y[right], w[right] = self._right.state(xs[right])
        mid = ~(left | right)
        if mid.any():
            if self._segments:
                ym, wm = self._eval_interior(xs[mid])
            else:
                # Zero-width window: the whole axis is plane-wave zones and
                # only the edge point itself lands here.
                ym, wm = self._left.state(xs[mid])
            y[mid], w[mid] = ym, wm
        y *= self.amp
        w *= self.amp
        if np.isscalar(x) or np.asarray(x).ndim == 0:
            return y[0], w[0]
        return y, w

    def _eval_interior(self, xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        y = np.empty(xs.shape, dtype=complex)
        w = np.empty(xs.shape, dtype=complex)
        for lo, hi, dense, logoff in self._segments:
            sel = (xs >= lo) & (xs <= hi)
            if not sel.any():
                continue
            vals = dense(xs[sel]) * math.exp(logoff)
            y[sel] = vals[0]
            w[sel] = vals[1]
        return y, w

    def value(self, x):
        return self.state(x)[0]

    def derivative(self, x):
        y, w = self.state(x)
        return self.problem.mass(x) * w


def _segment_points(problem: ProblemSpec, wlo: float, whi: float) -> list[float]:
    pts = {wlo, whi}
    for b in tuple(problem.potential.breakpoints) + tuple(problem.mass.breakpoints):
        if wlo < b < whi:
            pts.add(float(b))
    return sorted(pts)


def solve_homogeneous(problem: ProblemSpec, side: str) -> HomogeneousSolution:
    """Integrate one flank-matched homogeneous solution across the window.

    Parameters
    ----------
    problem : ProblemSpec
    side : {'lower', 'upper'}
        'lower' matches y ~ e^{-i k_- x} as x -> -inf, 'upper' matches
        y ~ e^{+i k_+ x} as x -> +inf (retarded conventions, Im k > 0).

    Returns
    -------
    HomogeneousSolution
        Valid on the whole axis: plane waves outside the window, dense ODE
        output inside, matched with y and (1/m) y' continuous.
    """
    if side not in ("lower", "upper"):
        raise ValidationError(f"side must be 'lower' or 'upper', got {side!r}")
    w = problem.window
    check_positive_mass(problem.mass, w + 2.0)

    mass, pot, omega = problem.mass, problem.potential, problem.omega
    coeff = effective_coefficient(pot, omega)

    def rhs(x, u):
        # State u = (y, w) with w = y'/m; w stays continuous across
        # finite jumps of v, which implements interface matching for free.
        return np.array([mass(x) * u[1], -coeff(x) * u[0]], dtype=complex)

    k_lo = problem.k_flank("lower")
    k_hi = problem.k_flank("upper")

    if side == "lower":
        x_start, x_stop = -w, w
        k0, m0 = k_lo, mass.m_minus
        u0 = np.array([1.0, -1j * k0 / m0], dtype=complex)  # e^{-ik(x+w)} at x=-w
    else:
        x_start, x_stop = w, -w
        k0, m0 = k_hi, mass.m_plus
        u0 = np.array([1.0, 1j * k0 / m0], dtype=complex)   # e^{+ik(x-w)} at x=+w

    points = _segment_points(problem, -w, w)
    if side == "upper":
        points = points[::-1]

    segments = []
    log_scale = 0.0
    u = u0
    for a, b in zip(points[:-1], points[1:]):
        if a == b:
            continue
        sol = solve_ivp(rhs, (a, b), u, method="DOP853",
                        rtol=RTOL, atol=ATOL, dense_output=True)
        if not sol.success:
            raise IntegrationFailure(
                f"{side} solution failed on [{a}, {b}]: {sol.message}")
        segments.append((min(a, b), max(a, b), sol.sol, log_scale))
        u = sol.y[:, -1]
        mag = float(max(abs(u[0]), abs(u[1])))
        if mag > _RESCALE_LIMIT:
            u = u / mag
            log_scale += math.log(mag)

    u_end = u * math.exp(log_scale)

    if side == "lower":
        left = _PlaneZone(-w, k_lo, mass.m_minus, 0.0, 1.0)  # e^{-ik(x+w)}
        right = _PlaneZone.from_state(w, k_hi, mass.m_plus, u_end[0], u_end[1])
        amp = np.exp(1j * k_lo * w)   # restores y1 = e^{-ik x} on the flank
    else:
        right = _PlaneZone(w, k_hi, mass.m_plus, 1.0, 0.0)   # e^{+ik(x-w)}
        left = _PlaneZone.from_state(-w, k_lo, mass.m_minus, u_end[0], u_end[1])
        amp = np.exp(1j * k_hi * w)   # restores y2 = e^{+ik x} on the flank

    if not np.isfinite(amp) or amp == 0.0:
        # Deeply evanescent flank: keep the edge-normalized gauge and record
        # the intended factor; the kernel is gauge invariant either way.
        log_scale += -abs((1j * (k_lo if side == "lower" else k_hi) * w).real)
        amp = 1.0 + 0.0j

    return HomogeneousSolution(side=side, problem=problem, log_scale=log_scale,
                               amp=complex(amp), _left=left, _right=right,
                               _segments=segments, _wlo=-w, _whi=w)


@dataclass
class HomogeneousPair:
    """The two flank solutions plus the reduced constant C = m/Wronskian."""

    y1: HomogeneousSolution
    y2: HomogeneousSolution
    problem: ProblemSpec
    C: complex | None = None


def wronskian(pair: HomogeneousPair, x) -> complex:
    """y1(x) y2'(x) - y1'(x) y2(x)."""
    y1, w1 = pair.y1.state(x)
    y2, w2 = pair.y2.state(x)
    m = pair.problem.mass(x)
    return m * (y1 * w2 - w1 * y2)


def _reduced_wronskian(pair: HomogeneousPair, x):
    """m(x)/Wronskian is 1/(y1 w2 - w1 y2); the denominator is conserved exactly."""
    y1, w1 = pair.y1.state(x)
    y2, w2 = pair.y2.state(x)
    red = y1 * w2 - w1 * y2
    scale = np.abs(y1) * np.abs(w2) + np.abs(w1) * np.abs(y2)
    return red, scale


def reduced_constant(pair: HomogeneousPair, probes=None,
                     spread_tol: float = NONCONST_TOL) -> complex:
    """C = m(x)/Wronskian averaged over a probe grid.

    Raises
    ------
    DependentSolutions
        If the Wronskian is below threshold anywhere (bound-state pole).
    NonConstantReduced
        If the relative spread of C across the probes exceeds tolerance.
    """
    if probes is None:
        hl = pair.problem.half_length
        probes = np.linspace(-hl, hl, 21)
    probes = np.asarray(probes, dtype=float)
    red, scale = _reduced_wronskian(pair, probes)
    if np.any(np.abs(red) <= DEPENDENT_TOL * scale):
        raise DependentSolutions(
            "Wronskian below threshold: bound-state pole at this frequency")
    c = 1.0 / red
    mean = np.mean(c)
    spread = float(np.std(c) / abs(mean))
    if spread > spread_tol:
        raise NonConstantReduced(
            f"reduced constant spread {spread:.3e} exceeds {spread_tol:.1e}")
    return complex(mean)


@dataclass(frozen=True)
class BoundaryData:
    """Origin values of G0 and its one-sided first derivatives."""

    g00: complex
    dl: complex
    dr: complex


class G0Evaluator:
    """Auxiliary kernel G0(x, x') with one-sided derivatives and origin data.

    Scalar and array arguments broadcast; ``matrix`` builds the full kernel
    on an output-by-source grid via outer products. The coincidence line
    x = x' uses the step value 1/2, which for the plain kernel reduces to
    the common product y1 y2 and for the derivatives to the half sum of the
    two one-sided terms.
    """

    def __init__(self, pair: HomogeneousPair):
        if pair.C is None:
            pair.C = reduced_constant(pair)
        self.pair = pair
        self.problem = pair.problem
        self.C = pair.C
        y10, w10 = pair.y1.state(0.0)
        y20, w20 = pair.y2.state(0.0)
        m0 = float(pair.problem.mass(0.0))
        self._y10, self._y20 = complex(y10), complex(y20)
        self._d10, self._d20 = complex(m0 * w10), complex(m0 * w20)
        self.u00 = self._y10 * self._y20
        g00 = self.C * self.u00
        dl = 0.5 * self.C * (self._d10 * self._y20 + self._d20 * self._y10)
        dr = 0.5 * self.C * (self._y10 * self._d20 + self._y20 * self._d10)
        self.boundary = BoundaryData(g00=g00, dl=dl, dr=dr)

    # -- scalar/broadcast evaluation --------------------------------------

    def value(self, x, xp):
        """G0(x, x')."""
        x = np.asarray(x, dtype=float)
        xp = np.asarray(xp, dtype=float)
        y1x = self.pair.y1.value(x)
        y2x = self.pair.y2.value(x)
        y1p = self.pair.y1.value(xp)
        y2p = self.pair.y2.value(xp)
        # The two branches coincide at x = x', so no special case is needed.
        out = self.C * np.where(x < xp, y1x * y2p, y2x * y1p)
        return out[()] if out.ndim == 0 else out

    def _one_sided(self, x, xp, d_first: bool):
        x = np.asarray(x, dtype=float)
        xp = np.asarray(xp, dtype=float)
        if d_first:
            f1x, f2x = self.pair.y1.derivative(x), self.pair.y2.derivative(x)
            f1p, f2p = self.pair.y1.value(xp), self.pair.y2.value(xp)
        else:
            f1x, f2x = self.pair.y1.value(x), self.pair.y2.value(x)
            f1p, f2p = self.pair.y1.derivative(xp), self.pair.y2.derivative(xp)
        lower = f1x * f2p
        upper = f2x * f1p
        out = self.C * np.where(x < xp, lower, upper)
        eq = np.broadcast_to(x == xp, np.broadcast_shapes(x.shape, xp.shape))
        if eq.any():
            half = 0.5 * self.C * (lower + upper)
            out = np.where(eq, np.broadcast_to(half, out.shape), out)
        return out[()] if out.ndim == 0 else out

    def partial_l(self, x, xp):
        """d/dx G0(x, x') keeping the step factors (delta terms cancel)."""
        return self._one_sided(x, xp, d_first=True)

    def partial_r(self, x, xp):
        """d/dx' G0(x, x')."""
        return self._one_sided(x, xp, d_first=False)

    # -- matrix evaluation -------------------------------------------------

    def matrix(self, x_out, x_in) -> np.ndarray:
        """Kernel values on the grid x_out (rows) by x_in (columns)."""
        x_out = np.asarray(x_out, dtype=float)
        x_in = np.asarray(x_in, dtype=float)
        y1o = self.pair.y1.value(x_out)
        y2o = self.pair.y2.value(x_out)
        y1i = self.pair.y1.value(x_in)
        y2i = self.pair.y2.value(x_in)
        below = np.outer(y1o, y2i)
        above = np.outer(y2o, y1i)
        return self.C * np.where(x_out[:, None] < x_in[None, :], below, above)

    # -- factored pieces consumed by the singular dressing -----------------

    def u_cross(self, x):
        """Step-form product u(x, 0) = u(0, x) without the prefactor C."""
        x = np.asarray(x, dtype=float)
        y1x = self.pair.y1.value(x)
        y2x = self.pair.y2.value(x)
        out = np.where(x < 0.0, y1x * self._y20, y2x * self._y10)
        out = np.where(x == 0.0, self.u00, out)
        return out[()] if out.ndim == 0 else out

    def partial_r_cross(self, x):
        """d/dx' G0(x, x') at x' = 0."""
        x = np.asarray(x, dtype=float)
        y1x = self.pair.y1.value(x)
        y2x = self.pair.y2.value(x)
        lower = y1x * self._d20
        upper = y2x * self._d10
        out = self.C * np.where(x < 0.0, lower, upper)
        out = np.where(x == 0.0, 0.5 * self.C * (lower + upper), out)
        return out[()] if out.ndim == 0 else out

    def g_cross(self, x):
        """G0(x, 0) = G0(0, x)."""
        return self.C * self.u_cross(x)

    def partial_l_origin(self, xp):
        """d/dx G0(x, x') evaluated at x = 0."""
        xp = np.asarray(xp, dtype=float)
        y1p = self.pair.y1.value(xp)
        y2p = self.pair.y2.value(xp)
        lower = self._d10 * y2p   # 0 < x'
        upper = self._d20 * y1p   # 0 > x'
        out = self.C * np.where(xp > 0.0, lower, upper)
        out = np.where(xp == 0.0, 0.5 * self.C * (lower + upper), out)
        return out[()] if out.ndim == 0 else out


def build_pair(problem: ProblemSpec) -> HomogeneousPair:
    pair = HomogeneousPair(y1=solve_homogeneous(problem, "lower"),
                           y2=solve_homogeneous(problem, "upper"),
                           problem=problem)
    pair.C = reduced_constant(pair)
    return pair


def g0(pair: HomogeneousPair) -> G0Evaluator:
    """Assemble the auxiliary Green's function from a solved pair."""
    return G0Evaluator(pair)


def build_g0(problem: ProblemSpec) -> G0Evaluator:
    return g0(build_pair(problem))


def g0_partials(ev: G0Evaluator):
    """(left-derivative evaluator, right-derivative evaluator, boundary data)."""
    return ev.partial_l, ev.partial_r, ev.boundary


def ode_residual(sol: HomogeneousSolution, problem: ProblemSpec,
                 xs, h: float = 1e-3) -> np.ndarray:
    """Normalized defect |(1/m y')' + V y| / max(|y|, 1) by five-point differences.

    Probe points whose stencil straddles a segment breakpoint are skipped
    (the derivative jump there is physical, not an integration error).
    """
    xs = np.asarray(xs, dtype=float)
    breaks = np.array(sorted({-problem.window, problem.window,
                              *problem.potential.breakpoints,
                              *problem.mass.breakpoints}))
    keep = np.min(np.abs(breaks[None, :] - xs[:, None]), axis=1) > 3 * h
    xs = xs[keep]
    coeff = effective_coefficient(problem.potential, problem.omega)
    y0, w0 = sol.state(xs)
    stencil = [sol.state(xs + s * h)[1] for s in (-2, -1, 1, 2)]
    dw = (stencil[0] - 8 * stencil[1] + 8 * stencil[2] - stencil[3]) / (12 * h)
    resid = dw + coeff(xs) * y0
    return np.abs(resid) / np.maximum(np.abs(y0), 1.0)
