"""Mass and potential profiles for the 1D Sturm-Liouville operator.

All profiles are exactly constant outside a finite interaction window
(compact-support convention), which makes plane-wave continuation beyond
the window exact. Evaluators are numpy-vectorized.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import NonPositiveMass, ValidationError

Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class MassProfile:
    """Position-dependent reduced mass m(x) > 0 (hbar = 1 units).

    Attributes
    ----------
    func : callable
        Vectorized x -> m(x).
    kind : str
        One of ``constant``, ``smooth-parametric``, ``tabulated``.
    m_minus, m_plus : float
        Asymptotic values on the two flanks.
    window : float
        Half width outside which ``|m(x) - m_flank|`` is below ``flat_tol``.
    breakpoints : tuple of float
        Interior points where smoothness is reduced (segment boundaries for
        the integrator).
    """

    func: Evaluator
    kind: str
    m_minus: float
    m_plus: float
    window: float
    breakpoints: tuple = ()
    flat_tol: float = 1e-12

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class Potential:
    """Smooth background potential v(x) (real energy units).

    Piecewise continuous, with every discontinuity inside the interaction
    window; outside the window v(x) equals the flank constants exactly.
    """

    func: Evaluator
    kind: str
    v_minus: float
    v_plus: float
    window: float
    breakpoints: tuple = ()

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))


def constant_mass(value: float = 1.0) -> MassProfile:
    if value <= 0:
        raise NonPositiveMass(f"constant mass must be positive, got {value}")
    v = float(value)
    return MassProfile(
        func=lambda x: np.full_like(np.asarray(x, dtype=float), v),
        kind="constant", m_minus=v, m_plus=v, window=0.0)


def gaussian_bump_mass(base: float = 1.0, bump: float = 0.5,
                       width: float = 1.0, window: float = 8.0) -> MassProfile:
    """Smooth parametric profile m(x) = base + bump*exp(-x^2/(2 width^2)).

    The window must be wide enough that the bump is flat there to within
    the declared tolerance; 8 widths leave a residual ~1e-14*bump.
    """
    if base <= 0 or base + min(0.0, bump) <= 0:
        raise NonPositiveMass("gaussian bump profile dips to m <= 0")
    b, a, w = float(base), float(bump), float(width)

    def f(x):
        x = np.asarray(x, dtype=float)
        out = b + a * np.exp(-x * x / (2.0 * w * w))
        return np.where(np.abs(x) <= window, out, b)

    resid = abs(a) * float(np.exp(-window**2 / (2 * w * w)))
    if resid > 1e-10:
        raise ValidationError(
            f"mass bump not flat at the window edge (residual {resid:.2e})")
    return MassProfile(func=f, kind="smooth-parametric", m_minus=b, m_plus=b,
                       window=float(window))


def free_potential(window: float = 1.0) -> Potential:
    return Potential(func=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
                     kind="free", v_minus=0.0, v_plus=0.0, window=float(window))


def harmonic_potential(curvature: float = 1.0, window: float = 8.0) -> Potential:
    """v(x) = curvature*x^2/2 inside the window, clamped to v(window) outside."""
    c, w = float(curvature), float(window)
    edge = 0.5 * c * w * w

    def f(x):
        x = np.asarray(x, dtype=float)
        return np.where(np.abs(x) <= w, 0.5 * c * x * x, edge)

    return Potential(func=f, kind="harmonic", v_minus=edge, v_plus=edge, window=w)


def linear_potential(slope: float, window: float = 6.0) -> Potential:
    """Uniform-field ramp v(x) = slope*x inside the window, clamped outside."""
    s, w = float(slope), float(window)

    def f(x):
        x = np.asarray(x, dtype=float)
        return s * np.clip(x, -w, w)

    return Potential(func=f, kind="linear-field", v_minus=-s * w, v_plus=s * w,
                     window=w)


def square_well(depth: float, half_width: float, window: float | None = None) -> Potential:
    """Piecewise-constant well v(x) = -depth on |x| < half_width, 0 outside."""
    d, a = float(depth), float(half_width)
    w = float(window) if window is not None else a

    def f(x):
        x = np.asarray(x, dtype=float)
        return np.where(np.abs(x) < a, -d, 0.0)

    return Potential(func=f, kind="piecewise-polynomial", v_minus=0.0, v_plus=0.0,
                     window=w, breakpoints=(-a, a))


def _parse_two_column(text: str) -> tuple[np.ndarray, np.ndarray]:
    """Two-column numeric text: strictly increasing x, whitespace or comma."""
    rows = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise ValidationError(f"line {ln}: expected two columns, got {len(parts)}")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise ValidationError(f"line {ln}: non-numeric entry") from exc
    if len(rows) < 2:
        raise ValidationError("tabulated profile needs at least two rows")
    xs = np.array([r[0] for r in rows])
    ys = np.array([r[1] for r in rows])
    if not np.all(np.diff(xs) > 0):
        raise ValidationError("tabulated x values must be strictly increasing")
    return xs, ys


def _tabulated(xs: np.ndarray, ys: np.ndarray) -> tuple[Evaluator, float, float, float]:
    # Pchip is continuous, monotone-preserving, and cannot overshoot below
    # the tabulated minimum, which keeps positive mass tables positive.
    interp = PchipInterpolator(xs, ys, extrapolate=False)
    lo, hi = float(ys[0]), float(ys[-1])

    def f(x):
        x = np.asarray(x, dtype=float)
        out = interp(x)
        out = np.where(x < xs[0], lo, out)
        out = np.where(x > xs[-1], hi, out)
        return out

    window = float(max(abs(xs[0]), abs(xs[-1])))
    return f, lo, hi, window


def tabulated_mass(source: str) -> MassProfile:
    """Mass table from two-column text (a path or the raw text itself)."""
    text = _read_source(source)
    xs, ys = _parse_two_column(text)
    if np.any(ys <= 0):
        raise NonPositiveMass("tabulated mass contains non-positive entries")
    f, lo, hi, window = _tabulated(xs, ys)
    return MassProfile(func=f, kind="tabulated", m_minus=lo, m_plus=hi,
                       window=window, breakpoints=tuple(xs[1:-1]))


def tabulated_potential(source: str) -> Potential:
    text = _read_source(source)
    xs, ys = _parse_two_column(text)
    f, lo, hi, window = _tabulated(xs, ys)
    return Potential(func=f, kind="tabulated", v_minus=lo, v_plus=hi,
                     window=window, breakpoints=tuple(xs[1:-1]))


def _read_source(source: str) -> str:
    # Multi-line strings are inline table content; anything else is a path.
    if "\n" in source:
        return source
    with io.open(source, "r", encoding="utf-8") as fh:
        return fh.read()


def check_positive_mass(mass: MassProfile, half_length: float, n: int = 513) -> None:
    xs = np.linspace(-half_length, half_length, n)
    m = mass(xs)
    if np.any(m <= 0) or not np.all(np.isfinite(m)):
        bad = xs[np.argmin(m)]
        raise NonPositiveMass(f"m(x) <= 0 near x = {bad:.4g}")
