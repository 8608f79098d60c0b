"""Closed-form dressing of the auxiliary kernel by a point interaction.

The singular term consists of a delta coupling of strength alpha and a
delta-derivative coupling of strength beta at the origin. Dressing is
algebraic: the full kernel differs from the auxiliary one by rank-one
corrections built from boundary values at the origin.

Three routes are provided:

* ``dress_delta``       exact closed form for beta = 0;
* ``assemble_general``  finite-surrogate form, where the divergent mixed
  second derivative of the auxiliary kernel at the origin is replaced by a
  finite parameter P;
* ``dress_delta_prime`` the |P| -> infinity limit, valid for any beta != 0.
  The limit form is independent of alpha and of the magnitude of beta, and
  annihilates every pair of points separated by the origin: total
  reflection regardless of the smooth background.

The limit subtraction is evaluated in factored form (common prefactor, raw
solution products) so the cancellation for x > 0 > x' happens at the
arithmetic level rather than through catastrophic subtraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ResonantDenominator, SingularDenominator, ZeroDiagonal
from .slcore import G0Evaluator

# Near-singular denominators below this fraction of their natural scale are
# physical poles/degeneracies and raise instead of returning large values.
POLE_TOL = 1e-12


@dataclass(frozen=True)
class SingularParams:
    """Couplings of the point interaction.

    ``p`` is the finite surrogate for the divergent mixed derivative of the
    auxiliary kernel at the origin; ``None`` selects the limit form.
    """

    alpha: float = 0.0
    beta: float = 0.0
    p: complex | None = None

    @property
    def limit_mode(self) -> bool:
        return self.p is None


class DressedGreen:
    """Full kernel: auxiliary part plus rank-one boundary corrections.

    value(x, x') = G0(x, x') + sum_k  c_k * fx_k(x) * fs_k(x')
    """

    def __init__(self, g: G0Evaluator, provenance: str, params: SingularParams,
                 terms: list[tuple[complex, Callable, Callable]]):
        self.g0 = g
        self.provenance = provenance
        self.params = params
        self.problem = g.problem
        self._terms = terms

    def value(self, x, xp):
        out = self.g0.value(x, xp)
        for c, fx, fs in self._terms:
            out = out + c * fx(np.asarray(x, dtype=float)) * fs(np.asarray(xp, dtype=float))
        return out

    def matrix(self, x_out, x_in) -> np.ndarray:
        out = self.g0.matrix(x_out, x_in)
        x_out = np.asarray(x_out, dtype=float)
        x_in = np.asarray(x_in, dtype=float)
        for c, fx, fs in self._terms:
            out = out + c * np.outer(fx(x_out), fs(x_in))
        return out


def _g00_scale(g: G0Evaluator) -> float:
    # |g00| is compared against the local size of the solution products,
    # not against itself, so an accidental node at the origin is detectable.
    probes = np.array([-1.0, -0.5, 0.0, 0.5, 1.0])
    y1 = np.abs(g.pair.y1.value(probes)).max()
    y2 = np.abs(g.pair.y2.value(probes)).max()
    return abs(g.C) * y1 * y2


def dress_delta(g: G0Evaluator, alpha: float) -> DressedGreen:
    """Exact kernel for a pure delta coupling (beta = 0).

    G(x,x') = G0(x,x') - alpha G0(x,0) G0(0,x') / (1 + alpha G0(0,0))
    """
    g00 = g.boundary.g00
    den = 1.0 + alpha * g00
    if abs(den) <= POLE_TOL * max(1.0, abs(alpha * g00)):
        raise ResonantDenominator(
            f"1 + alpha*G0(0,0) = {den:.3e}: dressed kernel has a pole here")
    coef = -alpha * g.C * g.C / den
    params = SingularParams(alpha=alpha, beta=0.0, p=None)
    return DressedGreen(g, "delta-only", params,
                        [(coef, g.u_cross, g.u_cross)])


def dress_delta_prime(g: G0Evaluator, params: SingularParams | None = None) -> DressedGreen:
    """Limit kernel for any nonzero delta-derivative coupling.

    G(x,x') = G0(x,x') - G0(x,0) G0(0,x') / G0(0,0), independent of alpha
    and of the magnitude of beta. Vanishes identically for x, x' on
    opposite sides of the origin and on the lines x = 0, x' = 0.
    """
    g00 = g.boundary.g00
    if abs(g00) <= POLE_TOL * _g00_scale(g):
        raise ZeroDiagonal("G0(0,0) vanishes: limit dressing undefined")
    coef = -g.C / g.u00
    if params is None:
        params = SingularParams(alpha=0.0, beta=1.0, p=None)
    return DressedGreen(g, "delta-prime-limit", params,
                        [(coef, g.u_cross, g.u_cross)])


def dressed_boundary(g: G0Evaluator, params: SingularParams):
    """Boundary functionals x' -> G(0,x') and x' -> dG/dx(0,x') at finite P.

    These are the two unknowns of the dressing linear system, solved with
    the finite surrogate P in place of the divergent mixed derivative.
    """
    alpha, beta = params.alpha, params.beta
    p = params.p if params.p is not None else 0.0
    if beta != 0.0 and params.p is None:
        raise SingularDenominator(
            "finite-surrogate boundary functionals need a finite P when beta != 0")
    b = g.boundary
    d_fac = 1.0 + beta * b.dl
    if abs(d_fac) <= POLE_TOL * max(1.0, abs(beta * b.dl)):
        raise SingularDenominator(f"1 + beta*dL = {d_fac:.3e} is singular")
    m_fac = (1.0 + alpha * b.g00 + beta * b.dr
             - beta * b.g00 * (alpha * b.dl + beta * p) / d_fac)
    scale = max(1.0, abs(alpha * b.g00), abs(beta * b.g00 * beta * p / d_fac))
    if abs(m_fac) <= POLE_TOL * scale:
        raise SingularDenominator("outer boundary denominator is singular")

    def g_origin(xp):
        return (g.g_cross(xp) - (beta * b.g00 / d_fac) * g.partial_l_origin(xp)) / m_fac

    def dg_origin(xp):
        return (g.partial_l_origin(xp) - (alpha * b.dl + beta * p) * g_origin(xp)) / d_fac

    return g_origin, dg_origin


def assemble_general(g: G0Evaluator, params: SingularParams) -> DressedGreen:
    """Full kernel in finite-surrogate mode.

    Reproduces ``dress_delta`` exactly for beta = 0 and converges pointwise
    to ``dress_delta_prime`` as |P| -> infinity (error proportional to 1/|P|).
    """
    g_origin, dg_origin = dressed_boundary(g, params)
    alpha, beta = params.alpha, params.beta

    def fx_main(x):
        return alpha * g.g_cross(x) + beta * g.partial_r_cross(x)

    def fx_deriv(x):
        return beta * g.g_cross(x)

    terms = [(-1.0 + 0.0j, fx_main, g_origin)]
    if beta != 0.0:
        terms.append((-1.0 + 0.0j, fx_deriv, dg_origin))
    return DressedGreen(g, "general-finite", params, terms)


def limit_derivative_boundary(g: G0Evaluator, beta: float) -> Callable:
    """Closed-form limit of x' -> dG/dx(0, x') as |P| -> infinity."""
    if beta == 0.0:
        raise SingularDenominator("limit derivative boundary requires beta != 0")
    b = g.boundary
    if abs(b.g00) <= POLE_TOL * _g00_scale(g):
        raise ZeroDiagonal("G0(0,0) vanishes: limit form undefined")
    d_fac = 1.0 + beta * b.dl
    if abs(d_fac) <= POLE_TOL * max(1.0, abs(beta * b.dl)):
        raise SingularDenominator(f"1 + beta*dL = {d_fac:.3e} is singular")

    def dg_origin(xp):
        gl = g.partial_l_origin(xp)
        return gl / d_fac + (g.g_cross(xp) - beta * b.g00 / d_fac * gl) / (beta * b.g00)

    return dg_origin


def dress(g: G0Evaluator, params: SingularParams) -> DressedGreen:
    """Dispatch on the couplings: delta-only, limit, or finite-surrogate."""
    if params.beta == 0.0:
        return dress_delta(g, params.alpha)
    if params.limit_mode:
        return dress_delta_prime(g, params)
    return assemble_general(g, params)
