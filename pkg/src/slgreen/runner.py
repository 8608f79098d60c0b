"""Scenario orchestration: config in, result table out."""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .config import ScenarioConfig, make_mass, make_potential
from .dressing import dress
from .errors import ComputationError, EngineError
from .reglab import epsilon_scan
from .scattering import channel_for, transmission_from_green
from .slcore import ProblemSpec, build_pair, g0
from .tables import ResultTable
from .validate import run_default_suite
from .wavepacket import (GaussianPacket, calibrate_propagator, omega_quadrature,
                         propagate_wavepacket, source_grid)


def _metadata(cfg: ScenarioConfig) -> dict:
    meta = {"version": __version__,
            "generated": datetime.now(timezone.utc).isoformat()}
    for key, value in sorted(cfg.resolved().items()):
        meta[f"config.{key}"] = value
    return meta


def _problem(cfg: ScenarioConfig) -> ProblemSpec:
    return ProblemSpec(mass=make_mass(cfg), potential=make_potential(cfg),
                       omega=cfg.omega)


def _grid(cfg: ScenarioConfig) -> np.ndarray:
    g = cfg.grid
    return np.linspace(float(g["xmin"]), float(g["xmax"]), int(g["n"]))


def run_scenario(cfg: ScenarioConfig, threads: int = 1) -> ResultTable:
    """Dispatch a validated config to the matching pipeline.

    ``threads`` is a parallelism hint honored by the frequency-grid
    pipelines; single-point scenarios ignore it.
    """
    try:
        fn = _DISPATCH[cfg.scenario]
    except KeyError:
        raise ComputationError(f"no pipeline for scenario {cfg.scenario!r}")
    try:
        return fn(cfg, max(1, int(threads)))
    except EngineError as exc:
        raise ComputationError(f"scenario {cfg.scenario!r}: {exc}") from exc


def _run_g0(cfg: ScenarioConfig, threads: int = 1) -> ResultTable:
    xs = _grid(cfg)
    ev = g0(build_pair(_problem(cfg)))
    mat = ev.matrix(xs, xs)
    table = ResultTable(columns=["x", "x_prime", "re_g", "im_g"],
                        metadata=_metadata(cfg))
    for i, x in enumerate(xs):
        for j, xp in enumerate(xs):
            table.add_row([float(x), float(xp),
                           float(mat[i, j].real), float(mat[i, j].imag)])
    return table


def _run_dress(cfg: ScenarioConfig, threads: int = 1) -> ResultTable:
    xs = _grid(cfg)
    ev = g0(build_pair(_problem(cfg)))
    dressed = dress(ev, cfg.singular_params())
    mat = dressed.matrix(xs, xs)
    table = ResultTable(columns=["x", "x_prime", "re_g", "im_g"],
                        metadata=_metadata(cfg))
    table.metadata["provenance"] = dressed.provenance
    for i, x in enumerate(xs):
        for j, xp in enumerate(xs):
            table.add_row([float(x), float(xp),
                           float(mat[i, j].real), float(mat[i, j].imag)])
    return table


def _run_scatter(cfg: ScenarioConfig, threads: int = 1) -> ResultTable:
    problem = _problem(cfg)
    ev = g0(build_pair(problem))
    params = cfg.singular_params()
    green = dress(ev, params) if (params.alpha or params.beta) else ev
    w = problem.window
    x = float(cfg.scatter.get("x", w + 1.0))
    xp = float(cfg.scatter.get("x_prime", -(w + 1.0)))
    res = transmission_from_green(green, channel_for(problem), x, xp)
    table = ResultTable(columns=["re_t", "im_t", "re_r", "im_r", "T", "R"],
                        metadata=_metadata(cfg))
    table.add_row([res.t.real, res.t.imag, res.r.real, res.r.imag,
                   res.T, res.R])
    return table


class GreenFamily:
    """omega -> kernel evaluator with pair-level caching across syntheses."""

    def __init__(self, mass, potential, params=None):
        self.mass = mass
        self.potential = potential
        self.params = params
        self._cache: dict = {}
        self._lock = threading.Lock()

    def _auxiliary(self, key: complex):
        with self._lock:
            hit = self._cache.get(key)
        if hit is None:
            prob = ProblemSpec(mass=self.mass, potential=self.potential, omega=key)
            hit = g0(build_pair(prob))
            with self._lock:
                self._cache[key] = hit
        return hit

    def __call__(self, omega: complex):
        hit = self._auxiliary(complex(omega))
        if self.params is not None and (self.params.alpha or self.params.beta):
            return dress(hit, self.params)
        return hit

    def prefetch(self, omegas, threads: int = 1) -> None:
        """Warm the auxiliary cache; each frequency node is independent."""
        if threads <= 1:
            for w in omegas:
                self._auxiliary(complex(w))
            return
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda w: self._auxiliary(complex(w)), omegas))


def _run_wavepacket(cfg: ScenarioConfig, threads: int = 1) -> ResultTable:
    mass = make_mass(cfg)
    potential = make_potential(cfg)
    params = cfg.singular_params()
    packet = GaussianPacket(x0=float(cfg.packet["x0"]), k0=float(cfg.packet["k0"]),
                            sigma=float(cfg.packet["sigma"]))
    eta = float(cfg.frequency["im"])
    free = GreenFamily(mass, potential, None)
    family = GreenFamily(mass, potential, params)
    family._cache = free._cache  # the dressing shares the auxiliary pairs

    prob0 = ProblemSpec(mass=mass, potential=potential, omega=cfg.omega)
    grid_o = omega_quadrature(packet, channel_for(prob0), eta=eta)
    free.prefetch(grid_o.omegas, threads)
    x_out = _grid(cfg)
    x_cal = source_grid(packet, grid_o, pad=12.0)
    constant = calibrate_propagator(free, packet, cfg.duration, x_cal, grid_o)
    psi = propagate_wavepacket(family, packet, cfg.duration, x_out, grid_o, constant)

    table = ResultTable(columns=["x", "re_psi", "im_psi", "prob"],
                        metadata=_metadata(cfg))
    table.metadata["kernel_constant"] = repr(constant)
    for x, p in zip(x_out, psi):
        table.add_row([float(x), float(p.real), float(p.imag),
                       float(abs(p) ** 2)])
    return table


def _run_scan(cfg: ScenarioConfig, threads: int = 1) -> ResultTable:
    params = cfg.singular_params()
    block = cfg.scan
    scan = epsilon_scan(alpha=params.alpha, beta=params.beta,
                        energy=float(block.get("energy", cfg.frequency["re"])),
                        eps_list=[float(e) for e in block["epsilons"]],
                        shape=str(block.get("shape", "gaussian")),
                        cutoff=block.get("cutoff"),
                        mass=float(cfg.mass.get("value", 1.0)))
    table = ResultTable(
        columns=["epsilon", "T", "R", "re_t", "im_t", "re_r", "im_r"],
        metadata=_metadata(cfg))
    table.metadata["decay_exponent"] = repr(scan.decay_exponent)
    table.metadata["non_monotonic"] = str(scan.non_monotonic)
    for row in scan.rows():
        table.add_row(list(row))
    return table


def _run_validate(cfg: ScenarioConfig, threads: int = 1) -> ResultTable:
    table = ResultTable(columns=["check", "passed", "measured", "threshold"],
                        metadata=_metadata(cfg))
    for name, passed, measured, threshold in run_default_suite():
        table.add_row([name, float(passed), measured, threshold])
    return table


_DISPATCH = {
    "g0": _run_g0,
    "dress": _run_dress,
    "scatter": _run_scatter,
    "wavepacket": _run_wavepacket,
    "scan": _run_scan,
    "validate": _run_validate,
}
