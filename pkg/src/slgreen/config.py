"""Scenario configuration: one canonical YAML document per run.

Schema (all blocks optional unless a scenario needs them):

    scenario: g0 | dress | scatter | wavepacket | scan | validate
    mass:       {type: constant, value: 1.0}
                {type: gaussian-bump, base, bump, width, window}
                {type: table, path}
    potential:  {type: free, window: 1.0}
                {type: harmonic, curvature, window}
                {type: linear, slope, window}
                {type: square-well, depth, half_width, window}
                {type: table, path}
    frequency:  {re: 0.5, im: 1.0e-6}          # im defaults to 1e-6
    singular:   {alpha: 0.0, beta: 0.0, p: limit}   # p: number or "limit"
    grid:       {xmin: -5.0, xmax: 5.0, n: 21}
    packet:     {x0: -10.0, k0: 2.0, sigma: 1.0}
    duration:   1.0
    scan:       {shape: gaussian, epsilons: [0.2, 0.1], energy: 0.5, cutoff: 8}
    scatter:    {x: 2.0, x_prime: -2.0}
    output:     results.csv
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import ParseError, ValidationError
from . import profiles
from .dressing import SingularParams

SCENARIOS = ("g0", "dress", "scatter", "wavepacket", "scan", "validate")
_TOP_KEYS = {"scenario", "mass", "potential", "frequency", "singular", "grid",
             "packet", "duration", "scan", "scatter", "output"}

DEFAULT_ETA = 1e-6


@dataclass
class ScenarioConfig:
    scenario: str
    mass: dict = field(default_factory=lambda: {"type": "constant", "value": 1.0})
    potential: dict = field(default_factory=lambda: {"type": "free"})
    frequency: dict = field(default_factory=lambda: {"re": 0.5, "im": DEFAULT_ETA})
    singular: dict = field(default_factory=lambda: {"alpha": 0.0, "beta": 0.0,
                                                    "p": "limit"})
    grid: dict = field(default_factory=lambda: {"xmin": -5.0, "xmax": 5.0, "n": 21})
    packet: dict = field(default_factory=lambda: {"x0": -10.0, "k0": 2.0, "sigma": 1.0})
    duration: float = 1.0
    scan: dict = field(default_factory=lambda: {"shape": "gaussian",
                                                "epsilons": [0.2, 0.1, 0.05],
                                                "energy": 0.5})
    scatter: dict = field(default_factory=dict)
    output: str | None = None

    @property
    def omega(self) -> complex:
        return complex(float(self.frequency["re"]), float(self.frequency["im"]))

    def singular_params(self) -> SingularParams:
        p = self.singular.get("p", "limit")
        if isinstance(p, str):
            if p == "limit":
                pval = None
            else:
                # YAML 1.1 reads exponents without a sign (1.0e4) as strings.
                try:
                    pval = complex(float(p))
                except ValueError:
                    raise ValidationError(
                        f"singular.p must be a number or 'limit', got {p!r}")
        else:
            pval = complex(p)
        return SingularParams(alpha=float(self.singular.get("alpha", 0.0)),
                              beta=float(self.singular.get("beta", 0.0)),
                              p=pval)

    def resolved(self) -> dict:
        """Full config with defaults applied, for metadata echo."""
        return {
            "scenario": self.scenario,
            "mass": dict(self.mass),
            "potential": dict(self.potential),
            "frequency": dict(self.frequency),
            "singular": dict(self.singular),
            "grid": dict(self.grid),
            "packet": dict(self.packet),
            "duration": self.duration,
            "scan": dict(self.scan),
            "scatter": dict(self.scatter),
        }


def parse_config(text: str, base_dir: str | Path | None = None) -> ScenarioConfig:
    """Parse and validate a YAML scenario document, applying defaults."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"config is not valid YAML: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("config must be a mapping at top level")

    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ValidationError(f"unknown config keys: {sorted(unknown)}")
    if "scenario" not in doc:
        raise ValidationError("missing required key 'scenario'")
    scenario = str(doc["scenario"])
    if scenario not in SCENARIOS:
        raise ValidationError(
            f"scenario must be one of {SCENARIOS}, got {scenario!r}")

    cfg = ScenarioConfig(scenario=scenario)
    for key in ("mass", "potential", "frequency", "singular", "grid",
                "packet", "scan", "scatter"):
        if key in doc:
            block = doc[key]
            if not isinstance(block, dict):
                raise ValidationError(f"block '{key}' must be a mapping")
            merged = dict(getattr(cfg, key))
            merged.update(block)
            setattr(cfg, key, merged)
    if "duration" in doc:
        cfg.duration = float(doc["duration"])
    if "output" in doc and doc["output"] is not None:
        cfg.output = str(doc["output"])

    _validate(cfg)
    if base_dir is not None:
        for block in (cfg.mass, cfg.potential):
            if block.get("type") == "table" and "path" in block:
                block["path"] = str(Path(base_dir) / block["path"])
    return cfg


def _validate(cfg: ScenarioConfig) -> None:
    g = cfg.grid
    try:
        xmin, xmax, n = float(g["xmin"]), float(g["xmax"]), int(g["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"grid block malformed: {exc}") from exc
    if not xmin < xmax:
        raise ValidationError("xmin < xmax")
    if n < 2:
        raise ValidationError("n >= 2")
    im = float(cfg.frequency.get("im", DEFAULT_ETA))
    cfg.frequency.setdefault("im", DEFAULT_ETA)
    if cfg.scenario in ("g0", "dress", "wavepacket", "scatter") and not im > 0:
        raise ValidationError("im > 0 (retarded prescription)")
    if "re" not in cfg.frequency:
        raise ValidationError("frequency.re is required")
    if cfg.scenario == "wavepacket" and cfg.duration < 0:
        raise ValidationError("duration >= 0")
    if cfg.scenario == "scan":
        eps = cfg.scan.get("epsilons")
        if not isinstance(eps, (list, tuple)) or len(eps) < 1:
            raise ValidationError("scan.epsilons must be a non-empty list")
    cfg.singular.setdefault("p", "limit")
    cfg.singular_params()


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    return parse_config(path.read_text(encoding="utf-8"), base_dir=path.parent)


def make_mass(cfg: ScenarioConfig) -> profiles.MassProfile:
    block = cfg.mass
    kind = block.get("type", "constant")
    if kind == "constant":
        return profiles.constant_mass(float(block.get("value", 1.0)))
    if kind == "gaussian-bump":
        return profiles.gaussian_bump_mass(
            base=float(block.get("base", 1.0)), bump=float(block.get("bump", 0.5)),
            width=float(block.get("width", 1.0)), window=float(block.get("window", 8.0)))
    if kind == "table":
        return profiles.tabulated_mass(block["path"])
    raise ValidationError(f"unknown mass type {kind!r}")


def make_potential(cfg: ScenarioConfig) -> profiles.Potential:
    block = cfg.potential
    kind = block.get("type", "free")
    if kind == "free":
        return profiles.free_potential(window=float(block.get("window", 1.0)))
    if kind == "harmonic":
        return profiles.harmonic_potential(
            curvature=float(block.get("curvature", 1.0)),
            window=float(block.get("window", 8.0)))
    if kind == "linear":
        return profiles.linear_potential(
            slope=float(block.get("slope", 0.25)),
            window=float(block.get("window", 6.0)))
    if kind == "square-well":
        return profiles.square_well(
            depth=float(block.get("depth", 1.0)),
            half_width=float(block.get("half_width", 1.0)),
            window=float(block.get("window", block.get("half_width", 1.0))))
    if kind == "table":
        return profiles.tabulated_potential(block["path"])
    raise ValidationError(f"unknown potential type {kind!r}")
