"""Domain types, validation and unit helpers for the two-relay NOMA link.

A scenario pins the four channel variances (or a distance layer that
generates them), the two power-allocation coefficients and the transmit /
noise powers.  Everything is a frozen dataclass: validate once, share freely.

Conventions: channel taps are circularly-symmetric complex Gaussian with
``E[|h|^2] = sigma2_<link>``; transmit SNR in dB always means
``10*log10(p_s / n0)``, so sweeping SNR at fixed unit power moves the noise
density, not the signal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping

import yaml

__all__ = [
    "DistanceModel",
    "EnergyLevels",
    "ScenarioConfig",
    "ScenarioValidationError",
    "bundled_scenario",
    "bundled_scenario_names",
    "energy_levels",
    "load_scenario",
    "snr_db_to_linear",
    "validate_scenario",
]

_LINKS = ("sr1", "sr2", "r1d", "r2d")
_VARIANCE_KEYS = tuple(f"sigma2_{link}" for link in _LINKS)
_DISTANCE_KEYS = ("mu", "tau_pl", "d_sr1", "d_sr2", "d_r1d", "d_r2d")


class ScenarioValidationError(ValueError):
    """Scenario rejected; ``violations`` lists every failed invariant."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid scenario: " + "; ".join(self.violations))


def snr_db_to_linear(snr_db: float) -> float:
    """Convert a decibel power ratio to linear scale (10 dB -> 10.0)."""
    if not math.isfinite(snr_db):
        raise ValueError(f"snr_db must be finite, got {snr_db!r}")
    return 10.0 ** (snr_db / 10.0)


@dataclass(frozen=True)
class DistanceModel:
    """Optional distance layer: variance = mu * d**tau_pl for each link."""

    mu: float
    tau_pl: float
    d_sr1: float
    d_sr2: float
    d_r1d: float
    d_r2d: float

    def variances(self) -> dict[str, float]:
        """Channel variances implied by the path-loss law."""
        return {
            "sigma2_sr1": self.mu * self.d_sr1 ** self.tau_pl,
            "sigma2_sr2": self.mu * self.d_sr2 ** self.tau_pl,
            "sigma2_r1d": self.mu * self.d_r1d ** self.tau_pl,
            "sigma2_r2d": self.mu * self.d_r2d ** self.tau_pl,
        }


@dataclass(frozen=True)
class ScenarioConfig:
    """Immutable description of one network operating point.

    ``alpha1``/``beta1`` are the power shares of the far-user symbol in the
    source and relay superpositions; the complements go to the near-user
    symbol.  ``n0`` is the baseline noise density used when no explicit SNR
    is supplied.
    """

    sigma2_sr1: float
    sigma2_sr2: float
    sigma2_r1d: float
    sigma2_r2d: float
    alpha1: float
    beta1: float
    p_s: float = 1.0
    p_r: float = 1.0
    n0: float = 1.0
    distance_model: DistanceModel | None = None

    @property
    def alpha2(self) -> float:
        return 1.0 - self.alpha1

    @property
    def beta2(self) -> float:
        return 1.0 - self.beta1

    def n0_at(self, snr_db: float) -> float:
        """Noise density that realises a transmit SNR of ``snr_db`` dB."""
        return self.p_s / snr_db_to_linear(snr_db)


@dataclass(frozen=True)
class EnergyLevels:
    """Effective symbol energies seen by a coherent detector.

    ``eps_a``/``eps_b`` are the superposition energies for same-sign and
    opposite-sign symbol pairs, ``eps_c`` the weak symbol alone after a clean
    cancellation, and ``eps_d``/``eps_e`` the inflated/deflated residuals left
    by a wrong cancellation decision.
    """

    eps_a: float
    eps_b: float
    eps_c: float
    eps_d: float
    eps_e: float


def energy_levels(alpha1: float, p: float) -> EnergyLevels:
    """Energy levels for power split ``alpha1`` at total transmit power ``p``."""
    if not 0.0 < alpha1 < 1.0:
        raise ValueError(f"alpha1 must lie strictly inside (0, 1), got {alpha1!r}")
    if not (isinstance(p, (int, float)) and math.isfinite(p) and p > 0.0):
        raise ValueError(f"transmit power must be positive and finite, got {p!r}")
    strong = math.sqrt(alpha1 * p)
    weak = math.sqrt((1.0 - alpha1) * p)
    return EnergyLevels(
        eps_a=(strong + weak) ** 2,
        eps_b=(strong - weak) ** 2,
        eps_c=(1.0 - alpha1) * p,
        eps_d=(2.0 * strong + weak) ** 2,
        eps_e=(2.0 * strong - weak) ** 2,
    )


def _positive(name: str, value, violations: list[str]) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0.0):
        violations.append(f"{name} must be positive and finite, got {value!r}")


def _check_config(cfg: ScenarioConfig) -> list[str]:
    violations: list[str] = []
    if not (isinstance(cfg.alpha1, (int, float)) and math.isfinite(cfg.alpha1)):
        violations.append(f"alpha1 must be a finite number, got {cfg.alpha1!r}")
    elif not 0.5 < cfg.alpha1 < 1.0:
        violations.append(
            f"alpha1 must exceed 0.5 and stay below 1 (the far symbol takes the "
            f"larger share), got {cfg.alpha1!r}"
        )
    if not (isinstance(cfg.beta1, (int, float)) and math.isfinite(cfg.beta1)):
        violations.append(f"beta1 must be a finite number, got {cfg.beta1!r}")
    elif not 0.0 < cfg.beta1 < 1.0:
        violations.append(f"beta1 must lie strictly inside (0, 1), got {cfg.beta1!r}")
    for key in _VARIANCE_KEYS:
        _positive(key, getattr(cfg, key), violations)
    _positive("p_s", cfg.p_s, violations)
    _positive("p_r", cfg.p_r, violations)
    _positive("n0", cfg.n0, violations)
    dm = cfg.distance_model
    if dm is not None:
        for key in _DISTANCE_KEYS:
            value = getattr(dm, key)
            if key == "tau_pl":
                if not (isinstance(value, (int, float)) and math.isfinite(value)):
                    violations.append(f"tau_pl must be a finite number, got {value!r}")
            else:
                _positive(key, value, violations)
        if not violations:
            if dm.d_sr1 <= dm.d_sr2:
                violations.append(
                    f"d_sr1 must exceed d_sr2 (relay 1 serves the far user), "
                    f"got {dm.d_sr1!r} <= {dm.d_sr2!r}"
                )
            if dm.d_r1d >= dm.d_r2d:
                violations.append(
                    f"d_r1d must stay below d_r2d (relay 1 sits closer to the "
                    f"destination), got {dm.d_r1d!r} >= {dm.d_r2d!r}"
                )
    return violations


def _config_from_mapping(raw: Mapping) -> ScenarioConfig:
    violations: list[str] = []
    data = dict(raw)
    distances = data.pop("distances", None)

    known = set(_VARIANCE_KEYS) | {"alpha1", "beta1", "p_s", "p_r", "n0"}
    unknown = sorted(set(data) - known)
    if unknown:
        violations.append(f"unknown keys: {', '.join(unknown)}")

    dm = None
    if distances is not None:
        if not isinstance(distances, Mapping):
            violations.append("distances must be a mapping of mu/tau_pl/d_* values")
        else:
            missing = sorted(set(_DISTANCE_KEYS) - set(distances))
            extra = sorted(set(distances) - set(_DISTANCE_KEYS))
            if missing:
                violations.append(f"distance model incomplete, missing: {', '.join(missing)}")
            if extra:
                violations.append(f"unknown distance keys: {', '.join(extra)}")
            if any(key in data for key in _VARIANCE_KEYS):
                violations.append("specify channel variances or distances, not both")
            if not missing and not extra:
                dm = DistanceModel(**{key: distances[key] for key in _DISTANCE_KEYS})
    if violations:
        raise ScenarioValidationError(violations)

    if dm is not None:
        data.update(dm.variances())
    missing_var = [key for key in _VARIANCE_KEYS if key not in data]
    if missing_var:
        raise ScenarioValidationError(
            [f"missing channel variances: {', '.join(missing_var)} "
             "(supply them directly or via a distance model)"]
        )
    for key in ("alpha1", "beta1"):
        if key not in data:
            raise ScenarioValidationError([f"missing required key: {key}"])
    data.setdefault("p_s", 1.0)
    data.setdefault("p_r", 1.0)
    data.setdefault("n0", 1.0)
    return ScenarioConfig(distance_model=dm, **data)


def validate_scenario(raw: Mapping | ScenarioConfig) -> ScenarioConfig:
    """Validate ``raw`` and return an immutable, checked configuration.

    Accepts either a flat mapping (optionally holding a ``distances``
    sub-mapping in place of explicit variances) or an existing
    :class:`ScenarioConfig`.  Validation is idempotent: a config that passes
    is returned unchanged.  All violations are collected before raising.
    """
    if isinstance(raw, ScenarioConfig):
        cfg = raw
    elif isinstance(raw, Mapping):
        cfg = _config_from_mapping(raw)
    else:
        raise TypeError(f"expected mapping or ScenarioConfig, got {type(raw).__name__}")
    violations = _check_config(cfg)
    if violations:
        raise ScenarioValidationError(violations)
    return cfg


_SECTION_KEYS = {
    "channel": set(_VARIANCE_KEYS) | {"distances"},
    "power": {"alpha1", "beta1", "p_s", "p_r"},
    "noise": {"n0"},
}


def _flatten_document(doc) -> dict:
    if not isinstance(doc, Mapping):
        raise ScenarioValidationError(["config root must be a mapping of sections"])
    flat: dict = {}
    violations: list[str] = []
    for section, body in doc.items():
        allowed = _SECTION_KEYS.get(section)
        if allowed is None:
            violations.append(f"unknown section: {section}")
            continue
        if not isinstance(body, Mapping):
            violations.append(f"section {section} must be a mapping")
            continue
        for key, value in body.items():
            if key not in allowed:
                violations.append(f"unknown key {key} in section {section}")
            else:
                flat[key] = value
    if violations:
        raise ScenarioValidationError(violations)
    return flat


def load_scenario(path: str | Path) -> ScenarioConfig:
    """Load and validate a YAML scenario file (sections: channel/power/noise)."""
    with open(path, "r", encoding="utf-8") as handle:
        doc = yaml.safe_load(handle)
    return validate_scenario(_flatten_document(doc))


def bundled_scenario_names() -> tuple[str, ...]:
    """Names of the scenario files shipped with the package."""
    root = resources.files("noma_drn") / "scenarios"
    return tuple(sorted(p.name[: -len(".yaml")] for p in root.iterdir()
                        if p.name.endswith(".yaml")))


def bundled_scenario(name: str) -> ScenarioConfig:
    """Load one of the packaged scenarios, e.g. ``bundled_scenario("scenario3")``."""
    resource = resources.files("noma_drn") / "scenarios" / f"{name}.yaml"
    if not resource.is_file():
        raise ScenarioValidationError(
            [f"unknown bundled scenario {name!r}; available: "
             f"{', '.join(bundled_scenario_names())}"]
        )
    doc = yaml.safe_load(resource.read_text(encoding="utf-8"))
    return validate_scenario(_flatten_document(doc))
