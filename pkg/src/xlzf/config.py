"""Scenario configuration shared by the placement sampler, precoders, and experiment runner."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path

SPEED_OF_LIGHT = 299_792_458.0

SCHEMES = ("ZF", "ZF-ortho", "MZF", "TZF-ortho")

# fields whose config-file values may alternatively be given in degrees via a "_deg" key
_ANGLE_FIELDS = ("s_az", "s_el", "sigma_g", "theta_t0")
_INT_FIELDS = ("m_h", "m_v", "u", "n_c", "trials", "master_seed")
_FLOAT_FIELDS = ("carrier_hz", "noise_var", "d") + _ANGLE_FIELDS


class ConfigError(ValueError):
    """Invalid scenario configuration; the message names the offending field."""


@dataclass(frozen=True)
class ScenarioParams:
    """One simulation configuration.

    Distances use the half-wavelength convention: a user's radial coordinate is
    drawn from [d, 2*d] half-wavelengths and converted to meters with the
    carrier wavelength. All angles are radians.
    """

    m_h: int = 50
    m_v: int = 40
    u: int = 20
    carrier_hz: float = 2.0e9
    noise_var: float = 1e-2
    d: float = 1.0e4
    s_az: float = math.radians(60.0)
    s_el: float = math.radians(60.0)
    n_c: int = 2
    sigma_g: float = math.radians(1.0)
    theta_t0: float = math.radians(2.0)
    trials: int = 1000
    master_seed: int = 0
    schemes: tuple[str, ...] = SCHEMES

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_hz

    def validate(self) -> None:
        """Raise ConfigError naming the first invalid field."""
        for name in ("m_h", "m_v", "u", "n_c", "trials"):
            if getattr(self, name) < 1:
                raise ConfigError(f"field '{name}' must be a positive integer")
        for name in ("carrier_hz", "noise_var", "d"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"field '{name}' must be positive")
        for name in ("s_az", "s_el", "sigma_g"):
            if getattr(self, name) < 0:
                raise ConfigError(f"field '{name}' must be nonnegative")
        if not self.theta_t0 > 0:
            raise ConfigError("field 'theta_t0' must be positive")
        if self.u < self.n_c:
            raise ConfigError("field 'n_c' exceeds field 'u' (empty elevation clusters)")
        for scheme in self.schemes:
            if scheme not in SCHEMES:
                raise ConfigError(
                    f"field 'schemes' contains unknown scheme '{scheme}'"
                    f" (known: {', '.join(SCHEMES)})"
                )


def desk_params(base: ScenarioParams | None = None) -> ScenarioParams:
    """Shrunken preset so full sweeps run in minutes instead of hours."""
    base = base if base is not None else ScenarioParams()
    return replace(base, m_h=16, m_v=12, u=6, trials=200)


def parse_schemes(text: str) -> tuple[str, ...]:
    names = tuple(part.strip() for part in text.split(",") if part.strip())
    if not names:
        raise ConfigError("field 'schemes' is empty")
    for name in names:
        if name not in SCHEMES:
            raise ConfigError(
                f"field 'schemes' contains unknown scheme '{name}' (known: {', '.join(SCHEMES)})"
            )
    return names


def _parse_value(key: str, raw: str):
    try:
        if key in _INT_FIELDS:
            return int(raw)
        if key in _FLOAT_FIELDS:
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"field '{key}' has invalid value {raw!r}") from exc
    if key == "schemes":
        return parse_schemes(raw)
    raise ConfigError(f"unknown field '{key}'")


def params_from_file(path: str | Path, base: ScenarioParams | None = None) -> ScenarioParams:
    """Load a flat ``key = value`` config file on top of ``base`` (defaults if None).

    Keys are ScenarioParams field names; angle fields also accept a ``_deg``
    variant (value in degrees). Blank lines and ``#`` comments are ignored.
    """
    base = base if base is not None else ScenarioParams()
    known = {f.name for f in fields(ScenarioParams)}
    overrides: dict[str, object] = {}
    seen_deg: set[str] = set()
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key.endswith("_deg") and key[:-4] in _ANGLE_FIELDS:
            field_name = key[:-4]
            if field_name in overrides:
                raise ConfigError(f"field '{field_name}' given both in radians and degrees")
            try:
                overrides[field_name] = math.radians(float(raw))
            except ValueError as exc:
                raise ConfigError(f"field '{key}' has invalid value {raw!r}") from exc
            seen_deg.add(field_name)
            continue
        if key not in known:
            raise ConfigError(f"unknown field '{key}'")
        if key in seen_deg:
            raise ConfigError(f"field '{key}' given both in radians and degrees")
        if key in overrides:
            raise ConfigError(f"field '{key}' given twice")
        overrides[key] = _parse_value(key, raw)
    return replace(base, **overrides)
