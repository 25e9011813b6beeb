"""Run configuration: a flat ``key = value`` file.

Blank lines and ``#`` comments are ignored. Unknown keys are rejected so a
typo never silently falls back to a default.
"""
from __future__ import annotations

import math
import os
from dataclasses import asdict, dataclass

from .errors import ConfigurationError, InvalidParamsError
from .roots import MAX_GROUP_ORDER, _normalise_label, weyl_order
from .theta import DEFAULT_HBAR, DEFAULT_TAU, ModularParams

CONFIG_ENV = "ELLSCHUB_CONFIG"
FORMATS = ("json", "csv")


@dataclass(frozen=True)
class RunConfig:
    type_label: str = "A"
    rank: int = 2
    tau: complex = DEFAULT_TAU
    hbar: complex = DEFAULT_HBAR
    seed: int = 0
    panel_size: int = 20
    tolerance: float = 1e-8
    pole_guard: float = 1e-4
    truncation_cap: int = 200
    output_format: str = "json"

    def __post_init__(self):
        if not isinstance(self.type_label, str) or not self.type_label:
            raise ConfigurationError("type_label: must be a non-empty string")
        try:
            label, rank = _normalise_label(self.type_label, self.rank)
        except (ConfigurationError, TypeError, ValueError) as exc:
            raise ConfigurationError(f"type_label/rank: {exc}") from exc
        if weyl_order(label, rank) > MAX_GROUP_ORDER:
            raise ConfigurationError(f"type_label/rank: Weyl group of {label}{rank} is too large")
        for key in ("tau", "hbar"):
            try:
                val = complex(getattr(self, key))
            except (TypeError, ValueError):
                raise ConfigurationError(f"{key}: must be a complex number") from None
            if not (math.isfinite(val.real) and math.isfinite(val.imag)):
                raise ConfigurationError(f"{key}: must be finite, got {val!r}")
            object.__setattr__(self, key, val)
        if not self.tau.imag > 0:
            raise ConfigurationError(f"tau: imaginary part must be positive, got {self.tau!r}")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError("seed: must be a 64-bit unsigned integer")
        if self.panel_size < 1:
            raise ConfigurationError("panel_size: must be at least 1")
        if not (self.tolerance > 0 and math.isfinite(self.tolerance)):
            raise ConfigurationError("tolerance: must be positive")
        if not (self.pole_guard > 0 and math.isfinite(self.pole_guard)):
            raise ConfigurationError("pole_guard: must be positive")
        if self.truncation_cap < 1:
            raise ConfigurationError("truncation_cap: must be at least 1")
        if self.output_format not in FORMATS:
            raise ConfigurationError(f"output_format: must be one of {', '.join(FORMATS)}")

    def params(self) -> ModularParams:
        try:
            return ModularParams.build(self.tau, self.hbar, self.truncation_cap, self.tolerance)
        except InvalidParamsError as exc:
            raise ConfigurationError(f"tau/hbar: {exc}") from exc

    def echo(self) -> dict:
        """JSON-friendly copy of every field."""
        out = asdict(self)
        out["tau"] = [self.tau.real, self.tau.imag]
        out["hbar"] = [self.hbar.real, self.hbar.imag]
        return out


def _parse_complex(key, text):
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise ConfigurationError(f"{key}: cannot parse {text!r} as a complex number") from None


def _parse_int(key, text):
    try:
        return int(text, 0)
    except ValueError:
        raise ConfigurationError(f"{key}: cannot parse {text!r} as an integer") from None


def _parse_float(key, text):
    try:
        return float(text)
    except ValueError:
        raise ConfigurationError(f"{key}: cannot parse {text!r} as a number") from None


PARSERS = {
    "type_label": lambda k, v: v,
    "rank": _parse_int,
    "tau": _parse_complex,
    "hbar": _parse_complex,
    "seed": _parse_int,
    "panel_size": _parse_int,
    "tolerance": _parse_float,
    "pole_guard": _parse_float,
    "truncation_cap": _parse_int,
    "output_format": lambda k, v: v.lower(),
}


def parse_config(text: str) -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in PARSERS:
            raise ConfigurationError(f"{key}: unknown key (line {lineno})")
        if key in values:
            raise ConfigurationError(f"{key}: given twice (line {lineno})")
        values[key] = PARSERS[key](key, value)
    return RunConfig(**values)


def load_config(path=None) -> RunConfig:
    """Read ``path``, else the file named by ``$ELLSCHUB_CONFIG``, else defaults."""
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return RunConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_config(text)
