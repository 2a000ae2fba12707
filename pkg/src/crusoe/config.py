"""Flat ``key = value`` run configuration."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .core import ConsumptionModel
from .dynamics import IntegratorConfig
from .errors import ConfigError, InvalidNumber, MalformedLine, UnknownKey
from .exchange import ExchangeScenario

MODEL_KEYS = ("E", "p_B", "p_C", "k", "m_B", "m_C", "Q_B0", "Q_C0")
INTEGRATOR_KEYS = ("dt", "t_end")
EXCHANGE_KEYS = ("k", "l", "r", "m", "endow_RC_B", "endow_RC_C", "endow_D_B", "endow_D_C")
CHOICES = {
    "companion": ("symmetric", "budget_residual"),
    "hamiltonian": ("kinetic_only", "paper_literal"),
}
_DECIMAL = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")

NUMERIC_KEYS = MODEL_KEYS + INTEGRATOR_KEYS + tuple(f"exchange.{k}" for k in EXCHANGE_KEYS)

DEFAULTS = {
    "k": 1.0, "m_B": 1.0, "m_C": 1.0, "Q_B0": 0.0, "Q_C0": 0.0,
    "dt": 1e-3, "t_end": 10.0,
    "companion": "symmetric", "hamiltonian": "kinetic_only",
}


@dataclass(frozen=True)
class RunConfig:
    values: dict = field(default_factory=dict)

    def __getitem__(self, key):
        if key in self.values:
            return self.values[key]
        if key in DEFAULTS:
            return DEFAULTS[key]
        raise KeyError(key)

    def get(self, key, default=None):
        try:
            return self[key]
        except KeyError:
            return default

    def with_overrides(self, overrides: Iterable[str]) -> "RunConfig":
        values = dict(self.values)
        for item in overrides:
            if "=" not in item:
                raise MalformedLine(f"override {item!r} is not key=value")
            key, raw = (part.strip() for part in item.split("=", 1))
            values[key] = _parse_value(key, raw, item)
        return RunConfig(values)

    def model(self) -> ConsumptionModel:
        missing = [k for k in ("E", "p_B", "p_C") if k not in self.values]
        if missing:
            raise ConfigError(f"config is missing required keys {missing}")
        return ConsumptionModel(**{k: float(self[k]) for k in MODEL_KEYS})

    def integrator(self, t_end: Optional[float] = None) -> IntegratorConfig:
        return IntegratorConfig(
            dt=float(self["dt"]),
            t_end=float(self["t_end"] if t_end is None else t_end),
            companion=self["companion"],
        )

    def scenario(self) -> ExchangeScenario:
        missing = [k for k in EXCHANGE_KEYS if f"exchange.{k}" not in self.values]
        if missing:
            raise ConfigError(f"config is missing exchange keys {missing}")
        x = {k: float(self.values[f"exchange.{k}"]) for k in EXCHANGE_KEYS}
        return ExchangeScenario(
            k=x["k"], l=x["l"], r=x["r"], m=x["m"],
            endow_RC=(x["endow_RC_B"], x["endow_RC_C"]),
            endow_D=(x["endow_D_B"], x["endow_D_C"]),
        )


def _parse_value(key: str, raw: str, line: str):
    if key in CHOICES:
        if raw not in CHOICES[key]:
            raise MalformedLine(f"{key} must be one of {CHOICES[key]} (line {line!r})")
        return raw
    if key not in NUMERIC_KEYS:
        raise UnknownKey(f"unknown key {key!r} (line {line!r})")
    if not _DECIMAL.fullmatch(raw):
        raise InvalidNumber(key, raw)
    value = float(raw)
    if not math.isfinite(value):
        raise InvalidNumber(key, raw)
    return value


def parse_config(text: str) -> RunConfig:
    values = {}
    for lineno, raw_line in enumerate(text.splitlines(), 1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise MalformedLine(f"line {lineno}: expected 'key = value', got {raw_line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if not key or not raw:
            raise MalformedLine(f"line {lineno}: expected 'key = value', got {raw_line!r}")
        values[key] = _parse_value(key, raw, raw_line)
    return RunConfig(values)
