"""Domain types, validation and utility evaluation for the two-good economy."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Union

import numpy as np

from .errors import (
    InvalidTrajectory,
    MissingGood,
    NegativeInitialQuantity,
    NonPositiveParameter,
)

GOODS = ("B", "C")

Bundle = Mapping[str, float]


@dataclass(frozen=True)
class CobbDouglas:
    """U = k * Q_B * Q_C."""

    k: float


@dataclass(frozen=True)
class Custom:
    """Opaque utility; differentiated numerically wherever a gradient is needed."""

    evaluator: Callable[[Bundle], float]


UtilitySpec = Union[CobbDouglas, Custom]


@dataclass(frozen=True)
class ConsumptionModel:
    """One agent, two goods (bananas B, coconuts C), energy budget E.

    ``utility`` defaults to Cobb-Douglas with this model's ``k``.
    """

    E: float
    p_B: float
    p_C: float
    k: float = 1.0
    m_B: float = 1.0
    m_C: float = 1.0
    Q_B0: float = 0.0
    Q_C0: float = 0.0
    utility: Optional[UtilitySpec] = None

    @property
    def utility_spec(self) -> UtilitySpec:
        return self.utility if self.utility is not None else CobbDouglas(self.k)

    @property
    def is_cobb_douglas(self) -> bool:
        return isinstance(self.utility_spec, CobbDouglas)

    def price(self, good: str) -> float:
        return {"B": self.p_B, "C": self.p_C}[good]

    def mass(self, good: str) -> float:
        return {"B": self.m_B, "C": self.m_C}[good]

    def initial(self, good: str) -> float:
        return {"B": self.Q_B0, "C": self.Q_C0}[good]


_POSITIVE = ("E", "p_B", "p_C", "k", "m_B", "m_C")
_NON_NEGATIVE = ("Q_B0", "Q_C0")


def validate_model(model: ConsumptionModel) -> ConsumptionModel:
    """Return ``model`` unchanged if every parameter invariant holds."""
    for name in _POSITIVE:
        value = getattr(model, name)
        if not (math.isfinite(value) and value > 0):
            raise NonPositiveParameter(name, value)
    for name in _NON_NEGATIVE:
        value = getattr(model, name)
        if not (math.isfinite(value) and value >= 0):
            raise NegativeInitialQuantity(name, value)
    spec = model.utility_spec
    if isinstance(spec, CobbDouglas) and not (math.isfinite(spec.k) and spec.k > 0):
        raise NonPositiveParameter("k", spec.k)
    return model


def _quantity(bundle: Bundle, good: str) -> float:
    try:
        return float(bundle[good])
    except KeyError:
        raise MissingGood(good) from None


def utility(spec: UtilitySpec, bundle: Bundle) -> float:
    q_b, q_c = _quantity(bundle, "B"), _quantity(bundle, "C")
    if isinstance(spec, CobbDouglas):
        return spec.k * (q_b * q_c)
    return float(spec.evaluator({"B": q_b, "C": q_c}))


def fd_step(x: float) -> float:
    return max(1e-6, 1e-6 * abs(x))


def derivative(
    f: Callable[[float], float],
    x: float,
    lower: Optional[float] = None,
    upper: Optional[float] = None,
) -> float:
    """Central difference with step ``fd_step(x)``.

    Falls back to a second-order one-sided stencil when the central stencil
    would leave ``[lower, upper]``.
    """
    h = fd_step(x)
    if lower is not None and x - h < lower:
        return (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h)
    if upper is not None and x + h > upper:
        return (3.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h)) / (2.0 * h)
    return (f(x + h) - f(x - h)) / (2.0 * h)


def second_derivative(f: Callable[[float], float], x: float) -> float:
    # larger step than fd_step: a second difference divides round-off by h**2
    h = max(1e-4, 1e-4 * abs(x))
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)


def utility_gradient(spec: UtilitySpec, bundle: Bundle) -> dict[str, float]:
    q = {g: _quantity(bundle, g) for g in GOODS}
    if isinstance(spec, CobbDouglas):
        return {"B": spec.k * q["C"], "C": spec.k * q["B"]}
    grad = {}
    for good in GOODS:
        def along(x: float, good: str = good) -> float:
            return float(spec.evaluator({**q, good: x}))

        grad[good] = derivative(along, q[good], lower=0.0)
    return grad


@dataclass(frozen=True)
class Trajectory:
    """Sampled quantity signals on a shared, strictly increasing time grid."""

    times: np.ndarray
    signals: Mapping[str, np.ndarray] = field(default_factory=dict)
    units: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        if times.ndim != 1 or times.size < 2:
            raise InvalidTrajectory("need at least 2 samples")
        if not np.all(np.isfinite(times)):
            raise InvalidTrajectory("non-finite time")
        if not np.all(np.diff(times) > 0):
            raise InvalidTrajectory("times must be strictly increasing")
        times.setflags(write=False)
        signals = {}
        for name, values in self.signals.items():
            arr = np.array(values, dtype=float)
            if arr.shape != times.shape:
                raise InvalidTrajectory(f"signal {name!r} has {arr.size} samples, expected {times.size}")
            if not np.all(np.isfinite(arr)):
                raise InvalidTrajectory(f"signal {name!r} has non-finite values")
            arr.setflags(write=False)
            signals[name] = arr
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "signals", signals)
        object.__setattr__(self, "units", dict(self.units))

    def __len__(self) -> int:
        return self.times.size

    def __getitem__(self, name: str) -> np.ndarray:
        try:
            return self.signals[name]
        except KeyError:
            raise MissingGood(name) from None

    @property
    def names(self) -> list[str]:
        return list(self.signals)

    def is_uniform(self, rtol: float = 1e-9) -> bool:
        dt = np.diff(self.times)
        return bool(np.allclose(dt, dt[0], rtol=rtol, atol=0.0))
