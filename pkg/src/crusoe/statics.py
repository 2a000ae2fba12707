"""Static optimum: substitute the budget into the utility and solve du/dQ_B = 0."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

from .core import (
    CobbDouglas,
    ConsumptionModel,
    Custom,
    derivative,
    second_derivative,
    utility,
    validate_model,
)
from .errors import NoInteriorOptimum


@dataclass(frozen=True)
class ReducedUtility:
    """Utility as a function of Q_B alone, with Q_C eliminated by the budget."""

    value: Callable[[float], float]
    d1: Callable[[float], float]
    d2: Callable[[float], float]
    q_max: float

    def __call__(self, q_b: float) -> float:
        return self.value(q_b)


@dataclass(frozen=True)
class StaticOptimum:
    Q_B: float
    Q_C: float
    objective: float
    second_order_ok: bool
    curvature: float

    @property
    def bundle(self) -> dict[str, float]:
        return {"B": self.Q_B, "C": self.Q_C}


def budget_coconuts(model: ConsumptionModel, q_b: float) -> float:
    return (model.E - model.p_B * q_b) / model.p_C


def substitute_budget(model: ConsumptionModel) -> ReducedUtility:
    model = validate_model(model)
    spec = model.utility_spec
    q_max = model.E / model.p_B
    if isinstance(spec, CobbDouglas):
        k, E, p_B, p_C = spec.k, model.E, model.p_B, model.p_C
        return ReducedUtility(
            value=lambda q: (k / p_C) * q * (E - p_B * q),
            d1=lambda q: (k / p_C) * (E - 2.0 * p_B * q),
            d2=lambda q: -2.0 * k * p_B / p_C,
            q_max=q_max,
        )

    def value(q: float) -> float:
        return utility(spec, {"B": q, "C": budget_coconuts(model, q)})

    return ReducedUtility(
        value=value,
        d1=lambda q: derivative(value, q, lower=0.0, upper=q_max),
        d2=lambda q: second_derivative(value, q),
        q_max=q_max,
    )


def _bisect_root(f: Callable[[float], float], lo: float, hi: float, xtol: float) -> float:
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise NoInteriorOptimum(
            f"derivative does not change sign on [{lo:g}, {hi:g}] "
            f"(f(lo)={f_lo:g}, f(hi)={f_hi:g})"
        )
    while hi - lo >= xtol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_static_optimum(model: ConsumptionModel, numeric: bool = False) -> StaticOptimum:
    """Utility-maximizing bundle on the budget line.

    Cobb-Douglas uses the closed form E/(2p) per good. Custom utilities, or
    ``numeric=True``, bisect the reduced-utility derivative on [0, E/p_B].
    """
    model = validate_model(model)
    reduced = substitute_budget(model)
    if model.is_cobb_douglas and not numeric:
        q_b = model.E / (2.0 * model.p_B)
        q_c = model.E / (2.0 * model.p_C)
    else:
        if model.is_cobb_douglas:
            # same utility behind an opaque evaluator: forces the finite-difference path
            spec = model.utility_spec
            reduced = substitute_budget(
                replace(model, utility=Custom(lambda b: utility(spec, b)))
            )
        q_b = _bisect_root(reduced.d1, 0.0, reduced.q_max, 1e-12 * reduced.q_max)
        q_c = budget_coconuts(model, q_b)
    curvature = reduced.d2(q_b)
    return StaticOptimum(
        Q_B=q_b,
        Q_C=q_c,
        objective=utility(model.utility_spec, {"B": q_b, "C": q_c}),
        second_order_ok=bool(curvature < 0),
        curvature=curvature,
    )
