"""Force-driven consumption dynamics.

Each good obeys ``m * dQ/dt = force(Q)`` where the force is the marginal
utility of the budget-substituted utility. For Cobb-Douglas the solution is a
saturating exponential that settles on the static optimum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal, Optional, Sequence

import numpy as np

from .core import (
    CobbDouglas,
    ConsumptionModel,
    Trajectory,
    derivative,
    utility,
    validate_model,
)
from .errors import InvalidIntegratorConfig, StepTooLarge, UnsupportedUtility

Companion = Literal["symmetric", "budget_residual"]

STABILITY_LIMIT = 0.5


@dataclass(frozen=True)
class RateCoefficient:
    lambda_B: float
    lambda_C: float

    @property
    def max(self) -> float:
        return max(self.lambda_B, self.lambda_C)


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step classical RK4 settings.

    The grid is ``linspace(0, t_end, n + 1)`` with ``n = round(t_end / dt)``, so
    the effective step is ``t_end / n``.
    """

    dt: float = 1e-3
    t_end: float = 10.0
    companion: Companion = "symmetric"

    def __post_init__(self):
        if not (math.isfinite(self.dt) and math.isfinite(self.t_end)):
            raise InvalidIntegratorConfig("dt and t_end must be finite")
        if not (0 < self.dt <= self.t_end):
            raise InvalidIntegratorConfig(f"need 0 < dt <= t_end (dt={self.dt}, t_end={self.t_end})")
        if self.companion not in ("symmetric", "budget_residual"):
            raise InvalidIntegratorConfig(f"unknown companion law {self.companion!r}")

    @property
    def steps(self) -> int:
        return max(1, int(round(self.t_end / self.dt)))

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_end, self.steps + 1)


def rate_coefficients(model: ConsumptionModel) -> RateCoefficient:
    model = validate_model(model)
    return RateCoefficient(
        lambda_B=2.0 * (model.k / model.m_B) * (model.p_B / model.p_C),
        lambda_C=2.0 * (model.k / model.m_C) * (model.p_C / model.p_B),
    )


def _other(good: str) -> str:
    return "C" if good == "B" else "B"


def force_function(model: ConsumptionModel, good: str = "B") -> Callable[[float], float]:
    """Marginal utility of ``good`` with the other good eliminated by the budget."""
    model = validate_model(model)
    spec = model.utility_spec
    E, p_own, p_other = model.E, model.price(good), model.price(_other(good))
    if isinstance(spec, CobbDouglas):
        k = spec.k
        return lambda q: (k / p_other) * (E - 2.0 * p_own * q)

    q_max = E / p_own
    other = _other(good)

    def reduced(q: float) -> float:
        return utility(spec, {good: q, other: (E - p_own * q) / p_other})

    return lambda q: derivative(reduced, q, lower=0.0, upper=q_max)


def consumption_force(model: ConsumptionModel, Q_B: float, good: str = "B") -> float:
    return force_function(model, good)(Q_B)


def _stiffness(model: ConsumptionModel, good: str) -> float:
    """Decay rate |force'(Q)| / m used by the stability guard."""
    if model.is_cobb_douglas:
        rates = rate_coefficients(model)
        return rates.lambda_B if good == "B" else rates.lambda_C
    f = force_function(model, good)
    q0 = model.initial(good)
    return abs(derivative(f, q0, lower=0.0)) / model.mass(good)


def _active_goods(cfg: IntegratorConfig) -> tuple[str, ...]:
    return ("B", "C") if cfg.companion == "symmetric" else ("B",)


def _check_step(model: ConsumptionModel, cfg: IntegratorConfig) -> None:
    h = cfg.t_end / cfg.steps
    for good in _active_goods(cfg):
        lam = _stiffness(model, good)
        if h * lam >= STABILITY_LIMIT:
            raise StepTooLarge(
                f"dt*lambda_{good} = {h * lam:.4g} >= {STABILITY_LIMIT} (dt={h:g}, lambda={lam:g})"
            )


def rk4_step(rhs: Callable[[float, np.ndarray], np.ndarray], t: float, y: np.ndarray, h: float) -> np.ndarray:
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_integrate(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    y0: Sequence[float],
    times: np.ndarray,
) -> np.ndarray:
    """Classical RK4 over the given grid; returns an array of shape (len(times), len(y0))."""
    out = np.empty((len(times), len(y0)))
    y = np.asarray(y0, dtype=float)
    out[0] = y
    for i in range(len(times) - 1):
        y = rk4_step(rhs, times[i], y, times[i + 1] - times[i])
        out[i + 1] = y
    return out


def _budget_residual(model: ConsumptionModel, q_b: np.ndarray) -> np.ndarray:
    return (model.E - model.p_B * q_b) / model.p_C


def _assemble(model: ConsumptionModel, times: np.ndarray, q_b: np.ndarray,
              q_c: Optional[np.ndarray]) -> Trajectory:
    if q_c is None:
        q_c = _budget_residual(model, q_b)
    return Trajectory(times, {"Q_B": q_b, "Q_C": q_c}, units={"t": "time", "Q_B": "goods", "Q_C": "goods"})


def analytic_trajectory(
    model: ConsumptionModel,
    times: Sequence[float],
    companion: Companion = "symmetric",
) -> Trajectory:
    """Closed-form Q(t) = (Q0 - E/2p) exp(-lambda t) + E/2p per good."""
    model = validate_model(model)
    if not model.is_cobb_douglas:
        raise UnsupportedUtility("analytic trajectory exists only for Cobb-Douglas utility")
    t = np.asarray(times, dtype=float)
    rates = rate_coefficients(model)

    def solve(good: str, lam: float) -> np.ndarray:
        q_star = model.E / (2.0 * model.price(good))
        return (model.initial(good) - q_star) * np.exp(-lam * t) + q_star

    q_b = solve("B", rates.lambda_B)
    q_c = solve("C", rates.lambda_C) if companion == "symmetric" else None
    return _assemble(model, t, q_b, q_c)


def integrate_first_order(model: ConsumptionModel, cfg: IntegratorConfig = IntegratorConfig()) -> Trajectory:
    model = validate_model(model)
    _check_step(model, cfg)
    goods = _active_goods(cfg)
    forces = [force_function(model, g) for g in goods]
    masses = [model.mass(g) for g in goods]

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        return np.array([f(q) / m for f, q, m in zip(forces, y, masses)])

    times = cfg.times()
    states = rk4_integrate(rhs, [model.initial(g) for g in goods], times)
    q_c = states[:, 1] if cfg.companion == "symmetric" else None
    return _assemble(model, times, states[:, 0], q_c)


def consistent_velocity(model: ConsumptionModel, good: str = "B") -> float:
    """Initial velocity that makes the second-order form reproduce the first-order one."""
    return force_function(model, good)(model.initial(good)) / model.mass(good)


def integrate_second_order(
    model: ConsumptionModel,
    v0: float,
    cfg: IntegratorConfig = IntegratorConfig(),
    v0_C: Optional[float] = None,
    return_velocity: bool = False,
):
    """Integrate ``m * Q'' = d/dt force(Q) = force'(Q) * Q'``.

    ``v0`` is the initial banana velocity. The coconut velocity defaults to the
    consistent value. With ``return_velocity`` a second trajectory holding the
    velocities ``v_B``/``v_C`` is returned as well.
    """
    model = validate_model(model)
    _check_step(model, cfg)
    goods = _active_goods(cfg)
    forces = [force_function(model, g) for g in goods]
    masses = [model.mass(g) for g in goods]
    if model.is_cobb_douglas:
        # force'(Q) = -lambda * m, constant
        slopes = [(lambda q, s=-_stiffness(model, g) * model.mass(g): s) for g in goods]
    else:
        slopes = [(lambda q, f=f: derivative(f, q)) for f in forces]

    n = len(goods)

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        dy = np.empty(2 * n)
        dy[:n] = y[n:]
        for i in range(n):
            dy[n + i] = slopes[i](y[i]) * y[n + i] / masses[i]
        return dy

    v_init = [v0]
    if n == 2:
        v_init.append(consistent_velocity(model, "C") if v0_C is None else v0_C)
    y0 = [model.initial(g) for g in goods] + v_init
    times = cfg.times()
    states = rk4_integrate(rhs, y0, times)
    q_c = states[:, 1] if n == 2 else None
    traj = _assemble(model, times, states[:, 0], q_c)
    if not return_velocity:
        return traj
    velocities = {f"v_{g}": states[:, n + i] for i, g in enumerate(goods)}
    return traj, Trajectory(times, velocities)
