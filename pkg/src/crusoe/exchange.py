"""Two-agent exchange at a fixed trade ratio r (bananas per coconut).

Crusoe (RC) buys coconuts from Defoe (D) with bananas. Only Crusoe's
marginal-utility force drives the trade; Defoe's holdings follow from
conservation of the total endowment, and trade stops the first time either
agent would lose utility.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dynamics import STABILITY_LIMIT, IntegratorConfig, rk4_step
from .errors import (
    DegenerateEndowment,
    InfeasibleRatio,
    InvalidScenario,
    NoGainsFromTrade,
    StepTooLarge,
)

PARETO_RTOL = 1e-12


@dataclass(frozen=True)
class ExchangeScenario:
    k: float
    l: float  # noqa: E741  (Defoe's utility coefficient)
    r: float
    m: float
    endow_RC: tuple[float, float]  # (bananas, coconuts)
    endow_D: tuple[float, float]

    def __post_init__(self):
        for name in ("k", "l", "r", "m"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidScenario(f"{name} must be finite and > 0 (got {value!r})")
        for who in ("endow_RC", "endow_D"):
            bundle = tuple(float(x) for x in getattr(self, who))
            if len(bundle) != 2 or not all(math.isfinite(x) and x >= 0 for x in bundle):
                raise InvalidScenario(f"{who} must be two finite non-negative quantities (got {bundle!r})")
            object.__setattr__(self, who, bundle)
        if self.total[0] <= 0 or self.total[1] <= 0:
            raise InvalidScenario("each good must be held by at least one agent")

    @property
    def total(self) -> tuple[float, float]:
        return (self.endow_RC[0] + self.endow_D[0], self.endow_RC[1] + self.endow_D[1])

    @property
    def theta(self) -> float:
        """Q_B(0) + r Q_C(0) for Crusoe: conserved along the trade line."""
        return self.endow_RC[0] + self.r * self.endow_RC[1]

    @property
    def rate(self) -> float:
        """Decay rate 2 k r / m of the coconut dynamics."""
        return 2.0 * self.k * self.r / self.m


def _mrs(bundle: tuple[float, float]) -> float:
    """Cobb-Douglas marginal rate of substitution Q_B / Q_C (bananas per coconut)."""
    q_b, q_c = bundle
    if q_c > 0:
        return q_b / q_c
    if q_b > 0:
        return math.inf
    return math.nan


def feasibility_bounds(s: ExchangeScenario) -> tuple[float, float]:
    """(MRS of Defoe, MRS of Crusoe) at the endowment; r must lie strictly between."""
    if min(*s.endow_RC, *s.endow_D) <= 0:
        raise DegenerateEndowment(
            f"MRS undefined: endowments RC={s.endow_RC}, D={s.endow_D} contain a zero quantity"
        )
    r_min, r_max = _mrs(s.endow_D), _mrs(s.endow_RC)
    if r_max <= r_min:
        raise NoGainsFromTrade(f"MRS of Crusoe ({r_max:g}) does not exceed MRS of Defoe ({r_min:g})")
    return r_min, r_max


def _check_ratio(s: ExchangeScenario) -> None:
    # closed interval: a scenario already sitting at an agent's tangency is
    # allowed and simply does not trade
    r_min, r_max = _mrs(s.endow_D), _mrs(s.endow_RC)
    if math.isnan(r_min) or math.isnan(r_max):
        raise DegenerateEndowment("an agent holds nothing at all")
    if not (r_min <= s.r <= r_max):
        raise InfeasibleRatio(f"r={s.r:g} outside [{r_min:g}, {r_max:g}]")


def exchange_equilibrium(s: ExchangeScenario) -> tuple[tuple[float, float], tuple[float, float]]:
    """Crusoe's tangency point r = Q_B / Q_C on the trade line, Defoe by conservation."""
    _check_ratio(s)
    q_c = s.theta / (2.0 * s.r)
    q_b = s.theta - s.r * q_c
    tot_b, tot_c = s.total
    return (q_b, q_c), (tot_b - q_b, tot_c - q_c)


def exchange_force(s: ExchangeScenario, Q_C: float) -> float:
    return s.k * (s.theta - 2.0 * s.r * Q_C)


@dataclass(frozen=True)
class ExchangeTrajectory:
    times: np.ndarray
    QB_RC: np.ndarray
    QC_RC: np.ndarray
    QB_D: np.ndarray
    QC_D: np.ndarray
    U_RC: np.ndarray
    U_D: np.ndarray
    halt_time: Optional[float] = None

    @property
    def pareto_ok(self) -> bool:
        return self.halt_time is None

    def columns(self) -> dict[str, np.ndarray]:
        return {
            "QB_RC": self.QB_RC, "QC_RC": self.QC_RC,
            "QB_D": self.QB_D, "QC_D": self.QC_D,
            "U_RC": self.U_RC, "U_D": self.U_D,
        }


def _snap(x: float, total: float) -> float:
    """Round ``x`` to the ulp grid of ``total`` so ``total - x`` is exact."""
    u = math.ulp(total)
    return round(x / u) * u


def _holdings(s: ExchangeScenario, q_c: float) -> tuple[float, float, float, float]:
    tot_b, tot_c = s.total
    qc_rc = _snap(q_c, tot_c)
    qb_rc = _snap(s.theta - s.r * qc_rc, tot_b)
    return qb_rc, qc_rc, tot_b - qb_rc, tot_c - qc_rc


def simulate_exchange(s: ExchangeScenario, cfg: IntegratorConfig = IntegratorConfig()) -> ExchangeTrajectory:
    """Integrate m dQ_C/dt = k (theta - 2 r Q_C) for Crusoe's coconuts.

    Bananas follow the trade line Q_B = theta - r Q_C; Defoe holds the rest.
    Holdings are snapped to the ulp grid of the totals, which keeps
    conservation exact in floating point. Trade freezes at the first step that
    would lower either utility or drive a holding negative.
    """
    _check_ratio(s)
    times = cfg.times()
    h = times[1] - times[0]
    if h * s.rate >= STABILITY_LIMIT:
        raise StepTooLarge(f"dt*2kr/m = {h * s.rate:.4g} >= {STABILITY_LIMIT}")

    def rhs(t, y):
        return np.array([exchange_force(s, y[0]) / s.m])

    n = times.size
    cols = np.empty((6, n))
    state = _holdings(s, s.endow_RC[1])
    u_rc, u_d = s.k * state[0] * state[1], s.l * state[2] * state[3]
    tol_rc, tol_d = PARETO_RTOL * u_rc, PARETO_RTOL * u_d
    cols[:, 0] = (*state, u_rc, u_d)
    y = np.array([state[1]])
    halt_time = None
    for i in range(1, n):
        if halt_time is None:
            y_new = rk4_step(rhs, times[i - 1], y, times[i] - times[i - 1])
            cand = _holdings(s, float(y_new[0]))
            cu_rc, cu_d = s.k * cand[0] * cand[1], s.l * cand[2] * cand[3]
            if min(cand) < 0 or cu_rc < u_rc - tol_rc or cu_d < u_d - tol_d:
                halt_time = float(times[i - 1])
            else:
                y, state, u_rc, u_d = y_new, cand, cu_rc, cu_d
        cols[:, i] = (*state, u_rc, u_d)
    return ExchangeTrajectory(times, *cols, halt_time=halt_time)


def pareto_monitor(traj: ExchangeTrajectory, s: Optional[ExchangeScenario] = None,
                   rtol: float = PARETO_RTOL) -> Optional[float]:
    """First sample time at which either utility strictly drops, else None.

    With a scenario the utilities are recomputed from the holdings instead of
    taken from the stored series.
    """
    if s is None:
        series = (np.asarray(traj.U_RC), np.asarray(traj.U_D))
    else:
        series = (s.k * np.asarray(traj.QB_RC) * np.asarray(traj.QC_RC),
                  s.l * np.asarray(traj.QB_D) * np.asarray(traj.QC_D))
    first = None
    for u in series:
        drops = np.flatnonzero(np.diff(u) < -rtol * u[0])
        if drops.size:
            t = float(traj.times[drops[0] + 1])
            first = t if first is None else min(first, t)
    return first
