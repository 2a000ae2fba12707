"""Lagrangian / Hamiltonian diagnostics along sampled trajectories.

The consumption force has no conservative part: all of it is a drag
proportional to the velocity. Residual checks here evaluate the D'Alembert
form of the Euler-Lagrange equation and the Hamilton equations with that drag
on the right-hand side, using finite differences on the sampled signal.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Literal, Optional, Sequence

import numpy as np

from .core import ConsumptionModel, Trajectory, validate_model
from .errors import DegenerateGrid, EndpointMismatch, TooFewSamples, UnsupportedUtility

MIN_SAMPLES = 5

Variant = Literal["kinetic_only", "paper_literal"]


@dataclass(frozen=True)
class PhaseState:
    Q: float
    v: float
    m: float = 1.0

    @property
    def pi(self) -> float:
        return self.m * self.v


@dataclass(frozen=True)
class ForceSpec:
    """Force over phase space split into a position-only and a velocity-dependent part."""

    conservative: Callable[[float], float]
    dissipative: Callable[[float, float], float]
    # V(Q) with -dV/dQ = conservative(Q); None means V = 0
    potential: Optional[Callable[[float], float]] = None

    def total(self, Q, v):
        return self.conservative(Q) + self.dissipative(Q, v)

    def potential_energy(self, Q):
        if self.potential is None:
            return np.zeros_like(np.asarray(Q, dtype=float))
        return self.potential(Q)


def _zero_position(Q):
    return np.zeros_like(np.asarray(Q, dtype=float))


def _zero_velocity_force(Q, v):
    return np.zeros_like(np.asarray(v, dtype=float))


def drag_coefficient(model: ConsumptionModel, good: str = "B") -> float:
    """2 k p_own / p_other, the friction coefficient of the drag force."""
    p_own = model.p_B if good == "B" else model.p_C
    p_other = model.p_C if good == "B" else model.p_B
    return 2.0 * model.k * p_own / p_other


def build_force_spec(model: ConsumptionModel, good: str = "B") -> ForceSpec:
    model = validate_model(model)
    if not model.is_cobb_douglas:
        raise UnsupportedUtility("force decomposition is defined for Cobb-Douglas utility")
    c = drag_coefficient(model, good)
    return ForceSpec(conservative=_zero_position, dissipative=lambda Q, v: -c * np.asarray(v, dtype=float))


def position_force(F: Callable[[float], float], V: Optional[Callable[[float], float]] = None) -> ForceSpec:
    """ForceSpec for a purely position-dependent force."""
    return ForceSpec(conservative=F, dissipative=_zero_velocity_force, potential=V)


# -- finite differences along a sampled signal -------------------------------

def time_derivative(times: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Central differences inside, second-order one-sided at the ends."""
    return np.gradient(values, times, edge_order=2)


def second_time_derivative(times: np.ndarray, values: np.ndarray) -> np.ndarray:
    dt = np.diff(times)
    if not np.allclose(dt, dt[0], rtol=1e-9, atol=0.0):
        return np.gradient(time_derivative(times, values), times, edge_order=2)
    h2 = dt[0] ** 2
    out = np.empty_like(values)
    out[1:-1] = (values[2:] - 2.0 * values[1:-1] + values[:-2]) / h2
    out[0] = (2.0 * values[0] - 5.0 * values[1] + 4.0 * values[2] - values[3]) / h2
    out[-1] = (2.0 * values[-1] - 5.0 * values[-2] + 4.0 * values[-3] - values[-4]) / h2
    return out


def _signal(traj: Trajectory, good: str) -> tuple[np.ndarray, np.ndarray]:
    if len(traj) < MIN_SAMPLES:
        raise TooFewSamples(f"need at least {MIN_SAMPLES} samples, got {len(traj)}")
    name = good if good.startswith("Q_") else f"Q_{good}"
    return traj.times, traj[name]


def _mass(model: ConsumptionModel, good: str) -> float:
    return model.m_B if good.endswith("B") else model.m_C


def lagrangian_residual(traj: Trajectory, model: ConsumptionModel, force: ForceSpec,
                        good: str = "B") -> np.ndarray:
    """d/dt(dL/dv) - dL/dQ - F_d with L = m v^2 / 2 - V(Q)."""
    t, q = _signal(traj, good)
    m = _mass(model, good)
    v = time_derivative(t, q)
    a = second_time_derivative(t, q)
    # dL/dQ = -V'(Q) = conservative force
    return m * a - force.conservative(q) - force.dissipative(q, v)


# -- Hamiltonian -------------------------------------------------------------

class HamiltonianVariant(enum.Enum):
    KINETIC_ONLY = "kinetic_only"
    PAPER_LITERAL = "paper_literal"

    @classmethod
    def parse(cls, value) -> "HamiltonianVariant":
        return value if isinstance(value, cls) else cls(value)


def _linear_potential_slope(model: ConsumptionModel, good: str) -> float:
    # the literal Hamiltonian carries V = -(k / p_other) E Q
    p_other = model.p_C if good.endswith("B") else model.p_B
    return -(model.k / p_other) * model.E


def hamiltonian(state: PhaseState, model: ConsumptionModel, variant="kinetic_only",
                good: str = "B") -> float:
    variant = HamiltonianVariant.parse(variant)
    kinetic = state.pi ** 2 / (2.0 * state.m)
    if variant is HamiltonianVariant.KINETIC_ONLY:
        return kinetic
    return kinetic + _linear_potential_slope(model, good) * state.Q


def hamilton_jacobi_residuals(
    traj: Trajectory,
    model: ConsumptionModel,
    variant="kinetic_only",
    force: Optional[ForceSpec] = None,
    good: str = "B",
    momenta: Optional[np.ndarray] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Residuals of dQ/dt = dH/dpi and dpi/dt + dH/dQ = F_d.

    Without ``momenta`` the momentum is reconstructed as m * dQ/dt, which makes
    the first residual vanish identically; pass sampled momenta to test it.
    """
    variant = HamiltonianVariant.parse(variant)
    force = force if force is not None else build_force_spec(model, good[-1])
    t, q = _signal(traj, good)
    m = _mass(model, good)
    v = time_derivative(t, q)
    pi = m * v if momenta is None else np.asarray(momenta, dtype=float)
    dH_dpi = pi / m
    if variant is HamiltonianVariant.KINETIC_ONLY:
        # V from the conservative part: dV/dQ = -F_c
        dH_dQ = -force.conservative(q)
    else:
        dH_dQ = np.full_like(q, _linear_potential_slope(model, good))
    if momenta is None:
        # differentiating a differentiated signal loses an order at the ends
        dpi_dt = m * second_time_derivative(t, q)
    else:
        dpi_dt = time_derivative(t, pi)
    r1 = v - dH_dpi
    r2 = dpi_dt + dH_dQ - force.dissipative(q, dH_dpi)
    return r1, r2


def hamiltonian_series(traj: Trajectory, model: ConsumptionModel, variant="kinetic_only",
                       good: str = "B") -> np.ndarray:
    t, q = _signal(traj, good)
    m = _mass(model, good)
    v = time_derivative(t, q)
    return np.array([hamiltonian(PhaseState(qi, vi, m), model, variant, good) for qi, vi in zip(q, v)])


def hamiltonian_rate(traj: Trajectory, model: ConsumptionModel, force: Optional[ForceSpec] = None,
                     variant="kinetic_only", good: str = "B") -> tuple[np.ndarray, np.ndarray]:
    """(dH/dt, F_d * v) along the trajectory; they agree when the drag drains H.

    dH/dt = v * (m * Q'' + dV/dQ) by the chain rule.
    """
    variant = HamiltonianVariant.parse(variant)
    force = force if force is not None else build_force_spec(model, good[-1])
    t, q = _signal(traj, good)
    m = _mass(model, good)
    v = time_derivative(t, q)
    a = second_time_derivative(t, q)
    if variant is HamiltonianVariant.KINETIC_ONLY:
        dV_dQ = -force.conservative(q)
    else:
        dV_dQ = _linear_potential_slope(model, good)
    return v * (m * a + dV_dQ), force.dissipative(q, v) * v


# -- path dependence ---------------------------------------------------------

def _polyline_work(force: ForceSpec, path: Sequence[PhaseState]) -> float:
    Q = np.array([s.Q for s in path], dtype=float)
    v = np.array([s.v for s in path], dtype=float)
    F = np.array([force.total(qi, vi) for qi, vi in zip(Q, v)], dtype=float)
    return float(-np.sum(0.5 * (F[1:] + F[:-1]) * np.diff(Q)))


def path_dependence_probe(force: ForceSpec, path_a: Sequence[PhaseState],
                          path_b: Sequence[PhaseState], atol: float = 1e-12) -> tuple[float, float, float]:
    """-integral F dQ along two polylines in (Q, v) sharing their endpoints."""
    if len(path_a) < 2 or len(path_b) < 2:
        raise EndpointMismatch("each path needs at least two states")
    for end in (0, -1):
        a, b = path_a[end], path_b[end]
        scale = max(1.0, abs(a.Q), abs(a.v))
        if abs(a.Q - b.Q) > atol * scale or abs(a.v - b.v) > atol * scale:
            raise EndpointMismatch(f"paths differ at {'start' if end == 0 else 'end'}: {a} vs {b}")
    I_a = _polyline_work(force, path_a)
    I_b = _polyline_work(force, path_b)
    return I_a, I_b, I_a - I_b


# -- energy ------------------------------------------------------------------

@dataclass(frozen=True)
class EnergyAudit:
    times: np.ndarray
    kinetic: np.ndarray
    dissipated: np.ndarray
    conservative_work: np.ndarray
    balance_residual: np.ndarray


def cumulative_trapezoid(times: np.ndarray, values: np.ndarray) -> np.ndarray:
    out = np.zeros_like(values, dtype=float)
    out[1:] = np.cumsum(0.5 * (values[1:] + values[:-1]) * np.diff(times))
    return out


def energy_audit(traj: Trajectory, model: ConsumptionModel, force: ForceSpec,
                 good: str = "B") -> EnergyAudit:
    """Kinetic energy, work done by the drag, and T(t) - T(0) - W(t)."""
    t, q = _signal(traj, good)
    m = _mass(model, good)
    v = time_derivative(t, q)
    kinetic = 0.5 * m * v ** 2
    dissipated = cumulative_trapezoid(t, force.dissipative(q, v) * v)
    conservative = cumulative_trapezoid(t, force.conservative(q) * v)
    balance = kinetic - kinetic[0] - dissipated - conservative
    return EnergyAudit(t, kinetic, dissipated, conservative, balance)


# -- classification ----------------------------------------------------------

class ForceClass(enum.Enum):
    CONSERVATIVE = "conservative"
    DISSIPATIVE = "dissipative"
    MIXED = "mixed"


def sample_force_grid(force: Callable[[float, float], float], Q_grid: Sequence[float],
                      v_grid: Sequence[float]) -> np.ndarray:
    """F evaluated on the grid; shape (len(Q_grid), len(v_grid))."""
    return np.array([[force(q, v) for v in v_grid] for q in Q_grid], dtype=float)


def classify_force(Q_grid: Sequence[float], v_grid: Sequence[float], samples,
                   rtol: float = 1e-9) -> ForceClass:
    """Classify sampled F(Q, v) as conservative, dissipative or mixed.

    Conservative: no dependence on v. Dissipative: vanishes at v = 0.
    """
    Q_grid = np.asarray(Q_grid, dtype=float)
    v_grid = np.asarray(v_grid, dtype=float)
    F = np.asarray(samples, dtype=float)
    if Q_grid.size < 2 or v_grid.size < 2:
        raise DegenerateGrid("grid needs at least two Q values and two v values")
    if F.shape != (Q_grid.size, v_grid.size):
        raise DegenerateGrid(f"samples have shape {F.shape}, expected {(Q_grid.size, v_grid.size)}")
    if not np.all(np.isfinite(F)):
        raise DegenerateGrid("non-finite force samples")
    tol = rtol * float(np.max(np.abs(F)))
    if np.max(np.abs(F - F[:, :1])) <= tol:
        return ForceClass.CONSERVATIVE
    at_rest = np.flatnonzero(v_grid == 0.0)
    if at_rest.size == 0:
        raise DegenerateGrid("velocity-dependent force but the grid has no v = 0 column")
    if np.max(np.abs(F[:, at_rest[0]])) <= tol:
        return ForceClass.DISSIPATIVE
    return ForceClass.MIXED
