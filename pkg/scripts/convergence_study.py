"""Observed convergence orders: RK4 endpoint error and the D'Alembert residual.

    python3 scripts/convergence_study.py
"""
import numpy as np

from crusoe.core import ConsumptionModel
from crusoe.dynamics import IntegratorConfig, analytic_trajectory, integrate_first_order
from crusoe.mechanics import build_force_spec, lagrangian_residual

MODEL = ConsumptionModel(E=100.0, p_B=2.0, p_C=4.0)
STEPS = (0.1, 0.05, 0.025, 0.0125, 0.00625)


def rk4_error(dt: float) -> float:
    tr = integrate_first_order(MODEL, IntegratorConfig(dt=dt, t_end=2.0))
    return abs(tr["Q_C"][-1] - analytic_trajectory(MODEL, [0.0, 2.0])["Q_C"][1])


def residual(dt: float) -> float:
    t = np.linspace(0.0, 10.0, int(round(10.0 / dt)) + 1)
    tr = analytic_trajectory(MODEL, t)
    return float(np.max(np.abs(lagrangian_residual(tr, MODEL, build_force_spec(MODEL)))))


def table(label, f):
    errs = [f(dt) for dt in STEPS]
    print(f"{label}\n{'dt':>10} {'error':>12} {'order':>7}")
    for i, (dt, e) in enumerate(zip(STEPS, errs)):
        order = "" if i == 0 else f"{np.log2(errs[i - 1] / e):7.2f}"
        print(f"{dt:>10g} {e:>12.3e} {order:>7}")
    print()


if __name__ == "__main__":
    table("RK4, |Q_C(2) - exact|", rk4_error)
    table("D'Alembert residual, max over [0, 10]", residual)
