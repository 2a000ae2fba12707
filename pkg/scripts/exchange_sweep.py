"""Sweep the trade ratio r across the feasible interval for the canonical endowments.

For each r: equilibrium holdings, final utilities and whether the Pareto
monitor halted trade early (empty halt_time: it did not). For r < 1 Crusoe's
tangency asks for more coconuts than exist, so trade stops where Defoe's
utility peaks. Writes a CSV table.

    python3 scripts/exchange_sweep.py [out.csv]
"""
import sys

import numpy as np

from crusoe.dynamics import IntegratorConfig
from crusoe.exchange import ExchangeScenario, exchange_equilibrium, feasibility_bounds, simulate_exchange
from crusoe.io import fmt

RC, D = (8.0, 2.0), (2.0, 8.0)


def sweep(n: int = 15):
    lo, hi = feasibility_bounds(ExchangeScenario(1.0, 1.0, 1.0, 1.0, RC, D))
    rows = []
    for r in np.geomspace(lo, hi, n + 2)[1:-1]:
        s = ExchangeScenario(k=1.0, l=1.0, r=float(r), m=1.0, endow_RC=RC, endow_D=D)
        dt = min(1e-2, 0.1 / s.rate)
        tr = simulate_exchange(s, IntegratorConfig(dt=dt, t_end=20.0 / s.rate))
        (qb, qc), _ = exchange_equilibrium(s)
        rows.append((r, qb, qc, tr.QB_RC[-1], tr.QC_RC[-1], tr.U_RC[-1], tr.U_D[-1], tr.halt_time))
    return rows


if __name__ == "__main__":
    header = "r,QB_eq,QC_eq,QB_RC,QC_RC,U_RC,U_D,halt_time"
    lines = [header] + [",".join("" if x is None else fmt(x) for x in row) for row in sweep()]
    text = "\n".join(lines) + "\n"
    if len(sys.argv) > 1:
        open(sys.argv[1], "w").write(text)
    print(text, end="")
