"""Command-line front end.

    crusoe statics   --config model.cfg
    crusoe simulate  --config model.cfg --out traj.csv [--svg traj.svg]
    crusoe mechanics --config model.cfg --trajectory traj.csv
    crusoe exchange  --config model.cfg --out exchange.csv
    crusoe infer     --signal traj.csv --form saturation --good Q_B

Exit status: 0 success, 1 validation error, 2 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import dynamics, exchange, inference, mechanics, statics
from .config import RunConfig, parse_config
from .errors import CrusoeError
from .io import read_trajectory_csv, write_exchange_csv, write_svg, write_trajectory_csv

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 1, 2


def _load_config(args) -> RunConfig:
    cfg = parse_config(Path(args.config).read_text(encoding="utf-8"))
    return cfg.with_overrides(args.set or [])


def _emit_json(obj, out: Optional[str]) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _max_abs(x) -> float:
    return float(np.max(np.abs(x)))


def cmd_statics(args) -> int:
    model = _load_config(args).model()
    opt = statics.solve_static_optimum(model, numeric=args.numeric)
    _emit_json({
        "Q_B_star": opt.Q_B,
        "Q_C_star": opt.Q_C,
        "objective": opt.objective,
        "second_order_ok": opt.second_order_ok,
        "curvature": opt.curvature,
        "method": "bisection" if args.numeric else "closed_form",
    }, args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _load_config(args)
    model, integ = cfg.model(), cfg.integrator()
    if args.method == "analytic":
        traj = dynamics.analytic_trajectory(model, integ.times(), companion=integ.companion)
    elif args.order == 2:
        v0 = dynamics.consistent_velocity(model) if args.v0 is None else args.v0
        traj = dynamics.integrate_second_order(model, v0, integ)
    else:
        traj = dynamics.integrate_first_order(model, integ)
    write_trajectory_csv(args.out, traj)
    if args.svg:
        write_svg(args.svg, traj, title="consumption signals")
    return EXIT_OK


def cmd_mechanics(args) -> int:
    cfg = _load_config(args)
    model = cfg.model()
    traj = read_trajectory_csv(args.trajectory)
    good = args.good[-1]
    force = mechanics.build_force_spec(model, good)
    variant = args.hamiltonian or cfg["hamiltonian"]
    residual = mechanics.lagrangian_residual(traj, model, force, good)
    r1, r2 = mechanics.hamilton_jacobi_residuals(traj, model, variant, force, good)
    audit = mechanics.energy_audit(traj, model, force, good)
    dH, fv = mechanics.hamiltonian_rate(traj, model, force, "kinetic_only", good)
    other = model.p_C if good == "B" else model.p_B
    _emit_json({
        "good": f"Q_{good}",
        "samples": len(traj),
        "force_scale": model.k * model.E / other,
        "drag_coefficient": mechanics.drag_coefficient(model, good),
        "lagrangian_residual_max": _max_abs(residual),
        "hamilton_jacobi": {
            "variant": variant,
            "r1_max": _max_abs(r1),
            "r2_max": _max_abs(r2),
            "r2_mean": float(np.mean(r2)),
        },
        "energy": {
            "T_initial": float(audit.kinetic[0]),
            "T_final": float(audit.kinetic[-1]),
            "dissipated_final": float(audit.dissipated[-1]),
            "balance_residual_max": _max_abs(audit.balance_residual),
        },
        "hamiltonian_rate": {
            "dH_dt_initial": float(dH[0]),
            "max_deviation_from_drag_power": _max_abs(dH - fv),
        },
    }, args.out)
    return EXIT_OK


def cmd_exchange(args) -> int:
    cfg = _load_config(args)
    s = cfg.scenario()
    traj = exchange.simulate_exchange(s, cfg.integrator())
    write_exchange_csv(args.out, traj)
    (qb_rc, qc_rc), (qb_d, qc_d) = exchange.exchange_equilibrium(s)
    try:
        bounds = list(exchange.feasibility_bounds(s))
    except CrusoeError:
        bounds = None
    _emit_json({
        "theta": s.theta,
        "feasibility_bounds": bounds,
        "equilibrium": {"QB_RC": qb_rc, "QC_RC": qc_rc, "QB_D": qb_d, "QC_D": qc_d},
        "final": {k: float(v[-1]) for k, v in traj.columns().items()},
        "pareto_ok": traj.pareto_ok,
        "halt_time": traj.halt_time,
    }, args.report)
    return EXIT_OK


def _report_dict(obj) -> dict:
    if hasattr(obj, "as_dict"):
        return obj.as_dict()
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in vars(obj).items()}


def cmd_infer(args) -> int:
    traj = read_trajectory_csv(args.signal)
    if args.form == "saturation":
        result = _report_dict(inference.fit_saturation(traj, args.good))
    elif args.form == "exponential_affine":
        result = _report_dict(inference.fit_exponential_affine(traj, args.good))
    elif args.form == "collinearity":
        result = _report_dict(inference.detect_collinearity(traj, traj, args.good_a, args.good_b))
    elif args.form == "constraint":
        result = _report_dict(inference.reconstruct_constraint(traj, traj, args.good_a, args.good_b))
    else:
        cfg = _load_config(args)
        fit_b = inference.fit_saturation(traj, args.good_a)
        fit_c = inference.fit_saturation(traj, args.good_b)
        est = inference.recover_model_params(fit_b, fit_c, float(cfg["p_B"]), float(cfg["p_C"]))
        result = {"fit_B": fit_b.as_dict(), "fit_C": fit_c.as_dict(), "estimates": est.as_dict()}
    _emit_json(result, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crusoe", description="Utility-driven consumption and exchange dynamics.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(p, required=True):
        p.add_argument("--config", required=required, help="key = value config file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")

    p = sub.add_parser("statics", help="static optimum as JSON")
    with_config(p)
    p.add_argument("--numeric", action="store_true", help="bisection path instead of closed form")
    p.add_argument("--out")
    p.set_defaults(func=cmd_statics)

    p = sub.add_parser("simulate", help="trajectory CSV (t,Q_B,Q_C)")
    with_config(p)
    p.add_argument("--out", required=True)
    p.add_argument("--svg")
    p.add_argument("--method", choices=("rk4", "analytic"), default="rk4")
    p.add_argument("--order", type=int, choices=(1, 2), default=1)
    p.add_argument("--v0", type=float, help="initial banana velocity for --order 2")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("mechanics", help="residual and energy report as JSON")
    with_config(p)
    p.add_argument("--trajectory", required=True)
    p.add_argument("--good", choices=("Q_B", "Q_C"), default="Q_B")
    p.add_argument("--hamiltonian", choices=("kinetic_only", "paper_literal"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_mechanics)

    p = sub.add_parser("exchange", help="two-agent exchange CSV plus halt report")
    with_config(p)
    p.add_argument("--out", required=True)
    p.add_argument("--report", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_exchange)

    p = sub.add_parser("infer", help="fit signal forms / detect structure")
    with_config(p, required=False)
    p.add_argument("--signal", required=True)
    p.add_argument("--form", required=True,
                   choices=("saturation", "exponential_affine", "collinearity", "constraint", "params"))
    p.add_argument("--good", default="Q_B")
    p.add_argument("--good-a", default="Q_B")
    p.add_argument("--good-b", default="Q_C")
    p.add_argument("--out")
    p.set_defaults(func=cmd_infer)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "infer" and args.form == "params" and not args.config:
        sys.stderr.write("infer: --form params needs --config for the prices\n")
        return EXIT_VALIDATION
    try:
        return args.func(args)
    except CrusoeError as exc:
        sys.stderr.write(exc.qualified() + "\n")
        return EXIT_VALIDATION
    except OSError as exc:
        sys.stderr.write(f"{args.command}: I/O error: {exc}\n")
        return EXIT_IO


run_command = main

if __name__ == "__main__":
    sys.exit(main())
