import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crusoe.core import ConsumptionModel, Custom
from crusoe.errors import NoInteriorOptimum
from crusoe.statics import solve_static_optimum, substitute_budget

CANON = ConsumptionModel(E=100.0, p_B=2.0, p_C=4.0, k=1.0)

positive = st.floats(1e-2, 1e3)


@pytest.mark.parametrize("q_b,u", [(25.0, 312.5), (0.0, 0.0), (50.0, 0.0)])
def test_reduced_utility(q_b, u):
    assert substitute_budget(CANON)(q_b) == u


def test_reduced_derivatives_cobb_douglas():
    red = substitute_budget(CANON)
    assert red.d1(25.0) == 0.0
    assert red.d1(0.0) == 25.0
    assert red.d2(10.0) == -1.0


def test_closed_form_canonical():
    opt = solve_static_optimum(CANON)
    assert (opt.Q_B, opt.Q_C) == (25.0, 12.5)
    assert opt.second_order_ok
    assert opt.objective == 312.5


def test_k_absent_from_optimum():
    opt = solve_static_optimum(ConsumptionModel(E=1.0, p_B=1.0, p_C=1.0, k=7.0))
    assert (opt.Q_B, opt.Q_C) == (0.5, 0.5)


def test_custom_matches_closed_form():
    model = ConsumptionModel(E=100.0, p_B=2.0, p_C=4.0, utility=Custom(lambda b: b["B"] * b["C"]))
    opt = solve_static_optimum(model)
    assert opt.Q_B == pytest.approx(25.0, rel=1e-9)
    assert opt.Q_C == pytest.approx(12.5, rel=1e-9)
    assert opt.second_order_ok


def test_custom_non_cobb_douglas():
    # U = sqrt(Q_B) + sqrt(Q_C); optimum Q_B = E p_C / (p_B (p_B + p_C))
    model = ConsumptionModel(E=12.0, p_B=1.0, p_C=3.0,
                             utility=Custom(lambda b: math.sqrt(b["B"]) + math.sqrt(b["C"])))
    opt = solve_static_optimum(model)
    assert opt.Q_B == pytest.approx(12.0 * 3.0 / (1.0 * 4.0), rel=1e-8)
    assert opt.second_order_ok


def test_no_interior_optimum():
    # strictly increasing in Q_B along the budget line
    model = ConsumptionModel(E=10.0, p_B=1.0, p_C=1.0, utility=Custom(lambda b: b["B"]))
    with pytest.raises(NoInteriorOptimum):
        solve_static_optimum(model)


@settings(max_examples=1000, deadline=None)
@given(E=positive, p_B=positive, p_C=positive, k=positive, k2=positive)
def test_random_models(E, p_B, p_C, k, k2):
    model = ConsumptionModel(E=E, p_B=p_B, p_C=p_C, k=k)
    closed = solve_static_optimum(model)
    # budget exhaustion (two roundings)
    assert math.isclose(p_B * closed.Q_B + p_C * closed.Q_C, E, rel_tol=1e-15)
    # k-invariance
    other = solve_static_optimum(ConsumptionModel(E=E, p_B=p_B, p_C=p_C, k=k2))
    assert (other.Q_B, other.Q_C) == (closed.Q_B, closed.Q_C)
    # curvature
    assert closed.curvature == pytest.approx(-2 * k * p_B / p_C, rel=1e-15)
    # numeric route
    numeric = solve_static_optimum(model, numeric=True)
    assert numeric.Q_B == pytest.approx(closed.Q_B, rel=1e-9)
    assert numeric.Q_C == pytest.approx(closed.Q_C, rel=1e-9)
    assert abs(p_B * numeric.Q_B + p_C * numeric.Q_C - E) <= 1e-9 * E
    assert numeric.second_order_ok


def test_bisection_resolution():
    # interval shrinks below 1e-12 * E / p_B
    model = ConsumptionModel(E=3.0, p_B=7.0, p_C=0.1, k=2.0)
    numeric = solve_static_optimum(model, numeric=True)
    assert abs(numeric.Q_B - 3.0 / 14.0) < 1e-10 * 3.0 / 7.0
    assert np.sign(numeric.curvature) == -1
