import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crusoe.core import (
    CobbDouglas,
    ConsumptionModel,
    Custom,
    Trajectory,
    utility,
    utility_gradient,
    validate_model,
)
from crusoe.errors import (
    InvalidTrajectory,
    MissingGood,
    NegativeInitialQuantity,
    NonPositiveParameter,
)

CANONICAL = dict(E=100.0, p_B=2.0, p_C=4.0, k=1.0, m_B=1.0, m_C=1.0, Q_B0=0.0, Q_C0=0.0)


def test_validate_canonical():
    m = ConsumptionModel(**CANONICAL)
    assert validate_model(m) is m


@pytest.mark.parametrize("name,value", [("p_B", 0.0), ("E", -5.0), ("k", math.nan), ("m_C", math.inf)])
def test_validate_rejects_non_positive(name, value):
    with pytest.raises(NonPositiveParameter) as err:
        validate_model(ConsumptionModel(**{**CANONICAL, name: value}))
    assert err.value.name == name


def test_validate_rejects_negative_initial():
    with pytest.raises(NegativeInitialQuantity):
        validate_model(ConsumptionModel(**{**CANONICAL, "Q_C0": -1e-9}))


@given(signs=st.lists(st.sampled_from([-1.0, 0.0, 1.0]), min_size=8, max_size=8),
       mags=st.lists(st.floats(1e-3, 1e3), min_size=8, max_size=8))
def test_validate_accepts_exactly_the_invariant_region(signs, mags):
    keys = list(CANONICAL)
    params = {k: s * m for k, s, m in zip(keys, signs, mags)}
    ok = all(params[k] > 0 for k in keys[:6]) and all(params[k] >= 0 for k in keys[6:])
    model = ConsumptionModel(**params)
    if ok:
        validate_model(model)
    else:
        with pytest.raises((NonPositiveParameter, NegativeInitialQuantity)):
            validate_model(model)


@pytest.mark.parametrize("k,qb,qc,expected", [
    (1.0, 25.0, 12.5, 312.5),
    (2.0, 0.0, 7.0, 0.0),
    (2.0, 3.0, 4.0, 24.0),
])
def test_cobb_douglas_utility(k, qb, qc, expected):
    assert utility(CobbDouglas(k), {"B": qb, "C": qc}) == expected


def test_missing_good():
    with pytest.raises(MissingGood):
        utility(CobbDouglas(1.0), {"B": 1.0})
    with pytest.raises(MissingGood):
        utility_gradient(CobbDouglas(1.0), {"C": 1.0})


def test_gradient_exact():
    assert utility_gradient(CobbDouglas(2.0), {"B": 3.0, "C": 4.0}) == {"B": 8.0, "C": 6.0}
    assert utility_gradient(CobbDouglas(1.0), {"B": 0.0, "C": 0.0}) == {"B": 0.0, "C": 0.0}


def test_gradient_custom_wrapping_cobb_douglas():
    spec = Custom(lambda b: b["B"] * b["C"])
    g = utility_gradient(spec, {"B": 5.0, "C": 2.0})
    assert g["B"] == pytest.approx(2.0, abs=1e-6)
    assert g["C"] == pytest.approx(5.0, abs=1e-6)


@settings(max_examples=200)
@given(k=st.floats(1e-3, 1e3), qb=st.floats(1e-3, 1e4), qc=st.floats(1e-3, 1e4))
def test_gradient_matches_finite_difference(k, qb, qc):
    exact = utility_gradient(CobbDouglas(k), {"B": qb, "C": qc})
    numeric = utility_gradient(Custom(lambda b: k * b["B"] * b["C"]), {"B": qb, "C": qc})
    for g in "BC":
        assert numeric[g] == pytest.approx(exact[g], rel=1e-6)


def test_custom_gradient_at_boundary_stays_non_negative():
    seen = []

    def ev(b):
        seen.append(min(b.values()))
        return math.sqrt(b["B"]) + b["C"]

    utility_gradient(Custom(ev), {"B": 0.0, "C": 1.0})
    assert min(seen) >= 0.0


@given(k=st.floats(1e-3, 1e3), qb=st.floats(0, 1e4), qc=st.floats(0, 1e4))
def test_utility_symmetric_in_goods(k, qb, qc):
    spec = CobbDouglas(k)
    assert utility(spec, {"B": qb, "C": qc}) == utility(spec, {"B": qc, "C": qb})


def test_trajectory_invariants():
    t = Trajectory([0.0, 1.0, 2.0], {"Q_B": [0, 1, 2]})
    assert len(t) == 3 and t["Q_B"][2] == 2.0
    with pytest.raises(ValueError):
        t["Q_B"][0] = 5.0
    with pytest.raises(InvalidTrajectory):
        Trajectory([0.0], {})
    with pytest.raises(InvalidTrajectory):
        Trajectory([0.0, 0.0, 1.0], {})
    with pytest.raises(InvalidTrajectory):
        Trajectory([0.0, 1.0], {"Q_B": [0.0]})
    with pytest.raises(InvalidTrajectory):
        Trajectory([0.0, 1.0], {"Q_B": [0.0, np.nan]})
