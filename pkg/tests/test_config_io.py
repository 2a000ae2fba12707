import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crusoe.config import parse_config
from crusoe.core import Trajectory
from crusoe.dynamics import IntegratorConfig
from crusoe.errors import ConfigError, InvalidNumber, MalformedLine, UnknownKey
from crusoe.exchange import ExchangeScenario, simulate_exchange
from crusoe.io import (
    EXCHANGE_HEADER,
    CSVFormatError,
    fmt,
    read_table,
    read_trajectory_csv,
    write_exchange_csv,
    write_svg,
    write_trajectory_csv,
)

DATA = Path(__file__).parent / "data"


def test_parse_canonical():
    cfg = parse_config("E = 100\np_B = 2\np_C = 4\nk = 1\nm_B = 1\nm_C = 1")
    m = cfg.model()
    assert (m.E, m.p_B, m.p_C, m.k, m.m_B, m.m_C, m.Q_B0) == (100, 2, 4, 1, 1, 1, 0)
    ic = cfg.integrator()
    assert (ic.dt, ic.t_end, ic.companion) == (1e-3, 10.0, "symmetric")
    assert cfg["hamiltonian"] == "kinetic_only"


def test_parse_file_with_exchange():
    cfg = parse_config((DATA / "canonical.cfg").read_text())
    s = cfg.scenario()
    assert s.endow_RC == (8.0, 2.0) and s.endow_D == (2.0, 8.0) and s.r == 1.0


def test_parse_errors():
    with pytest.raises(InvalidNumber) as err:
        parse_config("E = banana")
    assert err.value.key == "E"
    with pytest.raises(UnknownKey):
        parse_config("frobnicate = 1")
    with pytest.raises(MalformedLine):
        parse_config("E 100")
    with pytest.raises(MalformedLine):
        parse_config("companion = sideways")
    for raw in ("inf", "nan", "1_0", "0x10"):
        with pytest.raises(InvalidNumber):
            parse_config(f"E = {raw}")


def test_missing_required_keys():
    with pytest.raises(ConfigError):
        parse_config("E = 100").model()
    with pytest.raises(ConfigError):
        parse_config("E = 100").scenario()


def test_comments_and_overrides():
    cfg = parse_config("# header\nE = 100  # budget\n\np_B = 2\np_C = 4\n")
    over = cfg.with_overrides(["E=50", "dt = 0.01", "companion=budget_residual"])
    assert over["E"] == 50.0 and cfg["E"] == 100.0
    assert over.integrator().dt == 0.01
    assert over["companion"] == "budget_residual"
    with pytest.raises(MalformedLine):
        cfg.with_overrides(["E"])
    with pytest.raises(UnknownKey):
        cfg.with_overrides(["zzz=1"])


def test_fmt():
    assert fmt(-0.0) == "0"
    assert fmt(15.803013970713942) == "15.8030139707"
    assert fmt(1e-3) == "0.001"


@settings(max_examples=50, deadline=None)
@given(values=st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=40))
def test_csv_round_trip(tmp_path_factory, values):
    path = tmp_path_factory.mktemp("csv") / "traj.csv"
    t = np.arange(len(values), dtype=float) * 0.1
    tr = Trajectory(t, {"Q_B": values, "Q_C": np.asarray(values) * 0.5})
    write_trajectory_csv(path, tr)
    back = read_trajectory_csv(path)
    assert back.names == ["Q_B", "Q_C"]
    np.testing.assert_allclose(back.times, t, rtol=1e-9, atol=1e-300)
    np.testing.assert_allclose(back["Q_B"], tr["Q_B"], rtol=1e-9, atol=1e-300)


def test_csv_bytes(tmp_path):
    path = tmp_path / "x.csv"
    write_trajectory_csv(path, Trajectory([0.0, 1.0], {"Q_B": [0.0, 2.5], "Q_C": [-0.0, 1.0 / 3.0]}))
    assert path.read_bytes() == b"t,Q_B,Q_C\n0,0,0\n1,2.5,0.333333333333\n"


def test_exchange_csv(tmp_path):
    s = ExchangeScenario(k=1, l=1, r=1, m=1, endow_RC=(8, 2), endow_D=(2, 8))
    tr = simulate_exchange(s, IntegratorConfig(dt=0.01, t_end=1.0))
    write_exchange_csv(tmp_path / "ex.csv", tr)
    table = read_table(tmp_path / "ex.csv")
    assert tuple(table) == EXCHANGE_HEADER
    assert table["QB_RC"][0] == 8.0 and len(table["t"]) == 101


@pytest.mark.parametrize("text", ["", "t,Q_B\n", "t,Q_B\n0,x\n", "t,t\n0,1\n", "t,Q_B\n0,1\n1\n"])
def test_bad_csv(tmp_path, text):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(CSVFormatError):
        read_trajectory_csv(path)


def test_csv_without_time_column(tmp_path):
    path = tmp_path / "nt.csv"
    path.write_text("Q_B\n1\n2\n")
    with pytest.raises(CSVFormatError):
        read_trajectory_csv(path)


def test_svg(tmp_path):
    t = np.linspace(0, 10, 5001)
    tr = Trajectory(t, {"Q_B": 25 * (1 - np.exp(-t)), "Q_C": 12.5 * (1 - np.exp(-4 * t))})
    write_svg(tmp_path / "p.svg", tr, title="canonical", max_points=1000)
    root = ET.parse(tmp_path / "p.svg").getroot()
    ns = "{http://www.w3.org/2000/svg}"
    lines = root.findall(f"{ns}polyline")
    assert len(lines) == 2
    n_pts = len(lines[0].get("points").split())
    assert 1000 <= n_pts <= 1001
    labels = [e.text for e in root.findall(f"{ns}text")]
    assert "Q_B" in labels and "Q_C" in labels and "canonical" in labels
