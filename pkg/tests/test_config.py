import pytest
import tomli

from novikov_lab.config import RunConfig
from novikov_lab.errors import UsageError
from novikov_lab.profiles import Gaussian, Peakon, Table


def test_defaults_describe_breaking_run():
    cfg = RunConfig().validate()
    assert isinstance(cfg.u0.profile(), Gaussian)
    assert (cfg.u0.amplitude, cfg.grid.L, cfg.grid.N, cfg.time.dt) == (-1.2, 20.0, 4096, 1e-3)
    assert cfg.analysis.fit_config().theta1 is None


def test_toml_round_trip(tmp_path):
    cfg = RunConfig()
    cfg.set("grid.N", "512")
    cfg.set("u0.kind", "peakon")
    cfg.set("analysis.theta1", "0.05")
    path = tmp_path / "c.toml"
    cfg.write(path)
    back = RunConfig.load(path)
    assert back == cfg
    assert isinstance(back.u0.profile(), Peakon)
    assert back.analysis.fit_config().theta1 == 0.05


def test_echo_is_valid_toml():
    data = tomli.loads(RunConfig().to_toml())
    assert set(data) == {"u0", "grid", "time", "analysis", "compare"}


@pytest.mark.parametrize("data", [
    {"nope": {}},
    {"grid": {"M": 3}},
    {"grid": {"N": 8}},
    {"grid": {"N": 1.5}},
    {"time": {"dt": -1.0}},
    {"time": {"t_end": 0}},
    {"u0": {"kind": "sawtooth"}},
    {"analysis": {"theta1": "soon"}},
    {"grid": 3},
])
def test_invalid_configs_rejected(data):
    with pytest.raises(UsageError):
        RunConfig.from_dict(data)


def test_set_rejects_unknown_keys():
    cfg = RunConfig()
    for key in ("grid.M", "grid", "bogus.N", "u0.profile.x"):
        with pytest.raises(UsageError):
            cfg.set(key, "1")


def test_table_profile():
    cfg = RunConfig.from_dict({"u0": {"kind": "table", "x": [-2, -1, 0, 1, 2],
                                      "u": [0, -0.5, -1, -0.5, 0]}})
    prof = cfg.u0.profile()
    assert isinstance(prof, Table)
    assert prof.value(0.0) == pytest.approx(-1.0)
    assert prof.value(5.0) == 0.0


def test_load_reports_parse_errors(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("[grid\nN = 3")
    with pytest.raises(UsageError):
        RunConfig.load(bad)
