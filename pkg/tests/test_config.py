import numpy as np
import pytest

from rectifi.config import build_spec, load_config, parse_config, serialize_config
from rectifi.errors import ConfigError
from rectifi.presets import PRESETS
from rectifi.sweep import run_sweep

MINIMAL_TLS = """\
model.id = tls
model.eps_d = -5.4
model.eps_a = -3.8
vibration.omega0 = 0.196
sweep.axis1 = mu_R -2.0 0.0 5
observable.kind = steady_state
"""


def load_text(text, tmp_path, name="sweep.conf"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return load_config(path)


def test_minimal_config_and_documented_defaults(tmp_path):
    spec = load_text(MINIMAL_TLS, tmp_path)
    p = spec.base_params
    assert spec.model_id == "tls"
    assert p.gamma_hyb == 0.7
    assert (p.left.mu, p.right.mu) == (1.0, -1.0)
    assert (p.left.temperature, p.right.temperature) == (2.0, 1.0)
    assert spec.axis1.values == tuple(np.linspace(-2.0, 0.0, 5))
    assert spec.p_floor == 1e-12
    result = run_sweep(spec)
    assert (result.status == "ok").all()


def test_comments_and_blank_lines(tmp_path):
    text = "# a comment\n\n" + MINIMAL_TLS.replace(
        "model.id = tls", "model.id = tls   # trailing comment")
    spec = load_text(text, tmp_path)
    assert spec.model_id == "tls"


def test_unknown_key_suggests_nearest(tmp_path):
    text = MINIMAL_TLS + "vibration.omega = 0.1\n"
    with pytest.raises(ConfigError, match=r"line 7.*vibration\.omega0"):
        load_text(text, tmp_path)


def test_duplicate_key_reports_both_lines(tmp_path):
    text = MINIMAL_TLS + "model.eps_d = -5.0\n"
    with pytest.raises(ConfigError, match="duplicate key.*line 2"):
        load_text(text, tmp_path)


def test_malformed_line_number(tmp_path):
    text = "model.id = tls\nnot a key value pair\n"
    with pytest.raises(ConfigError, match="line 2"):
        load_text(text, tmp_path)


def test_missing_value(tmp_path):
    with pytest.raises(ConfigError, match="no value"):
        load_text("model.id =\n", tmp_path)


def test_bad_float_reports_line(tmp_path):
    text = MINIMAL_TLS.replace("-5.4", "minus five")
    with pytest.raises(ConfigError, match="line 2.*model.eps_d"):
        load_text(text, tmp_path)


def test_missing_required_keys(tmp_path):
    with pytest.raises(ConfigError, match="missing required"):
        load_text("model.id = tls\n", tmp_path)


def test_negative_temperature_names_invariant(tmp_path):
    text = MINIMAL_TLS + "leads.T_L = -1\n"
    with pytest.raises(ConfigError, match=r"leads\.T_L.*temperature must be > 0"):
        load_text(text, tmp_path)


def test_model_mismatched_key(tmp_path):
    text = MINIMAL_TLS + "model.gamma_L = 1.0\n"
    with pytest.raises(ConfigError, match="model.gamma_L is not valid"):
        load_text(text, tmp_path)
    text2 = MINIMAL_TLS.replace("model.id = tls", "model.id = multilevel")
    text2 += "model.gamma_hyb = 0.7\n"
    with pytest.raises(ConfigError, match="model.gamma_hyb is not valid"):
        load_text(text2, tmp_path)


def test_bad_model_id(tmp_path):
    with pytest.raises(ConfigError, match="model.id must be"):
        load_text(MINIMAL_TLS.replace("= tls", "= spinboson"), tmp_path)


def test_axis_formats(tmp_path):
    base = MINIMAL_TLS.replace("sweep.axis1 = mu_R -2.0 0.0 5\n", "")
    spec = load_text(base + "sweep.axis1 = omega0 list 0.091,0.139,0.196\n",
                     tmp_path)
    assert spec.axis1.values == (0.091, 0.139, 0.196)
    spec = load_text(base + "sweep.axis1 = T_R 0.1 1.0 4 log\n", tmp_path)
    assert spec.axis1.values == tuple(np.geomspace(0.1, 1.0, 4))
    spec = load_text(base + "sweep.axis1 = mu_R -1.0 -1.0 1\n", tmp_path)
    assert spec.axis1.values == (-1.0,)


def test_axis_format_errors(tmp_path):
    base = MINIMAL_TLS.replace("sweep.axis1 = mu_R -2.0 0.0 5\n", "")
    cases = {
        "sweep.axis1 = mu_R -2.0 0.0\n": "expected",
        "sweep.axis1 = mu_R 0.0 -2.0 5\n": "min must be < max",
        "sweep.axis1 = mu_R -2.0 0.0 0\n": "count must be >= 1",
        "sweep.axis1 = T_R -1.0 1.0 5 log\n": "log spacing requires min > 0",
        "sweep.axis1 = mu_R -2.0 0.0 5 lin\n": "trailing token",
        "sweep.axis1 = mu_R list\n": "expected",
    }
    for line, match in cases.items():
        with pytest.raises(ConfigError, match=match):
            load_text(base + line, tmp_path)


def test_time_grid_keys(tmp_path):
    base = MINIMAL_TLS.replace("observable.kind = steady_state",
                               "observable.kind = populations")
    spec = load_text(base + "time.min = 0\ntime.max = 10\ntime.count = 11\n",
                     tmp_path)
    assert spec.time_grid == tuple(np.linspace(0.0, 10.0, 11))
    spec = load_text(base + "time.list = 0.0,0.5,2.0\n", tmp_path)
    assert spec.time_grid == (0.0, 0.5, 2.0)
    with pytest.raises(ConfigError, match="go together"):
        load_text(base + "time.min = 0\n", tmp_path)
    with pytest.raises(ConfigError, match="conflicts"):
        load_text(base + "time.list = 0,1\ntime.min = 0\ntime.max = 1\n"
                  "time.count = 2\n", tmp_path)
    with pytest.raises(ConfigError, match="requires a time grid"):
        load_text(base, tmp_path)


def test_p0_key(tmp_path):
    base = MINIMAL_TLS.replace("observable.kind = steady_state",
                               "observable.kind = populations")
    spec = load_text(base + "time.list = 0.0,1.0\nmodel.p0 = 0.25,0.75\n",
                     tmp_path)
    assert spec.p0 == (0.25, 0.75)


def test_numerics_keys(tmp_path):
    text = MINIMAL_TLS + ("numerics.fd_step = 1e-5\nnumerics.p_floor = 1e-10\n"
                          "numerics.saturation_slope = 1e-2\n")
    spec = load_text(text, tmp_path)
    assert spec.diff_step == 1e-5
    assert spec.p_floor == 1e-10
    assert spec.saturation_slope == 1e-2


def test_parse_config_is_pure():
    entries = parse_config("model.id = tls\n")
    assert entries == {"model.id": ("tls", 1)}


def test_missing_file():
    with pytest.raises(ConfigError, match="cannot read"):
        load_config("/nonexistent/sweep.conf")


@pytest.mark.parametrize("preset_id", ["fig1b", "fig4i", "fig5d"])
def test_preset_round_trip_bit_identical(preset_id, tmp_path):
    preset = PRESETS[preset_id]
    text = serialize_config(preset.spec)
    path = tmp_path / f"{preset_id}.conf"
    path.write_text(text, encoding="utf-8")
    reloaded = load_config(path)
    assert reloaded == preset.spec
    a = run_sweep(preset.spec)
    b = run_sweep(reloaded)
    assert np.array_equal(a.values, b.values)
    assert (a.status == b.status).all()


def test_serialize_arbitrary_spec_round_trip(tmp_path):
    spec = build_spec({
        "model.id": "multilevel",
        "model.eps_d": -5.4,
        "model.eps_a": -3.8,
        "vibration.omega0": 0.091,
        "vibration.t_vib": 0.8,
        "sweep.axis1": _axis("omega0 0.05 1.0 7"),
        "sweep.axis2": _axis("T_R 0.5 2.0 3"),
        "observable.kind": "fisher",
        "observable.theta": "omega0",
    })
    path = tmp_path / "round.conf"
    path.write_text(serialize_config(spec), encoding="utf-8")
    assert load_config(path) == spec


def _axis(raw):
    from rectifi.config import _parse_axis
    return _parse_axis(raw)
