import json

import pytest

from rectifi.cli import main

MINIMAL_CONF = """\
model.id = tls
model.eps_d = -5.4
model.eps_a = -3.8
vibration.omega0 = 0.196
sweep.axis1 = mu_R -2.0 0.0 5
observable.kind = steady_state
"""


def test_rates_both_models(capsys):
    assert main(["rates"]) == 0
    out = capsys.readouterr().out
    assert "[tls]" in out and "[multilevel]" in out
    assert "a_da_plus" in out and "k_DA[0]" in out


def test_steady_table(capsys):
    code = main(["steady", "--model", "tls", "--eps-d", "-5.4",
                 "--eps-a", "-3.8", "--theta", "eps_a"])
    assert code == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[0].startswith("p1 = ")
    assert lines[1].startswith("p2 = ")
    assert lines[2].startswith("I_ss(eps_a) = ")


def test_invalid_theta_exits_one(capsys):
    code = main(["fisher", "--model", "multilevel", "--theta", "gamma_hyb",
                 "--t-max", "5"])
    assert code == 1
    err = capsys.readouterr().err
    assert "gamma_hyb" in err and "valid:" in err


def test_unknown_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["transmogrify"])
    assert info.value.code == 2


def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["rates", "--frobnicate", "1"])
    assert info.value.code == 2
    assert "--frobnicate" in capsys.readouterr().err


def test_unknown_figure_id_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["figure", "fig9z"])
    assert info.value.code == 2
    assert "fig9z" in capsys.readouterr().err


def test_domain_error_exits_one(capsys):
    code = main(["steady", "--model", "tls", "--t-l", "-2.0"])
    assert code == 1
    assert "temperature" in capsys.readouterr().err


def test_evolve_stdout_csv(capsys):
    code = main(["evolve", "--model", "tls", "--t-max", "5",
                 "--t-points", "6"])
    assert code == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[0].startswith("# units: t [1/eV]")
    assert lines[1] == "t,p1,p2"
    assert len(lines) == 2 + 6


def test_evolve_custom_p0(capsys):
    code = main(["evolve", "--model", "tls", "--t-max", "1",
                 "--t-points", "2", "--p0", "0.25,0.75"])
    assert code == 0
    first_row = capsys.readouterr().out.strip().splitlines()[2]
    assert first_row == "0.0,0.25,0.75"


def test_bad_p0_length(capsys):
    code = main(["evolve", "--model", "multilevel", "--t-max", "1",
                 "--p0", "1,0"])
    assert code == 1
    assert "--p0 needs 5" in capsys.readouterr().err


def test_fisher_stdout_csv(capsys):
    code = main(["fisher", "--model", "tls", "--theta", "eps_a",
                 "--t-max", "4", "--t-points", "5"])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[1] == "t,I"
    assert lines[2].startswith("0.0,0.0")


def test_figure_writes_csv_and_meta(tmp_path, capsys):
    out = tmp_path / "fig1b.csv"
    assert main(["figure", "fig1b", "--out", str(out)]) == 0
    captured = capsys.readouterr()
    assert captured.out == ""            # data stream stays clean
    assert "wrote" in captured.err
    header = out.read_text().splitlines()[1]
    assert header == ("t,p1_w0.091,p2_w0.091,p1_w0.139,p2_w0.139,"
                      "p1_w0.196,p2_w0.196")
    meta = json.loads((tmp_path / "fig1b.meta").read_text())
    assert meta["preset"] == "fig1b"
    assert meta["spec"]["model_id"] == "tls"
    assert "rectifi" in meta["versions"]


def test_sweep_from_config(tmp_path, capsys):
    conf = tmp_path / "sweep.conf"
    conf.write_text(MINIMAL_CONF, encoding="utf-8")
    assert main(["sweep", "--config", str(conf)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[1] == "mu_R,p1,p2,status"
    assert len(lines) == 2 + 5
    assert lines[2].endswith(",ok")


def test_sweep_out_file_with_meta(tmp_path):
    conf = tmp_path / "sweep.conf"
    conf.write_text(MINIMAL_CONF, encoding="utf-8")
    out = tmp_path / "result.csv"
    assert main(["sweep", "--config", str(conf), "--out", str(out),
                 "--threads", "2"]) == 0
    assert out.exists() and (tmp_path / "result.meta").exists()


def test_sweep_bad_config_exits_one(tmp_path, capsys):
    conf = tmp_path / "bad.conf"
    conf.write_text("model.id = tls\nmodel.epsd = 1\n", encoding="utf-8")
    assert main(["sweep", "--config", str(conf)]) == 1
    assert "model.eps_d" in capsys.readouterr().err


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert "rectifi" in capsys.readouterr().out
