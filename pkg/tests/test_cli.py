import xml.etree.ElementTree as ET

import pytest

from densecov.cli import _parse_tdb, main


def run_cli(*argv):
    return main(list(argv))


def read(path):
    return path.read_text()


def test_parse_tdb():
    assert _parse_tdb("-10:20:10") == [-10.0, 0.0, 10.0, 20.0]
    assert _parse_tdb("5") == [5.0]
    assert _parse_tdb("-3") == [-3.0]
    with pytest.raises(ValueError):
        _parse_tdb("0:10:0")
    with pytest.raises(ValueError):
        _parse_tdb("10:0:1")
    with pytest.raises(ValueError):
        _parse_tdb("1:2:3:4")


def test_coverage_csv(tmp_path):
    out = tmp_path / "cov.csv"
    rc = run_cli("coverage", "--dim", "3d", "--a0", "3.3", "--a1", "5",
                 "--rc", "0.4", "--lambda", "10", "--sigma2", "1",
                 "--tdb", "-10:20:1", "--csv", str(out))
    assert rc == 0
    lines = read(out).splitlines()
    assert lines[0] == "t_db,pc_sinr,pc_sir,pc_snr"
    assert len(lines) == 1 + 31
    assert read(out).endswith("\n")
    # byte-for-byte determinism
    out2 = tmp_path / "cov2.csv"
    run_cli("coverage", "--dim", "3d", "--a0", "3.3", "--a1", "5",
            "--rc", "0.4", "--lambda", "10", "--sigma2", "1",
            "--tdb", "-10:20:1", "--csv", str(out2))
    assert read(out) == read(out2)


def test_simulate_deterministic_across_workers(tmp_path):
    common = ["simulate", "--trials", "2000", "--seed", "7", "--eps", "0.01",
              "--tdb", "-5:15:5"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(*common, "--workers", "1", "--csv", str(a)) == 0
    assert run_cli(*common, "--workers", "3", "--csv", str(b)) == 0
    assert read(a) == read(b)
    assert read(a).splitlines()[0] == "t_db,p_hat,ci"


def test_compare_pass_and_fail(tmp_path):
    common = ["compare", "--trials", "3000", "--seed", "2", "--eps", "0.01",
              "--tdb", "0:10:5", "--csv", str(tmp_path / "c.csv")]
    assert run_cli(*common) == 0
    body = read(tmp_path / "c.csv")
    assert body.splitlines()[0] == "t_db,pc_analytic,p_hat,ci_half_width,agree"
    assert ",pass" in body and ",fail" not in body
    # a negative slack makes the tolerance unattainable
    assert run_cli(*common, "--slack", "-1") == 1


def test_sweep_csv(tmp_path):
    out = tmp_path / "sw.csv"
    rc = run_cli("sweep", "--a0", "2.5", "--a1", "4", "--tdb", "0",
                 "--lam-min", "1", "--lam-max", "10", "--per-decade", "4",
                 "--csv", str(out))
    assert rc == 0
    lines = read(out).splitlines()
    assert lines[0].startswith("#")
    assert lines[1] == "lambda,value"
    lams = [float(line.split(",")[0]) for line in lines[2:]]
    assert lams == sorted(lams) and lams[0] == 1.0 and lams[-1] == 10.0


def test_throughput_csv(tmp_path):
    out = tmp_path / "tp.csv"
    assert run_cli("throughput", "--tdb", "0", "--csv", str(out)) == 0
    lines = read(out).splitlines()
    assert lines[0] == "t_db,throughput"
    assert len(lines) == 2


def test_svg_output(tmp_path):
    svg = tmp_path / "cov.svg"
    run_cli("coverage", "--tdb", "-10:10:5", "--csv", str(tmp_path / "c.csv"),
            "--svg", str(svg))
    root = ET.parse(svg).getroot()
    assert root.tag.endswith("svg")
    body = read(svg)
    assert "polyline" in body and "script" not in body


def test_figure_preset(tmp_path):
    csv, svg = tmp_path / "f2.csv", tmp_path / "f2.svg"
    assert run_cli("figure", "2", "--csv", str(csv), "--svg", str(svg)) == 0
    lines = read(csv).splitlines()
    assert lines[1] == "lambda,pc_sinr_a0_2.5,pc_sir_a0_2.5,pc_sinr_a0_3.5,pc_sir_a0_3.5"
    ET.parse(svg)
    # the alpha0 = 2.5 SINR curve eventually decreases
    rows = [line.split(",") for line in lines[2:]]
    sinr25 = [float(r[1]) for r in rows]
    assert sinr25[-1] < max(sinr25) / 2.0


def test_config_file_defaults_and_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("a0 = 2.5\na1 = 4\ntdb = 0  # threshold\n")
    out = tmp_path / "o.csv"
    assert run_cli("coverage", "--config", str(cfg), "--csv", str(out)) == 0
    row = read(out).splitlines()[1]
    assert row.startswith("0,")
    # the flag wins over the file
    out2 = tmp_path / "o2.csv"
    assert run_cli("coverage", "--config", str(cfg), "--tdb", "5",
                   "--csv", str(out2)) == 0
    assert read(out2).splitlines()[1].startswith("5,")


def test_config_file_unknown_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bogus = 1\n")
    assert run_cli("coverage", "--config", str(cfg)) == 2


def test_out_dir_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("DENSECOV_OUT_DIR", str(tmp_path / "outputs"))
    assert run_cli("coverage", "--tdb", "0") == 0
    assert (tmp_path / "outputs" / "coverage.csv").exists()


def test_invalid_model_is_a_clean_error(capsys):
    # alpha1 <= d: divergent interference reported, not a traceback
    assert run_cli("coverage", "--dim", "3d", "--a1", "2.5", "--tdb", "0") == 2
    assert "error" in capsys.readouterr().err
