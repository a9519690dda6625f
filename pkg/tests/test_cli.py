import json
from pathlib import Path

import pytest

from fracwave import __version__
from fracwave.cli import main, run
from fracwave.config import ConfigError, build_grid, build_models, load_config, parse_config
from fracwave.io import read_csv, sha256

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

SMALL = """
[model]
family = TreebyCox
a0 = 1.0
gamma = 0.75

[grid]
dr_target = 0.05
r_max_factor = 4
taper = {taper}

[front_speed]
c_f = 1.2 2 4

[nonlocal]
n = 1024
r_max = 20
radii = 3 5
"""


@pytest.fixture
def small_cfg(tmp_path):
    path = tmp_path / "small.cfg"
    path.write_text(SMALL.format(taper="both"))
    return path


def test_unknown_key_is_named(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("[model]\ngama = 0.75\n")
    with pytest.raises(ConfigError, match="gama"):
        load_config(path)


def test_unknown_section_and_bad_value(tmp_path):
    with pytest.raises(ConfigError, match="synthesis"):
        parse_config({"synthesis": {}})
    with pytest.raises(ConfigError, match="a0"):
        parse_config({"model": {"a0": "lots"}})


def test_invalid_model_is_config_error():
    cfg = parse_config({"model": {"family": "TreebyCox", "a0": "1", "gamma": "0.75", "b0": "0.5"}})
    with pytest.raises(ConfigError, match="model"):
        build_models(cfg)


def test_defaults_and_grid():
    cfg = parse_config({"model": {}})
    grid = build_grid(cfg)
    assert grid.taper and grid.dr_target == 0.02
    assert build_models(cfg)["model"].is_lossless


def test_missing_config_exit_status(tmp_path, capsys):
    status = main(["green", str(tmp_path / "nope.cfg"), "-o", str(tmp_path / "out")])
    assert status != 0
    assert "not found" in capsys.readouterr().err


def test_run_missing_config_raises(tmp_path):
    with pytest.raises(ConfigError):
        run("green", tmp_path / "nope.cfg", tmp_path)


def test_green_is_byte_identical_and_rerunnable(small_cfg, tmp_path):
    a, b, c = (tmp_path / x for x in "abc")
    assert main(["green", str(small_cfg), "-o", str(a)]) == 0
    assert main(["green", str(small_cfg), "-o", str(b), "--threads", "3"]) == 0
    assert main(["green", str(a / "manifest.json"), "-o", str(c)]) == 0
    for name in ("green.csv", "green_notaper.csv", "green.json", "manifest.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes() == (c / name).read_bytes()
    manifest = json.loads((a / "manifest.json").read_text())
    assert manifest["schema"] == "fracwave.manifest/1"
    assert manifest["version"] == __version__
    assert manifest["outputs"]["green.csv"] == sha256(a / "green.csv")


def test_csv_format(small_cfg, tmp_path):
    main(["green", str(small_cfg), "-o", str(tmp_path)])
    header, cols, data = read_csv(tmp_path / "green.csv")
    assert cols == ["r", "value", "trunc_err"]
    assert "model" in header and header["units"].startswith("c0-lengths")
    line = (tmp_path / "green.csv").read_text().splitlines()[len(header) + 2]
    assert len(line.split(",")[1].replace("-", "").replace(".", "").split("e")[0]) >= 16


def test_no_taper_flag(small_cfg, tmp_path):
    main(["pressure", str(small_cfg), "-o", str(tmp_path), "--no-taper"])
    assert (tmp_path / "pressure_notaper.csv").exists()
    assert not (tmp_path / "pressure.csv").exists()


def test_output_dir_from_environment(small_cfg, tmp_path, monkeypatch):
    monkeypatch.setenv("FRACWAVE_OUTPUT_DIR", str(tmp_path / "env"))
    assert main(["dispersion", str(small_cfg)]) == 0
    report = json.loads((tmp_path / "env" / "dispersion.json").read_text())
    assert report["schema"] == "fracwave.dispersion/1"


def test_front_speed_reports_both_tapers(small_cfg, tmp_path):
    main(["front-speed", str(small_cfg), "-o", str(tmp_path)])
    report = json.loads((tmp_path / "front_speed.json").read_text())
    assert report["schema"] == "fracwave.front_speed/1"
    assert [r["taper"] for r in report["reports"]] == [True, False]
    _, cols, data = read_csv(tmp_path / "front_speed.csv")
    assert {"tau", "trunc_err", "control_tau", "control_trunc_err"} <= set(cols)
    assert data.shape == (6, len(cols))


def test_compare_families(tmp_path):
    cfg = tmp_path / "families.cfg"
    text = (CONFIGS / "families.cfg").read_text()
    text = text.replace("taper = both", "taper = true\ndr_target = 0.05\nr_max_factor = 4")
    cfg.write_text(text.replace("c_f = 1 2 5 10", "c_f = 1.2 2"))
    assert main(["compare", str(cfg), "-o", str(tmp_path / "out")]) == 0
    report = json.loads((tmp_path / "out" / "compare.json").read_text())
    assert sorted(r["label"] for r in report["reports"]) == ["chen_holm", "lossless", "treeby_cox"]


def test_nonlocal_nonsmooth_pw(tmp_path, small_cfg):
    assert main(["nonlocal", str(small_cfg), "-o", str(tmp_path / "nl")]) == 0
    nl = json.loads((tmp_path / "nl" / "nonlocal.json").read_text())
    assert nl["contrast"]["0.75"]["5"] > 100
    assert main(["nonsmooth", str(CONFIGS / "nonsmooth_symbol.cfg"), "-o", str(tmp_path / "ns")]) == 0
    ns = json.loads((tmp_path / "ns" / "nonsmooth.json").read_text())
    assert ns["schema"] == "fracwave.nonsmooth/1" and abs(ns["slope"] + 0.5) < 0.15
    assert main(["pw-probe", str(CONFIGS / "pw_gamma2.cfg"), "-o", str(tmp_path / "pw")]) == 0
    pw = json.loads((tmp_path / "pw" / "pw_probe.json").read_text())
    assert pw["coefficient_ratio"][-1] == pytest.approx(4.0, rel=0.05)


def test_shipped_configs_parse():
    for path in sorted(CONFIGS.glob("*.cfg")):
        cfg = load_config(path)
        build_models(cfg)
