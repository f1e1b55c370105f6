import json
import math

import pytest

from gmqaoa.cli import main
from gmqaoa.hubo import HuboInstance, load_instance, save_instance

FAST = ["--beta-points", "8", "--gamma-points", "12", "--refine-evals", "30", "--multistart", "1"]


def test_gen_sk(tmp_path, capsys):
    assert main(["gen", "sk", "--n", "6", "--d", "2", "--count", "3", "--seed", "7", "--out", str(tmp_path)]) == 0
    files = sorted(tmp_path.glob("instance_*.json"))
    assert len(files) == 3
    assert all(len(load_instance(f).terms) == 15 for f in files)
    assert len(capsys.readouterr().out.splitlines()) == 3


def test_gen_maxcut_bound(tmp_path):
    assert main(["gen", "maxcut", "--n", "4", "--d", "3", "--count", "1", "--seed", "1", "--out", str(tmp_path)]) == 0
    assert len(load_instance(tmp_path / "instance_0.json").terms) <= 10


def test_gen_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        main(["gen", "sk", "--n", "5", "--d", "3", "--count", "2", "--seed", "3", "--out", str(out)])
    for f in a.iterdir():
        assert f.read_bytes() == (b / f.name).read_bytes()


def test_gen_bad_order(tmp_path):
    assert main(["gen", "sk", "--n", "4", "--d", "9", "--out", str(tmp_path)]) == 1


def test_usage_errors():
    assert main([]) == 1
    assert main(["frobnicate"]) == 1


@pytest.fixture
def instance_file(tmp_path):
    main(["gen", "sk", "--n", "5", "--d", "3", "--count", "1", "--seed", "2", "--out", str(tmp_path)])
    return str(tmp_path / "instance_0.json")


def test_run_depth_zero(instance_file):
    assert main(["run", instance_file, "--method", "gm", "--depth", "0"]) == 1


def test_run_missing_file(tmp_path):
    assert main(["run", str(tmp_path / "nope.json"), "--method", "gm", "--depth", "1"]) == 2


def test_run_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(["run", str(p), "--method", "gm", "--depth", "1"]) == 2


def test_run_gmc_flat_instance(tmp_path):
    p = tmp_path / "flat.json"
    save_instance(HuboInstance(2, 2, ()), p)
    assert main(["run", str(p), "--method", "gmc", "--depth", "2"]) == 3


def test_run_gm_and_gma_share_e_min(instance_file, capsys):
    outs = []
    for method in ("gm", "gma"):
        assert main(["run", instance_file, "--method", method, "--depth", "2", *FAST]) == 0
        outs.append(json.loads(capsys.readouterr().out))
    assert outs[0]["e_min"] == outs[1]["e_min"]
    for o in outs:
        assert {"betas", "gammas", "p_success", "e_min", "sigma2", "e_min_est"} <= set(o)
        assert len(o["p_success"]) == 2


def test_angles(capsys):
    assert main(["angles", "--n", "10", "--sigma2", "1", "--depth", "1"]) == 0
    first = capsys.readouterr().out
    rec = json.loads(first)
    assert len(rec["betas"]) == 1 and rec["objective"] >= 2.0 ** -10
    assert rec["mode"] == "paper" and rec["source"] == "analytic"
    assert main(["angles", "--n", "10", "--sigma2", "1", "--depth", "1"]) == 0
    assert capsys.readouterr().out == first


def test_angles_ambiguous(instance_file):
    assert main(["angles", "--n", "5", "--sigma2", "1", "--instance", instance_file, "--depth", "1"]) == 1


def test_angles_from_instance(instance_file, capsys):
    assert main(["angles", "--instance", instance_file, "--depth", "2", "--mode", "exact-cf"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["n"] == 5 and rec["mode"] == "exact-cf"


def _sweep_config(path, **kw):
    cfg = {"problem": "SK", "n_list": [4], "d_list": [2], "instances": 1, "max_depth": 1,
           "methods": ["XM", "GM", "GMa", "GMc"], "seed": 1}
    cfg.update(kw)
    path.write_text(json.dumps(cfg, indent=2) + "\n")
    return path


def test_sweep_smoke(tmp_path):
    import time
    cfg = _sweep_config(tmp_path / "cfg.json")
    out = tmp_path / "res"
    t0 = time.perf_counter()
    assert main(["sweep", str(cfg), "--out", str(out)]) == 0
    assert time.perf_counter() - t0 < 1.0
    assert sorted(p.name for p in out.iterdir()) == ["fig2.csv", "results.csv", "results.json"]
    data = json.loads((out / "results.json").read_text())
    assert data["config_text"] == cfg.read_text()


def test_sweep_deterministic(tmp_path):
    cfg = _sweep_config(tmp_path / "cfg.json", max_depth=3, instances=2)
    for name in ("a", "b"):
        assert main(["sweep", str(cfg), "--out", str(tmp_path / name)]) == 0
    for f in (tmp_path / "a").iterdir():
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_sweep_bad_config(tmp_path):
    cfg = _sweep_config(tmp_path / "cfg.json", problem="Potts")
    assert main(["sweep", str(cfg), "--out", str(tmp_path / "r")]) == 1


def test_report(tmp_path):
    cfg = _sweep_config(tmp_path / "cfg.json", max_depth=3, n_list=[4, 5])
    res = tmp_path / "res"
    main(["sweep", str(cfg), "--out", str(res)])
    for fig in ("fig2", "fig3", "fig4", "fig5", "fig6"):
        assert main(["report", str(res), "--figure", fig, "--svg"]) == 0
        assert (res / f"{fig}.svg").exists()
    lines = (res / "fig2.csv").read_text().splitlines()
    assert len(lines) == 1 + 3 * 2 * 2
    before = (res / "fig4.csv").read_bytes()
    main(["report", str(res), "--figure", "fig4"])
    assert (res / "fig4.csv").read_bytes() == before


def test_report_missing_method(tmp_path, capsys):
    cfg = _sweep_config(tmp_path / "cfg.json", methods=["GM", "GMc"])
    res = tmp_path / "res"
    assert main(["sweep", str(cfg), "--out", str(res)]) == 0
    assert main(["report", str(res), "--figure", "fig3"]) == 1
    assert "XM" in capsys.readouterr().err
