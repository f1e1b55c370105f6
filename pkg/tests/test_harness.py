import json
import math

import numpy as np
import pytest

from gmqaoa.evt import constant_angles, emin_estimate_quantile
from gmqaoa.harness import (
    ExperimentConfig,
    aggregate_critical,
    critical_depth,
    critical_summary,
    flat_csv,
    fold_angles,
    results_json,
    run_cell,
    run_instance,
    xm_plateau,
)
from gmqaoa.hubo import enumerate_spectrum, generate_sk, sigma_squared
from gmqaoa.report import MissingDataError, figure_csv, figure_svg
from gmqaoa.search import OptBudget
from gmqaoa.simulator import run_circuit, success_probability

FAST = {"beta_points": 8, "gamma_points": 12, "refine_evals": 30, "multistart": 1}


def small_config(**kw):
    base = dict(problem="SK", n_list=(4,), d_list=(2,), instances=3, max_depth=4,
                methods=("XM", "GM", "GMa", "GMc"), seed=5,
                budgets={m: FAST for m in ("XM", "GM", "GMa")})
    base.update(kw)
    return ExperimentConfig(**base)


class TestPlateauAndCritical:
    def test_plateau(self):
        assert xm_plateau([0.1, 0.2, 0.3]) == 0.3
        assert xm_plateau([0.25] * 4) == 0.25
        assert xm_plateau([0.1, 0.4, 0.38, 0.39]) == 0.4
        with pytest.raises(ValueError):
            xm_plateau([])

    def test_critical(self):
        assert critical_depth([0.1, 0.2, 0.5], 0.3) == 3
        assert critical_depth([0.1, 0.2], 0.3) is None
        assert critical_depth([0.31, 0.4], 0.3) == 1
        assert critical_depth([0.3, 0.4], 0.3) == 2

    def test_aggregate_all_equal(self):
        curves = np.array([[0.0] * 6 + [1.0]] * 4)
        s = critical_summary(curves, [0.5] * 4)
        assert s["mean"] == 7 and s["std"] == 0 and s["absent"] == 0

    def test_aggregate_exclusion(self):
        curves = np.array([[0.0] * 4 + [0.9] * 6, [0.0] * 10, [0.0] * 8 + [0.8] * 2])
        s = critical_summary(curves, [0.5] * 3)
        assert s["per_instance"] == [5, None, 9]
        assert s["mean"] == 7 and s["absent"] == 1
        assert s["mean_p"] == pytest.approx(0.85)
        rows = aggregate_critical([{"n": 6, "D": 2, "critical": {"GM": s}}])
        assert rows[0]["mean_depth"] == 7 and rows[0]["absent"] == 1

    def test_aggregate_missing_method(self):
        with pytest.raises(KeyError):
            aggregate_critical([{"n": 6, "D": 2, "critical": {}}], "GMa")


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            small_config(problem="Potts")
        with pytest.raises(ValueError):
            small_config(n_list=(1,))
        with pytest.raises(ValueError):
            small_config(d_list=(1,))
        with pytest.raises(ValueError):
            small_config(methods=("QM",))
        with pytest.raises(ValueError):
            small_config(instances=0)

    def test_round_trip(self):
        cfg = small_config()
        assert ExperimentConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg

    def test_cell_outside_grid(self):
        with pytest.raises(ValueError):
            run_cell(small_config(), 5, 2)


def test_gmc_single_point_is_direct_run():
    cfg = small_config(instances=1, max_depth=1, methods=("GMc",))
    cell = run_cell(cfg, 4, 2)
    inst = generate_sk(4, 2, 5, 0)
    sp = enumerate_spectrum(inst)
    sched = constant_angles(emin_estimate_quantile(math.sqrt(sigma_squared(inst)), 4), 1)
    assert cell["curves"]["GMc"]["mean"] == [success_probability(run_circuit(sp, sched, "GM"), sp)]


def test_gm_curves_monotone_and_bounded():
    cell = run_cell(small_config(max_depth=6), 4, 2)
    gm = np.array([r["curves"]["GM"] for r in cell["instances"]])
    assert np.all(np.diff(gm, axis=1) >= -1e-12)
    for m, c in cell["curves"].items():
        assert len(c["mean"]) == 6
        assert all(0 <= p <= 1 for p in c["mean"])


def test_aggregates_recomputable():
    cell = run_cell(small_config(), 4, 2)
    for m, c in cell["curves"].items():
        per = np.array([r["curves"][m] for r in cell["instances"]])
        assert c["mean"] == per.mean(axis=0).tolist()
        assert c["std"] == per.std(axis=0).tolist()


def test_instance_record_fields():
    rec = run_instance(small_config(), 4, 2, 0)
    assert rec["e_min"] == enumerate_spectrum(generate_sk(4, 2, 5, 0)).e_min
    assert set(rec["curves"]) == {"XM", "GM", "GMa", "GMc"}
    assert all(len(rec["schedules"][m]["betas"]) == 4 for m in rec["schedules"])


def test_workers_do_not_change_results():
    serial = run_cell(small_config(), 4, 2)
    parallel = run_cell(small_config(workers=2), 4, 2)
    assert json.dumps(serial) == json.dumps(parallel)


def test_fold_angles():
    b, g = fold_angles([1.2, 0.3, 3.5], [-0.5, 0.4, 0.2])
    np.testing.assert_allclose(b, [math.pi - 1.2, 0.3, 3.5 - math.pi])
    np.testing.assert_allclose(g, [0.5, 0.4, 0.2])


@pytest.fixture(scope="module")
def cells():
    cfg = small_config(n_list=(4, 5), d_list=(2, 3))
    return [run_cell(cfg, n, d) for d in (2, 3) for n in (4, 5)]


class TestExports:
    def test_flat_csv(self, cells):
        lines = flat_csv(cells).splitlines()
        assert lines[0] == "problem,D,n,instance,method,depth,p_success"
        assert len(lines) == 1 + 4 * 3 * 4 * 4

    def test_fig2_rows(self, cells):
        lines = figure_csv(cells, "fig2").splitlines()
        assert lines[0] == "problem,D,n,method,depth,mean,std"
        assert len(lines) == 1 + 4 * 2 * 4

    @pytest.mark.parametrize("fig", ["fig3", "fig4", "fig5", "fig6"])
    def test_other_figures(self, cells, fig):
        text = figure_csv(cells, fig)
        assert text.count("\n") > 1
        assert figure_svg(cells, fig).startswith("<svg")

    def test_fig3_needs_xm(self, cells):
        stripped = [dict(c, curves={k: v for k, v in c["curves"].items() if k != "XM"}) for c in cells]
        with pytest.raises(MissingDataError, match="XM"):
            figure_csv(stripped, "fig3")

    def test_results_json_deterministic(self, cells):
        cfg = small_config(n_list=(4, 5), d_list=(2, 3))
        assert results_json(cfg, cells, "x") == results_json(cfg, cells, "x")
        data = json.loads(results_json(cfg, cells, "raw text"))
        assert data["config_text"] == "raw text"
