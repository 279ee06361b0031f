import math

import pytest

from chancepareto.experiments import (
    ExperimentConfig,
    derive_seed,
    dumps_config,
    emit_report,
    emit_runs,
    loads_config,
    parse_report,
    run_experiment,
    with_overrides,
)

SMALL = ExperimentConfig(runs=2, budget=1500, graph_n=20, graph_d=3, master_seed=5,
                         beta_grid=(0.5, 0.1, 1e-16))


@pytest.fixture(scope="module")
def report():
    return run_experiment(SMALL)


def test_derive_seed_stable_and_distinct():
    assert derive_seed(0, "GSEMO3D", 0) == derive_seed(0, "GSEMO3D", 0)
    seeds = {derive_seed(0, a, r) for a in ("x", "y") for r in range(50)}
    assert len(seeds) == 100
    assert derive_seed(1, "x", 0) != derive_seed(0, "x", 0)
    assert 0 <= derive_seed(2**64 - 1, "x", 3) < 2**64


def test_config_round_trip():
    assert loads_config(dumps_config(SMALL)) == SMALL


def test_config_errors():
    with pytest.raises(ValueError):
        loads_config("colour = blue\n")
    with pytest.raises(ValueError):
        loads_config("runs 3\n")
    with pytest.raises(ValueError):
        ExperimentConfig(beta_grid=(0.7,))
    with pytest.raises(ValueError):
        ExperimentConfig(algorithms=("GSEMO4D",))
    with pytest.raises(ValueError):
        ExperimentConfig(runs=0)


def test_config_comments_and_lists():
    cfg = loads_config("# demo\nalgorithms = GSEMO3D, SEMO3D  # two\nbeta_grid = 0.1,1e-4\nk = none\n")
    assert cfg.algorithms == ("GSEMO3D", "SEMO3D")
    assert cfg.beta_grid == (0.1, 1e-4)
    assert cfg.k is None


def test_report_is_reproducible(report):
    again = run_experiment(SMALL)
    assert emit_report(report) == emit_report(again)
    assert emit_runs(report) == emit_runs(again)


def test_median_beta_gives_plain_expected_weight(report):
    for per_alg in report.results:
        for r in per_alg:
            assert r.values is not None
            # beta = 0.5 has K = 0, so the value is a sum of integer-valued mu
            assert r.values[0] == round(r.values[0])
            assert r.values[0] <= r.values[1] <= r.values[2]


def test_csv_and_markdown_hold_the_same_cells(report):
    csv_tables = parse_report(emit_report(report, "csv"), "csv")
    md_tables = parse_report(emit_report(report, "markdown"), "markdown")
    assert csv_tables == md_tables
    assert len(csv_tables) == 2
    assert len(csv_tables[0]) == 1 + len(SMALL.beta_grid)
    assert "p_GSEMO2D_vs_GSEMO3D" in csv_tables[0][0]


def test_markdown_bolds_best_mean(report):
    md = emit_report(report, "markdown")
    assert "**" in md


def test_duplicate_algorithm_gives_identical_columns():
    cfg = with_overrides(SMALL, algorithms=("GSEMO3D", "GSEMO3D"), runs=1)
    rep = run_experiment(cfg)
    assert [r.values for r in rep.results[0]] == [r.values for r in rep.results[1]]


def test_empty_algorithm_list():
    rep = run_experiment(with_overrides(SMALL, algorithms=(), runs=1))
    tables = parse_report(emit_report(rep), "csv")
    assert tables[0] == [["beta"]]
    assert tables[1] == [["algorithm", "max_pop_mean", "max_pop_std", "feasible_runs", "infeasible_runs"]]


def test_single_run_std_is_nan():
    rep = run_experiment(with_overrides(SMALL, algorithms=("SEMO3D",), runs=1))
    assert math.isnan(rep.std(0, 0))


def test_parallel_matches_serial(report):
    par = run_experiment(with_overrides(SMALL, n_jobs=2))
    assert emit_report(par) == emit_report(report)


def test_archive_dir(tmp_path):
    cfg = with_overrides(SMALL, algorithms=("GSEMO3D",), runs=1, archive_dir=str(tmp_path))
    run_experiment(cfg)
    assert (tmp_path / "GSEMO3D_run000.txt").exists()


def test_unknown_format(report):
    with pytest.raises(ValueError):
        emit_report(report, "html")
