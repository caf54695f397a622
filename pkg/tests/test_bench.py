import filecmp
from pathlib import Path

import pytest

from obcm.bench import (
    CSV_MAGIC,
    AlgorithmSpec,
    SuiteConfig,
    compare_algorithms,
    emit_convergence,
    geometric_grid,
    load_config,
    read_column,
    run_suite,
    solve,
)
from obcm.crossings import build_cross_table, pairwise_lower_bound
from obcm.errors import FormatError, ParameterError
from obcm.evolutionary import RunTrace
from obcm.instance import Ordering, generate_random, write_instance


def specs(*names):
    return [AlgorithmSpec(n, n) for n in names]


def small_config(tmp_path=None, **kw):
    base = dict(algorithms=specs("barycenter", "rls-jump"), n1=8, n2=8, p=0.3, count=5,
                master_seed=11, output_dir=tmp_path)
    base.update(kw)
    return SuiteConfig(**base)


def test_small_suite_structure(tmp_path):
    report = run_suite(small_config(tmp_path))
    assert len(report.rows) == 10
    for row in report.rows:
        assert row.reference_kind == "exact"
        assert row.gap >= 0
        assert row.lower_bound <= row.reference <= row.final_crossings
    assert (tmp_path / "results.csv").read_text().startswith(CSV_MAGIC + "\n")
    traces = sorted(p.name for p in (tmp_path / "traces").iterdir())
    assert len(traces) == 10
    assert "rnd0000_rls-jump_0.trace.csv" in traces


def _deterministic_files(root):
    return sorted(p.relative_to(root) for p in Path(root).rglob("*.csv") if p.name != "timings.csv")


def test_same_seed_same_bytes(tmp_path):
    run_suite(small_config(tmp_path / "a"))
    run_suite(small_config(tmp_path / "b"))
    files = _deterministic_files(tmp_path / "a")
    assert files == _deterministic_files(tmp_path / "b")
    for rel in files:
        assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes()


def test_different_seed_differs(tmp_path):
    run_suite(small_config(tmp_path / "a"))
    run_suite(small_config(tmp_path / "b", master_seed=12))
    assert not filecmp.cmp(tmp_path / "a" / "results.csv", tmp_path / "b" / "results.csv", shallow=False)


def test_best_known_reference_for_large_instances():
    config = small_config(None, n1=25, n2=25, count=2, exact_cap=20,
                          algorithms=specs("barycenter", "median", "sifting", "jsrls"))
    report = run_suite(config)
    for row in report.rows:
        assert row.reference_kind == "best-known"
        assert row.gap >= 0
    for inst in {r.instance for r in report.rows}:
        rows = [r for r in report.rows if r.instance == inst]
        assert min(r.final_crossings for r in rows) == rows[0].reference
        assert rows[0].lower_bound <= rows[0].reference


def test_all_twelve_algorithms_run():
    names = ["barycenter", "median", "sifting", "rls-swap", "rls-exchange", "rls-jump",
             "ea-swap", "ea-exchange", "ea-jump", "jfirls", "jrirls", "jsrls"]
    report = run_suite(small_config(None, algorithms=specs(*names), count=2))
    assert {r.algorithm for r in report.rows} == set(names)
    assert all(r.gap >= 0 for r in report.rows)


def test_searches_share_start_ordering():
    report = run_suite(small_config(None, algorithms=specs("rls-swap", "rls-jump"), count=1))
    traces = list(report.traces.values())
    assert traces[0].events[0] == traces[1].events[0]


def test_instance_directory(tmp_path):
    d = tmp_path / "inst"
    d.mkdir()
    for k in range(3):
        write_instance(generate_random(6, 7, 0.4, k), d / f"g{k}.obcm")
    report = run_suite(SuiteConfig(algorithms=specs("median"), instance_dir=d))
    assert [r.instance for r in report.rows] == ["g0", "g1", "g2"]


def test_config_validation():
    with pytest.raises(ParameterError):
        small_config(None, algorithms=specs("nagamochi"))
    with pytest.raises(ParameterError):
        small_config(None, count=0)
    with pytest.raises(ParameterError):
        SuiteConfig.from_mapping({"algorithms": ["median"], "bogus": 1})
    with pytest.raises(ParameterError):
        SuiteConfig.from_mapping({"algorithms": [{"label": "x"}]})


def test_load_yaml_config(tmp_path):
    path = tmp_path / "suite.yaml"
    path.write_text(
        "instances: {n1: 9, n2: 7, p: 0.4, count: 3}\n"
        "master_seed: 5\n"
        "repetitions: 2\n"
        "stop: {stagnation_exponent: 1.2}\n"
        "algorithms:\n"
        "  - median\n"
        "  - {name: rls-jump, label: jump-long, stagnation_exponent: 2.0}\n"
        "output: out\n"
    )
    config = load_config(path)
    assert (config.n1, config.n2, config.count, config.repetitions) == (9, 7, 3, 2)
    assert config.output_dir == tmp_path / "out"
    assert config.algorithms[0].stagnation_exponent == 1.2
    assert config.algorithms[1] == AlgorithmSpec("rls-jump", "jump-long", 2.0, None)
    report = run_suite(config)
    assert len(report.rows) == 3 * 2 * 2
    bad = tmp_path / "bad.yaml"
    bad.write_text("algorithms: [median\n")
    with pytest.raises(FormatError):
        load_config(bad)


def trace(name, events, generations=None):
    return RunTrace(name, 0, events, Ordering(()), events[-1][1],
                    generations or events[-1][0], 0, 0)


def test_convergence_step_interpolation():
    rows = emit_convergence([("i", 3, trace("a", [(1, 10), (5, 3)]))], grid=[1, 2, 4, 8])
    assert [r[2] for r in rows] == [7, 7, 7, 0]
    assert [r[0] for r in rows] == [1, 2, 4, 8]


def test_convergence_flat_at_reference():
    runs = [("i", 4, trace("a", [(0, 4)], 100)), ("j", 2, trace("a", [(0, 2)], 100))]
    assert all(r[2] == 0 and r[3] == 0 for r in emit_convergence(runs))


def test_convergence_averages_and_grid():
    runs = [("i", 0, trace("a", [(0, 6), (3, 2)])), ("j", 1, trace("a", [(0, 5), (2, 1)]))]
    rows = emit_convergence(runs)
    assert [r[0] for r in rows] == [1, 2, 4]
    assert rows[0][2] == pytest.approx(5.0) and rows[0][3] == pytest.approx(1.0)
    assert rows[1][2] == pytest.approx(3.0)
    assert rows[2][2] == pytest.approx(1.0)
    assert geometric_grid(1000)[-1] == 1024


def test_convergence_mismatched_reference():
    runs = [("i", 3, trace("a", [(0, 5)])), ("i", 2, trace("b", [(0, 5)]))]
    with pytest.raises(ParameterError):
        emit_convergence(runs)
    with pytest.raises(ParameterError):
        emit_convergence([("i", 9, trace("a", [(0, 5)]))])


def test_compare_algorithms():
    report = run_suite(small_config(None, algorithms=specs("rls-swap", "jsrls", "median"), count=8))
    assert compare_algorithms(report, "jsrls", "jsrls").p_two_sided == 1.0
    r = compare_algorithms(report, "jsrls", "rls-swap")
    assert 0 <= r.p_less <= 1
    with pytest.raises(ParameterError):
        compare_algorithms(report, "jsrls", "barycenter")


def test_solve_dispatch(e2):
    t = build_cross_table(e2)
    assert solve("exact", e2, t).final_crossings == 0
    assert solve("sifting", e2, t).final_crossings == 0
    assert solve("jsrls", e2, t, seed=3).final_crossings == 0
    with pytest.raises(ParameterError):
        solve("nope", e2, t)


def test_read_column(tmp_path):
    run_suite(small_config(tmp_path))
    gaps = read_column(tmp_path / "results.csv", "gap")
    assert len(gaps) == 10 and min(gaps) >= 0
    with pytest.raises(FormatError):
        read_column(tmp_path / "results.csv", "nope")
