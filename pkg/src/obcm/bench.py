"""Benchmark suites: instance generation, algorithm runs, CSV reports.

A suite runs every (instance, algorithm, repetition) cell. The cross table is
built once per instance and its build time is reported on its own, never as
part of a run's search time. Seeds are derived from the master seed and the
cell's indices, so a suite is reproducible whatever the worker count.

Output directory layout (every CSV starts with the line ``obcm-bench 1``)::

    results.csv        one row per run
    summary.csv        per-algorithm gap statistics
    comparisons.csv    rank-sum tests for every ordered pair of algorithms
    convergence.csv    mean gap per algorithm on a geometric generation grid
    timings.csv        wall-clock columns (the only non-reproducible file)
    traces/<instance>_<algo>_<rep>.trace.csv
"""

import csv
import io
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import yaml

from . import classic
from .crossings import build_cross_table, crossings_of, pairwise_lower_bound
from .errors import FormatError, ParameterError
from .evolutionary import (
    SCANNING_ALGORITHMS,
    SEARCH_ALGORITHMS,
    RunTrace,
    StopRule,
    run_scanning_rls,
    run_search,
)
from .exact import DP_MAX_N2, exact_dp
from .instance import Ordering, generate_random, random_ordering, read_instance
from .rng import derive_seed
from .stats import ALPHA, wilcoxon_rank_sum

CSV_MAGIC = "obcm-bench 1"
DETERMINISTIC = ("barycenter", "median", "sifting", "exact")
ALGORITHMS = DETERMINISTIC + tuple(SEARCH_ALGORITHMS) + tuple(SCANNING_ALGORITHMS)

RESULT_COLUMNS = (
    "instance", "algorithm", "rep", "seed", "start", "n1", "n2", "m",
    "final_crossings", "reference", "reference_kind", "gap", "lower_bound",
    "generations", "evaluations", "delta_ops", "build_ops",
)


def solve(name, inst, table, seed=0, stop=None, start=None):
    """Run one algorithm by name and return its ``RunTrace``.

    Searches start from ``start`` (a random ordering from ``seed`` if omitted);
    sifting starts from ``start`` or the identity.
    """
    if name not in ALGORITHMS:
        raise ParameterError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}")
    if name in SEARCH_ALGORITHMS or name in SCANNING_ALGORITHMS:
        if stop is None:
            stop = StopRule.stagnation(inst.n2)
        if start is None:
            start = random_ordering(inst.n2, seed)
        if name in SEARCH_ALGORITHMS:
            return run_search(table, SEARCH_ALGORITHMS[name], stop, seed, start, name=name)
        return run_scanning_rls(table, SCANNING_ALGORITHMS[name], stop, seed, start, name=name)

    t0 = time.perf_counter()
    if name == "barycenter":
        ordering = classic.barycenter(inst)
    elif name == "median":
        ordering = classic.median(inst)
    elif name == "sifting":
        ordering = classic.sifting(table, start if start is not None else Ordering.identity(inst.n2))
    else:
        ordering = exact_dp(table)[1]
    value = crossings_of(table, ordering)
    return RunTrace(
        algorithm=name,
        seed=int(seed),
        events=[(0, value)],
        final_ordering=ordering,
        final_crossings=value,
        generations=0,
        evaluations=1,
        delta_ops=0,
        preprocess_seconds=table.build_seconds if name in ("sifting", "exact") else 0.0,
        search_seconds=time.perf_counter() - t0,
    )


@dataclass(frozen=True)
class AlgorithmSpec:
    name: str
    label: str
    stagnation_exponent: float = 1.5
    max_generations: Optional[int] = None

    def stop_rule(self, n2):
        return StopRule.stagnation(n2, self.stagnation_exponent, self.max_generations)


@dataclass
class SuiteConfig:
    algorithms: List[AlgorithmSpec]
    n1: int = 100
    n2: int = 100
    p: float = 0.05
    count: int = 1
    master_seed: int = 0
    instance_dir: Optional[Path] = None
    repetitions: int = 1
    exact_cap: int = 20
    output_dir: Optional[Path] = None
    workers: int = 1

    def __post_init__(self):
        if self.instance_dir is None and self.count < 1:
            raise ParameterError("count must be at least 1")
        if self.repetitions < 1:
            raise ParameterError("repetitions must be at least 1")
        if not self.algorithms:
            raise ParameterError("no algorithms configured")
        if self.exact_cap > DP_MAX_N2:
            raise ParameterError(f"exact_cap cannot exceed {DP_MAX_N2}")
        labels = [a.label for a in self.algorithms]
        if len(set(labels)) != len(labels):
            raise ParameterError("algorithm labels must be unique")
        for spec in self.algorithms:
            if spec.name not in ALGORITHMS:
                raise ParameterError(f"unknown algorithm {spec.name!r}")

    @classmethod
    def from_mapping(cls, data, base=None):
        """Build a config from a parsed YAML mapping (see README for keys)."""
        if not isinstance(data, dict):
            raise ParameterError("config must be a mapping")
        data = dict(data)
        stop = data.pop("stop", {}) or {}
        default_exp = float(stop.get("stagnation_exponent", 1.5))
        default_cap = stop.get("max_generations")
        algos = []
        for entry in data.pop("algorithms", []):
            if isinstance(entry, str):
                entry = {"name": entry}
            if not isinstance(entry, dict) or "name" not in entry:
                raise ParameterError(f"algorithm entry needs a name: {entry!r}")
            algos.append(AlgorithmSpec(
                name=entry["name"],
                label=entry.get("label", entry["name"]),
                stagnation_exponent=float(entry.get("stagnation_exponent", default_exp)),
                max_generations=entry.get("max_generations", default_cap),
            ))
        inst = data.pop("instances", {}) or {}
        kwargs = {}
        if "dir" in inst:
            kwargs["instance_dir"] = _resolve(inst["dir"], base)
        for key in ("n1", "n2", "p", "count"):
            if key in inst:
                kwargs[key] = inst[key]
        for key in ("master_seed", "repetitions", "exact_cap", "workers"):
            if key in data:
                kwargs[key] = data.pop(key)
        if "output" in data:
            kwargs["output_dir"] = _resolve(data.pop("output"), base)
        if data:
            raise ParameterError(f"unknown config keys: {sorted(data)}")
        return cls(algorithms=algos, **kwargs)


def _resolve(path, base):
    path = Path(path)
    if base is not None and not path.is_absolute():
        path = Path(base) / path
    return path


def load_config(path):
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise FormatError(f"invalid YAML: {exc}", path=path) from None
    return SuiteConfig.from_mapping(data, base=path.parent)


@dataclass
class RunRow:
    instance: str
    algorithm: str
    rep: int
    seed: int
    start: str
    n1: int
    n2: int
    m: int
    final_crossings: int
    reference: int
    reference_kind: str
    gap: int
    lower_bound: int
    generations: int
    evaluations: int
    delta_ops: int
    build_ops: int
    preprocess_seconds: float = field(default=0.0, compare=False)
    search_seconds: float = field(default=0.0, compare=False)


@dataclass
class SuiteReport:
    rows: List[RunRow]
    traces: Dict[Tuple[str, str, int], RunTrace]
    algorithms: List[str]

    def values(self, algorithm, column="gap"):
        """Column values for ``algorithm`` ordered by (instance, rep)."""
        if algorithm not in self.algorithms:
            raise ParameterError(f"algorithm {algorithm!r} not in report")
        return [getattr(r, column) for r in self.rows if r.algorithm == algorithm]

    def references(self):
        return {r.instance: r.reference for r in self.rows}

    def summary(self):
        out = []
        for name in self.algorithms:
            gaps = self.values(name)
            finals = self.values(name, "final_crossings")
            out.append({
                "algorithm": name,
                "runs": len(gaps),
                "mean_gap": statistics.fmean(gaps),
                "median_gap": statistics.median(gaps),
                "mean_final": statistics.fmean(finals),
            })
        return out

    def comparisons(self):
        return [(a, b, compare_algorithms(self, a, b))
                for a in self.algorithms for b in self.algorithms if a != b]


def compare_algorithms(report, a, b):
    """Rank-sum test of per-run gaps; ``p_less`` is the evidence that ``a`` is better.

    Gaps are final crossings minus the instance's reference, so instance-level
    differences in crossing numbers cancel before pooling.
    """
    rows_a = [(r.instance, r.rep) for r in report.rows if r.algorithm == a]
    rows_b = [(r.instance, r.rep) for r in report.rows if r.algorithm == b]
    if a not in report.algorithms or b not in report.algorithms:
        missing = a if a not in report.algorithms else b
        raise ParameterError(f"algorithm {missing!r} not in report")
    if rows_a != rows_b:
        raise ParameterError(f"{a!r} and {b!r} were not run on the same cells")
    return wilcoxon_rank_sum(report.values(a), report.values(b))


def geometric_grid(max_generation):
    grid = [1]
    while grid[-1] < max_generation:
        grid.append(grid[-1] * 2)
    return grid


def _best_at(events, g):
    value = events[0][1]
    for gen, v in events:
        if gen > g:
            break
        value = v
    return value


def emit_convergence(runs, grid=None):
    """Average gap-to-reference per algorithm on a generation grid.

    ``runs`` holds ``(instance, reference, trace)`` triples. Each trace's
    best-so-far is read as a step function of the generation. Returns rows
    ``(checkpoint, algorithm, mean_gap, std_gap)`` with population std.
    """
    runs = list(runs)
    if not runs:
        raise ParameterError("no traces given")
    refs = {}
    for inst, ref, trace in runs:
        if refs.setdefault(inst, ref) != ref:
            raise ParameterError(f"traces on instance {inst!r} disagree on the reference")
        if trace.final_crossings < ref:
            raise ParameterError(f"reference {ref} exceeds a result on instance {inst!r}")
    if grid is None:
        grid = geometric_grid(max(max(t.generations, 1) for _, _, t in runs))
    algos = list(dict.fromkeys(t.algorithm for _, _, t in runs))
    out = []
    for g in grid:
        for name in algos:
            gaps = [_best_at(t.events, g) - ref for _, ref, t in runs if t.algorithm == name]
            out.append((g, name, float(np.mean(gaps)), float(np.std(gaps))))
    return out


def _instances(config):
    if config.instance_dir is not None:
        files = sorted(p for p in Path(config.instance_dir).iterdir() if p.is_file())
        if not files:
            raise FormatError("no instance files", path=config.instance_dir)
        return [(p.stem, p) for p in files]
    return [(f"rnd{idx:04d}", idx) for idx in range(config.count)]


def _run_instance(config, index, instance_id, source):
    if isinstance(source, Path):
        inst = read_instance(source)
    else:
        inst = generate_random(config.n1, config.n2, config.p,
                               derive_seed(config.master_seed, index, "instance"))
    table = build_cross_table(inst)
    lower = pairwise_lower_bound(table)
    cells = []
    for spec in config.algorithms:
        for rep in range(config.repetitions):
            seed = derive_seed(config.master_seed, index, spec.label, rep)
            if spec.name in DETERMINISTIC:
                start = Ordering.identity(inst.n2) if spec.name == "sifting" else None
                start_kind = "identity" if start is not None else "none"
            else:
                start = random_ordering(inst.n2, derive_seed(config.master_seed, index, "start", rep))
                start_kind = "random"
            trace = solve(spec.name, inst, table, seed, spec.stop_rule(inst.n2), start)
            cells.append((spec.label, rep, seed, start_kind, trace))
    if inst.n2 <= config.exact_cap:
        reference, kind = exact_dp(table)[0], "exact"
    else:
        reference = min(t.final_crossings for *_, t in cells)
        kind = "best-known"
    rows = []
    traces = {}
    for label, rep, seed, start_kind, t in cells:
        rows.append(RunRow(
            instance=instance_id, algorithm=label, rep=rep, seed=seed, start=start_kind,
            n1=inst.n1, n2=inst.n2, m=inst.m,
            final_crossings=t.final_crossings, reference=reference, reference_kind=kind,
            gap=t.final_crossings - reference, lower_bound=lower,
            generations=t.generations, evaluations=t.evaluations, delta_ops=t.delta_ops,
            build_ops=table.build_ops,
            preprocess_seconds=table.build_seconds, search_seconds=t.search_seconds,
        ))
        traces[(instance_id, label, rep)] = t
    return rows, traces


def _run_instance_task(args):
    return _run_instance(*args)


def run_suite(config, workers=None):
    """Run the suite and, if ``config.output_dir`` is set, write its CSVs."""
    workers = config.workers if workers is None else workers
    tasks = [(config, index, iid, src) for index, (iid, src) in enumerate(_instances(config))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_instance_task, tasks))
    else:
        results = [_run_instance_task(t) for t in tasks]
    rows, traces = [], {}
    for r, t in results:
        rows.extend(r)
        traces.update(t)
    report = SuiteReport(rows, traces, [a.label for a in config.algorithms])
    if config.output_dir is not None:
        write_report(report, config.output_dir)
    return report


def _csv_text(header, rows):
    buf = io.StringIO()
    buf.write(CSV_MAGIC + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _fmt(x):
    return f"{x:.6f}"


def write_report(report, outdir):
    outdir = Path(outdir)
    try:
        (outdir / "traces").mkdir(parents=True, exist_ok=True)
        files = {
            "results.csv": _csv_text(
                RESULT_COLUMNS,
                ([getattr(r, c) for c in RESULT_COLUMNS] for r in report.rows)),
            "summary.csv": _csv_text(
                ("algorithm", "runs", "mean_gap", "median_gap", "mean_final"),
                ([s["algorithm"], s["runs"], _fmt(s["mean_gap"]), _fmt(s["median_gap"]),
                  _fmt(s["mean_final"])] for s in report.summary())),
            "comparisons.csv": _csv_text(
                ("a", "b", "u_statistic", "rank_sum", "p_two_sided", "p_less", "method",
                 "a_better"),
                ([a, b, _fmt(t.u_statistic), _fmt(t.rank_sum), f"{t.p_two_sided:.6g}",
                  f"{t.p_less:.6g}", t.method, int(t.p_less < ALPHA)]
                 for a, b, t in report.comparisons())),
            "convergence.csv": _csv_text(
                ("checkpoint", "algorithm", "mean_gap", "std_gap"),
                ([g, name, _fmt(m), _fmt(s)] for g, name, m, s in emit_convergence(
                    (r.instance, r.reference, report.traces[(r.instance, r.algorithm, r.rep)])
                    for r in report.rows))),
            "timings.csv": _csv_text(
                ("instance", "algorithm", "rep", "preprocess_seconds", "search_seconds"),
                ([r.instance, r.algorithm, r.rep, f"{r.preprocess_seconds:.6f}",
                  f"{r.search_seconds:.6f}"] for r in report.rows)),
        }
        for name, text in files.items():
            (outdir / name).write_text(text, newline="\n")
        for (iid, label, rep), trace in report.traces.items():
            text = _csv_text(("generation", "crossings"), trace.events)
            (outdir / "traces" / f"{iid}_{label}_{rep}.trace.csv").write_text(text, newline="\n")
    except OSError as exc:
        raise OSError(f"{outdir}: cannot write report: {exc}") from exc


def read_column(path, column):
    """Read one numeric column from a CSV, skipping an ``obcm-bench`` version line."""
    path = Path(path)
    lines = path.read_text().splitlines()
    if lines and lines[0].startswith("obcm-bench"):
        lines = lines[1:]
    reader = csv.DictReader(lines)
    if reader.fieldnames is None or column not in reader.fieldnames:
        raise FormatError(f"no column {column!r}", path=path)
    out = []
    for lineno, row in enumerate(reader, start=2):
        try:
            out.append(float(row[column]))
        except (TypeError, ValueError):
            raise FormatError(f"non-numeric {column!r} value", path=path, line=lineno) from None
    return out
