"""End-to-end experiment pipeline and table reproduction."""

from __future__ import annotations

import contextlib
import csv
import dataclasses
import io
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .arnoldi import ArnoldiDecomposition, arnoldi
from .discrepancy import (
    DiscrepancyConfig,
    DiscrepancySpectrum,
    build_spectrum,
    feasibility_check,
    solve_alpha,
)
from .errors import ArnoldiTikhonovError, InfeasibleError, InvalidInputError
from .lowrank import GapMethod, LowRankApproximation, approximation_gap, lowrank_approximation
from .numerics import DEFAULT_POWER_SEED, Weight, as_weight, weighted_norm
from .problems import NoisyData, ProblemKind, TestProblem, add_noise, make_problem
from .tikhonov import RegularizedSolution, relative_error, solve_full, solve_reduced

__all__ = [
    "ExperimentOptions",
    "ExperimentRecord",
    "ExperimentResult",
    "RECORD_FIELDS",
    "TABLES",
    "TableSpec",
    "run_pipeline",
    "run_experiment",
    "run_table",
    "reproduce_table",
    "records_to_csv",
    "emit_profile",
    "thread_count",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentOptions:
    """Knobs of a single run.

    ``E=None`` selects ``3 ||x_n||`` in the norm of ``weight``; the noise
    bound is always ``nu ||y_n||`` in that norm. ``singular_values_only``
    stops after the SVD of H, leaving the gap, alpha and errors as NaN.
    """

    weight: Weight = Weight.EUCLIDEAN
    gap_method: GapMethod = GapMethod.SPECTRAL
    E: Optional[float] = None
    C: float = 1.0
    skip_full: bool = False
    breakdown_tol: float = 1e-12
    allow_breakdown: bool = False
    rank_tol: float = 1e-12
    power_tol: float = 1e-6
    power_max_iter: int = 5000
    power_seed: int = DEFAULT_POWER_SEED
    alpha_tol: float = 1e-10
    cg_tol: float = 1e-12
    strict_feasibility: bool = True
    singular_values_only: bool = False


@dataclass(frozen=True)
class ExperimentRecord:
    problem: str
    n: int
    ell: int
    nu: float
    seed: int
    weight: str
    gap_method: str
    h_ell: float
    alpha: float
    rel_err_xn: float
    rel_diff_full: float
    sigma_max_H: float
    sigma_min_H: float
    feasible: bool
    runtime_ms: int


RECORD_FIELDS = tuple(f.name for f in dataclasses.fields(ExperimentRecord))


@dataclass
class ExperimentResult:
    """Every intermediate object of one pipeline run."""

    record: ExperimentRecord
    problem: TestProblem
    data: NoisyData
    lowrank: LowRankApproximation
    spectrum: Optional[DiscrepancySpectrum]
    config: Optional[DiscrepancyConfig]
    solution: Optional[RegularizedSolution]
    full_solution: Optional[RegularizedSolution] = None

    @property
    def decomposition(self) -> ArnoldiDecomposition:
        return self.lowrank.dec


@contextlib.contextmanager
def _stage(name):
    try:
        yield
    except ArnoldiTikhonovError as exc:
        if getattr(exc, "stage", None) is None:
            exc.stage = name
            exc.args = (f"[{name}] {exc.args[0]}",) + exc.args[1:] if exc.args else (f"[{name}]",)
        raise


def _record(kind, n, ell, nu, seed, weight, gap_method, h, alpha, rel_err, rel_diff, s, feasible, start):
    return ExperimentRecord(
        problem=ProblemKind(kind).value,
        n=int(n),
        ell=int(ell),
        nu=float(nu),
        seed=int(seed),
        weight=weight.value,
        gap_method=gap_method.value,
        h_ell=float(h),
        alpha=float(alpha),
        rel_err_xn=float(rel_err),
        rel_diff_full=float(rel_diff),
        sigma_max_H=float(s[0]),
        sigma_min_H=float(s[-1]),
        feasible=bool(feasible),
        runtime_ms=int(round(1000 * (time.perf_counter() - start))),
    )


def run_pipeline(
    kind,
    n: int,
    ell: int,
    nu: float,
    seed: int,
    options: Optional[ExperimentOptions] = None,
    problem: Optional[TestProblem] = None,
) -> ExperimentResult:
    """Generate, perturb, reduce, choose alpha, solve and measure.

    If the feasibility condition on the discrepancy target fails,
    :class:`InfeasibleError` is raised when ``options.strict_feasibility``
    is set; otherwise the result carries ``feasible=False`` and NaN for the
    quantities that depend on alpha.
    """
    opts = options or ExperimentOptions()
    weight = as_weight(opts.weight)
    gap_method = GapMethod(opts.gap_method)
    start = time.perf_counter()

    with _stage("generate"):
        if problem is None:
            problem = make_problem(kind, n)
        elif problem.n != n:
            raise InvalidInputError(f"supplied problem has n={problem.n}, expected {n}")
        kind = problem.kind
    with _stage("noise"):
        data = add_noise(problem, nu, seed)
    with _stage("arnoldi"):
        dec = arnoldi(
            problem.A,
            data.y_delta,
            ell,
            weight=weight,
            breakdown_tol=opts.breakdown_tol,
            allow_breakdown=opts.allow_breakdown,
        )
    with _stage("lowrank"):
        L = lowrank_approximation(dec, rank_tol=opts.rank_tol)
    s = L.svd.singular_values
    if opts.singular_values_only:
        record = _record(kind, n, ell, nu, seed, weight, gap_method, math.nan, math.nan, math.nan, math.nan, s, False, start)
        return ExperimentResult(record, problem, data, L, None, None, None)
    with _stage("lowrank"):
        gap = approximation_gap(
            problem.A,
            L,
            gap_method,
            tol=opts.power_tol,
            max_iter=opts.power_max_iter,
            seed=opts.power_seed,
        )
    with _stage("discrepancy"):
        spectrum = build_spectrum(L, data.y_delta)
        E = opts.E if opts.E is not None else 3.0 * weighted_norm(problem.x_exact, weight)
        delta = nu * weighted_norm(problem.y_exact, weight)
        cfg = DiscrepancyConfig(E=E, C=opts.C, delta=delta, h_ell=gap.value, alpha_tol=opts.alpha_tol)
        feasible = feasibility_check(spectrum, cfg)
        if not feasible and opts.strict_feasibility:
            raise InfeasibleError(
                f"E*h + C*delta = {cfg.rhs:.6g} exceeds ||R y|| = {math.sqrt(spectrum.ry_norm_sq):.6g}"
            )
        alpha = solve_alpha(spectrum, cfg) if feasible else math.nan

    solution = full = None
    rel_err = rel_diff = math.nan
    if feasible:
        with _stage("tikhonov"):
            solution = solve_reduced(L, data.y_delta, alpha)
            rel_err = relative_error(solution.x, problem.x_exact)
            if not opts.skip_full:
                full = solve_full(problem.A, data.y_delta, alpha, weight=weight, tol=opts.cg_tol)
                rel_diff = float(np.linalg.norm(solution.x - full.x) / np.linalg.norm(problem.x_exact))

    record = _record(kind, n, ell, nu, seed, weight, gap_method, gap.value, alpha, rel_err, rel_diff, s, feasible, start)
    log.debug("run %s", record)
    return ExperimentResult(
        record=record,
        problem=problem,
        data=data,
        lowrank=L,
        spectrum=spectrum,
        config=cfg,
        solution=solution,
        full_solution=full,
    )


def run_experiment(kind, n, ell, nu, seed, options=None, problem=None) -> ExperimentRecord:
    return run_pipeline(kind, n, ell, nu, seed, options=options, problem=problem).record


# Table reproduction -----------------------------------------------------------


@dataclass(frozen=True)
class TableSpec:
    kind: ProblemKind
    ns: tuple
    ells: tuple
    nus: tuple
    columns: Optional[tuple] = None  # None means every record field
    singular_values_only: bool = False

    def configurations(self):
        return [(n, ell, nu) for nu in self.nus for n in self.ns for ell in self.ells]


_NS = (1000, 2000, 4000)
TABLES = {
    "tab1": TableSpec(ProblemKind.PHILLIPS_NYSTROM, _NS, (20, 30, 40), (1e-2,)),
    "tab2": TableSpec(ProblemKind.PHILLIPS_NYSTROM, _NS, (20, 30, 40), (1e-3,)),
    "tab1b": TableSpec(ProblemKind.PHILLIPS_GALERKIN, _NS, (20, 30, 40), (1e-2,)),
    "tab2b": TableSpec(ProblemKind.PHILLIPS_GALERKIN, _NS, (20, 30, 40), (1e-3,)),
    "tab3": TableSpec(
        ProblemKind.PHILLIPS_NYSTROM,
        _NS,
        (20, 30, 40),
        (1e-2,),
        columns=("n", "ell", "seed", "sigma_max_H", "sigma_min_H"),
        singular_values_only=True,
    ),
    "tab4": TableSpec(ProblemKind.BAART_GALERKIN, _NS, (10,), (1e-2, 1e-3)),
}


def thread_count() -> int:
    value = os.environ.get("KRT_THREADS")
    if value:
        try:
            count = int(value)
        except ValueError:
            raise InvalidInputError(f"KRT_THREADS must be a positive integer, got {value!r}") from None
        if count < 1:
            raise InvalidInputError(f"KRT_THREADS must be a positive integer, got {value!r}")
        return count
    return os.cpu_count() or 1


@dataclass
class _Row:
    config: tuple
    seed: object
    record: Optional[ExperimentRecord] = None
    error: str = ""
    values: dict = field(default_factory=dict)


def run_table(
    table_id: str,
    seeds: Sequence[int],
    options: Optional[ExperimentOptions] = None,
    threads: Optional[int] = None,
    configurations: Optional[Sequence[tuple]] = None,
) -> list:
    """Run every ``(n, ell, nu)`` configuration of a table for every seed.

    Returns a list of ``(config, seed, record_or_None, error_message)``
    sorted by configuration and seed. ``configurations`` restricts the run
    to a subset of the table.
    """
    if table_id not in TABLES:
        raise InvalidInputError(f"unknown table {table_id!r}; choose from {sorted(TABLES)}")
    seeds = list(seeds)
    if not seeds:
        raise InvalidInputError("at least one seed is required")
    spec = TABLES[table_id]
    opts = options or ExperimentOptions()
    if spec.singular_values_only:
        opts = dataclasses.replace(opts, singular_values_only=True)
    opts = dataclasses.replace(opts, strict_feasibility=False)
    configs = list(configurations) if configurations is not None else spec.configurations()

    problems = {}
    for n in sorted({c[0] for c in configs}):
        problems[n] = make_problem(spec.kind, n)

    def job(config, seed):
        n, ell, nu = config
        try:
            return config, seed, run_experiment(spec.kind, n, ell, nu, seed, opts, problem=problems[n]), ""
        except ArnoldiTikhonovError as exc:
            return config, seed, None, f"{type(exc).__name__}: {exc}"

    jobs = [(c, s) for c in configs for s in seeds]
    workers = threads or thread_count()
    if workers == 1:
        results = [job(c, s) for c, s in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda cs: job(*cs), jobs))
    results.sort(key=lambda r: (configs.index(r[0]), r[1]))
    return results


def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    return str(value)


def records_to_csv(records, columns=RECORD_FIELDS, timing: bool = False, error_column: bool = False) -> str:
    """Serialize records as RFC 4180 CSV.

    ``records`` holds :class:`ExperimentRecord` objects or plain dicts.
    ``runtime_ms`` is left blank unless ``timing`` is set so that repeated
    runs produce identical bytes.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    header = list(columns) + (["error"] if error_column else [])
    writer.writerow(header)
    for rec in records:
        row = rec if isinstance(rec, dict) else dataclasses.asdict(rec)
        cells = []
        for col in columns:
            value = row.get(col, "")
            if col == "runtime_ms" and not timing:
                value = ""
            cells.append(_format(value))
        if error_column:
            cells.append(row.get("error", ""))
        writer.writerow(cells)
    return buf.getvalue()


def _median_row(spec: TableSpec, config, records):
    n, ell, nu = config
    row = {"problem": spec.kind.value, "n": n, "ell": ell, "nu": nu, "seed": "median"}
    if records:
        row["weight"] = records[0].weight
        row["gap_method"] = records[0].gap_method
        for name in ("h_ell", "alpha", "rel_err_xn", "rel_diff_full", "sigma_max_H", "sigma_min_H"):
            values = np.array([getattr(r, name) for r in records], dtype=float)
            values = values[~np.isnan(values)]
            row[name] = float(np.median(values)) if values.size else math.nan
        row["feasible"] = all(r.feasible for r in records)
        row["runtime_ms"] = int(np.median([r.runtime_ms for r in records]))
    return row


def reproduce_table(
    table_id: str,
    seeds: Sequence[int],
    options: Optional[ExperimentOptions] = None,
    threads: Optional[int] = None,
    timing: bool = False,
    configurations: Optional[Sequence[tuple]] = None,
) -> str:
    """CSV with one row per (configuration, seed) and a median row after
    each configuration. Failed runs keep their row with an error message."""
    spec = TABLES.get(table_id)
    results = run_table(table_id, seeds, options, threads=threads, configurations=configurations)
    columns = spec.columns or RECORD_FIELDS
    rows = []
    by_config = {}
    for config, seed, record, error in results:
        if record is not None:
            row = dataclasses.asdict(record)
        else:
            n, ell, nu = config
            row = {"problem": spec.kind.value, "n": n, "ell": ell, "nu": nu, "seed": seed}
        row["error"] = error
        rows.append(row)
        by_config.setdefault(config, []).append(record)
        if len(by_config[config]) == len(seeds):
            ok = [r for r in by_config[config] if r is not None]
            median = _median_row(spec, config, ok)
            median["error"] = "" if ok else "all runs failed"
            rows.append(median)
    return records_to_csv(rows, columns=columns, timing=timing, error_column=True)


def emit_profile(kind, n, ell, nu, seed, options: Optional[ExperimentOptions] = None) -> str:
    """CSV with abscissa, exact solution and computed solution."""
    opts = dataclasses.replace(options or ExperimentOptions(), skip_full=True)
    result = run_pipeline(kind, n, ell, nu, seed, opts)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["t", "x_exact", "x_computed"])
    for t, xe, xc in zip(result.problem.t, result.problem.x_exact, result.solution.x):
        writer.writerow([repr(float(t)), repr(float(xe)), repr(float(xc))])
    return buf.getvalue()
