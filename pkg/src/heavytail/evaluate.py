"""Scoring estimated orders against ground truth and benchmark sweeps.

The score of an order is the count of ancestor/descendant pairs (over
observed nodes, ancestry taken in the full graph) that the order places
backwards. This ancestral-violation metric is this package's surrogate for
intervention-distance style scores; outputs label it as such and never claim
to be an intervention distance.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ._rng import as_rng, derived_seed
from .ease import ease
from .errors import ValidationError
from .estimators import Dataset, EstimatorConfig, coefficient_matrix, resolve_k
from .graph import CausalOrder, Scm
from .simulate import (GridSpec, SimSetting, effective_setting, scenario_scm,
                       scenario_streams, simulate)

METHODS = ("ease_gamma", "ease_psi", "random_order")

RESULT_HEADER = ("scenario_id", "setting", "n", "p", "alpha", "method",
                 "mean_violation_fraction", "se", "mistake_rate", "wall_ms")


@dataclass(frozen=True)
class OrderScore:
    valid: bool
    violations: int
    violation_fraction: float
    ancestral_pairs: int


def score_order(truth: Scm, order: CausalOrder) -> OrderScore:
    """Ancestral-violation score of an order over the truth's observed nodes."""
    observed = frozenset(truth.observed)
    if order.nodes != observed:
        raise ValidationError("order must cover exactly the observed nodes of the truth")
    pairs = truth.dag.ancestral_pairs(observed)
    violations = sum(1 for i, j in pairs if order.position(i) > order.position(j))
    fraction = violations / len(pairs) if pairs else 0.0
    return OrderScore(valid=violations == 0, violations=violations,
                      violation_fraction=fraction, ancestral_pairs=len(pairs))


@dataclass(frozen=True)
class BenchmarkRow:
    scenario_id: str
    setting: str
    n: int
    p: int
    alpha: float
    method: str
    mean_violation_fraction: float
    se: float
    mistake_rate: float
    wall_ms: float

    def as_csv_values(self) -> tuple:
        return (self.scenario_id, self.setting, self.n, self.p, self.alpha, self.method,
                self.mean_violation_fraction, self.se, self.mistake_rate, self.wall_ms)


def _method_order(method: str, data: Dataset, truth: Scm, seed_key) -> CausalOrder:
    if method == "random_order":
        rng = as_rng(derived_seed(*seed_key, 2))
        return CausalOrder(rng.permutation(truth.observed).tolist())
    kind = "gamma" if method == "ease_gamma" else "psi"
    if data.p < 2:
        return CausalOrder(truth.observed)
    config = EstimatorConfig(kind=kind)
    return ease(coefficient_matrix(data, config)).relabel(truth.observed)


def _aggregate(fractions, valids) -> tuple[float, float, float]:
    reps = len(fractions)
    mean = math.fsum(fractions) / reps
    if reps > 1:
        var = math.fsum((f - mean) ** 2 for f in fractions) / (reps - 1)
        se = math.sqrt(var / reps)
    else:
        se = 0.0
    mistake = sum(1 for v in valids if not v) / reps
    return mean, se, mistake


def benchmark(grid: GridSpec, methods=METHODS, reps: int = 50, seed=None,
              threads: int = 1) -> list[BenchmarkRow]:
    """Per-cell aggregation of method scores over replicates.

    Replicate streams derive from scenario_streams: shared across settings
    (so rank-invariant settings produce identical score columns) and, for the
    SCM draw, across sample sizes (so trends in n are paired). Aggregation
    runs in fixed replicate order regardless of ``threads``.
    """
    if reps < 1:
        raise ValidationError(f"reps must be >= 1, got {reps}")
    methods = tuple(methods)
    for m in methods:
        if m not in METHODS:
            raise ValidationError(f"unknown method {m!r}; expected subset of {METHODS}")

    def run_rep(task) -> dict[str, tuple[float, bool, float]]:
        setting, n, p, alpha, rep = task
        scm_seed, data_seed = scenario_streams(seed, n, p, alpha, rep)
        truth = scenario_scm(p, alpha, setting, scm_seed)
        result = simulate(truth, effective_setting(truth, setting), n, data_seed)
        out = {}
        for method in methods:
            start = time.perf_counter()
            order = _method_order(method, result.data, truth,
                                  (0 if seed is None else seed, n, p, alpha, rep))
            score = score_order(truth, order)
            elapsed = (time.perf_counter() - start) * 1000.0
            out[method] = (score.violation_fraction, score.valid, elapsed)
        return out

    rows = []
    for setting, n, p, alpha in grid.cells():
        tasks = [(setting, n, p, alpha, rep) for rep in range(reps)]
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(run_rep, tasks))
        else:
            results = [run_rep(t) for t in tasks]
        for method in methods:
            fractions = [r[method][0] for r in results]
            valids = [r[method][1] for r in results]
            wall = math.fsum(r[method][2] for r in results)
            mean, se, mistake = _aggregate(fractions, valids)
            rows.append(BenchmarkRow(
                scenario_id=f"{setting.kind}-n{n}-p{p}-a{alpha:g}",
                setting=setting.kind, n=n, p=p, alpha=alpha, method=method,
                mean_violation_fraction=mean, se=se, mistake_rate=mistake,
                wall_ms=wall))
    return rows


@dataclass(frozen=True)
class SensitivityRow:
    exponent: float
    k: int
    mean_violation_fraction: float | None
    se: float | None
    coefficients: dict | None = None


def resolve_k_for(n: int, exponent: float) -> int:
    return resolve_k(n, EstimatorConfig(k_exponent=exponent))


def k_sensitivity(exponents, *, data: Dataset | None = None, scm: Scm | None = None,
                  p: int | None = None, alpha: float | None = None, n: int | None = None,
                  reps: int = 1, seed=None, kind: str = "psi",
                  setting: SimSetting = SimSetting("linear")) -> list[SensitivityRow]:
    """Sweep the exceedance exponent of k = floor(n**e).

    Exactly one source drives the sweep: a fixed ``data`` set (rows then carry
    the estimated off-diagonal coefficients per exponent), a fixed ``scm``
    (rows carry the mean violation fraction over ``reps`` simulated datasets),
    or dimensions ``p`` and ``alpha`` (as for the SCM case but with a fresh
    random SCM per replicate, the protocol used for exponent calibration).
    """
    exponents = [float(e) for e in exponents]
    if not exponents:
        raise ValidationError("need at least one exponent")
    if any(not (0 < e < 1) for e in exponents):
        raise ValidationError("exponents must lie in (0, 1)")
    sources = sum(src is not None for src in (data, scm, p))
    if sources != 1:
        raise ValidationError("give exactly one of data, scm, or p (with alpha)")

    if data is not None:
        rows = []
        for e in exponents:
            config = EstimatorConfig(k_exponent=e, kind=kind)
            matrix = coefficient_matrix(data, config)
            coefs = {
                (data.names[i], data.names[j]): float(matrix.values[i, j])
                for i in range(data.p) for j in range(data.p) if i != j
            }
            rows.append(SensitivityRow(e, resolve_k_for(data.n, e), None, None, coefs))
        return rows

    if n is None or n < 2:
        raise ValidationError("scm and dimension sweeps need a sample size n >= 2")
    if p is not None and (alpha is None or p < 1):
        raise ValidationError("dimension sweep needs p >= 1 and alpha")
    if reps < 1:
        raise ValidationError(f"reps must be >= 1, got {reps}")

    replicates = []
    for rep in range(reps):
        if scm is not None:
            truth = scm
            _, data_seed = scenario_streams(seed, n, truth.p, truth.alpha, rep)
        else:
            scm_seed, data_seed = scenario_streams(seed, n, p, alpha, rep)
            truth = scenario_scm(p, alpha, setting, scm_seed)
        sample = simulate(truth, effective_setting(truth, setting), n, data_seed).data
        replicates.append((truth, sample))

    rows = []
    for e in exponents:
        config = EstimatorConfig(k_exponent=e, kind=kind)
        fractions = []
        valids = []
        for truth, sample in replicates:
            if sample.p < 2:
                order = CausalOrder(truth.observed)
            else:
                order = ease(coefficient_matrix(sample, config)).relabel(truth.observed)
            score = score_order(truth, order)
            fractions.append(score.violation_fraction)
            valids.append(score.valid)
        mean, se, _ = _aggregate(fractions, valids)
        rows.append(SensitivityRow(e, resolve_k_for(n, e), mean, se))
    return rows


def sensitivity_rows_to_csv(rows: list[SensitivityRow]) -> str:
    """CSV rendering of a sweep, long format for coefficient rows."""
    lines = []
    if rows and rows[0].coefficients is not None:
        lines.append("exponent,k,from,to,value")
        for row in rows:
            for (a, b), v in sorted(row.coefficients.items()):
                lines.append(f"{row.exponent:g},{row.k},{a},{b},{v!r}")
    else:
        lines.append("exponent,k,mean_violation_fraction,se")
        for row in rows:
            lines.append(f"{row.exponent:g},{row.k},{row.mean_violation_fraction!r},{row.se!r}")
    return "\n".join(lines) + "\n"
