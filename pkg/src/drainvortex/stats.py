"""Nonparametric comparison machinery: per-case ranking, the classical
Friedman test, an exact/normal signed-rank test, and Holm step-down
correction, plus grid summarization over a set of run records.

Conventions: lower metric values are better everywhere, rank 1 is the best
algorithm in a case, and tied metrics share averaged ranks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaincc, ndtr
from scipy.stats import rankdata

from .errors import IncompleteGridError
from .records import LOG_ERROR_FLOOR

EXACT_WILCOXON_LIMIT = 25
SIGNIFICANCE_LEVEL = 0.05


def log10_error(values, floor: float = LOG_ERROR_FLOOR) -> np.ndarray:
    """Elementwise log10 of |values| with a floor that keeps zeros finite."""
    values = np.asarray(values, dtype=float)
    return np.log10(np.maximum(np.abs(values), floor))


def chi_square_sf(x: float, dof: float) -> float:
    """Chi-square survival function P(X >= x) via the regularized upper
    incomplete gamma function."""
    if dof <= 0:
        raise ValueError(f"dof must be positive, got {dof}")
    if x <= 0:
        return 1.0
    return float(gammaincc(dof / 2.0, x / 2.0))


def rank_per_case(metrics) -> np.ndarray:
    """Row-wise ascending ranks with average tie handling.

    metrics has shape (n_cases, n_algorithms); smaller is better.
    """
    metrics = np.asarray(metrics, dtype=float)
    if metrics.ndim != 2:
        raise ValueError(f"expected a 2-D metric matrix, got shape {metrics.shape}")
    return rankdata(metrics, method="average", axis=1)


@dataclass(frozen=True)
class FriedmanResult:
    statistic: float
    p_value: float
    dof: int
    mean_ranks: np.ndarray
    n_cases: int


def friedman(ranks) -> FriedmanResult:
    """Classical Friedman statistic (no tie correction) from a rank matrix.

    chi2 = 12 n / (m (m + 1)) * (sum_j Rbar_j^2 - m (m + 1)^2 / 4)
    with n cases, m algorithms, and Rbar_j the mean rank of column j.
    """
    ranks = np.asarray(ranks, dtype=float)
    if ranks.ndim != 2:
        raise ValueError(f"expected a 2-D rank matrix, got shape {ranks.shape}")
    n, m = ranks.shape
    if n < 1 or m < 2:
        raise ValueError(f"need at least one case and two algorithms, got {ranks.shape}")
    if not np.all(np.isfinite(ranks)):
        raise ValueError("rank matrix contains non-finite entries")
    mean_ranks = ranks.mean(axis=0)
    statistic = 12.0 * n / (m * (m + 1.0)) * (
        float(np.sum(mean_ranks**2)) - m * (m + 1.0) ** 2 / 4.0
    )
    statistic = max(statistic, 0.0)
    dof = m - 1
    return FriedmanResult(
        statistic=statistic,
        p_value=chi_square_sf(statistic, dof),
        dof=dof,
        mean_ranks=mean_ranks,
        n_cases=n,
    )


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float
    p_value: float
    direction: int
    method: str
    n: int


def _exact_signed_rank_p(doubled_ranks: np.ndarray, doubled_w: int) -> float:
    """Two-sided exact tail by counting sign assignments at least as far
    from the null center as the observed positive-rank sum.

    Works on doubled ranks so averaged ties stay integral.
    """
    total = int(doubled_ranks.sum())
    counts = np.zeros(total + 1, dtype=float)
    counts[0] = 1.0
    for r in doubled_ranks:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: counts.size - r]
        counts += shifted
    center = total / 2.0
    gap = abs(doubled_w - center)
    sums = np.arange(total + 1, dtype=float)
    tail = counts[np.abs(sums - center) >= gap].sum()
    return min(tail / 2.0 ** len(doubled_ranks), 1.0)


def wilcoxon_signed_rank(x, y) -> WilcoxonResult:
    """Paired two-sided signed-rank test with zero differences discarded.

    Exact enumeration (dynamic programming over doubled ranks) up to 25
    nonzero pairs, normal approximation with tie variance and a continuity
    correction beyond. The statistic is the positive-rank sum W+ and
    direction is the sign of the median nonzero difference (+1 means x
    tends to exceed y).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"need matching 1-D samples, got {x.shape} and {y.shape}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("samples contain non-finite values")
    diffs = x - y
    diffs = diffs[diffs != 0.0]
    n = diffs.size
    if n == 0:
        return WilcoxonResult(statistic=0.0, p_value=1.0, direction=0, method="degenerate", n=0)

    ranks = rankdata(np.abs(diffs), method="average")
    w_plus = float(ranks[diffs > 0].sum())
    direction = int(np.sign(np.median(diffs)))

    if n <= EXACT_WILCOXON_LIMIT:
        doubled = np.rint(2.0 * ranks).astype(int)
        doubled_w = int(round(2.0 * w_plus))
        p = _exact_signed_rank_p(doubled, doubled_w)
        return WilcoxonResult(w_plus, p, direction, "exact", n)

    mean = n * (n + 1) / 4.0
    _, tie_counts = np.unique(np.abs(diffs), return_counts=True)
    tie_term = float(np.sum(tie_counts.astype(float) ** 3 - tie_counts)) / 48.0
    variance = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term
    if variance <= 0.0:
        return WilcoxonResult(w_plus, 1.0, direction, "normal", n)
    centered = w_plus - mean
    if centered > 0:
        centered -= 0.5
    elif centered < 0:
        centered += 0.5
    z = centered / math.sqrt(variance)
    p = min(2.0 * float(ndtr(-abs(z))), 1.0)
    return WilcoxonResult(w_plus, p, direction, "normal", n)


def holm_correct(p_values) -> np.ndarray:
    """Holm step-down adjustment: sort ascending, scale by (k - i), enforce
    monotonicity with a running maximum, cap at 1, restore input order."""
    p_values = np.asarray(p_values, dtype=float)
    if p_values.ndim != 1:
        raise ValueError(f"expected a 1-D array of p-values, got shape {p_values.shape}")
    k = p_values.size
    if k == 0:
        return p_values.copy()
    if np.any(~np.isfinite(p_values)) or np.any(p_values < 0) or np.any(p_values > 1):
        raise ValueError("p-values must lie in [0, 1]")
    order = np.argsort(p_values, kind="stable")
    scaled = p_values[order] * (k - np.arange(k))
    adjusted = np.minimum(np.maximum.accumulate(scaled), 1.0)
    out = np.empty(k)
    out[order] = adjusted
    return out


@dataclass(frozen=True)
class ErrorSummary:
    """Distribution of a per-run scalar across the runs of one grid cell."""

    mean: float
    std: float
    best: float
    worst: float
    median: float

    @classmethod
    def of(cls, values: np.ndarray) -> "ErrorSummary":
        return cls(
            mean=float(values.mean()),
            std=float(values.std(ddof=0)),
            best=float(values.min()),
            worst=float(values.max()),
            median=float(np.median(values)),
        )


@dataclass(frozen=True)
class CaseSummary:
    """One problem/dimension row of the cross-algorithm comparison."""

    problem: str
    dim: int
    constrained: bool
    log_metric: bool = False
    metrics: dict = field(default_factory=dict)
    per_run: dict = field(default_factory=dict)
    error_stats: dict = field(default_factory=dict)
    best_feasible: dict = field(default_factory=dict)
    feasible_rate: dict = field(default_factory=dict)
    winners: tuple = ()

    @property
    def label(self) -> str:
        return f"{self.problem}/d{self.dim}"


@dataclass(frozen=True)
class SummaryTable:
    algorithms: tuple
    cases: tuple
    rank_matrix: np.ndarray
    mean_ranks: dict
    wins: dict
    friedman: FriedmanResult | None


@dataclass(frozen=True)
class PairwiseComparison:
    algorithm: str
    reference: str
    algorithm_mean: float
    reference_mean: float
    difference: float
    statistic: float
    p_value: float
    p_holm: float
    direction: int
    method: str
    significant: bool


@dataclass(frozen=True)
class StatReport:
    reference: str
    table: SummaryTable
    comparisons: tuple


def _expected_grid(result_set):
    """Algorithm order, case order, and run count, preferring the attached
    config and falling back to first-seen order in the records."""
    config = getattr(result_set, "config", None)
    if config is not None:
        return list(config.algorithm_names()), list(config.case_list()), config.runs
    algorithms, cases, runs = [], [], 0
    for record in result_set.records:
        if record.algorithm not in algorithms:
            algorithms.append(record.algorithm)
        case = (record.problem, record.dim)
        if case not in cases:
            cases.append(case)
        runs = max(runs, record.run_index + 1)
    return algorithms, cases, runs


def _per_run_values(records) -> np.ndarray:
    """Scalar per run: floored log error when the optimum is known,
    otherwise the recorded best value (penalized for constrained cases)."""
    values = [
        r.log10_error if r.log10_error is not None else r.best_value for r in records
    ]
    return np.asarray(values, dtype=float)


def summarize(result_set) -> SummaryTable:
    """Collapse a full record grid into per-case metrics, winners, average
    ranks, win counts, and a Friedman test over the rank matrix.

    Raises IncompleteGridError when any (algorithm, problem, dim) cell is
    missing runs. Unconstrained cells are scored by mean floored log error;
    constrained cells by the best feasible objective (infinite when no run
    is feasible).
    """
    algorithms, cases, runs = _expected_grid(result_set)
    cells: dict = {}
    for record in result_set.records:
        cells.setdefault((record.algorithm, record.problem, record.dim), {})[
            record.run_index
        ] = record

    missing = []
    for algorithm in algorithms:
        for problem, dim in cases:
            have = cells.get((algorithm, problem, dim), {})
            if any(i not in have for i in range(runs)):
                missing.append((algorithm, problem, dim))
    if missing:
        raise IncompleteGridError(missing)

    case_summaries = []
    for problem, dim in cases:
        metrics, per_run, error_stats = {}, {}, {}
        best_feasible, feasible_rate = {}, {}
        constrained = False
        for algorithm in algorithms:
            runs_here = [cells[(algorithm, problem, dim)][i] for i in range(runs)]
            values = _per_run_values(runs_here)
            per_run[algorithm] = values
            error_stats[algorithm] = ErrorSummary.of(values)
            if runs_here[0].feasible is not None:
                constrained = True
                feasible = [r for r in runs_here if r.feasible]
                feasible_rate[algorithm] = len(feasible) / runs
                best_feasible[algorithm] = (
                    min(r.objective_value for r in feasible) if feasible else math.inf
                )
                metrics[algorithm] = best_feasible[algorithm]
            else:
                metrics[algorithm] = float(values.mean())
        row = np.array([metrics[a] for a in algorithms])
        finite_min = row.min()
        winners = (
            tuple(a for a in algorithms if metrics[a] == finite_min)
            if math.isfinite(finite_min)
            else ()
        )
        sample = cells[(algorithms[0], problem, dim)][0]
        case_summaries.append(
            CaseSummary(
                problem=problem,
                dim=dim,
                constrained=constrained,
                log_metric=sample.log10_error is not None and not constrained,
                metrics=metrics,
                per_run=per_run,
                error_stats=error_stats,
                best_feasible=best_feasible,
                feasible_rate=feasible_rate,
                winners=winners,
            )
        )

    metric_matrix = np.array(
        [[case.metrics[a] for a in algorithms] for case in case_summaries]
    )
    rank_matrix = rank_per_case(metric_matrix)
    mean_ranks = {a: float(rank_matrix[:, j].mean()) for j, a in enumerate(algorithms)}
    wins = {a: sum(a in case.winners for case in case_summaries) for a in algorithms}
    test = friedman(rank_matrix) if len(algorithms) >= 2 else None
    return SummaryTable(
        algorithms=tuple(algorithms),
        cases=tuple(case_summaries),
        rank_matrix=rank_matrix,
        mean_ranks=mean_ranks,
        wins=wins,
        friedman=test,
    )


def compare(result_set, reference: str) -> StatReport:
    """Pairwise signed-rank tests of every algorithm against a reference,
    Holm-corrected across the family, on per-run values pooled over cases."""
    table = summarize(result_set)
    if reference not in table.algorithms:
        raise ValueError(f"reference algorithm {reference!r} not in results")
    others = [a for a in table.algorithms if a != reference]
    if not others:
        return StatReport(reference=reference, table=table, comparisons=())

    ref_values = np.concatenate([case.per_run[reference] for case in table.cases])
    raw = []
    for algorithm in others:
        values = np.concatenate([case.per_run[algorithm] for case in table.cases])
        raw.append((algorithm, values, wilcoxon_signed_rank(values, ref_values)))
    adjusted = holm_correct(np.array([t.p_value for _, _, t in raw]))
    comparisons = tuple(
        PairwiseComparison(
            algorithm=algorithm,
            reference=reference,
            algorithm_mean=float(values.mean()),
            reference_mean=float(ref_values.mean()),
            difference=float(values.mean() - ref_values.mean()),
            statistic=test.statistic,
            p_value=test.p_value,
            p_holm=float(p_holm),
            direction=test.direction,
            method=test.method,
            significant=bool(p_holm < SIGNIFICANCE_LEVEL),
        )
        for (algorithm, values, test), p_holm in zip(raw, adjusted)
    )
    return StatReport(reference=reference, table=table, comparisons=comparisons)
