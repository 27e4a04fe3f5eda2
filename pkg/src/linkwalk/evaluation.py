"""Edge-removal evaluation: splits, ranking metrics, and the trial driver.

A split removes a fraction of the edges as positive test pairs; every pair
absent from the original network is a negative. All methods of a trial score
one shared candidate set (the pairs absent from the training network, which
is exactly positives plus negatives), and are compared by the area under the
ROC curve and by average precision, averaged over trials.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Callable, Sequence

import numpy as np
import scipy.stats
from threadpoolctl import threadpool_limits

from ._version import __version__
from .baselines import (
    BASELINE_METHODS,
    adamic_adar,
    common_neighbours,
    l3_score,
    preferential_attachment,
    spm_score,
)
from .errors import ConfigError, MetricError
from .graph import Network, degree_vector
from .scoring import PAIR_DTYPE, CandidateSet, ScoreTable, candidate_pairs
from .spectral import SpectralDecomposition, decompose_network
from .walks import WALK_METHODS, default_time, propagator, score_pairs, walk_source

ALL_METHODS = WALK_METHODS + BASELINE_METHODS


def derived_seed(*parts: object) -> int:
    """Deterministic, platform-independent seed from a tuple of values."""
    key = ":".join(repr(p) for p in parts)
    return int.from_bytes(hashlib.sha256(key.encode()).digest()[:8], "little")


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class SplitSpec:
    """Identifies one train/test split; the trial seed derives from its fields."""

    remove_frac: float
    trial: int
    master_seed: int

    def trial_seed(self) -> int:
        return derived_seed(self.master_seed, self.remove_frac, self.trial)


@dataclass(frozen=True)
class EvaluationSplit:
    """Training network plus the removed (positive) edges of one trial."""

    original: Network
    training: Network
    positives: np.ndarray
    include_self_pairs: bool

    def candidates(self) -> CandidateSet:
        """Every pair the predictors must score: positives plus negatives."""
        return candidate_pairs(self.training, self.include_self_pairs)

    def positive_flags(self, pairs: np.ndarray) -> np.ndarray:
        flags = np.zeros((self.original.n, self.original.n), dtype=bool)
        flags[self.positives[:, 0], self.positives[:, 1]] = True
        flags[self.positives[:, 1], self.positives[:, 0]] = True
        return flags[pairs[:, 0], pairs[:, 1]]


def make_split(
    net: Network, spec: SplitSpec, include_self_pairs: bool = True
) -> EvaluationSplit:
    """Remove a uniform sample of round(P * m) edges as positive test pairs.

    Self-loops are eligible for removal unless ``include_self_pairs`` is
    false; all nodes stay in the training network, isolated ones included.
    The same spec always produces the same split.
    """
    frac = spec.remove_frac
    if not 0.0 < frac < 1.0:
        raise ConfigError("removal fraction must be in (0, 1)")
    if include_self_pairs:
        eligible = net.sorted_edges()
    else:
        eligible = [e for e in net.sorted_edges() if e[0] != e[1]]
    if frac * len(eligible) < 1.0:
        raise ConfigError("removal fraction selects less than one edge")
    n_pos = _round_half_up(frac * len(eligible))
    rng = np.random.default_rng(spec.trial_seed())
    picked = rng.choice(len(eligible), size=n_pos, replace=False)
    positives = [eligible[i] for i in sorted(picked)]
    training = Network(net.node_labels, net.edges.difference(positives))
    pos = np.asarray(positives, dtype=PAIR_DTYPE).reshape(-1, 2)
    pos.setflags(write=False)
    return EvaluationSplit(net, training, pos, include_self_pairs)


# --- metrics -------------------------------------------------------------------


def auc_from_labels(scores: np.ndarray, flags: np.ndarray) -> float:
    """Probability that a random positive outscores a random negative, ties half."""
    npos = int(flags.sum())
    nneg = int(flags.size - npos)
    if npos == 0 or nneg == 0:
        raise MetricError("AUC needs at least one positive and one negative")
    ranks = scipy.stats.rankdata(scores, method="average")
    pos_rank_sum = float(ranks[flags].sum())
    return (pos_rank_sum - npos * (npos + 1) / 2.0) / (npos * float(nneg))


def auc(table: ScoreTable, split: EvaluationSplit) -> float:
    return auc_from_labels(
        np.asarray(table.scores, dtype=float), split.positive_flags(table.pairs)
    )


def ap_from_labels(
    scores: np.ndarray, flags: np.ndarray, tie_averaged: bool = False
) -> float:
    """Mean precision at the positives' ranks, descending by score.

    Ties break by candidate position (deterministic); ``tie_averaged``
    instead returns the exact expectation over random tie orderings.
    """
    npos = int(flags.sum())
    nneg = int(flags.size - npos)
    if npos == 0 or nneg == 0:
        raise MetricError("average precision needs positives and negatives")
    order = np.argsort(-np.asarray(scores, dtype=float), kind="stable")
    ordered_flags = flags[order]
    if not tie_averaged:
        positions = np.nonzero(ordered_flags)[0]
        terms = np.arange(1, npos + 1, dtype=float) / (positions + 1.0)
        return math.fsum(terms.tolist()) / npos
    return _ap_tie_averaged(np.asarray(scores, dtype=float)[order], ordered_flags, npos)


def _ap_tie_averaged(sorted_scores: np.ndarray, flags: np.ndarray, npos: int) -> float:
    starts = np.nonzero(np.r_[True, sorted_scores[1:] != sorted_scores[:-1]])[0]
    sizes = np.diff(np.r_[starts, sorted_scores.size]).astype(np.int64)
    hits = np.add.reduceat(flags.astype(np.int64), starts)
    hits_before = np.concatenate([[0], np.cumsum(hits)[:-1]])
    terms: list[float] = []
    single = (sizes == 1) & (hits == 1)
    if single.any():
        single_terms = (hits_before[single] + 1.0) / (starts[single] + 1.0)
        terms.extend(single_terms.tolist())
    for g in np.nonzero((sizes > 1) & (hits > 0))[0]:
        T, q, h, before = int(sizes[g]), int(hits[g]), int(hits_before[g]), int(starts[g])
        slots = np.arange(1, T + 1, dtype=float)
        expected_hits = h + 1.0 + (slots - 1.0) * (q - 1.0) / (T - 1.0)
        terms.append(float(((q / T) * expected_hits / (before + slots)).sum()))
    return math.fsum(terms) / npos


def average_precision(
    table: ScoreTable, split: EvaluationSplit, tie_averaged: bool = False
) -> float:
    return ap_from_labels(
        np.asarray(table.scores, dtype=float),
        split.positive_flags(table.pairs),
        tie_averaged,
    )


# --- experiment driver ----------------------------------------------------------


def score_candidates(
    net: Network,
    method: str,
    cands: CandidateSet,
    *,
    t: float | None = None,
    spm_hold_out: float = 0.1,
    spm_reps: int = 10,
    spm_rng: np.random.Generator | int | None = None,
    cache_dir: str | Path | None = None,
    decompositions: dict[str, SpectralDecomposition] | None = None,
) -> ScoreTable:
    """Score one candidate set with any walk or baseline method.

    ``decompositions`` lets callers reuse eigendecompositions across the walk
    methods of one training network.
    """
    if method in WALK_METHODS:
        walk_t = default_time(net) if t is None else t
        if walk_t < 0:
            raise ConfigError("walk time must be non-negative")
        source = walk_source(method)
        dec = decompositions.get(source) if decompositions is not None else None
        if dec is None:
            dec = decompose_network(net, source, cache_dir)
            if decompositions is not None:
                decompositions[source] = dec
        P = propagator(dec, method, walk_t)
        return score_pairs(P, degree_vector(net), net, cands)
    if method == "cn":
        return common_neighbours(net, cands)
    if method == "aa":
        return adamic_adar(net, cands)
    if method == "pa":
        return preferential_attachment(net, cands)
    if method == "l3":
        return l3_score(net, cands)
    if method == "spm":
        return spm_score(net, cands, spm_hold_out, spm_reps, spm_rng)
    raise ConfigError(f"unknown method {method!r}")


@dataclass(frozen=True)
class TrialResult:
    method: str
    remove_frac: float
    trial: int
    auc: float
    average_precision: float
    seconds: float


@dataclass(frozen=True)
class MethodSummary:
    method: str
    remove_frac: float
    trials: int
    mean_auc: float
    std_auc: float | None
    mean_ap: float
    std_ap: float | None
    mean_seconds: float


@dataclass(frozen=True)
class EvaluationReport:
    """Per-trial metrics for every (method, removal fraction) combination."""

    dataset: str
    master_seed: int
    config: dict
    results: tuple[TrialResult, ...]
    version: str = __version__

    def trials_for(self, method: str, remove_frac: float) -> list[TrialResult]:
        return [
            r
            for r in self.results
            if r.method == method and r.remove_frac == remove_frac
        ]

    def summaries(self) -> list[MethodSummary]:
        seen: list[tuple[str, float]] = []
        for r in self.results:
            key = (r.method, r.remove_frac)
            if key not in seen:
                seen.append(key)
        out = []
        for method, frac in seen:
            rows = self.trials_for(method, frac)
            aucs = np.array([r.auc for r in rows])
            aps = np.array([r.average_precision for r in rows])
            secs = np.array([r.seconds for r in rows])
            out.append(
                MethodSummary(
                    method=method,
                    remove_frac=frac,
                    trials=len(rows),
                    mean_auc=float(aucs.mean()),
                    std_auc=float(aucs.std(ddof=1)) if len(rows) > 1 else None,
                    mean_ap=float(aps.mean()),
                    std_ap=float(aps.std(ddof=1)) if len(rows) > 1 else None,
                    mean_seconds=float(secs.mean()),
                )
            )
        return out

    def mean_auc(self, method: str, remove_frac: float) -> float:
        rows = self.trials_for(method, remove_frac)
        if not rows:
            raise KeyError((method, remove_frac))
        return float(np.mean([r.auc for r in rows]))

    def mean_ap(self, method: str, remove_frac: float) -> float:
        rows = self.trials_for(method, remove_frac)
        if not rows:
            raise KeyError((method, remove_frac))
        return float(np.mean([r.average_precision for r in rows]))


def run_experiment(
    net: Network,
    methods: Sequence[str],
    remove_fracs: Sequence[float],
    trials: int,
    master_seed: int,
    *,
    t: float | None = None,
    spm_hold_out: float = 0.1,
    spm_reps: int = 10,
    include_self_pairs: bool = True,
    tie_averaged_ap: bool = False,
    threads: int = 1,
    dataset: str = "network",
    config: dict | None = None,
    progress: Callable[[str], None] | None = None,
) -> EvaluationReport:
    """Run the removal protocol: per (fraction, trial) one split shared by all methods.

    Trials are independent work units and may run on up to ``threads``
    workers; linear-algebra kernels are pinned to one thread for the whole
    experiment so results do not depend on the thread count, and trial seeds
    derive only from (master seed, fraction, trial index).
    """
    methods = list(dict.fromkeys(methods))
    if not methods:
        raise ConfigError("at least one method is required")
    for method in methods:
        if method not in ALL_METHODS:
            raise ConfigError(f"unknown method {method!r}")
    for frac in remove_fracs:
        if not 0.0 < frac < 1.0:
            raise ConfigError("removal fraction must be in (0, 1)")
    if not remove_fracs:
        raise ConfigError("at least one removal fraction is required")
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    if threads < 1:
        raise ConfigError("threads must be >= 1")
    if t is not None and t < 0:
        raise ConfigError("walk time must be non-negative")
    if not 0.0 < spm_hold_out < 1.0:
        raise ConfigError("hold_out_fraction must be in (0, 1)")
    if spm_reps < 1:
        raise ConfigError("repetitions must be >= 1")

    def run_trial(frac: float, trial: int) -> list[TrialResult]:
        spec = SplitSpec(frac, trial, master_seed)
        split = make_split(net, spec, include_self_pairs)
        cands = split.candidates()
        decompositions: dict[str, SpectralDecomposition] = {}
        rows = []
        for method in methods:
            started = time.perf_counter()
            table = score_candidates(
                split.training,
                method,
                cands,
                t=t,
                spm_hold_out=spm_hold_out,
                spm_reps=spm_reps,
                spm_rng=derived_seed(spec.trial_seed(), "spm"),
                decompositions=decompositions,
            )
            auc_value = auc(table, split)
            ap_value = average_precision(table, split, tie_averaged_ap)
            rows.append(
                TrialResult(
                    method=method,
                    remove_frac=frac,
                    trial=trial,
                    auc=auc_value,
                    average_precision=ap_value,
                    seconds=time.perf_counter() - started,
                )
            )
        if progress is not None:
            progress(f"remove_frac={frac} trial={trial + 1}/{trials} done")
        return rows

    jobs = [(frac, trial) for frac in remove_fracs for trial in range(trials)]
    with threadpool_limits(limits=1):
        if threads == 1:
            per_job = [run_trial(frac, trial) for frac, trial in jobs]
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                per_job = list(pool.map(lambda job: run_trial(*job), jobs))

    order = {method: rank for rank, method in enumerate(methods)}
    flat = [row for rows in per_job for row in rows]
    flat.sort(key=lambda r: (order[r.method], r.remove_frac, r.trial))
    return EvaluationReport(
        dataset=dataset,
        master_seed=master_seed,
        config=dict(config or {}),
        results=tuple(flat),
    )


# --- report serialization ---------------------------------------------------


def report_json_dict(report: EvaluationReport) -> dict:
    methods: dict[str, dict] = {}
    for summary in report.summaries():
        per_frac = methods.setdefault(summary.method, {})
        per_frac[repr(summary.remove_frac)] = {
            "trials": [
                {
                    "trial": r.trial,
                    "auc": r.auc,
                    "average_precision": r.average_precision,
                    "seconds": r.seconds,
                }
                for r in report.trials_for(summary.method, summary.remove_frac)
            ],
            "mean_auc": summary.mean_auc,
            "std_auc": summary.std_auc,
            "mean_ap": summary.mean_ap,
            "std_ap": summary.std_ap,
            "mean_seconds": summary.mean_seconds,
        }
    return {
        "dataset": report.dataset,
        "master_seed": report.master_seed,
        "version": report.version,
        "config": report.config,
        "methods": methods,
    }


def write_report_json(report: EvaluationReport, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report_json_dict(report), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_comment_header(fh: IO[str], header_lines: Sequence[str]) -> None:
    for line in header_lines:
        fh.write(f"# {line}\n")


def write_report_csv(
    report: EvaluationReport, path: str | Path, header_lines: Sequence[str] = ()
) -> None:
    """Flat per-trial metrics; wall times are reported in the JSON file only,
    so the CSV body is reproducible bit-for-bit across equivalent runs."""
    with open(path, "w", encoding="utf-8") as fh:
        _write_comment_header(fh, header_lines)
        fh.write("method,remove_frac,trial,auc,average_precision\n")
        for r in report.results:
            fh.write(
                f"{r.method},{r.remove_frac!r},{r.trial},{r.auc!r},{r.average_precision!r}\n"
            )


def write_curves_csv(
    report: EvaluationReport, path: str | Path, header_lines: Sequence[str] = ()
) -> None:
    """Mean metric per (method, removal fraction): plot-ready axes."""
    with open(path, "w", encoding="utf-8") as fh:
        _write_comment_header(fh, header_lines)
        fh.write("method,remove_frac,mean_auc,std_auc,mean_ap,std_ap\n")
        for s in report.summaries():
            std_auc = "" if s.std_auc is None else repr(s.std_auc)
            std_ap = "" if s.std_ap is None else repr(s.std_ap)
            fh.write(
                f"{s.method},{s.remove_frac!r},{s.mean_auc!r},{std_auc},{s.mean_ap!r},{std_ap}\n"
            )
