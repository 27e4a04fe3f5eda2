"""Candidate pairs and score tables shared by every predictor."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import ContractError, ValidationError
from .graph import Network, adjacency_mask

PAIR_DTYPE = np.int32


@dataclass(frozen=True)
class CandidateSet:
    """Unordered node pairs eligible for prediction, stored as (N, 2) indices.

    Pairs are canonical (i <= j), unique, in row-major upper-triangle order;
    a pair (i, i) is a candidate self-loop. The position of a pair in the
    array is its deterministic tie-break key downstream.
    """

    pairs: np.ndarray

    def __post_init__(self) -> None:
        if self.pairs.ndim != 2 or self.pairs.shape[1] != 2:
            raise ValidationError("candidate pairs must have shape (N, 2)")

    def __len__(self) -> int:
        return self.pairs.shape[0]

    @classmethod
    def from_pairs(cls, net: Network, pairs: Iterable[tuple[int, int]]) -> "CandidateSet":
        """Canonicalize, deduplicate, and validate explicit pairs against ``net``."""
        canon = sorted({(i, j) if i <= j else (j, i) for i, j in pairs})
        for i, j in canon:
            if not (0 <= i <= j < net.n):
                raise ValidationError(f"candidate ({i}, {j}) out of range for n={net.n}")
            if net.has_edge(i, j):
                raise ContractError(f"candidate ({i}, {j}) is a training edge")
        arr = np.asarray(canon, dtype=PAIR_DTYPE).reshape(-1, 2)
        arr.setflags(write=False)
        return cls(arr)


def candidate_pairs(net: Network, include_self_pairs: bool = True) -> CandidateSet:
    """All unordered pairs absent from the network's edge set.

    With ``include_self_pairs`` every node lacking a self-loop also gets its
    (i, i) candidate; nodes that already have a self-loop are adjacent to
    themselves and are skipped.
    """
    absent = np.triu(~adjacency_mask(net))
    if not include_self_pairs:
        np.fill_diagonal(absent, False)
    pairs = np.argwhere(absent).astype(PAIR_DTYPE)
    pairs.setflags(write=False)
    return CandidateSet(pairs)


@dataclass(frozen=True)
class ScoreTable:
    """Scores for a candidate set, aligned row-for-row with its pairs."""

    pairs: np.ndarray
    scores: np.ndarray
    method: str
    t: float | None

    def __len__(self) -> int:
        return self.pairs.shape[0]

    def as_dict(self) -> dict[tuple[int, int], float]:
        return {
            (int(i), int(j)): float(s)
            for (i, j), s in zip(self.pairs, self.scores)
        }

    def descending_order(self) -> np.ndarray:
        """Row order by descending score; ties keep candidate order."""
        return np.argsort(-self.scores, kind="stable")


def check_candidates_free(net: Network, cands: CandidateSet) -> None:
    """Raise if any candidate collides with an edge of ``net``."""
    if len(cands) == 0:
        return
    present = adjacency_mask(net)[cands.pairs[:, 0], cands.pairs[:, 1]]
    if present.any():
        i, j = cands.pairs[int(np.argmax(present))]
        raise ContractError(f"candidate ({i}, {j}) is a training edge")


def gather_scores(
    matrix: np.ndarray,
    net: Network,
    cands: CandidateSet,
    method: str,
    t: float | None,
) -> ScoreTable:
    """Read candidate scores out of a full symmetric score matrix."""
    check_candidates_free(net, cands)
    scores = matrix[cands.pairs[:, 0], cands.pairs[:, 1]].astype(float, copy=True)
    scores.setflags(write=False)
    return ScoreTable(cands.pairs, scores, method, t)


def write_scores_csv(
    table: ScoreTable,
    net: Network,
    destination: str | Path | IO[str],
    *,
    top_k: int | None = None,
    header_lines: Sequence[str] = (),
) -> None:
    """Write ``src_label,dst_label,score,method,t`` rows, descending by score.

    ``header_lines`` are emitted first as ``#``-prefixed comments; ``top_k``
    truncates to the highest-scoring rows.
    """
    order = table.descending_order()
    if top_k is not None:
        order = order[: max(top_k, 0)]

    def _write(fh: IO[str]) -> None:
        for line in header_lines:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["src_label", "dst_label", "score", "method", "t"])
        t_text = "" if table.t is None else repr(float(table.t))
        labels = net.node_labels
        for row in order:
            i, j = table.pairs[row]
            writer.writerow([labels[i], labels[j], repr(float(table.scores[row])), table.method, t_text])

    if hasattr(destination, "write"):
        _write(destination)  # type: ignore[arg-type]
    else:
        with open(destination, "w", encoding="utf-8") as fh:
            _write(fh)
