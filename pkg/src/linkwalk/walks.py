"""Link scores from continuous-time walk transition probabilities.

A candidate pair of distinct nodes (i, j) scores P_ij(t) * (k_i + k_j); a
candidate self-loop (i, i) scores half the probability mass the walker sends
from i into its current neighbourhood, 0.5 * sum over u in N(i) of P_iu(t).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import ConfigError
from .graph import Network, build_adjacency, degree_vector
from .scoring import CandidateSet, ScoreTable, candidate_pairs, check_candidates_free
from .spectral import (
    CRW,
    QRW_A,
    QRW_L,
    SOURCE_ADJACENCY,
    SOURCE_LAPLACIAN,
    SpectralDecomposition,
    TransitionMatrix,
    crw_propagator,
    decompose_network,
    qrw_propagator,
)

WALK_METHODS = (CRW, QRW_A, QRW_L)


def default_time(net: Network) -> float:
    """Walk duration 1/<k> with mean degree <k> = 2m/n."""
    if net.m < 1:
        raise ConfigError("default walk time is undefined for an edgeless graph")
    return net.n / (2.0 * net.m)


def walk_source(method: str) -> str:
    """Which matrix the method's propagator is generated by."""
    if method not in WALK_METHODS:
        raise ConfigError(f"unknown walk method {method!r}")
    return SOURCE_ADJACENCY if method == QRW_A else SOURCE_LAPLACIAN


def propagator(dec: SpectralDecomposition, method: str, t: float) -> TransitionMatrix:
    if method == CRW:
        return crw_propagator(dec, t)
    if method in (QRW_A, QRW_L):
        return qrw_propagator(dec, t)
    raise ConfigError(f"unknown walk method {method!r}")


def score_pairs(
    P: TransitionMatrix,
    k: np.ndarray,
    net: Network,
    cands: CandidateSet,
) -> ScoreTable:
    """Score candidates from a transition matrix built on ``net``.

    ``net`` must be the training graph underlying ``P`` and ``k``; a
    candidate that collides with one of its edges is a contract violation.
    """
    check_candidates_free(net, cands)
    i_idx = cands.pairs[:, 0]
    j_idx = cands.pairs[:, 1]
    M = P.matrix
    scores = M[i_idx, j_idx] * (k[i_idx] + k[j_idx])
    self_rows = np.nonzero(i_idx == j_idx)[0]
    if self_rows.size:
        A = build_adjacency(net)
        nodes = i_idx[self_rows]
        scores[self_rows] = 0.5 * (M[nodes] * A[nodes]).sum(axis=1)
    scores.setflags(write=False)
    return ScoreTable(cands.pairs, scores, P.walk, P.t)


def predict(
    net: Network,
    method: str,
    cands: CandidateSet | None = None,
    t: float | None = None,
    cache_dir: str | Path | None = None,
) -> ScoreTable:
    """Score candidates with a walk method; ``t`` defaults to 1/<k>.

    ``cands`` defaults to every pair absent from the network, candidate
    self-loops included.
    """
    if method not in WALK_METHODS:
        raise ConfigError(f"unknown walk method {method!r}")
    if t is None:
        t = default_time(net)
    if t < 0:
        raise ConfigError("walk time must be non-negative")
    if cands is None:
        cands = candidate_pairs(net)
    dec = decompose_network(net, walk_source(method), cache_dir)
    P = propagator(dec, method, t)
    return score_pairs(P, degree_vector(net), net, cands)
