"""Comparison predictors sharing the walk predictors' score-table contract.

Neighbourhood counting (common neighbours, Adamic-Adar), degree products
(preferential attachment), degree-normalized paths of length three, and the
adjacency-perturbation predictor. None of them defines a self-interaction
score, so candidate self-loops uniformly score 0 here; this keeps one
candidate set comparable across all methods.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg

from .errors import ConfigError, ContractError
from .graph import Network, build_adjacency, degree_vector
from .scoring import CandidateSet, ScoreTable, gather_scores

BASELINE_METHODS = ("l3", "pa", "cn", "aa", "spm")

CN = "cn"
AA = "aa"
PA = "pa"
L3 = "l3"
SPM = "spm"


def _simple_adjacency(net: Network) -> np.ndarray:
    A = build_adjacency(net)
    np.fill_diagonal(A, 0.0)
    return A


def common_neighbours(net: Network, cands: CandidateSet) -> ScoreTable:
    """Number of shared neighbours, self-loops excluded from neighbourhoods."""
    A = _simple_adjacency(net)
    S = A @ A
    np.fill_diagonal(S, 0.0)
    return gather_scores(S, net, cands, CN, None)


def adamic_adar(net: Network, cands: CandidateSet) -> ScoreTable:
    """Shared neighbours weighted by 1/ln(degree), favouring low-degree ones."""
    A = _simple_adjacency(net)
    k = degree_vector(net)
    # A node on >= 2 distinct edges has degree >= 2, so the 1/ln(k) pole is
    # unreachable for any actual shared neighbour; keep the guard anyway.
    if np.any((k <= 1.0) & (A.sum(axis=1) >= 2.0)):
        raise ContractError("shared neighbour with degree <= 1")
    w = np.zeros(net.n)
    mask = k > 1.0
    w[mask] = 1.0 / np.log(k[mask])
    S = (A * w) @ A
    np.fill_diagonal(S, 0.0)
    return gather_scores(S, net, cands, AA, None)


def preferential_attachment(net: Network, cands: CandidateSet) -> ScoreTable:
    """Product of endpoint degrees."""
    k = degree_vector(net)
    S = np.outer(k, k)
    np.fill_diagonal(S, 0.0)
    return gather_scores(S, net, cands, PA, None)


def l3_score(net: Network, cands: CandidateSet, normalized: bool = True) -> ScoreTable:
    """Paths of length three between the candidates' endpoints.

    Each path x-u-v-y contributes 1/sqrt(k_u * k_v); ``normalized=False``
    switches to the raw path count for ablation.
    """
    A = build_adjacency(net)
    if normalized:
        k = degree_vector(net)
        scale = np.zeros(net.n)
        nonzero = k > 0
        scale[nonzero] = 1.0 / np.sqrt(k[nonzero])
        inner = A * scale[:, None] * scale[None, :]
    else:
        inner = A
    S = A @ inner @ A
    np.fill_diagonal(S, 0.0)
    return gather_scores(S, net, cands, L3, None)


def spm_perturbed_matrix(
    net: Network, held_out: list[tuple[int, int]]
) -> np.ndarray:
    """One structural-perturbation repetition.

    Eigendecompose the adjacency matrix with ``held_out`` edges removed,
    shift each eigenvalue by its first-order correction from the removed
    part, and rebuild the matrix from the unchanged eigenvectors.
    """
    A = build_adjacency(net)
    dA = np.zeros_like(A)
    for i, j in held_out:
        if not net.has_edge(i, j):
            raise ContractError(f"held-out pair ({i}, {j}) is not an edge")
        dA[i, j] = 1.0
        dA[j, i] = 1.0
    AR = A - dA
    lam, V = scipy.linalg.eigh(AR)
    corrections = ((dA @ V) * V).sum(axis=0) / (V * V).sum(axis=0)
    return (V * (lam + corrections)) @ V.T


def spm_score(
    net: Network,
    cands: CandidateSet,
    hold_out_fraction: float = 0.1,
    repetitions: int = 10,
    rng: np.random.Generator | int | None = None,
) -> ScoreTable:
    """Average perturbed-matrix entry over independently sampled hold-outs.

    Each repetition removes ceil(hold_out_fraction * m) training edges drawn
    without replacement from its own derived random stream, so the average
    does not depend on execution order. Entries may be negative; they are
    used raw for ranking.
    """
    if not 0.0 < hold_out_fraction < 1.0:
        raise ConfigError("hold_out_fraction must be in (0, 1)")
    if repetitions < 1:
        raise ConfigError("repetitions must be >= 1")
    if repetitions * hold_out_fraction * net.m < 1.0:
        raise ConfigError("hold-out configuration samples less than one edge")
    base = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    edges = net.sorted_edges()
    n_hold = math.ceil(hold_out_fraction * net.m)
    total = np.zeros((net.n, net.n))
    for child in base.spawn(repetitions):
        picked = child.choice(net.m, size=n_hold, replace=False)
        held = [edges[i] for i in sorted(picked)]
        total += spm_perturbed_matrix(net, held)
    S = total / repetitions
    np.fill_diagonal(S, 0.0)
    return gather_scores(S, net, cands, SPM, None)
