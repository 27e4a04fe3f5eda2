"""Walk propagators from one symmetric eigendecomposition per source matrix.

The eigendecomposition of the adjacency or Laplacian matrix is computed once
(O(n^3)) and every propagator evaluation afterwards costs O(n^2) per time
value, for the diffusion kernel exp(-tL) as well as for the squared-modulus
unitary kernel |exp(-itH)|^2 with H the adjacency or Laplacian matrix.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg

from .errors import ConfigError, NumericError, ValidationError
from .graph import Network, build_adjacency, build_laplacian

SOURCE_ADJACENCY = "adjacency"
SOURCE_LAPLACIAN = "laplacian"
CRW = "crw"
QRW_A = "qrw-a"
QRW_L = "qrw-l"

_SYMMETRY_TOL = 1e-12
_NEGATIVE_CLAMP = 1e-12


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of A or L."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    source: str

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-stochastic, symmetric matrix of walk transition probabilities."""

    matrix: np.ndarray
    walk: str
    t: float

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def decompose(M: np.ndarray, source: str) -> SpectralDecomposition:
    """Symmetric eigendecomposition of ``M`` tagged with its source matrix kind."""
    if source not in (SOURCE_ADJACENCY, SOURCE_LAPLACIAN):
        raise ConfigError(f"unknown decomposition source {source!r}")
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError("matrix must be square")
    if M.size and np.max(np.abs(M - M.T)) > _SYMMETRY_TOL:
        raise ValidationError("matrix is not symmetric within 1e-12")
    try:
        eigenvalues, eigenvectors = scipy.linalg.eigh(M)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - solver failure
        raise NumericError(f"eigendecomposition failed: {exc}") from exc
    eigenvalues.setflags(write=False)
    eigenvectors.setflags(write=False)
    return SpectralDecomposition(eigenvalues, eigenvectors, source)


def crw_propagator(dec: SpectralDecomposition, t: float) -> TransitionMatrix:
    """Diffusion propagator exp(-tL) evaluated from a Laplacian decomposition.

    Row i is the occupation distribution at time ``t`` of a walker started
    at node i. Round-off negatives within 1e-12 of zero are clamped to 0.
    """
    if dec.source != SOURCE_LAPLACIAN:
        raise ValidationError("classical walk needs a laplacian decomposition")
    if t < 0:
        raise ConfigError("walk time must be non-negative")
    V = dec.eigenvectors
    P = (V * np.exp(-t * dec.eigenvalues)) @ V.T
    P[(P < 0.0) & (P >= -_NEGATIVE_CLAMP)] = 0.0
    return TransitionMatrix(P, CRW, float(t))


def qrw_propagator(dec: SpectralDecomposition, t: float) -> TransitionMatrix:
    """Squared-modulus unitary propagator |exp(-itH)|^2 for H = A or H = L."""
    if t < 0:
        raise ConfigError("walk time must be non-negative")
    V = dec.eigenvectors
    phase = t * dec.eigenvalues
    re = (V * np.cos(phase)) @ V.T
    im = (V * np.sin(phase)) @ V.T
    P = re * re + im * im
    walk = QRW_A if dec.source == SOURCE_ADJACENCY else QRW_L
    return TransitionMatrix(P, walk, float(t))


def expm_taylor_reference(M: np.ndarray, t: float) -> np.ndarray:
    """Reference exp(-tM) by scaling-and-squaring of the Taylor series.

    Deliberately independent of the spectral path; used to cross-check it.
    """
    B = np.asarray(M, dtype=float) * (-float(t))
    if not np.all(np.isfinite(B)):
        raise ValidationError("matrix entries must be finite")
    n = B.shape[0]
    norm = np.linalg.norm(B, 1)
    squarings = 0 if norm <= 1.0 else int(np.ceil(np.log2(norm)))
    Bs = B / (2.0**squarings)
    X = np.eye(n)
    term = np.eye(n)
    for k in range(1, 64):
        term = term @ Bs / k
        X = X + term
        if np.linalg.norm(term, 1) <= 1e-18 * np.linalg.norm(X, 1):
            break
    for _ in range(squarings):
        X = X @ X
    return X


# --- optional on-disk cache of decompositions ---------------------------------
#
# Binary layout: header of little-endian uint64 n, 1-byte source code, and the
# 32-byte SHA-256 of the edge set, then eigenvalues and row-major eigenvectors
# as little-endian float64.

_CACHE_HEADER = 8 + 1 + 32
_SOURCE_CODES = {SOURCE_ADJACENCY: 0, SOURCE_LAPLACIAN: 1}


def edge_content_hash(net: Network) -> bytes:
    h = hashlib.sha256()
    h.update(f"n={net.n}\n".encode())
    for i, j in net.sorted_edges():
        h.update(f"{i} {j}\n".encode())
    return h.digest()


def cache_file(cache_dir: str | Path, net: Network, source: str) -> Path:
    digest = edge_content_hash(net)
    return Path(cache_dir) / f"{digest.hex()[:16]}-{source}.eig"


def store_cached_decomposition(
    cache_dir: str | Path, net: Network, dec: SpectralDecomposition
) -> Path:
    path = cache_file(cache_dir, net, dec.source)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(struct.pack("<Q", dec.n))
        fh.write(struct.pack("<B", _SOURCE_CODES[dec.source]))
        fh.write(edge_content_hash(net))
        fh.write(np.ascontiguousarray(dec.eigenvalues, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(dec.eigenvectors, dtype="<f8").tobytes())
    return path


def load_cached_decomposition(
    cache_dir: str | Path, net: Network, source: str
) -> SpectralDecomposition | None:
    """Return the cached decomposition, or None on any mismatch or corruption."""
    path = cache_file(cache_dir, net, source)
    try:
        blob = path.read_bytes()
    except OSError:
        return None
    if len(blob) < _CACHE_HEADER:
        return None
    (n,) = struct.unpack_from("<Q", blob, 0)
    (code,) = struct.unpack_from("<B", blob, 8)
    if n != net.n or code != _SOURCE_CODES.get(source):
        return None
    if blob[9:41] != edge_content_hash(net):
        return None
    if len(blob) != _CACHE_HEADER + 8 * (n + n * n):
        return None
    eigenvalues = np.frombuffer(blob, dtype="<f8", count=n, offset=_CACHE_HEADER).astype(float)
    eigenvectors = (
        np.frombuffer(blob, dtype="<f8", count=n * n, offset=_CACHE_HEADER + 8 * n)
        .astype(float)
        .reshape(n, n)
    )
    eigenvalues.setflags(write=False)
    eigenvectors.setflags(write=False)
    return SpectralDecomposition(eigenvalues, eigenvectors, source)


def decompose_network(
    net: Network, source: str, cache_dir: str | Path | None = None
) -> SpectralDecomposition:
    """Decompose the network's adjacency or Laplacian matrix, using the cache if given."""
    if cache_dir is not None:
        cached = load_cached_decomposition(cache_dir, net, source)
        if cached is not None:
            return cached
    M = build_adjacency(net) if source == SOURCE_ADJACENCY else build_laplacian(net)
    dec = decompose(M, source)
    if cache_dir is not None:
        store_cached_decomposition(cache_dir, net, dec)
    return dec
