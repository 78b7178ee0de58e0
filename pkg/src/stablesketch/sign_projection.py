"""Sign alpha-stable random projections.

For a vector ``u`` the j-th projected value is ``x_j = sum_i u_i * s_ij`` with
``s_ij ~ S(alpha, 1)`` drawn from the keyed stream ``(seed, j, i)``; only
``x_j > 0`` is kept. Because ``s_ij`` depends on the coordinate and not on the
vector, two vectors sketched under one config share their projection matrix.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from joblib import Parallel, delayed

from .sparse import EncodedFeatures, SparseVector, as_sparse
from .stable import check_alpha, stable_log_variates

DOMAIN_SIGN = 0x5349474E  # stream domain for projection entries

# Upper bound on (projections x nonzeros) held in memory at once.
_BLOCK_ELEMENTS = 1 << 21


@dataclass(frozen=True)
class SketchConfig:
    """Parameters that fix one family of sign sketches."""

    alpha: float
    k: int
    seed: int
    dim: int

    def __post_init__(self):
        check_alpha(float(self.alpha))
        if int(self.k) < 1:
            raise ValueError(f"k must be at least 1, got {self.k}")
        if int(self.dim) < 1:
            raise ValueError(f"dim must be at least 1, got {self.dim}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "dim", int(self.dim))

    @cached_property
    def fingerprint(self) -> str:
        text = f"sign|{self.alpha!r}|{self.k}|{self.seed}|{self.dim}"
        return hashlib.blake2b(text.encode(), digest_size=8).hexdigest()


@dataclass(frozen=True, eq=False)
class SignSketch:
    bits: np.ndarray
    fingerprint: str

    def __post_init__(self):
        bits = np.ascontiguousarray(self.bits, dtype=bool)
        bits.flags.writeable = False
        object.__setattr__(self, "bits", bits)

    @property
    def k(self) -> int:
        return int(self.bits.size)

    @cached_property
    def packed(self) -> np.ndarray:
        return np.packbits(self.bits)

    def __eq__(self, other):
        if not isinstance(other, SignSketch):
            return NotImplemented
        return self.fingerprint == other.fingerprint and np.array_equal(self.bits, other.bits)


def projected_signs(v: SparseVector, cfg: SketchConfig) -> np.ndarray:
    """Sign of every ``x_j`` as -1, 0 or +1 (0 only for degenerate input)."""
    idx = v.indices
    log_u = np.log(np.abs(v.values))
    sign_u = np.sign(v.values)
    out = np.empty(cfg.k, dtype=np.int8)
    step = max(1, _BLOCK_ELEMENTS // max(1, idx.size))
    for start in range(0, cfg.k, step):
        j = np.arange(start, min(cfg.k, start + step), dtype=np.int64)
        sgn, log_s = stable_log_variates(cfg.alpha, cfg.seed, DOMAIN_SIGN, j[:, None], idx[None, :])
        log_terms = log_s + log_u
        # Rescale each row by its largest term so alpha near 0 cannot overflow;
        # a common positive factor leaves the sign of the sum unchanged.
        shift = log_terms.max(axis=1, keepdims=True)
        terms = (sgn * sign_u) * np.exp(log_terms - shift)
        x = np.zeros(j.size)
        for col in range(idx.size):
            x += terms[:, col]
        out[start : start + j.size] = np.sign(x)
    return out


def project_sign(v, cfg: SketchConfig) -> SignSketch:
    """Sketch one vector: bit j is set iff ``x_j > 0``.

    Args:
        v: SparseVector (or dense array) with ``dim == cfg.dim``.
        cfg: Sketch configuration.

    Raises:
        ValueError: on dimension mismatch or an all-zero vector.
    """
    v = as_sparse(v)
    if v.dim != cfg.dim:
        raise ValueError(f"vector has dim {v.dim}, config expects {cfg.dim}")
    if v.nnz == 0:
        raise ValueError("cannot sketch an all-zero vector")
    return SignSketch(projected_signs(v, cfg) > 0, cfg.fingerprint)


def encode_sign(s: SignSketch) -> EncodedFeatures:
    """Expand each bit into ``[1 0]`` (positive) or ``[0 1]`` (non-positive)."""
    j = np.arange(s.k, dtype=np.int64)
    return EncodedFeatures(2 * s.k, 2 * j + (~s.bits).astype(np.int64), block_size=2)


def sketch_corpus(vectors, cfg: SketchConfig, n_jobs: int | None = 1) -> list[SignSketch]:
    """Sketch many vectors; output order and content do not depend on ``n_jobs``."""
    if n_jobs in (None, 1):
        return [project_sign(v, cfg) for v in vectors]
    return Parallel(n_jobs=n_jobs, prefer="threads")(delayed(project_sign)(v, cfg) for v in vectors)
