"""0-bit consistent weighted sampling for nonnegative vectors.

Each sample j picks one coordinate ``i*`` such that two vectors pick the same
coordinate with probability close to their min-max kernel. The construction
is Ioffe's: per nonzero coordinate ``i`` draw ``r_i, c_i ~ Gamma(2, 1)`` and
``beta_i ~ U(0, 1)`` from the stream ``(seed, j, i)``, then

    t_i = floor(ln S_i / r_i + beta_i)
    y_i = exp(r_i * (t_i - beta_i))
    a_i = c_i / (y_i * exp(r_i))

and return ``argmin_i a_i``. The 0-bit variant keeps ``i*`` and drops ``t*``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from joblib import Parallel, delayed

from . import keyed_rand
from .sparse import EncodedFeatures, SparseVector, as_sparse

DOMAIN_CWS = 0x43575321
_SLOT_R, _SLOT_C, _SLOT_BETA = 0, 1, 2

DEFAULT_BUCKETS = 256
_BLOCK_ELEMENTS = 1 << 21


@dataclass(frozen=True)
class CwsConfig:
    k: int
    seed: int
    dim: int

    def __post_init__(self):
        if int(self.k) < 1:
            raise ValueError(f"k must be at least 1, got {self.k}")
        if int(self.dim) < 1:
            raise ValueError(f"dim must be at least 1, got {self.dim}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "dim", int(self.dim))

    @cached_property
    def fingerprint(self) -> str:
        text = f"cws|{self.k}|{self.seed}|{self.dim}"
        return hashlib.blake2b(text.encode(), digest_size=8).hexdigest()


@dataclass(frozen=True, eq=False)
class CwsSketch:
    ids: np.ndarray
    fingerprint: str

    def __post_init__(self):
        ids = np.ascontiguousarray(self.ids, dtype=np.int64)
        ids.flags.writeable = False
        object.__setattr__(self, "ids", ids)

    @property
    def k(self) -> int:
        return int(self.ids.size)

    def __eq__(self, other):
        if not isinstance(other, CwsSketch):
            return NotImplemented
        return self.fingerprint == other.fingerprint and np.array_equal(self.ids, other.ids)


def _check_weights(v: SparseVector) -> None:
    if v.nnz == 0:
        raise ValueError("CWS needs at least one positive entry")
    if np.any(v.values < 0):
        raise ValueError("CWS is defined for nonnegative data only")


def _samples(v: SparseVector, seed: int, j: np.ndarray):
    """``(i*, t*)`` for every sample index in ``j``."""
    idx = v.indices
    log_s = np.log(v.values)
    base = keyed_rand.hash_stream(seed, DOMAIN_CWS, j[:, None], idx[None, :])
    r = keyed_rand.to_gamma2(keyed_rand.absorb(base, _SLOT_R))
    c = keyed_rand.to_gamma2(keyed_rand.absorb(base, _SLOT_C))
    beta = keyed_rand.to_unit(keyed_rand.absorb(base, _SLOT_BETA))
    t = np.floor(log_s / r + beta)
    # argmin of a_i taken on ln a_i = ln c_i - r_i * (t_i - beta_i + 1), which
    # is finite where y_i * exp(r_i) could overflow.
    with np.errstate(divide="ignore"):
        log_a = np.log(c) - r * (t - beta + 1.0)
    pos = np.argmin(log_a, axis=1)
    rows = np.arange(j.size)
    return idx[pos], t[rows, pos].astype(np.int64)


def cws_sample(v, seed: int, j: int) -> tuple[int, int]:
    """One consistent weighted sample ``(i*, t*)`` of ``v`` for sample index ``j``."""
    v = as_sparse(v)
    _check_weights(v)
    istar, tstar = _samples(v, int(seed), np.array([j], dtype=np.int64))
    return int(istar[0]), int(tstar[0])


def cws_sketch(v, k: int, seed: int, dim: int | None = None) -> CwsSketch:
    """0-bit CWS sketch: the selected coordinate of each of ``k`` samples."""
    v = as_sparse(v)
    cfg = CwsConfig(k, seed, v.dim if dim is None else dim)
    return cws_sketch_cfg(v, cfg)


def cws_sketch_cfg(v, cfg: CwsConfig) -> CwsSketch:
    v = as_sparse(v)
    if v.dim != cfg.dim:
        raise ValueError(f"vector has dim {v.dim}, config expects {cfg.dim}")
    _check_weights(v)
    ids = np.empty(cfg.k, dtype=np.int64)
    step = max(1, _BLOCK_ELEMENTS // v.nnz)
    for start in range(0, cfg.k, step):
        j = np.arange(start, min(cfg.k, start + step), dtype=np.int64)
        ids[start : start + j.size] = _samples(v, cfg.seed, j)[0]
    return CwsSketch(ids, cfg.fingerprint)


def cws_corpus(vectors, cfg: CwsConfig, n_jobs: int | None = 1) -> list[CwsSketch]:
    if n_jobs in (None, 1):
        return [cws_sketch_cfg(v, cfg) for v in vectors]
    return Parallel(n_jobs=n_jobs, prefer="threads")(delayed(cws_sketch_cfg)(v, cfg) for v in vectors)


def hash64(x):
    """SplitMix64 finalizer of the id; a fixed, published mixer."""
    with np.errstate(over="ignore"):
        return keyed_rand.mix64(np.asarray(x, dtype=np.int64).view(np.uint64))


def encode_cws(s: CwsSketch, buckets: int = DEFAULT_BUCKETS) -> EncodedFeatures:
    """One-hot block of ``buckets`` columns per sample, offset ``hash64(id) % buckets``."""
    if buckets < 2:
        raise ValueError("buckets must be at least 2")
    offsets = (hash64(s.ids) % np.uint64(buckets)).astype(np.int64)
    j = np.arange(s.k, dtype=np.int64)
    return EncodedFeatures(s.k * buckets, j * buckets + offsets, block_size=buckets)
