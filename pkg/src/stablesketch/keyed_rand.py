"""Counter-mode keyed randomness.

Every variate is a pure function of ``(seed, *labels)``: the seed and the
labels are absorbed one at a time through the SplitMix64 finalizer. There is
no generator state, so a sparse vector only touches the streams of its own
nonzero coordinates and evaluation order never matters.

All functions broadcast over numpy arrays of labels, e.g.
``uniform(seed, DOMAIN, j[:, None], i[None, :])`` gives a ``(k, nnz)`` block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31, _S11 = (np.uint64(s) for s in (30, 27, 31, 11))
_INV53 = 2.0**-53


def mix64(z):
    """SplitMix64 finalizer, applied elementwise with wrapping arithmetic."""
    return _mix_inplace(np.array(z, dtype=np.uint64))


def _mix_inplace(z):
    with np.errstate(over="ignore"):
        z ^= z >> _S30
        z *= _M1
        z ^= z >> _S27
        z *= _M2
        z ^= z >> _S31
    return z


def _as_u64(x):
    if isinstance(x, (int, np.integer)):
        return np.asarray(int(x) & MASK64, dtype=np.uint64)
    arr = np.asarray(x)
    if arr.dtype == np.uint64:
        return arr
    if arr.dtype.kind not in "iu":
        raise TypeError(f"stream labels must be integers, got dtype {arr.dtype}")
    return arr.astype(np.int64).view(np.uint64) if arr.dtype.kind == "i" else arr.astype(np.uint64)


def absorb(state, *labels):
    """Continue a stream hash with more labels.

    ``absorb(hash_stream(seed, a), b) == hash_stream(seed, a, b)``, which lets
    callers hash a shared prefix once and fork several sub-streams from it.
    """
    h = np.asarray(state, dtype=np.uint64)
    with np.errstate(over="ignore"):
        for label in labels:
            h = _mix_inplace(h ^ mix64(_as_u64(label) + _GAMMA))
    return h


def hash_stream(seed, *labels):
    """64-bit hash of ``(seed, *labels)``; broadcasts over array labels."""
    with np.errstate(over="ignore"):
        h = mix64(_as_u64(seed) + _GAMMA)
    return absorb(h, *labels)


def to_unit(h):
    """Map 64-bit hashes to [0, 1) using the top 53 bits."""
    return (h >> _S11).astype(np.float64) * _INV53


def to_exponential(h):
    return -np.log1p(-to_unit(h))


def to_gamma2(h):
    return to_exponential(absorb(h, 0)) + to_exponential(absorb(h, 1))


def uniform(seed, *labels):
    """Uniform variates on [0, 1) keyed by ``(seed, *labels)``."""
    return to_unit(hash_stream(seed, *labels))


def exponential(seed, *labels):
    """Standard exponential variates, ``-log(1 - U)``."""
    return to_exponential(hash_stream(seed, *labels))


def gamma2(seed, *labels):
    """Gamma(2, 1) variates: sum of exponentials from sub-streams 0 and 1."""
    return to_gamma2(hash_stream(seed, *labels))


@dataclass(frozen=True)
class RandKey:
    """Scalar handle on a single stream: a seed plus an ordered label tuple."""

    seed: int
    stream: tuple[int, ...] = ()

    def child(self, *labels: int) -> "RandKey":
        return RandKey(self.seed, self.stream + tuple(int(x) for x in labels))

    def hash(self) -> int:
        return int(hash_stream(self.seed, *self.stream))

    def uniform(self) -> float:
        return float(uniform(self.seed, *self.stream))

    def exponential(self) -> float:
        return float(exponential(self.seed, *self.stream))

    def gamma2(self) -> float:
        return float(gamma2(self.seed, *self.stream))
