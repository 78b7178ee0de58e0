"""Collision-fraction estimates between sketches.

The fraction of agreeing sketch positions is an inner product of the one-hot
encodings divided by ``k``, so it is a valid positive semidefinite kernel for
any alpha. Sign sketches are compared on packed bits (``k - popcount(xor)``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cws import CwsSketch
from .exceptions import ConfigMismatchError
from .sign_projection import SignSketch
from .sparse import EncodedFeatures

__all__ = [
    "EncodedFeatures",
    "KernelMatrix",
    "agreements",
    "collision_fraction",
    "kernel_matrix",
]


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    values: np.ndarray
    kind: str

    @property
    def n(self) -> int:
        return int(self.values.shape[0])


def _check_pair(s1, s2):
    if type(s1) is not type(s2) or not isinstance(s1, (SignSketch, CwsSketch)):
        raise ConfigMismatchError("can only compare two sign sketches or two CWS sketches")
    if s1.fingerprint != s2.fingerprint or s1.k != s2.k:
        raise ConfigMismatchError("sketches were built under different configurations")


def agreements(s1, s2) -> int:
    """Number of sketch positions where ``s1`` and ``s2`` agree."""
    _check_pair(s1, s2)
    if isinstance(s1, SignSketch):
        return s1.k - int(np.bitwise_count(s1.packed ^ s2.packed).sum())
    return int(np.count_nonzero(s1.ids == s2.ids))


def collision_fraction(s1, s2) -> float:
    return agreements(s1, s2) / s1.k


def kernel_matrix(sketches) -> KernelMatrix:
    """Pairwise collision fractions of a list of same-config sketches."""
    sketches = list(sketches)
    if not sketches:
        raise ValueError("need at least one sketch")
    first = sketches[0]
    for s in sketches[1:]:
        _check_pair(first, s)
    k = first.k
    if isinstance(first, SignSketch):
        # agreements = (k + <a, b>) / 2 for +-1 vectors; integer-exact.
        pm = np.stack([s.bits for s in sketches]).astype(np.int64) * 2 - 1
        agree = (k + pm @ pm.T) // 2
        kind = "sign"
    else:
        ids = np.stack([s.ids for s in sketches])
        n = len(sketches)
        agree = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            agree[a] = np.count_nonzero(ids == ids[a], axis=1)
        kind = "cws"
    return KernelMatrix(agree / k, kind)
