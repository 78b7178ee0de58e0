"""Exact similarity kernels and the closed-form sign collision probabilities.

Every function accepts dense array-likes or :class:`SparseVector` inputs.
Sparse pairs are aligned on the union of their supports, so cost is
``O(nnz(u) + nnz(v))`` regardless of the ambient dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import NoClosedFormError
from .sparse import SparseVector

KINDS = ("rho2", "chi2", "resemblance", "minmax", "normalized_minmax")
COLLISION_CASES = {"two": "rho2", "one": "chi2", "zero_plus": "resemblance"}

_L1_TOL = 1e-9


@dataclass(frozen=True)
class KernelValue:
    value: float
    kind: str
    approximate: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")

    def __float__(self):
        return self.value


def _aligned(u, v) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(u, SparseVector) and isinstance(v, SparseVector):
        if u.dim != v.dim:
            raise ValueError(f"dimension mismatch: {u.dim} vs {v.dim}")
        support = np.union1d(u.indices, v.indices)
        a = np.zeros(support.size)
        b = np.zeros(support.size)
        a[np.searchsorted(support, u.indices)] = u.values
        b[np.searchsorted(support, v.indices)] = v.values
        return a, b
    a = u.to_dense() if isinstance(u, SparseVector) else np.asarray(u, dtype=np.float64).ravel()
    b = v.to_dense() if isinstance(v, SparseVector) else np.asarray(v, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.size} vs {b.size}")
    return a, b


def _require_nonnegative(*arrays):
    for x in arrays:
        if np.any(x < 0):
            raise ValueError("kernel is defined for nonnegative data only")


def rho2(u, v) -> float:
    """Cosine similarity, clamped to [-1, 1]."""
    a, b = _aligned(u, v)
    aa, bb = np.dot(a, a), np.dot(b, b)
    if aa == 0 or bb == 0:
        raise ValueError("rho2 is undefined for a zero-norm vector")
    # one sqrt of the product keeps rho2(u, u) == 1 exactly
    return float(np.clip(np.dot(a, b) / np.sqrt(aa * bb), -1.0, 1.0))


def chi2_kernel(u, v) -> float:
    """``sum 2 u_i v_i / (u_i + v_i)`` for l1-normalized nonnegative vectors."""
    a, b = _aligned(u, v)
    _require_nonnegative(a, b)
    for x in (a, b):
        if abs(x.sum() - 1.0) > _L1_TOL:
            raise ValueError("chi2 kernel requires l1-normalized inputs; call l1_normalize first")
    s = a + b
    mask = s > 0
    return float(np.sum(2.0 * a[mask] * b[mask] / s[mask]))


def resemblance(u, v) -> float:
    """Jaccard similarity of the nonzero patterns."""
    a, b = _aligned(u, v)
    _require_nonnegative(a, b)
    pa, pb = a > 0, b > 0
    union = np.count_nonzero(pa | pb)
    if union == 0:
        raise ValueError("resemblance is undefined when both vectors are all-zero")
    return np.count_nonzero(pa & pb) / union


def minmax_kernel(u, v) -> float:
    a, b = _aligned(u, v)
    _require_nonnegative(a, b)
    denom = np.maximum(a, b).sum()
    if denom == 0:
        raise ValueError("min-max kernel is undefined when both vectors are all-zero")
    return float(np.minimum(a, b).sum() / denom)


def normalized_minmax(u, v) -> float:
    """Min-max kernel after scaling each vector to unit l1 norm."""
    a, b = _aligned(u, v)
    _require_nonnegative(a, b)
    sa, sb = a.sum(), b.sum()
    if sa == 0 or sb == 0:
        raise ValueError("normalized min-max kernel needs positive sums")
    return minmax_kernel(a / sa, b / sb)


def arccos_collision(similarity: float) -> float:
    """``1 - arccos(similarity) / pi``."""
    return 1.0 - math.acos(min(1.0, max(-1.0, similarity))) / math.pi


def collision_law(alpha_case, u, v) -> KernelValue:
    """Closed-form ``Pr(sign x_j == sign y_j)`` where one is known.

    ``alpha_case`` is ``"two"``, ``"one"`` or ``"zero_plus"`` (numeric 2, 1 and
    ``"0+"`` are accepted too). The alpha=1 law only holds approximately and is
    flagged ``approximate=True``.

    Raises:
        NoClosedFormError: for any other alpha.
    """
    case = _case_name(alpha_case)
    if case == "two":
        return KernelValue(arccos_collision(rho2(u, v)), "rho2")
    if case == "one":
        return KernelValue(arccos_collision(chi2_kernel(u, v)), "chi2", approximate=True)
    return KernelValue(0.5 + 0.5 * resemblance(u, v), "resemblance")


def _case_name(alpha_case) -> str:
    if alpha_case in COLLISION_CASES:
        return alpha_case
    if alpha_case == "0+":
        return "zero_plus"
    try:
        alpha = float(alpha_case)
    except (TypeError, ValueError):
        raise NoClosedFormError(f"unknown collision case {alpha_case!r}") from None
    if alpha == 2.0:
        return "two"
    if alpha == 1.0:
        return "one"
    raise NoClosedFormError(f"no known closed-form collision probability for alpha={alpha_case}")
