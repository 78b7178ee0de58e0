"""scikit-learn transformers producing the one-hot sketch features.

The transformed matrices are binary and sparse; an inner product of two rows
divided by ``n_components`` is the collision fraction of the two sketches, so
a linear model trained on them approximates the corresponding nonlinear
kernel machine.

>>> import numpy as np
>>> from stablesketch.transformers import SignStableRandomProjection
>>> X = np.array([[1.0, 0.0, 2.0], [0.5, 1.0, 0.0]])
>>> Z = SignStableRandomProjection(alpha=1.0, n_components=64).fit_transform(X)
>>> Z.shape, int(Z.sum())
((2, 128), 128)
"""

from __future__ import annotations

import numbers

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .cws import DEFAULT_BUCKETS, CwsConfig, cws_corpus, encode_cws
from .sign_projection import SketchConfig, encode_sign, sketch_corpus
from .sparse import SparseVector
from .stable import parse_alpha


def iter_rows(X):
    """Yield the rows of a dense array or CSR matrix as SparseVectors."""
    n_features = X.shape[1]
    if sp.issparse(X):
        X = X.tocsr(copy=True)
        X.sum_duplicates()
        X.sort_indices()
        X.eliminate_zeros()
        for r in range(X.shape[0]):
            lo, hi = X.indptr[r], X.indptr[r + 1]
            yield SparseVector(n_features, X.indices[lo:hi], X.data[lo:hi])
    else:
        for row in X:
            yield SparseVector.from_dense(row)


def _encoded_matrix(encoded) -> sp.csr_matrix:
    n = len(encoded)
    length = encoded[0].length if n else 0
    per_row = encoded[0].n_blocks if n else 0
    indices = np.concatenate([e.ones for e in encoded]) if n else np.empty(0, dtype=np.int64)
    indptr = np.arange(n + 1, dtype=np.int64) * per_row
    data = np.ones(indices.size)
    return sp.csr_matrix((data, indices, indptr), shape=(n, length))


def _check_seed(random_state) -> int:
    if random_state is None:
        return 0
    if isinstance(random_state, numbers.Integral):
        return int(random_state)
    raise TypeError("random_state must be an int (sketches are keyed, not drawn from a RandomState)")


def _row_errors(fn, rows):
    try:
        return fn(rows)
    except ValueError as exc:
        # Re-run serially only to locate the offending row.
        for r, row in enumerate(rows):
            try:
                fn([row])
            except ValueError as inner:
                raise ValueError(f"row {r}: {inner}") from exc
        raise


class SignStableRandomProjection(TransformerMixin, BaseEstimator):
    """Sign alpha-stable random projections.

    Parameters
    ----------
    alpha : float or "0+", default=1.0
        Stability index in (0, 2]. ``"0+"`` selects a small surrogate alpha.
    n_components : int, default=256
        Number of projections ``k``; the output has ``2 * k`` columns.
    random_state : int, default=0
        Seed of the keyed projection matrix.
    n_jobs : int, default=None
        Threads used to sketch rows. Output does not depend on it.

    Attributes
    ----------
    config_ : SketchConfig
    n_features_in_ : int
    """

    def __init__(self, alpha=1.0, n_components=256, random_state=0, n_jobs=None):
        self.alpha = alpha
        self.n_components = n_components
        self.random_state = random_state
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        X = check_array(X, accept_sparse="csr", dtype=np.float64)
        self.n_features_in_ = X.shape[1]
        self.config_ = SketchConfig(
            parse_alpha(self.alpha), self.n_components, _check_seed(self.random_state), X.shape[1]
        )
        return self

    def sketch(self, X):
        """Sign sketches of the rows of ``X``."""
        check_is_fitted(self, "config_")
        X = check_array(X, accept_sparse="csr", dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        rows = list(iter_rows(X))
        return _row_errors(lambda rs: sketch_corpus(rs, self.config_, self.n_jobs), rows)

    def transform(self, X):
        """Sparse binary matrix of shape ``(n_samples, 2 * n_components)``."""
        return _encoded_matrix([encode_sign(s) for s in self.sketch(X)])


class ZeroBitCWS(TransformerMixin, BaseEstimator):
    """0-bit consistent weighted sampling for nonnegative data.

    Each sample is one-hot encoded into ``n_buckets`` columns by hashing the
    selected coordinate, so the output has ``n_components * n_buckets``
    columns.
    """

    def __init__(self, n_components=256, n_buckets=DEFAULT_BUCKETS, random_state=0, n_jobs=None):
        self.n_components = n_components
        self.n_buckets = n_buckets
        self.random_state = random_state
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        X = check_array(X, accept_sparse="csr", dtype=np.float64)
        if (X.data if sp.issparse(X) else X).min(initial=0.0) < 0:
            raise ValueError("ZeroBitCWS requires nonnegative input")
        if self.n_buckets < 2:
            raise ValueError("n_buckets must be at least 2")
        self.n_features_in_ = X.shape[1]
        self.config_ = CwsConfig(self.n_components, _check_seed(self.random_state), X.shape[1])
        return self

    def sketch(self, X):
        check_is_fitted(self, "config_")
        X = check_array(X, accept_sparse="csr", dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        rows = list(iter_rows(X))
        return _row_errors(lambda rs: cws_corpus(rs, self.config_, self.n_jobs), rows)

    def transform(self, X):
        return _encoded_matrix([encode_cws(s, self.n_buckets) for s in self.sketch(X)])
