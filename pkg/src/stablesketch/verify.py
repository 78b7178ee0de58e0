"""Monte Carlo checks of sketch collision rates against the closed-form laws.

Random vector pairs are generated from keyed streams, so a report is a pure
function of ``(cases, trials, k, seed)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import keyed_rand
from .cws import CwsConfig, cws_sketch_cfg
from .dataset_io import l1_normalize
from .estimator import collision_fraction
from .kernels import collision_law, minmax_kernel
from .sign_projection import SketchConfig, project_sign
from .sparse import SparseVector
from .stable import ALPHA_ZERO_PLUS, stable_variates

DOMAIN_VERIFY = 0x56455249

#: Extra absolute allowance on top of 4 binomial standard deviations.
ALLOWANCE = {"two": 0.0, "one": 0.015, "zero_plus": 0.01, "cws": 0.01}
N_SIGMA = 4.0

DIMS = {"two": 16, "one": 64, "zero_plus": 64, "cws": 256}
_CASE_CODE = {"two": 2, "one": 1, "zero_plus": 3, "cws": 4}


@dataclass
class VerifyCase:
    method: str
    case: str
    alpha: float | None
    pair: int
    theoretical: float
    empirical: float
    k: int
    tolerance: float
    passed: bool


def binomial_tolerance(p: float, k: int, allowance: float = 0.0) -> float:
    return N_SIGMA * math.sqrt(max(p * (1.0 - p), 0.0) / k) + allowance


def _normal(seed, *labels):
    # S(2, 1) is N(0, 2).
    return stable_variates(2.0, seed, *labels) / math.sqrt(2.0)


def _u(seed, *labels) -> float:
    return float(keyed_rand.uniform(seed, *labels))


def _nonneg_pair(seed, case, pair, dim, density):
    """Two correlated nonnegative vectors with partially shared supports."""
    coords = np.arange(dim, dtype=np.int64)
    base = (DOMAIN_VERIFY, _CASE_CODE[case], pair)
    mix = _u(seed, *base, -1)
    a = keyed_rand.exponential(seed, *base, coords, 0)
    b = keyed_rand.exponential(seed, *base, coords, 1)
    keep_a = keyed_rand.uniform(seed, *base, coords, 2) < density
    keep_b = keyed_rand.uniform(seed, *base, coords, 3) < density
    u = np.where(keep_a, a, 0.0)
    v = mix * u + (1.0 - mix) * np.where(keep_b, b, 0.0)
    u[0] = u[0] or 1.0  # never all-zero
    v[dim - 1] = v[dim - 1] or 1.0
    return SparseVector.from_dense(u), SparseVector.from_dense(v)


def _histogram_pair(seed, case, pair, dim, density):
    """Sparse histogram ``u`` and a noisy copy ``v``: each bin either keeps
    u's mass under lognormal(0, 0.2) noise or is redrawn independently."""
    coords = np.arange(dim, dtype=np.int64)
    base = (DOMAIN_VERIFY, _CASE_CODE[case], pair)
    keep_prob = _u(seed, *base, -1)
    u = np.exp(0.3 * _normal(seed, *base, coords, 0))
    u *= keyed_rand.uniform(seed, *base, coords, 1) < density
    fresh = np.exp(0.3 * _normal(seed, *base, coords, 2))
    fresh *= keyed_rand.uniform(seed, *base, coords, 3) < density
    noisy = u * np.exp(0.2 * _normal(seed, *base, coords, 4))
    v = np.where(keyed_rand.uniform(seed, *base, coords, 5) < keep_prob, noisy, fresh)
    u[0] = u[0] or 1.0
    v[dim - 1] = v[dim - 1] or 1.0
    return SparseVector.from_dense(u), SparseVector.from_dense(v)


def make_pair(case: str, pair: int, seed: int):
    """The ``pair``-th random vector pair used to check ``case``.

    ``two``: dense signed Gaussian vectors with correlation spread over [-1, 1].
    ``one``: l1-normalized sparse histograms, the second a noisy copy of the first.
    ``zero_plus``: sparse nonnegative vectors.
    ``cws``: nonnegative vectors with about 128 nonzeros.
    """
    dim = DIMS[case]
    if case == "two":
        coords = np.arange(dim, dtype=np.int64)
        base = (DOMAIN_VERIFY, _CASE_CODE[case], pair)
        c = 2.0 * _u(seed, *base, -1) - 1.0
        z1 = _normal(seed, *base, coords, 0)
        z2 = _normal(seed, *base, coords, 1)
        return SparseVector.from_dense(z1), SparseVector.from_dense(c * z1 + math.sqrt(1 - c * c) * z2)
    if case == "one":
        u, v = _histogram_pair(seed, case, pair, dim, density=0.3)
        return l1_normalize(u), l1_normalize(v)
    if case == "zero_plus":
        return _nonneg_pair(seed, case, pair, dim, density=0.3)
    if case == "cws":
        return _nonneg_pair(seed, case, pair, dim, density=0.5)
    raise ValueError(f"unknown case {case!r}")


def _pair_seed(seed: int, case: str, pair: int) -> int:
    return int(keyed_rand.hash_stream(seed, DOMAIN_VERIFY, _CASE_CODE[case], pair, -2) >> np.uint64(1))


def run_case(case: str, pair: int, k: int, seed: int) -> VerifyCase:
    u, v = make_pair(case, pair, seed)
    sketch_seed = _pair_seed(seed, case, pair)
    if case == "cws":
        cfg = CwsConfig(k, sketch_seed, u.dim)
        emp = collision_fraction(cws_sketch_cfg(u, cfg), cws_sketch_cfg(v, cfg))
        theo = minmax_kernel(u, v)
        alpha = None
        method = "cws"
    else:
        alpha = {"two": 2.0, "one": 1.0, "zero_plus": ALPHA_ZERO_PLUS}[case]
        cfg = SketchConfig(alpha, k, sketch_seed, u.dim)
        emp = collision_fraction(project_sign(u, cfg), project_sign(v, cfg))
        theo = collision_law(case, u, v).value
        method = "sign"
    tol = binomial_tolerance(theo, k, ALLOWANCE[case])
    return VerifyCase(method, case, alpha, pair, theo, emp, k, tol, abs(theo - emp) <= tol)


def run_verify(cases, trials: int, k: int, seed: int) -> list[VerifyCase]:
    if k < 1000:
        raise ValueError("verification needs k >= 1000")
    return [run_case(case, p, k, seed) for case in cases for p in range(trials)]


def report_json(results) -> dict:
    return {
        "passed": all(r.passed for r in results),
        "n_cases": len(results),
        "n_failed": sum(not r.passed for r in results),
        "cases": [asdict(r) for r in results],
    }
