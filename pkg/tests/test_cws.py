import math

import numpy as np
import pytest

from stablesketch import SparseVector, cws_sample, cws_sketch, encode_cws
from stablesketch.cws import CwsConfig, CwsSketch, cws_corpus, hash64
from stablesketch.estimator import collision_fraction
from stablesketch.kernels import minmax_kernel

from .conftest import random_sparse


def _reference_sample(weights: dict, seed, j):
    """Ioffe's recipe evaluated literally, one coordinate at a time."""
    from stablesketch import keyed_rand

    best = None
    for i, s in weights.items():
        base = keyed_rand.hash_stream(seed, 0x43575321, j, i)
        r = float(keyed_rand.to_gamma2(keyed_rand.absorb(base, 0)))
        c = float(keyed_rand.to_gamma2(keyed_rand.absorb(base, 1)))
        beta = float(keyed_rand.to_unit(keyed_rand.absorb(base, 2)))
        t = math.floor(math.log(s) / r + beta)
        y = math.exp(r * (t - beta))
        a = c / (y * math.exp(r))
        if best is None or a < best[0]:
            best = (a, i, t)
    return best[1], best[2]


def test_matches_literal_recipe():
    w = {0: 0.3, 2: 1.7, 5: 4.0, 9: 0.01}
    v = SparseVector.from_pairs(10, w.items())
    for j in range(200):
        assert cws_sample(v, 13, j) == _reference_sample(w, 13, j)


def test_single_candidate():
    v = SparseVector.from_dense([0.0, 5.0, 0.0])
    assert cws_sample(v, 1, 0)[0] == 1
    assert set(cws_sketch(v, 64, 2).ids.tolist()) == {1}


def test_disjoint_supports_never_collide():
    u = SparseVector.from_dense([1.0, 2.0, 0.0, 0.0])
    v = SparseVector.from_dense([0.0, 0.0, 3.0, 0.5])
    assert collision_fraction(cws_sketch(u, 500, 4), cws_sketch(v, 500, 4)) == 0.0


def test_value_determinism():
    a = cws_sketch(np.array([1.0, 1.0]), 100, 7)
    b = cws_sketch(np.array([1.0, 1.0]), 100, 7)
    assert a == b
    for j in range(20):
        assert cws_sample([1.0, 1.0], 7, j) == cws_sample([1.0, 1.0], 7, j)


def test_errors():
    with pytest.raises(ValueError):
        cws_sketch([1.0, 2.0], 0, 1)
    with pytest.raises(ValueError, match="nonnegative"):
        cws_sketch([1.0, -2.0], 4, 1)
    with pytest.raises(ValueError):
        cws_sketch([0.0, 0.0], 4, 1)


def test_ids_in_support(rng):
    v = random_sparse(rng, 100, density=0.2, nonneg=True)
    s = cws_sketch(v, 1000, 3)
    assert set(s.ids.tolist()) <= set(v.indices.tolist())


def test_marginal_law():
    u = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
    n = 100_000
    counts = np.bincount(cws_sketch(u, n, 11).ids, minlength=5) / n
    p = u / u.sum()
    assert np.all(np.abs(counts - p) <= 4 * np.sqrt(p * (1 - p) / n))


def test_kernel_law_small_k(rng):
    # 128 nonzeros keep the 0-bit bias below the allowance
    u = np.abs(rng.standard_normal(256)) * (rng.random(256) < 0.5)
    v = 0.6 * u + 0.4 * np.abs(rng.standard_normal(256)) * (rng.random(256) < 0.5)
    k = 20_000
    p = minmax_kernel(u, v)
    f = collision_fraction(cws_sketch(u, k, 1), cws_sketch(v, k, 1))
    assert abs(f - p) <= 4 * math.sqrt(p * (1 - p) / k) + 0.01


def test_thread_independence(rng):
    cfg = CwsConfig(300, 5, 50)
    vectors = [random_sparse(rng, 50, nonneg=True) for _ in range(10)]
    assert cws_corpus(vectors, cfg, n_jobs=8) == cws_corpus(vectors, cfg)


def _splitmix_finalizer(z):
    m = (1 << 64) - 1
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & m
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & m
    return z ^ (z >> 31)


def test_hash64_is_splitmix_finalizer():
    ids = [0, 1, 2, 255, 12345, 2**40 + 7]
    assert hash64(np.array(ids)).tolist() == [_splitmix_finalizer(i) for i in ids]


def test_encode_cws_shape():
    s = CwsSketch(np.array([3, 3, 10, 0]), "f")
    enc = encode_cws(s, buckets=16)
    assert enc.length == 64 and enc.ones.size == 4
    assert enc.dot(enc) == 4
    with pytest.raises(ValueError):
        encode_cws(s, buckets=1)


def test_encode_cws_disjoint_ids_rarely_collide():
    k, B = 64, 1 << 16
    trials, hits = 500, 0
    for t in range(trials):
        a = CwsSketch(np.arange(k) + t * 1000, "f")
        b = CwsSketch(np.arange(k) + t * 1000 + 500, "f")
        hits += encode_cws(a, B).dot(encode_cws(b, B)) > 0
    assert hits / trials <= k / B + 4 * math.sqrt(k / B / trials)
