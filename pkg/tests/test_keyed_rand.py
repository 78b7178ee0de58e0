import numpy as np
import pytest
from scipy import stats

from stablesketch import keyed_rand
from stablesketch.keyed_rand import RandKey

N = 10**6


def test_same_key_same_value():
    key = RandKey(42, (3, 7, 1))
    assert key.uniform() == key.uniform()
    assert key.hash() == RandKey(42, (3, 7, 1)).hash()


def test_scalar_and_vector_paths_agree():
    j = np.arange(50)
    vec = keyed_rand.uniform(9, 5, j)
    assert [RandKey(9, (5, int(x))).uniform() for x in j] == vec.tolist()


def test_order_independence():
    labels = np.arange(1000)
    perm = np.random.default_rng(0).permutation(labels)
    assert np.array_equal(keyed_rand.uniform(1, labels)[perm], keyed_rand.uniform(1, perm))


def test_absorb_continues_stream():
    assert keyed_rand.absorb(keyed_rand.hash_stream(5, 1), 2) == keyed_rand.hash_stream(5, 1, 2)


def test_label_order_matters():
    assert keyed_rand.hash_stream(0, 1, 2) != keyed_rand.hash_stream(0, 2, 1)


def test_negative_labels_are_64bit_wrapped():
    assert keyed_rand.hash_stream(0, -1) == keyed_rand.hash_stream(0, (1 << 64) - 1)
    assert keyed_rand.hash_stream(0, np.array([-1]))[0] == keyed_rand.hash_stream(0, -1)


def test_float_labels_rejected():
    with pytest.raises(TypeError):
        keyed_rand.uniform(0, np.array([0.5]))


def test_uniform_range_and_moments():
    u = keyed_rand.uniform(2024, np.arange(N))
    assert u.min() >= 0.0 and u.max() < 1.0
    assert abs(u.mean() - 0.5) < 0.002
    assert stats.kstest(u, "uniform").statistic < 0.002


def test_unit_mapping_uses_top_53_bits():
    h = np.array([0, (1 << 64) - 1, 1 << 63], dtype=np.uint64)
    np.testing.assert_array_equal(keyed_rand.to_unit(h), [0.0, 1 - 2.0**-53, 0.5])


def test_exponential_boundary():
    assert keyed_rand.to_exponential(np.array([0], dtype=np.uint64))[0] == 0.0


def test_exponential_moments():
    e = keyed_rand.exponential(7, np.arange(N))
    assert e.min() >= 0
    assert abs(e.mean() - 1.0) < 0.005
    assert abs(e.var() - 1.0) < 0.02


def test_gamma2_is_sum_of_substreams():
    j = np.arange(10)
    expected = keyed_rand.exponential(3, j, 0) + keyed_rand.exponential(3, j, 1)
    np.testing.assert_array_equal(keyed_rand.gamma2(3, j), expected)


def test_gamma2_moments():
    g = keyed_rand.gamma2(11, np.arange(N))
    assert abs(g.mean() - 2.0) < 0.01
    assert abs(g.var() - 2.0) < 0.05
