import numpy as np
import pytest

from hocle.base_clustering import coassociation, indicator
from hocle.high_order import (ORDER1, ORDER2_CLUSTER, ORDER2_PAIR, ORDER_M,
                              build_family, order1, order2_cluster,
                              order2_pair, order_m)

J2 = np.ones((2, 2))
I2 = np.eye(2)
S3 = np.array([[1.0, 1, 0], [1, 1, 0], [0, 0, 1]])


def random_ensemble(rng, m, n=12, c=3):
    return [coassociation(indicator(rng.integers(0, c, n), c)) for _ in range(m)]


class TestOrder1:
    def test_identity(self):
        fam = order1([S3])
        assert fam.order == ORDER1 and fam.k == 1
        np.testing.assert_array_equal(fam.matrices[0], S3)

    def test_count(self):
        assert order1([S3] * 5).k == 5


class TestOrder2Cluster:
    def test_product_with_identity(self):
        np.testing.assert_array_equal(order2_cluster([J2, I2]).matrices[0], J2)

    def test_identical_members(self):
        # direct product oracle
        np.testing.assert_array_equal(order2_cluster([S3, S3]).matrices[0],
                                      S3 @ S3)
        np.testing.assert_array_equal(order2_cluster([S3, S3]).matrices[0],
                                      [[2, 2, 0], [2, 2, 0], [0, 0, 1]])

    def test_symmetrised_and_counts_intersections(self):
        rng = np.random.default_rng(0)
        la, lb = rng.integers(0, 3, 10), rng.integers(0, 3, 10)
        Sa, Sb = (coassociation(indicator(l, 3)) for l in (la, lb))
        A = order2_cluster([Sa, Sb]).matrices[0]
        np.testing.assert_array_equal(A, A.T)
        for a in range(10):
            for b in range(10):
                ab = np.sum((la == la[a]) & (lb == lb[b]))
                ba = np.sum((lb == lb[a]) & (la == la[b]))
                assert A[a, b] == 0.5 * (ab + ba)

    def test_too_few_members(self):
        fam = order2_cluster([S3])
        assert fam.k == 0 and fam.too_few_members


class TestOrder2Pair:
    def test_and_with_identity(self):
        np.testing.assert_array_equal(order2_pair([J2, I2]).matrices[0], I2)

    def test_idempotent(self):
        np.testing.assert_array_equal(order2_pair([S3, S3]).matrices[0], S3)

    def test_too_few_members(self):
        assert order2_pair([S3]).too_few_members


class TestOrderM:
    def test_idempotent(self):
        np.testing.assert_array_equal(order_m([S3] * 4).matrices[0], S3)

    def test_identity_absorbs(self):
        np.testing.assert_array_equal(order_m([S3, np.eye(3), S3]).matrices[0],
                                      np.eye(3))

    def test_example(self):
        fam = order_m([J2, I2, J2])
        assert fam.order == ORDER_M and fam.k == 1
        np.testing.assert_array_equal(fam.matrices[0], I2)

    def test_does_not_modify_input(self):
        S = S3.copy()
        order_m([S, np.eye(3)])
        np.testing.assert_array_equal(S, S3)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_counts_closed_form(m):
    rng = np.random.default_rng(m)
    S = random_ensemble(rng, m)
    assert order1(S).k == m
    assert order2_cluster(S).k == (m * m - m) // 2
    assert order2_pair(S).k == (m * m - m) // 2
    assert order_m(S).k == 1


@pytest.mark.parametrize("seed", range(5))
def test_family_invariants(seed):
    rng = np.random.default_rng(seed)
    S = random_ensemble(rng, 4)
    for code in ["1", "2c", "2p", "m"]:
        for A in build_family(code, S).matrices:
            np.testing.assert_array_equal(A, A.T)
            assert A.min() >= 0
            assert np.all(np.diag(A) >= 1)
    A2 = order2_cluster(S).matrices
    assert all(np.array_equal(A, np.round(2 * A) / 2) for A in A2)
    for A in order2_pair(S).matrices + order_m(S).matrices:
        assert set(np.unique(A)) <= {0.0, 1.0}


@pytest.mark.parametrize("seed", range(5))
def test_and_monotone(seed):
    rng = np.random.default_rng(seed)
    S = random_ensemble(rng, 5)
    A4 = order_m(S).matrices[0]
    for A3 in order2_pair(S).matrices:
        assert np.all(A4 <= A3)
    for A3, (i, j) in zip(order2_pair(S).matrices,
                          [(i, j) for i in range(5) for j in range(i + 1, 5)]):
        assert np.all(A3 <= S[i]) and np.all(A3 <= S[j])


def test_build_family_accepts_tags_and_codes():
    assert build_family("2p", [S3, S3]).order == ORDER2_PAIR
    assert build_family(ORDER2_CLUSTER, [S3, S3]).order == ORDER2_CLUSTER
