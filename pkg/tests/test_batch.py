import numpy as np
import pytest

from quadperm.batch import Batch, sample_members
from quadperm.core import Triple, gamma_member, is_perm_bruteforce, is_perm_structured, theta_of
from quadperm.gf2tower import DIRECT, make_tower


def _random_triples(T, n, seed):
    rng = np.random.default_rng(seed)
    return (rng.integers(0, 1 << T.m, n), rng.integers(0, T.order, n), rng.integers(0, T.order, n))


@pytest.mark.parametrize("m,mode", [(3, None), (5, None), (4, None), (3, DIRECT)])
def test_arithmetic_matches_scalar(m, mode):
    T = make_tower(m, mode)
    B = Batch(T)
    rng = np.random.default_rng(m)
    a = rng.integers(0, T.order, 500)
    b = rng.integers(0, T.order, 500)
    prod, inv, conj, p5 = B.mul(a, b), B.inv(a), B.conj(a), B.pow(a, 5)
    for i in range(500):
        x, y = int(a[i]), int(b[i])
        assert prod[i] == T.mul(x, y)
        assert conj[i] == T.conj(x)
        assert p5[i] == T.pow(x, 5)
        if x:
            assert inv[i] == T.inv(x)
    assert np.all(B.pow(a, 0) == 1)


@pytest.mark.parametrize("m", [3, 5])
def test_theta_and_gamma_match_scalar(m):
    T = make_tower(m)
    B = Batch(T)
    a1, a2, a3 = _random_triples(T, 2000, m)
    t1, t2, t3, t4 = B.theta(a1, a2, a3)
    g = B.gamma(a1, a2, a3)
    for i in range(0, 2000, 7):
        t = Triple(int(a1[i]), int(a2[i]), int(a3[i]))
        th = theta_of(t, T)
        assert (t1[i], t2[i], t3[i], t4[i]) == (th.t1, th.t2, th.t3, th.t4)
    for i in range(2000):
        assert g[i] == gamma_member(Triple(int(a1[i]), int(a2[i]), int(a3[i])), T)


def test_gamma_direct_mode_agrees():
    T = make_tower(3)
    D = make_tower(3, DIRECT)
    from quadperm.gf2tower import tower_to_direct
    iso = tower_to_direct(3)
    a1, a2, a3 = _random_triples(T, 3000, 1)
    gt = Batch(T).gamma(a1, a2, a3)
    b1 = np.array([D.to_base(iso(T.embed(int(x)))) for x in a1])
    b2 = np.array([iso(int(x)) for x in a2])
    b3 = np.array([iso(int(x)) for x in a3])
    assert np.array_equal(gt, Batch(D).gamma(b1, b2, b3))


@pytest.mark.parametrize("m", [1, 3])
def test_perm_tests_match_scalar(m):
    T = make_tower(m)
    B = Batch(T)
    a1, a2, a3 = _random_triples(T, 400, 11)
    # force some members in
    extra = sample_members(T, 20, np.random.default_rng(0), B)
    a1 = np.concatenate([a1, [e[0] for e in extra]])
    a2 = np.concatenate([a2, [e[1] for e in extra]])
    a3 = np.concatenate([a3, [e[2] for e in extra]])
    ps, pb = B.perm_structured(a1, a2, a3), B.perm_bruteforce(a1, a2, a3)
    assert ps.sum() >= 20
    for i in range(len(a1)):
        t = Triple(int(a1[i]), int(a2[i]), int(a3[i]))
        assert ps[i] == is_perm_structured(t, T)
        assert pb[i] == is_perm_bruteforce(t, T)


def test_even_m_structured_all_false():
    T = make_tower(2)
    B = Batch(T)
    a1, a2, a3 = _random_triples(T, 100, 3)
    assert not B.perm_structured(a1, a2, a3).any()
    assert not B.perm_bruteforce(a1, a2, a3).any()


@pytest.mark.parametrize("m", [3, 5, 7])
def test_sample_members_are_members(m):
    T = make_tower(m)
    got = sample_members(T, 50, np.random.default_rng(m))
    assert len(got) == 50
    assert all(gamma_member(Triple(*t), T) for t in got)
    again = sample_members(T, 50, np.random.default_rng(m))
    assert got == again
