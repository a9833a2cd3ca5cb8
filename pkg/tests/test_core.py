import random

import pytest

from quadperm.core import (
    F_eval, F_is_bijection, F_values, Triple, UndefinedPoint, degenerate, excluded_value,
    f_eval, f_eval_coeffs, g_eval, g_total, gamma_member, h_eval, is_perm_bruteforce,
    is_perm_bruteforce_coeffs, is_perm_structured, normalize_triple, phi, theta_circle_relation_holds,
    theta_identity_holds, theta_member_relation_holds, theta_of,
)
from quadperm.gf2field import FieldError
from quadperm.gf2tower import make_tower


def _all_triples(T):
    for a1 in T.base.elements():
        for a2 in T.elements():
            for a3 in T.elements():
                yield Triple(a1, a2, a3)


def _perm_oracle(t, T):
    # f written out with conj = x^(2^m) through pow, not the tower shortcut
    q = 1 << T.m
    A1 = T.embed(t.a1)
    vals = set()
    for x in T.elements():
        xb = T.pow(x, q)
        vals.add(T.pow(xb, 3) ^ T.mul(A1, T.mul(T.pow(xb, 2), x))
                 ^ T.mul(t.a2, T.mul(T.pow(x, 2), xb)) ^ T.mul(t.a3, T.pow(x, 3)))
    return len(vals) == T.order


def test_triple_encoding_roundtrip():
    T = make_tower(3)
    t = Triple(5, T.pack(1, 2), T.pack(7, 0))
    s = t.encode(T)
    assert s == "a1=5 a2=1,2 a3=7,0"
    assert Triple.decode(s, T) == t
    assert t.to_json(T) == {"a1": "5", "a2": "1,2", "a3": "7,0"}
    with pytest.raises(FieldError):
        Triple.decode("a1=5 a2=1,2", T)
    with pytest.raises(FieldError):
        Triple.from_hex("8", "0", "0", T)


def test_zero_triple_not_permutation():
    T = make_tower(1)
    t = Triple(0, 0, 0)
    # f = conj(x)^3 = x^(3 * 2^m) and gcd(3, 2^(2m) - 1) = 3
    assert not is_perm_bruteforce(t, T)
    assert not is_perm_structured(t, T)
    assert not gamma_member(t, T)


def test_first_permutation_m3():
    T = make_tower(3)
    first = next(t for t in _all_triples(T) if is_perm_bruteforce(t, T))
    assert first == Triple(0, 1, 1)
    assert first.encode(T) == "a1=0 a2=1,0 a3=1,0"
    assert gamma_member(first, T) and is_perm_structured(first, T)


def test_exhaustive_m1_against_oracle():
    T = make_tower(1)
    perms = [t for t in _all_triples(T) if _perm_oracle(t, T)]
    assert len(perms) == 4
    for t in _all_triples(T):
        p = t in perms
        assert is_perm_bruteforce(t, T) == p
        assert is_perm_structured(t, T) == p
        assert gamma_member(t, T) == p
        assert F_is_bijection(t, T) == p


@pytest.mark.parametrize("m", [2, 4])
def test_even_m(m):
    T = make_tower(m)
    rng = random.Random(m)
    for _ in range(50):
        t = Triple(rng.randrange(1 << m), rng.randrange(T.order), rng.randrange(T.order))
        assert not is_perm_structured(t, T)
        assert not is_perm_bruteforce(t, T)
    with pytest.raises(FieldError):
        gamma_member(Triple(0, 1, 1), T)


def test_degenerate_triples_fail():
    T = make_tower(3)
    rng = random.Random(0)
    for _ in range(100):
        a1, a2 = rng.randrange(8), rng.randrange(64)
        t = Triple(a1, a2, 1 ^ T.embed(a1) ^ a2)
        assert degenerate(t, T)
        assert f_eval(t, 0, T) == f_eval(t, 1, T) == 0
        assert not is_perm_structured(t, T)
        assert not is_perm_bruteforce(t, T)


def test_h_relation():
    # f(x) = x^3 h(x^(2^m - 1)) for x != 0
    T = make_tower(3)
    rng = random.Random(1)
    for _ in range(200):
        t = Triple(rng.randrange(8), rng.randrange(64), rng.randrange(64))
        x = rng.randrange(1, 64)
        assert f_eval(t, x, T) == T.mul(T.pow(x, 3), h_eval(t, T.pow(x, 7), T))


def test_g_total_matches_g_eval():
    T = make_tower(3)
    rng = random.Random(2)
    for _ in range(100):
        t = Triple(rng.randrange(8), rng.randrange(64), rng.randrange(64))
        for z in T.mu_list():
            try:
                g = g_eval(t, z, T)
            except UndefinedPoint:
                assert g_total(t, z, T) == 0
                continue
            assert g == g_total(t, z, T)
            assert T.norm(g) == 1


@pytest.mark.parametrize("m", [3, 5, 7])
def test_theta_identity_random(m):
    T = make_tower(m)
    rng = random.Random(m)
    for _ in range(500):
        th = theta_of(Triple(rng.randrange(1 << m), rng.randrange(T.order), rng.randrange(T.order)), T)
        assert theta_identity_holds(th, T)
        assert th.t2bar == T.conj(th.t2) and th.t3bar == T.conj(th.t3)
        assert T.is_base(th.t1) and T.is_base(th.t4)


def test_member_relations_m3():
    T = make_tower(3)
    members = [t for t in _all_triples(T) if gamma_member(t, T)]
    assert len(members) == 442
    nonvacuous = 0
    for t in members:
        th = theta_of(t, T)
        assert theta_member_relation_holds(th, T)
        r = theta_circle_relation_holds(th, T)
        assert r is not False
        nonvacuous += r is True
    assert nonvacuous > 0


def test_normalize_triple_preserves_permutation_status():
    T = make_tower(3)
    rng = random.Random(5)
    for _ in range(300):
        a1 = rng.randrange(1, 64)
        a2, a3 = rng.randrange(64), rng.randrange(64)
        t = normalize_triple(a1, a2, a3, T)
        assert 0 <= t.a1 < 8
        p = is_perm_bruteforce_coeffs(a1, a2, a3, T)
        assert is_perm_bruteforce(t, T) == p
        assert is_perm_structured(t, T) == p
    with pytest.raises(FieldError):
        normalize_triple(0, 1, 1, T)


def test_normalize_scaling_identity():
    T = make_tower(5)
    rng = random.Random(6)
    for _ in range(50):
        a1, a2, a3 = rng.randrange(1, T.order), rng.randrange(T.order), rng.randrange(T.order)
        t = normalize_triple(a1, a2, a3, T)
        beta = T.sqrt(T.inv(a1))
        cb3 = T.pow(T.conj(beta), 3)
        x = rng.randrange(T.order)
        assert f_eval_coeffs(a1, a2, a3, T.mul(beta, x), T) == T.mul(cb3, f_eval(t, x, T))


@pytest.mark.parametrize("m", [1, 3, 5, 7, 9])
def test_phi_bijects_onto_circle_minus_one(m):
    T = make_tower(m)
    img = {phi(T.embed(x), T) for x in T.base.elements()}
    assert len(img) == 1 << m
    assert 1 not in img
    assert img | {1} == set(T.mu_list())


def test_F_equals_g_of_phi():
    T = make_tower(3)
    rng = random.Random(8)
    for _ in range(200):
        t = Triple(rng.randrange(8), rng.randrange(64), rng.randrange(64))
        for x in T.base.elements():
            z = phi(T.embed(x), T)
            try:
                fv = F_eval(t, x, T)
            except UndefinedPoint:
                with pytest.raises(UndefinedPoint):
                    g_eval(t, z, T)
                continue
            assert fv == g_eval(t, z, T)


def test_excluded_value_is_g_at_one():
    T = make_tower(3)
    rng = random.Random(9)
    for _ in range(100):
        t = Triple(rng.randrange(8), rng.randrange(64), rng.randrange(64))
        if degenerate(t, T):
            continue
        assert excluded_value(t, T) == g_eval(t, 1, T)
        assert len(F_values(t, T)) == 8
