import random

import pytest

from quadperm.gf2field import FieldError
from quadperm.gf2tower import DIRECT, TOWER, make_tower, tower_to_direct


def test_modes():
    assert make_tower(3).mode == TOWER
    assert make_tower(4).mode == DIRECT
    with pytest.raises(FieldError):
        make_tower(4, TOWER)
    assert make_tower(3).to_json()["mode"] == "tower"
    assert "modulus_2m" in make_tower(2).to_json()


def test_omega_basics():
    T = make_tower(3)
    w = T.omega()
    assert T.unpack(w) == (0, 1)
    assert T.mul(w, w) == T.pack(1, 1)
    assert T.pow(w, 3) == 1
    assert w ^ T.mul(w, w) == 1
    assert T.conj(w) == T.mul(w, w)
    assert T.norm(w) == 1
    assert T.rel_trace(w) == 1
    with pytest.raises(FieldError):
        make_tower(2).omega()


def test_direct_mode_omega_for_odd_m():
    D = make_tower(3, DIRECT)
    w = D.omega()
    assert D.mul(w, w) ^ w ^ 1 == 0
    assert not D.is_base(w)


def test_encoding():
    T = make_tower(3)
    z = T.pack(5, 3)
    assert T.encode(z) == "5,3"
    assert T.decode("5,3") == z
    with pytest.raises(FieldError):
        T.decode("5")
    D = make_tower(2)
    assert D.encode(11) == "b"
    assert D.decode("b") == 11


@pytest.mark.parametrize("m", [1, 3, 5, 7, 9])
def test_conj_is_automorphism(m):
    T = make_tower(m)
    rng = random.Random(m)
    for _ in range(300):
        a, b = rng.randrange(T.order), rng.randrange(T.order)
        assert T.conj(T.mul(a, b)) == T.mul(T.conj(a), T.conj(b))
        assert T.conj(a ^ b) == T.conj(a) ^ T.conj(b)
        assert T.conj(T.conj(a)) == a
        assert T.conj(a) == T.pow(a, 1 << m)


@pytest.mark.parametrize("m", [2, 4, 6, 8])
def test_conj_direct_mode(m):
    T = make_tower(m)
    rng = random.Random(m)
    for _ in range(100):
        z = rng.randrange(T.order)
        r = z
        for _ in range(m):
            r = T.mul(r, r)
        assert T.conj(z) == r


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_fixed_field_is_base(m):
    T = make_tower(m)
    fixed = sorted(z for z in T.elements() if T.conj(z) == z)
    assert fixed == sorted(T.embed(a) for a in T.base.elements())
    for a in T.base.elements():
        assert T.to_base(T.embed(a)) == a


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_norm_one_iff_circle(m):
    T = make_tower(m)
    circle = {z for z in T.elements() if z and T.pow(z, (1 << m) + 1) == 1}
    assert circle == {z for z in T.elements() if z and T.norm(z) == 1}
    assert len(circle) == (1 << m) + 1
    if m % 2:
        assert set(T.mu_list()) == circle


@pytest.mark.parametrize("m", [1, 3, 5])
def test_norm_trace_land_in_base(m):
    T = make_tower(m)
    rng = random.Random(1)
    assert T.norm(0) == 0 and T.norm(1) == 1
    for _ in range(200):
        z = rng.randrange(T.order)
        assert T.embed(T.norm(z)) == T.mul(z, T.conj(z))
        assert T.embed(T.rel_trace(z)) == z ^ T.conj(z)


@pytest.mark.parametrize("m", [2, 4])
def test_norm_direct_mode(m):
    T = make_tower(m)
    for z in T.elements():
        assert T.embed(T.norm(z)) == T.mul(z, T.conj(z))


@pytest.mark.parametrize("m", [1, 3, 5, 7])
def test_inverse_and_sqrt(m):
    T = make_tower(m)
    rng = random.Random(m)
    for _ in range(200):
        z = rng.randrange(1, T.order)
        assert T.mul(z, T.inv(z)) == 1
        s = T.sqrt(z)
        assert T.mul(s, s) == z
    with pytest.raises(ZeroDivisionError):
        T.inv(0)


def test_component_mul_matches_tables():
    T = make_tower(5)
    rng = random.Random(3)
    for _ in range(500):
        a, b = rng.randrange(T.order), rng.randrange(T.order)
        assert T.mul(a, b) == T._mul_components(a, b)


def test_tower_direct_isomorphism_m3():
    T = make_tower(3)
    D = make_tower(3, DIRECT)
    iso = tower_to_direct(3)
    images = [iso(z) for z in T.elements()]
    assert sorted(images) == list(D.elements())
    for a in T.elements():
        for b in T.elements():
            assert iso(T.mul(a, b)) == D.mul(iso(a), iso(b))
            assert iso(a ^ b) == iso(a) ^ iso(b)
        assert iso(T.conj(a)) == D.conj(iso(a))
    assert iso(T.omega()) == D.omega()


def test_mu_iter_small():
    T = make_tower(1)
    w = T.omega()
    assert sorted(T.mu_iter()) == sorted([1, w, T.mul(w, w)])
    mu3 = list(make_tower(3).mu_iter())
    assert len(mu3) == 9 == len(set(mu3))
    assert mu3[0] == 1


@pytest.mark.parametrize("m", [1, 3, 5, 7, 9])
def test_mu_enumeration(m):
    T = make_tower(m)
    mu = T.mu_list()
    assert len(mu) == (1 << m) + 1 == len(set(mu))
    assert all(T.norm(z) == 1 for z in mu)


def test_solve_quadratic_ext_examples():
    T = make_tower(3)
    w = T.omega()
    assert sorted(T.solve_quadratic_ext(1, 0)) == [0, 1]
    assert sorted(T.solve_quadratic_ext(1, 1)) == sorted([w, T.mul(w, w)])
    with pytest.raises(FieldError):
        T.solve_quadratic_ext(0, 1)


@pytest.mark.parametrize("m", [1, 3])
def test_solve_quadratic_ext_exhaustive(m):
    T = make_tower(m)
    for b in range(1, T.order):
        for c in T.elements():
            brute = sorted(x for x in T.elements() if T.mul(x, x) ^ T.mul(b, x) ^ c == 0)
            got = T.solve_quadratic_ext(b, c)
            assert (sorted(got) if got else []) == brute
            assert (got is not None) == (T.abs_trace(T.div(c, T.mul(b, b))) == 0)


def test_solve_quadratic_ext_direct_mode():
    T = make_tower(2)
    for b in range(1, T.order):
        for c in T.elements():
            brute = sorted(x for x in T.elements() if T.mul(x, x) ^ T.mul(b, x) ^ c == 0)
            got = T.solve_quadratic_ext(b, c)
            assert (sorted(got) if got else []) == brute
