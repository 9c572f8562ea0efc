import random
from math import isqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prational.arith import is_squarefree, kronecker_symbol
from prational.errors import InvalidInput, NotPrincipal
from prational.qform import class_number
from prational.quadfield import (
    QuadraticField,
    QuadraticIdeal,
    fundamental_unit,
    fundamental_unit_mod,
    is_principal,
    is_principal_with_generator,
    splitting_type,
)

SQF = [d for d in range(-400, 400) if d not in (0, 1) and is_squarefree(d)]
REAL = [d for d in SQF if d > 1]


def pell_brute(d, vmax=20000):
    """Smallest unit > 1 by direct search: (u + v sqrt d)/2 or u + v sqrt d."""
    K = QuadraticField(d)
    for v in range(1, vmax):
        for sign in (-1, 1):
            if K.t:
                u2 = d * v * v + 4 * sign
                u = isqrt(u2) if u2 > 0 else 0
                if u > 0 and u * u == u2:
                    return K.from_half(u, v)
            else:
                u2 = d * v * v + sign
                u = isqrt(u2) if u2 > 0 else 0
                if u > 0 and u * u == u2:
                    return K(u, v)
    return None


def test_field_data():
    K = QuadraticField(-491)
    assert (K.D, K.t, K.n) == (-491, 1, 123)
    assert QuadraticField(2).D == 8 and QuadraticField(-1).D == -4
    assert K.sqrt_d * K.sqrt_d == K(-491)
    with pytest.raises(InvalidInput):
        QuadraticField(12)
    with pytest.raises(InvalidInput):
        QuadraticField(1)


@settings(max_examples=200)
@given(st.sampled_from(SQF), st.integers(-100, 100), st.integers(-100, 100), st.integers(-100, 100), st.integers(-100, 100))
def test_element_arithmetic(d, a, b, c, e):
    K = QuadraticField(d)
    x, y = K(a, b), K(c, e)
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x + y).conj() == x.conj() + y.conj()
    assert (x * x.conj()).coords() == (x.norm(), 0)
    assert x.trace() == (x + x.conj()).x
    if y.norm():
        assert (x * y).exact_div(y) == x


def test_units_against_pell_search():
    checked = 0
    for d in REAL:
        b = pell_brute(d)
        if b is None:
            continue
        u = fundamental_unit(d)
        assert u.eps == b, d
        assert u.norm == b.norm()
        checked += 1
    assert checked > 180


def test_unit_examples():
    assert fundamental_unit(5).eps.half_form() == (1, 1) and fundamental_unit(5).norm == -1
    assert fundamental_unit(3).eps.half_form() == (4, 2) and fundamental_unit(3).norm == 1
    assert fundamental_unit(2).eps.coords() == (1, 1)
    assert fundamental_unit(94).eps.half_form() == (2 * 2143295, 2 * 221064)


def test_modular_units_match_exact_units():
    rng = random.Random(11)
    for d in rng.sample(REAL, 50):
        p = rng.choice([2, 3, 5, 7, 31, 101])
        k = rng.randint(1, 5)
        M = p**k
        e = fundamental_unit(d).eps
        assert fundamental_unit_mod(d, p, k) == (e.x % M, e.y % M)


def test_sqrt2_unit_power():
    K = QuadraticField(2)
    assert K.pow_coords(fundamental_unit_mod(2, 31, 2), 30, 961) == (1, 0)
    assert K.pow_coords(fundamental_unit_mod(2, 31, 3), 30, 31**3) != (1, 0)


@settings(max_examples=100)
@given(st.sampled_from([d for d in SQF if abs(d) < 200]), st.sampled_from([2, 3, 5, 7, 11, 13]))
def test_splitting_and_norms(d, p):
    K = QuadraticField(d)
    s = splitting_type(K, p)
    k = kronecker_symbol(K.D, p)
    assert s.kind == {1: "split", -1: "inert", 0: "ramified"}[k]
    prod = QuadraticIdeal.unit(K)
    for P in s.primes:
        prod = prod * (P if s.kind != "ramified" else P * P)
        assert P.norm() == p ** s.f
    assert prod == QuadraticIdeal(K, 1, 0, p)


def test_ideal_multiplication_norms():
    rng = random.Random(3)
    for _ in range(200):
        d = rng.choice(SQF)
        K = QuadraticField(d)
        a = K(rng.randint(-40, 40), rng.randint(-40, 40))
        b = K(rng.randint(-40, 40), rng.randint(-40, 40))
        if a.norm() == 0 or b.norm() == 0:
            continue
        A, B = QuadraticIdeal.principal(K, a), QuadraticIdeal.principal(K, b)
        assert A.norm() == abs(a.norm())
        assert A * B == QuadraticIdeal.principal(K, a * b)
        assert A.contains(a) and (A * B).contains(a * b)


def test_principal_generators_from_the_literature():
    K = QuadraticField(-383)
    L2 = splitting_type(K, 2).primes[0]
    with pytest.raises(NotPrincipal):
        is_principal_with_generator(L2)
    alpha = is_principal_with_generator(L2**17)
    assert alpha.half_form() in {(711, 7), (711, -7)}
    assert alpha.norm() == 2**17
    K = QuadraticField(-491)
    Q = [P for P in splitting_type(K, 11).primes]
    gens = {abs(is_principal_with_generator(P**9).half_form()[1]) for P in Q}
    assert gens == {773}
    assert is_principal_with_generator(Q[0] ** 9).half_form()[0] == 95595


def test_principality_counts_match_class_number():
    for d in (-23, -47, -383, 10, 79, 229):
        K = QuadraticField(d)
        primes = [P for q in (2, 3, 5, 7, 11, 13) for P in splitting_type(K, q).primes if P.a > 1]
        h = class_number(K.D) if d < 0 else None
        for P in primes:
            if h is not None:
                assert is_principal(P**h)


def test_real_generator_is_normalized():
    K = QuadraticField(79)
    P = splitting_type(K, 3).primes[0]
    h = 3
    alpha = is_principal_with_generator(P**h)
    eps = fundamental_unit(79).eps
    r = abs(alpha.real_value() / alpha.conj().real_value())
    assert 1 <= r < eps.real_value() ** 2
    assert alpha.real_value() > 0
