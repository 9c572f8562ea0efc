import random

import pytest

from prational.arith import factor_small, is_prime, is_squarefree
from prational.errors import ComputationRefused, InvalidInput
from prational.prat import (
    CompositumField,
    greenberg_admissible,
    is_2_rational_quadratic,
    is_3_rational_quadratic,
    is_compositum_p_rational,
    is_P_rational,
    is_p_rational,
    is_p_rational_imaginary_all_p,
    is_p_rational_log,
    is_p_rational_ray,
    regulator_norm_test,
    w_trivial,
)
from prational.qform import class_number
from prational.quadfield import QuadraticField

SQF = [d for d in range(-300, 301) if abs(d) >= 2 and is_squarefree(d)]


def test_ray_examples():
    v = is_p_rational_ray(69, 3)
    assert not v.rational and v.rk_T == 1 and v.text() == "rk(T)=1 K is not 3-rational"
    assert not is_p_rational_ray(-161, 2).rational
    assert not is_p_rational_ray(-383, 17).rational
    assert is_p_rational_ray(-491, 3).rational


def test_verdict_shape():
    for d, p in [(69, 3), (-161, 2), (-491, 3), (2, 31), (-1, 2)]:
        v = is_p_rational_ray(d, p)
        assert v.rk_T == v.R - v.r >= 0
        assert len(v.invariants) == v.R
        assert all(x % p == 0 for x in v.invariants)
        js = v.to_json()
        assert set(js) >= {"field", "p", "method", "r", "R", "rk_T", "invariants"}


def test_closed_form_list_at_two():
    assert is_2_rational_quadratic(-1) and is_2_rational_quadratic(2) and is_2_rational_quadratic(-2)
    assert not is_2_rational_quadratic(-161)
    assert is_2_rational_quadratic(6) and is_2_rational_quadratic(-10) and is_2_rational_quadratic(5)
    assert not is_2_rational_quadratic(7) and not is_2_rational_quadratic(17)


def test_mirror_examples():
    assert not is_3_rational_quadratic(69)
    assert is_3_rational_quadratic(14)
    assert not is_3_rational_quadratic(15)
    assert is_3_rational_quadratic(-3)
    assert is_3_rational_quadratic(-491)


def test_regulator_examples():
    r = regulator_norm_test(14, 3)
    assert r.status == "regulator-unit" and r.residue == 1
    assert regulator_norm_test(2, 31).status == "regulator-divisible"
    r = regulator_norm_test(110, 3)
    assert r.status == "regulator-unit" and r.residue == 1
    with pytest.raises(InvalidInput):
        regulator_norm_test(-5, 3)


def test_methods_agree_on_small_fields():
    for d in SQF:
        assert is_p_rational_ray(d, 2).rational == is_2_rational_quadratic(d), d
        assert is_p_rational_ray(d, 3).rational == is_3_rational_quadratic(d), d


def test_norm_test_against_mirror_on_real_fields():
    mismatches = []
    for d in SQF:
        if d < 2 or d % 3 == 0 or class_number(QuadraticField(d).D) % 3 == 0:
            continue
        a = is_3_rational_quadratic(d)
        b = w_trivial(d, 3) and regulator_norm_test(d, 3).is_unit
        if a != b:
            mismatches.append(d)
    # any divergence is a finding about the norm test; none occurs in this range
    assert mismatches == []


def test_compositum_equals_conjunction_of_quadratic_ray_verdicts():
    rng = random.Random(1)
    small = [d for d in range(-50, 51) if abs(d) >= 2 and is_squarefree(d)]
    checked = 0
    while checked < 40:
        t = rng.randint(1, 3)
        ds = rng.sample(small, t)
        try:
            C = CompositumField(ds)
        except InvalidInput:
            continue
        p = rng.choice([3, 5, 7])
        v = is_compositum_p_rational(C, p)
        assert v.rational == all(is_p_rational_ray(x, p).rational for x in C.subfields)
        checked += 1


def test_compositum_examples_and_errors():
    assert is_compositum_p_rational([110, 170, 161, 38, 14], 3).rational
    assert is_compositum_p_rational([-2, -5, 7, 17, -19, 59], 3).rational
    v = is_compositum_p_rational([69, 2], 3)
    assert not v.rational and v.witness == 69
    for d in (14, 69, -491):
        assert is_compositum_p_rational([d], 3).rational == is_3_rational_quadratic(d)
    with pytest.raises(InvalidInput):
        CompositumField([2, 3, 6])
    with pytest.raises(InvalidInput):
        CompositumField([5, 5])
    with pytest.raises(ComputationRefused):
        is_compositum_p_rational([2, 3], 2)


def test_subfield_order_follows_the_tables():
    C = CompositumField([110, 170, 161, 38, 14])
    assert C.subfields[:5] == [14, 38, 133, 161, 46]
    assert C.subfields[-1] == 81719 and len(C.subfields) == 31


def test_six_h_shortcut():
    rng = random.Random(3)
    pairs = 0
    while pairs < 200:
        dd = rng.randint(1, 2000)
        if not is_squarefree(dd):
            continue
        h = class_number(QuadraticField(-dd).D)
        p = rng.choice([5, 7, 11, 13, 17, 19, 23, 29])
        if (6 * h) % p == 0:
            continue
        assert is_p_rational_ray(-dd, p).rational
        pairs += 1


def test_log_test_agrees_with_ray():
    n = 0
    for dd in range(1, 1001):
        if not is_squarefree(dd):
            continue
        d = -dd
        h = class_number(QuadraticField(d).D)
        for p in factor_small(h):
            if p > 3:
                assert is_p_rational_log(d, p).rational == is_p_rational_ray(d, p).rational, (d, p)
                n += 1
    assert n > 100


def test_all_p_examples():
    assert is_p_rational_imaginary_all_p(1)
    assert not is_p_rational_imaginary_all_p(15)
    assert not is_p_rational_imaginary_all_p(383)


def test_single_prime_examples():
    assert is_P_rational(-15, 2).rational
    assert not is_p_rational_ray(-15, 2).rational
    assert not is_P_rational(-33, 2).rational
    assert not is_P_rational(-383, 17).rational
    with pytest.raises(ComputationRefused):
        is_P_rational(-15, 7)


def test_split_odd_P_rationality_is_p_rationality():
    # for p odd and split, {P}-rationality coincides with p-rationality
    for dd in range(1, 400):
        if not is_squarefree(dd):
            continue
        for p in (3, 5, 7):
            try:
                v = is_P_rational(-dd, p)
            except ComputationRefused:
                continue
            assert v.rational == is_p_rational_ray(-dd, p).rational, (dd, p)


def test_greenberg_admissibility():
    assert greenberg_admissible(118, False)
    assert not greenberg_admissible(230, False)
    assert not greenberg_admissible(15, True)
    assert greenberg_admissible(1245, True) and not greenberg_admissible(1245, False)
    assert not greenberg_admissible(12, True)


def test_auto_method_selection():
    assert is_p_rational(69, 3).method == "mirror"
    assert is_p_rational(-161, 2).method == "p2-classification"
    assert is_p_rational(-23, 5).method == "all-p"
    assert is_p_rational(-383, 17).method == "ray"
    v = is_p_rational(2, 31)
    assert v.method == "ray" and v.details["regulator"] == "regulator-divisible"
    for d in (-491, 69, 14, -15):
        for p in (2, 3, 5, 7):
            assert is_p_rational(d, p).rational == is_p_rational_ray(d, p).rational
    assert is_prime(31)
