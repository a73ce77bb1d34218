"""Linear rules, shift polynomials, field arithmetic, window independence."""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from calab.ca1d import (
    BlockMap,
    apply,
    apply_seq,
    commutes,
    compose,
    identity_map,
    maps_equal,
    product_rule_map,
    shift_map,
)
from calab.linca import (
    DivisibilityReport,
    FiniteField,
    ModularRing,
    ShiftPolynomial,
    default_modulus,
    divisible_digits_witness,
    independent_window_length,
    is_linear,
    linear_hitting_map,
    map_to_poly,
    pointwise_sum,
    poly_product,
    poly_sum,
    poly_to_map,
)
from calab.mulca import mul_prime
from calab.symcore import Alphabet, EventuallyPeriodicSeq, Word, constant_seq, thue_morse

GF4 = FiniteField(2, 2)
GF8 = FiniteField(2, 3)
M2 = ModularRing(2)
M4 = ModularRing(4)
M6 = ModularRing(6)


def eps(s, prefix, cycle):
    return EventuallyPeriodicSeq(Alphabet(s), tuple(prefix), tuple(cycle))


def random_poly(ring, rng, max_degree=2):
    deg = rng.randint(0, max_degree)
    return ShiftPolynomial(ring, tuple(rng.randrange(ring.size) for _ in range(deg + 1)))


# --- field construction ----------------------------------------------------------

def test_default_moduli():
    assert default_modulus(2, 2) == (1, 1, 1)     # x^2 + x + 1
    assert default_modulus(2, 3) == (1, 1, 0, 1)  # x^3 + x + 1
    assert default_modulus(3, 2) == (1, 0, 1)     # x^2 + 1


def test_gf4_multiplication_table():
    # w = symbol 2: w*w = w+1, w*(w+1) = 1, (w+1)^2 = w
    assert GF4.mul(2, 2) == 3
    assert GF4.mul(2, 3) == 1
    assert GF4.mul(3, 3) == 2


def test_gf4_addition_is_xor():
    for a in range(4):
        for b in range(4):
            assert GF4.add(a, b) == a ^ b


@pytest.mark.parametrize("field", [GF4, GF8, FiniteField(3, 2)])
def test_field_axioms_exhaustive(field):
    n = field.size
    for a in range(n):
        assert field.add(a, 0) == a
        assert field.mul(a, 1) == a
        assert field.mul(a, 0) == 0
        if a:
            assert field.mul(a, field.inverse(a)) == 1
    for a in range(n):
        for b in range(n):
            assert field.add(a, b) == field.add(b, a)
            assert field.mul(a, b) == field.mul(b, a)
            for c in range(n):
                assert field.mul(a, field.add(b, c)) == \
                    field.add(field.mul(a, b), field.mul(a, c))
                assert field.add(a, field.add(b, c)) == field.add(field.add(a, b), c)
                assert field.mul(a, field.mul(b, c)) == field.mul(field.mul(a, b), c)


def test_bad_modulus_rejected():
    with pytest.raises(ValueError):
        FiniteField(2, 2, modulus=(0, 0, 1))  # x^2 is reducible


def test_prime_field_matches_modular_ring():
    f = FiniteField(5, 1)
    m = ModularRing(5)
    for a in range(5):
        for b in range(5):
            assert f.add(a, b) == m.add(a, b)
            assert f.mul(a, b) == m.mul(a, b)


def test_prime_field_block_maps_match_modular():
    for coeffs in [(1, 2), (4, 0, 3), (2,)]:
        assert poly_to_map(ShiftPolynomial(FiniteField(5, 1), coeffs)) == \
            poly_to_map(ShiftPolynomial(ModularRing(5), coeffs))


# --- polynomial <-> block map ---------------------------------------------------------

def test_poly_x_is_shift():
    assert poly_to_map(ShiftPolynomial(M2, (0, 1))) == shift_map(Alphabet(2))


def test_poly_one_plus_x_is_xor():
    got = poly_to_map(ShiftPolynomial(M2, (1, 1)))
    assert got.table == (0, 1, 1, 0)


def test_poly_wx_over_gf4():
    got = poly_to_map(ShiftPolynomial(GF4, (0, 2)))
    assert got((0, 1)) == 2  # w * 1 = w


def test_map_to_poly_identity():
    assert map_to_poly(identity_map(Alphabet(4)), M4).coeffs == (1,)


def test_map_to_poly_rejects_mul2_base4():
    # f(0,2) = 1 but 2*f(0,1) = 0: not homogeneous over Z/4Z
    rule = mul_prime(Alphabet(4), 2)
    assert rule((0, 2)) == 1 and rule((0, 1)) == 0
    assert map_to_poly(rule, M4) is None


def test_map_to_poly_sum_rule_base6():
    rule = poly_to_map(ShiftPolynomial(M6, (1, 1)))
    got = map_to_poly(rule, M6)
    assert got.coeffs == (1, 1)


def test_is_linear_zero_map():
    from calab.mulca import zero_map
    assert is_linear(zero_map(Alphabet(6)), M6)


def test_is_linear_rejects_product_rule():
    rule, _ = product_rule_map((0, 0))
    assert not is_linear(rule, M2)


@given(st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_poly_roundtrip(seed):
    rng = random.Random(seed)
    ring = rng.choice([M2, M4, M6, GF4, FiniteField(3, 1)])
    poly = random_poly(ring, rng)
    bm = poly_to_map(poly)
    assert is_linear(bm, ring)
    back = map_to_poly(bm, ring)
    assert back.coeffs == poly.coeffs


# --- ring isomorphism -------------------------------------------------------------------

def test_poly_product_examples():
    p = ShiftPolynomial(M2, (1, 1))
    assert poly_product(p, ShiftPolynomial(M2, (1,))).coeffs == (1, 1)
    assert poly_product(p, p).coeffs == (1, 0, 1)          # Frobenius over GF(2)
    q = ShiftPolynomial(M4, (1, 1))
    assert poly_product(q, q).coeffs == (1, 2, 1)


@given(st.integers(0, 10**6))
@settings(max_examples=80, deadline=None)
def test_composition_is_polynomial_multiplication(seed):
    rng = random.Random(seed)
    ring = rng.choice([M2, M4, M6, GF4, FiniteField(3, 1)])
    p, q = random_poly(ring, rng), random_poly(ring, rng)
    lhs = poly_to_map(poly_product(p, q))
    rhs = compose(poly_to_map(p), poly_to_map(q))
    assert maps_equal(lhs, rhs)


@given(st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_pointwise_sum_is_polynomial_addition(seed):
    rng = random.Random(seed)
    ring = rng.choice([M2, M4, M6, GF4])
    p, q = random_poly(ring, rng), random_poly(ring, rng)
    lhs = poly_to_map(poly_sum(p, q))
    rhs = pointwise_sum(poly_to_map(p), poly_to_map(q), ring)
    assert maps_equal(lhs, rhs)


@given(st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_linear_rules_commute(seed):
    rng = random.Random(seed)
    ring = rng.choice([M2, M4, M6, GF4, GF8])
    p, q = random_poly(ring, rng), random_poly(ring, rng)
    assert commutes(poly_to_map(p), poly_to_map(q))


def test_every_nonlinear_radius2_map_fails_some_linear_commutation():
    # bounded-radius maximal commutativity over two symbols: each of the
    # 2^8 radius-2 tables either is linear or fails to commute with one of
    # the 8 linear rules of radius <= 2
    linear_rules = [poly_to_map(ShiftPolynomial(M2, c))
                    for c in itertools.product(range(2), repeat=3)]
    for table in itertools.product(range(2), repeat=8):
        cand = BlockMap(Alphabet(2), 2, table)
        if is_linear(cand, M2):
            assert all(commutes(cand, g) for g in linear_rules)
        else:
            assert any(not commutes(cand, g) for g in linear_rules)


# --- window independence ---------------------------------------------------------------

def test_independence_constant_one():
    assert independent_window_length(constant_seq(Alphabet(2), 1), 1, 4, M2) == 1


def test_independence_thue_morse_three_windows():
    # oracle: exhaustive combination check over GF(2)
    tm = thue_morse(Alphabet(2))
    got = independent_window_length(tm, 3, 8, M2)

    def independent(vectors):
        n = len(vectors)
        for mask in range(1, 2**n):
            acc = [0] * len(vectors[0])
            for i in range(n):
                if mask >> i & 1:
                    acc = [x ^ y for x, y in zip(acc, vectors[i])]
            if not any(acc):
                return False
        return True

    for k in range(1, 8):
        vectors = [list(tm.prefix_of(i + k)[i:]) for i in range(3)]
        if independent(vectors):
            assert got == k
            break
    assert got == 4


def test_independence_zero_window_never_independent():
    seq = eps(2, [1], [0])
    assert independent_window_length(seq, 2, 12, M2) is None


def test_independence_needs_window():
    with pytest.raises(ValueError):
        independent_window_length(thue_morse(Alphabet(2)), 0, 4, M2)


def test_independence_eventually_periodic_guarantee():
    # guaranteed for n <= b on eventually periodic, n <= c-1 on periodic
    seq = eps(3, [1, 2], [0, 1, 1])
    assert independent_window_length(seq, 2, 20, ModularRing(3)) is not None
    per = eps(2, [], [0, 1, 1])
    assert independent_window_length(per, 2, 20, M2) is not None


# --- linear hitting -----------------------------------------------------------------------

def test_linear_hitting_zero_target():
    rule = linear_hitting_map(thue_morse(Alphabet(2)), (0, 0, 0), M2)
    assert is_linear(rule, M2)
    assert apply(rule, thue_morse(Alphabet(2)).prefix_of(3 + rule.radius)) == (0, 0, 0)


def test_linear_hitting_thue_morse():
    target = (1, 0, 1, 1, 0, 1)
    rule = linear_hitting_map(thue_morse(Alphabet(2)), target, M2)
    assert is_linear(rule, M2)
    image = apply(rule, thue_morse(Alphabet(2)).prefix_of(len(target) + rule.radius))
    assert image == target


def test_linear_hitting_periodic_source():
    source = eps(2, [], [0, 1])
    rule = linear_hitting_map(source, (1,), M2)
    assert is_linear(rule, M2)
    assert apply(rule, source.prefix_of(1 + rule.radius)) == (1,)


def test_linear_hitting_over_gf4():
    source = thue_morse(Alphabet(4))
    target = (2, 0, 3, 1)
    rule = linear_hitting_map(source, target, GF4)
    assert is_linear(rule, GF4)
    image = apply(rule, source.prefix_of(len(target) + rule.radius))
    assert image == target


def test_linear_hitting_dependent_windows():
    with pytest.raises(ValueError, match="windows dependent"):
        linear_hitting_map(eps(2, [1], [0]), (1, 1), M2, k_max=16)


# --- divisibility witness -----------------------------------------------------------------

def test_divisible_digits_base6():
    report = divisible_digits_witness(6, 2, trials=100, seed=5)
    assert report.passed


def test_divisible_digits_poly_example_base4():
    poly = ShiftPolynomial(M4, (1, 1, 1))
    rule = poly_to_map(poly)
    image = apply_seq(rule, eps(4, [], [2, 0, 2]))
    assert set(image.prefix + image.cycle) <= {0, 2}


def test_divisible_digits_zero_poly():
    rule = poly_to_map(ShiftPolynomial(M4, ()))
    image = apply_seq(rule, eps(4, [], [2]))
    assert image == constant_seq(Alphabet(4), 0)


def test_divisible_digits_prime_s_rejected():
    with pytest.raises(ValueError, match="no nontrivial divisor"):
        divisible_digits_witness(7, trials=10, seed=1)


def test_divisible_digits_sabotage_fails():
    report = divisible_digits_witness(6, 2, trials=20, seed=5, sabotage=True)
    assert not report.passed
    assert report.first_counterexample is not None
