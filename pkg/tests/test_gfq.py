"""Field tables, packed vectors, and rank: exhaustive axioms plus property tests."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from ldlab import (
    ParameterError,
    VecQ,
    all_vectors,
    distance,
    field_new,
    rank_of,
    support,
    vec_linear_combination,
    weight,
)
from ldlab.gfq import MAX_Q, all_payloads, payload_add, payload_distance, payload_weight

import oracles

PRIME_POWERS = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16)
PRIMES = (2, 3, 5, 7, 11, 13)
EXTENSIONS = {
    4: (2, 2, (1, 1, 1)),
    8: (2, 3, (1, 1, 0, 1)),
    9: (3, 2, (2, 2, 1)),
    16: (2, 4, (1, 1, 0, 0, 1)),
}

fields = st.sampled_from([field_new(q) for q in PRIME_POWERS])


@st.composite
def field_and_digits(draw, min_size=1, max_size=12):
    field = draw(fields)
    digits = draw(
        st.lists(st.integers(0, field.q - 1), min_size=min_size, max_size=max_size)
    )
    return field, digits


@st.composite
def field_and_digit_pair(draw, max_size=12):
    field = draw(fields)
    n = draw(st.integers(1, max_size))
    u = draw(st.lists(st.integers(0, field.q - 1), min_size=n, max_size=n))
    v = draw(st.lists(st.integers(0, field.q - 1), min_size=n, max_size=n))
    return field, u, v


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_field_axioms_exhaustive(q):
    """Every field table satisfies the field axioms over all element triples."""
    f = field_new(q)
    elements = range(q)
    for a in elements:
        assert f.add(a, 0) == a
        assert f.mul(a, 1) == a
        assert f.mul(a, 0) == 0
        assert f.add(a, f.neg(a)) == 0
        if a != 0:
            assert f.mul(a, f.inv(a)) == 1
        for b in elements:
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, b) == f.mul(b, a)
            assert 0 <= f.add(a, b) < q and 0 <= f.mul(a, b) < q
            for c in elements:
                assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
                assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


@pytest.mark.parametrize("q", PRIMES)
def test_prime_fields_match_modular_arithmetic(q):
    """Prime fields agree with plain modular arithmetic."""
    f = field_new(q)
    add, mul = oracles.prime_field_tables(q)
    for a in range(q):
        for b in range(q):
            assert f.add(a, b) == add[(a, b)]
            assert f.mul(a, b) == mul[(a, b)]


@pytest.mark.parametrize("q", sorted(EXTENSIONS))
def test_extension_fields_match_polynomial_oracle(q):
    """Extension fields agree with an independent polynomial construction."""
    char, degree, irreducible = EXTENSIONS[q]
    f = field_new(q)
    assert f.characteristic == char
    assert f.degree == degree
    add, mul = oracles.extension_field_tables(char, degree, irreducible)
    for a in range(q):
        for b in range(q):
            assert f.add(a, b) == add[(a, b)]
            assert f.mul(a, b) == mul[(a, b)]


@pytest.mark.parametrize("q", [0, 1, 6, 10, 12, 14, 15, 17, 25, -3])
def test_field_new_rejects_bad_orders(q):
    """Non-prime-power or out-of-range orders are invalid parameters."""
    with pytest.raises(ParameterError):
        field_new(q)


def test_field_new_caches_and_compares():
    assert field_new(4) is field_new(4)
    assert field_new(4) == field_new(4)
    assert field_new(4) != field_new(8)
    assert MAX_Q == 16


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_zero_has_no_inverse(q):
    with pytest.raises(ZeroDivisionError):
        field_new(q).inv(0)


@given(field_and_digits())
def test_pack_round_trip(fd):
    """Digits survive the round trip through the packed representation."""
    field, digits = fd
    v = VecQ.from_digits(field, digits)
    assert v.digits() == tuple(digits)
    assert len(v) == len(digits)
    for i, d in enumerate(digits):
        assert v.digit(i) == d


def test_empty_vector_is_rejected():
    """A vector needs at least one coordinate."""
    with pytest.raises(ParameterError):
        VecQ.from_digits(field_new(2), [])


@given(field_and_digits())
def test_string_round_trip(fd):
    field, digits = fd
    v = VecQ.from_digits(field, digits)
    assert VecQ.from_string(field, str(v)) == v


@given(field_and_digits())
def test_weight_and_support_match_brute(fd):
    field, digits = fd
    v = VecQ.from_digits(field, digits)
    assert weight(v) == v.weight() == oracles.brute_weight(tuple(digits))
    assert support(v) == frozenset(i + 1 for i, d in enumerate(digits) if d)


@given(field_and_digit_pair())
def test_add_is_digitwise_field_add(fd):
    field, u_digits, v_digits = fd
    u = VecQ.from_digits(field, u_digits)
    v = VecQ.from_digits(field, v_digits)
    expected = tuple(field.add(a, b) for a, b in zip(u_digits, v_digits))
    assert (u + v).digits() == expected
    assert (u + (-u)).weight() == 0
    assert u - v == u + (-v)


@given(field_and_digit_pair())
def test_distance_axioms(fd):
    field, u_digits, v_digits = fd
    u = VecQ.from_digits(field, u_digits)
    v = VecQ.from_digits(field, v_digits)
    d = distance(u, v)
    assert d == oracles.brute_distance(tuple(u_digits), tuple(v_digits))
    assert d == distance(v, u)
    assert distance(u, u) == 0
    assert (d == 0) == (u == v)
    assert d == weight(u - v)


@given(field_and_digit_pair(), field_and_digit_pair())
def test_triangle_inequality(fd1, fd2):
    field, u_digits, v_digits = fd1
    _, w_digits, _ = fd2
    w_digits = (w_digits * len(u_digits))[: len(u_digits)]
    w_digits = [d % field.q for d in w_digits]
    u = VecQ.from_digits(field, u_digits)
    v = VecQ.from_digits(field, v_digits)
    w = VecQ.from_digits(field, w_digits)
    assert distance(u, v) <= distance(u, w) + distance(w, v)


@given(field_and_digit_pair())
def test_scalar_multiplication(fd):
    field, u_digits, _ = fd
    u = VecQ.from_digits(field, u_digits)
    for a in range(field.q):
        expected = tuple(field.mul(a, d) for d in u_digits)
        assert (a * u).digits() == expected
    assert (1 * u) == u
    assert (0 * u).weight() == 0


@given(field_and_digit_pair())
def test_payload_helpers_match_vector_ops(fd):
    field, u_digits, v_digits = fd
    u = VecQ.from_digits(field, u_digits)
    v = VecQ.from_digits(field, v_digits)
    assert payload_add(field, u.payload, v.payload) == (u + v).payload
    assert payload_weight(field, len(u), u.payload) == weight(u)
    assert payload_distance(field, len(u), u.payload, v.payload) == distance(u, v)


@given(field_and_digits(min_size=1, max_size=8))
def test_linear_combination_matches_manual_sum(fd):
    field, digits = fd
    rows = [
        VecQ.from_digits(field, [(d + shift) % field.q for d in digits])
        for shift in range(3)
    ]
    coeffs = [1, field.q - 1, 0]
    combo = vec_linear_combination(coeffs, rows)
    manual = VecQ.zero(field, len(digits))
    for a, row in zip(coeffs, rows):
        manual = manual + a * row
    assert combo == manual


def test_linear_combination_empty_needs_shape():
    f = field_new(3)
    z = vec_linear_combination([], [], field=f, n=5)
    assert z == VecQ.zero(f, 5)
    with pytest.raises(ParameterError):
        vec_linear_combination([], [])


def test_linear_combination_rejects_mismatches():
    f = field_new(2)
    u = VecQ.from_digits(f, [1, 0])
    v = VecQ.from_digits(f, [1, 0, 1])
    with pytest.raises(ParameterError):
        vec_linear_combination([1, 1], [u, v])
    with pytest.raises(ParameterError):
        vec_linear_combination([1], [u, VecQ.from_digits(f, [0, 1])])


def test_vectors_from_different_fields_do_not_mix():
    u = VecQ.from_digits(field_new(2), [1, 0])
    v = VecQ.from_digits(field_new(3), [1, 0])
    with pytest.raises(ParameterError):
        u + v


@pytest.mark.parametrize("q,n", [(2, 4), (3, 3), (4, 2), (5, 2)])
def test_all_vectors_enumerates_whole_space_in_counting_order(q, n):
    """all_vectors yields q^n distinct vectors with digit 1 cycling fastest."""
    f = field_new(q)
    seen = list(all_vectors(f, n))
    assert len(seen) == q**n
    assert len(set(seen)) == q**n
    expected = []
    for idx in range(q**n):
        digits = []
        rest = idx
        for _ in range(n):
            digits.append(rest % q)
            rest //= q
        expected.append(tuple(digits))
    assert [v.digits() for v in seen] == expected
    assert list(all_payloads(f, n)) == [v.payload for v in seen]


@pytest.mark.parametrize("q", [2, 3, 4, 9])
def test_rank_matches_independent_elimination(q):
    """rank_of agrees with Gaussian elimination over oracle-built tables."""
    if q in EXTENSIONS:
        char, degree, irreducible = EXTENSIONS[q]
        add, mul = oracles.extension_field_tables(char, degree, irreducible)
    else:
        add, mul = oracles.prime_field_tables(q)
    f = field_new(q)
    rng = random.Random(2026)
    for _ in range(60):
        m = rng.randrange(1, 6)
        n = rng.randrange(1, 7)
        rows = [tuple(rng.randrange(q) for _ in range(n)) for _ in range(m)]
        vectors = [VecQ.from_digits(f, row) for row in rows]
        assert rank_of(vectors) == oracles.brute_rank(rows, q, add, mul)


def test_rank_known_values():
    f = field_new(2)
    e = [VecQ.from_digits(f, row) for row in ([1, 0, 0], [0, 1, 0], [0, 0, 1])]
    assert rank_of(e) == 3
    assert rank_of([e[0], e[0]]) == 1
    assert rank_of([e[0], e[1], e[0] + e[1]]) == 2
    assert rank_of([]) == 0
    assert rank_of([VecQ.zero(f, 3)]) == 0
