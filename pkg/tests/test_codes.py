"""Random codes, spans, and list-decoding checkers against independent oracles."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from ldlab import (
    Code,
    ParameterError,
    ResourceBudgetError,
    VecQ,
    ball_volume,
    check_ld_exact,
    check_ld_montecarlo,
    distance,
    field_new,
    format_code,
    parse_code,
    radius_of,
    random_code,
    rank_of,
    span_set,
)

import oracles


def identity_code(q: int, n: int, k: int) -> Code:
    f = field_new(q)
    rows = tuple(
        VecQ.from_digits(f, [1 if j == i else 0 for j in range(n)]) for i in range(k)
    )
    return Code(field=f, n=n, k=k, generator=rows, full_rank=True)


def repetition_code(q: int, n: int) -> Code:
    f = field_new(q)
    return Code(
        field=f, n=n, k=1, generator=(VecQ.from_digits(f, [1] * n),), full_rank=True
    )


@pytest.mark.parametrize("q", [2, 3])
def test_random_code_full_rank_contract(q):
    """Full-rank draws always have rank k and exactly q^k distinct codewords."""
    rng = random.Random(2026)
    for _ in range(200):
        code = random_code(12, 6, q, full_rank=True, rng=rng)
        assert code.full_rank
        assert rank_of(code.generator) == 6
        payloads = code.codeword_payloads()
        assert len(payloads) == q**6
        assert len(set(payloads)) == q**6
        assert code.size() == q**6


def test_random_code_iid_reports_actual_size():
    rng = random.Random(5)
    seen_deficient = False
    for _ in range(300):
        code = random_code(4, 3, 2, full_rank=False, rng=rng)
        r = rank_of(code.generator)
        assert code.size() == 2**r
        assert len(set(code.codeword_payloads())) == 2**r
        if r < 3:
            seen_deficient = True
    assert seen_deficient


def test_random_code_is_deterministic_per_seed():
    a = random_code(10, 4, 3, full_rank=True, rng=random.Random(42))
    b = random_code(10, 4, 3, full_rank=True, rng=random.Random(42))
    assert a == b


def test_random_code_rejects_bad_dimensions():
    with pytest.raises(ParameterError):
        random_code(4, 5, 2, full_rank=True, rng=random.Random(0))
    with pytest.raises(ParameterError):
        random_code(4, -1, 2, full_rank=False, rng=random.Random(0))


def test_zero_dimensional_code():
    code = random_code(5, 0, 2, full_rank=True, rng=random.Random(0))
    assert code.size() == 1
    assert code.codeword_payloads() == [0]
    assert check_ld_exact(code, "1/5", 1).L_max == 1


def test_codewords_follow_message_order():
    """Codeword m is the combination with the base-q digits of m as coefficients."""
    q = 3
    f = field_new(q)
    rng = random.Random(8)
    code = random_code(6, 3, q, full_rank=True, rng=rng)
    words = list(code.codewords())
    for m in (0, 1, 5, 13, 26):
        digits = [(m // q**i) % q for i in range(3)]
        expected = VecQ.zero(f, 6)
        for a, row in zip(digits, code.generator):
            expected = expected + a * row
        assert words[m] == expected


def test_rate():
    assert identity_code(2, 8, 4).rate() == 0.5
    assert repetition_code(3, 9).rate() == pytest.approx(1 / 9)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_span_matches_exhaustive_combination_set(q):
    """span_set equals the set of all coefficient combinations, tried exhaustively."""
    f = field_new(q)
    rng = random.Random(31)
    for _ in range(20):
        m = rng.randrange(1, 4)
        n = rng.randrange(2, 5)
        vectors = [
            VecQ.from_digits(f, [rng.randrange(q) for _ in range(n)]) for _ in range(m)
        ]
        expected = set()
        for coeffs in oracles.all_tuples(q, m):
            v = VecQ.zero(f, n)
            for a, u in zip(coeffs, vectors):
                v = v + a * u
            expected.add(v)
        result = span_set(vectors)
        assert result == expected
        assert len(result) == q ** rank_of(vectors)
        assert VecQ.zero(f, n) in result


def test_span_of_nothing_needs_explicit_shape():
    f = field_new(2)
    assert span_set([], field=f, n=3) == {VecQ.zero(f, 3)}
    with pytest.raises(ParameterError):
        span_set([])


def test_span_budget_refusal():
    f = field_new(2)
    vectors = [VecQ.from_digits(f, [1] * 30) for _ in range(30)]
    with pytest.raises(ResourceBudgetError):
        span_set(vectors)


def test_repetition_code_is_uniquely_decodable():
    verdict = check_ld_exact(repetition_code(2, 7), "0.2", 1)
    assert verdict.L_max == 1
    assert verdict.radius == 1
    assert verdict.decodable
    assert verdict.witness_center is not None


def test_full_space_ball_volume_anchor():
    """For the whole space, every ball is full of codewords."""
    verdict = check_ld_exact(identity_code(2, 8, 8), "1/4", 1)
    assert verdict.L_max == ball_volume(8, 2, 2) == 37
    assert not verdict.decodable
    small = check_ld_exact(identity_code(2, 2, 2), "1/2", 3)
    assert small.L_max == 3
    assert small.decodable


@pytest.mark.parametrize("mode", ["full", "candidates"])
def test_exact_checker_matches_independent_center_scan(mode):
    """L_max agrees with a digit-tuple oracle scanning every center."""
    rng = random.Random(77)
    cases = [(2, 6, 3), (2, 5, 2), (3, 4, 2)]
    for q, n, k in cases:
        for _ in range(6):
            code = random_code(n, k, q, full_rank=False, rng=rng)
            p = Fraction(rng.randrange(1, n // 2 + 1), n)
            verdict = check_ld_exact(code, p, 1, mode=mode)
            codewords = [w.digits() for w in code.codewords()]
            expected = oracles.brute_list_decode_l_max(
                codewords, radius_of(p, n), q, n
            )
            assert verdict.L_max == expected
            assert verdict.mode == mode


def test_witness_center_achieves_l_max():
    """Recounting codewords around the reported witness reproduces L_max."""
    rng = random.Random(13)
    for _ in range(25):
        q = rng.choice([2, 3])
        n = rng.randrange(5, 10)
        k = rng.randrange(1, 4)
        code = random_code(n, k, q, full_rank=False, rng=rng)
        p = Fraction(rng.randrange(1, n), n)
        verdict = check_ld_exact(code, p, 1)
        recount = sum(
            1
            for w in code.codewords()
            if distance(verdict.witness_center, w) <= verdict.radius
        )
        assert recount == verdict.L_max


def test_candidate_and_full_modes_agree():
    rng = random.Random(2468)
    for _ in range(20):
        n = rng.randrange(6, 13)
        k = rng.randrange(1, 5)
        code = random_code(n, k, 2, full_rank=False, rng=rng)
        p = Fraction(rng.randrange(1, 4), 10)
        full = check_ld_exact(code, p, 2, mode="full")
        cand = check_ld_exact(code, p, 2, mode="candidates")
        assert full.L_max == cand.L_max
        assert full.witness_center == cand.witness_center
        assert full.exhaustive and not cand.exhaustive


def test_l_max_is_monotone_in_radius():
    rng = random.Random(555)
    code = random_code(10, 3, 2, full_rank=True, rng=rng)
    values = [
        check_ld_exact(code, Fraction(r, 10), 1).L_max for r in range(0, 6)
    ]
    assert values == sorted(values)


def test_exact_checker_rejects_bad_list_size_and_mode():
    code = repetition_code(2, 5)
    with pytest.raises(ParameterError):
        check_ld_exact(code, "1/5", 0)
    with pytest.raises(ParameterError):
        check_ld_exact(code, "1/5", 1, mode="bogus")


def test_exact_checker_budget_refusals():
    big = identity_code(2, 30, 26)
    for mode in ("full", "candidates", "auto"):
        with pytest.raises(ResourceBudgetError):
            check_ld_exact(big, "1/10", 1, mode=mode)


def test_montecarlo_never_exceeds_exact_and_usually_matches():
    """The sampled maximum is a lower bound that reaches L_max on most codes.

    100 codes at (n=14, k=3, q=2, p=0.2) with 1000 trials each on seed 12345;
    the sampler found the exact maximum on all 100 in calibration, so the
    threshold of 90 leaves wide margin.
    """
    rng = random.Random(12345)
    matches = 0
    for i in range(100):
        code = random_code(14, 3, 2, full_rank=False, rng=rng)
        exact = check_ld_exact(code, Fraction(1, 5), 1)
        mc = check_ld_montecarlo(code, Fraction(1, 5), 1000, random.Random(1000 + i))
        assert mc.max_count <= exact.L_max
        assert sum(mc.histogram.values()) == mc.trials == 1000
        assert min(mc.histogram) >= 1
        if mc.max_count == exact.L_max:
            matches += 1
    assert matches >= 90


def test_montecarlo_histogram_on_repetition_code():
    mc = check_ld_montecarlo(repetition_code(2, 7), "0.2", 300, random.Random(3))
    assert mc.histogram == {1: 300}
    assert mc.max_count == 1
    assert mc.witness_center is not None


def test_montecarlo_budget_refusal():
    with pytest.raises(ResourceBudgetError):
        check_ld_montecarlo(identity_code(2, 26, 26), "1/4", 10, random.Random(0))


def test_code_serialization_round_trip():
    rng = random.Random(17)
    for q in (2, 3, 5, 16):
        for k in (0, 1, 3):
            code = random_code(6, k, q, full_rank=True, rng=rng)
            text = format_code(code)
            lines = text.strip().splitlines()
            assert lines[0] == f"{q} 6 {k}"
            assert len(lines) == k + 1
            assert parse_code(text) == code


def test_parse_code_detects_rank_deficiency():
    text = "2 4 2\n1100\n1100\n"
    code = parse_code(text)
    assert not code.full_rank
    assert code.size() == 2


def test_parse_code_rejects_malformed_input():
    bad_inputs = [
        "",
        "2 4\n",
        "2 4 2\n1100\n",
        "2 4 1\n11000\n",
        "2 4 1\n1120\n",
        "6 4 1\n1100\n",
        "2 4 1\n1100\nextra\n",
    ]
    for text in bad_inputs:
        with pytest.raises(ParameterError):
            parse_code(text)


def test_verdict_record_fields():
    verdict = check_ld_exact(repetition_code(2, 7), "0.2", 1)
    record = verdict.as_record()
    assert record["L_max"] == 1
    assert record["q"] == 2 and record["n"] == 7 and record["k"] == 1
    assert record["decodable"] is True
