"""Ball geometry: volumes vs enumeration, entropy vs high precision, sampling fits."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st
from scipy.stats import chisquare

from ldlab import (
    BallSpec,
    ParameterError,
    VecQ,
    ball_points,
    ball_volume,
    ball_weight_class_sizes,
    entropy_q,
    field_new,
    radius_of,
    sample_ball_uniform,
    weight,
)
from ldlab.hamming import as_fraction

import oracles


@pytest.mark.parametrize("q", [2, 3])
def test_ball_volume_matches_enumeration(q):
    """ball_volume equals a full enumeration count for every radius."""
    for n in range(1, 8):
        histogram = oracles.brute_weight_histogram(n, q)
        running = 0
        for r in range(n + 1):
            running += histogram[r]
            assert ball_volume(n, r, q) == running


@pytest.mark.parametrize("q", [2, 3, 4, 5, 16])
def test_ball_volume_identities(q):
    for n in range(1, 12):
        assert ball_volume(n, 0, q) == 1
        assert ball_volume(n, n, q) == q**n
        volumes = [ball_volume(n, r, q) for r in range(n + 1)]
        assert volumes == sorted(volumes)
        assert all(a < b for a, b in zip(volumes, volumes[1:]))


def test_ball_volume_rejects_bad_radii():
    for n, r in [(5, -1), (5, 6), (3, 4), (0, 1)]:
        with pytest.raises(ParameterError):
            ball_volume(n, r, 2)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_weight_class_sizes(q):
    """Class i has size C(n,i)(q-1)^i and the classes sum to the volume."""
    for n in range(1, 9):
        for r in range(n + 1):
            sizes = ball_weight_class_sizes(n, r, q)
            assert len(sizes) == r + 1
            for i, size in enumerate(sizes):
                assert size == math.comb(n, i) * (q - 1) ** i
            assert sum(sizes) == ball_volume(n, r, q)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 16])
def test_entropy_against_high_precision(q):
    """entropy_q matches a 50-digit mpmath evaluation on a grid."""
    mpmath.mp.dps = 50
    lnq = mpmath.log(q)
    for k in range(1, 20):
        x = mpmath.mpf(k) / 20
        expected = (
            x * mpmath.log(q - 1) / lnq
            - x * mpmath.log(x) / lnq
            - (1 - x) * mpmath.log(1 - x) / lnq
        )
        assert entropy_q(float(x), q) == pytest.approx(float(expected), abs=1e-13)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 16])
def test_entropy_endpoints_and_maximum(q):
    assert entropy_q(0, q) == 0.0
    assert entropy_q(1, q) == pytest.approx(math.log(q - 1, q) if q > 2 else 0.0)
    peak = Fraction(q - 1, q)
    assert entropy_q(peak, q) == pytest.approx(1.0, abs=1e-12)
    for k in range(1, 10):
        x = Fraction(k, 10)
        if x != peak:
            assert entropy_q(x, q) < 1.0


def test_entropy_binary_symmetry_and_concavity():
    for k in range(1, 10):
        x = k / 10
        assert entropy_q(x, 2) == pytest.approx(entropy_q(1 - x, 2), abs=1e-13)
    xs = [k / 40 for k in range(1, 40)]
    ys = [entropy_q(x, 2) for x in xs]
    for a, b, c in zip(ys, ys[1:], ys[2:]):
        assert b > (a + c) / 2


def test_entropy_rejects_out_of_range():
    for bad in (-0.1, 1.5, "7/5"):
        with pytest.raises(ParameterError):
            entropy_q(bad, 2)
    with pytest.raises(ParameterError):
        entropy_q(0.5, 1)


def test_radius_resolves_rationals_exactly():
    """Decimal, fraction-string, float, and Fraction inputs agree exactly."""
    for n in (7, 10, 16, 100):
        values = [radius_of(p, n) for p in ("0.2", "1/5", 0.2, Fraction(1, 5))]
        assert len(set(values)) == 1
        assert values[0] == n // 5
    assert radius_of(Fraction(1, 3), 100) == 33
    assert radius_of(0, 9) == 0
    assert radius_of(1, 9) == 9
    with pytest.raises(ParameterError):
        radius_of("2/1", 5)
    with pytest.raises(ParameterError):
        radius_of(-0.1, 5)


def test_as_fraction_is_exact_on_decimal_strings():
    assert as_fraction("0.2") == Fraction(1, 5)
    assert as_fraction(0.2) == Fraction(1, 5)
    assert as_fraction("1/3") == Fraction(1, 3)
    assert as_fraction(1) == Fraction(1)


def test_ball_spec_round_trips():
    spec = BallSpec.from_p(q=2, n=16, p="1/4")
    assert spec.radius == 4
    assert spec.p == Fraction(1, 4)
    again = BallSpec.from_radius(q=2, n=16, radius=4)
    assert again.radius == 4
    assert again.p == Fraction(4, 16)
    assert spec.volume() == ball_volume(16, 4, 2)
    assert spec.weight_class_sizes() == ball_weight_class_sizes(16, 4, 2)


def test_ball_spec_enforces_radius_invariant():
    with pytest.raises(ParameterError):
        BallSpec(n=10, p=Fraction(1, 5), q=2, radius=3)
    with pytest.raises(ParameterError):
        BallSpec.from_radius(q=2, n=10, radius=11)


@given(st.integers(1, 40), st.integers(0, 100), st.sampled_from([2, 3, 4, 5]))
def test_sampling_stays_inside_the_ball(n, num, q):
    p = Fraction(num, 100)
    spec = BallSpec.from_p(q=q, n=n, p=p)
    rng = random.Random(7)
    for _ in range(5):
        v = sample_ball_uniform(spec, rng)
        assert len(v) == n
        assert weight(v) <= spec.radius


def test_sampling_is_deterministic_per_seed():
    spec = BallSpec.from_p(q=3, n=12, p="1/4")
    a = [str(sample_ball_uniform(spec, random.Random(99))) for _ in range(3)]
    b = [str(sample_ball_uniform(spec, random.Random(99))) for _ in range(3)]
    assert a == b


def test_sampling_uniform_over_individual_points():
    """Every point of a small ball is hit at its exact uniform frequency.

    Ball of radius 2 in F_2^6 has 22 points; 22000 samples on a fixed seed
    give expected count 1000 per point, checked with a chi-square test.
    """
    spec = BallSpec.from_p(q=2, n=6, p=Fraction(1, 3))
    assert spec.radius == 2
    rng = random.Random(12345)
    counts: dict[str, int] = {}
    draws = 22_000
    for _ in range(draws):
        key = str(sample_ball_uniform(spec, rng))
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == spec.volume() == 22
    result = chisquare(list(counts.values()))
    assert result.pvalue > 0.001


def test_sampling_weight_distribution_ternary():
    """Weight-class frequencies match the exact class probabilities at q=3."""
    spec = BallSpec.from_p(q=3, n=10, p=Fraction(3, 10))
    sizes = spec.weight_class_sizes()
    volume = spec.volume()
    rng = random.Random(12345)
    draws = 30_000
    observed = [0] * (spec.radius + 1)
    for _ in range(draws):
        observed[weight(sample_ball_uniform(spec, rng))] += 1
    expected = [draws * size / volume for size in sizes]
    result = chisquare(observed, expected)
    assert result.pvalue > 0.001


@pytest.mark.parametrize(
    "q,n,radii",
    [(2, 5, range(6)), (3, 4, range(3)), (4, 3, range(4)), (5, 3, range(3))],
)
def test_ball_points_enumerates_exactly_the_ball(q, n, radii):
    """ball_points yields each ball member exactly once, center first."""
    f = field_new(q)
    for r in radii:
        center = VecQ.from_digits(f, [(i + 1) % q for i in range(n)])
        points = list(ball_points(f, center, r))
        assert points[0] == center
        assert len(points) == ball_volume(n, r, q)
        assert len(set(points)) == len(points)
        expected = {
            VecQ.from_digits(f, t)
            for t in oracles.all_tuples(q, n)
            if oracles.brute_distance(t, center.digits()) <= r
        }
        assert set(points) == expected


def test_ball_points_translation_invariance():
    f = field_new(3)
    center = VecQ.from_digits(f, [1, 2, 0, 1])
    around_zero = set(ball_points(f, VecQ.zero(f, 4), 2))
    around_center = set(ball_points(f, center, 2))
    assert {v + center for v in around_zero} == around_center
