"""Random linear codes and list-decodability checkers.

A code is given by a k x n generator matrix over F_q; the codeword set
is the row span (q^k messages, q^rank distinct codewords).  The exact
checker reports L_max = max over centers x of |B(x, radius) ∩ C| either
by full enumeration of F_q^n or by the candidate-restricted strategy
that only visits ∪_{c ∈ C} B(c, radius); the two agree for L >= 1
because any center that sees a codeword at all lies in that union.

Enumeration budgets are hard guards (ResourceBudgetError), never silent
truncations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import ParameterError, ResourceBudgetError
from .gfq import (FieldTable, VecQ, all_payloads, field_new, payload_add,
                  payload_distance, rank_of)
from .hamming import (BallSpec, RadiusParam, as_fraction, ball_points,
                      ball_volume, radius_of, sample_ball_uniform)

ENUMERATION_BUDGET = 2 ** 24


@dataclass(frozen=True)
class Code:
    """Linear code over F_q given by generator rows.

    full_rank records the construction contract: when set, the rows are
    linearly independent and |C| = q^k exactly.
    """

    field: FieldTable
    n: int
    k: int
    generator: tuple[VecQ, ...]
    full_rank: bool

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"block length n={self.n} must be >= 1")
        if self.k < 0 or self.k > self.n:
            raise ParameterError(f"dimension k={self.k} outside [0, {self.n}]")
        if len(self.generator) != self.k:
            raise ParameterError(
                f"{len(self.generator)} generator rows for k={self.k}")
        for row in self.generator:
            if row.field.q != self.field.q or row.n != self.n:
                raise ParameterError("generator row has mismatched shape")

    @property
    def q(self) -> int:
        return self.field.q

    def rate(self) -> float:
        return self.k / self.n

    def size(self) -> int:
        """|C| = q^rank; equals q^k when full_rank."""
        if self.full_rank:
            return self.field.q ** self.k
        return self.field.q ** rank_of(self.generator)

    def codeword_payloads(self) -> list[int]:
        """All q^k encodings m·G, indexed by message m in base-q order.

        Duplicates appear when the generator is rank-deficient.
        """
        f = self.field
        q = f.q
        out = [0]
        for row in self.generator:
            scaled = [(a * row).payload for a in range(q)]
            out = [payload_add(f, base, s) for s in scaled for base in out]
        return out

    def codewords(self) -> Iterator[VecQ]:
        f = self.field
        for payload in self.codeword_payloads():
            yield VecQ(f, self.n, payload)


def random_code(n: int, k: int, q: int, full_rank: bool,
                rng: random.Random) -> Code:
    """Code with i.i.d. uniform generator entries.

    With full_rank, rejection-resamples the whole matrix until rank k,
    realizing a uniform k-dimensional subspace.
    """
    field = field_new(q)
    if n < 1 or k < 0 or k > n:
        raise ParameterError(f"invalid dimensions n={n}, k={k}")
    b = field.bits_per_digit
    while True:
        rows = tuple(
            VecQ(field, n,
                 sum(rng.randrange(q) << (i * b) for i in range(n)))
            for _ in range(k))
        if not full_rank or rank_of(rows) == k:
            return Code(field, n, k, rows, full_rank)


def span_payloads(vectors: Sequence[VecQ]) -> set[int]:
    """Payload set of the span; see span_set."""
    f = vectors[0].field
    q = f.q
    for v in vectors[1:]:
        vectors[0]._check_mate(v)
    if q ** len(vectors) > ENUMERATION_BUDGET:
        raise ResourceBudgetError(
            f"span enumeration q^l = {q}^{len(vectors)} exceeds budget "
            f"{ENUMERATION_BUDGET}")
    out = {0}
    for v in vectors:
        scaled = [(a * v).payload for a in range(1, q)]
        out |= {payload_add(f, base, s) for s in scaled for base in out}
    return out


def span_set(vectors: Sequence[VecQ], field: FieldTable | None = None,
             n: int | None = None) -> set[VecQ]:
    """The set {sum a_i v_i : a in F_q^l}, deduplicated.

    Size is q^rank of the input.  An empty input spans {0}; pass `field`
    and `n` so its shape is known.  Budget: q^l <= 2^24.
    """
    if not vectors:
        if field is None or n is None:
            raise ParameterError("empty span needs explicit field and n")
        return {VecQ.zero(field, n)}
    f = vectors[0].field
    return {VecQ(f, vectors[0].n, p) for p in span_payloads(vectors)}


@dataclass(frozen=True)
class LdVerdict:
    """Outcome of an exact list-decodability check.

    L_max is the max over inspected centers of |B(center, radius) ∩ C|;
    exhaustive is True when every x in F_q^n was inspected (the
    candidate-restricted mode is equally exact for L >= 1, see module
    docstring).  decodable = (L_max <= L) for the L that was asked.
    """

    q: int
    n: int
    k: int
    radius: int
    L: int
    L_max: int
    witness_center: VecQ
    centers_inspected: int
    exhaustive: bool
    mode: str

    @property
    def decodable(self) -> bool:
        return self.L_max <= self.L

    def as_record(self) -> dict:
        return {
            "q": self.q, "n": self.n, "k": self.k, "radius": self.radius,
            "L": self.L, "L_max": self.L_max,
            "witness_center": str(self.witness_center),
            "centers_inspected": self.centers_inspected,
            "exhaustive": self.exhaustive, "mode": self.mode,
            "decodable": self.decodable,
        }


def check_ld_exact(code: Code, p: RadiusParam, L: int,
                   mode: str = "auto") -> LdVerdict:
    """Exact (p, L)-list-decodability check with radius floor(p*n).

    mode "full" visits every x in F_q^n (guard q^n <= 2^24) and counts
    codewords within the radius per center.  mode "candidates" spreads
    a ball around each codeword and tallies centers (guard
    q^k * ball_volume <= 2^24).  "auto" picks candidates when its
    budget allows, else full.  Both report the same L_max and the same
    lowest-payload witness.
    """
    if L < 1:
        raise ParameterError(f"list size L={L} must be >= 1")
    if mode not in ("auto", "full", "candidates"):
        raise ParameterError(f"unknown mode {mode!r}")
    field = code.field
    q, n = field.q, code.n
    radius = radius_of(p, n)
    candidate_cost = (q ** code.k) * ball_volume(n, radius, q)
    full_cost = q ** n
    if mode == "auto":
        mode = "candidates" if candidate_cost <= ENUMERATION_BUDGET else "full"
    if mode == "candidates":
        if candidate_cost > ENUMERATION_BUDGET:
            raise ResourceBudgetError(
                f"candidate enumeration q^k * V = {candidate_cost} exceeds "
                f"budget {ENUMERATION_BUDGET}; try check_ld_montecarlo")
        counts: dict[int, int] = {}
        for cw in code.codewords():
            for pt in ball_points(field, cw, radius):
                counts[pt.payload] = counts.get(pt.payload, 0) + 1
        l_max = max(counts.values())
        witness = min(c for c, cnt in counts.items() if cnt == l_max)
        return LdVerdict(q, n, code.k, radius, L, l_max,
                         VecQ(field, n, witness), len(counts), False,
                         "candidates")
    if full_cost > ENUMERATION_BUDGET:
        raise ResourceBudgetError(
            f"full enumeration q^n = {full_cost} exceeds budget "
            f"{ENUMERATION_BUDGET}; try check_ld_montecarlo")
    cws = code.codeword_payloads()
    l_max = -1
    witness = 0
    for x in all_payloads(field, n):
        cnt = 0
        for cw in cws:
            if payload_distance(field, n, x, cw) <= radius:
                cnt += 1
        if cnt > l_max:
            l_max = cnt
            witness = x
    return LdVerdict(q, n, code.k, radius, L, l_max,
                     VecQ(field, n, witness), full_cost, True, "full")


@dataclass(frozen=True)
class LdSampleDistribution:
    """List-size samples from the Monte Carlo checker.

    histogram maps an observed |B(x, radius) ∩ C| to how many trials
    produced it; max_count is the largest observed size (a lower bound
    on the true L_max).
    """

    q: int
    n: int
    k: int
    radius: int
    trials: int
    histogram: dict[int, int]
    max_count: int
    witness_center: VecQ

    def as_record(self) -> dict:
        return {
            "q": self.q, "n": self.n, "k": self.k, "radius": self.radius,
            "trials": self.trials,
            "histogram": {str(c): f for c, f in sorted(self.histogram.items())},
            "max_count": self.max_count,
            "witness_center": str(self.witness_center),
        }


def check_ld_montecarlo(code: Code, p: RadiusParam, trials: int,
                        rng: random.Random) -> LdSampleDistribution:
    """Sampled list sizes at centers x = (random codeword) + (ball noise).

    Importance sampling: uniform centers essentially never see two
    codewords, so centers are seeded at a codeword and perturbed within
    the ball, which covers exactly the centers whose count can exceed 0.
    Counts enumerate all q^k codewords (guard q^k <= 2^24).
    """
    if trials < 1:
        raise ParameterError(f"trials={trials} must be >= 1")
    field = code.field
    q, n = field.q, code.n
    if q ** code.k > ENUMERATION_BUDGET:
        raise ResourceBudgetError(
            f"codeword enumeration q^k = {q ** code.k} exceeds budget "
            f"{ENUMERATION_BUDGET}")
    radius = radius_of(p, n)
    spec = BallSpec.from_p(q, n, as_fraction(p))
    cws = code.codeword_payloads()
    histogram: dict[int, int] = {}
    max_count = -1
    witness = 0
    for _ in range(trials):
        seed_cw = cws[rng.randrange(len(cws))]
        noise = sample_ball_uniform(spec, rng)
        x = payload_add(field, seed_cw, noise.payload)
        cnt = 0
        for cw in cws:
            if payload_distance(field, n, x, cw) <= radius:
                cnt += 1
        histogram[cnt] = histogram.get(cnt, 0) + 1
        if cnt > max_count:
            max_count = cnt
            witness = x
    return LdSampleDistribution(q, n, code.k, radius, trials, histogram,
                                max_count, VecQ(field, n, witness))


def format_code(code: Code) -> str:
    """Serialize to the text format: header `q n k`, then k digit rows."""
    lines = [f"{code.q} {code.n} {code.k}"]
    lines.extend(str(row) for row in code.generator)
    return "\n".join(lines) + "\n"


def parse_code(text: str) -> Code:
    """Inverse of format_code; round-trips bit-exactly."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParameterError("empty code file")
    head = lines[0].split()
    if len(head) != 3:
        raise ParameterError(f"bad code header {lines[0]!r}; expected 'q n k'")
    try:
        q, n, k = (int(x) for x in head)
    except ValueError:
        raise ParameterError(f"bad code header {lines[0]!r}") from None
    if len(lines) - 1 != k:
        raise ParameterError(f"expected {k} generator rows, found {len(lines) - 1}")
    field = field_new(q)
    rows = []
    for ln in lines[1:]:
        if len(ln) != n:
            raise ParameterError(f"row {ln!r} has length {len(ln)}, expected {n}")
        rows.append(VecQ.from_string(field, ln))
    return Code(field, n, k, tuple(rows), full_rank=rank_of(rows) == k)
