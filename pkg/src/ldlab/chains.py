"""Constructive shattering and increasing-chain machinery over F_q^l.

Two facts drive this module, and both finders ship with brute-force
oracles that certify their output.

Everywhere-differing shattering: if |S| > 2((q-1)l)^(c-1), there is a
coordinate set U, |U| = c, such that every pattern u in F_q^U is
avoided coordinatewise by some v in S (v|_U differs from u in every
coordinate of U).  `shatter_find` implements the inductive proof as a
recursion that splits the last coordinate into S1 (prefixes extended by
at least one last digit) and S2 (by at least two) and recurses with
(l-1, c) or (l-1, c-1) respectively.

c-increasing chains: an ordered sequence v_1, ..., v_d is c-increasing
when each v_j contributes >= c support coordinates fresh over the union
of the previous supports.  `chain_find` produces a translate w and a
chain inside S + w of length at least
ceil((1/c) log_q(|S|/2) - (1 - 1/c) log_q((q-1)l)) whenever that bound
is positive: it shatters a size-c set U, restricts to the richest fiber
u0 (the averaging step), recurses on the remaining coordinates, and
appends an element everywhere-differing from u0 on U.

Both finders are deterministic: all ties break to the lexicographically
smallest digit tuple (coordinate 1 most significant).  The brute-force
`longest_chain_oracle` certifies results by memoized search over
covered-support masks.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import ParameterError, ResourceBudgetError
from .gfq import FieldTable, VecQ, all_vectors, field_new

ORACLE_DIM_BUDGET = 20
TRANSLATE_SCAN_BUDGET = 2 ** 16


def shatter_threshold(ell: int, c: int, q: int) -> int:
    """2((q-1)l)^(c-1): shatter_find is guaranteed above this size."""
    return 2 * ((q - 1) * ell) ** (c - 1)


def chain_length_bound(L: int, ell: int, c: int, q: int) -> float:
    """(1/c) log_q(L/2) - (1 - 1/c) log_q((q-1)l).

    chain_find's length is >= ceil of this whenever it is positive.  At
    q = 2 this is exactly the binary bound (see binary_chain_length_bound).
    """
    if L < 1:
        raise ParameterError(f"set size L={L} must be >= 1")
    if ell < 1 or c < 1:
        raise ParameterError(f"need ell>=1 and c>=1, got ell={ell}, c={c}")
    if q < 2:
        raise ParameterError(f"alphabet size q={q} must be >= 2")
    lq = math.log(q)
    return (math.log(L / 2) / c - (1 - 1 / c) * math.log((q - 1) * ell)) / lq


def binary_chain_length_bound(L: int, ell: int, c: int) -> float:
    """(1/c) log2(L/2) - (1 - 1/c) log2(l), the q=2 form of the bound."""
    if L < 1:
        raise ParameterError(f"set size L={L} must be >= 1")
    if ell < 1 or c < 1:
        raise ParameterError(f"need ell>=1 and c>=1, got ell={ell}, c={c}")
    return math.log2(L / 2) / c - (1 - 1 / c) * math.log2(ell)


def _as_tuples(S: Iterable[VecQ]) -> tuple[FieldTable, int, frozenset[tuple[int, ...]]]:
    vecs = list(S)
    if not vecs:
        raise ParameterError("vector set must be nonempty")
    field = vecs[0].field
    ell = vecs[0].n
    for v in vecs[1:]:
        vecs[0]._check_mate(v)
    return field, ell, frozenset(v.digits() for v in vecs)


@dataclass(frozen=True)
class ShatterWitness:
    """A coordinate set U with a covering map certifying shattering.

    U holds 1-based coordinates, |U| = c.  covering_map sends each
    pattern u in F_q^U (keyed as a digit tuple in ascending-U order) to
    a member of S whose restriction to U differs from u everywhere.
    """

    q: int
    ell: int
    c: int
    U: frozenset[int]
    covering_map: dict[tuple[int, ...], VecQ]

    def validate(self, S: Iterable[VecQ]) -> bool:
        """Internal consistency: map total, members in S, all differing."""
        members = set(S)
        cols = sorted(self.U)
        if len(cols) != self.c or len(self.covering_map) != self.q ** self.c:
            return False
        for u, v in self.covering_map.items():
            if v not in members:
                return False
            if any(v.digit(j - 1) == u[i] for i, j in enumerate(cols)):
                return False
        return True


def shatter_verify(S: Iterable[VecQ], U: Iterable[int], q: int) -> bool:
    """Direct check: every u in F_q^U is avoided coordinatewise by some v in S.

    Cost q^|U| * |S|; independent of how U was found.
    """
    members = list(S)
    if not members:
        return False
    ell = members[0].n
    cols = sorted(set(U))
    if any(j < 1 or j > ell for j in cols):
        raise ParameterError(f"U={cols} not within [1, {ell}]")
    if members[0].field.q != q:
        raise ParameterError(
            f"q={q} does not match vector field q={members[0].field.q}")
    restrictions = {tuple(v.digit(j - 1) for j in cols) for v in members}
    for u in itertools.product(range(q), repeat=len(cols)):
        if not any(all(ri != ui for ri, ui in zip(r, u)) for r in restrictions):
            return False
    return True


def _shatter_tuples(S: frozenset[tuple[int, ...]], ell: int, q: int,
                    c: int) -> tuple[tuple[int, ...], dict] | None:
    """Recursive finder on digit tuples; returns (U 0-based ascending,
    pattern -> member tuple) or None."""
    if c > ell or len(S) < 2:
        return None
    if c == 1:
        for j in range(ell):
            if len({t[j] for t in S}) >= 2:
                cover = {}
                for u in range(q):
                    cover[(u,)] = min(t for t in S if t[j] != u)
                return ((j,), cover)
        return None
    extensions: dict[tuple[int, ...], list[int]] = {}
    for t in S:
        extensions.setdefault(t[:-1], []).append(t[-1])
    for bs in extensions.values():
        bs.sort()
    S1 = frozenset(extensions)
    S2 = frozenset(y for y, bs in extensions.items() if len(bs) >= 2)
    thr1 = shatter_threshold(ell - 1, c, q)
    thr2 = 2 * ((q - 1) * (ell - 1)) ** (c - 2)
    # |S| <= |S1| + (q-1)|S2|, so above the (l, c) threshold one of the
    # two cases is above its own threshold; below it, try both anyway.
    order = (2, 1) if len(S2) > thr2 and len(S1) <= thr1 else (1, 2)
    for case in order:
        if case == 1:
            res = _shatter_tuples(S1, ell - 1, q, c)
            if res is not None:
                U, cover1 = res
                return (U, {u: y + (extensions[y][0],)
                            for u, y in cover1.items()})
        elif S2:
            res = _shatter_tuples(S2, ell - 1, q, c - 1)
            if res is not None:
                U1, cover2 = res
                cover = {}
                for u in itertools.product(range(q), repeat=c):
                    y = cover2[u[:-1]]
                    b = next(bb for bb in extensions[y] if bb != u[-1])
                    cover[u] = y + (b,)
                return (U1 + (ell - 1,), cover)
    return None


def shatter_find(S: Iterable[VecQ], c: int) -> ShatterWitness | None:
    """Find a size-c coordinate set shattered by S (everywhere-differing
    form), or None.

    Success is guaranteed when |S| > shatter_threshold(l, c, q); below
    the threshold the recursion is attempted anyway and may still
    succeed.  Output is deterministic in S as a set.
    """
    if c < 1:
        raise ParameterError(f"shattering size c={c} must be >= 1")
    field, ell, tuples = _as_tuples(S)
    res = _shatter_tuples(tuples, ell, field.q, c)
    if res is None:
        return None
    U, cover = res
    covering_map = {u: VecQ.from_digits(field, t) for u, t in sorted(cover.items())}
    return ShatterWitness(field.q, ell, c,
                          frozenset(j + 1 for j in U), covering_map)


@dataclass(frozen=True)
class Chain:
    """A c-increasing chain: translate w plus ordered members from S.

    The defining property (checked by chain_verify) is that each
    translated member v_j + w contributes at least c support
    coordinates outside the union of the previous translated supports.
    """

    ell: int
    c: int
    translate_w: VecQ
    members: tuple[VecQ, ...]

    @property
    def d(self) -> int:
        return len(self.members)

    @property
    def q(self) -> int:
        return self.translate_w.field.q

    def verify(self) -> bool:
        return chain_verify(self.translate_w, self.members, self.c)


def chain_verify(translate_w: VecQ, members: Sequence[VecQ], c: int) -> bool:
    """True iff every member adds >= c fresh support coordinates after
    translation by w (vacuously true for the empty chain)."""
    if c < 1:
        raise ParameterError(f"freshness threshold c={c} must be >= 1")
    covered: frozenset[int] = frozenset()
    for v in members:
        translate_w._check_mate(v)
        supp = (v + translate_w).support()
        if len(supp - covered) < c:
            return False
        covered |= supp
    return True


def _compose(ell: int, cols: Sequence[int], on_cols: Sequence[int],
             rest: Sequence[int], on_rest: Sequence[int]) -> tuple[int, ...]:
    out = [0] * ell
    for j, val in zip(cols, on_cols):
        out[j] = val
    for j, val in zip(rest, on_rest):
        out[j] = val
    return tuple(out)


def _chain_tuples(S: frozenset[tuple[int, ...]], ell: int, field: FieldTable,
                  c: int) -> tuple[tuple[int, ...], list[tuple[int, ...]]]:
    q = field.q
    if ell < c:
        return ((0,) * ell, [])
    res = _shatter_tuples(S, ell, q, c)
    if res is None:
        # Best effort: one member, translated onto the all-ones vector.
        v1 = min(S)
        return (tuple(field.sub(1, x) for x in v1), [v1])
    U, cover = res
    cols = list(U)
    in_u = set(cols)
    rest = [j for j in range(ell) if j not in in_u]
    fibers: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for t in S:
        fibers.setdefault(tuple(t[j] for j in cols), []).append(t)
    u0 = min(fibers, key=lambda u: (-len(fibers[u]), u))
    v_last = min(t for t in S
                 if all(t[j] != u0[i] for i, j in enumerate(cols)))
    neg_u0 = [field.neg(x) for x in u0]
    if not rest:
        return (tuple(neg_u0), [v_last])
    S_prime = frozenset(tuple(t[j] for j in rest) for t in fibers[u0])
    w_prime, chain_prime = _chain_tuples(S_prime, len(rest), field, c)
    members = [_compose(ell, cols, u0, rest, vp) for vp in chain_prime]
    members.append(v_last)
    w = _compose(ell, cols, neg_u0, rest, w_prime)
    return (w, members)


def chain_find(S: Iterable[VecQ], c: int, q: int) -> Chain:
    """Construct a translate w and a c-increasing chain in S + w.

    Length is >= ceil(chain_length_bound(|S|, l, c, q)) whenever that
    bound is positive; otherwise a best-effort chain (length 1 when
    l >= c, else empty).  Deterministic in S as a set.
    """
    if c < 1:
        raise ParameterError(f"freshness threshold c={c} must be >= 1")
    field, ell, tuples = _as_tuples(S)
    if field.q != q:
        raise ParameterError(f"q={q} does not match vector field q={field.q}")
    w, members = _chain_tuples(tuples, ell, field, c)
    return Chain(ell, c, VecQ.from_digits(field, w),
                 tuple(VecQ.from_digits(field, t) for t in members))


def longest_chain_oracle(T: Iterable[VecQ], c: int) -> int:
    """Exact maximum c-increasing chain length within T (no translate).

    Memoized search over covered-support masks; requires l <= 20.
    Vectors with equal support are interchangeable here, so the search
    runs on the deduplicated support masks.
    """
    if c < 1:
        raise ParameterError(f"freshness threshold c={c} must be >= 1")
    vecs = list(T)
    if not vecs:
        return 0
    ell = vecs[0].n
    for v in vecs[1:]:
        vecs[0]._check_mate(v)
    if ell > ORACLE_DIM_BUDGET:
        raise ResourceBudgetError(
            f"oracle dimension l={ell} exceeds budget {ORACLE_DIM_BUDGET}")
    masks = sorted({v.support_mask() for v in vecs})

    @lru_cache(maxsize=None)
    def best(covered: int) -> int:
        top = 0
        for m in masks:
            if (m & ~covered).bit_count() >= c:
                cand = 1 + best(covered | m)
                if cand > top:
                    top = cand
        return top

    return best(0)


def oracle_best_translate(S: Iterable[VecQ], c: int) -> tuple[int, VecQ]:
    """Scan all q^l translates w, reporting (max oracle length, first w
    attaining it in payload order).  Budget q^l <= 2^16."""
    vecs = list(S)
    if not vecs:
        raise ParameterError("vector set must be nonempty")
    field = vecs[0].field
    ell = vecs[0].n
    if field.q ** ell > TRANSLATE_SCAN_BUDGET:
        raise ResourceBudgetError(
            f"translate scan q^l = {field.q ** ell} exceeds budget "
            f"{TRANSLATE_SCAN_BUDGET}")
    best_d = -1
    best_w = None
    for w in all_vectors(field, ell):
        d = longest_chain_oracle([v + w for v in vecs], c)
        if d > best_d:
            best_d = d
            best_w = w
    return best_d, best_w


def format_vector_set(vectors: Iterable[VecQ]) -> str:
    """Text format: header `q ell`, then one digit string per line,
    sorted."""
    vecs = sorted(vectors, key=lambda v: v.digits())
    if not vecs:
        raise ParameterError("vector set must be nonempty")
    lines = [f"{vecs[0].field.q} {vecs[0].n}"]
    lines.extend(str(v) for v in vecs)
    return "\n".join(lines) + "\n"


def parse_vector_set(text: str) -> list[VecQ]:
    """Inverse of format_vector_set (order preserved as listed)."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParameterError("empty vector-set file")
    head = lines[0].split()
    if len(head) != 2:
        raise ParameterError(f"bad header {lines[0]!r}; expected 'q ell'")
    try:
        q, ell = (int(x) for x in head)
    except ValueError:
        raise ParameterError(f"bad header {lines[0]!r}") from None
    field = field_new(q)
    out = []
    for ln in lines[1:]:
        if len(ln) != ell:
            raise ParameterError(f"vector {ln!r} has length {len(ln)}, expected {ell}")
        out.append(VecQ.from_string(field, ln))
    if not out:
        raise ParameterError("vector-set file lists no vectors")
    return out


def format_chain(chain: Chain) -> str:
    """Text format: header `q ell c`, translate line `w <digits>`, then
    one member per line."""
    lines = [f"{chain.q} {chain.ell} {chain.c}", f"w {chain.translate_w}"]
    lines.extend(str(v) for v in chain.members)
    return "\n".join(lines) + "\n"


def parse_chain(text: str) -> Chain:
    """Inverse of format_chain; round-trips exactly."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise ParameterError("chain file needs a header and a translate line")
    head = lines[0].split()
    if len(head) != 3:
        raise ParameterError(f"bad chain header {lines[0]!r}; expected 'q ell c'")
    try:
        q, ell, c = (int(x) for x in head)
    except ValueError:
        raise ParameterError(f"bad chain header {lines[0]!r}") from None
    if ell < 1 or c < 1:
        raise ParameterError(f"bad chain header {lines[0]!r}; need ell >= 1, c >= 1")
    wparts = lines[1].split()
    if len(wparts) != 2 or wparts[0] != "w":
        raise ParameterError(f"bad translate line {lines[1]!r}; expected 'w <digits>'")
    field = field_new(q)
    w = VecQ.from_string(field, wparts[1])
    if w.n != ell:
        raise ParameterError(f"translate length {w.n} != ell {ell}")
    members = []
    for ln in lines[2:]:
        if len(ln) != ell:
            raise ParameterError(f"member {ln!r} has length {len(ln)}, expected {ell}")
        members.append(VecQ.from_string(field, ln))
    return Chain(ell, c, w, tuple(members))


def format_witness(witness: ShatterWitness) -> str:
    """Text format: header `q ell c`, line `U <1-based coords>`, then one
    `pattern member` pair per line in pattern order."""
    lines = [f"{witness.q} {witness.ell} {witness.c}",
             "U " + " ".join(str(j) for j in sorted(witness.U))]
    for u in sorted(witness.covering_map):
        member = witness.covering_map[u]
        lines.append("".join(format(d, "x") for d in u) + " " + str(member))
    return "\n".join(lines) + "\n"


def parse_witness(text: str) -> ShatterWitness:
    """Inverse of format_witness; round-trips exactly."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise ParameterError("witness file needs a header and a U line")
    head = lines[0].split()
    if len(head) != 3:
        raise ParameterError(f"bad witness header {lines[0]!r}; expected 'q ell c'")
    try:
        q, ell, c = (int(x) for x in head)
    except ValueError:
        raise ParameterError(f"bad witness header {lines[0]!r}") from None
    uparts = lines[1].split()
    if not uparts or uparts[0] != "U":
        raise ParameterError(f"bad U line {lines[1]!r}")
    U = frozenset(int(x) for x in uparts[1:])
    if len(U) != c:
        raise ParameterError(f"|U|={len(U)} does not match c={c}")
    field = field_new(q)
    covering_map = {}
    if ell < 1 or c < 1 or not all(1 <= u <= ell for u in U):
        raise ParameterError(f"witness coordinates {sorted(U)} outside [1, {ell}]")
    for ln in lines[2:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ParameterError(f"bad covering line {ln!r}")
        if len(parts[0]) != c:
            raise ParameterError(f"pattern {parts[0]!r} has length != c={c}")
        pattern = tuple(int(ch, 16) for ch in parts[0])
        if any(not 0 <= d < q for d in pattern):
            raise ParameterError(f"pattern {parts[0]!r} has digits outside F_{q}")
        member = VecQ.from_string(field, parts[1])
        if member.n != ell:
            raise ParameterError(
                f"member {parts[1]!r} has length {member.n}, expected {ell}")
        covering_map[pattern] = member
    if len(covering_map) != q ** c:
        raise ParameterError(
            f"covering map lists {len(covering_map)} patterns, expected {q ** c}")
    return ShatterWitness(q, ell, c, U, covering_map)
