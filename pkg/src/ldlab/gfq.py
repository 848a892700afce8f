"""Exact arithmetic over small finite fields and packed vectors over them.

Fields F_q are supported for every prime power q with 2 <= q <= 16.
Field elements are integers in [0, q).  For prime q the integer is the
residue mod q.  For q = p^d the base-p digits of the integer are the
coefficients of a polynomial in x (least significant digit = constant
term) and arithmetic is modulo a fixed irreducible polynomial:

    q = 4    x^2 + x + 1
    q = 8    x^3 + x + 1
    q = 9    x^2 + 2x + 2
    q = 16   x^4 + x + 1

These choices are frozen so that tables, vector payloads and serialized
artifacts are bit-for-bit reproducible.

Vectors (`VecQ`) pack one coordinate per ceil(log2 q) bits of a Python
int, least significant digit = coordinate 1.  All values are immutable
after construction.  Coordinate indices in public APIs (supports,
shattering sets) are 1-based.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import ParameterError

MAX_Q = 16

# Irreducible modulus per extension field, little-endian coefficients.
_IRREDUCIBLE = {
    4: (1, 1, 1),
    8: (1, 1, 0, 1),
    9: (2, 2, 1),
    16: (1, 1, 0, 0, 1),
}

_DIGIT_CHARS = "0123456789abcdef"


def _prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, d) with q = p**d and p prime, or None."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if any(p % f == 0 for f in range(2, p)):
            continue
        if q % p:
            continue
        d = 0
        m = q
        while m % p == 0:
            m //= p
            d += 1
        return (p, d) if m == 1 else None
    return None


def _poly_mul_mod(a: int, b: int, p: int, modulus: tuple[int, ...]) -> int:
    """Multiply field elements written as base-p digit integers."""
    da = []
    while a:
        da.append(a % p)
        a //= p
    db = []
    while b:
        db.append(b % p)
        b //= p
    prod = [0] * (len(da) + len(db))
    for i, ai in enumerate(da):
        for j, bj in enumerate(db):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    deg = len(modulus) - 1
    for i in range(len(prod) - 1, deg - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(deg):
                prod[i - deg + j] = (prod[i - deg + j] - c * modulus[j]) % p
    out = 0
    for i in range(min(len(prod), deg) - 1, -1, -1):
        out = out * p + prod[i]
    return out


class FieldTable:
    """Precomputed arithmetic tables for F_q.

    Instances are canonical per q (see :func:`field_new`); equality and
    hashing go by q alone.
    """

    __slots__ = ("q", "characteristic", "degree", "bits_per_digit",
                 "add_table", "mul_table", "neg_table", "inv_table")

    def __init__(self, q: int, characteristic: int, degree: int,
                 add_table, mul_table, neg_table, inv_table):
        self.q = q
        self.characteristic = characteristic
        self.degree = degree
        self.bits_per_digit = (q - 1).bit_length()
        self.add_table = add_table
        self.mul_table = mul_table
        self.neg_table = neg_table
        self.inv_table = inv_table

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return self.inv_table[a]

    def __eq__(self, other):
        return isinstance(other, FieldTable) and other.q == self.q

    def __hash__(self):
        return hash(("FieldTable", self.q))

    def __repr__(self):
        return f"FieldTable(q={self.q})"


@lru_cache(maxsize=None)
def field_new(q: int) -> FieldTable:
    """Build (or fetch the cached) arithmetic tables for F_q, 2 <= q <= 16."""
    if not isinstance(q, int) or q < 2 or q > MAX_Q:
        raise ParameterError(f"field size q={q!r} outside supported range [2, {MAX_Q}]")
    pd = _prime_power(q)
    if pd is None:
        raise ParameterError(f"field size q={q} is not a prime power")
    p, d = pd
    if d == 1:
        add = tuple(tuple((a + b) % q for b in range(q)) for a in range(q))
        mul = tuple(tuple((a * b) % q for b in range(q)) for a in range(q))
    else:
        modulus = _IRREDUCIBLE[q]

        def poly_add(a: int, b: int) -> int:
            out, shift = 0, 1
            while a or b:
                out += ((a % p + b % p) % p) * shift
                a //= p
                b //= p
                shift *= p
            return out

        add = tuple(tuple(poly_add(a, b) for b in range(q)) for a in range(q))
        mul = tuple(tuple(_poly_mul_mod(a, b, p, modulus) for b in range(q))
                    for a in range(q))
    neg = tuple(next(b for b in range(q) if add[a][b] == 0) for a in range(q))
    inv = (0,) + tuple(next(b for b in range(1, q) if mul[a][b] == 1)
                       for a in range(1, q))
    return FieldTable(q, p, d, add, mul, neg, inv)


@lru_cache(maxsize=None)
def _ones_mask(bits_per_digit: int, n: int) -> int:
    # bit i*bits_per_digit set for every coordinate i
    return ((1 << (n * bits_per_digit)) - 1) // ((1 << bits_per_digit) - 1)


class VecQ:
    """Immutable length-n vector over F_q with packed digit storage."""

    __slots__ = ("field", "n", "payload")

    def __init__(self, field: FieldTable, n: int, payload: int):
        self.field = field
        self.n = n
        self.payload = payload

    @classmethod
    def zero(cls, field: FieldTable, n: int) -> "VecQ":
        if n < 1:
            raise ParameterError(f"vector length n={n} must be >= 1")
        return cls(field, n, 0)

    @classmethod
    def from_digits(cls, field: FieldTable, digits: Sequence[int]) -> "VecQ":
        n = len(digits)
        if n < 1:
            raise ParameterError("vector needs at least one coordinate")
        b = field.bits_per_digit
        payload = 0
        for i, dgt in enumerate(digits):
            if not 0 <= dgt < field.q:
                raise ParameterError(f"digit {dgt!r} not in [0, {field.q})")
            payload |= dgt << (i * b)
        return cls(field, n, payload)

    @classmethod
    def from_string(cls, field: FieldTable, text: str) -> "VecQ":
        """Parse a digit string; digits are base-16 characters 0-9a-f."""
        try:
            digits = [int(ch, 16) for ch in text.strip()]
        except ValueError:
            raise ParameterError(f"bad digit in vector string {text!r}") from None
        return cls.from_digits(field, digits)

    def digit(self, i: int) -> int:
        """Digit at 0-based index i."""
        b = self.field.bits_per_digit
        return (self.payload >> (i * b)) & ((1 << b) - 1)

    def digits(self) -> tuple[int, ...]:
        b = self.field.bits_per_digit
        mask = (1 << b) - 1
        x = self.payload
        out = []
        for _ in range(self.n):
            out.append(x & mask)
            x >>= b
        return tuple(out)

    def weight(self) -> int:
        """Number of nonzero coordinates."""
        b = self.field.bits_per_digit
        x = self.payload
        if b == 1:
            return x.bit_count()
        acc = x
        for s in range(1, b):
            acc |= x >> s
        return (acc & _ones_mask(b, self.n)).bit_count()

    def support(self) -> frozenset[int]:
        """1-based indices of the nonzero coordinates."""
        return frozenset(i + 1 for i in range(self.n) if self.digit(i))

    def support_mask(self) -> int:
        """Bit i set iff coordinate i+1 is nonzero."""
        b = self.field.bits_per_digit
        x = self.payload
        if b == 1:
            return x
        acc = x
        for s in range(1, b):
            acc |= x >> s
        acc &= _ones_mask(b, self.n)
        out = 0
        i = 0
        while acc:
            if acc & 1:
                out |= 1 << i
            acc >>= b
            i += 1
        return out

    def distance(self, other: "VecQ") -> int:
        """Hamming distance; requires matching field and length."""
        self._check_mate(other)
        if self.field.characteristic == 2:
            b = self.field.bits_per_digit
            x = self.payload ^ other.payload
            if b == 1:
                return x.bit_count()
            acc = x
            for s in range(1, b):
                acc |= x >> s
            return (acc & _ones_mask(b, self.n)).bit_count()
        return (self - other).weight()

    def _check_mate(self, other: "VecQ") -> None:
        if not isinstance(other, VecQ):
            raise ParameterError(f"expected VecQ, got {type(other).__name__}")
        if other.field.q != self.field.q or other.n != self.n:
            raise ParameterError(
                f"mismatched vectors: (q={self.field.q}, n={self.n}) vs "
                f"(q={other.field.q}, n={other.n})")

    def __add__(self, other: "VecQ") -> "VecQ":
        self._check_mate(other)
        f = self.field
        if f.characteristic == 2:
            return VecQ(f, self.n, self.payload ^ other.payload)
        b = f.bits_per_digit
        mask = (1 << b) - 1
        at = f.add_table
        x, y = self.payload, other.payload
        out, shift = 0, 0
        while x or y:
            out |= at[x & mask][y & mask] << shift
            x >>= b
            y >>= b
            shift += b
        return VecQ(f, self.n, out)

    def __neg__(self) -> "VecQ":
        f = self.field
        if f.characteristic == 2:
            return self
        b = f.bits_per_digit
        mask = (1 << b) - 1
        nt = f.neg_table
        x = self.payload
        out, shift = 0, 0
        while x:
            out |= nt[x & mask] << shift
            x >>= b
            shift += b
        return VecQ(f, self.n, out)

    def __sub__(self, other: "VecQ") -> "VecQ":
        if self.field.characteristic == 2:
            self._check_mate(other)
            return VecQ(self.field, self.n, self.payload ^ other.payload)
        return self + (-other)

    def __rmul__(self, coeff: int) -> "VecQ":
        """Scalar multiple ``a * v`` with a a field element in [0, q)."""
        f = self.field
        if not 0 <= coeff < f.q:
            raise ParameterError(f"scalar {coeff!r} not in [0, {f.q})")
        if coeff == 0:
            return VecQ(f, self.n, 0)
        if coeff == 1:
            return self
        b = f.bits_per_digit
        mask = (1 << b) - 1
        row = f.mul_table[coeff]
        x = self.payload
        out, shift = 0, 0
        while x:
            out |= row[x & mask] << shift
            x >>= b
            shift += b
        return VecQ(f, self.n, out)

    def __eq__(self, other):
        return (isinstance(other, VecQ) and other.field.q == self.field.q
                and other.n == self.n and other.payload == self.payload)

    def __hash__(self):
        return hash((self.field.q, self.n, self.payload))

    def __str__(self):
        return "".join(_DIGIT_CHARS[d] for d in self.digits())

    def __repr__(self):
        return f"<VecQ q={self.field.q} {self}>"

    def __len__(self):
        return self.n


def weight(v: VecQ) -> int:
    """Number of nonzero coordinates of v."""
    return v.weight()


def distance(u: VecQ, v: VecQ) -> int:
    """Hamming distance between u and v (= weight(u - v))."""
    return u.distance(v)


def support(v: VecQ) -> frozenset[int]:
    """1-based indices of the nonzero coordinates of v."""
    return v.support()


def payload_add(field: FieldTable, x: int, y: int) -> int:
    """Coordinatewise sum of two packed payloads (hot-loop form)."""
    if field.characteristic == 2:
        return x ^ y
    b = field.bits_per_digit
    mask = (1 << b) - 1
    at = field.add_table
    out, shift = 0, 0
    while x or y:
        out |= at[x & mask][y & mask] << shift
        x >>= b
        y >>= b
        shift += b
    return out


def payload_weight(field: FieldTable, n: int, x: int) -> int:
    """Number of nonzero digits in a packed payload (hot-loop form)."""
    b = field.bits_per_digit
    if b == 1:
        return x.bit_count()
    acc = x
    for s in range(1, b):
        acc |= x >> s
    return (acc & _ones_mask(b, n)).bit_count()


def payload_distance(field: FieldTable, n: int, x: int, y: int) -> int:
    """Hamming distance between two packed payloads (hot-loop form)."""
    if field.characteristic == 2:
        return payload_weight(field, n, x ^ y)
    b = field.bits_per_digit
    mask = (1 << b) - 1
    d = 0
    while x or y:
        if (x ^ y) & mask:
            d += 1
        x >>= b
        y >>= b
    return d


def vec_linear_combination(coeffs: Sequence[int], vectors: Sequence[VecQ],
                           field: FieldTable | None = None,
                           n: int | None = None) -> VecQ:
    """Coordinatewise sum of coeffs[i] * vectors[i].

    An empty combination is the zero vector; pass `field` and `n` so its
    shape is known.
    """
    if len(coeffs) != len(vectors):
        raise ParameterError(
            f"{len(coeffs)} coefficients for {len(vectors)} vectors")
    if not vectors:
        if field is None or n is None:
            raise ParameterError("empty combination needs explicit field and n")
        return VecQ.zero(field, n)
    acc = coeffs[0] * vectors[0]
    for a, v in zip(coeffs[1:], vectors[1:]):
        acc = acc + a * v
    return acc


def all_payloads(field: FieldTable, n: int) -> Iterator[int]:
    """Yield the payload of every vector of F_q^n, ascending."""
    q = field.q
    b = field.bits_per_digit
    if q == (1 << b):
        yield from range(1 << (n * b))
        return
    digits = [0] * n
    payload = 0
    top = q - 1
    while True:
        yield payload
        i = 0
        while i < n and digits[i] == top:
            payload -= top << (i * b)
            digits[i] = 0
            i += 1
        if i == n:
            return
        digits[i] += 1
        payload += 1 << (i * b)


def all_vectors(field: FieldTable, n: int) -> Iterator[VecQ]:
    """Yield every vector of F_q^n in ascending payload order."""
    for payload in all_payloads(field, n):
        yield VecQ(field, n, payload)


def rank_of(vectors: Iterable[VecQ]) -> int:
    """Rank of the given vectors as rows of a matrix over their field."""
    vecs = list(vectors)
    if not vecs:
        return 0
    field = vecs[0].field
    n = vecs[0].n
    for v in vecs[1:]:
        vecs[0]._check_mate(v)
    if field.q == 2:
        rank = 0
        basis: list[int] = []
        for v in vecs:
            x = v.payload
            for b in basis:
                x = min(x, x ^ b)
            if x:
                basis.append(x)
                rank += 1
        return rank
    rows = [list(v.digits()) for v in vecs]
    rank = 0
    for col in range(n):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = field.inv(rows[rank][col])
        rows[rank] = [field.mul(inv, x) for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                factor = rows[r][col]
                rows[r] = [field.sub(x, field.mul(factor, y))
                           for x, y in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank
