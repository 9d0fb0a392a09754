"""Exact arithmetic in Q(i, sqrt2), dense matrices over it, and rational intervals.

An element is ``a + b*r2 + (c + d*r2)*i`` with rational a, b, c, d.  Internally the
four coordinates share one positive denominator, which keeps multiplication to
integer products plus a single gcd reduction.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]


class FieldError(ArithmeticError):
    pass


class DivisionByZero(FieldError, ZeroDivisionError):
    def __init__(self, operand: "FieldScalar"):
        super().__init__(f"division by zero field element {operand}")
        self.operand = operand


class DimensionMismatch(ValueError):
    def __init__(self, op: str, left: tuple[int, int], right: tuple[int, int]):
        super().__init__(f"{op}: incompatible shapes {left} and {right}")
        self.left = left
        self.right = right


def _reduce(a: int, b: int, c: int, d: int, den: int) -> tuple[int, int, int, int, int]:
    if den < 0:
        a, b, c, d, den = -a, -b, -c, -d, -den
    g = math.gcd(a, b, c, d, den)
    if g > 1:
        return a // g, b // g, c // g, d // g, den // g
    return a, b, c, d, den


class FieldScalar:
    """Immutable element of Q(i, sqrt2)."""

    __slots__ = ("_n", "_den", "_hash")

    def __init__(self, a: Rational = 0, b: Rational = 0, c: Rational = 0, d: Rational = 0):
        fa, fb, fc, fd = (Fraction(v) for v in (a, b, c, d))
        den = math.lcm(fa.denominator, fb.denominator, fc.denominator, fd.denominator)
        nums = [f.numerator * (den // f.denominator) for f in (fa, fb, fc, fd)]
        self._set(*_reduce(*nums, den))

    def _set(self, a: int, b: int, c: int, d: int, den: int) -> None:
        self._n = (a, b, c, d)
        self._den = den
        self._hash = None

    @classmethod
    def _raw(cls, a: int, b: int, c: int, d: int, den: int) -> FieldScalar:
        obj = cls.__new__(cls)
        obj._set(*_reduce(a, b, c, d, den))
        return obj

    @classmethod
    def coerce(cls, x: object) -> FieldScalar:
        if isinstance(x, FieldScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        if isinstance(x, complex):
            raise TypeError("floats are not exact; build FieldScalar from rationals")
        raise TypeError(f"cannot coerce {type(x).__name__} to FieldScalar")

    # coordinates -----------------------------------------------------------
    @property
    def a(self) -> Fraction:
        return Fraction(self._n[0], self._den)

    @property
    def b(self) -> Fraction:
        return Fraction(self._n[1], self._den)

    @property
    def c(self) -> Fraction:
        return Fraction(self._n[2], self._den)

    @property
    def d(self) -> Fraction:
        return Fraction(self._n[3], self._den)

    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self.a, self.b, self.c, self.d

    def is_zero(self) -> bool:
        return not any(self._n)

    def __bool__(self) -> bool:
        return any(self._n)

    def is_rational(self) -> bool:
        return not (self._n[1] or self._n[2] or self._n[3])

    def is_real(self) -> bool:
        return not (self._n[2] or self._n[3])

    def is_imaginary(self) -> bool:
        return not (self._n[0] or self._n[1])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise FieldError(f"{self} is not rational")
        return self.a

    def real_part(self) -> FieldScalar:
        n = self._n
        return FieldScalar._raw(n[0], n[1], 0, 0, self._den)

    def imag_part(self) -> FieldScalar:
        n = self._n
        return FieldScalar._raw(n[2], n[3], 0, 0, self._den)

    # arithmetic ------------------------------------------------------------
    def __add__(self, other: object) -> FieldScalar:
        if not isinstance(other, FieldScalar):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = FieldScalar(other)
        if not any(other._n):
            return self
        if not any(self._n):
            return other
        x, y = self._n, other._n
        p, q = self._den, other._den
        if p == q:
            return FieldScalar._raw(x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3], p)
        return FieldScalar._raw(
            x[0] * q + y[0] * p, x[1] * q + y[1] * p, x[2] * q + y[2] * p, x[3] * q + y[3] * p, p * q
        )

    __radd__ = __add__

    def __neg__(self) -> FieldScalar:
        n = self._n
        return FieldScalar._raw(-n[0], -n[1], -n[2], -n[3], self._den)

    def __sub__(self, other: object) -> FieldScalar:
        if not isinstance(other, FieldScalar):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = FieldScalar(other)
        return self + (-other)

    def __rsub__(self, other: object) -> FieldScalar:
        return (-self) + other

    def __mul__(self, other: object) -> FieldScalar:
        if not isinstance(other, FieldScalar):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = FieldScalar(other)
        x, y = self._n, other._n
        if not any(x) or not any(y):
            return ZERO
        a1, b1, c1, d1 = x
        a2, b2, c2, d2 = y
        # (u1 + v1 i)(u2 + v2 i) with u, v in Q(sqrt2)
        ra = a1 * a2 + 2 * b1 * b2 - c1 * c2 - 2 * d1 * d2
        rb = a1 * b2 + b1 * a2 - c1 * d2 - d1 * c2
        rc = a1 * c2 + 2 * b1 * d2 + c1 * a2 + 2 * d1 * b2
        rd = a1 * d2 + b1 * c2 + c1 * b2 + d1 * a2
        return FieldScalar._raw(ra, rb, rc, rd, self._den * other._den)

    __rmul__ = __mul__

    def conj(self) -> FieldScalar:
        """Complex conjugation i -> -i."""
        n = self._n
        return FieldScalar._raw(n[0], n[1], -n[2], -n[3], self._den)

    def sqrt2_conj(self) -> FieldScalar:
        """The Galois automorphism sqrt2 -> -sqrt2."""
        n = self._n
        return FieldScalar._raw(n[0], -n[1], n[2], -n[3], self._den)

    def inv(self) -> FieldScalar:
        if not any(self._n):
            raise DivisionByZero(self)
        # x * conj(x) lies in Q(sqrt2); then multiply by its sqrt2-conjugate to land in Q
        zc = self.conj()
        m = self * zc
        mm = m * m.sqrt2_conj()
        q = mm.to_fraction()
        return zc * m.sqrt2_conj() * FieldScalar(1 / q)

    def __truediv__(self, other: object) -> FieldScalar:
        if not isinstance(other, FieldScalar):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = FieldScalar(other)
        return self * other.inv()

    def __rtruediv__(self, other: object) -> FieldScalar:
        return FieldScalar.coerce(other) * self.inv()

    def __pow__(self, k: int) -> FieldScalar:
        if k < 0:
            return self.inv() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison / hashing --------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = FieldScalar(other)
        if not isinstance(other, FieldScalar):
            return NotImplemented
        return self._n == other._n and self._den == other._den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._n, self._den))
        return self._hash

    def __repr__(self) -> str:
        return f"FieldScalar({self})"

    def __str__(self) -> str:
        return to_text(self)

    def approx(self) -> complex:
        """Floating approximation, for display only."""
        a, b, c, d = self.coords
        r2 = math.sqrt(2)
        return complex(float(a) + float(b) * r2, float(c) + float(d) * r2)


ZERO = FieldScalar()
ONE = FieldScalar(1)
I = FieldScalar(0, 0, 1)
SQRT2 = FieldScalar(0, 1)


def field_arith(x: FieldScalar, y: FieldScalar | None, op: str) -> FieldScalar:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "conj":
        return x.conj()
    if op == "inv":
        return x.inv()
    raise ValueError(f"unknown op {op!r}")


# text serialization ---------------------------------------------------------

def _qtext(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def to_text(x: FieldScalar) -> str:
    """Canonical form ``a + b*r2 + (c + d*r2)*i`` with rationals as num/den."""
    a, b, c, d = x.coords
    return f"{_qtext(a)} + {_qtext(b)}*r2 + ({_qtext(c)} + {_qtext(d)}*r2)*i"


_TEXT_RE = re.compile(
    r"^\s*(-?\d+/\d+)\s*\+\s*(-?\d+/\d+)\*r2\s*\+\s*\(\s*(-?\d+/\d+)\s*\+\s*(-?\d+/\d+)\*r2\s*\)\*i\s*$"
)


def from_text(s: str) -> FieldScalar:
    m = _TEXT_RE.match(s)
    if not m:
        raise ValueError(f"not a canonical field scalar: {s!r}")
    return FieldScalar(*(Fraction(g) for g in m.groups()))


# matrices -------------------------------------------------------------------

class MatrixF:
    """Dense immutable matrix over Q(i, sqrt2), row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[object]):
        if rows < 1 or cols < 1:
            raise ValueError("matrix dimensions must be positive")
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = tuple(FieldScalar.coerce(e) for e in entries)

    @classmethod
    def _wrap(cls, rows: int, cols: int, entries: tuple[FieldScalar, ...]) -> MatrixF:
        m = cls.__new__(cls)
        m.rows, m.cols, m.entries = rows, cols, entries
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]]) -> MatrixF:
        r = len(rows)
        c = len(rows[0])
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return cls(r, c, [e for row in rows for e in row])

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> MatrixF:
        cols = rows if cols is None else cols
        return cls._wrap(rows, cols, (ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> MatrixF:
        return cls.diag([ONE] * n)

    @classmethod
    def diag(cls, values: Sequence[object]) -> MatrixF:
        n = len(values)
        e = [ZERO] * (n * n)
        for k, v in enumerate(values):
            e[k * n + k] = FieldScalar.coerce(v)
        return cls._wrap(n, n, tuple(e))

    @classmethod
    def unit(cls, n: int, i: int, j: int, value: object = 1) -> MatrixF:
        e = [ZERO] * (n * n)
        e[i * n + j] = FieldScalar.coerce(value)
        return cls._wrap(n, n, tuple(e))

    @classmethod
    def block(cls, blocks: Sequence[Sequence[MatrixF]]) -> MatrixF:
        heights = [row[0].rows for row in blocks]
        widths = [b.cols for b in blocks[0]]
        out: list[list[FieldScalar]] = []
        for brow, h in zip(blocks, heights):
            for r in range(h):
                line: list[FieldScalar] = []
                for b, w in zip(brow, widths):
                    if b.rows != h or b.cols != w:
                        raise DimensionMismatch("block", (b.rows, b.cols), (h, w))
                    line.extend(b.row(r))
                out.append(line)
        return cls.from_rows(out)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> FieldScalar:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[FieldScalar, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[FieldScalar]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def sub(self, r0: int, r1: int, c0: int, c1: int) -> MatrixF:
        return MatrixF._wrap(
            r1 - r0, c1 - c0,
            tuple(self.entries[i * self.cols + j] for i in range(r0, r1) for j in range(c0, c1)),
        )

    def is_zero(self) -> bool:
        return not any(self.entries)

    def nonzeros(self) -> Iterable[tuple[int, int, FieldScalar]]:
        c = self.cols
        for k, v in enumerate(self.entries):
            if v:
                yield k // c, k % c, v

    def _check_same(self, other: MatrixF, op: str) -> None:
        if self.shape != other.shape:
            raise DimensionMismatch(op, self.shape, other.shape)

    def __add__(self, other: MatrixF) -> MatrixF:
        if not isinstance(other, MatrixF):
            return NotImplemented
        self._check_same(other, "add")
        return MatrixF._wrap(self.rows, self.cols, tuple(x + y for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other: MatrixF) -> MatrixF:
        if not isinstance(other, MatrixF):
            return NotImplemented
        self._check_same(other, "sub")
        return MatrixF._wrap(self.rows, self.cols, tuple(x - y for x, y in zip(self.entries, other.entries)))

    def __neg__(self) -> MatrixF:
        return MatrixF._wrap(self.rows, self.cols, tuple(-x for x in self.entries))

    def scale(self, s: object) -> MatrixF:
        s = FieldScalar.coerce(s)
        return MatrixF._wrap(self.rows, self.cols, tuple(s * x for x in self.entries))

    def __rmul__(self, s: object) -> MatrixF:
        if isinstance(s, (int, Fraction, FieldScalar)):
            return self.scale(s)
        return NotImplemented

    def __matmul__(self, other: MatrixF) -> MatrixF:
        if not isinstance(other, MatrixF):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatch("mul", self.shape, other.shape)
        n, m, p = self.rows, self.cols, other.cols
        # zero-skipping dense product: in-scope matrices are mostly zeros
        orows = [[(j, v) for j, v in enumerate(other.row(k)) if v] for k in range(m)]
        out = [ZERO] * (n * p)
        A = self.entries
        for i in range(n):
            base = i * p
            for k in range(m):
                a = A[i * m + k]
                if not a:
                    continue
                for j, b in orows[k]:
                    out[base + j] = out[base + j] + a * b
        return MatrixF._wrap(n, p, tuple(out))

    def __mul__(self, other: object) -> MatrixF:
        if isinstance(other, MatrixF):
            return self @ other
        if isinstance(other, (int, Fraction, FieldScalar)):
            return self.scale(other)
        return NotImplemented

    def dagger(self) -> MatrixF:
        r, c = self.rows, self.cols
        return MatrixF._wrap(c, r, tuple(self.entries[i * c + j].conj() for j in range(c) for i in range(r)))

    def transpose(self) -> MatrixF:
        r, c = self.rows, self.cols
        return MatrixF._wrap(c, r, tuple(self.entries[i * c + j] for j in range(c) for i in range(r)))

    def conj(self) -> MatrixF:
        return MatrixF._wrap(self.rows, self.cols, tuple(x.conj() for x in self.entries))

    def trace(self) -> FieldScalar:
        if self.rows != self.cols:
            raise DimensionMismatch("trace", self.shape, self.shape)
        t = ZERO
        for k in range(self.rows):
            t = t + self.entries[k * self.cols + k]
        return t

    def commutator(self, other: MatrixF) -> MatrixF:
        return self @ other - other @ self

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatrixF):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"MatrixF({self.to_text_rows()})"

    def to_text_rows(self) -> list[list[str]]:
        return [[to_text(x) for x in self.row(i)] for i in range(self.rows)]

    @classmethod
    def from_text_rows(cls, rows: Sequence[Sequence[str]]) -> MatrixF:
        return cls.from_rows([[from_text(s) for s in row] for row in rows])


def mat_ops(X: MatrixF, Y: MatrixF | None, op: str, scalar: object = None) -> MatrixF | FieldScalar:
    if op == "add":
        return X + Y
    if op == "mul":
        return X @ Y
    if op == "commutator":
        if X.rows != X.cols or X.shape != Y.shape:
            raise DimensionMismatch("commutator", X.shape, Y.shape)
        return X.commutator(Y)
    if op == "dagger":
        return X.dagger()
    if op == "trace":
        return X.trace()
    if op == "scale":
        return X.scale(scalar)
    raise ValueError(f"unknown op {op!r}")


# exact sqrt helpers ---------------------------------------------------------

def rational_sqrt(q: Fraction) -> FieldScalar:
    """sqrt of a nonnegative rational when it lies in Q or Q*sqrt2."""
    q = Fraction(q)
    if q < 0:
        raise FieldError(f"negative radicand {q}")

    def exact(n: int) -> int | None:
        r = math.isqrt(n)
        return r if r * r == n else None

    rn, rd = exact(q.numerator), exact(q.denominator)
    if rn is not None and rd is not None:
        return FieldScalar(Fraction(rn, rd))
    # q = 2 * s^2  ->  sqrt(q) = s*sqrt2
    half = q / 2
    rn, rd = exact(half.numerator), exact(half.denominator)
    if rn is not None and rd is not None:
        return FieldScalar(0, Fraction(rn, rd))
    raise FieldError(f"sqrt({q}) is not in Q(sqrt2)")


# intervals and pi -----------------------------------------------------------

class RationalInterval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo: Rational, hi: Rational):
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x: Rational) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, other: object) -> RationalInterval:
        if isinstance(other, (int, Fraction)):
            other = RationalInterval(other, other)
        if not isinstance(other, RationalInterval):
            return NotImplemented
        return RationalInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> RationalInterval:
        return RationalInterval(-self.hi, -self.lo)

    def __sub__(self, other: object) -> RationalInterval:
        if isinstance(other, (int, Fraction)):
            other = RationalInterval(other, other)
        return self + (-other)

    def __mul__(self, other: object) -> RationalInterval:
        if isinstance(other, (int, Fraction)):
            other = RationalInterval(other, other)
        if not isinstance(other, RationalInterval):
            return NotImplemented
        p = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RationalInterval(min(p), max(p))

    __rmul__ = __mul__

    def reciprocal(self) -> RationalInterval:
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        return RationalInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other: object) -> RationalInterval:
        if isinstance(other, (int, Fraction)):
            other = RationalInterval(other, other)
        return self * other.reciprocal()

    def __rtruediv__(self, other: object) -> RationalInterval:
        return RationalInterval(other, other) * self.reciprocal()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalInterval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __repr__(self) -> str:
        return f"RationalInterval({self.lo}, {self.hi})"

    def to_json(self) -> dict:
        return {"lo": _qtext(self.lo), "hi": _qtext(self.hi)}


def _arctan_inv_fixed(x: int, scale: int) -> tuple[int, int]:
    """Fixed-point arctan(1/x)*scale by the alternating Taylor series.

    Returns (value, err) with |value - arctan(1/x)*scale| <= err.  Every term is
    a floor division (error in [0, 1) ulp), and the tail after the last summed
    term is bounded by the first omitted term because the series alternates
    with decreasing magnitudes.
    """
    total = 0
    power = scale // x  # floor(scale / x^(2k+1)); each step adds < 1 ulp of error
    x2 = x * x
    k = 0
    terms = 0
    while True:
        term = power // (2 * k + 1)
        if term == 0:
            break
        total += -term if k & 1 else term
        terms += 1
        power //= x2
        k += 1
    # floor errors: power_k carries < k+1 ulps of accumulated floor error, divided by
    # (2k+1) then floored again; bound each term's error by 2 ulps, plus 1 for the tail.
    return total, 2 * terms + 2


@lru_cache(maxsize=None)
def pi_enclosure(precision_bits: int) -> RationalInterval:
    """Certified rational interval lo < pi < hi of width <= 2**-precision_bits.

    Uses Machin's formula pi = 16*atan(1/5) - 4*atan(1/239) in fixed point with
    guard bits; the error budget from ``_arctan_inv_fixed`` is propagated with
    the coefficients 16 and 4, and the result is widened by one extra ulp on
    each side so both endpoints are strict bounds.
    """
    if precision_bits < 8:
        raise ValueError("precision_bits must be >= 8")
    guard = 16
    while True:
        w = precision_bits + guard
        scale = 1 << w
        a5, e5 = _arctan_inv_fixed(5, scale)
        a239, e239 = _arctan_inv_fixed(239, scale)
        mid = 16 * a5 - 4 * a239
        err = 16 * e5 + 4 * e239 + 1
        lo = Fraction(mid - err, scale)
        hi = Fraction(mid + err, scale)
        if hi - lo <= Fraction(1, 1 << precision_bits):
            return RationalInterval(lo, hi)
        guard += 8
