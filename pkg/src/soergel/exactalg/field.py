"""Exact arithmetic in Q(2cos(pi/N)).

Elements of the field are kept in the power basis of theta = 2cos(pi/N)
modulo its minimal polynomial.  When that polynomial is linear the field is
Q itself and elements are returned as plain ``Fraction`` objects, so rational
representations never pay for the extension machinery.

The minimal polynomial is obtained by folding the cyclotomic polynomial of
order 2N along y -> y + 1/y, using the Vieta-Lucas polynomials C_k with
C_k(y + 1/y) = y^k + y^-k.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import mpmath

__all__ = [
    "cyclotomic_polynomial",
    "vieta_lucas",
    "minimal_polynomial",
    "NumberField",
    "Scalar",
    "FieldElement",
    "QQ",
    "field_for_orders",
    "sign",
    "to_float",
    "FieldMismatch",
]


class FieldMismatch(ValueError):
    """Operands live in different number fields."""


# ---------------------------------------------------------------------------
# integer / rational polynomial helpers (coefficient lists, low degree first)


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _pmul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _psub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim(out)


def _pdivmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    """Division with remainder over Q (b nonzero)."""
    a = [Fraction(x) for x in a]
    _trim(a)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead = Fraction(b[-1])
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = a[-1] / lead
        q[shift] = f
        for i, y in enumerate(b):
            a[i + shift] -= f * y
        _trim(a)
    return _trim(q), a


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("cyclotomic order must be positive")
    num: list = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num, rem = _pdivmod(num, cyclotomic_polynomial(d))
            assert not rem
    return tuple(int(c) for c in num)


@lru_cache(maxsize=None)
def vieta_lucas(k: int) -> tuple[int, ...]:
    """C_k with C_0 = 2, C_1 = x, C_{k+1} = x C_k - C_{k-1}."""
    if k == 0:
        return (2,)
    if k == 1:
        return (0, 1)
    xc = [0] + list(vieta_lucas(k - 1))
    return tuple(_psub(xc, vieta_lucas(k - 2)))


@lru_cache(maxsize=None)
def minimal_polynomial(N: int) -> tuple[int, ...]:
    """Minimal polynomial of 2cos(pi/N) over Q, monic, lowest degree first.

    >>> minimal_polynomial(4)
    (-2, 0, 1)
    """
    if N < 1:
        raise ValueError("N must be a positive integer")
    if N == 1:
        return (2, 1)  # 2cos(pi) = -2
    phi = cyclotomic_polynomial(2 * N)
    deg = len(phi) - 1
    assert deg % 2 == 0 and phi == phi[::-1], "cyclotomic polynomial should be palindromic"
    k = deg // 2
    out: list = [phi[k]]
    for j in range(1, k + 1):
        cj = vieta_lucas(j)
        term = [phi[k + j] * c for c in cj]
        n = max(len(out), len(term))
        out = [(out[i] if i < len(out) else 0) + (term[i] if i < len(term) else 0) for i in range(n)]
    return tuple(_trim(out))


# ---------------------------------------------------------------------------


class NumberField:
    """The field Q(theta), theta = 2cos(pi/N).  Instances are cached per N."""

    _instances: dict[int, "NumberField"] = {}

    def __new__(cls, N: int = 1):
        inst = cls._instances.get(N)
        if inst is None:
            inst = super().__new__(cls)
            inst._setup(N)
            cls._instances[N] = inst
        return inst

    def _setup(self, N: int) -> None:
        if N < 1:
            raise ValueError("N must be a positive integer")
        self.N = N
        self.minpoly = minimal_polynomial(N)
        self.degree = len(self.minpoly) - 1
        self.theta_float = 2 * math.cos(math.pi / N)
        # theta^i reduced into the power basis for i < 2*degree - 1
        d = self.degree
        self._powers: list[tuple[Fraction, ...]] = []
        for i in range(max(2 * d - 1, 1)):
            _, r = _pdivmod([0] * i + [1], self.minpoly)
            self._powers.append(tuple(Fraction(r[j]) if j < len(r) else Fraction(0) for j in range(d)))

    def __reduce__(self):
        return (NumberField, (self.N,))

    # ---- descriptors ----
    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def __repr__(self):
        return "QQ" if self.is_rational else f"Q(2cos(pi/{self.N}))"

    @property
    def descriptor(self) -> str:
        return repr(self)

    # ---- element construction ----
    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def gen(self):
        """theta itself."""
        if self.is_rational:
            return Fraction(-self.minpoly[0])
        return Scalar(self, (Fraction(0), Fraction(1)) + (Fraction(0),) * (self.degree - 2))

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, Scalar):
            if value.field is not self:
                raise FieldMismatch(f"{value!r} is not in {self!r}")
            return value
        if isinstance(value, (int, Fraction)):
            if self.is_rational:
                return Fraction(value)
            return Scalar(self, (Fraction(value),) + (Fraction(0),) * (self.degree - 1))
        raise TypeError(f"cannot coerce {value!r} into {self!r}")

    def from_poly(self, coeffs: Sequence) -> "FieldElement":
        """Evaluate a rational polynomial at theta."""
        _, r = _pdivmod(list(coeffs), self.minpoly)
        if self.is_rational:
            return r[0] if r else Fraction(0)
        vec = tuple(Fraction(r[j]) if j < len(r) else Fraction(0) for j in range(self.degree))
        return Scalar(self, vec)

    def two_cos_pi_over(self, m: int) -> "FieldElement":
        """2cos(pi/m) as an element of this field (requires m | N)."""
        if m < 1:
            raise ValueError("m must be positive")
        if m in (1, 2, 3):
            return self((-2, 0, 1)[m - 1])
        if self.N % m:
            raise ValueError(f"2cos(pi/{m}) is not available in {self!r}")
        return self.from_poly(vieta_lucas(self.N // m))

    def contains(self, x) -> bool:
        if isinstance(x, Scalar):
            return x.field is self
        return isinstance(x, (int, Fraction))

    # ---- internal multiplication of coordinate vectors ----
    def _mul(self, a: tuple, b: tuple) -> tuple:
        d = self.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = list(prod[:d])
        for i in range(d, 2 * d - 1):
            c = prod[i]
            if c:
                p = self._powers[i]
                for j in range(d):
                    out[j] += c * p[j]
        return tuple(out)

    def _inv(self, a: tuple) -> tuple:
        # extended Euclid: find u with u*a = 1 mod minpoly
        r0, r1 = [Fraction(c) for c in self.minpoly], _trim(list(a))
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        if len(r0) != 1:
            raise ZeroDivisionError("element is not invertible")
        c = r0[0]
        _, s = _pdivmod([x / c for x in s0], self.minpoly)
        return tuple(Fraction(s[j]) if j < len(s) else Fraction(0) for j in range(self.degree))


QQ = NumberField(1)


def field_for_orders(orders) -> NumberField:
    """Smallest field of the form Q(2cos(pi/N)) holding every 2cos(pi/m).

    Orders 1, 2, 3 and infinity give rational values and are ignored, so
    e.g. all simply laced systems are realized over Q.
    """
    N = 1
    for m in orders:
        if m is None or (isinstance(m, float) and math.isinf(m)) or m in (1, 2, 3):
            continue
        N = N * int(m) // math.gcd(N, int(m))
    return NumberField(N)


class Scalar:
    """Element of an irrational Q(2cos(pi/N)) in power-basis coordinates."""

    __slots__ = ("field", "coords", "_hash")

    def __init__(self, field: NumberField, coords: Sequence):
        if len(coords) != field.degree:
            raise ValueError("coordinate vector has wrong length")
        self.field = field
        self.coords = tuple(Fraction(c) for c in coords)
        self._hash = None

    # ---- coercion ----
    def _other(self, o) -> tuple | None:
        if isinstance(o, Scalar):
            if o.field is not self.field:
                raise FieldMismatch(f"{self.field!r} vs {o.field!r}")
            return o.coords
        if isinstance(o, (int, Fraction)):
            return (Fraction(o),) + (Fraction(0),) * (self.field.degree - 1)
        return None

    def _wrap(self, coords: tuple) -> "Scalar":
        s = Scalar.__new__(Scalar)
        s.field = self.field
        s.coords = coords
        s._hash = None
        return s

    def __add__(self, o):
        c = self._other(o)
        if c is None:
            return NotImplemented
        return self._wrap(tuple(x + y for x, y in zip(self.coords, c)))

    __radd__ = __add__

    def __sub__(self, o):
        c = self._other(o)
        if c is None:
            return NotImplemented
        return self._wrap(tuple(x - y for x, y in zip(self.coords, c)))

    def __rsub__(self, o):
        c = self._other(o)
        if c is None:
            return NotImplemented
        return self._wrap(tuple(y - x for x, y in zip(self.coords, c)))

    def __neg__(self):
        return self._wrap(tuple(-x for x in self.coords))

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            return self._wrap(tuple(x * o for x in self.coords))
        c = self._other(o)
        if c is None:
            return NotImplemented
        return self._wrap(self.field._mul(self.coords, c))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not any(self.coords):
            raise ZeroDivisionError("division by zero in number field")
        return self._wrap(self.field._inv(self.coords))

    def __truediv__(self, o):
        if isinstance(o, (int, Fraction)):
            if o == 0:
                raise ZeroDivisionError("division by zero")
            return self._wrap(tuple(x / o for x in self.coords))
        c = self._other(o)
        if c is None:
            return NotImplemented
        return self * self._wrap(c).inverse()

    def __rtruediv__(self, o):
        c = self._other(o)
        if c is None:
            return NotImplemented
        return self._wrap(c) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # ---- predicates ----
    def __bool__(self):
        return any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def __eq__(self, o):
        try:
            c = self._other(o)
        except FieldMismatch:
            return False
        if c is None:
            return NotImplemented
        return self.coords == c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coords[0]) if self.is_rational() else hash((self.field.N, self.coords))
        return self._hash

    def __float__(self):
        return to_float(self)

    def sign(self) -> int:
        return sign(self)

    def __repr__(self):
        return f"Scalar({self.field!r}, [{', '.join(str(c) for c in self.coords)}])"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                mon = "" if i == 0 else ("theta" if i == 1 else f"theta^{i}")
                terms.append(f"{c}" if not mon else f"{c}*{mon}")
        return " + ".join(terms) if terms else "0"


FieldElement = Union[Fraction, Scalar]


def to_float(x) -> float:
    if isinstance(x, Scalar):
        t = x.field.theta_float
        return float(sum(float(c) * t**i for i, c in enumerate(x.coords)))
    return float(x)


def sign(x) -> int:
    """Exact sign of a real field element.

    A float evaluation settles everything that is not tiny relative to the
    size of its terms; the remaining cases are decided with mpmath at
    increasing precision (a nonzero algebraic number is bounded away from 0,
    so this terminates).
    """
    if isinstance(x, (int, Fraction)):
        return (x > 0) - (x < 0)
    if not isinstance(x, Scalar):
        raise TypeError(f"cannot take the sign of {x!r}")
    if not any(x.coords):
        return 0
    if x.is_rational():
        c = x.coords[0]
        return (c > 0) - (c < 0)
    t = x.field.theta_float
    val = 0.0
    scale = 0.0
    for i, c in enumerate(x.coords):
        term = float(c) * t**i
        val += term
        scale += abs(term)
    if abs(val) > 1e-9 * scale:
        return 1 if val > 0 else -1
    for dps in (50, 200, 1000, 5000):
        with mpmath.workdps(dps):
            th = 2 * mpmath.cos(mpmath.pi / x.field.N)
            acc = mpmath.mpf(0)
            mag = mpmath.mpf(0)
            for i, c in enumerate(x.coords):
                term = mpmath.mpf(c.numerator) / c.denominator * th**i
                acc += term
                mag += abs(term)
            if abs(acc) > mag * mpmath.mpf(10) ** (-(dps - 10)):
                return 1 if acc > 0 else -1
    raise ArithmeticError(f"could not resolve the sign of {x!r}")
