"""Integer Laurent polynomials in one variable ``v``.

Values are immutable and hashable.  The canonical text form lists terms by
ascending exponent, ``"1*v^-2 + 3*v^0"``; the zero polynomial prints as
``"0"``.

>>> a = LaurentPoly({-1: 1, 1: 1})
>>> str(a * a)
'1*v^-2 + 2*v^0 + 1*v^2'
>>> str(LaurentPoly.parse("1*v^2 + 3*v^-1").bar())
'1*v^-2 + 3*v^1'
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Mapping, Union

__all__ = ["LaurentPoly", "V", "ONE", "ZERO", "laurent"]

_TERM = re.compile(r"^([+-]?\d+)\*v\^([+-]?\d+)$")


class LaurentPoly:
    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] | None = None):
        c: dict[int, int] = {}
        if coeffs is not None:
            items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
            for e, k in items:
                if not isinstance(e, int) or not isinstance(k, int):
                    raise TypeError("exponents and coefficients must be integers")
                if k:
                    nk = c.get(e, 0) + k
                    if nk:
                        c[e] = nk
                    else:
                        c.pop(e, None)
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict[int, int]) -> "LaurentPoly":
        # trusted constructor: c already has no zero entries
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls._raw({exp: coeff} if coeff else {})

    @classmethod
    def const(cls, k: int) -> "LaurentPoly":
        return cls.monomial(0, k)

    # ---- inspection -------------------------------------------------
    def coeff(self, exp: int) -> int:
        return self._c.get(exp, 0)

    def terms(self) -> list[tuple[int, int]]:
        """(exponent, coefficient) pairs by ascending exponent."""
        return sorted(self._c.items())

    def exponents(self) -> list[int]:
        return sorted(self._c)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def min_exp(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no exponents")
        return min(self._c)

    def max_exp(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no exponents")
        return max(self._c)

    def is_constant(self) -> bool:
        return all(e == 0 for e in self._c)

    def constant_term(self) -> int:
        return self._c.get(0, 0)

    def is_selfdual(self) -> bool:
        return all(self._c.get(-e) == k for e, k in self._c.items())

    def is_nonneg(self) -> bool:
        return all(k > 0 for k in self._c.values())

    def evaluate(self, x):
        return sum(k * x**e for e, k in self._c.items())

    # ---- arithmetic -------------------------------------------------
    @staticmethod
    def _coerce(other) -> "LaurentPoly | None":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return LaurentPoly.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._c:
            return self
        c = dict(self._c)
        for e, k in o._c.items():
            nk = c.get(e, 0) + k
            if nk:
                c[e] = nk
            else:
                del c[e]
        return LaurentPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -k for e, k in self._c.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            if other == 0:
                return ZERO
            return LaurentPoly._raw({e: k * other for e, k in self._c.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if len(other._c) == 1:
            (f, m), = other._c.items()
            return LaurentPoly._raw({e + f: k * m for e, k in self._c.items()})
        c: dict[int, int] = {}
        for e, k in self._c.items():
            for f, m in other._c.items():
                c[e + f] = c.get(e + f, 0) + k * m
        return LaurentPoly._raw({e: k for e, k in c.items() if k})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials with unit coefficient are invertible")
            (e, k), = self._c.items()
            if k not in (1, -1):
                raise ValueError("only monomials with unit coefficient are invertible")
            return LaurentPoly._raw({e * n: k ** (-n)})
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, n: int) -> "LaurentPoly":
        """Multiply by v^n."""
        if n == 0:
            return self
        return LaurentPoly._raw({e + n: k for e, k in self._c.items()})

    def bar(self) -> "LaurentPoly":
        """The involution v -> v^-1."""
        return LaurentPoly._raw({-e: k for e, k in self._c.items()})

    # ---- comparison / hashing ---------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._c == o._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    # ---- text -------------------------------------------------------
    def __str__(self):
        if not self._c:
            return "0"
        return " + ".join(f"{k}*v^{e}" for e, k in self.terms())

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"

    def pretty(self) -> str:
        """Human-oriented rendering, e.g. ``v^-1 + 2 - v``."""
        if not self._c:
            return "0"
        parts = []
        for e, k in sorted(self._c.items()):
            mon = "" if e == 0 else ("v" if e == 1 else f"v^{e}")
            mag = abs(k)
            body = (str(mag) if (mag != 1 or not mon) else "") + mon
            parts.append(("-" if k < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Inverse of ``str``: accepts the canonical form only."""
        text = text.strip()
        if text == "0":
            return ZERO
        c: dict[int, int] = {}
        for chunk in text.split(" + "):
            m = _TERM.match(chunk.strip())
            if not m:
                raise ValueError(f"malformed Laurent term {chunk!r} in {text!r}")
            k, e = int(m.group(1)), int(m.group(2))
            if k == 0 or e in c:
                raise ValueError(f"non-canonical Laurent polynomial {text!r}")
            c[e] = k
        return cls._raw(c)


Scalarish = Union[LaurentPoly, int]


def laurent(x: Scalarish) -> LaurentPoly:
    """Coerce an int or LaurentPoly to LaurentPoly."""
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    raise TypeError(f"cannot interpret {x!r} as a Laurent polynomial")


ZERO = LaurentPoly._raw({})
ONE = LaurentPoly._raw({0: 1})
V = LaurentPoly._raw({1: 1})
