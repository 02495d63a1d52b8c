"""The Hecke algebra of a Coxeter system over Z[v, v^-1].

Elements are stored in the basis T~_x = v^l(x) T_x, in which the quadratic
relation reads

    T~_s T~_s = T~_e + (v^-1 - v) T~_s,

and the Kazhdan-Lusztig element C'_x is the unique element fixed by the bar
involution d with C'_x in T~_x + sum_y vZ[v] T~_y.

>>> from soergel.coxeter import CoxeterMatrix, as_system
>>> W = as_system(CoxeterMatrix.dihedral(3))
>>> H = hecke_algebra(W)
>>> print(H.kl_basis(W.element("s")))
T~[e]*(1*v^1) + T~[s]*(1*v^0)
"""

from __future__ import annotations

import threading
from typing import Iterable, Mapping

from .coxeter import CoxeterSystem, Element, MixedSystemError, as_system
from .laurent import ONE, V, ZERO, LaurentPoly, laurent

__all__ = [
    "HeckeElt",
    "HeckeAlgebra",
    "hecke_algebra",
    "DescentError",
    "format_qpoly",
]

_VINV_MINUS_V = LaurentPoly({-1: 1, 1: -1})
_V_MINUS_VINV = LaurentPoly({1: 1, -1: -1})


class DescentError(ValueError):
    """Precondition sx > x violated."""


class HeckeElt:
    """Finitely supported map Element -> LaurentPoly (T~ coordinates)."""

    __slots__ = ("system", "terms", "_hash")

    def __init__(self, system: CoxeterSystem, terms: Mapping[Element, LaurentPoly] | None = None):
        self.system = system
        clean = {}
        if terms:
            for x, c in terms.items():
                if x.system is not system:
                    raise MixedSystemError("Hecke element term from another system")
                c = laurent(c)
                if c:
                    clean[x] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, system, terms: dict) -> "HeckeElt":
        h = cls.__new__(cls)
        h.system = system
        h.terms = terms
        h._hash = None
        return h

    @property
    def algebra(self) -> "HeckeAlgebra":
        return hecke_algebra(self.system)

    # ---- inspection ----
    def coeff(self, x: Element) -> LaurentPoly:
        return self.terms.get(x, ZERO)

    def support(self) -> list[Element]:
        return sorted(self.terms, key=Element.sort_key)

    def items(self):
        return [(x, self.terms[x]) for x in self.support()]

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # ---- linear structure ----
    def _check(self, other: "HeckeElt"):
        if other.system is not self.system:
            raise MixedSystemError("Hecke elements of different systems")

    def __add__(self, other):
        if not isinstance(other, HeckeElt):
            return NotImplemented
        self._check(other)
        t = dict(self.terms)
        _accumulate(t, other.terms)
        return HeckeElt._raw(self.system, t)

    def __sub__(self, other):
        if not isinstance(other, HeckeElt):
            return NotImplemented
        self._check(other)
        t = dict(self.terms)
        _accumulate(t, other.terms, -1)
        return HeckeElt._raw(self.system, t)

    def __neg__(self):
        return HeckeElt._raw(self.system, {x: -c for x, c in self.terms.items()})

    def scale(self, c) -> "HeckeElt":
        c = laurent(c)
        if not c:
            return HeckeElt._raw(self.system, {})
        out = {}
        for x, a in self.terms.items():
            p = a * c
            if p:
                out[x] = p
        return HeckeElt._raw(self.system, out)

    def __mul__(self, other):
        if isinstance(other, HeckeElt):
            return self.algebra.multiply(self, other)
        if isinstance(other, (LaurentPoly, int)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (LaurentPoly, int)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, HeckeElt):
            return NotImplemented
        return self.system is other.system and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # ---- text ----
    def to_pairs(self, basis: str = "ttilde") -> list[list[str]]:
        """[[word, laurent string], ...] in ShortLex order of the support."""
        out = []
        for x in self.support():
            c = self.terms[x]
            if basis == "t":
                c = c.shift(x.length)
            elif basis != "ttilde":
                raise ValueError("basis must be 'ttilde' or 't'")
            out.append([x.word_str, str(c)])
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"T~[{x}]*({self.terms[x]})" for x in self.support())

    def __repr__(self):
        return f"HeckeElt({self})"


def _accumulate(acc: dict, terms: Mapping, sign: int = 1):
    for x, c in terms.items():
        old = acc.get(x)
        new = (c if sign == 1 else -c) if old is None else (old + c if sign == 1 else old - c)
        if new:
            acc[x] = new
        elif old is not None:
            del acc[x]


def _acc_one(acc: dict, x, c):
    old = acc.get(x)
    new = c if old is None else old + c
    if new:
        acc[x] = new
    elif old is not None:
        del acc[x]


class HeckeAlgebra:
    """Hecke algebra H(W, S) with memoized bar images and KL basis."""

    def __init__(self, system: CoxeterSystem):
        self.system = system
        self._lock = threading.RLock()
        self._kl: dict = {}
        self._bar: dict = {}
        self.cache = None  # optional persistent store with get(x) / put(x, elt)

    def __repr__(self):
        return f"HeckeAlgebra({self.system!r})"

    # ---- basis elements ----
    def elt(self, terms=None) -> HeckeElt:
        return HeckeElt(self.system, terms)

    def zero(self) -> HeckeElt:
        return HeckeElt._raw(self.system, {})

    def one(self) -> HeckeElt:
        return HeckeElt._raw(self.system, {self.system.identity: ONE})

    def _el(self, x) -> Element:
        if isinstance(x, Element):
            if x.system is not self.system:
                raise MixedSystemError("element of another system")
            return x
        return self.system.element(x)

    def ttilde(self, x) -> HeckeElt:
        return HeckeElt._raw(self.system, {self._el(x): ONE})

    def t(self, x) -> HeckeElt:
        """T_x = v^-l(x) T~_x."""
        x = self._el(x)
        return HeckeElt._raw(self.system, {x: LaurentPoly.monomial(-x.length)})

    def cs(self, s) -> HeckeElt:
        """C'_s = T~_s + v."""
        s = self.system.gen(s)
        return HeckeElt._raw(self.system, {s: ONE, self.system.identity: V})

    # ---- basis conversion ----
    def t_to_ttilde(self, coeffs: Mapping) -> HeckeElt:
        """From T coordinates {x: c} to an element (c T_x = c v^-l(x) T~_x)."""
        return self.elt({self._el(x): laurent(c).shift(-self._el(x).length) for x, c in coeffs.items()})

    def ttilde_to_t(self, h: HeckeElt) -> dict:
        return {x: c.shift(x.length) for x, c in h.terms.items()}

    # ---- multiplication ----
    def left_gen(self, s, h: HeckeElt) -> HeckeElt:
        """T~_s * h."""
        W = self.system
        s = W.gen_index(s)
        out: dict = {}
        for x, c in h.terms.items():
            sx = W.mult_gen(x, s, "left")
            _acc_one(out, sx, c)
            if sx.length < x.length:
                _acc_one(out, x, c * _VINV_MINUS_V)
        return HeckeElt._raw(self.system, out)

    def right_gen(self, h: HeckeElt, s) -> HeckeElt:
        """h * T~_s."""
        W = self.system
        s = W.gen_index(s)
        out: dict = {}
        for x, c in h.terms.items():
            xs = W.mult_gen(x, s, "right")
            _acc_one(out, xs, c)
            if xs.length < x.length:
                _acc_one(out, x, c * _VINV_MINUS_V)
        return HeckeElt._raw(self.system, out)

    def multiply(self, a: HeckeElt, b: HeckeElt) -> HeckeElt:
        if a.system is not self.system or b.system is not self.system:
            raise MixedSystemError("cannot multiply Hecke elements of different systems")
        out: dict = {}
        for x, c in a.terms.items():
            prod = b
            for s in reversed(x.word):
                prod = self.left_gen(s, prod)
            for y, d in prod.terms.items():
                _acc_one(out, y, c * d)
        return HeckeElt._raw(self.system, out)

    # ---- involutions and pairing ----
    def _bar_basis(self, x: Element) -> HeckeElt:
        got = self._bar.get(x)
        if got is not None:
            return got
        if x.length == 0:
            got = self.one()
        else:
            s = x.word[0]
            rest = self._bar_basis(self.system.mult_gen(x, s, "left"))
            got = self.left_gen(s, rest) + rest.scale(_V_MINUS_VINV)
        with self._lock:
            self._bar.setdefault(x, got)
        return got

    def bar_d(self, a: HeckeElt) -> HeckeElt:
        """The ring involution d with d(v) = v^-1 and d(T~_s) = T~_s + v - v^-1."""
        out: dict = {}
        for x, c in a.terms.items():
            cb = c.bar()
            for y, d in self._bar_basis(x).terms.items():
                _acc_one(out, y, cb * d)
        return HeckeElt._raw(self.system, out)

    def anti_i(self, a: HeckeElt) -> HeckeElt:
        """The Z[v, v^-1]-linear anti-involution T~_x -> T~_{x^-1}."""
        return HeckeElt._raw(self.system, {self.system.inverse(x): c for x, c in a.terms.items()})

    def pairing(self, a: HeckeElt, b: HeckeElt) -> LaurentPoly:
        """Coefficient of T~_e in i(a) b."""
        return self.multiply(self.anti_i(a), b).coeff(self.system.identity)

    # ---- Kazhdan-Lusztig basis ----
    def kl_basis(self, x) -> HeckeElt:
        x = self._el(x)
        got = self._kl.get(x)
        if got is not None:
            return got
        if self.cache is not None:
            loaded = self.cache.get(self, x)
            if loaded is not None:
                with self._lock:
                    self._kl.setdefault(x, loaded)
                return loaded
        W = self.system
        if x.length == 0:
            C = self.one()
        else:
            s = W.left_descents(x)[0]
            sx = W.mult_gen(x, s, "left")
            Csx = self.kl_basis(sx)
            C = self.left_gen(s, Csx) + Csx.scale(V)
            for z, p in list(Csx.terms.items()):
                if z is sx or not W.descends(z, s, "left"):
                    continue
                mu = p.coeff(1)
                if mu:
                    C = C - self.kl_basis(z).scale(mu)
        with self._lock:
            fresh = x not in self._kl
            C = self._kl.setdefault(x, C)
        if fresh and self.cache is not None:
            self.cache.put(self, x, C)
        return C

    def kl_expand(self, h: HeckeElt) -> dict:
        """Coefficients c_x with h = sum_x c_x C'_x."""
        if h.system is not self.system:
            raise MixedSystemError("element of another system")
        rem = dict(h.terms)
        out = {}
        while rem:
            x = max(rem, key=Element.sort_key)
            c = rem[x]
            out[x] = c
            for y, p in self.kl_basis(x).terms.items():
                _acc_one(rem, y, -(c * p))
        return out

    def kl_polynomial(self, y, x) -> tuple:
        """P_{y,x} as integer coefficients of 1, q, q^2, ...; () is the zero polynomial."""
        y, x = self._el(y), self._el(x)
        p = self.kl_basis(x).coeff(y)
        if not p:
            return ()
        d = x.length - y.length
        coeffs = {}
        for e, c in p.terms():
            k2 = d - e
            if k2 < 0 or k2 % 2:
                raise ArithmeticError(f"unexpected exponent {e} in p_(y,x) for y={y}, x={x}")
            coeffs[k2 // 2] = c
        top = max(coeffs)
        return tuple(coeffs.get(k, 0) for k in range(top + 1))

    def mu(self, y, x) -> int:
        y, x = self._el(y), self._el(x)
        return self.kl_basis(x).coeff(y).coeff(1)

    def cs_product(self, s, x) -> dict:
        """The integers m_y with C'_s C'_x = sum_y m_y C'_y, for sx > x."""
        W = self.system
        x = self._el(x)
        si = W.gen_index(s)
        if W.descends(x, si, "left"):
            raise DescentError(f"{W.generators[si]} is a left descent of {x}; need sx > x")
        Cx = self.kl_basis(x)
        prod = self.left_gen(si, Cx) + Cx.scale(V)
        out = {}
        for y, c in self.kl_expand(prod).items():
            if not c.is_constant():
                raise ArithmeticError(f"non-constant coefficient {c} at {y} in C'_s C'_x")
            out[y] = c.constant_term()
        return out

    def elements(self, xs: Iterable) -> list[Element]:
        return [self._el(x) for x in xs]


_ALGEBRAS: dict = {}
_ALG_LOCK = threading.Lock()


def hecke_algebra(system) -> HeckeAlgebra:
    """Shared Hecke algebra of a system (memo tables are per system)."""
    system = as_system(system)
    with _ALG_LOCK:
        H = _ALGEBRAS.get(system)
        if H is None:
            H = HeckeAlgebra(system)
            _ALGEBRAS[system] = H
    return H


def format_qpoly(coeffs: tuple) -> str:
    """Render a KL polynomial, e.g. ``1 + q`` ; the zero polynomial is ``0``."""
    parts = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        mon = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
        if mon:
            body = mon if c == 1 else (f"-{mon}" if c == -1 else f"{c}*{mon}")
        else:
            body = str(c)
        parts.append(body)
    if not parts:
        return "0"
    return " + ".join(parts).replace("+ -", "- ")
