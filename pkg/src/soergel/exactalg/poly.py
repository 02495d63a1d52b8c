"""Polynomial functions on a representation V, graded with deg V* = 2.

A :class:`PolyRing` belongs to a :class:`~soergel.coxeter.ReflectionRep`;
variable ``x_i`` is the i-th coordinate function on V.  Group elements act on
the right by substitution, ``act(w, f) = f o w`` (i.e. ``f^w`` with
``f^w(lam) = f(w lam)``), so ``act(y, act(x, f)) = act(x y, f)``.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Mapping

from .field import FieldMismatch
from .linalg import kernel, left_kernel, rank, solve_left

__all__ = [
    "PolyRing",
    "PolyElem",
    "NotAReflection",
    "IncompleteReflections",
    "ring_for",
    "act",
    "reflection_equation",
    "p_y",
    "invariant_basis",
    "divide_exact",
]


class NotAReflection(ValueError):
    """The element does not act as a reflection in the given representation."""


class IncompleteReflections(ValueError):
    """The supplied reflection list misses some inversions."""


def _add_into(acc: dict, terms: Mapping, scale=1):
    for m, c in terms.items():
        v = acc.get(m)
        nv = c * scale if v is None else v + c * scale
        if nv:
            acc[m] = nv
        elif v is not None:
            del acc[m]


def _mul_terms(a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            v = out.get(m)
            nv = ca * cb if v is None else v + ca * cb
            if nv:
                out[m] = nv
            elif v is not None:
                del out[m]
    return out


class PolyRing:
    """k[x_1, ..., x_n] with each variable in degree 2."""

    def __init__(self, field, nvars: int, rep=None):
        self.field = field
        self.nvars = nvars
        self.rep = rep
        self._mono: dict = {}
        self._index: dict = {}
        self._img: dict = {}
        self._lock = threading.Lock()
        self._zero_exp = (0,) * nvars

    def __repr__(self):
        return f"PolyRing({self.field!r}, {self.nvars})"

    # ---- graded pieces ----
    def monomials(self, d: int) -> list[tuple]:
        """Exponent vectors of degree d (= 2 * total degree), degrevlex descending."""
        if d < 0 or d % 2:
            return []
        got = self._mono.get(d)
        if got is None:
            k = d // 2
            mons = []
            for combo in combinations_with_replacement(range(self.nvars), k):
                e = [0] * self.nvars
                for i in combo:
                    e[i] += 1
                mons.append(tuple(e))
            mons.sort(key=lambda e: tuple(reversed(e)))
            got = mons
            with self._lock:
                self._mono[d] = got
                self._index[d] = {m: i for i, m in enumerate(got)}
        return got

    def index(self, d: int) -> dict:
        self.monomials(d)
        return self._index.get(d, {})

    def dim(self, d: int) -> int:
        if d < 0 or d % 2:
            return 0
        return comb(d // 2 + self.nvars - 1, self.nvars - 1)

    # ---- elements ----
    def __call__(self, terms) -> "PolyElem":
        if isinstance(terms, PolyElem):
            if terms.ring is not self:
                raise FieldMismatch("polynomial belongs to another ring")
            return terms
        if isinstance(terms, (int, Fraction)):
            return self.const(terms)
        return PolyElem(self, {m: c for m, c in dict(terms).items() if c})

    def const(self, c) -> "PolyElem":
        c = self.field(c)
        return PolyElem(self, {self._zero_exp: c} if c else {})

    def zero(self) -> "PolyElem":
        return PolyElem(self, {})

    def one(self) -> "PolyElem":
        return self.const(1)

    def var(self, i: int) -> "PolyElem":
        e = [0] * self.nvars
        e[i] = 1
        return PolyElem(self, {tuple(e): self.field(1)})

    def linear_form(self, coeffs) -> "PolyElem":
        """sum_i coeffs[i] x_i."""
        if len(coeffs) != self.nvars:
            raise ValueError("wrong number of coefficients for a linear form")
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * self.nvars
                e[i] = 1
                terms[tuple(e)] = self.field(c)
        return PolyElem(self, terms)

    def from_vector(self, d: int, vec) -> "PolyElem":
        mons = self.monomials(d)
        if len(vec) != len(mons):
            raise ValueError("vector length does not match dim R_d")
        return PolyElem(self, {m: c for m, c in zip(mons, vec) if c})

    # ---- action ----
    def _var_images(self, w):
        key = (w, None)
        got = self._img.get(key)
        if got is None:
            W = self.rep.matrix(w)
            got = []
            for i in range(self.nvars):
                terms = {}
                for j in range(self.nvars):
                    if W[i][j]:
                        e = [0] * self.nvars
                        e[j] = 1
                        terms[tuple(e)] = W[i][j]
                got.append(terms)
            with self._lock:
                self._img[key] = got
        return got

    def compose_monomial(self, w, mono: tuple) -> dict:
        """Terms of (x^mono) o w; memoized per (w, mono)."""
        key = (w, mono)
        got = self._img.get(key)
        if got is not None:
            return got
        if not any(mono):
            got = {mono: self.field(1)}
        else:
            i = next(k for k, x in enumerate(mono) if x)
            rest = list(mono)
            rest[i] -= 1
            got = _mul_terms(self._var_images(w)[i], self.compose_monomial(w, tuple(rest)))
        with self._lock:
            self._img[key] = got
        return got

    def act_terms(self, w, terms: Mapping) -> dict:
        out: dict = {}
        for m, c in terms.items():
            _add_into(out, self.compose_monomial(w, m), c)
        return out


class PolyElem:
    """A polynomial: dict exponent-vector -> nonzero field element."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    def _same(self, other):
        if isinstance(other, PolyElem):
            if other.ring is not self.ring:
                raise FieldMismatch("polynomials over different rings")
            return other
        if isinstance(other, int) or self.ring.field.contains(other):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        t = dict(self.terms)
        _add_into(t, o.terms)
        return PolyElem(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return PolyElem(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        t = dict(self.terms)
        _add_into(t, o.terms, -1)
        return PolyElem(self.ring, t)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PolyElem):
            self._same(other)
            return PolyElem(self.ring, _mul_terms(self.terms, other.terms))
        if isinstance(other, int) or self.ring.field.contains(other):
            if not other:
                return self.ring.zero()
            return PolyElem(self.ring, {m: c * other for m, c in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, PolyElem):
            return self.ring is other.ring and self.terms == other.terms
        if isinstance(other, int) or self.ring.field.contains(other):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {2 * sum(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int:
        """Degree of a nonzero homogeneous polynomial (each variable has degree 2)."""
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError("degree is defined for nonzero homogeneous polynomials only")
        return next(iter(ds))

    def vector(self, d: int | None = None) -> tuple:
        if d is None:
            d = self.degree if self.terms else 0
        idx = self.ring.index(d)
        vec = [Fraction(0)] * len(idx)
        for m, c in self.terms.items():
            if 2 * sum(m) != d:
                raise ValueError(f"polynomial has a term outside degree {d}")
            vec[idx[m]] = c
        return tuple(vec)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda e: (sum(e), tuple(reversed(e)))):
            mon = "*".join(f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(m) if k)
            parts.append(f"({self.terms[m]})" + (f"*{mon}" if mon else ""))
        return " + ".join(parts)


def ring_for(rep) -> PolyRing:
    """The polynomial ring of functions on ``rep`` (shared per representation)."""
    r = getattr(rep, "_poly_ring", None)
    if r is None:
        r = PolyRing(rep.field, rep.dim, rep)
        rep._poly_ring = r
    return r


def act(w, f: PolyElem, rep) -> PolyElem:
    """f o w, the right action ``f^w``."""
    R = ring_for(rep)
    if f.ring is not R:
        raise FieldMismatch("polynomial is not a function on this representation")
    if w.system is not rep.system:
        raise ValueError("element does not belong to the representation's system")
    return PolyElem(R, R.act_terms(w, f.terms))


def _minus_identity(M, sgn, one):
    n = len(M)
    return [tuple(M[i][j] - (sgn * one if i == j else 0) for j in range(n)) for i in range(n)]


def reflection_equation(t, rep) -> PolyElem:
    """The linear form alpha_t with ker alpha_t = V^t, first nonzero coefficient 1."""
    M = rep.matrix(t)
    one = rep.field(1)
    ident = rep.identity()
    sq = tuple(tuple(sum((M[i][k] * M[k][j] for k in range(rep.dim)), 0) for j in range(rep.dim))
               for i in range(rep.dim))
    if t.length == 0 or sq != ident or rank(_minus_identity(M, 1, one), rep.dim) != 1:
        raise NotAReflection(f"{t} does not act as a reflection in the {rep.name} representation")
    # a (M + I) = 0 : the covector a spans the (-1)-eigenspace of t on V*
    null = left_kernel(_minus_identity(M, -1, one), rep.dim)
    assert len(null) == 1
    a = null[0]
    lead = next(x for x in a if x)
    return ring_for(rep).linear_form([x / lead if x else x for x in a])


def p_y(y, rep, reflections) -> PolyElem:
    """Product of alpha_t over the reflections t in the list with l(yt) < l(y)."""
    R = ring_for(rep)
    sysm = rep.system
    out = R.one()
    count = 0
    for t in reflections:
        if sysm.multiply(y, t).length < y.length:
            out = out * reflection_equation(t, rep)
            count += 1
    if count != y.length:
        raise IncompleteReflections(
            f"found {count} inversions of {y} among the supplied reflections, expected {y.length}")
    return out


def invariant_basis(s, rep, d: int) -> list[PolyElem]:
    """Basis of the degree-d invariants R^s_d (kernel of f -> f o s - f)."""
    R = ring_for(rep)
    mons = R.monomials(d)
    if not mons:
        return []
    idx = R.index(d)
    rows = []
    for m in mons:
        img = R.compose_monomial(s, m)
        row = [Fraction(0)] * len(mons)
        for mm, c in img.items():
            row[idx[mm]] = c
        row[idx[m]] = row[idx[m]] - 1
        rows.append(tuple(row))
    # f = sum c_m x^m is invariant iff c (A - I) = 0 with rows as above
    return [R.from_vector(d, c) for c in left_kernel(rows, len(mons))]


def divide_exact(p: PolyElem, q: PolyElem) -> PolyElem | None:
    """p / q for homogeneous p, q when the division is exact, else None."""
    if p.is_zero():
        return p.ring.zero()
    R = p.ring
    dp, dq = p.degree, q.degree
    if dp < dq:
        return None
    d = dp - dq
    idx = R.index(dp)
    rows = []
    for m in R.monomials(d):
        prod = _mul_terms({m: R.field(1)}, q.terms)
        row = [Fraction(0)] * len(idx)
        for mm, c in prod.items():
            row[idx[mm]] = c
        rows.append(tuple(row))
    c = solve_left(rows, p.vector(dp), len(idx))
    if c is None:
        return None
    return R.from_vector(d, c)
