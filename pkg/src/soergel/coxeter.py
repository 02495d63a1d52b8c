"""Coxeter systems with elements keyed by their matrices.

Every element of a :class:`CoxeterSystem` is identified by its matrix in the
geometric representation (Tits' representation, which is faithful), so
equality and hashing never need the word problem.  Elements are interned per
system: two computations producing the same group element return the same
Python object.

Conventions
-----------
* ``rho(s)(v) = v - <v, e_s^vee> e_s``; in the geometric representation
  ``<e_t, e_s^vee> = -2cos(pi/m_st)`` and ``-2`` when ``m_st`` is infinite.
* In JSON an infinite entry of the Coxeter matrix is written as ``0``.
* Stored reduced words are ShortLex minimal with respect to the order of the
  generators in the matrix.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exactalg.field import NumberField, field_for_orders, sign
from .exactalg.linalg import kernel, rank, row_space

__all__ = [
    "INF",
    "CoxeterMatrix",
    "CoxeterSystem",
    "Element",
    "ReflectionRep",
    "FaithfulnessReport",
    "MixedSystemError",
    "BadWordError",
    "as_system",
    "build_geometric_rep",
    "build_reflection_faithful_rep",
    "permutation_rep",
    "multiply",
    "mult_gen",
    "descends",
    "bruhat_leq",
    "elements_up_to_length",
    "reflections_up_to_length",
    "reflections_by_conjugation",
    "faithfulness_checks",
]

INF = math.inf


class MixedSystemError(ValueError):
    """Operands belong to different Coxeter systems."""


class BadWordError(ValueError):
    """A word mentions an unknown generator."""


def _is_inf(m) -> bool:
    return isinstance(m, float) and math.isinf(m)


# ---------------------------------------------------------------------------
# Coxeter matrices


@dataclass(frozen=True)
class CoxeterMatrix:
    generators: tuple
    m: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        n = len(gens)
        if n == 0:
            raise ValueError("a Coxeter matrix needs at least one generator")
        if len(set(gens)) != n:
            raise ValueError("generator names must be distinct")
        for g in gens:
            if not isinstance(g, str) or not g or any(ch.isspace() for ch in g):
                raise ValueError(f"bad generator name {g!r}")
        rows = []
        for row in self.m:
            r = []
            for x in row:
                if _is_inf(x):
                    r.append(INF)
                elif isinstance(x, int) and not isinstance(x, bool):
                    r.append(x)
                else:
                    raise ValueError(f"Coxeter matrix entries must be integers or infinity, got {x!r}")
            rows.append(tuple(r))
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError("Coxeter matrix must be square and match the generator list")
        for i in range(n):
            if rows[i][i] != 1:
                raise ValueError("diagonal entries of a Coxeter matrix must be 1")
            for j in range(n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("Coxeter matrix must be symmetric")
                if i != j and not (_is_inf(rows[i][j]) or rows[i][j] >= 2):
                    raise ValueError(f"off-diagonal entry m[{gens[i]}][{gens[j]}] must be >= 2 or infinite")
        object.__setattr__(self, "m", tuple(rows))

    @property
    def rank(self) -> int:
        return len(self.generators)

    def order(self, i: int, j: int):
        return self.m[i][j]

    # ---- constructors ----
    @classmethod
    def dihedral(cls, m) -> "CoxeterMatrix":
        """I_2(m) on generators s, t; ``m`` may be an int, ``math.inf``, "inf" or 0 (meaning infinity)."""
        if isinstance(m, str) and m.strip().lower() in ("inf", "infinity", "\u221e"):
            m = INF
        if m == 0 or _is_inf(m):
            m = INF
        return cls(("s", "t"), ((1, m), (m, 1)))

    @classmethod
    def type_a(cls, n: int) -> "CoxeterMatrix":
        """A_n, i.e. the symmetric group S_{n+1}, on generators s1, ..., sn."""
        gens = tuple(f"s{i + 1}" for i in range(n))
        m = tuple(tuple(1 if i == j else (3 if abs(i - j) == 1 else 2) for j in range(n)) for i in range(n))
        return cls(gens, m)

    @classmethod
    def from_json(cls, obj) -> "CoxeterMatrix":
        if isinstance(obj, (str, bytes)):
            obj = json.loads(obj)
        try:
            gens = obj["generators"]
            raw = obj["m"]
        except (KeyError, TypeError) as exc:
            raise ValueError("Coxeter matrix JSON needs 'generators' and 'm'") from exc
        rows = []
        for row in raw:
            r = []
            for x in row:
                if not isinstance(x, int) or isinstance(x, bool):
                    raise ValueError(f"Coxeter matrix entries must be integers, got {x!r}")
                r.append(INF if x == 0 else x)
            rows.append(tuple(r))
        return cls(tuple(gens), tuple(rows))

    @classmethod
    def load(cls, path) -> "CoxeterMatrix":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "m": [[0 if _is_inf(x) else x for x in row] for row in self.m],
        }

    def canonical_json(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def is_dihedral(self) -> bool:
        return self.rank == 2

    def label(self) -> str:
        if self.rank == 2:
            m = self.m[0][1]
            return "I2(inf)" if _is_inf(m) else f"I2({m})"
        return self.canonical_json()


# ---------------------------------------------------------------------------
# elements


class Element:
    """An element of a Coxeter group.  Create through a :class:`CoxeterSystem`."""

    __slots__ = ("system", "key", "inv_key", "length", "_word", "_hash", "_rdesc", "_ldesc", "__weakref__")

    def __init__(self, system, key, inv_key, length):
        self.system = system
        self.key = key
        self.inv_key = inv_key
        self.length = length
        self._word = None
        self._hash = hash(key)
        self._rdesc = None
        self._ldesc = None

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Element):
            return NotImplemented
        return self.system is other.system and self.key == other.key

    def __mul__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.system.multiply(self, other)

    @property
    def word(self) -> tuple:
        """ShortLex-minimal reduced word as a tuple of generator indices."""
        if self._word is None:
            self._word = self.system._shortlex_word(self)
        return self._word

    @property
    def names(self) -> tuple:
        return tuple(self.system.generators[i] for i in self.word)

    @property
    def word_str(self) -> str:
        """Space separated generator names; the identity is the empty string."""
        return " ".join(self.names)

    def is_identity(self) -> bool:
        return self.length == 0

    def inverse(self) -> "Element":
        return self.system.inverse(self)

    def sort_key(self):
        return (self.length, self.word)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return self.word_str if self.length else "e"

    def __repr__(self):
        return f"Element({str(self)!r})"

    def __reduce__(self):
        return (_unpickle_element, (self.system.matrix, self.word))


def _unpickle_element(matrix, word):
    return as_system(matrix).from_indices(word)


# ---------------------------------------------------------------------------
# representations


class ReflectionRep:
    """A representation in which each simple generator acts by a reflection.

    ``roots[s]`` is the vector e_s and ``coroots[s]`` the covector e_s^vee,
    both in coordinates of a fixed basis of V.
    """

    def __init__(self, system: "CoxeterSystem", name: str, field: NumberField, roots, coroots):
        self.system = system
        self.name = name
        self.field = field
        self.roots = tuple(tuple(field(x) for x in r) for r in roots)
        self.coroots = tuple(tuple(field(x) for x in c) for c in coroots)
        n = system.rank
        if len(self.roots) != n or len(self.coroots) != n:
            raise ValueError("need one root and one coroot per generator")
        self.dim = len(self.roots[0])
        zero, one = field(0), field(1)
        gens = []
        for s in range(n):
            e, ev = self.roots[s], self.coroots[s]
            if len(e) != self.dim or len(ev) != self.dim:
                raise ValueError("root/coroot dimension mismatch")
            if _pair(e, ev) != 2:
                raise ValueError(f"<e_s, e_s^vee> must be 2 for generator {system.generators[s]}")
            gens.append(tuple(
                tuple((one if i == j else zero) - e[i] * ev[j] for j in range(self.dim))
                for i in range(self.dim)))
        self.gens = tuple(gens)
        self._cache: dict = {}
        self._lock = threading.Lock()
        self._check_braid_relations()

    def _check_braid_relations(self):
        n = self.system.rank
        ident = self.identity()
        for s in range(n):
            for t in range(s + 1, n):
                m = self.system.matrix.m[s][t]
                if _is_inf(m):
                    continue
                P = _matmul(self.gens[s], self.gens[t])
                acc = ident
                for _ in range(m):
                    acc = _matmul(acc, P)
                if acc != ident:
                    raise ValueError(
                        f"braid relation of order {m} fails for {self.system.generators[s]},"
                        f"{self.system.generators[t]} in the {self.name} representation")

    def identity(self):
        zero, one = self.field(0), self.field(1)
        return tuple(tuple(one if i == j else zero for j in range(self.dim)) for i in range(self.dim))

    def pairing_matrix(self):
        """P[t][s] = <e_t, e_s^vee>."""
        return tuple(tuple(_pair(self.roots[t], self.coroots[s]) for s in range(self.system.rank))
                     for t in range(self.system.rank))

    def matrix(self, w: Element):
        if w.system is not self.system:
            raise MixedSystemError("element and representation belong to different systems")
        M = self._cache.get(w)
        if M is not None:
            return M
        if w.length == 0:
            M = self.identity()
        else:
            s = w.word[-1]
            prev = self.system.mult_gen(w, s, "right")
            M = _matmul(self.matrix(prev), self.gens[s])
        with self._lock:
            self._cache.setdefault(w, M)
        return M

    def fixed_codim(self, w: Element) -> int:
        M = self.matrix(w)
        one = self.field(1)
        return rank([tuple(M[i][j] - (one if i == j else 0) for j in range(self.dim)) for i in range(self.dim)],
                    self.dim)

    def __repr__(self):
        return f"ReflectionRep({self.name!r}, dim={self.dim}, field={self.field!r})"


def _pair(v, c):
    s = 0
    for a, b in zip(v, c):
        if a and b:
            s = s + a * b
    return s


def _matmul(A, B):
    Bt = list(zip(*B))
    return tuple(tuple(_pair(a, b) for b in Bt) for a in A)


# ---------------------------------------------------------------------------
# systems


class CoxeterSystem:
    """A Coxeter system (W, S) given by its Coxeter matrix."""

    def __init__(self, matrix: CoxeterMatrix):
        self.matrix = matrix
        self.generators = matrix.generators
        self.rank = matrix.rank
        self._gen_index = {g: i for i, g in enumerate(self.generators)}
        orders = [matrix.m[i][j] for i in range(self.rank) for j in range(self.rank) if i != j]
        self.field = field_for_orders(orders)
        F = self.field
        n = self.rank
        # pairing <e_t, e_s^vee> = -2cos(pi/m_st)
        P = []
        for t in range(n):
            row = []
            for s in range(n):
                m = matrix.m[t][s]
                row.append(F(-2) if _is_inf(m) else -F.two_cos_pi_over(m))
            P.append(tuple(row))
        self.pairing = tuple(P)
        self._pcol = tuple(tuple(P[j][s] for j in range(n)) for s in range(n))
        self._lock = threading.RLock()
        self._intern: dict = {}
        self._bruhat: dict = {}
        self._layers: list = []
        ident = tuple(tuple(F(1) if i == j else F(0) for j in range(n)) for i in range(n))
        self.identity = self._get(ident, ident, 0)
        self.identity._word = ()
        self.gens = tuple(self.mult_gen(self.identity, s, "right") for s in range(n))
        self._layers = [[self.identity]]
        unit = [tuple(F(1) if i == j else F(0) for j in range(n)) for i in range(n)]
        self.geometric = ReflectionRep(self, "geometric", F, unit, [self._pcol[s] for s in range(n)])
        self._minimal = None
        self._perm = None

    def __repr__(self):
        return f"CoxeterSystem({self.matrix.label()})"

    def __reduce__(self):
        return (as_system, (self.matrix,))

    # ---- interning ----
    def _get(self, key, inv_key, length) -> Element:
        el = self._intern.get(key)
        if el is not None:
            return el
        with self._lock:
            el = self._intern.get(key)
            if el is None:
                el = Element(self, key, inv_key, length)
                self._intern[key] = el
        return el

    def _check(self, *els):
        for w in els:
            if not isinstance(w, Element) or w.system is not self:
                raise MixedSystemError(f"{w!r} does not belong to {self!r}")

    # ---- generator handling ----
    def gen_index(self, s) -> int:
        if isinstance(s, int) and not isinstance(s, bool):
            if 0 <= s < self.rank:
                return s
            raise BadWordError(f"generator index {s} out of range")
        if isinstance(s, Element):
            self._check(s)
            if s.length == 1:
                return s.word[0]
            raise BadWordError(f"{s!r} is not a simple generator")
        try:
            return self._gen_index[s]
        except KeyError:
            raise BadWordError(f"unknown generator {s!r}; expected one of {list(self.generators)}") from None

    def gen(self, s) -> Element:
        return self.gens[self.gen_index(s)]

    def parse_word(self, text: str | Sequence) -> tuple:
        """Word as generator indices; accepts a whitespace-separated string or a sequence of names."""
        if isinstance(text, str):
            parts = text.split()
        else:
            parts = list(text)
        return tuple(self.gen_index(p) for p in parts)

    def element(self, word) -> Element:
        """The group element of a (not necessarily reduced) word."""
        return self.from_indices(self.parse_word(word))

    def from_indices(self, indices: Iterable[int]) -> Element:
        w = self.identity
        for s in indices:
            w = self.mult_gen(w, s, "right")
        return w

    # ---- arithmetic ----
    def _col_sign(self, M, s) -> int:
        for row in M:
            x = row[s]
            if x:
                return sign(x)
        raise ArithmeticError("zero root vector")

    def mult_gen(self, w: Element, s, side: str = "right") -> Element:
        s = self.gen_index(s)
        self._check(w)
        n = self.rank
        pc = self._pcol[s]
        if side == "right":
            W, Wi = w.key, w.inv_key
            key = tuple(tuple(row[j] - pc[j] * row[s] if pc[j] else row[j] for j in range(n)) for row in W)
            inv = _left_reflect(Wi, s, pc)
            up = not self.descends(w, s, "right")
        elif side == "left":
            W, Wi = w.key, w.inv_key
            key = _left_reflect(W, s, pc)
            inv = tuple(tuple(row[j] - pc[j] * row[s] if pc[j] else row[j] for j in range(n)) for row in Wi)
            up = not self.descends(w, s, "left")
        else:
            raise ValueError("side must be 'left' or 'right'")
        return self._get(key, inv, w.length + (1 if up else -1))

    def descends(self, w: Element, s, side: str = "right") -> bool:
        """l(ws) < l(w) for side='right', l(sw) < l(w) for side='left'."""
        s = self.gen_index(s)
        self._check(w)
        if side == "right":
            if w._rdesc is None:
                w._rdesc = frozenset(t for t in range(self.rank) if self._col_sign(w.key, t) < 0)
            return s in w._rdesc
        if side == "left":
            if w._ldesc is None:
                w._ldesc = frozenset(t for t in range(self.rank) if self._col_sign(w.inv_key, t) < 0)
            return s in w._ldesc
        raise ValueError("side must be 'left' or 'right'")

    def left_descents(self, w: Element) -> list[int]:
        return [s for s in range(self.rank) if self.descends(w, s, "left")]

    def right_descents(self, w: Element) -> list[int]:
        return [s for s in range(self.rank) if self.descends(w, s, "right")]

    def multiply(self, w: Element, x: Element) -> Element:
        self._check(w, x)
        if x.length == 0:
            return w
        if w.length == 0:
            return x
        for s in x.word:
            w = self.mult_gen(w, s, "right")
        return w

    def inverse(self, w: Element) -> Element:
        self._check(w)
        return self._get(w.inv_key, w.key, w.length)

    def _shortlex_word(self, w: Element) -> tuple:
        out = []
        cur = w
        while cur.length:
            if cur._word is not None:
                out.extend(cur._word)
                break
            s = self.left_descents(cur)[0]
            out.append(s)
            cur = self.mult_gen(cur, s, "left")
        return tuple(out)

    # ---- order ----
    def bruhat_leq(self, y: Element, x: Element) -> bool:
        self._check(y, x)
        return self._bruhat_leq(y, x)

    def _bruhat_leq(self, y, x) -> bool:
        if y.length >= x.length:
            return y is x or y == x
        if y.length == 0:
            return True
        key = (y, x)
        hit = self._bruhat.get(key)
        if hit is not None:
            return hit
        s = self.left_descents(x)[0]
        sx = self.mult_gen(x, s, "left")
        if self.descends(y, s, "left"):
            res = self._bruhat_leq(self.mult_gen(y, s, "left"), sx)
        else:
            res = self._bruhat_leq(y, sx)
        with self._lock:
            self._bruhat[key] = res
        return res

    def lower_interval(self, x: Element) -> list[Element]:
        """All y <= x, ShortLex sorted."""
        return [y for y in self.elements_up_to_length(x.length) if self.bruhat_leq(y, x)]

    # ---- enumeration ----
    def elements_up_to_length(self, L: int) -> list[Element]:
        if L < 0:
            raise ValueError("L must be nonnegative")
        with self._lock:
            while len(self._layers) <= L:
                last = self._layers[-1]
                nxt = {}
                for w in last:
                    for s in range(self.rank):
                        if not self.descends(w, s, "right"):
                            u = self.mult_gen(w, s, "right")
                            nxt[u.key] = u
                if not nxt:
                    break
                self._layers.append(sorted(nxt.values(), key=Element.sort_key))
            layers = self._layers[: L + 1]
        return [w for layer in layers for w in layer]

    def is_finite_upto(self, L: int) -> bool:
        """True if the whole group has length <= L."""
        self.elements_up_to_length(L + 1)
        return len(self._layers) <= L + 1

    def reflections_up_to_length(self, L: int, rep: ReflectionRep | None = None) -> list[Element]:
        rep = rep or self.reflection_faithful_rep
        out = []
        for x in self.elements_up_to_length(L):
            if x.length == 0 or x.length % 2 == 0:
                continue
            if self.inverse(x) is not x:
                continue
            if rep.fixed_codim(x) == 1:
                out.append(x)
        return out

    def reflections_by_conjugation(self, L: int) -> list[Element]:
        """Reflections of length <= L, found as conjugates w s w^-1."""
        found = {}
        for w in self.elements_up_to_length(L):
            for s in self.gens:
                t = self.multiply(self.multiply(w, s), self.inverse(w))
                if t.length <= L:
                    found[t.key] = t
        return sorted(found.values(), key=Element.sort_key)

    def right_inversions(self, y: Element) -> list[Element]:
        """Reflections t with l(yt) < l(y), from the reduced word of y."""
        self._check(y)
        out = []
        word = y.word
        k = len(word)
        for j in range(k):
            tail = word[j + 1:]
            # t_j = s_k ... s_{j+1} s_j s_{j+1} ... s_k
            t = self.from_indices(tuple(reversed(tail)) + (word[j],) + tail)
            out.append(t)
        return out

    # ---- representations ----
    @property
    def reflection_faithful_rep(self) -> ReflectionRep:
        if self._minimal is None:
            self._minimal = _minimal_rep(self)
        return self._minimal


def _left_reflect(M, s, pc):
    """rho(s) * M where rho(s) = I - e_s (x) pairing column."""
    n = len(M)
    new_row = []
    for k in range(len(M[0])):
        acc = M[s][k]
        for j in range(n):
            if pc[j] and M[j][k]:
                acc = acc - pc[j] * M[j][k]
        new_row.append(acc)
    return tuple(tuple(new_row) if i == s else M[i] for i in range(n))


_SYSTEMS: dict = {}
_SYSTEMS_LOCK = threading.Lock()


def as_system(m) -> CoxeterSystem:
    """The shared :class:`CoxeterSystem` of a Coxeter matrix (or the system itself)."""
    if isinstance(m, CoxeterSystem):
        return m
    if not isinstance(m, CoxeterMatrix):
        raise TypeError("expected a CoxeterMatrix or CoxeterSystem")
    with _SYSTEMS_LOCK:
        sysm = _SYSTEMS.get(m)
        if sysm is None:
            sysm = CoxeterSystem(m)
            _SYSTEMS[m] = sysm
    return sysm


def build_geometric_rep(m) -> ReflectionRep:
    return as_system(m).geometric


def _minimal_rep(system: CoxeterSystem) -> ReflectionRep:
    F = system.field
    n = system.rank
    P = system.pairing
    null = kernel(P, n)  # P is symmetric, so this is also the left kernel
    c = len(null)
    dim = n + c
    roots = [tuple(F(1) if i == s else F(0) for i in range(dim)) for s in range(n)]
    coroots = []
    for s in range(n):
        coroots.append(tuple(P[j][s] for j in range(n)) + tuple(F(null[k][s]) for k in range(c)))
    if rank(coroots, dim) != n:  # cannot happen for symmetric P, kept as a guard
        raise ArithmeticError("coroots of the minimal realization are dependent")
    return ReflectionRep(system, "minimal", F, roots, coroots)


def build_reflection_faithful_rep(m) -> ReflectionRep:
    return as_system(m).reflection_faithful_rep


def permutation_rep(m) -> ReflectionRep:
    """The permutation representation k^(n+1) of S_(n+1) for a type A_n matrix.

    Generator i swaps coordinates i and i+1; e_i = eps_i - eps_(i+1) and
    e_i^vee = eps_i^* - eps_(i+1)^*.
    """
    system = as_system(m)
    n = system.rank
    expected = CoxeterMatrix.type_a(n).m
    if system.matrix.m != expected:
        raise ValueError("the permutation representation needs a type A Coxeter matrix in path order")
    if system._perm is None:
        F = system.field
        dim = n + 1
        vecs = []
        for i in range(n):
            vecs.append(tuple(F(1) if k == i else (F(-1) if k == i + 1 else F(0)) for k in range(dim)))
        system._perm = ReflectionRep(system, "permutation", F, vecs, vecs)
    return system._perm


# ---------------------------------------------------------------------------
# module level wrappers


def multiply(w: Element, x: Element) -> Element:
    if w.system is not x.system:
        raise MixedSystemError("cannot multiply elements of different Coxeter systems")
    return w.system.multiply(w, x)


def mult_gen(w: Element, s, side: str = "right") -> Element:
    return w.system.mult_gen(w, s, side)


def descends(w: Element, s, side: str = "right") -> bool:
    return w.system.descends(w, s, side)


def bruhat_leq(y: Element, x: Element) -> bool:
    if y.system is not x.system:
        raise MixedSystemError("cannot compare elements of different Coxeter systems")
    return y.system.bruhat_leq(y, x)


def elements_up_to_length(system, L: int) -> list[Element]:
    return as_system(system).elements_up_to_length(L)


def reflections_up_to_length(system, L: int, rep: ReflectionRep | None = None) -> list[Element]:
    return as_system(system).reflections_up_to_length(L, rep)


def reflections_by_conjugation(system, L: int) -> list[Element]:
    return as_system(system).reflections_by_conjugation(L)


# ---------------------------------------------------------------------------
# faithfulness


@dataclass
class FaithfulnessReport:
    rep: str
    cutoff: int
    n_elements: int
    n_reflections: int
    injective: bool
    spiegelvektortreu: bool
    spiegelungstreu: bool
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "rep": self.rep,
            "cutoff": self.cutoff,
            "elements": self.n_elements,
            "reflections": self.n_reflections,
            "injective": self.injective,
            "spiegelvektortreu": self.spiegelvektortreu,
            "spiegelungstreu": self.spiegelungstreu,
            "failures": list(self.failures),
        }


def _normalize_line(vec):
    for x in vec:
        if x:
            return tuple(y / x if y else y for y in vec)
    raise ArithmeticError("zero vector has no direction")


def faithfulness_checks(rep: ReflectionRep, L: int) -> FaithfulnessReport:
    """Check injectivity and the two reflection conditions for l(x) <= L.

    Reflections are taken from conjugation enumeration, independently of
    ``rep``.
    """
    system = rep.system
    elems = system.elements_up_to_length(L)
    refl = system.reflections_by_conjugation(L)
    refl_set = set(refl)
    failures = []

    mats = {}
    injective = True
    for x in elems:
        M = rep.matrix(x)
        if M in mats:
            injective = False
            failures.append(f"not injective: {mats[M]} and {x} act identically")
        else:
            mats[M] = x

    one = rep.field(1)

    def minus_id(M, sgn):
        return [tuple(M[i][j] - (sgn * one if i == j else 0) for j in range(rep.dim)) for i in range(rep.dim)]

    vector_ok = True
    lines = {}
    for t in refl:
        M = rep.matrix(t)
        A = minus_id(M, 1)
        if rank(A, rep.dim) != 1:
            vector_ok = False
            failures.append(f"reflection {t} does not act as a reflection")
            continue
        # (-1)-eigenline = image of (M - I)
        col_space = row_space([tuple(A[i][j] for i in range(rep.dim)) for j in range(rep.dim)], rep.dim)
        line = _normalize_line(col_space.basis[0])
        if line in lines:
            vector_ok = False
            failures.append(f"reflections {lines[line]} and {t} share a (-1)-eigenline")
        else:
            lines[line] = t

    codim_ok = True
    for x in elems:
        if x.length == 0:
            continue
        is_codim1 = rank(minus_id(rep.matrix(x), 1), rep.dim) == 1
        if is_codim1 != (x in refl_set):
            codim_ok = False
            kind = "non-reflection" if is_codim1 else "reflection"
            failures.append(f"{kind} {x} has fixed space of codimension {'1' if is_codim1 else '!= 1'}")

    return FaithfulnessReport(
        rep=rep.name,
        cutoff=L,
        n_elements=len(elems),
        n_reflections=len(refl),
        injective=injective,
        spiegelvektortreu=vector_ok,
        spiegelungstreu=injective and codim_ok,
        failures=failures,
    )
