"""Character calculus for Bott-Samelson and special bimodules.

Characters live in the Hecke algebra (T~ coordinates).  Conventions:

* A shifted Bott-Samelson object ``B(s_1 ... s_k)[n]`` has character
  ``v^(n-k) (T~_s1 + v) ... (T~_sk + v)``, which is its Delta-character
  ``h_Delta``.  Shifting by [1] multiplies ``h_Delta`` by v and ``h_nabla`` by
  v^-1; for special bimodules ``h_nabla = d(h_Delta)``.
* Delta-multiplicities: ``(M : Delta_x[nu])`` is the v^nu coefficient of
  T~_x in ``h_Delta``; nabla-multiplicities: ``(M : nabla_x[mu])`` is the
  v^-mu coefficient of T~_x in ``h_nabla``.
* :func:`hom_rank` returns ``sum_i (number of free generators of Hom(M, N) in
  degree i) v^i``; it equals ``<h_Delta M, h_nabla N>`` and is the bar image
  of the multiplicity sum ``sum (M:Delta_x[nu])(N:nabla_x[mu]) v^(mu-nu)``.
  Both sides are computed and compared on every call.
* :func:`graded_rank_right` uses ``sum_i (dim of generators in degree i)
  v^-i``, so ``b(s) = T_s + 1`` has rank ``1 + v^-2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .coxeter import CoxeterMatrix, CoxeterSystem, Element, as_system
from .hecke import HeckeAlgebra, HeckeElt, hecke_algebra
from .laurent import ONE, V, ZERO, LaurentPoly, laurent

__all__ = [
    "BSObject",
    "BimoduleClass",
    "NegativeMultiplicity",
    "PositivityFailure",
    "HomFormulaMismatch",
    "SelfDualityError",
    "DELTA",
    "NABLA",
    "bs_character",
    "nabla_character",
    "standard_mults",
    "graded_rank_right",
    "multiplicity_hom_formula",
    "hom_rank",
    "left_inverse_image",
    "express_in_bwords",
    "bwords_character",
    "decompose_bs",
    "indecomposability_certificate",
    "selfdual_expansion",
    "theta",
    "theta_adjunction_check",
    "cs_bookkeeping",
    "DihedralReport",
    "dihedral_checks",
]

DELTA = "delta"
NABLA = "nabla"
_KIND_ALIASES = {"delta": DELTA, "Δ": DELTA, "d": DELTA, "nabla": NABLA, "∇": NABLA, "n": NABLA}


class NegativeMultiplicity(ValueError):
    """A read-off flag multiplicity is negative: the input is not a flag character."""


class PositivityFailure(ArithmeticError):
    """A decomposition coefficient has a negative term."""


class HomFormulaMismatch(AssertionError):
    """The multiplicity formula and the pairing disagree (internal error)."""


class SelfDualityError(AssertionError):
    """A self-dual expansion violated its normalization."""


# ---------------------------------------------------------------------------
# objects


@dataclass(frozen=True)
class BSObject:
    """A shifted Bott-Samelson object B(word)[shift]."""

    word: tuple
    shift: int = 0

    def __post_init__(self):
        w = self.word
        if isinstance(w, str):
            w = tuple(w.split())
        object.__setattr__(self, "word", tuple(w))
        if not isinstance(self.shift, int) or isinstance(self.shift, bool):
            raise TypeError("shift must be an integer")

    def validate(self, system: CoxeterSystem) -> tuple:
        """Generator indices of the word (raises on unknown names)."""
        return system.parse_word(self.word)

    def shifted(self, n: int) -> "BSObject":
        return BSObject(self.word, self.shift + n)

    def to_json(self) -> dict:
        return {"word": list(self.word), "shift": self.shift}


class BimoduleClass:
    """A formal sum of indecomposables B_x[nu] with multiplicities in N[v, v^-1]."""

    __slots__ = ("system", "mults")

    def __init__(self, system: CoxeterSystem, mults: Mapping[Element, LaurentPoly]):
        clean = {}
        for x, p in mults.items():
            p = laurent(p)
            if not p:
                continue
            if not p.is_nonneg():
                raise PositivityFailure(f"negative multiplicity {p} for B_{x}")
            clean[x] = p
        self.system = system
        self.mults = clean

    def __add__(self, other: "BimoduleClass") -> "BimoduleClass":
        if other.system is not self.system:
            raise ValueError("classes over different systems")
        m = dict(self.mults)
        for x, p in other.mults.items():
            m[x] = m.get(x, ZERO) + p
        return BimoduleClass(self.system, m)

    def shift(self, n: int) -> "BimoduleClass":
        return BimoduleClass(self.system, {x: p.shift(n) for x, p in self.mults.items()})

    def __eq__(self, other):
        if not isinstance(other, BimoduleClass):
            return NotImplemented
        return self.system is other.system and self.mults == other.mults

    def summands(self) -> list:
        """[(x, mult)] with x in decreasing ShortLex order."""
        return [(x, self.mults[x]) for x in sorted(self.mults, key=Element.sort_key, reverse=True)]

    def character(self) -> HeckeElt:
        H = hecke_algebra(self.system)
        out = H.zero()
        for x, p in self.mults.items():
            out = out + H.kl_basis(x).scale(p)
        return out

    def to_json(self) -> list:
        return [{"x": x.word_str, "mult": str(p)} for x, p in self.summands()]

    def __repr__(self):
        inner = " + ".join(f"B[{x}]*({p.pretty()})" for x, p in self.summands())
        return f"BimoduleClass({inner or '0'})"


# ---------------------------------------------------------------------------
# characters


def _system_of(obj) -> CoxeterSystem:
    if isinstance(obj, HeckeAlgebra):
        return obj.system
    return as_system(obj)


def theta(h: HeckeElt, s) -> HeckeElt:
    """(T~_s + v) h, the character of theta_s applied to h."""
    H = h.algebra
    return H.left_gen(s, h) + h.scale(V)


def bs_character(system, b: BSObject) -> HeckeElt:
    """v^(n-k) (T~_s1 + v) ... (T~_sk + v)."""
    W = _system_of(system)
    idx = b.validate(W)
    H = hecke_algebra(W)
    h = H.one()
    for s in reversed(idx):
        h = H.left_gen(s, h) + h.scale(V)
    return h.scale(LaurentPoly.monomial(b.shift - len(idx)))


def nabla_character(h: HeckeElt) -> HeckeElt:
    """h_nabla of a special bimodule with h_Delta = h."""
    return h.algebra.bar_d(h)


def _kind(kind: str) -> str:
    try:
        return _KIND_ALIASES[kind]
    except KeyError:
        raise ValueError(f"kind must be 'delta' or 'nabla', got {kind!r}") from None


def standard_mults(h: HeckeElt, kind: str = DELTA) -> dict:
    """{(x, shift): multiplicity} read off a flag character."""
    kind = _kind(kind)
    out = {}
    for x in h.support():
        for e, c in h.terms[x].terms():
            if c < 0:
                raise NegativeMultiplicity(
                    f"coefficient {c} of v^{e} at T~_{x} is negative; not a {kind}-flag character")
            out[(x, e if kind == DELTA else -e)] = c
    return out


def graded_rank_right(h: HeckeElt) -> LaurentPoly:
    """Graded rank of the underlying right R-module of a Delta-flag object."""
    acc = {}
    for (x, nu), c in standard_mults(h, DELTA).items():
        acc[nu - x.length] = acc.get(nu - x.length, 0) + c
    return LaurentPoly(acc)


def multiplicity_hom_formula(hM: HeckeElt, hN_nabla: HeckeElt) -> LaurentPoly:
    """sum_x (M:Delta_x[nu]) (N:nabla_x[mu]) v^(mu - nu)."""
    dm = standard_mults(hM, DELTA)
    nm = standard_mults(hN_nabla, NABLA)
    by_x: dict = {}
    for (x, mu), c in nm.items():
        by_x.setdefault(x, []).append((mu, c))
    acc: dict = {}
    for (x, nu), a in dm.items():
        for mu, b in by_x.get(x, ()):
            acc[mu - nu] = acc.get(mu - nu, 0) + a * b
    return LaurentPoly(acc)


def hom_rank(hM: HeckeElt, hN: HeckeElt, *, n_is_nabla: bool = False) -> LaurentPoly:
    """Graded rank of Hom(M, N), counting generators of degree i by v^i.

    ``hM`` is the Delta-character of M.  By default ``hN`` is the (Delta-)
    character of a special bimodule N and its nabla-character is taken to be
    ``d(hN)``; pass ``n_is_nabla=True`` to supply ``h_nabla(N)`` directly
    (needed for standard objects such as R_x, which are not special).
    """
    H = hM.algebra
    hN_nabla = hN if n_is_nabla else H.bar_d(hN)
    formula = multiplicity_hom_formula(hM, hN_nabla)
    paired = H.pairing(hM, hN_nabla)
    if formula != paired.bar():
        raise HomFormulaMismatch(
            f"multiplicity formula {formula} differs from bar(pairing) {paired.bar()}")
    return paired


def left_inverse_image(hB: HeckeElt) -> HeckeElt:
    """sum_x bar(rk Hom(B, R_x)) T_x for a special-bimodule character hB."""
    H = hB.algebra
    out = H.zero()
    for x in hB.support():
        r_x = H.ttilde(x).scale(LaurentPoly.monomial(x.length))  # R_x: Delta_x[l(x)] = nabla_x[-l(x)]
        rk = hom_rank(hB, r_x, n_is_nabla=True)
        out = out + H.t(x).scale(rk)
    return out


def express_in_bwords(h: HeckeElt) -> list:
    """h as sum c * v^n b(word) over ShortLex reduced words.

    Returns [(n, word, c)] with word a tuple of generator names, processing
    support elements by decreasing length (ties: decreasing ShortLex).
    """
    W = h.system
    rem = dict(h.terms)
    out = []
    while rem:
        x = max(rem, key=Element.sort_key)
        c = rem[x]
        for k, ck in c.terms():
            n = k + x.length
            out.append((n, x.names, ck))
            sub = bs_character(W, BSObject(x.names, n)).scale(ck)
            for y, p in sub.terms.items():
                q = rem.get(y, ZERO) - p
                if q:
                    rem[y] = q
                else:
                    rem.pop(y, None)
        if x in rem:
            raise ArithmeticError(f"b-word elimination did not clear {x}")
    return out


def bwords_character(system, terms: Iterable) -> HeckeElt:
    """sum c * bs_character(B(word)[n]) over (n, word, c) triples."""
    W = _system_of(system)
    H = hecke_algebra(W)
    out = H.zero()
    for n, word, c in terms:
        out = out + bs_character(W, BSObject(tuple(word), n)).scale(c)
    return out


def decompose_bs(system, b: BSObject) -> BimoduleClass:
    """Class of B(word)[n] assuming char(B_x) = C'_x; raises PositivityFailure."""
    W = _system_of(system)
    H = hecke_algebra(W)
    exp = H.kl_expand(bs_character(W, b))
    for x, p in exp.items():
        if not p.is_nonneg():
            raise PositivityFailure(
                f"B({' '.join(b.word)})[{b.shift}] has coefficient {p} at C'_{x}")
    return BimoduleClass(W, exp)


def indecomposability_certificate(c: HeckeElt) -> bool:
    """hom_rank(c, c) lies in 1 + v N[v]."""
    r = hom_rank(c, c)
    if r.constant_term() != 1:
        return False
    return all(e >= 0 and k > 0 for e, k in r.terms())


def selfdual_expansion(x: Element) -> dict:
    """kl_expand of the Bott-Samelson character of the reduced word of x, shift l(x).

    Checks that the coefficient at x is 1 and that each h_y is self-dual.
    Positivity of the h_y is not asserted.
    """
    W = x.system
    H = hecke_algebra(W)
    exp = H.kl_expand(bs_character(W, BSObject(x.names, x.length)))
    if exp.get(x) != ONE:
        raise SelfDualityError(f"coefficient at {x} is {exp.get(x, ZERO)}, expected 1")
    for y, p in exp.items():
        if not p.is_selfdual():
            raise SelfDualityError(f"h_{y} = {p} is not self-dual (expansion of {x})")
    return exp


def theta_adjunction_check(hM: HeckeElt, hN: HeckeElt, s) -> bool:
    """hom_rank(theta_s M, N) == hom_rank(M, theta_s N)."""
    return hom_rank(theta(hM, s), hN) == hom_rank(hM, theta(hN, s))


@dataclass
class BookkeepingRow:
    y: Element
    m_y: int
    hom_into: int
    hom_out_of: int

    @property
    def ok(self) -> bool:
        return self.m_y == self.hom_into == self.hom_out_of


def cs_bookkeeping(s, x: Element) -> list:
    """Compare cs_product coefficients with degree-0 hom dimensions.

    For each y <= sx: m_y against the constant terms of
    hom_rank(C'_y, theta_s C'_x) and hom_rank(theta_s C'_x, C'_y).
    """
    W = x.system
    H = hecke_algebra(W)
    m = H.cs_product(s, x)
    th = theta(H.kl_basis(x), s)
    sx = W.mult_gen(x, s, "left")
    rows = []
    for y in W.lower_interval(sx):
        Cy = H.kl_basis(y)
        rows.append(BookkeepingRow(y, m.get(y, 0), hom_rank(Cy, th).constant_term(),
                                   hom_rank(th, Cy).constant_term()))
    return rows


# ---------------------------------------------------------------------------
# dihedral cross-checks


@dataclass
class DihedralReport:
    m: object
    cutoff: int
    closed_form: bool = True
    product_identity: bool = True
    gamma_recursion: bool = True
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.closed_form and self.product_identity and self.gamma_recursion

    def to_json(self) -> dict:
        m = self.m
        return {
            "check": "dihedral",
            "m": "inf" if m == float("inf") else m,
            "maxlen": self.cutoff,
            "elements": self.checked,
            "closed_form": self.closed_form,
            "product_identity": self.product_identity,
            "gamma_recursion": self.gamma_recursion,
            "pass": self.passed,
            "failures": list(self.failures),
        }


def _sum_t(H: HeckeAlgebra, A: Iterable[Element]) -> HeckeElt:
    return H.elt({y: LaurentPoly.monomial(-y.length) for y in A})


def dihedral_checks(m, L: int) -> DihedralReport:
    W = as_system(CoxeterMatrix.dihedral(m))
    H = hecke_algebra(W)
    rep = DihedralReport(m=W.matrix.m[0][1], cutoff=L)
    elems = W.elements_up_to_length(L)
    for x in elems:
        rep.checked += 1
        A = set(W.lower_interval(x))
        gamma_x = _sum_t(H, A).scale(LaurentPoly.monomial(x.length))
        if H.kl_basis(x) != gamma_x:
            rep.closed_form = False
            rep.failures.append(f"C'_{x} differs from v^l(x) sum_(y<=x) T_y")
        for s in range(W.rank):
            sA = {W.mult_gen(y, s, "left") for y in A}
            union, inter = A | sA, A & sA
            lhs = H.left_gen(s, _sum_t(H, A)).scale(LaurentPoly.monomial(-1)) + _sum_t(H, A)
            rhs = _sum_t(H, union) + _sum_t(H, inter).scale(LaurentPoly.monomial(-2))
            if lhs != rhs:
                rep.product_identity = False
                rep.failures.append(f"(T_s+1) sum_A T_y identity fails for x={x}, s={W.generators[s]}")
            for part, label in ((union, "union"), (inter, "intersection")):
                if part:
                    top = max(part, key=Element.sort_key)
                    if set(W.lower_interval(top)) != part:
                        rep.product_identity = False
                        rep.failures.append(f"A {label} sA is not a lower interval for x={x}, s={W.generators[s]}")
            if W.descends(x, s, "left"):
                continue
            sx = W.mult_gen(x, s, "left")
            lhs = H.left_gen(s, gamma_x) + gamma_x.scale(V)  # v (T_s + 1) gamma_x
            gamma_sx = _sum_t(H, W.lower_interval(sx)).scale(LaurentPoly.monomial(sx.length))
            diff = lhs - gamma_sx
            if x.length <= 1:
                ok = diff.is_zero()
            else:
                ok = False
                if inter:
                    z = max(inter, key=Element.sort_key)
                    gamma_z = _sum_t(H, W.lower_interval(z)).scale(LaurentPoly.monomial(z.length))
                    ok = W.bruhat_leq(z, x) and z != x and diff == gamma_z
            if not ok:
                rep.gamma_recursion = False
                rep.failures.append(f"gamma recursion fails for x={x}, s={W.generators[s]}")
    return rep
