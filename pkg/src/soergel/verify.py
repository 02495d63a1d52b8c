"""Verification suites run by ``soergel verify``.

Each suite returns a :class:`SuiteResult`.  Work items are independent and
fan out over a thread pool; the Hecke memo tables take care of their own
locking, and result order is fixed by the item order, not by completion.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .chars import (
    BSObject,
    HomFormulaMismatch,
    PositivityFailure,
    SelfDualityError,
    bs_character,
    bwords_character,
    decompose_bs,
    dihedral_checks,
    express_in_bwords,
    hom_rank,
    indecomposability_certificate,
    left_inverse_image,
    multiplicity_hom_formula,
    selfdual_expansion,
    theta_adjunction_check,
)
from .coxeter import CoxeterMatrix, CoxeterSystem, as_system
from .hecke import hecke_algebra
from .laurent import LaurentPoly

__all__ = ["SuiteResult", "SUITES", "run_suite", "suite_dihedral", "suite_hom", "suite_leftinv",
           "suite_positivity", "suite_s4", "random_hecke_element", "random_bs_object"]

MAX_WITNESSES = 20


@dataclass
class SuiteResult:
    suite: str
    params: dict
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"suite": self.suite, "params": self.params, "checked": self.checked,
                "pass": self.passed, "failures": self.failures[:MAX_WITNESSES]}


def _map(fn, items, workers):
    items = list(items)
    if workers is None or workers <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _m_label(m):
    return "inf" if m in (0, float("inf"), "inf") else m


# ---------------------------------------------------------------------------
# random inputs


def random_bs_object(W: CoxeterSystem, rng: random.Random, maxlen: int = 6, shift_range: int = 3) -> BSObject:
    k = rng.randint(0, maxlen)
    word = tuple(rng.choice(W.generators) for _ in range(k))
    return BSObject(word, rng.randint(-shift_range, shift_range))


def random_hecke_element(W: CoxeterSystem, rng: random.Random, maxlen: int = 4, terms: int = 4):
    H = hecke_algebra(W)
    pool = W.elements_up_to_length(maxlen)
    out = H.zero()
    for _ in range(rng.randint(1, terms)):
        x = rng.choice(pool)
        coeff = LaurentPoly({rng.randint(-3, 3): rng.randint(-3, 3) for _ in range(rng.randint(1, 3))})
        out = out + H.ttilde(x).scale(coeff)
    return out


# ---------------------------------------------------------------------------
# suites


def suite_dihedral(m, L: int | None = None, workers: int | None = None) -> SuiteResult:
    W = as_system(CoxeterMatrix.dihedral(m))
    mm = W.matrix.m[0][1]
    if L is None:
        L = 8 if mm == float("inf") else mm
    res = SuiteResult("dihedral", {"m": _m_label(mm), "maxlen": L})
    rpt = dihedral_checks(mm, L)
    res.checked = rpt.checked
    res.failures.extend(rpt.failures)
    return res


def suite_hom(W: CoxeterSystem, count: int = 200, maxlen: int = 6, seed: int = 0,
              workers: int | None = None) -> SuiteResult:
    rng = random.Random(seed)
    pairs = [(random_bs_object(W, rng, maxlen), random_bs_object(W, rng, maxlen), rng.choice(W.generators))
             for _ in range(count)]
    H = hecke_algebra(W)

    def one(item):
        bm, bn, s = item
        hM, hN = bs_character(W, bm), bs_character(W, bn)
        tag = f"M=B({' '.join(bm.word)})[{bm.shift}], N=B({' '.join(bn.word)})[{bn.shift}]"
        try:
            r = hom_rank(hM, hN)
        except HomFormulaMismatch as exc:
            return f"{tag}: {exc}"
        formula = multiplicity_hom_formula(hM, H.bar_d(hN))
        if formula != r.bar():
            return f"{tag}: formula {formula} vs bar(pairing) {r.bar()}"
        if not r.is_nonneg():
            return f"{tag}: negative graded rank {r}"
        if not theta_adjunction_check(hM, hN, s):
            return f"{tag}: theta_{s} is not self-adjoint on these characters"
        return None

    res = SuiteResult("hom", {"system": W.matrix.label(), "count": count, "maxlen": maxlen, "seed": seed})
    for out in _map(one, pairs, workers):
        res.checked += 1
        if out:
            res.failures.append(out)
    return res


def suite_leftinv(W: CoxeterSystem, count: int = 100, maxlen: int = 4, seed: int = 0,
                  workers: int | None = None) -> SuiteResult:
    rng = random.Random(seed)
    elts = [random_hecke_element(W, rng, maxlen) for _ in range(count)]
    H = hecke_algebra(W)

    def one(h):
        terms = express_in_bwords(h)
        if bwords_character(W, terms) != h:
            return f"b-word expansion does not sum back to {h}"
        back = H.zero()
        for n, word, c in terms:
            back = back + left_inverse_image(bs_character(W, BSObject(tuple(word), n))).scale(c)
        if back != h:
            return f"left inverse gives {back} instead of {h}"
        return None

    res = SuiteResult("leftinv", {"system": W.matrix.label(), "count": count, "maxlen": maxlen, "seed": seed})
    for out in _map(one, elts, workers):
        res.checked += 1
        if out:
            res.failures.append(out)
    return res


def suite_positivity(W: CoxeterSystem, maxlen: int = 6, workers: int | None = None) -> SuiteResult:
    words = [w for k in range(maxlen + 1) for w in itertools.product(W.generators, repeat=k)]
    H = hecke_algebra(W)

    def one_word(word):
        try:
            decompose_bs(W, BSObject(word, len(word)))
        except PositivityFailure as exc:
            return str(exc)
        return None

    res = SuiteResult("positivity", {"system": W.matrix.label(), "maxlen": maxlen})
    for out in _map(one_word, words, workers):
        res.checked += 1
        if out:
            res.failures.append(out)
    for x in W.elements_up_to_length(maxlen):
        res.checked += 1
        try:
            selfdual_expansion(x)
        except SelfDualityError as exc:
            res.failures.append(str(exc))
        for y, p in H.kl_basis(x).terms.items():
            if not p.is_nonneg():
                res.failures.append(f"negative coefficient in p_({y},{x}) = {p}")
    return res


def s4_system() -> CoxeterSystem:
    return as_system(CoxeterMatrix.type_a(3))


def suite_s4(workers: int | None = None) -> SuiteResult:
    W = s4_system()
    H = hecke_algebra(W)
    elems = W.elements_up_to_length(6)
    res = SuiteResult("s4", {"system": "A3", "order": len(elems)})
    nonconstant = []

    def one(x):
        errs = []
        C = H.kl_basis(x)
        if C.coeff(x) != LaurentPoly.const(1):
            errs.append(f"p_({x},{x}) = {C.coeff(x)}")
        for y, p in C.terms.items():
            if y is not x and (p.min_exp() < 1 or not W.bruhat_leq(y, x)):
                errs.append(f"p_({y},{x}) = {p} violates triangularity")
            if not p.is_nonneg():
                errs.append(f"p_({y},{x}) = {p} has a negative coefficient")
        if H.bar_d(C) != C:
            errs.append(f"C'_{x} is not bar invariant")
        if not indecomposability_certificate(C):
            errs.append(f"hom_rank(C'_{x}, C'_{x}) not in 1 + vN[v]")
        nonconst = [(y, x) for y in C.terms if len(H.kl_polynomial(y, x)) > 1]
        return errs, nonconst

    for errs, nc in _map(one, elems, workers):
        res.checked += len(elems)
        res.failures.extend(errs)
        nonconstant.extend(nc)
    res.params["nonconstant_kl"] = len(nonconstant)
    if not nonconstant:
        res.failures.append("no nonconstant KL polynomial found in S_4")
    return res


SUITES = ("dihedral", "hom", "leftinv", "positivity", "s4")


def run_suite(name: str, *, m=None, system: CoxeterSystem | None = None, workers: int | None = None,
              **opts) -> SuiteResult:
    if name == "dihedral":
        if m is None:
            raise ValueError("the dihedral suite needs --m")
        return suite_dihedral(m, opts.get("maxlen"), workers)
    if name == "s4":
        return suite_s4(workers)
    if system is None:
        if m is None:
            raise ValueError(f"the {name} suite needs --m or --matrix")
        system = as_system(CoxeterMatrix.dihedral(m))
    opts = {k: v for k, v in opts.items() if v is not None}
    if name == "hom":
        return suite_hom(system, workers=workers, **opts)
    if name == "leftinv":
        return suite_leftinv(system, workers=workers, **opts)
    if name == "positivity":
        opts.pop("count", None)
        opts.pop("seed", None)
        return suite_positivity(system, workers=workers, **opts)
    raise ValueError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)}")
