"""Acceptance criteria 1-11.

Every criterion prints exactly one line ``[PASS] criterion N: ...`` or
``[FAIL] criterion N: ...`` and then asserts.  All comparisons are exact.
Run standalone with ``python tests/test_acceptance.py`` for just the summary.
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import oracles  # noqa: E402
from soergel import bimlab  # noqa: E402
from soergel.chars import (  # noqa: E402
    BSObject,
    PositivityFailure,
    SelfDualityError,
    bs_character,
    bwords_character,
    cs_bookkeeping,
    decompose_bs,
    dihedral_checks,
    express_in_bwords,
    indecomposability_certificate,
    left_inverse_image,
    multiplicity_hom_formula,
    selfdual_expansion,
)
from soergel.coxeter import (  # noqa: E402
    CoxeterMatrix,
    as_system,
    build_geometric_rep,
    build_reflection_faithful_rep,
    permutation_rep,
)
from soergel.hecke import HeckeAlgebra, hecke_algebra  # noqa: E402
from soergel.laurent import LaurentPoly  # noqa: E402
from soergel.verify import random_bs_object, random_hecke_element  # noqa: E402

INF = float("inf")


def dihedral(m):
    return as_system(CoxeterMatrix.dihedral(m))


def s4():
    return as_system(CoxeterMatrix.type_a(3))


def announce(n: int, ok: bool, detail: str, capsys=None):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    return ok


# ---------------------------------------------------------------------------
# the criteria; each returns (ok, detail)


def criterion_1():
    t0 = time.perf_counter()
    failures, count = [], 0
    for m, L in [(2, 2), (3, 3), (4, 4), (5, 5), (6, 6), (INF, 8)]:
        rpt = dihedral_checks(m, L)
        count += rpt.checked
        if not rpt.closed_form:
            failures.append(f"m={m}")
    dt = time.perf_counter() - t0
    ok = not failures and dt < 5
    return ok, f"dihedral closed form on {count} elements in {dt:.2f}s (limit 5s)" + (
        f"; mismatches for {', '.join(failures)}" if failures else "")


def criterion_2():
    t0 = time.perf_counter()
    W = s4()
    H = HeckeAlgebra(W)  # private instance: no memo shared with earlier tests
    elems = W.elements_up_to_length(6)
    problems, nonconstant = [], 0
    for x in elems:
        C = H.kl_basis(x)
        for y in elems:
            p = C.coeff(y)
            if y is x:
                if p != LaurentPoly.const(1):
                    problems.append(f"p_({x},{x})={p}")
            elif p and (p.min_exp() < 1 or not W.bruhat_leq(y, x)):
                problems.append(f"triangularity at ({y},{x})")
            if not p.is_nonneg():
                problems.append(f"negative p_({y},{x})")
            if len(H.kl_polynomial(y, x)) > 1:
                nonconstant += 1
        if H.bar_d(C) != C:
            problems.append(f"C'_{x} not bar invariant")
    G = oracles.symmetric_group(4)
    ref = oracles.kl_basis_by_fixed_points(G)
    for x in elems:
        ours = {oracles.to_model(G, y): p for y, p in H.kl_basis(x).terms.items()}
        if ours != ref[oracles.to_model(G, x)]:
            problems.append(f"C'_{x} differs from the fixed-point solver")
    dt = time.perf_counter() - t0
    ok = not problems and nonconstant > 0 and dt < 30
    return ok, (f"S4: {len(elems)}x{len(elems)} pairs, {nonconstant} nonconstant P, "
                f"oracle agreement on all 24 elements, {dt:.2f}s (limit 30s)"
                + (f"; {problems[:3]}" if problems else ""))


def criterion_3(count: int = 200):
    W = dihedral(INF)
    H = hecke_algebra(W)
    rng = random.Random(20240603)
    bad = []
    for _ in range(count):
        bm, bn = random_bs_object(W, rng, 6), random_bs_object(W, rng, 6)
        hM, hN = bs_character(W, bm), bs_character(W, bn)
        dN = H.bar_d(hN)
        if multiplicity_hom_formula(hM, dN) != H.pairing(hM, dN).bar():
            bad.append((bm, bn))
    return not bad, f"hom formula == bar(pairing) on {count} random I2(inf) pairs, {len(bad)} mismatches"


def criterion_4(count: int = 100):
    bad, total = 0, 0
    for m in (3, INF):
        W = dihedral(m)
        rng = random.Random(7 if m == 3 else 11)
        for _ in range(count):
            h = random_hecke_element(W, rng, 4)
            terms = express_in_bwords(h)
            back = sum((left_inverse_image(bs_character(W, BSObject(tuple(w), n))).scale(c)
                        for n, w, c in terms), hecke_algebra(W).zero())
            total += 1
            if bwords_character(W, terms) != h or back != h:
                bad += 1
    return bad == 0, f"left inverse round trip on {total} random elements of I2(3), I2(inf); {bad} failures"


def criterion_5():
    bad, total = [], 0
    systems = [dihedral(m) for m in range(2, 9)] + [s4()]
    for W in systems:
        H = hecke_algebra(W)
        for x in W.elements_up_to_length(6):
            total += 1
            if not indecomposability_certificate(H.kl_basis(x)):
                bad.append(f"{W.matrix.label()}:{x}")
    return not bad, f"hom_rank(C'_x, C'_x) in 1 + vN[v] for {total} elements" + (f"; fails {bad[:5]}" if bad else "")


def criterion_6():
    bad, words_checked, expansions = [], 0, 0
    systems = [dihedral(m) for m in range(2, 9)] + [dihedral(INF), s4()]
    for W in systems:
        for k in range(7):
            for word in itertools.product(W.generators, repeat=k):
                words_checked += 1
                try:
                    decompose_bs(W, BSObject(word, k))
                except PositivityFailure as exc:
                    bad.append(str(exc))
        for x in W.elements_up_to_length(6):
            expansions += 1
            try:
                selfdual_expansion(x)
            except SelfDualityError as exc:
                bad.append(str(exc))
    return not bad, (f"{words_checked} BS words decompose with nonnegative multiplicities, "
                     f"{expansions} self-dual expansions" + (f"; {bad[:3]}" if bad else ""))


def criterion_7():
    bad, rows = [], 0
    for m in (2, 3, 4, 5, 6):
        W = dihedral(m)
        for x in W.elements_up_to_length(5):
            for s in W.generators:
                if W.descends(x, s, "left"):
                    continue
                for row in cs_bookkeeping(s, x):
                    rows += 1
                    if not row.ok:
                        bad.append((m, s, x.word_str, row))
    return not bad, f"cs_product bookkeeping on {rows} (s,x,y) rows for m <= 6, {len(bad)} mismatches"


def criterion_8():
    t0 = time.perf_counter()
    A2, Inf, S3 = dihedral(3), dihedral(INF), as_system(CoxeterMatrix.type_a(2))
    cases = [(build_geometric_rep(A2), "s"), (build_reflection_faithful_rep(Inf), "s"),
             (permutation_rep(S3), S3.generators[0])]
    failed = [r.system for r in (bimlab.check_er(s, rep, 12) for rep, s in cases) if not r.passed]
    dt = time.perf_counter() - t0
    ok = not failed and dt < 60
    return ok, f"check_er up to D=12 for I2(3), I2(inf) minimal, S3 permutation in {dt:.2f}s (limit 60s)" + (
        f"; failed {failed}" if failed else "")


def criterion_9():
    bad, count = [], 0
    for W, rep in [(dihedral(3), build_geometric_rep(dihedral(3))),
                   (dihedral(INF), build_reflection_faithful_rep(dihedral(INF)))]:
        for x in W.elements_up_to_length(4):
            for s in W.generators:
                count += 1
                try:
                    rpt = bimlab.check_mi_di(x, s, rep, 10)
                except bimlab.NoSuchBeta as exc:
                    bad.append(f"{W.matrix.label()} x={x} s={s}: {exc}")
                    continue
                if not rpt.passed:
                    bad.append(f"{W.matrix.label()} x={x} s={s}: {rpt.failure}")
    return not bad, f"check_mi_di (D=10) on {count} pairs (x,s) with l(x) <= 4" + (f"; {bad[:3]}" if bad else "")


def criterion_10():
    bad, count = [], 0
    cases = [(dihedral(3), build_geometric_rep(dihedral(3)), 3),
             (dihedral(INF), build_reflection_faithful_rep(dihedral(INF)), 3)]
    for W, rep, L in cases:
        for x in W.elements_up_to_length(L):
            for y in W.lower_interval(x):
                count += 1
                rpt = bimlab.check_ip(x, y, rep, 12)
                if not rpt.passed:
                    bad.append(f"{W.matrix.label()} x={x} y={y}: {rpt.failure}")
    return not bad, f"check_ip (D=12) on {count} pairs y <= x" + (f"; {bad[:3]}" if bad else "")


def criterion_11():
    W = dihedral(3)
    rep = build_geometric_rep(W)
    bad, count = [], 0
    for x, y in itertools.product(W.elements_up_to_length(3), repeat=2):
        count += 1
        rpt = bimlab.check_homtrunc(x, y, rep, 12, strict=False)
        if not rpt.passed:
            bad.append(f"x={x} y={y}: {rpt.failure}")
    return not bad, f"truncated Hom dimensions match the prediction up to degree 8 on {count} pairs in I2(3)" + (
        f"; {bad[:3]}" if bad else "")


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 12)}


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    ok, detail = CRITERIA[n]()
    announce(n, ok, detail, capsys)
    assert ok, detail


if __name__ == "__main__":
    results = [announce(n, *CRITERIA[n]()) for n in sorted(CRITERIA)]
    sys.exit(0 if all(results) else 1)
