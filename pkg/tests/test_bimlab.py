import pytest
from hypothesis import given
from hypothesis import strategies as st

from soergel import bimlab as bl
from soergel.chars import graded_rank_right
from soergel.coxeter import CoxeterMatrix, build_geometric_rep, build_reflection_faithful_rep, permutation_rep
from soergel.exactalg.poly import ring_for
from soergel.hecke import hecke_algebra
from soergel.laurent import LaurentPoly


@pytest.fixture(scope="module")
def a2():
    return build_geometric_rep(CoxeterMatrix.dihedral(3))


@pytest.fixture(scope="module")
def inf3():
    return build_reflection_faithful_rep(CoxeterMatrix.dihedral("inf"))


def mod(rep, words, D=8):
    W = rep.system
    return bl.GraphModule([W.element(w) for w in words], rep, D)


def test_graph_module_dimensions(a2):
    assert mod(a2, [""], 4).dims() == [1, 2, 3]
    assert mod(a2, ["", "s"], 4).dims() == [1, 3, 5]


def test_dimensions_are_monotone_in_a(inf3):
    small = mod(inf3, ["", "s"])
    big = mod(inf3, ["", "s", "t", "s t"])
    assert all(a <= b for a, b in zip(small.dims(), big.dims()))
    assert mod(inf3, [""]).dims() == [ring_for(inf3).dim(d) for d in range(0, 9, 2)]


def test_element_order_does_not_matter(a2):
    B1 = mod(a2, ["", "s", "t"], 6)
    B2 = mod(a2, ["t", "", "s"], 6)
    assert B1.dims() == B2.dims()
    g = bl.gamma_in(B2, [a2.system.gen("t")], 4)
    assert g.dim == bl.gamma_in(B1, [a2.system.gen("t")], 4).dim


def test_gamma_examples(a2):
    W = a2.system
    B = mod(a2, ["", "s"], 6)
    e, s = W.identity, W.gen("s")
    for d in (0, 2, 4, 6):
        assert bl.gamma_in(B, [e, s], d).dim == B.dim(d)
        assert bl.gamma_quot(B, [e], d).dim == ring_for(a2).dim(d)
    assert bl.gamma_in(B, [s], 2).dim == 1
    with pytest.raises(bl.PreconditionError):
        bl.gamma_in(B, [W.gen("t")], 2)


def test_theta_dims_examples(a2):
    assert bl.theta_dims(mod(a2, [""]), "s", 2) == 3
    B = mod(a2, ["", "s"])
    assert bl.theta_dims(B, "s", 0) == 1
    assert bl.theta_dims(B, "s", 4) == 8


def test_eigensplit_examples(a2):
    B = mod(a2, ["", "s"])
    plus, minus = bl.eigensplit(B, "s", 0)
    assert (plus.dim, minus.dim) == (1, 0)
    plus, minus = bl.eigensplit(B, "s", 2)
    assert (plus.dim, minus.dim) == (2, 1)
    for d in (0, 2, 4):
        assert bl.verify_eigensplit(B, "s", d)["ok"]
    with pytest.raises(bl.PreconditionError):
        bl.eigensplit(mod(a2, ["", "t"]), "s", 2)


@pytest.mark.parametrize("which", ["a2", "inf3", "s3"])
def test_check_er(which, a2, inf3):
    rep = {"a2": a2, "inf3": inf3, "s3": permutation_rep(CoxeterMatrix.type_a(2))}[which]
    for s in rep.system.generators:
        rpt = bl.check_er(s, rep, 10)
        assert rpt.passed, rpt.failure


def test_check_mi_di_cases(a2, inf3):
    W = inf3.system
    rpt = bl.check_mi_di(W.identity, "s", inf3, 6)
    assert rpt.passed and rpt.params["case"] == "A={e}"
    rpt = bl.check_mi_di(W.gen("t"), "s", inf3, 8)
    assert rpt.passed and rpt.params["case"] == "split"
    assert rpt.params["r"] == "t"  # A - sA = {e, t}, so rx = e
    rpt = bl.check_mi_di(a2.system.element("t s"), "s", a2, 8)
    assert rpt.passed and rpt.params["case"] == "split"
    rpt = bl.check_mi_di(a2.system.element("s t"), "s", a2, 8)
    assert rpt.passed and rpt.params["case"] == "sA=A"


def test_no_such_beta(a2):
    W = a2.system
    with pytest.raises(bl.NoSuchBeta):
        bl._find_beta(a2, W.identity, W.element("s t"))  # rotation: X - X_rx is invertible


def test_check_ip_examples(a2):
    W = a2.system
    s = W.gen("s")
    rpt = bl.check_ip(s, s, a2, 8)
    assert rpt.passed
    # Gamma_s R(e,s) in degree 2 projects onto alpha_s R_0
    row = next(d for d in rpt.details if d["d"] == 2)
    assert row["gamma_y"] == 1
    assert bl.check_ip(W.element("s t s"), W.identity, a2, 8).passed
    with pytest.raises(bl.PreconditionError):
        bl.check_ip(s, W.gen("t"), a2, 8)


def test_hom_dim_examples(a2):
    W = a2.system
    Re, Res = mod(a2, [""]), mod(a2, ["", "s"])
    assert bl.hom_dim_truncated(Re, Re, 0, 8) == 1
    assert bl.hom_dim_truncated(Res, Re, 0, 8) == 1
    # rank 1 + v^2 times the Hilbert series of R, degree 2: 1 * dim R_2 + 1 * dim R_0
    assert bl.hom_dim_truncated(Res, Res, 2, 8) == 3
    assert bl.hom_dim_truncated(Res, Res, 3, 8) == 0
    with pytest.raises(bl.PreconditionError):
        bl.hom_dim_truncated(Re, Re, 10, 8)


def test_direct_and_support_methods_agree(a2, inf3):
    cases = [(a2, ["", "s"], [""]), (a2, [""], ["", "s"]), (a2, ["", "s"], ["", "s", "t", "s t"]),
             (a2, ["", "t", "s", "t s", "s t", "s t s"], ["", "s"]), (inf3, ["", "s"], ["", "t"]),
             (inf3, ["", "t"], ["", "s", "t", "s t"])]
    for rep, A, A2 in cases:
        B, B2 = mod(rep, A, 6), mod(rep, A2, 6)
        for h in (0, 2, 4):
            assert bl.hom_dim_truncated(B, B2, h, 6) == bl.hom_dim_truncated(B, B2, h, 6, method="direct")


def test_homtrunc_report_and_failure(a2):
    W = a2.system
    rpt = bl.check_homtrunc(W.element("s t"), W.gen("s"), a2, 10)
    assert rpt.passed
    assert rpt.to_json()["m"] == 3 and rpt.to_json()["hom_rank"] == "1*v^0 + 1*v^2"


def test_homtrunc_disagreement_raises(a2, monkeypatch):
    W = a2.system
    monkeypatch.setattr(bl, "predicted_hom_dims", lambda r, rep, upto: {h: 99 for h in range(0, upto + 1, 2)})
    with pytest.raises(bl.InconclusiveTruncation) as info:
        bl.check_homtrunc(W.gen("s"), W.gen("s"), a2, 8)
    assert "raise the cutoff" in str(info.value)
    assert info.value.report.failure["predicted"] == 99
    rpt = bl.check_homtrunc(W.gen("s"), W.gen("s"), a2, 8, strict=False)
    assert not rpt.passed


def test_report_json_shape(a2):
    W = a2.system
    j = bl.check_ip(W.element("s t s"), W.gen("s"), a2, 6).to_json()
    assert {"check", "m", "x", "y", "maxdeg", "pass", "details"} <= set(j)
    assert (j["check"], j["m"], j["x"], j["y"], j["maxdeg"]) == ("ip", 3, "s t s", "s", 6)


def test_hilbert_series_consistency(a2, inf3):
    """R(<=x) is graded free as a right module with rank given by its character."""
    for rep in (a2, inf3):
        W = rep.system
        H = hecke_algebra(W)
        R = ring_for(rep)
        for x in W.elements_up_to_length(3):
            B = bl.GraphModule(W.lower_interval(x), rep, 8)
            rk = graded_rank_right(H.kl_basis(x).scale(LaurentPoly.monomial(-x.length)))
            # graded_rank_right counts generators of degree 2i by v^-2i
            for d in range(0, 9, 2):
                assert B.dim(d) == sum(c * R.dim(d + e) for e, c in rk.terms())


@given(st.data())
def test_support_is_stable_under_right_multiplication(data):
    rep = build_reflection_faithful_rep(CoxeterMatrix.dihedral("inf"))
    W = rep.system
    R = ring_for(rep)
    B = bl.GraphModule(W.lower_interval(W.element("s t")), rep, 8)
    d = data.draw(st.sampled_from([2, 4]))
    basis = B.basis(d)
    coeffs = data.draw(st.lists(st.integers(-2, 2), min_size=len(basis), max_size=len(basis)))
    vec = tuple(sum((c * v[j] for c, v in zip(coeffs, basis)), 0) for j in range(B.ncols(d)))
    g_coeffs = data.draw(st.lists(st.integers(-2, 2), min_size=R.dim(2), max_size=R.dim(2)).filter(any))
    g = R.from_vector(2, g_coeffs)
    prod = B.mul_right_poly(vec, d, g)
    assert B.support(prod, d + 2) == B.support(vec, d)
    assert B.space(d + 2).contains(prod)


def test_bad_construction(a2):
    with pytest.raises(bl.PreconditionError):
        bl.GraphModule([], a2, 4)
    with pytest.raises(bl.PreconditionError):
        bl.GraphModule([a2.system.identity], a2, 5)
    with pytest.raises(bl.PreconditionError):
        mod(a2, [""], 4).space(6)
