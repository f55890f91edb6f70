from fractions import Fraction

import pytest

from mcdual import examples as ex
from mcdual.ainf import StructureError
from mcdual.barcobar import DualSeries, exact_letters, parse_series, series_degree
from mcdual.koszul import (PairData, augmentation, chart, correction_relations, kappa,
                           kappa_closure, kappa_defect, madic_quotient, normal_words,
                           verify_kappa_hom)
from mcdual.mcalg import normal_form
from mcdual.scalar import ONE, ZERO, T


def test_cotangent_kappa_is_truncated_exponential():
    pd = ex.build_cotangent_circle(0)
    assert kappa(pd, "Z(1)").text() == "1 + x + 1/2*x.x + 1/6*x.x.x + 1/24*x.x.x.x + 1/120*x.x.x.x.x"
    assert kappa(pd, "Z(-1)").coefficient((0, 0, 0)) == Fraction(-1, 6) * ONE
    assert kappa(pd, "Z(0)") == DualSeries.const(pd.A, ONE)


def test_holonomy_scales_kappa():
    pd = ex.build_cotangent_circle(0, holonomy=2)
    assert kappa(pd, "Z(1)").constant() == 2 * ONE
    assert kappa(pd, "Z(-1)").constant() == Fraction(1, 2) * ONE
    assert kappa(pd, "Z(2)").coefficient((0,)) == 8 * ONE


def test_augmentation_is_constant_term(datasets):
    for name in ("cotangent_circle", "i1", "pair_of_pants", "pair_of_pants_circle"):
        pd = datasets(name)
        for g in pd.W.gens:
            assert augmentation(pd, g.name) == kappa(pd, g.name).constant(g.source)


def test_kappa_degree_law(datasets):
    # kappa(Z) lives in degree |Z|
    for name in ("i1", "pair_of_pants", "cotangent_circle"):
        pd = datasets(name)
        for g in pd.W.gens:
            f = kappa(pd, g.name)
            if f:
                assert series_degree(f) == g.degree, (name, g.name)


def test_i1_kappa_example():
    pd = ex.build_i1()
    assert kappa(pd, "C(-2,1)").text() == "-u.u + u.v.u.u"
    assert kappa(pd, "C(-1,0)").text() == "u"


def test_closure_from_seeds():
    pd = ex.build_i1(2, 1)
    pres = pd.presentation()
    seeds = {z: kappa(pd, z) for z in ("C(-1,0)", "C(1,0)")}
    known = kappa_closure(pd, seeds, pres)
    for z in ("C(2,0)", "C(-2,0)", "C(0,1)", "C(1,1)"):
        assert known[z] == normal_form(kappa(pd, z), pres), z


def test_defect_respects_precision():
    pd = ex.build_cotangent_circle(0)
    assert pd.precision == pd.V.cutoff.max_len - 1
    assert not kappa_defect(pd, "Z(1)", "Z(1)")
    assert kappa_defect(pd, "Z(3)", "Z(3)") is None


def test_kappa_hom_reports_skips(datasets):
    rep = verify_kappa_hom(datasets("cotangent_circle"))
    assert rep.ok and rep.checked > 0 and rep.skipped > 0
    assert rep.summary().startswith("kappa multiplicative: pass")


def test_broken_module_detected():
    pd = ex.build_cotangent_circle(0, window=1)
    module = dict(pd.module)
    module[(("Z(1)",), ("dt", "dt"))] = ONE
    bad = PairData(pd.W, pd.V, pd.P, module, precision=pd.precision)
    rep = verify_kappa_hom(bad)
    assert not rep.ok


def test_module_degree_checked():
    pd = ex.build_cotangent_circle(0, window=1)
    V = ex.build_pair_of_pants().V
    with pytest.raises(StructureError):
        PairData(pd.W, V, ("P",), {(("Z(1)",), ("Xp",)): ONE})


def test_madic_inverse_is_log():
    m = madic_quotient(ex.build_cotangent_circle(0), 4)
    assert m.invertible and m.well_defined and m.exact
    assert m.inverse_series("x") == {"g1": ONE, "g1*g1": Fraction(-1, 2) * ONE, "g1*g1*g1": Fraction(1, 3) * ONE}


def test_madic_levels_grow():
    pd = ex.build_cotangent_circle(0)
    sizes = [len(madic_quotient(pd, k).basis) for k in (1, 2, 3)]
    assert sizes == [1, 2, 3]
    assert len(normal_words(pd.presentation(), 3)) == 3


@pytest.mark.parametrize("r", [-1, 0, Fraction(1, 2), 1])
def test_cotangent_chart(r):
    (e,) = chart(ex.build_cotangent_circle(r)).entries
    assert e.shape == "exponential"
    assert e.eps == T(-Fraction(r)) and e.radius == r


def test_i1_chart_shifts_with_action():
    base = {e.label: e.radius for e in chart(ex.build_i1(2, 1)).entries}
    assert base == {"U": 0, "V": 0}
    s = Fraction(3, 4)
    moved = {e.label: e.radius for e in chart(ex.build_i1(2, 1, actions=(s, -s))).entries}
    assert moved == {"U": s, "V": -s}


def test_chart_invariant_under_exact_rescaling():
    pd = ex.build_i1(2, 1, actions=(1, -1))
    # kappa in exact letters does not see the action
    a = exact_letters(kappa(pd, "C(-1,0)"))
    b = exact_letters(kappa(ex.build_i1(2, 1), "C(-1,0)"))
    assert a == b


def test_pop_correction_relations():
    pd = ex.build_pair_of_pants()
    rpq, rqp = correction_relations(pd)
    assert exact_letters(rpq).text() == "z"
    assert exact_letters(rqp).text() == "x.y"
    pres = pd.presentation()
    assert pres.confluent


def test_pop_circle_kappa():
    pd = ex.build_pair_of_pants_circle()
    assert not kappa(pd, "V(1)")
    assert kappa(pd, "U(1)").constant() == ONE
    assert augmentation(pd, "V(1)") == ZERO


def test_chart_needs_coordinates():
    pd = ex.build_cotangent_circle(0, window=1)
    pd.chart_coords = {}
    with pytest.raises(ValueError):
        chart(pd)


def test_chart_svg_is_svg():
    svg = chart(ex.build_i1(2, 1)).svg()
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")


def test_exact_letters_absorb_actions():
    # A(X) = -1/2, so T x = T^(1/2) x~
    pd = ex.build_pair_of_pants()
    f = parse_series(pd.A, "T^(1)*x")
    assert exact_letters(f).text() == "T^(1/2)*x"
