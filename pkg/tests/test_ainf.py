from fractions import Fraction

import pytest

from mcdual import examples as ex
from mcdual.ainf import (AInfStructure, Generator, StructureError, augmentation_kernel,
                         check_strict_augmentation, relation_residual, rescale_from_exact,
                         rescale_to_exact, verify_ainf, verify_filtered_unital)
from mcdual.algfile import (FormatError, format_pair, format_structure, parse_pair,
                            parse_structure)
from mcdual.scalar import ONE, T


def small():
    gens = [Generator("e", 0, is_unit=True), Generator("a", 1, action=Fraction(1, 2)),
            Generator("b", 2, action=Fraction(-1))]
    return AInfStructure(gens, {("a", "a"): {"b": T(2)}})


def test_unit_is_implicit():
    s = small()
    assert s.op(("e", "a")) == {"a": ONE}
    assert s.op(("a", "e")) == {"a": -ONE}
    assert s.op(("e", "b")) == {"b": ONE}
    assert s.op(("b", "e")) == {"b": ONE}


def test_degree_check():
    gens = [Generator("a", 1), Generator("b", 1)]
    with pytest.raises(StructureError, match="degree"):
        AInfStructure(gens, {("a", "a"): {"b": ONE}})


def test_typing_check():
    gens = [Generator("a", 1, source=0, target=1), Generator("b", 2, source=0, target=0),
            Generator("e0", 0, source=0, target=0, is_unit=True),
            Generator("e1", 0, source=1, target=1, is_unit=True)]
    with pytest.raises(StructureError, match="composable"):
        AInfStructure(gens, {("a", "a"): {"b": ONE}}, r=2)


def test_filtration_check():
    gens = [Generator("a", 1, valuation=Fraction(1)), Generator("b", 2)]
    with pytest.raises(StructureError, match="filtration"):
        AInfStructure(gens, {("a", "a"): {"b": T(1)}})
    AInfStructure(gens, {("a", "a"): {"b": T(2)}})


def test_unit_rules():
    with pytest.raises(StructureError, match="unit"):
        AInfStructure([Generator("e", 1, is_unit=True)], {})
    with pytest.raises(StructureError, match="unit"):
        AInfStructure([Generator("e", 0, is_unit=True), Generator("f", 0, is_unit=True)], {})


def test_broken_associativity_detected():
    gens = [Generator("e", 0, is_unit=True), Generator("a", 0), Generator("b", 0)]
    s = AInfStructure(gens, {("a", "a"): {"b": ONE}, ("a", "b"): {"a": ONE}})
    rep = verify_ainf(s, maxlen=3)
    assert not rep.ok
    res, complete = relation_residual(s, ("a", "a", "a"))
    assert complete
    # (aa)a - a(aa) = ba - ab = -a
    assert res == {"a": -ONE}


def test_torus_verifies():
    for n in (1, 2, 3):
        s = ex.build_torus(n)
        assert verify_ainf(s, maxlen=5).ok
        assert verify_filtered_unital(s) == []
        assert check_strict_augmentation(s) == []


def test_torus_wedge_sign():
    s = ex.build_torus(2)
    assert s.op(("t1", "t2")) == {"t12": -ONE}
    assert s.op(("t2", "t1")) == {"t12": ONE}


def test_verify_threads_agree():
    s = ex.build_i1(2, 1).W
    a = verify_ainf(s, maxlen=3)
    b = verify_ainf(s, maxlen=3, workers=4)
    assert (a.checked, a.skipped, a.violations) == (b.checked, b.skipped, b.violations)


def test_rescale_round_trip():
    s = small()
    e = rescale_to_exact(s)
    assert e.op(("a", "a")) == {"b": T(2 + Fraction(1, 2) + Fraction(1, 2) + 1)}
    back = rescale_from_exact(e)
    assert back.table == s.table


def test_seidel_exact_coefficients_are_signs():
    V = rescale_to_exact(ex.build_pair_of_pants().V)
    for key, out in V.table.items():
        assert all(c in (ONE, -ONE) for c in out.values()), key


def test_augmentation_kernel_basis():
    W = ex.build_cotangent_circle(0, 1, 2).W
    K = augmentation_kernel(W)
    # (Z1 - 1)(Z1 - 1) = (Z2 - 1) - 2 (Z1 - 1)
    assert K.op(("Z(1)", "Z(1)")) == {"Z(2)": ONE, "Z(1)": -2 * ONE}
    assert K.op(("Z(1)", "Z(-1)")) == {"Z(1)": -ONE, "Z(-1)": -ONE}
    assert verify_ainf(K, maxlen=3).ok


@pytest.mark.parametrize("name", sorted(ex.REGISTRY))
def test_dataset_file_round_trip(name, datasets):
    kind, _, _ = ex.REGISTRY[name]
    obj = datasets(name)
    if kind == "alg":
        text = format_structure(obj)
        back = parse_structure(text)
        assert back.table == obj.table and format_structure(back) == text
    else:
        text = format_pair(obj)
        back = parse_pair(text)
        assert back.module == obj.module
        assert back.W.table == obj.W.table and back.V.table == obj.V.table
        assert back.W.incomplete == obj.W.incomplete
        assert back.precision == obj.precision
        assert format_pair(back) == text


def test_synthetic_marks_survive_round_trip():
    V = ex.build_pair_of_pants().V
    back = parse_structure(format_structure(V))
    assert back.synthetic == V.synthetic and ("Z", "Y", "X") in back.synthetic


@pytest.mark.parametrize("text, msg", [
    ("[generators]\na 1\n[ops]\nm2(a,a) = 1*b\n", "unknown"),
    ("[generators]\na 1\nb 2\n[ops]\nm3(a,a) = 1*b\n", "inputs"),
    ("[generators]\na\n", "degree"),
    ("[generators]\na 1\nb 1\n[ops]\nm2(a,a) = 1*b\n", "degree"),
])
def test_format_errors(text, msg):
    with pytest.raises(FormatError, match=msg):
        parse_structure(text)
