import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcdual import _kernels_py, kernels
from mcdual import examples as ex
from mcdual.ainf import augmentation_kernel
from mcdual.barcobar import (BarElement, DualSeries, alphabet, bar_codiff, bar_coprod,
                             cobar_diff, d_squared_failures, dual_diff, exact_letters,
                             pairing, pairing_check, parity_twist, parse_series)
from mcdual.scalar import ONE, Novikov, T


def torus(n=2):
    return ex.build_torus(n)


def test_torus_differential():
    s = torus(2)
    A = alphabet(s)
    d = dual_diff(s, parse_series(A, "x12"))
    # m2(t2,t1) = t12 reads as x1.x2, and |x12| is odd so the sign flips
    assert d.text() == "-x1.x2 + x2.x1"
    assert not dual_diff(s, parse_series(A, "x1"))


def test_series_text_round_trip():
    A = alphabet(ex.build_conifold(window_a=0, window_bc=0).V)
    f = parse_series(A, "x.y - 2*z.w + (1 + T^(1))*x.w.z + pi1{3}")
    assert parse_series(A, f.text()) == f
    assert f.constant(1) == Novikov.const(3)
    with pytest.raises(ValueError):
        parse_series(A, "x.z")


def test_typed_product_respects_idempotents():
    A = alphabet(ex.build_conifold(window_a=0, window_bc=0).V)
    x = parse_series(A, "x")
    z = parse_series(A, "z")
    y = parse_series(A, "y")
    assert not (x * z)
    assert (x * y).text() == "x.y"


def test_word_length_cutoff():
    s = ex.build_cotangent_circle(0, 1, 1)
    A = alphabet(s.V)
    x = DualSeries.letter(A, 0)
    p = x
    for _ in range(10):
        p = p * x
    assert not p


def test_exact_letters():
    V = ex.build_pair_of_pants().V
    A = alphabet(V)
    f = parse_series(A, "T^(1)*x.y")
    assert exact_letters(f).text() == "x.y"


def _random_series(A, rng, max_len):
    terms = {}
    for _ in range(rng.randint(1, 4)):
        n = rng.randint(0, max_len)
        words = A.composable_words(n)
        if not words:
            continue
        w = rng.choice(words)
        key = A.word_key(w, rng.randrange(A.r))
        if key is not None:
            terms[key] = Novikov([(rng.choice([0, 1]), rng.choice([1, -1, 2]))])
    return DualSeries(A, terms)


@pytest.mark.parametrize("name", ["torus3", "i1", "conifold"])
def test_kernels_agree_with_fallback(name, datasets):
    obj = datasets(name)
    s = obj if name.startswith("torus") else obj.V
    A = alphabet(s)
    rng = random.Random(7)
    cut = s.cutoff
    dg = [x.terms for x in _dgen(s)]
    for _ in range(30):
        f = _random_series(A, rng, 3)
        g = _random_series(A, rng, 3)
        assert kernels.concat_mul(f.terms, g.terms, 6, cut) == _kernels_py.concat_mul(f.terms, g.terms, 6, cut)
        assert kernels.leibniz(f.terms, dg, A.deg, 6, cut) == _kernels_py.leibniz(f.terms, dg, A.deg, 6, cut)


def _dgen(s):
    from mcdual.barcobar import dual_diff_generators
    return dual_diff_generators(s)


def test_find_redex_agrees():
    rules = {(1, 0): None, (2, 1, 0): None}
    for w in [(2, 1, 0), (0, 1, 0), (0, 0), (2, 2, 1, 0, 1)]:
        assert kernels.find_redex(w, rules, (2, 3)) == _kernels_py.find_redex(w, rules, (2, 3))


def test_bar_codifferential_squares_to_zero():
    s = ex.build_pair_of_pants().V
    A = alphabet(s)
    for w in A.composable_words(3):
        b = BarElement(A, {w: ONE})
        assert not bar_codiff(s, bar_codiff(s, b)), w


def test_bar_coproduct_counit():
    A = alphabet(torus(2))
    b = BarElement(A, {(0, 1): ONE})
    co = bar_coprod(b)
    assert co[((), (0, 1))] == ONE and co[((0, 1), ())] == ONE and co[((0,), (1,))] == ONE


def test_cobar_matches_twisted_dual_on_words():
    s = ex.build_pair_of_pants().V
    A = alphabet(s)
    for w in A.composable_words(2):
        f = DualSeries.word(A, w)
        assert cobar_diff(s, f) == parity_twist(dual_diff(s, parity_twist(f)))


def test_pairing_check_small():
    s = ex.build_pair_of_pants().V
    A = alphabet(s)
    f = parse_series(A, "xp")
    b = BarElement(A, {(A.of_gen["Z"], A.of_gen["Y"]): ONE})
    lhs, rhs = pairing_check(s, f, b)
    assert lhs == rhs
    assert pairing(dual_diff(s, f), b) == -T(Fraction(3, 2))


def test_d_squared_exhaustive_on_small_structure():
    assert d_squared_failures(torus(3), exhaustive=True) == []


def test_d_squared_exhaustive_refuses_windowed():
    with pytest.raises(ValueError):
        d_squared_failures(ex.build_cotangent_circle(0, 1, 2).W, exhaustive=True)


def test_unadapted_basis_breaks_d_squared():
    # the generators Z(i) are not in the augmentation kernel; only the shifted basis is a complex
    W = ex.build_cotangent_circle(0, 1, 2).W
    assert d_squared_failures(W) != []
    assert d_squared_failures(augmentation_kernel(W)) == []


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_dual_differential_is_a_derivation(seed):
    s = ex.build_pair_of_pants().V
    A = alphabet(s)
    rng = random.Random(seed)
    f = _random_series(A, rng, 2)
    g = _random_series(A, rng, 2)
    lhs = dual_diff(s, f * g)
    rhs = dual_diff(s, f) * g
    for d in f.degrees():
        part = f.homogeneous_part(d) * dual_diff(s, g)
        rhs = rhs + (-part if d % 2 else part)
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_series_product_associative(seed):
    A = alphabet(ex.build_conifold(window_a=0, window_bc=0).V)
    rng = random.Random(seed)
    f, g, h = (_random_series(A, rng, 2) for _ in range(3))
    assert (f * g) * h == f * (g * h)
    assert parse_series(A, f.text()) == f
