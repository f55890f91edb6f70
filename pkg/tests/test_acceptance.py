"""One test (or parametrized family) per acceptance criterion.

conftest.py prints a pass/FAIL line per criterion at the end of the run.
Reference values here are computed by small helpers in this file, not by
the library.
"""

import os
import random
import subprocess
import sys
from fractions import Fraction
from math import comb

import pytest

from mcdual import examples as ex
from mcdual.ainf import augmentation_kernel, rescale_to_exact
from mcdual.barcobar import (BarElement, DualSeries, alphabet, bar_composable, cobar_agreement,
                             d_squared_failures, dual_diff, exact_letters, pairing_check,
                             parse_series)
from mcdual.fuzz import run_fuzz
from mcdual.koszul import (augmentation, chart, correction_relations, kappa, kappa_closure,
                           madic_quotient, verify_kappa_hom)
from mcdual.mcalg import mc_relations, normal_form
from mcdual.scalar import ONE, ZERO, Novikov, T

N = 6
ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


# ---------------------------------------------------------------- a tiny noncommutative polynomial ring

class Poly:
    """Rational combination of words (tuples of letter names), truncated at length N."""

    def __init__(self, terms=None):
        self.t = {w: c for w, c in (terms or {}).items() if c and len(w) <= N}

    @classmethod
    def of(cls, text):
        return cls({tuple(text.split(".")) if text else (): Fraction(1)})

    def __add__(self, o):
        t = dict(self.t)
        for w, c in o.t.items():
            t[w] = t.get(w, 0) + c
        return Poly(t)

    def __sub__(self, o):
        return self + o * Fraction(-1)

    def __mul__(self, o):
        if not isinstance(o, Poly):
            return Poly({w: c * o for w, c in self.t.items()})
        t = {}
        for w1, c1 in self.t.items():
            for w2, c2 in o.t.items():
                if len(w1) + len(w2) <= N:
                    t[w1 + w2] = t.get(w1 + w2, 0) + c1 * c2
        return Poly(t)

    def __pow__(self, n):
        out = Poly.of("")
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, o):
        return self.t == o.t


def shifted(loop, b):
    """(loop - 1)^b; for b < 0 this is (-1)^b (1 + loop + loop^2 + ...)^|b|."""
    if b >= 0:
        return (Poly.of(loop) - Poly.of("")) ** b
    geo = Poly()
    for k in range(N + 1):
        geo = geo + Poly.of(loop) ** k
    return geo ** (-b) * Fraction((-1) ** b)


def as_poly(f):
    """A DualSeries with integer-exponent-free coefficients as a Poly in its dual letter names."""
    A = f.A
    out = {}
    for (_, _, w), c in f.terms.items():
        ((e, q),) = c.terms
        assert e == 0
        out[tuple(A.duals[i] for i in w)] = Fraction(q)
    return Poly(out)


# ---------------------------------------------------------------- 1. torus

@pytest.mark.parametrize("n", [1, 2, 3])
def test_criterion_1_torus_mc(n):
    p = mc_relations(ex.build_torus(n))
    A = p.A
    got = {f.text() for _, f in p.relations}
    want = set()
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            want.add(parse_series(A, f"x{i}.x{j} - x{j}.x{i}").text())
    assert got == want
    if n == 1:
        assert p.relations == []


# ---------------------------------------------------------------- 2. cotangent bundle of the circle

def test_criterion_2_kappa_exponential():
    pd = ex.build_cotangent_circle(0)
    want = Poly({("x",) * k: Fraction(1, _fact(k)) for k in range(N)})
    assert as_poly(kappa(pd, "Z(1)")) == want


def _fact(k):
    return 1 if k < 2 else k * _fact(k - 1)


def test_criterion_2_augmentation_is_one():
    pd = ex.build_cotangent_circle(0)
    assert [augmentation(pd, g.name) for g in pd.W.gens] == [ONE] * len(pd.W.gens)


def test_criterion_2_madic_log():
    m = madic_quotient(ex.build_cotangent_circle(0), 4)
    assert m.invertible and m.exact
    inv = m.inverse_series("x")
    assert [inv.get(k, ZERO) for k in ("g1", "g1*g1", "g1*g1*g1")] == \
        [Novikov.const(Fraction(1)), Novikov.const(Fraction(-1, 2)), Novikov.const(Fraction(1, 3))]


@pytest.mark.parametrize("r", [-1, 0, Fraction(1, 2)])
def test_criterion_2_chart(r):
    (e,) = chart(ex.build_cotangent_circle(r)).entries
    assert e.eps == T(-Fraction(r))
    assert e.radius == r


# ---------------------------------------------------------------- 3. I_1 model

def i1_m2(a1, b1, a2, b2):
    k = min(abs(a1), abs(a2)) if (a1 < 0 < a2 or a2 < 0 < a1) else 0
    return {f"C({a1 + a2},{b1 + b2 + i})": comb(k, i) for i in range(k + 1)}


def i1_kappa(a, b):
    return shifted("u.v", b) * (Poly.of("u") ** -a if a < 0 else Poly.of("v") ** a)


def test_criterion_3_m2():
    W = ex.build_i1(3, 2).W
    names = set(W.by_name)
    seen = 0
    for a1 in range(-3, 4):
        for b1 in range(-2, 3):
            for a2 in range(-3, 4):
                for b2 in range(-2, 3):
                    key = (f"C({a1},{b1})", f"C({a2},{b2})")
                    want = i1_m2(a1, b1, a2, b2)
                    if not set(want) <= names:
                        assert key in W.incomplete or "C(0,0)" in key
                        continue
                    got = {y: c for y, c in W.op(key).items()}
                    assert got == {y: Novikov.const(c) for y, c in want.items()}, key
                    seen += 1
    assert seen > 500


def test_criterion_3_kappa_direct():
    pd = ex.build_i1(3, 2)
    for a in range(-3, 4):
        for b in range(0, 3):
            assert as_poly(exact_letters(kappa(pd, f"C({a},{b})"))) == i1_kappa(a, b), (a, b)


def test_criterion_3_kappa_closure():
    pd = ex.build_i1(3, 2)
    pres = pd.presentation()
    seeds = {"C(-1,0)": kappa(pd, "C(-1,0)"), "C(1,0)": kappa(pd, "C(1,0)")}
    known = kappa_closure(pd, seeds, pres)
    A = pd.A
    for a in range(-3, 4):
        for b in range(0, 3):
            ref = DualSeries(A, {A.word_key(tuple(A.of_dual[x] for x in w), 0): c
                                 for w, c in i1_kappa(a, b).t.items()})
            assert known[f"C({a},{b})"] == normal_form(ref, pres), (a, b)


def test_criterion_3_unit_polydisk():
    ch = chart(ex.build_i1(3, 2, actions=(0, 0)))
    assert {e.label: e.radius for e in ch.entries} == {"U": 0, "V": 0}


@pytest.mark.parametrize("s", [Fraction(1, 2), 1, Fraction(-2, 3)])
def test_criterion_3_action_shift(s):
    base = {e.label: e.radius for e in chart(ex.build_i1(2, 1)).entries}
    moved = {e.label: e.radius for e in chart(ex.build_i1(2, 1, actions=(s, -s))).entries}
    assert moved["U"] - base["U"] == s and moved["V"] - base["V"] == -s


# ---------------------------------------------------------------- 4. pair of pants

def test_criterion_4_mc_equation():
    p = mc_relations(rescale_to_exact(ex.build_pair_of_pants().V))
    A = p.A
    want = {"Xp": "y.z - z.y", "Yp": "z.x - x.z", "Zp": "x.y - y.x", "E": "x.y.z"}
    got = dict(p.relations)
    assert set(got) == set(want)
    for label, text in want.items():
        assert got[label] == parse_series(A, text), label


def test_criterion_4_correction():
    rpq, rqp = correction_relations(ex.build_pair_of_pants())
    assert as_poly(exact_letters(rpq)) == Poly.of("z")
    assert as_poly(exact_letters(rqp)) == Poly.of("x.y")


def test_criterion_4_circle_variant():
    pd = ex.build_pair_of_pants_circle()
    # the ideal generators U - 1 and V lie in ker eps
    assert pd.ideal_gens == [{"U(1)": ONE, "one": -ONE}, {"V(1)": ONE}]
    for lc in pd.ideal_gens:
        assert sum((augmentation(pd, z) * c for z, c in lc.items()), ZERO) == ZERO
    assert not kappa(pd, "V(1)")
    for k in (2, 3, 4):
        assert madic_quotient(pd, k).contains({"V(1)": ONE}), k


# ---------------------------------------------------------------- 5. conifold

def coni_kappa(kind, a, b, c):
    a = Fraction(a)
    P = Poly.of
    if kind == "P0":
        head = (P("w.x") if a > 0 else P("y.z")) ** abs(int(a))
        return head * shifted("y.x", b) * shifted("w.z", c)
    if kind == "P1":
        head = (P("x.w") if a > 0 else P("z.y")) ** abs(int(a))
        return head * shifted("x.y", b) * shifted("z.w", c)
    n = int(abs(a) - Fraction(1, 2))
    if kind == "Q":
        head = P("x") * P("w.x") ** n if a > 0 else P("z") * P("y.z") ** n
        return head * shifted("y.x", b) * shifted("w.z", c)
    head = P("w") * P("x.w") ** n if a > 0 else P("y") * P("z.y") ** n
    return head * shifted("x.y", b) * shifted("z.w", c)


def test_criterion_5_relations(datasets):
    pd = datasets("conifold")
    p = mc_relations(pd.V)
    A = p.A
    want = [parse_series(A, t) for t in
            ("x.y.z - z.y.x", "y.z.w - w.z.y", "z.w.x - x.w.z", "w.x.y - y.x.w")]
    got = [f for _, f in p.relations]
    assert len(got) == len(want)
    for f in got:
        assert any(f == g or f == -g for g in want), f.text()
    assert sorted(A.word_text(w) for w in p.forced_zero) == ["w.y", "x.z", "y.w", "z.x"]


def test_criterion_5_kappa(datasets):
    pd = datasets("conifold")
    count = 0
    for kind, a, b, c in ex.conifold_indices(Fraction(3, 2), 1):
        name = ex.conifold_name(kind, a, b, c)
        assert as_poly(exact_letters(kappa(pd, name))) == coni_kappa(kind, a, b, c), name
        count += 1
    # P0, P1 with a in {-1, 0, 1}; Q, R with a in {+-1/2, +-3/2}; b, c in {-1, 0, 1}
    assert count == 2 * 3 * 9 + 2 * 4 * 9


# ---------------------------------------------------------------- 6. property suites

ALL = sorted(ex.REGISTRY)


def sides(name, datasets):
    obj = datasets(name)
    if ex.REGISTRY[name][0] == "alg":
        return [obj]
    return [obj.V, augmentation_kernel(obj.W)]


@pytest.mark.parametrize("name", ALL)
def test_criterion_6a_d_squared(name, datasets):
    for s in sides(name, datasets):
        assert d_squared_failures(s) == []


@pytest.mark.parametrize("name", ALL)
def test_criterion_6b_cobar(name, datasets):
    for s in sides(name, datasets):
        assert cobar_agreement(s) == []


def _random_pair(s, rng):
    A = alphabet(s)
    n = rng.randint(1, 2)
    f = DualSeries(A)
    for _ in range(rng.randint(1, 3)):
        w = rng.choice(A.composable_words(n))
        f = f + DualSeries.word(A, w, Novikov.const(rng.choice([1, -1, 2, Fraction(1, 3)])))
    # bar words: half drawn from d(f) so the pairing is usually nonzero
    cands = [k[2][::-1] for k in dual_diff(s, f).terms]
    terms = {}
    for _ in range(rng.randint(1, 3)):
        if cands and rng.random() < 0.5:
            w = rng.choice(cands)
        else:
            w = tuple(rng.randrange(len(A)) for _ in range(rng.randint(1, 3)))
        if bar_composable(A, w):
            terms[w] = Novikov.const(rng.choice([1, -1, 3]))
    return f, BarElement(A, terms)


@pytest.mark.parametrize("name", ALL)
def test_criterion_6c_pairing(name, datasets):
    rng = random.Random(name)
    nonzero = 0
    for s in sides(name, datasets):
        for _ in range(200):
            f, b = _random_pair(s, rng)
            lhs, rhs = pairing_check(s, f, b)
            assert lhs == rhs
            nonzero += bool(lhs)
    if name != "torus1":
        assert nonzero > 0


@pytest.mark.parametrize("name", [n for n in ALL if ex.REGISTRY[n][0] == "pair"])
def test_criterion_6d_kappa_multiplicative(name, datasets):
    rep = verify_kappa_hom(datasets(name))
    assert rep.ok, [(p, d.text()) for p, d in rep.failures[:5]]
    assert rep.checked > 0


def test_criterion_6e_fuzz():
    rows = run_fuzz(seed=0, count=100, maxlen=4)
    assert len(rows) == 100
    assert [i for i, lib, orc in rows if lib != orc] == []


# ---------------------------------------------------------------- 7. CLI determinism

COMMANDS = [
    ["mc", "datasets/torus1.alg"],
    ["mc", "datasets/torus2.alg"],
    ["mc", "datasets/torus3.alg"],
    ["koszul", "--pair", "datasets/cotangent_circle.pair", "--op", "kappa", "Z(1)"],
    ["koszul", "--pair", "datasets/cotangent_circle.pair", "--op", "augment"],
    ["koszul", "--pair", "datasets/cotangent_circle.pair", "--op", "madic", "4"],
    ["chart", "--pair", "datasets/cotangent_circle_r1.pair"],
    ["--max-tuple", "3", "verify", "datasets/i1.pair"],
    ["koszul", "--pair", "datasets/i1.pair", "--op", "kappa", "C(-2,1)"],
    ["--format", "json", "chart", "--pair", "datasets/i1.pair"],
    ["mc", "--exact", "datasets/pair_of_pants.pair"],
    ["mc", "datasets/pair_of_pants.pair"],
    ["koszul", "--pair", "datasets/pair_of_pants_circle.pair", "--op", "madic", "3"],
    ["mc", "datasets/conifold.pair"],
    ["koszul", "--pair", "datasets/conifold.pair", "--op", "verify"],
    ["bar", "datasets/torus3.alg"],
]

DRIVER = """
import contextlib, io, sys, json
from mcdual.cli import main
threads = sys.argv[1]
out = sys.stdout.buffer
for argv in json.loads(sys.argv[2]):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(["--threads", threads] + argv)
    out.write(f"$ {' '.join(argv)} -> {code}\\n{buf.getvalue()}".encode())
"""


def test_criterion_7_cli_determinism():
    import json
    settings = [("0", "1"), ("1", "1"), ("2", "1"), ("0", "8")]
    procs = []
    for seed, threads in settings:
        env = dict(os.environ, PYTHONHASHSEED=seed)
        procs.append(subprocess.Popen([sys.executable, "-c", DRIVER, threads, json.dumps(COMMANDS)],
                                      cwd=ROOT, env=env, stdout=subprocess.PIPE, stderr=subprocess.PIPE))
    outs = []
    for p in procs:
        out, err = p.communicate(timeout=120)
        assert p.returncode == 0, err.decode()
        outs.append(out)
    assert all(o == outs[0] for o in outs)
    assert outs[0].count(b"$ ") == len(COMMANDS)
    assert b"-> 2" not in outs[0] and b"-> 1" not in outs[0]
