"""Built-in datasets: tori, the cotangent circle, the I_1 model, the pair of
pants and the deformed conifold.

Structure constants that are fixed only up to conventions are marked
synthetic in the tables; everything else is generated from closed formulas.
"""

from fractions import Fraction
from itertools import combinations
from math import comb, factorial

from .ainf import AInfStructure, Generator
from .barcobar import DualSeries, alphabet
from .koszul import PairData
from .scalar import DEFAULT_CUTOFF, ONE, Novikov, T


def _fmt(a):
    return str(Fraction(a))


# ---------------------------------------------------------------- helpers for kappa formulas


def _series(A, text_word, c=ONE):
    return DualSeries.word(A, tuple(A.of_dual[t] for t in text_word.split(".")), Novikov.coerce(c))


def _power(f, n, vertex):
    out = DualSeries.const(f.A, ONE, vertex)
    for _ in range(n):
        out = out * f
    return out


def _shifted_power(loop, b, vertex):
    """(loop - 1)^b; negative b expands as a series."""
    A = loop.A
    one = DualSeries.const(A, ONE, vertex)
    if b >= 0:
        return _power(loop - one, b, vertex)
    geo = one
    p = one
    for _ in range(loop.cutoff.max_len):
        p = p * loop
        if not p:
            break
        geo = geo + p
    out = _power(geo, -b, vertex)
    return -out if b % 2 else out


def _module_from_series(V, zname, f):
    """Module entries m(Z; P; X...) reproducing kappa(Z) = f (exact letters)."""
    A = alphabet(V)
    acts = [V.by_name[n].action or 0 for n in A.names]
    out = {}
    for (s, e, w), c in f.terms.items():
        xs = tuple(A.names[i] for i in reversed(w))
        shift = -sum(acts[i] for i in w)
        out[((zname,), xs)] = c.shift(shift)
    return out


# ---------------------------------------------------------------- tori


def build_torus(n, cutoff=DEFAULT_CUTOFF):
    """Cohomology of T^n as an A-inf algebra, m2(X, Y) = (-1)^|X| X ^ Y."""
    if not 1 <= n <= 9:
        raise ValueError("torus dimension must be between 1 and 9")
    gens = [Generator("one", 0, is_unit=True, action=Fraction(0))]
    subsets = [c for k in range(1, n + 1) for c in combinations(range(1, n + 1), k)]
    name = {I: "t" + "".join(map(str, I)) for I in subsets}
    for I in subsets:
        gens.append(Generator(name[I], len(I), action=Fraction(0), dual="x" + "".join(map(str, I)),
                              divisor=len(I) == 1))
    table = {}
    for I in subsets:
        for J in subsets:
            if set(I) & set(J):
                continue
            merged = I + J
            inv = sum(1 for a in range(len(merged)) for b in range(a + 1, len(merged)) if merged[a] > merged[b])
            sign = (-1) ** (inv + len(I))
            table[(name[I], name[J])] = {name[tuple(sorted(merged))]: Novikov.const(sign)}
    return AInfStructure(gens, table, cutoff=cutoff, name=f"torus{n}", basis="exact")


# ---------------------------------------------------------------- T*S^1


def _circle_V(cutoff, name="circle"):
    gens = [Generator("one", 0, is_unit=True, action=Fraction(0)),
            Generator("dt", 1, action=Fraction(0), dual="x", divisor=True)]
    return AInfStructure(gens, {}, cutoff=cutoff, name=name, basis="exact")


def build_cotangent_circle(r=0, holonomy=1, window=3, cutoff=DEFAULT_CUTOFF):
    """Cotangent fibre G against the zero section L_r with holonomy, in T*S^1.

    W = span Z(i) with Z(i) Z(j) = Z(i+j); kappa(Z(i)) = hol^i T^{-ri} exp(i x).
    """
    r = Fraction(r)
    hol = Novikov.coerce(holonomy)
    V = _circle_V(cutoff)
    names = {i: f"Z({i})" for i in range(-window, window + 1)}
    wg = [Generator(names[i], 0, is_unit=(i == 0), action=Fraction(0)) for i in range(-window, window + 1)]
    eps = {}
    powers = {0: ONE}
    for i in range(1, window + 1):
        powers[i] = powers[i - 1] * hol
        powers[-i] = powers[-(i - 1)] * hol.invert(cutoff)
    for i in names:
        eps[names[i]] = powers[i].mul(T(-r * i))
    table, incomplete = {}, set()
    for i in names:
        for j in names:
            if i == 0 or j == 0:
                continue
            if abs(i + j) > window:
                incomplete.add((names[i], names[j]))
            else:
                table[(names[i], names[j])] = {names[i + j]: ONE}
    W = AInfStructure(wg, table, cutoff=cutoff, augmentation=eps, incomplete=incomplete,
                      name="cotangent-fibre", basis="exact")
    # N terms of the exponential: insertions dt^k for k < N
    module = {}
    for i in names:
        for k in range(cutoff.max_len):
            c = eps[names[i]].scale(Fraction(i ** k, factorial(k)))
            if c:
                module[((names[i],), ("dt",) * k)] = c
    ideal = [{names[1]: ONE, names[0]: -eps[names[1]]}]
    return PairData(W=W, V=V, P=("P",), module=module, ideal_gens=ideal,
                    chart_coords={"Z": {names[1]: ONE}},
                    name=f"cotangent-circle(r={r})", precision=cutoff.max_len - 1)


# ---------------------------------------------------------------- I_1 model


def i1_product(a1, b1, a2, b2):
    """Structure constants of m2(C(a1,b1), C(a2,b2)) as {(a, b): coefficient}."""
    k = min(abs(a1), abs(a2)) if a1 * a2 < 0 else 0
    return {(a1 + a2, b1 + b2 + i): comb(k, i) for i in range(k + 1)}


def _i1_V(actions, cutoff):
    aU, aV = (Fraction(x) for x in actions)
    if aU + aV != 0:
        raise ValueError("complementary generators need A(U) + A(V) = 0")
    gens = [Generator("one", 0, is_unit=True, action=Fraction(0)),
            Generator("U", 1, action=aU, dual="u"),
            Generator("V", 1, action=aV, dual="v"),
            Generator("S", 2, action=aU + aV, dual="s")]
    area = (aU + aV) - aU - aV
    table = {("V", "U"): {"S": T(area)}, ("U", "V"): {"S": -T(area)}}
    return AInfStructure(gens, table, cutoff=cutoff, name="immersed-sphere",
                         synthetic={("V", "U"), ("U", "V")})


def i1_kappa_formula(A, a, b):
    """(uv - 1)^b u^|a| for a < 0 and (uv - 1)^b v^a for a >= 0, in exact letters."""
    uv = _series(A, "u.v")
    out = _shifted_power(uv, b, 0)
    letter = "u" if a < 0 else "v"
    for _ in range(abs(a)):
        out = out * _series(A, letter)
    return out


def build_i1(window_a=3, window_b=2, actions=(0, 0), cutoff=DEFAULT_CUTOFF):
    V = _i1_V(actions, cutoff)
    A = alphabet(V)
    name = {(a, b): f"C({a},{b})" for a in range(-window_a, window_a + 1)
            for b in range(-window_b, window_b + 1)}
    wg = [Generator(n, 0, is_unit=(k == (0, 0)), action=Fraction(0)) for k, n in name.items()]
    table, incomplete = {}, set()
    for (a1, b1), n1 in name.items():
        for (a2, b2), n2 in name.items():
            if (a1, b1) == (0, 0) or (a2, b2) == (0, 0):
                continue
            out = i1_product(a1, b1, a2, b2)
            if all(k in name for k in out):
                table[(n1, n2)] = {name[k]: Novikov.const(c) for k, c in out.items()}
            else:
                incomplete.add((n1, n2))
    eps = {n: Novikov.const((-1) ** abs(b)) for (a, b), n in name.items() if a == 0}
    W = AInfStructure(wg, table, cutoff=cutoff, augmentation=eps, incomplete=incomplete,
                      name="i1-wrapped", basis="exact")
    module = {}
    for (a, b), n in name.items():
        module.update(_module_from_series(V, n, i1_kappa_formula(A, a, b)))
    ideal = [{name[(-1, 0)]: ONE}, {name[(1, 0)]: ONE}]
    return PairData(W=W, V=V, P=("P",), module=module, ideal_gens=ideal,
                    chart_coords={"U": {name[(-1, 0)]: ONE}, "V": {name[(1, 0)]: ONE}},
                    name="i1")


# ---------------------------------------------------------------- pair of pants


def _pop_W(window, cutoff, eps=None):
    gens = [Generator("one", 0, is_unit=True, action=Fraction(0))]
    for i in range(1, window + 1):
        gens.append(Generator(f"U({i})", 0, action=Fraction(0)))
    for i in range(1, window + 1):
        gens.append(Generator(f"V({i})", 0, action=Fraction(0)))
    table, incomplete = {}, set()
    for x in "UV":
        for i in range(1, window + 1):
            for j in range(1, window + 1):
                key = (f"{x}({i})", f"{x}({j})")
                if i + j > window:
                    incomplete.add(key)
                else:
                    table[key] = {f"{x}({i + j})": ONE}
    return AInfStructure(gens, table, cutoff=cutoff, augmentation=eps, incomplete=incomplete,
                         name="pop-wrapped", basis="exact")


def _seidel_V(actions, cutoff):
    aX, aY, aZ = (Fraction(x) for x in actions)
    area = -(aX + aY + aZ)
    if area < 0:
        raise ValueError("triangle area -(A(X)+A(Y)+A(Z)) must be non-negative")
    gens = [Generator("one", 0, is_unit=True, action=Fraction(0))]
    for n, a in (("X", aX), ("Y", aY), ("Z", aZ)):
        gens.append(Generator(n, 1, action=a, dual=n.lower()))
    for n, a in (("X", aX), ("Y", aY), ("Z", aZ)):
        gens.append(Generator(n + "p", 2, action=-a, dual=n.lower() + "p"))
    gens.append(Generator("E", 2, action=Fraction(0), dual="e"))
    t = T(area)
    table = {("Z", "Y"): {"Xp": t}, ("Y", "Z"): {"Xp": -t},
             ("X", "Z"): {"Yp": t}, ("Z", "X"): {"Yp": -t},
             ("Y", "X"): {"Zp": t}, ("X", "Y"): {"Zp": -t},
             ("Z", "Y", "X"): {"E": t}}
    return AInfStructure(gens, table, cutoff=cutoff, name="seidel-circle", synthetic=set(table))


def build_pair_of_pants(actions=(Fraction(-1, 2),) * 3, window=3, cutoff=DEFAULT_CUTOFF):
    """Wrapped side k[U,V]/(UV) against the immersed circle with three self-intersections."""
    V = _seidel_V(actions, cutoff)
    aX, aY, aZ = (V.by_name[n].action for n in "XYZ")
    W = _pop_W(window, cutoff)
    module = {(("one",), ()): ONE}
    for i in range(1, window + 1):
        module[((f"U({i})",), ("X",) * i)] = T(-i * aX)
        module[((f"V({i})",), ("Y",) * i)] = T(-i * aY)
    corr = {"Q": "Q", "QP": {("Y", "X"): T(-aX - aY)}, "PQ": {("Z",): T(-aZ)}}
    return PairData(W=W, V=V, P=("P",), module=module,
                    ideal_gens=[{"U(1)": ONE}, {"V(1)": ONE}],
                    chart_coords={"U": {"U(1)": ONE}, "V": {"V(1)": ONE}},
                    correction=corr, name="pair-of-pants")


def build_pair_of_pants_circle(window=3, cutoff=DEFAULT_CUTOFF):
    """The same wrapped side against an embedded circle: kappa(U) = e^x, kappa(V) = 0."""
    V = _circle_V(cutoff)
    eps = {"one": ONE}
    eps.update({f"U({i})": ONE for i in range(1, window + 1)})
    W = _pop_W(window, cutoff, eps=eps)
    module = {(("one",), ()): ONE}
    for i in range(1, window + 1):
        for k in range(cutoff.max_len + 1):
            module[((f"U({i})",), ("dt",) * k)] = Novikov.const(Fraction(i ** k, factorial(k)))
    return PairData(W=W, V=V, P=("P",), module=module,
                    ideal_gens=[{"U(1)": ONE, "one": -ONE}, {"V(1)": ONE}],
                    chart_coords={"U": {"U(1)": ONE}}, name="pair-of-pants-circle")


# ---------------------------------------------------------------- conifold

# letters x, z: 0 -> 1 and y, w: 1 -> 0 (Floer order).  In the commutative
# model x, z, y, w become s1, s2, t1, t2.
_CONI_TYPES = {"P0": (0, 0), "P1": (1, 1), "Q": (1, 0), "R": (0, 1)}


def conifold_monomial(kind, a):
    """Exponents (s1, s2, t1, t2) of the leading monomial of a generator."""
    if kind in ("P0", "P1"):
        m = abs(int(a))
        return (m, 0, 0, m) if a > 0 else (0, m, m, 0)
    m = abs(Fraction(a)) - Fraction(1, 2)
    m = int(m)
    if kind == "Q":
        return (m + 1, 0, 0, m) if a > 0 else (0, m + 1, m, 0)
    return (m, 0, 0, m + 1) if a > 0 else (0, m, m + 1, 0)


def _monomial_index(kind, e):
    s1, s2, t1, t2 = e
    if kind in ("P0", "P1"):
        if s2 == 0 and t1 == 0 and s1 == t2:
            return Fraction(s1)
        if s1 == 0 and t2 == 0 and s2 == t1:
            return Fraction(-s2)
    elif kind == "Q":
        if s2 == 0 and t1 == 0 and s1 == t2 + 1:
            return Fraction(2 * t2 + 1, 2)
        if s1 == 0 and t2 == 0 and s2 == t1 + 1:
            return -Fraction(2 * t1 + 1, 2)
    else:
        if s2 == 0 and t1 == 0 and t2 == s1 + 1:
            return Fraction(2 * s1 + 1, 2)
        if s1 == 0 and t2 == 0 and t1 == s2 + 1:
            return -Fraction(2 * s2 + 1, 2)
    raise ValueError(f"monomial {e} does not match a {kind} generator")


def conifold_product(g1, g2):
    """m2 of two generators (kind, a, b, c) in the commutative model."""
    k1, a1, b1, c1 = g1
    k2, a2, b2, c2 = g2
    src, mid = _CONI_TYPES[k1]
    mid2, tgt = _CONI_TYPES[k2]
    if mid != mid2:
        return {}
    kind = {v: k for k, v in _CONI_TYPES.items()}[(src, tgt)]
    e = [x + y for x, y in zip(conifold_monomial(k1, a1), conifold_monomial(k2, a2))]
    n1 = min(e[0], e[2])
    n2 = min(e[1], e[3])
    e = (e[0] - n1, e[1] - n2, e[2] - n1, e[3] - n2)
    a = _monomial_index(kind, e)
    out = {}
    for i in range(n1 + 1):
        for j in range(n2 + 1):
            out[(kind, a, b1 + b2 + i, c1 + c2 + j)] = comb(n1, i) * comb(n2, j)
    return out


def conifold_name(kind, a, b, c):
    return f"{kind}({_fmt(a)},{b},{c})"


def _coni_V(cutoff):
    gens = [Generator("e0", 0, source=0, target=0, is_unit=True, action=Fraction(0)),
            Generator("e1", 0, source=1, target=1, is_unit=True, action=Fraction(0))]
    for n, s, t in (("X", 0, 1), ("Y", 1, 0), ("Z", 0, 1), ("W", 1, 0)):
        gens.append(Generator(n, 1, source=s, target=t, action=Fraction(0), dual=n.lower()))
    for n, s, t in (("Xb", 1, 0), ("Yb", 0, 1), ("Zb", 1, 0), ("Wb", 0, 1)):
        gens.append(Generator(n, 2, source=s, target=t, action=Fraction(0), dual=n.lower()))
    table = {("Z", "Y", "X"): {"Wb": ONE}, ("X", "Y", "Z"): {"Wb": -ONE},
             ("W", "Z", "Y"): {"Xb": ONE}, ("Y", "Z", "W"): {"Xb": -ONE},
             ("X", "W", "Z"): {"Yb": ONE}, ("Z", "W", "X"): {"Yb": -ONE},
             ("Y", "X", "W"): {"Zb": ONE}, ("W", "X", "Y"): {"Zb": -ONE}}
    return AInfStructure(gens, table, r=2, cutoff=cutoff, name="conifold-spheres",
                         synthetic=set(table), basis="exact")


def conifold_kappa_formula(A, kind, a, b, c):
    """The closed kappa formula in exact letters, factors in the order written."""
    a = Fraction(a)
    s = lambda t: _series(A, t)  # noqa: E731
    if kind == "P0":
        head = _power(s("w.x") if a > 0 else s("y.z"), abs(int(a)), 0)
        out = head * _shifted_power(s("y.x"), b, 0) * _shifted_power(s("w.z"), c, 0)
    elif kind == "P1":
        head = _power(s("x.w") if a > 0 else s("z.y"), abs(int(a)), 1)
        out = head * _shifted_power(s("x.y"), b, 1) * _shifted_power(s("z.w"), c, 1)
    elif kind == "Q":
        n = int(abs(a) - Fraction(1, 2))
        head = s("x") * _power(s("w.x"), n, 0) if a > 0 else s("z") * _power(s("y.z"), n, 0)
        out = head * _shifted_power(s("y.x"), b, 0) * _shifted_power(s("w.z"), c, 0)
    else:
        n = int(abs(a) - Fraction(1, 2))
        head = s("w") * _power(s("x.w"), n, 1) if a > 0 else s("y") * _power(s("z.y"), n, 1)
        out = head * _shifted_power(s("x.y"), b, 1) * _shifted_power(s("z.w"), c, 1)
    return out


def conifold_indices(window_a=Fraction(3, 2), window_bc=1):
    wa = Fraction(window_a)
    out = []
    bc = range(-window_bc, window_bc + 1)
    ints = [a for a in range(-int(wa), int(wa) + 1)]
    halves = [Fraction(2 * k + 1, 2) for k in range(-int(wa) - 1, int(wa) + 1)
              if abs(Fraction(2 * k + 1, 2)) <= wa]
    for kind in ("P0", "P1", "Q", "R"):
        for a in (ints if kind.startswith("P") else halves):
            for b in bc:
                for c in bc:
                    out.append((kind, Fraction(a), b, c))
    return out


def build_conifold(window_a=Fraction(3, 2), window_bc=1, cutoff=DEFAULT_CUTOFF):
    V = _coni_V(cutoff)
    A = alphabet(V)
    idx = conifold_indices(window_a, window_bc)
    names = {g: conifold_name(*g) for g in idx}
    units = {("P0", 0, 0, 0): 0, ("P1", 0, 0, 0): 1}
    wg = []
    for g in idx:
        src, tgt = _CONI_TYPES[g[0]]
        wg.append(Generator(names[g], 0, source=src, target=tgt,
                            is_unit=(g[0], g[1], g[2], g[3]) in units, action=Fraction(0)))
    table, incomplete = {}, set()
    for g1 in idx:
        for g2 in idx:
            if g1 in units or g2 in units:
                continue
            if _CONI_TYPES[g1[0]][1] != _CONI_TYPES[g2[0]][0]:
                continue
            out = conifold_product(g1, g2)
            key = (names[g1], names[g2])
            if all(k in names for k in out):
                table[key] = {names[k]: Novikov.const(v) for k, v in out.items()}
            else:
                incomplete.add(key)
    module, eps = {}, {}
    for g in idx:
        f = conifold_kappa_formula(A, *g)
        module.update(_module_from_series(V, names[g], f))
        if g[0] in ("P0", "P1"):
            v = 0 if g[0] == "P0" else 1
            e = f.constant(v)
            if e:
                eps[names[g]] = e
    W = AInfStructure(wg, table, r=2, cutoff=cutoff, augmentation=eps, incomplete=incomplete,
                      name="conifold-wrapped", basis="exact")
    return PairData(W=W, V=V, P=("P0", "P1"), module=module, name="conifold")


# ---------------------------------------------------------------- registry

REGISTRY = {
    "torus1": ("alg", lambda cut: build_torus(1, cut), "cohomology of the circle T^1"),
    "torus2": ("alg", lambda cut: build_torus(2, cut), "cohomology of T^2"),
    "torus3": ("alg", lambda cut: build_torus(3, cut), "cohomology of T^3"),
    "cotangent_circle": ("pair", lambda cut: build_cotangent_circle(0, 1, 3, cut), "T*S^1, zero section"),
    "cotangent_circle_r1": ("pair", lambda cut: build_cotangent_circle(1, 1, 3, cut), "T*S^1, section at level 1"),
    "cotangent_circle_hol": ("pair", lambda cut: build_cotangent_circle(0, 2, 3, cut), "T*S^1 with holonomy 2"),
    "i1": ("pair", lambda cut: build_i1(3, 2, (0, 0), cut), "I_1 model, nodal sphere"),
    "pair_of_pants": ("pair", lambda cut: build_pair_of_pants(cutoff=cut), "pair of pants, immersed circle"),
    "pair_of_pants_circle": ("pair", lambda cut: build_pair_of_pants_circle(cutoff=cut), "pair of pants, embedded circle"),
    "conifold": ("pair", lambda cut: build_conifold(cutoff=cut), "deformed conifold, two spheres"),
}


def build(name, cutoff=DEFAULT_CUTOFF):
    try:
        kind, fn, _ = REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown dataset {name!r}") from None
    return kind, fn(cutoff)
