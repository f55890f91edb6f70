"""Random small A-inf structures and an independent brute-force relation checker.

The checker works on a plain description of the structure (no AInfStructure,
no Novikov) and expands the quadratic relation directly as a double sum over
inner operation length and position.  It shares no code with ainf.
"""

import random
from fractions import Fraction
from itertools import product

from .ainf import AInfStructure, Generator, verify_ainf
from .scalar import EnergyCutoff, Novikov

# scalars are dicts {exponent: coefficient}


def _sadd(x, y, sign=1):
    out = dict(x)
    for e, c in y.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _smul(x, y):
    out = {}
    for e1, c1 in x.items():
        for e2, c2 in y.items():
            e = e1 + e2
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


class Oracle:
    """Brute-force relation evaluator on a description

    {"gens": [(name, degree, is_unit)], "ops": {(inputs...): {output: {exp: coeff}}}}.
    """

    def __init__(self, desc):
        self.deg = {n: d for n, d, _ in desc["gens"]}
        self.units = [n for n, _, u in desc["gens"] if u]
        self.names = [n for n, _, _ in desc["gens"]]
        self.ops = {tuple(k): v for k, v in desc["ops"].items()}
        self.arities = {len(k) for k in self.ops} | ({2} if self.units else set())

    def m(self, args):
        if args in self.ops:
            return self.ops[args]
        if len(args) == 2 and self.units:
            a, b = args
            if a in self.units:
                return {b: {Fraction(0): Fraction(1)}}
            if b in self.units:
                return {a: {Fraction(0): Fraction(-1 if self.deg[a] % 2 else 1)}}
        return {}

    def residual(self, xs):
        n = len(xs)
        total = {}
        for j in range(1, n + 1):  # inner operation takes j inputs
            for i in range(0, n - j + 1):  # starting after i inputs
                sign = -1 if sum(self.deg[x] - 1 for x in xs[:i]) % 2 else 1
                inner = self.m(xs[i:i + j])
                for y, c in inner.items():
                    outer = self.m(xs[:i] + (y,) + xs[i + j:])
                    for z, d in outer.items():
                        total[z] = _sadd(total.get(z, {}), _smul(c, d), sign)
                        if not total[z]:
                            del total[z]
        return total

    def violations(self, maxlen):
        lengths = sorted({a + b - 1 for a in self.arities for b in self.arities if a + b - 1 <= maxlen})
        bad = []
        for n in lengths:
            for xs in product(self.names, repeat=n):
                if self.residual(xs):
                    bad.append(xs)
        return bad


def _rand_scalar(rng):
    c = Fraction(rng.choice([1, -1, 2, -2, 3]), rng.choice([1, 1, 2, 3]))
    e = Fraction(rng.choice([0, 0, 0, 1, 2]), rng.choice([1, 2]))
    return {e: c}


def _valid_desc(rng):
    """Structures valid by construction: a few templates with random constants."""
    kind = rng.randrange(4)
    if kind == 0:
        # truncated polynomial ring k[a]/(a^3) with b = a^2
        gens = [("e", 0, True), ("a", 0, False), ("b", 0, False)]
        lam = _rand_scalar(rng)
        ops = {("a", "a"): {"b": lam}}
    elif kind == 1:
        # a^2 = b in degrees 1 and 2, plus a cubic term
        gens = [("e", 0, True), ("a", 1, False), ("b", 2, False)]
        ops = {("a", "a"): {"b": _rand_scalar(rng)}, ("a", "a", "a"): {"b": _rand_scalar(rng)}}
        if rng.random() < 0.5:
            del ops[("a", "a")]
    elif kind == 2:
        # two degree-1 generators whose only operation is an m3 into the top class
        gens = [("a", 1, False), ("b", 1, False), ("c", 2, False)]
        ops = {("a", "b", "a"): {"c": _rand_scalar(rng)}, ("b", "a", "b"): {"c": _rand_scalar(rng)}}
    else:
        # graded-commutative: a, b of degree 1 with ab = -ba = c
        gens = [("a", 1, False), ("b", 1, False), ("c", 2, False)]
        lam = _rand_scalar(rng)
        ops = {("a", "b"): {"c": lam}, ("b", "a"): {"c": {e: -c for e, c in lam.items()}}}
    return {"gens": gens, "ops": ops}


def _random_desc(rng):
    """Random tables respecting degrees; usually not A-inf."""
    degs = rng.choice([[0, 0, 0], [0, 0, 1], [0, 1, 1], [0, 1, 2]])
    gens = [(n, d, False) for n, d in zip("abc", degs)]
    ops = {}
    for k in (2, 3):
        for ins in product("abc", repeat=k):
            if rng.random() > 0.6:
                continue
            want = sum(degs["abc".index(x)] for x in ins) + 2 - k
            outs = [n for n, d in zip("abc", degs) if d == want]
            if outs:
                ops[ins] = {rng.choice(outs): _rand_scalar(rng)}
    return {"gens": gens, "ops": ops}


def random_desc(rng):
    return _valid_desc(rng) if rng.random() < 0.5 else _random_desc(rng)


def to_structure(desc, cutoff=None):
    gens = [Generator(n, d, is_unit=u) for n, d, u in desc["gens"]]
    table = {k: {y: Novikov(c) for y, c in out.items()} for k, out in desc["ops"].items()}
    return AInfStructure(gens, table, cutoff=cutoff or EnergyCutoff(energy=100, max_len=6), name="fuzz")


def _lib_residuals(report):
    out = {}
    for t, res in report.violations:
        out[t] = {y: dict(c.terms) for y, c in res.items()}
    return out


def run_fuzz(seed=0, count=100, maxlen=4):
    """Compare verify_ainf with the oracle.

    Returns rows (index, library residuals, oracle residuals), each a dict
    {tuple: {output: {exponent: coefficient}}} over the violated tuples.
    """
    rng = random.Random(seed)
    rows = []
    for i in range(count):
        desc = random_desc(rng)
        lib = verify_ainf(to_structure(desc), maxlen=maxlen, include_units=True)
        ora = Oracle(desc)
        rows.append((i, _lib_residuals(lib), {t: ora.residual(t) for t in ora.violations(maxlen)}))
    return rows
