"""Koszul pairs: the map kappa from the wrapped side W into the MC algebra of V.

A table entry m(Z1..Zl, P, X1..Xk) = c P contributes c * x_k ... x_1 to
kappa(Z1..Zl): the Floer chain of V-generators is read backwards, exactly as
for the dual differential.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import kernels
from .ainf import StructureError, lc_add
from .barcobar import DualSeries, alphabet
from .linalg import Echelon, solve_inverse
from .mcalg import mc_relations, normal_form, presentation_with
from .scalar import ONE, ZERO, Novikov


@dataclass
class PairData:
    W: object
    V: object
    P: tuple
    module: dict
    ideal_gens: list = field(default_factory=list)
    chart_coords: dict = field(default_factory=dict)
    correction: dict = None
    name: str = ""
    synthetic: set = field(default_factory=set)
    precision: int = None  # longest V-insertion the module table is complete for

    def __post_init__(self):
        W, V = self.W, self.V
        self.P = tuple(self.P)
        if W.r != V.r or len(self.P) != V.r:
            raise StructureError("the two sides and the connecting generators disagree on the number of idempotents")
        for g in W.gens:
            if g.degree > 0:
                raise StructureError(f"W generator {g.name} has positive degree; H^>0(W) must vanish")
        clean = {}
        for (zs, xs), c in self.module.items():
            zs, xs = tuple(zs), tuple(xs)
            self._check_module_entry(zs, xs)
            c = Novikov.coerce(c)
            if c:
                clean[(zs, xs)] = c
        self.module = clean
        self._kappa = {}
        self._pres = None

    def _check_module_entry(self, zs, xs):
        W, V = self.W, self.V
        if not zs:
            raise StructureError("module entries need at least one W input")
        zg = [W.gen(z) for z in zs]
        xg = [V.gen(x) for x in xs]
        for a, b in zip(zg, zg[1:]):
            if a.target != b.source:
                raise StructureError(f"module entry {zs}: W inputs not composable")
        v = zg[-1].target
        for g in xg:
            if g.source != v:
                raise StructureError(f"module entry {zs};{xs}: V inputs not composable")
            v = g.target
        if v != zg[0].source:
            raise StructureError(f"module entry {zs};{xs}: output typing mismatch")
        deg = sum(g.degree for g in zg) + sum(g.degree for g in xg) + 2 - (len(zs) + 1 + len(xs))
        if deg != 0:
            raise StructureError(f"module entry {zs};{xs}: degree {deg} != 0")

    @property
    def A(self):
        return alphabet(self.V)

    def presentation(self):
        """MC presentation of V, with the correction relations added if declared."""
        if self._pres is None:
            p = mc_relations(self.V)
            if self.correction:
                rpq, rqp = correction_relations(self)
                p = presentation_with(p, [x for x in (rpq, rqp) if x], label="r")
            self._pres = p
        return self._pres


def kappa(pd, zs):
    """kappa(Z1, ..., Zl) as a DualSeries in the letters of V."""
    if isinstance(zs, str):
        zs = (zs,)
    zs = tuple(zs)
    hit = pd._kappa.get(zs)
    if hit is not None:
        return hit
    A = pd.A
    W = pd.W
    vertex = W.gen(zs[0]).source
    terms = {}
    for (k_zs, xs), c in pd.module.items():
        if k_zs != zs:
            continue
        word = tuple(A.of_gen[x] for x in reversed(xs))
        key = A.word_key(word, vertex)
        if len(word) > pd.V.cutoff.max_len:
            continue
        lc_add(terms, key, c)
    if len(zs) == 1 and W.gen(zs[0]).is_unit and not terms:
        terms = {(vertex, vertex, ()): ONE}
    out = DualSeries(A, terms, pd.V.cutoff)
    pd._kappa[zs] = out
    return out


def kappa_lc(pd, lc):
    out = DualSeries(pd.A, {}, pd.V.cutoff)
    for n, c in lc.items():
        out = out + kappa(pd, n).scale(c)
    return out


def augmentation(pd, z):
    """epsilon(Z): the constant part of kappa(Z); zero off the diagonal."""
    g = pd.W.gen(z)
    if not g.is_loop:
        return ZERO
    return kappa(pd, z).constant(g.source)


def correction_relations(pd):
    """(r_PQ, r_QP) from the declared connecting generator Q."""
    A = pd.A
    out = []
    for kind in ("PQ", "QP"):
        terms = {}
        for xs, c in pd.correction.get(kind, {}).items():
            word = tuple(A.of_gen[x] for x in reversed(xs))
            key = A.word_key(word, 0)
            if key is not None:
                lc_add(terms, key, c)
        out.append(DualSeries(A, terms, pd.V.cutoff))
    return tuple(out)


def kappa_with_correction(pd):
    rpq, rqp = correction_relations(pd)
    return rpq, rqp, pd.presentation()


@dataclass
class KappaReport:
    checked: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def summary(self):
        if self.ok:
            return f"kappa multiplicative: pass (pairs {self.checked}, skipped {self.skipped})"
        return f"kappa multiplicative: FAIL ({len(self.failures)} pairs)"


def kappa_defect(pd, z1, z2, pres=None):
    """Normal form of kappa(m2(Z1,Z2)) - kappa(Z1) kappa(Z2); None if m2 is outside the window."""
    W = pd.W
    key = (z1, z2)
    if key in W.incomplete:
        return None
    pres = pres or pd.presentation()
    lhs = kappa_lc(pd, W.op(key))
    rhs = kappa(pd, z1) * kappa(pd, z2)
    d = normal_form(lhs - rhs, pres)
    if pd.precision is not None:
        d = d.below_length(pd.precision + 1)
    return d


def verify_kappa_hom(pd, pairs=None, workers=1):
    W = pd.W
    pres = pd.presentation()
    if pairs is None:
        pairs = list(W.composable_tuples(2, include_units=True))
    for z in {z for p in pairs for z in p}:
        kappa(pd, z)

    def run(pair):
        return pair, kappa_defect(pd, pair[0], pair[1], pres)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(run, pairs))
    else:
        results = [run(p) for p in pairs]
    rep = KappaReport()
    for pair, d in results:
        if d is None:
            rep.skipped += 1
            continue
        rep.checked += 1
        if d:
            rep.failures.append((pair, d))
    return rep


def kappa_closure(pd, seeds, pres=None, max_rounds=20):
    """Derive kappa on W from its values on seed generators and multiplicativity.

    Repeatedly uses products m2(A, B) with both kappa values known in which
    exactly one output generator is still unknown.
    """
    W = pd.W
    pres = pres or pd.presentation()
    A = pd.A
    known = dict(seeds)
    for v, u in W.units.items():
        known[u] = DualSeries.const(A, ONE, v)
    for _ in range(max_rounds):
        grew = False
        names = sorted(known, key=W.index.get)
        for a in names:
            for b in names:
                key = (a, b)
                if not W.composable(key) or key in W.incomplete:
                    continue
                out = W.op(key)
                unknown = [y for y in out if y not in known]
                if len(unknown) != 1:
                    continue
                y = unknown[0]
                c = out[y]
                rest = known[a] * known[b]
                for y2, c2 in out.items():
                    if y2 != y:
                        rest = rest - known[y2].scale(c2)
                known[y] = normal_form(rest.scale(c.invert(pd.V.cutoff)), pres)
                grew = True
        if not grew:
            break
    return known


# ---------------------------------------------------------------- m-adic quotient


def _wmul(W, a, b):
    acc = {}
    for x, c in a.items():
        for y, d in b.items():
            if (x, y) in W.incomplete:
                return None
            if not W.composable((x, y)):
                continue
            cd = c.mul(d, W.cutoff)
            for z, e in W.op((x, y)).items():
                lc_add(acc, z, cd.mul(e, W.cutoff))
    return acc


def _commutative(W):
    for a in W.gens:
        for b in W.gens:
            if (a.name, b.name) in W.incomplete or (b.name, a.name) in W.incomplete:
                continue
            if W.op((a.name, b.name)) != W.op((b.name, a.name)):
                return False
    return True


@dataclass
class MadicResult:
    k: int
    basis_labels: list
    basis: list
    target_words: list
    matrix: list
    inverse: list
    exact: bool
    well_defined: bool
    ideal: object
    labels: list

    @property
    def invertible(self):
        return self.inverse is not None

    def contains(self, lc):
        """True when the W element lc lies in the stored span of m^k."""
        return self.ideal.contains(lc)

    def inverse_series(self, word_text):
        """kappa-hat inverse of a target word, as {basis label: coefficient}."""
        j = self.target_words.index(word_text)
        if self.inverse is None:
            raise ValueError("kappa-hat is not invertible at this level")
        return {self.basis_labels[i]: c for i, c in sorted(self.inverse[j].items())}

    def text(self):
        lines = [f"k = {self.k}",
                 f"quotient basis: {', '.join(self.basis_labels)}",
                 f"target words: {', '.join(self.target_words)}",
                 f"kappa-hat well defined: {'yes' if self.well_defined else 'no'}",
                 f"kappa-hat invertible: {'yes' if self.invertible else 'no'}"]
        if self.invertible:
            for j, w in enumerate(self.target_words):
                terms = self.inverse[j]
                parts = [f"({terms[i].text()})*{self.basis_labels[i]}" for i in sorted(terms)]
                lines.append(f"  {w} <- {' + '.join(parts) if parts else '0'}")
        return "\n".join(lines)


def normal_words(pres, k):
    """Irreducible composable words of degree-0 letters with length < k."""
    A = pres.A
    out = [(v, v, ()) for v in range(A.r)]
    frontier = [(i,) for i in pres.variables]
    for n in range(1, k):
        nxt = []
        for w in frontier:
            key = A.word_key(w)
            if key is None or kernels.find_redex(w, pres.rules, pres.lens) is not None:
                continue
            out.append(key)
            nxt.extend(w + (j,) for j in pres.variables)
        frontier = nxt
    return out


def madic_quotient(pd, k, workers=1):
    """H^0(W)/m^k on the stored window, and kappa-hat into A_L / (words of length >= k)."""
    W = pd.W
    if W.r != 1:
        raise ValueError("m-adic quotients are implemented for a single idempotent")
    if not pd.ideal_gens:
        raise ValueError("the pair declares no generators of the ideal m")
    pres = pd.presentation()
    cut = W.cutoff
    unit = {W.units[0]: ONE}
    gens = pd.ideal_gens
    m = len(gens)
    labels = [f"g{i + 1}" for i in range(m)]

    # monomials in the ideal generators, by length
    mono = {(): unit}
    for n in range(1, k + 1):
        for w in product(range(m), repeat=n):
            prev = mono.get(w[:-1])
            mono[w] = None if prev is None else _wmul(W, prev, gens[w[-1]])

    order = {g.name: i for i, g in enumerate(W.gens)}
    ideal = Echelon(order, cut)
    sides = [unit] + [{g.name: ONE} for g in W.gens if not g.is_unit]
    two_sided = not _commutative(W)
    ideal_elems = []
    for w in product(range(m), repeat=k):
        base = mono[w]
        if base is None:
            continue
        for a in sides:
            left = _wmul(W, a, base)
            if left is None:
                continue
            for b in (sides if two_sided else [unit]):
                e = _wmul(W, left, b)
                if e is None or not e:
                    continue
                ideal_elems.append(e)
                ideal.add(e)

    quotient = Echelon(order, cut)
    for p, row in ideal.rows.items():
        quotient.rows[p] = row
    basis, blabels = [], []
    for n in range(k):
        for w in product(range(m), repeat=n):
            e = mono[w]
            if e is None:
                continue
            if quotient.add(e) is not None:
                basis.append(e)
                blabels.append("*".join(labels[i] for i in w) if w else "1")

    targets = normal_words(pres, k)
    tindex = {t: j for j, t in enumerate(targets)}
    A = pd.A

    def image(e):
        f = normal_form(kappa_lc(pd, e), pres).below_length(k)
        return {tindex[key]: c for key, c in f.terms.items() if key in tindex}

    matrix = [image(e) for e in basis]
    well = all(not normal_form(kappa_lc(pd, e), pres).below_length(k) for e in ideal_elems)
    inverse, exact = (None, True)
    if len(basis) == len(targets):
        inverse, exact = solve_inverse(matrix, cut)
    return MadicResult(k, blabels, basis, [A.word_text(t[2]) or "1" for t in targets], matrix,
                       inverse, exact and ideal.exact and quotient.exact, well, ideal, labels)


# ---------------------------------------------------------------- charts


@dataclass
class ChartEntry:
    label: str
    eps: object
    radius: object
    shape: str


@dataclass
class Chart:
    entries: list

    def tsv(self):
        lines = ["coord\teps\tradius\tshape"]
        for e in self.entries:
            r = "none" if e.radius is None else str(e.radius)
            lines.append(f"{e.label}\t{e.eps.text()}\t{r}\t{e.shape}")
        return "\n".join(lines) + "\n"

    def svg(self):
        return chart_svg(self)


def _single_letter_power(w):
    return w and all(x == w[0] for x in w)


def chart_entry(pd, label, lc):
    f = kappa_lc(pd, lc)
    A = pd.A
    cut = f.cutoff
    eps = f.constant(0)
    rest = {k: c for k, c in f.terms.items() if k[2]}
    if not rest:
        return ChartEntry(label, eps, None, "constant")
    if len(rest) == 1:
        (key, c), = rest.items()
        if len(key[2]) == 1:
            return ChartEntry(label, eps, -c.val(), "linear")
    if eps and all(_single_letter_power(k[2]) for k in rest):
        letter = next(iter(rest))[2][0]
        c1 = rest.get(A.word_key((letter,)))
        if c1:
            ratio = c1.mul(eps.invert(cut), cut)
            ok = True
            power = ONE
            top = max(len(k[2]) for k in rest)
            for n in range(1, top + 1):
                power = power.mul(ratio, cut)
                want = eps.mul(power, cut).scale(Fraction(1, math.factorial(n)))
                got = rest.get(A.word_key((letter,) * n), ZERO)
                if got != want:
                    ok = False
                    break
            if ok:
                return ChartEntry(label, eps, -(eps.val() + ratio.val()), "exponential")
    return ChartEntry(label, eps, None, "no closed-form radius")


def chart(pd):
    if not pd.chart_coords:
        raise ValueError("the pair declares no chart coordinates")
    return Chart([chart_entry(pd, label, lc) for label, lc in pd.chart_coords.items()])


def chart_svg(ch, size=320):
    """Norm-norm picture: axes, the curve |U||V| = 1 and the polydisk of the chart."""
    pad = 30
    scale = (size - 2 * pad) / 4.0

    def px(x):
        return pad + x * scale

    def py(y):
        return size - pad - y * scale

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
           f'<line x1="{px(0)}" y1="{py(0)}" x2="{px(4)}" y2="{py(0)}" stroke="black"/>',
           f'<line x1="{px(0)}" y1="{py(0)}" x2="{px(0)}" y2="{py(4)}" stroke="black"/>']
    pts = []
    for i in range(1, 81):
        x = 0.25 + i * (3.75 / 80)
        y = 1 / x
        if y <= 4:
            pts.append(f"{px(x):.2f},{py(y):.2f}")
    out.append(f'<polyline points="{" ".join(pts)}" fill="none" stroke="gray" stroke-dasharray="4 3"/>')
    radii = [e for e in ch.entries if e.radius is not None]
    if radii:
        rx = math.exp(-float(radii[0].radius))
        ry = math.exp(-float(radii[1].radius)) if len(radii) > 1 else 0.0
        w = min(rx, 4) * scale
        h = min(ry, 4) * scale
        out.append(f'<rect x="{px(0):.2f}" y="{py(min(ry, 4)):.2f}" width="{w:.2f}" height="{max(h, 2):.2f}" '
                   f'fill="steelblue" fill-opacity="0.3" stroke="steelblue"/>')
    for i, e in enumerate(ch.entries):
        r = "none" if e.radius is None else str(e.radius)
        out.append(f'<text x="{pad}" y="{14 + 14 * i}" font-size="11">{e.label}: eps={e.eps.text()} '
                   f'radius exp={r} ({e.shape})</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
