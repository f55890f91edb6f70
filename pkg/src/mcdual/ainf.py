"""Finite filtered A-infinity structures given by structure-constant tables.

Operations m_k are stored as a table mapping a tuple of input generator
names to a linear combination ``{output name: Novikov}``.  Strict units are
implicit: m_2(1, X) = X and m_2(X, 1) = (-1)^|X| X, all other operations
with a unit input vanish unless the table says otherwise (which the unital
check then reports).
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .scalar import DEFAULT_CUTOFF, ONE, ZERO, BaseScalar, Novikov, T


class StructureError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    valuation: Fraction = Fraction(0)
    source: int = 0
    target: int = 0
    is_unit: bool = False
    action: Fraction = None
    dual: str = None
    divisor: bool = False

    @property
    def shifted_degree(self):
        return self.degree - 1

    @property
    def is_loop(self):
        return self.source == self.target


def lc_add(acc, name, c):
    """acc[name] += c, deleting zero entries."""
    cur = acc.get(name)
    new = c if cur is None else cur + c
    if new:
        acc[name] = new
    elif cur is not None:
        del acc[name]


def lc_text(lc, order=None):
    if not lc:
        return "0"
    names = order(lc) if order else sorted(lc)
    parts = []
    for n in names:
        c = lc[n]
        ct = c.text()
        if len(c.terms) > 1:
            ct = f"({ct})"
        parts.append(f"{ct}*{n}")
    return " + ".join(parts)


class AInfStructure:
    def __init__(self, generators, table=None, r=1, cutoff=DEFAULT_CUTOFF,
                 augmentation=None, incomplete=(), synthetic=(), name="",
                 basis="geometric", check=True):
        self.r = int(r)
        self.cutoff = cutoff
        self.name = name
        self.basis = basis
        self.gens = []
        self.by_name = {}
        for g in generators:
            if g.name in self.by_name:
                raise StructureError(f"duplicate generator {g.name}")
            if not (0 <= g.source < self.r and 0 <= g.target < self.r):
                raise StructureError(f"generator {g.name} has idempotent out of range")
            self.by_name[g.name] = g
            self.gens.append(g)
        self.index = {g.name: i for i, g in enumerate(self.gens)}
        self.units = {}
        for g in self.gens:
            if g.is_unit:
                if g.degree != 0 or not g.is_loop:
                    raise StructureError(f"unit {g.name} must be a degree-0 loop")
                if g.source in self.units:
                    raise StructureError(f"two units at vertex {g.source}")
                self.units[g.source] = g.name
        if self.units and len(self.units) != self.r:
            raise StructureError("a unital structure needs one unit per vertex")
        self.table = {}
        self.incomplete = set(tuple(k) for k in incomplete)
        self.synthetic = set(tuple(k) for k in synthetic)
        for key, out in (table or {}).items():
            self.set_op(key, out, check=check)
        self.augmentation = None
        if augmentation is not None:
            self.augmentation = {n: Novikov.coerce(c) for n, c in augmentation.items() if c}
            for n in self.augmentation:
                if n not in self.by_name:
                    raise StructureError(f"augmentation on unknown generator {n}")
        self._arities = None

    # ------------------------------------------------------------ table
    def gen(self, name):
        try:
            return self.by_name[name]
        except KeyError:
            raise StructureError(f"unknown generator {name!r}") from None

    def set_op(self, key, out, check=True):
        key = tuple(key)
        if not key:
            raise StructureError("m_0 entries are not allowed (curvature-free structures only)")
        ins = [self.gen(n) for n in key]
        clean = {}
        for yname, c in out.items():
            y = self.gen(yname)
            if isinstance(c, BaseScalar):
                c = c.component(y.source)
            c = Novikov.coerce(c)
            if c:
                clean[yname] = c
        if check:
            self._check_entry(key, ins, clean)
        self._arities = None
        if clean:
            self.table[key] = clean
        else:
            self.table.pop(key, None)

    def _check_entry(self, key, ins, out):
        k = len(key)
        for a, b in zip(ins, ins[1:]):
            if a.target != b.source:
                raise StructureError(f"m{k}{key}: inputs not composable")
        deg = sum(g.degree for g in ins) + 2 - k
        nu = sum(g.valuation for g in ins)
        for yname, c in out.items():
            y = self.by_name[yname]
            if y.degree != deg:
                raise StructureError(f"m{k}{key} -> {yname}: degree {y.degree} != {deg}")
            if (y.source, y.target) != (ins[0].source, ins[-1].target):
                raise StructureError(f"m{k}{key} -> {yname}: idempotent typing mismatch")
            if c.val() + y.valuation < nu:
                raise StructureError(f"m{k}{key} -> {yname}: energy filtration violated")

    @property
    def arities(self):
        if self._arities is None:
            ks = {len(k) for k in self.table}
            if self.units:
                ks.add(2)
            self._arities = frozenset(ks)
        return self._arities

    def op(self, key):
        """m_k on a tuple of generator names; returns {name: Novikov} (do not mutate)."""
        out = self.table.get(key)
        if out is not None:
            return out
        if len(key) == 2 and self.units:
            a, b = self.by_name[key[0]], self.by_name[key[1]]
            if a.target != b.source:
                return {}
            if a.is_unit:
                return {b.name: ONE}
            if b.is_unit:
                return {a.name: ONE if a.degree % 2 == 0 else -ONE}
        return {}

    def is_complete(self, key):
        return key not in self.incomplete

    def apply(self, lincombs):
        """Multilinear extension of m_k to linear combinations {name: scalar}."""
        partial = [((), ONE)]
        cut = self.cutoff
        for lc in lincombs:
            nxt = []
            for names, c in partial:
                for n, d in lc.items():
                    if isinstance(d, BaseScalar):
                        d = d.component(self.by_name[n].source)
                    d = Novikov.coerce(d)
                    e = c.mul(d, cut)
                    if e:
                        nxt.append((names + (n,), e))
            partial = nxt
        acc = {}
        for names, c in partial:
            if not self.composable(names):
                continue
            for y, d in self.op(names).items():
                lc_add(acc, y, c.mul(d, cut))
        return acc

    def composable(self, names):
        g = self.by_name
        return all(g[a].target == g[b].source for a, b in zip(names, names[1:]))

    def composable_tuples(self, n, include_units=False):
        pool = [g for g in self.gens if include_units or not g.is_unit]
        by_src = {}
        for g in pool:
            by_src.setdefault(g.source, []).append(g.name)

        def extend(prefix, last):
            if len(prefix) == n:
                yield prefix
                return
            nxt = pool if last is None else [self.by_name[x] for x in by_src.get(last.target, [])]
            for g in nxt:
                yield from extend(prefix + (g.name,), g)

        yield from extend((), None)

    def degree(self, name):
        return self.by_name[name].degree

    def non_units(self):
        return [g for g in self.gens if not g.is_unit]

    def eps(self, name):
        """Augmentation value on a generator (unit projection by default)."""
        if self.augmentation is not None:
            return self.augmentation.get(name, ZERO)
        return ONE if self.by_name[name].is_unit else ZERO

    def copy(self, **changes):
        kw = dict(generators=self.gens, table=self.table, r=self.r, cutoff=self.cutoff,
                  augmentation=self.augmentation, incomplete=self.incomplete,
                  synthetic=self.synthetic, name=self.name, basis=self.basis, check=False)
        kw.update(changes)
        return AInfStructure(**kw)


def apply_m(s, k, args):
    """m_k applied to k arguments, each a (scalar, generator name) pair or a dict."""
    if len(args) != k:
        raise ValueError(f"m{k} needs {k} arguments, got {len(args)}")
    lcs = []
    for a in args:
        if isinstance(a, dict):
            lcs.append(a)
        else:
            c, n = a
            lcs.append({n: c})
    return s.apply(lcs)


# ---------------------------------------------------------------- verification


@dataclass
class AInfReport:
    checked: int = 0
    skipped: int = 0
    max_len: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def summary(self):
        if self.ok:
            return f"A∞ relations: pass (tuples ≤ {self.max_len})"
        return f"A∞ relations: FAIL ({len(self.violations)} violations, tuples ≤ {self.max_len})"

    def detail(self):
        return f"checked {self.checked}, skipped {self.skipped} outside the window"


def relation_residual(s, names):
    """Left side of the A-inf relation on a generator tuple.

    Returns (residual dict, complete flag).  The flag is False when some
    operation touched lies outside the stored window.
    """
    n = len(names)
    ar = s.arities
    deg = s.by_name
    res = {}
    complete = True
    cut = s.cutoff
    for b in range(1, n + 1):
        a = n - b + 1
        if a not in ar or b not in ar:
            continue
        sign_exp = 0
        for i in range(0, n - b + 1):
            if i > 0:
                sign_exp += deg[names[i - 1]].degree - 1
            inner_key = names[i:i + b]
            if inner_key in s.incomplete:
                complete = False
                continue
            inner = s.op(inner_key)
            if not inner:
                continue
            sign = -1 if sign_exp % 2 else 1
            for y, c in inner.items():
                outer_key = names[:i] + (y,) + names[i + b:]
                if outer_key in s.incomplete:
                    complete = False
                    continue
                for z, d in s.op(outer_key).items():
                    term = c.mul(d, cut)
                    lc_add(res, z, term if sign > 0 else -term)
    return res, complete


def _check_chunk(s, tuples):
    out = []
    for t in tuples:
        res, complete = relation_residual(s, t)
        out.append((t, res, complete))
    return out


def verify_ainf(s, maxk=None, maxlen=5, workers=1, include_units=None):
    """Check every A-inf relation on composable generator tuples up to maxlen."""
    ar = s.arities if maxk is None else frozenset(k for k in s.arities if k <= maxk)
    lengths = sorted({a + b - 1 for a in ar for b in ar if a + b - 1 <= maxlen})
    if include_units is None:
        include_units = any(s.by_name[n].is_unit for key in s.table for n in key)
    if maxk is not None:
        s = s.copy(table={k: v for k, v in s.table.items() if len(k) <= maxk})
    tuples = [t for n in lengths for t in s.composable_tuples(n, include_units)]
    rep = AInfReport(max_len=maxlen)
    if workers > 1 and len(tuples) > 1:
        size = max(1, len(tuples) // (workers * 4))
        chunks = [tuples[i:i + size] for i in range(0, len(tuples), size)]
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = [r for chunk in ex.map(lambda c: _check_chunk(s, c), chunks) for r in chunk]
    else:
        results = _check_chunk(s, tuples)
    for t, res, complete in results:
        if not complete:
            rep.skipped += 1
            continue
        rep.checked += 1
        if res:
            rep.violations.append((t, res))
    return rep


def verify_filtered_unital(s):
    """Energy filtration on every table entry plus strict unit behaviour.

    Returns a list of problem strings (empty when fine).
    """
    problems = []
    for key in sorted(s.table, key=lambda k: (len(k), k)):
        out = s.table[key]
        nu = sum(s.by_name[n].valuation for n in key)
        for y, c in sorted(out.items()):
            if c.val() + s.by_name[y].valuation < nu:
                problems.append(f"filtration: m{len(key)}{key} -> {y}")
        units = [n for n in key if s.by_name[n].is_unit]
        if not units:
            continue
        if len(key) != 2:
            problems.append(f"unit: m{len(key)}{key} has a unit input but is nonzero")
            continue
        a, b = s.by_name[key[0]], s.by_name[key[1]]
        if a.is_unit:
            expect = {b.name: ONE}
        else:
            expect = {a.name: ONE if a.degree % 2 == 0 else -ONE}
        if out != expect:
            problems.append(f"unit: m2{key} is not the strict unit action")
    for g in s.gens:
        if g.is_unit and g.valuation != 0:
            problems.append(f"unit: {g.name} has nonzero valuation")
    return problems


def check_strict_augmentation(s, pairs=None):
    """Check that the augmentation is a strict A-inf map to the base ring.

    Returns a list of problem strings.
    """
    problems = []
    for g in s.gens:
        if s.eps(g.name) and (g.degree != 0 or not g.is_loop):
            problems.append(f"augmentation nonzero on {g.name} of degree {g.degree}")

    def eps_lc(lc):
        tot = ZERO
        for n, c in lc.items():
            e = s.eps(n)
            if e:
                tot = tot + c.mul(e, s.cutoff)
        return tot

    for key in sorted(s.table, key=lambda k: (len(k), k)):
        if key in s.incomplete:
            continue
        k = len(key)
        val = eps_lc(s.table[key])
        if k == 2:
            a, b = key
            if s.by_name[a].is_loop and s.by_name[b].is_loop:
                expect = s.eps(a).mul(s.eps(b), s.cutoff)
            else:
                expect = ZERO
            if val != expect:
                problems.append(f"augmentation not multiplicative on m2{key}")
        elif val:
            problems.append(f"augmentation nonzero on m{k}{key}")
    return problems


def augmentation_kernel(s):
    """The same structure written in the basis Z - eps(Z) 1 of the augmentation kernel.

    Generator names are kept.  The reduced bar construction is only a complex
    in this basis when eps is nonzero on non-unit generators.
    """
    if not s.augmentation or all(s.by_name[n].is_unit for n in s.augmentation):
        return s
    cut = s.cutoff
    table = {}
    for key, out in s.table.items():
        if any(s.by_name[n].is_unit for n in key):
            continue
        new = {y: c for y, c in out.items() if not s.by_name[y].is_unit}
        if len(key) == 2:
            a, b = key
            ea, eb = s.eps(a), s.eps(b)
            if ea:
                lc_add(new, b, -ea)
            if eb:
                lc_add(new, a, -eb)
        table[key] = new
    # pairs with an empty product still pick up the eps correction
    for key in s.composable_tuples(2):
        if key in table or key in s.incomplete:
            continue
        a, b = key
        new = {}
        if s.eps(a):
            lc_add(new, b, -s.eps(a))
        if s.eps(b):
            lc_add(new, a, -s.eps(b))
        if new:
            table[key] = new
    aug = {n: c for n, c in s.augmentation.items() if s.by_name[n].is_unit}
    return AInfStructure(s.gens, table, r=s.r, cutoff=cut, augmentation=aug or None,
                         incomplete=s.incomplete, synthetic=s.synthetic, name=s.name,
                         basis=s.basis, check=False)


# ---------------------------------------------------------------- rescaling


def _actions(s):
    acts = {}
    for g in s.gens:
        if g.action is None:
            if g.is_unit:
                acts[g.name] = Fraction(0)
            else:
                raise StructureError(f"generator {g.name} has no action; cannot rescale")
        else:
            acts[g.name] = Fraction(g.action)
    return acts


def _rescale(s, sign, basis):
    acts = _actions(s)
    gens = [replace(g, valuation=g.valuation + sign * acts[g.name]) for g in s.gens]
    table = {}
    for key, out in s.table.items():
        a_in = sum(acts[n] for n in key)
        table[key] = {y: c.shift(sign * (a_in - acts[y])) for y, c in out.items()}
    aug = None
    if s.augmentation is not None:
        aug = {n: c.shift(sign * acts[n]) for n, c in s.augmentation.items()}
    return AInfStructure(gens, table, r=s.r, cutoff=s.cutoff, augmentation=aug,
                         incomplete=s.incomplete, synthetic=s.synthetic, name=s.name,
                         basis=basis, check=True)


def rescale_to_exact(s):
    """Pass to exact generators X~ = T^A(X) X, removing T-powers coming from actions."""
    if s.basis == "exact":
        return s
    return _rescale(s, 1, "exact")


def rescale_from_exact(s):
    if s.basis != "exact":
        return s
    return _rescale(s, -1, "geometric")


def exact_dual_factor(g):
    """x~ = T^{-A(X)} x: the factor converting a geometric dual letter to the exact one."""
    return T(-(g.action or 0))
