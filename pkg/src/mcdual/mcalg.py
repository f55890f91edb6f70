"""Maurer-Cartan algebra presentations and rewriting modulo the relation ideal.

Variables are the dual letters of degree-1 generators.  Each degree-2
generator contributes the relation read off from m(e^b, ..., e^b).  Rules
orient a relation at its largest word in deg-lex order (longer words first,
then lexicographic in generator order) so rewriting never increases words.
"""

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from . import kernels
from .ainf import lc_add
from .barcobar import DualSeries, alphabet
from .scalar import ONE, Novikov


class NormalFormBudgetExceeded(RuntimeError):
    pass


def _lead_key(key):
    w = key[2]
    return (len(w), w)


@dataclass
class MCPresentation:
    A: object
    variables: list
    relations: list
    rules: dict = field(default_factory=dict)
    forced_zero: list = field(default_factory=list)
    cutoff: object = None
    budget: int = 200000
    confluent: bool = None
    unresolved: list = field(default_factory=list)

    @property
    def lens(self):
        return tuple(sorted({len(w) for w in self.rules}))

    def add_relation(self, f, label=""):
        """Reduce f by the current rules and orient what is left into a new rule."""
        g = normal_form(f, self)
        if not g:
            return None
        lead = max(g.terms, key=_lead_key)
        inv = g.terms[lead].invert(g.cutoff)
        rhs = {}
        for k, c in g.terms.items():
            if k != lead:
                rhs[k] = -c.mul(inv, g.cutoff)
        self.rules[lead[2]] = rhs
        self._inter_reduce(lead[2])
        return lead[2]

    def _inter_reduce(self, new_lhs):
        # rewrite right sides mentioning the new left side
        for lhs, rhs in list(self.rules.items()):
            if lhs == new_lhs:
                continue
            if any(kernels.find_redex(k[2], {new_lhs: None}, (len(new_lhs),)) for k in rhs):
                f = DualSeries(self.A, rhs, self.cutoff)
                self.rules[lhs] = normal_form(f, self).terms

    def variable_names(self):
        return [self.A.duals[i] for i in self.variables]

    def text(self):
        A = self.A
        lines = [f"vars: {', '.join(self.variable_names())}"]
        if self.relations:
            lines.append("relations:")
            for label, f in self.relations:
                lines.append(f"  {label}: {f.text()}")
        else:
            lines.append("relations: none")
        if self.forced_zero:
            lines.append("forced zero: " + ", ".join(A.word_text(w) for w in self.forced_zero))
        lines.append("rules:")
        for lhs in sorted(self.rules, key=lambda w: (len(w), w)):
            rhs = DualSeries(A, self.rules[lhs], self.cutoff)
            lines.append(f"  {A.word_text(lhs)} -> {rhs.text()}")
        if self.confluent is not None:
            n = self.cutoff.max_len
            lines.append(f"confluent: {'yes' if self.confluent else 'no'}({n})")
        return "\n".join(lines)


def mc_relations(s, cutoff=None, check_confluence=True):
    """MC presentation of a structure with no negative-degree generators."""
    for g in s.gens:
        if g.degree < 0:
            raise ValueError(f"generator {g.name} has negative degree; not supported")
    A = alphabet(s)
    cut = cutoff or s.cutoff
    variables = [i for i in range(len(A)) if A.deg[i] == 0]
    rels = {}
    for key, out in s.table.items():
        if any(s.by_name[n].degree != 1 or s.by_name[n].is_unit for n in key):
            continue
        word = tuple(A.of_gen[n] for n in reversed(key))
        wkey = A.word_key(word)
        if wkey is None or len(word) > cut.max_len:
            continue
        for y, c in out.items():
            g = s.by_name[y]
            if g.degree != 2 or g.is_unit:
                continue
            lc_add(rels.setdefault(y, {}), wkey, c)
    relations = []
    for g in s.gens:
        if g.name in rels and rels[g.name]:
            relations.append((g.name, DualSeries(A, rels[g.name], cut)))
    forced = [(a, b) for a in variables for b in variables
              if a != b and A.right[a] != A.left[b]]
    p = MCPresentation(A, variables, relations, forced_zero=forced, cutoff=cut)
    for label, f in relations:
        p.add_relation(f, label)
    if check_confluence:
        p.unresolved = critical_pair_failures(p, cut.max_len)
        p.confluent = not p.unresolved
    return p


def presentation_with(p, extra, label="extra"):
    """Copy of p with more relations (given as DualSeries) added and confluence rechecked."""
    q = MCPresentation(p.A, list(p.variables), list(p.relations), dict(p.rules),
                       list(p.forced_zero), p.cutoff, p.budget)
    for i, f in enumerate(extra):
        q.relations.append((f"{label}{i}", f))
        q.add_relation(f, label)
    q.unresolved = critical_pair_failures(q, q.cutoff.max_len)
    q.confluent = not q.unresolved
    return q


def normal_form(f, p, budget=None):
    """Rewrite f to its normal form; words beyond the length cutoff are dropped."""
    rules = p.rules
    if not rules:
        return f._new(dict(f.terms))
    lens = p.lens
    cut = f.cutoff
    maxlen = cut.max_len
    budget = budget or p.budget
    pending = dict(f.terms)
    heap = [(-len(k[2]), tuple(-x for x in k[2]), k) for k in pending]
    heapq.heapify(heap)
    result = {}
    steps = 0
    find = kernels.find_redex
    while heap:
        _, _, k = heapq.heappop(heap)
        c = pending.pop(k, None)
        if c is None:
            continue
        w = k[2]
        red = find(w, rules, lens)
        if red is None:
            result[k] = c
            continue
        steps += 1
        if steps > budget:
            raise NormalFormBudgetExceeded(f"more than {budget} rewriting steps")
        i, lhs = red
        head, tail = w[:i], w[i + len(lhs):]
        for (_, _, u), d in rules[lhs].items():
            nw = head + u + tail
            if len(nw) > maxlen:
                continue
            cc = c.mul(d, cut)
            if not cc:
                continue
            nk = (k[0], k[1], nw)
            cur = pending.get(nk)
            if cur is None:
                pending[nk] = cc
                heapq.heappush(heap, (-len(nw), tuple(-x for x in nw), nk))
            else:
                cc = cur + cc
                if cc:
                    pending[nk] = cc
                else:
                    del pending[nk]
    return f._new(result)


def reduces_to_zero(f, p):
    return not normal_form(f, p)


def _rewrite_at(p, w, i, lhs, key):
    A = p.A
    out = {}
    for (_, _, u), d in p.rules[lhs].items():
        lc_add(out, (key[0], key[1], w[:i] + u + w[i + len(lhs):]), d)
    return DualSeries(A, out, p.cutoff)


def critical_pair_failures(p, max_len):
    """Overlap and inclusion ambiguities (words up to max_len) that do not resolve."""
    A = p.A
    bad = []
    lhss = sorted(p.rules, key=lambda w: (len(w), w))
    for l1 in lhss:
        for l2 in lhss:
            cands = []
            for t in range(1, min(len(l1), len(l2))):
                if l1[-t:] == l2[:t]:
                    cands.append((l1 + l2[t:], 0, l1, len(l1) - t, l2))
            if l1 != l2 and len(l2) <= len(l1):
                for i in range(len(l1) - len(l2) + 1):
                    if l1[i:i + len(l2)] == l2:
                        cands.append((l1, 0, l1, i, l2))
            for w, i1, a, i2, b in cands:
                if len(w) > max_len:
                    continue
                key = A.word_key(w)
                if key is None:
                    continue
                r1 = normal_form(_rewrite_at(p, w, i1, a, key), p)
                r2 = normal_form(_rewrite_at(p, w, i2, b, key), p)
                if r1 != r2:
                    bad.append(A.word_text(w))
    return sorted(set(bad))


def complete(p, max_len=None, rounds=8):
    """Bounded completion: add resolved differences of critical pairs as rules."""
    max_len = max_len or p.cutoff.max_len
    A = p.A
    for _ in range(rounds):
        added = False
        lhss = sorted(p.rules, key=lambda w: (len(w), w))
        for l1 in lhss:
            for l2 in lhss:
                if l1 not in p.rules or l2 not in p.rules:
                    continue
                for t in range(1, min(len(l1), len(l2))):
                    if l1[-t:] != l2[:t]:
                        continue
                    w = l1 + l2[t:]
                    key = A.word_key(w)
                    if len(w) > max_len or key is None:
                        continue
                    diff = _rewrite_at(p, w, 0, l1, key) - _rewrite_at(p, w, len(l1) - t, l2, key)
                    if p.add_relation(diff, "completion") is not None:
                        added = True
        if not added:
            break
    p.unresolved = critical_pair_failures(p, max_len)
    p.confluent = not p.unresolved
    return p


# ---------------------------------------------------------------- exp / log


def exp_letter(A, i, c=ONE, rho=ONE, cutoff=None):
    """rho * exp(c x_i), truncated at the word-length cutoff."""
    cut = cutoff or A.s.cutoff
    c = Novikov.coerce(c)
    terms = {}
    power = ONE
    for k in range(cut.max_len + 1):
        coeff = power.scale(Fraction(1, factorial(k))).mul(Novikov.coerce(rho), cut)
        if coeff:
            key = A.word_key((i,) * k, A.left[i])
            if key is not None:
                terms[key] = coeff
        power = power.mul(c, cut)
    return DualSeries(A, terms, cut)


def log1p(g):
    """log(1 + g) for g without constant term."""
    if any(not k[2] for k in g.terms):
        raise ValueError("log1p needs a series without constant term")
    cut = g.cutoff
    out = DualSeries(g.A, {}, cut)
    power = g
    for k in range(1, cut.max_len + 1):
        out = out + power.scale(Fraction((-1) ** (k + 1), k))
        power = power * g
        if not power:
            break
    return out


def substitute(f, images):
    """Replace letter i by the series images[i] (letters without an image stay)."""
    A = f.A
    cut = f.cutoff
    acc = DualSeries(A, {}, cut)
    cache = {}
    for (s, e, w), c in f.terms.items():
        prod = DualSeries.const(A, c, s)
        for letter in w:
            img = images.get(letter)
            if img is None:
                img = cache.setdefault(letter, DualSeries.letter(A, letter))
            prod = prod * img
            if not prod:
                break
        acc = acc + prod
    return acc


@dataclass
class SubstitutedPresentation:
    """Presentation after z_i = rho_i exp(x_i), in the shifted letters w_i = z_i - rho_i."""

    base: MCPresentation
    divisor_vars: list
    rho: dict
    relations: list

    def to_w(self, f):
        A = self.base.A
        imgs = {}
        for i in self.divisor_vars:
            r = self.rho[i]
            t = DualSeries.letter(A, i, r.invert(f.cutoff))
            imgs[i] = log1p(t)
        return substitute(f, imgs)

    def to_x(self, g):
        A = self.base.A
        imgs = {}
        for i in self.divisor_vars:
            ex = exp_letter(A, i, ONE, self.rho[i], g.cutoff)
            imgs[i] = ex - DualSeries.const(A, self.rho[i], A.left[i])
        return substitute(g, imgs)

    def z_letter(self, i):
        """z_i = rho_i + w_i as a series in the w letters."""
        A = self.base.A
        return DualSeries.letter(A, i) + DualSeries.const(A, self.rho[i], A.left[i])

    def normal_form(self, g):
        return self.to_w(normal_form(self.to_x(g), self.base))


def exp_substitute(p, divisor_vars, rho=None):
    """Exponential coordinate change on divisor-flagged variables."""
    A = p.A
    idx = []
    for v in divisor_vars:
        i = A.of_dual[v] if isinstance(v, str) else v
        if not A.s.by_name[A.names[i]].divisor:
            raise ValueError(f"variable {A.duals[i]} is not flagged for the divisor axiom")
        idx.append(i)
    rho = {i: Novikov.coerce((rho or {}).get(A.duals[i], ONE)) for i in idx}
    for i, r in rho.items():
        if r.val() != 0:
            raise ValueError("rho must have valuation zero")
    sp = SubstitutedPresentation(p, idx, rho, [])
    sp.relations = [(label, sp.to_w(f)) for label, f in p.relations]
    return sp
