"""Exact Gaussian elimination over truncated Novikov scalars.

Vectors are dicts {coordinate: Novikov}.  Pivots are chosen with minimal
valuation; monomial pivots invert exactly, others through the truncated
geometric series (the result records whether that happened).
"""

from .ainf import lc_add
from .scalar import ONE


class Echelon:
    def __init__(self, order, cutoff, allowed=None):
        self.order = order  # coordinate -> sort position
        self.allowed = allowed
        self.cutoff = cutoff
        self.rows = {}  # pivot coordinate -> row normalized to 1 at the pivot
        self.exact = True

    def reduce(self, vec):
        vec = dict(vec)
        for piv in sorted(self.rows, key=self.order.get):
            c = vec.get(piv)
            if not c:
                continue
            for k, d in self.rows[piv].items():
                lc_add(vec, k, -c.mul(d, self.cutoff))
        return vec

    def add(self, vec):
        """Insert vec; returns the pivot used or None when vec was dependent."""
        vec = self.reduce(vec)
        if not vec:
            return None
        cands = [k for k in vec if self.allowed is None or self.allowed(k)]
        if not cands:
            return None
        piv = min(cands, key=lambda k: (vec[k].val(), self.order[k]))
        c = vec[piv]
        if not c.is_monomial():
            self.exact = False
        inv = c.invert(self.cutoff)
        row = {k: d.mul(inv, self.cutoff) for k, d in vec.items()}
        row = {k: d for k, d in row.items() if d}
        row[piv] = ONE
        for p in list(self.rows):
            e = self.rows[p].get(piv)
            if e:
                r2 = dict(self.rows[p])
                for k, d in row.items():
                    lc_add(r2, k, -e.mul(d, self.cutoff))
                self.rows[p] = r2
        self.rows[piv] = row
        return piv

    def contains(self, vec):
        return not self.reduce(vec)

    @property
    def rank(self):
        return len(self.rows)


def solve_inverse(matrix, cutoff):
    """Inverse of a square matrix given as a list of row dicts {col: Novikov}.

    Returns (inverse rows, exact flag) or (None, flag) when singular.
    """
    n = len(matrix)
    aug = []
    for i, row in enumerate(matrix):
        r = {("a", j): c for j, c in row.items() if c}
        r[("b", i)] = ONE
        aug.append(r)
    order = {("a", j): j for j in range(n)}
    order.update({("b", j): n + j for j in range(n)})
    ech = Echelon(order, cutoff, allowed=lambda k: k[0] == "a")
    for r in aug:
        ech.add(r)
    pivots = [p for p in ech.rows if p[0] == "a"]
    if len(pivots) != n:
        return None, ech.exact
    inv = []
    for j in range(n):
        row = ech.rows[("a", j)]
        inv.append({k[1]: c for k, c in row.items() if k[0] == "b"})
    return inv, ech.exact

