"""Bar construction and its continuous dual, plus the cobar construction.

Dual letters: the letter x dual to a generator X: a -> b is typed the other
way round, left(x) = b and right(x) = a, so a dual word y1...yk is composable
when right(y_j) = left(y_{j+1}).  The dual word y1...yk pairs with the bar
word X_{yk} ... X_{y1}.  Letter degree is |x|'' = 1 - |X|.
"""

from . import kernels
from .ainf import lc_add, relation_residual
from .scalar import ONE, ZERO, Novikov, ScalarParseError, join_signed, parse_novikov, split_top_level


class Alphabet:
    """Dual letters for the non-unit generators of a structure."""

    def __init__(self, s):
        self.s = s
        self.r = s.r
        letters = s.non_units()
        self.names = [g.name for g in letters]
        self.duals = [g.dual or g.name.lower() for g in letters]
        self.deg = [1 - g.degree for g in letters]
        self.left = [g.target for g in letters]
        self.right = [g.source for g in letters]
        self.of_gen = {n: i for i, n in enumerate(self.names)}
        self.of_dual = {n: i for i, n in enumerate(self.duals)}
        if len(self.of_dual) != len(self.duals):
            raise ValueError("dual letter names must be distinct")
        self._dgen = None
        self._coalg = None

    def __len__(self):
        return len(self.names)

    def word_key(self, word, vertex=None):
        word = tuple(word)
        if not word:
            return (vertex or 0, vertex or 0, ())
        for a, b in zip(word, word[1:]):
            if self.right[a] != self.left[b]:
                return None
        return (self.left[word[0]], self.right[word[-1]], word)

    def word_degree(self, word):
        return sum(self.deg[i] for i in word)

    def word_text(self, word):
        return ".".join(self.duals[i] for i in word)

    def parse_word(self, text):
        try:
            return tuple(self.of_dual[t.strip()] for t in text.split("."))
        except KeyError:
            return None

    def composable_words(self, n):
        """All composable words of length exactly n, in index order."""
        if n == 0:
            return [()]
        out = [(i,) for i in range(len(self))]
        for _ in range(n - 1):
            out = [w + (j,) for w in out for j in range(len(self)) if self.right[w[-1]] == self.left[j]]
        return out


def alphabet(s):
    a = getattr(s, "_alphabet", None)
    if a is None:
        a = Alphabet(s)
        s._alphabet = a
    return a


def order_key(A, key):
    s, e, w = key
    return (A.word_degree(w), len(w), s, w)


class DualSeries:
    """Element of the bounded dual (BV)^v: a truncated series in typed dual words."""

    __slots__ = ("A", "terms", "cutoff")

    def __init__(self, A, terms=None, cutoff=None):
        self.A = A
        self.cutoff = cutoff or A.s.cutoff
        self.terms = {}
        for k, c in (terms or {}).items():
            c = Novikov.coerce(c)
            if c:
                self.terms[k] = c

    @classmethod
    def _raw(cls, A, terms, cutoff):
        obj = cls.__new__(cls)
        obj.A, obj.terms, obj.cutoff = A, terms, cutoff
        return obj

    @classmethod
    def word(cls, A, word, c=ONE, vertex=None):
        key = A.word_key(word, vertex)
        if key is None:
            return cls(A)
        return cls(A, {key: c})

    @classmethod
    def letter(cls, A, i, c=ONE):
        return cls.word(A, (i,), c)

    @classmethod
    def const(cls, A, c, vertex=None):
        c = Novikov.coerce(c)
        vs = range(A.r) if vertex is None else [vertex]
        return cls(A, {(v, v, ()): c for v in vs})

    def _new(self, terms):
        return DualSeries._raw(self.A, terms, self.cutoff)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        acc = dict(self.terms)
        for k, c in other.terms.items():
            lc_add(acc, k, c)
        return self._new(acc)

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Novikov.coerce(c)
        out = {}
        for k, d in self.terms.items():
            e = d.mul(c, self.cutoff)
            if e:
                out[k] = e
        return self._new(out)

    def __mul__(self, other):
        if not isinstance(other, DualSeries):
            return self.scale(other)
        return self._new(kernels.concat_mul(self.terms, other.terms, self.cutoff.max_len, self.cutoff))

    def __eq__(self, other):
        if isinstance(other, DualSeries):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def truncate(self, max_len=None, cutoff=None):
        cut = cutoff or self.cutoff
        n = max_len if max_len is not None else cut.max_len
        out = {}
        for k, c in self.terms.items():
            if len(k[2]) <= n:
                c = c.truncate(cut)
                if c:
                    out[k] = c
        return self._new(out)

    def below_length(self, k):
        return self._new({key: c for key, c in self.terms.items() if len(key[2]) < k})

    def keys_sorted(self):
        return sorted(self.terms, key=lambda k: order_key(self.A, k))

    def degrees(self):
        return sorted({self.A.word_degree(k[2]) for k in self.terms})

    def homogeneous_part(self, d):
        return self._new({k: c for k, c in self.terms.items() if self.A.word_degree(k[2]) == d})

    def constant(self, vertex=0):
        return self.terms.get((vertex, vertex, ()), ZERO)

    def coefficient(self, word, vertex=0):
        key = self.A.word_key(word, vertex)
        return self.terms.get(key, ZERO) if key else ZERO

    def text(self):
        if not self.terms:
            return "0"
        parts = []
        for k in self.keys_sorted():
            c = self.terms[k]
            s, _, w = k
            if not w:
                ct = c.text()
                parts.append(ct if self.A.r == 1 else f"pi{s}{{{ct}}}")
                continue
            wt = self.A.word_text(w)
            if c == ONE:
                parts.append(wt)
            elif c == -ONE:
                parts.append("-" + wt)
            else:
                ct = c.text()
                if len(c.terms) > 1:
                    ct = f"({ct})"
                parts.append(f"{ct}*{wt}")
        return join_signed(parts)

    __str__ = text

    def __repr__(self):
        return f"DualSeries({self.text()!r})"


def parse_series(A, text, cutoff=None):
    """Parse the printed form of a DualSeries."""
    text = text.strip()
    out = DualSeries(A, cutoff=cutoff)
    if text == "0":
        return out
    acc = {}
    for term in split_top_level(text, brackets="({"):
        term = term.strip()
        if term.startswith("pi") and term.endswith("}") and "{" in term:
            v = int(term[2:term.index("{")])
            c = parse_novikov(term[term.index("{") + 1:-1])
            lc_add(acc, (v, v, ()), c)
            continue
        depth, star = 0, -1
        for i, ch in enumerate(term):
            depth += ch in "({"
            depth -= ch in ")}"
            if ch == "*" and depth == 0:
                star = i
        word = A.parse_word(term[star + 1:]) if star >= 0 else None
        if word is not None:
            c = parse_novikov(term[:star])
        else:
            body, sign = term, 1
            while body[:1] in ("-", "+"):
                sign = -sign if body[0] == "-" else sign
                body = body[1:].strip()
            word = A.parse_word(body)
            if word is None:
                c = parse_novikov(term)
                for v in range(A.r):
                    lc_add(acc, (v, v, ()), c)
                continue
            c = Novikov.const(sign)
        key = A.word_key(word)
        if key is None:
            raise ScalarParseError(f"word {term!r} is not composable")
        lc_add(acc, key, c)
    return DualSeries(A, acc, cutoff)


def exact_letters(f):
    """Rewrite f in the exact letters x~ = T^{-A(X)} x, so c x becomes c T^{A(X)} x~."""
    A = f.A
    acts = [A.s.by_name[n].action or 0 for n in A.names]
    return f._new({k: c.shift(sum(acts[i] for i in k[2])) for k, c in f.terms.items()})


def parity_twist(f):
    """phi(w) = (-1)^{|w|''} w, the automorphism relating d and the cobar differential."""
    A = f.A
    return f._new({k: (-c if A.word_degree(k[2]) % 2 else c) for k, c in f.terms.items()})


# ---------------------------------------------------------------- bar side


class BarElement:
    """Finite sum of bar words (tuples of letter indices in Floer order)."""

    __slots__ = ("A", "terms")

    def __init__(self, A, terms=None):
        self.A = A
        self.terms = {}
        for w, c in (terms or {}).items():
            c = Novikov.coerce(c)
            if c:
                self.terms[tuple(w)] = c

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, BarElement) and self.terms == other.terms

    def __add__(self, other):
        acc = dict(self.terms)
        for w, c in other.terms.items():
            lc_add(acc, w, c)
        return BarElement(self.A, acc)

    def text(self):
        if not self.terms:
            return "0"
        A = self.A
        ws = sorted(self.terms, key=lambda w: (len(w), w))
        return " + ".join(f"({self.terms[w].text()})*[{'|'.join(A.names[i] for i in w)}]" for w in ws)


def bar_composable(A, w):
    return all(A.left[a] == A.right[b] for a, b in zip(w, w[1:]))


def bar_codiff(s, b):
    """Codifferential on the reduced bar construction.

    Unit outputs are projected away.  Sign (-1)^{sum_{j<=i} |X_j|'} for a
    block starting after position i.
    """
    A = b.A
    cut = s.cutoff
    acc = {}
    for w, c in b.terms.items():
        n = len(w)
        names = tuple(A.names[i] for i in w)
        sign = 0
        for i in range(n):
            if i > 0:
                sign += s.by_name[names[i - 1]].degree - 1
            for l in range(1, n - i + 1):
                if l not in s.arities:
                    continue
                for y, d in s.op(names[i:i + l]).items():
                    j = A.of_gen.get(y)
                    if j is None:
                        continue
                    cc = c.mul(d, cut)
                    lc_add(acc, w[:i] + (j,) + w[i + l:], -cc if sign % 2 else cc)
    return BarElement(A, acc)


def bar_coprod(b):
    """Deconcatenation coproduct: {(left word, right word): coefficient}."""
    out = {}
    for w, c in b.terms.items():
        for i in range(len(w) + 1):
            lc_add(out, (w[:i], w[i:]), c)
    return out


# ---------------------------------------------------------------- dual differential


def dual_diff_generators(s):
    """d(x_i) for every letter, as DualSeries indexed by letter."""
    A = alphabet(s)
    if A._dgen is not None:
        return A._dgen
    F = [dict() for _ in range(len(A))]
    for key, out in s.table.items():
        if any(s.by_name[n].is_unit for n in key):
            continue
        word = tuple(A.of_gen[n] for n in reversed(key))
        wkey = A.word_key(word)
        for y, c in out.items():
            i = A.of_gen.get(y)
            if i is None or wkey is None:
                continue
            lc_add(F[i], wkey, c)
    res = []
    for i in range(len(A)):
        sgn = -1 if A.deg[i] % 2 else 1
        res.append(DualSeries(A, {k: (c if sgn > 0 else -c) for k, c in F[i].items()}))
    A._dgen = res
    return res


def dual_diff(s, f):
    """Differential on (BV)^v, extended from letters by the graded Leibniz rule."""
    A = alphabet(s)
    dg = [x.terms for x in dual_diff_generators(s)]
    cut = f.cutoff
    return f._new(kernels.leibniz(f.terms, dg, A.deg, cut.max_len, cut))


def dual_coalgebra(s):
    """Coproducts Delta_k(x_i) on the dual letters, read off the table independently."""
    A = alphabet(s)
    if A._coalg is not None:
        return A._coalg
    co = [dict() for _ in range(len(A))]
    for key, out in s.table.items():
        if any(s.by_name[n].is_unit for n in key):
            continue
        shifted = sum(s.by_name[n].degree - 1 for n in key)
        tensor = tuple(A.of_gen[n] for n in key[::-1])
        for y, c in out.items():
            i = A.of_gen.get(y)
            if i is None:
                continue
            lc_add(co[i], tensor, -c if shifted % 2 else c)
    A._coalg = co
    return co


def cobar_diff(s, f):
    """Cobar differential: delta(y1..yk) = sum_p (-1)^{sum_{j<p} |y_j|''} y1..Delta(y_p)..yk."""
    A = alphabet(s)
    co = dual_coalgebra(s)
    cut = f.cutoff
    acc = {}
    for (st, en, w), c in f.terms.items():
        sign = 0
        for p, letter in enumerate(w):
            for tensor, d in co[letter].items():
                nw = w[:p] + tensor + w[p + 1:]
                if len(nw) > cut.max_len or A.word_key(nw) is None:
                    continue
                cc = c.mul(d, cut)
                lc_add(acc, (st, en, nw), -cc if sign % 2 else cc)
            sign += A.deg[letter]
    return f._new(acc)


def cobar_agreement(s):
    """Letters x with delta(x) != phi(d(phi(x))); empty when the two routes agree."""
    A = alphabet(s)
    bad = []
    for i in range(len(A)):
        x = DualSeries.letter(A, i)
        if cobar_diff(s, x) != parity_twist(dual_diff(s, parity_twist(x))):
            bad.append(A.duals[i])
    return bad


# ---------------------------------------------------------------- pairing


def pairing(f, b):
    """<f, b>: the dual word y1..yk pairs with the bar word X_{yk}..X_{y1}."""
    tot = ZERO
    for (_, _, w), c in f.terms.items():
        d = b.terms.get(w[::-1])
        if d is not None:
            tot = tot + c * d
    return tot


def pairing_check(s, f, b):
    """Both sides of <df, b> = (-1)^{|f|} <f, d_bar b>, graded termwise."""
    lhs = pairing(dual_diff(s, f), b)
    db = bar_codiff(s, b)
    rhs = ZERO
    for d in f.degrees():
        part = pairing(f.homogeneous_part(d), db)
        rhs = rhs + (-part if d % 2 else part)
    return lhs, rhs


def _reliable(s, A, w, cache):
    """Whether the coefficient at w only involves products inside the stored window."""
    if not s.incomplete:
        return True
    names = tuple(A.names[i] for i in reversed(w))
    hit = cache.get(names)
    if hit is None:
        hit = cache[names] = relation_residual(s, names)[1]
    return hit


def d_squared_failures(s, max_len=None, exhaustive=False):
    """Dual words with d(d(w)) != 0, ignoring coefficients fed by out-of-window products.

    d^2 is a derivation, so by default it is checked on the letters at full
    length, which covers every word.  exhaustive=True walks all composable
    words of length <= max_len instead.
    """
    A = alphabet(s)
    if max_len is None:
        maxk = max(s.arities) if s.arities else 1
        max_len = s.cutoff.max_len - maxk
    if exhaustive:
        if s.incomplete:
            raise ValueError("exhaustive d^2 check needs a structure without window truncation")
        words = [w for n in range(1, max_len + 1) for w in A.composable_words(n)]
    else:
        words = A.composable_words(1)
    bad, cache = [], {}
    for w in words:
        dd = dual_diff(s, dual_diff(s, DualSeries.word(A, w)))
        if any(_reliable(s, A, k[2], cache) for k in dd.terms):
            bad.append(A.word_text(w))
    return bad


def dual_diff_table(s):
    """Printable d(x) for every letter."""
    A = alphabet(s)
    return [(A.duals[i], d.text()) for i, d in enumerate(dual_diff_generators(s))]


def series_degree(f):
    ds = f.degrees()
    if len(ds) != 1:
        raise ValueError("series is not homogeneous")
    return ds[0]

