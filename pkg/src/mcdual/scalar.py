"""Novikov-field scalars with rational exponents, truncated at an energy cutoff.

A `Novikov` value is a finite sum of terms ``c * T^e`` with exact rational
exponents and exact (rational or Gaussian-rational) coefficients.  A
`BaseScalar` is an r-tuple of Novikov values, one per orthogonal idempotent
of the semisimple base ring.
"""

import math
import re
from dataclasses import dataclass
from fractions import Fraction

VAL_INFINITY = math.inf


class ScalarParseError(ValueError):
    pass


@dataclass(frozen=True)
class EnergyCutoff:
    """Truncation window: drop T-exponents >= energy, words longer than max_len."""

    energy: Fraction = Fraction(10)
    max_len: int = 6

    def __post_init__(self):
        e = Fraction(self.energy)
        if e <= 0:
            raise ValueError("energy cutoff must be positive")
        if int(self.max_len) < 1:
            raise ValueError("max word length must be at least 1")
        object.__setattr__(self, "energy", e)
        object.__setattr__(self, "max_len", int(self.max_len))


DEFAULT_CUTOFF = EnergyCutoff()


class Gaussian:
    """Gaussian rational re + im*i.  Collapses to Fraction when im == 0."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def make(re, im):
        im = Fraction(im)
        if im == 0:
            return Fraction(re)
        return Gaussian(re, im)

    @staticmethod
    def _split(x):
        if isinstance(x, Gaussian):
            return x.re, x.im
        return Fraction(x), Fraction(0)

    def __add__(self, other):
        a, b = Gaussian._split(other)
        return Gaussian.make(self.re + a, self.im + b)

    __radd__ = __add__

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __sub__(self, other):
        a, b = Gaussian._split(other)
        return Gaussian.make(self.re - a, self.im - b)

    def __rsub__(self, other):
        a, b = Gaussian._split(other)
        return Gaussian.make(a - self.re, b - self.im)

    def __mul__(self, other):
        a, b = Gaussian._split(other)
        return Gaussian.make(self.re * a - self.im * b, self.re * b + self.im * a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = Gaussian._split(other)
        n = a * a + b * b
        if n == 0:
            raise ZeroDivisionError("Gaussian division by zero")
        return Gaussian.make((self.re * a + self.im * b) / n, (self.im * a - self.re * b) / n)

    def __rtruediv__(self, other):
        return Gaussian(*Gaussian._split(other)) / self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Gaussian)):
            a, b = Gaussian._split(other)
            return self.re == a and self.im == b
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"Gaussian({self.re}, {self.im})"

    def text(self):
        sign = "+" if self.im >= 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


def _coeff(c):
    if isinstance(c, Gaussian):
        return Gaussian.make(c.re, c.im)
    return Fraction(c)


def coeff_text(c):
    if isinstance(c, Gaussian):
        return c.text()
    return str(c)


class Novikov:
    """Finite Novikov series.  Terms are kept sorted by exponent, all nonzero."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        acc = {}
        for e, c in (terms.items() if isinstance(terms, dict) else terms):
            e = Fraction(e)
            acc[e] = acc.get(e, 0) + _coeff(c)
        self.terms = tuple(sorted((e, c) for e, c in acc.items() if c != 0))

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def const(cls, c):
        c = _coeff(c)
        return cls._raw(((Fraction(0), c),) if c != 0 else ())

    @classmethod
    def monomial(cls, c, e):
        c = _coeff(c)
        return cls._raw(((Fraction(e), c),) if c != 0 else ())

    @classmethod
    def coerce(cls, x):
        if isinstance(x, Novikov):
            return x
        if isinstance(x, str):
            return parse_novikov(x)
        return cls.const(x)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def val(self):
        return self.terms[0][0] if self.terms else VAL_INFINITY

    def leading(self):
        if not self.terms:
            raise ValueError("zero has no leading term")
        return self.terms[0]

    def constant_part(self):
        for e, c in self.terms:
            if e == 0:
                return c
        return Fraction(0)

    def __add__(self, other):
        if not isinstance(other, Novikov):
            other = Novikov.coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if len(self.terms) == 1 and len(other.terms) == 1:
            (e1, c1), (e2, c2) = self.terms[0], other.terms[0]
            if e1 == e2:
                c = c1 + c2
                return Novikov._raw(((e1, c),)) if c else ZERO
            return Novikov._raw(((e1, c1), (e2, c2)) if e1 < e2 else ((e2, c2), (e1, c1)))
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return Novikov._raw(tuple(sorted((e, c) for e, c in acc.items() if c != 0)))

    __radd__ = __add__

    def __neg__(self):
        return Novikov._raw(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        if not isinstance(other, Novikov):
            other = Novikov.coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return Novikov.coerce(other) - self

    def mul(self, other, cutoff=None):
        """Product, dropping exponents at or above cutoff.energy when given."""
        if not isinstance(other, Novikov):
            other = Novikov.coerce(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return ZERO
        bound = cutoff.energy if cutoff is not None else None
        if len(a) == 1 and len(b) == 1:
            (e1, c1), (e2, c2) = a[0], b[0]
            e = e2 if not e1 else (e1 if not e2 else e1 + e2)
            if bound is not None and e and e >= bound:
                return ZERO
            if c1 == 1:
                return other if e is e2 else Novikov._raw(((e, c2),))
            if c2 == 1:
                return self if e is e1 else Novikov._raw(((e, c1),))
            return Novikov._raw(((e, c1 * c2),))
        acc = {}
        for e1, c1 in a:
            for e2, c2 in b:
                e = e1 + e2
                if bound is not None and e >= bound:
                    continue
                acc[e] = acc.get(e, 0) + c1 * c2
        return Novikov._raw(tuple(sorted((e, c) for e, c in acc.items() if c != 0)))

    def __mul__(self, other):
        return self.mul(other)

    __rmul__ = __mul__

    def scale(self, c):
        c = _coeff(c)
        if c == 0:
            return ZERO
        return Novikov._raw(tuple((e, x * c) for e, x in self.terms))

    def shift(self, e):
        """Multiply by T^e."""
        e = Fraction(e)
        return Novikov._raw(tuple((x + e, c) for x, c in self.terms))

    def truncate(self, cutoff):
        bound = cutoff.energy
        return Novikov._raw(tuple(t for t in self.terms if t[0] < bound))

    def invert(self, cutoff=DEFAULT_CUTOFF):
        """Inverse via exact leading-term inversion plus a truncated geometric series.

        If the input is a monomial the result is exact.  Otherwise terms are
        kept while their exponent lies below -val(self) + cutoff.energy.
        """
        if not self.terms:
            raise ZeroDivisionError("Novikov zero is not invertible")
        e0, c0 = self.terms[0]
        lead_inv = Novikov._raw(((-e0, 1 / _coeff(c0)),))
        if len(self.terms) == 1:
            return lead_inv
        # self = c0 T^e0 (1 + u) with val(u) > 0
        u = (self * lead_inv) - ONE
        bound = EnergyCutoff(cutoff.energy)
        series = ONE
        power = ONE
        while True:
            power = power.mul(-u, bound)
            if not power:
                break
            series = series + power
        return series * lead_inv

    def __eq__(self, other):
        if isinstance(other, Novikov):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction, Gaussian)):
            return self.terms == Novikov.const(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return f"Novikov({self.text()!r})"

    def text(self):
        if not self.terms:
            return "0"
        return join_signed(_term_text(e, c) for e, c in self.terms)

    __str__ = text

    def is_monomial(self):
        return len(self.terms) == 1


def _term_text(e, c):
    if e == 0:
        return coeff_text(c)
    if c == 1:
        return f"T^({e})"
    if c == -1:
        return f"-T^({e})"
    return f"{coeff_text(c)}*T^({e})"


def join_signed(parts):
    """Join printed terms with ' + ', folding a leading minus into ' - '."""
    out = ""
    for i, p in enumerate(parts):
        if i == 0:
            out = p
        elif p.startswith("-") and not p.startswith("-("):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out


ZERO = Novikov._raw(())
ONE = Novikov._raw(((Fraction(0), Fraction(1)),))


def T(e=1):
    return Novikov.monomial(1, e)


def val(x):
    if isinstance(x, BaseScalar):
        return x.val()
    return Novikov.coerce(x).val()


def add(a, b):
    return a + b


def mul(a, b, cutoff=None):
    if isinstance(a, BaseScalar):
        return a.mul(b, cutoff)
    return Novikov.coerce(a).mul(b, cutoff)


def invert(a, cutoff=DEFAULT_CUTOFF):
    return a.invert(cutoff)


def membership(x):
    """Flags for the subsets Lambda_plus, Lambda_U, Lambda_0 containing x."""
    x = Novikov.coerce(x)
    if not x:
        return {"lambda_plus": True, "lambda_U": False, "lambda_zero": True}
    v = x.val()
    return {"lambda_plus": v > 0, "lambda_U": v == 0, "lambda_zero": v >= 0}


def classify(x):
    """Most specific class of x: zero, lambda_plus, lambda_U or general."""
    x = Novikov.coerce(x)
    if not x:
        return "zero"
    v = x.val()
    if v > 0:
        return "lambda_plus"
    if v == 0:
        return "lambda_U"
    return "general"


# ---------------------------------------------------------------- parsing

_RAT = r"-?\d+(?:/\d+)?"
_GAUSS_RE = re.compile(r"^\(\s*(" + _RAT + r")\s*([+-])\s*(\d+(?:/\d+)?)\s*i\s*\)$")
_RAT_RE = re.compile("^" + _RAT + "$")
_TPOW_RE = re.compile(r"^T(?:\^(?:\(\s*(" + _RAT + r")\s*\)|(" + _RAT + r")))?$")


def split_top_level(s, seps="+", brackets="({"):
    """Split s at top-level sign characters, keeping a '-' with the following term."""
    closing = {"(": ")", "{": "}"}
    close_set = {closing[b] for b in brackets}
    out, cur, depth = [], [], 0
    last = ""
    for ch in s:
        if ch in brackets:
            depth += 1
        elif ch in close_set:
            depth -= 1
        if depth == 0 and ch in "+-" and last not in ("", "+", "-", "*", "^", "("):
            out.append("".join(cur))
            cur = ["-"] if ch == "-" else []
            last = ch
            continue
        cur.append(ch)
        if not ch.isspace():
            last = ch
    out.append("".join(cur))
    parts = [p.strip() for p in out]
    if any(not p for p in parts):
        raise ScalarParseError(f"empty term in {s!r}")
    return parts


def parse_coeff(tok):
    tok = tok.strip()
    m = _GAUSS_RE.match(tok)
    if m:
        im = Fraction(m.group(3))
        return Gaussian.make(Fraction(m.group(1)), im if m.group(2) == "+" else -im)
    if _RAT_RE.match(tok):
        return Fraction(tok)
    raise ScalarParseError(f"bad coefficient {tok!r}")


def _parse_term(tok):
    tok = tok.strip()
    sign = 1
    while tok.startswith("-") or tok.startswith("+"):
        if tok[0] == "-":
            sign = -sign
        tok = tok[1:].strip()
    if not tok:
        raise ScalarParseError("dangling sign")
    if "*" in tok and not tok.startswith("("):
        ctext, ttext = tok.split("*", 1)
    elif tok.startswith("(") and ")*" in tok:
        idx = tok.index(")*")
        ctext, ttext = tok[: idx + 1], tok[idx + 2:]
    elif tok.startswith("T"):
        ctext, ttext = "1", tok
    else:
        ctext, ttext = tok, None
    c = parse_coeff(ctext) * sign
    if ttext is None:
        return Fraction(0), c
    m = _TPOW_RE.match(ttext.strip())
    if not m:
        raise ScalarParseError(f"bad T-power {ttext!r}")
    e = m.group(1) or m.group(2) or "1"
    return Fraction(e), c


def parse_novikov(s):
    s = s.strip()
    if not s:
        raise ScalarParseError("empty scalar")
    if s.startswith("(") and s.endswith(")") and not _GAUSS_RE.match(s) and _balanced(s[1:-1]):
        s = s[1:-1].strip()
    if s == "0":
        return ZERO
    return Novikov(_parse_term(t) for t in split_top_level(s))


def _balanced(s):
    depth = 0
    for ch in s:
        depth += ch in "({"
        depth -= ch in ")}"
        if depth < 0:
            return False
    return depth == 0


# ---------------------------------------------------------------- base ring


class BaseScalar:
    """Element of the semisimple ring k_Lambda = sum_i Lambda pi_i."""

    __slots__ = ("comps",)

    def __init__(self, comps):
        self.comps = tuple(Novikov.coerce(c) for c in comps)
        if not self.comps:
            raise ValueError("base ring needs at least one idempotent")

    @classmethod
    def diag(cls, x, r):
        x = Novikov.coerce(x)
        return cls([x] * r)

    @classmethod
    def idempotent(cls, i, r):
        return cls([ONE if j == i else ZERO for j in range(r)])

    @property
    def r(self):
        return len(self.comps)

    def _check(self, other):
        if not isinstance(other, BaseScalar):
            other = BaseScalar.diag(other, self.r)
        if other.r != self.r:
            raise ValueError("base rings of different rank")
        return other

    def __add__(self, other):
        other = self._check(other)
        return BaseScalar([a + b for a, b in zip(self.comps, other.comps)])

    __radd__ = __add__

    def __neg__(self):
        return BaseScalar([-a for a in self.comps])

    def __sub__(self, other):
        return self + (-self._check(other))

    def mul(self, other, cutoff=None):
        other = self._check(other)
        return BaseScalar([a.mul(b, cutoff) for a, b in zip(self.comps, other.comps)])

    def __mul__(self, other):
        return self.mul(other)

    __rmul__ = __mul__

    def component(self, i):
        return self.comps[i]

    def project(self, i):
        return BaseScalar([c if j == i else ZERO for j, c in enumerate(self.comps)])

    def val(self):
        return min(c.val() for c in self.comps)

    def is_zero(self):
        return all(not c for c in self.comps)

    def __bool__(self):
        return not self.is_zero()

    def invert(self, cutoff=DEFAULT_CUTOFF):
        if any(not c for c in self.comps):
            raise ZeroDivisionError("zero-divisor in the semisimple base ring")
        return BaseScalar([c.invert(cutoff) for c in self.comps])

    def truncate(self, cutoff):
        return BaseScalar([c.truncate(cutoff) for c in self.comps])

    def __eq__(self, other):
        if isinstance(other, BaseScalar):
            return self.comps == other.comps
        if isinstance(other, (int, Fraction, Gaussian, Novikov)):
            return self.comps == BaseScalar.diag(other, self.r).comps
        return NotImplemented

    def __hash__(self):
        return hash(self.comps)

    def __repr__(self):
        return f"BaseScalar({self.text()!r})"

    def text(self):
        if self.r == 1:
            return self.comps[0].text()
        parts = [f"pi{i}{{{c.text()}}}" for i, c in enumerate(self.comps) if c]
        return " + ".join(parts) if parts else "0"

    __str__ = text


_PI_RE = re.compile(r"^pi(\d+)\{(.*)\}$", re.S)


def parse_base(s, r):
    """Parse a base-ring scalar.  Untagged text is read diagonally."""
    s = s.strip()
    if "pi" not in s:
        return BaseScalar.diag(parse_novikov(s), r)
    comps = [ZERO] * r
    if s == "0":
        return BaseScalar(comps)
    for part in split_top_level(s, brackets="{("):
        m = _PI_RE.match(part.strip())
        if not m:
            raise ScalarParseError(f"bad idempotent component {part!r}")
        i = int(m.group(1))
        if i >= r:
            raise ScalarParseError(f"idempotent pi{i} out of range for r={r}")
        comps[i] = comps[i] + parse_novikov(m.group(2))
    return BaseScalar(comps)
