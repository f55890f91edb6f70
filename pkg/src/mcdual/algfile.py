"""Text formats for A-inf structures (.alg) and Koszul pairs (.pair).

Both formats are line based with ``[section]`` headers and ``#`` comments.
Printing is canonical, so parse(print(x)) == x and print(parse(text)) is a
fixed point.
"""

import re
from fractions import Fraction

from .ainf import AInfStructure, Generator, StructureError
from .scalar import EnergyCutoff, parse_base, split_top_level

_OP_RE = re.compile(r"^m(\d+)\((.*)\)\s*=\s*(.*?)\s*(\[synthetic\])?$")
_KEY_RE = re.compile(r"^m(\d+)\((.*)\)$")


class FormatError(ValueError):
    pass


def split_names(s):
    """Split a comma-separated name list at top level (names may contain (a,b))."""
    s = s.strip()
    if not s:
        return ()
    out, cur, depth = [], [], 0
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
            continue
        cur.append(ch)
    out.append("".join(cur).strip())
    if any(not x for x in out):
        raise FormatError(f"empty name in {s!r}")
    return tuple(out)


def _sections(text):
    secs = []
    cur = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        line = line.strip()
        if line.startswith("[") and line.endswith("]") and " " not in line:
            cur = (line[1:-1], [])
            secs.append(cur)
            continue
        if cur is None:
            raise FormatError(f"line {lineno}: content before any section")
        cur[1].append((lineno, line))
    return secs


def _kv(lines):
    out = {}
    for lineno, line in lines:
        if "=" not in line:
            raise FormatError(f"line {lineno}: expected key = value")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def parse_lincomb(text, r, known):
    """Parse 'c1*A + c2*B'.  Coefficients are read as base-ring scalars."""
    text = text.strip()
    if text == "0":
        return {}
    out = {}
    for term in split_top_level(text, brackets="({"):
        term = term.strip()
        name, coeff = None, None
        depth = 0
        star = -1
        for i, ch in enumerate(term):
            depth += ch in "({"
            depth -= ch in ")}"
            if ch == "*" and depth == 0:
                star = i
        if star >= 0 and term[star + 1:].strip() in known:
            coeff, name = term[:star], term[star + 1:].strip()
        else:
            sign = ""
            body = term
            while body.startswith("-") or body.startswith("+"):
                sign = "-" if (body[0] == "-") != (sign == "-") else ""
                body = body[1:].strip()
            if body not in known:
                raise FormatError(f"unknown generator in term {term!r}")
            coeff, name = f"{sign}1", body
        c = parse_base(coeff, r)
        if name in out:
            out[name] = out[name] + c
        else:
            out[name] = c
    return out


def _gen_line(lineno, line):
    parts = line.split()
    if len(parts) < 2:
        raise FormatError(f"line {lineno}: generator needs name and degree")
    name = parts[0]
    try:
        deg = int(parts[1])
    except ValueError:
        raise FormatError(f"line {lineno}: bad degree {parts[1]!r}") from None
    kw = dict(valuation=Fraction(0), source=0, target=0, is_unit=False, action=None,
              dual=None, divisor=False)
    for p in parts[2:]:
        if p == "unit":
            kw["is_unit"] = True
        elif p == "divisor":
            kw["divisor"] = True
        elif "=" in p:
            k, v = p.split("=", 1)
            if k == "val":
                kw["valuation"] = Fraction(v)
            elif k == "src":
                kw["source"] = int(v)
            elif k == "tgt":
                kw["target"] = int(v)
            elif k == "action":
                kw["action"] = Fraction(v)
            elif k == "dual":
                kw["dual"] = v
            else:
                raise FormatError(f"line {lineno}: unknown generator field {k!r}")
        else:
            raise FormatError(f"line {lineno}: unknown generator flag {p!r}")
    return Generator(name, deg, **kw)


def parse_structure_sections(secs, prefix=""):
    get = {name[len(prefix):]: lines for name, lines in secs if name.startswith(prefix)}
    ring = _kv(get.get("ring", []))
    r = int(ring.get("r", 1))
    cutoff = EnergyCutoff(Fraction(ring.get("energy", 10)), int(ring.get("max_len", 6)))
    gens = [_gen_line(n, l) for n, l in get.get("generators", [])]
    known = {g.name for g in gens}
    table, synthetic = {}, set()
    for lineno, line in get.get("ops", []):
        m = _OP_RE.match(line)
        if not m:
            raise FormatError(f"line {lineno}: bad operation line")
        k = int(m.group(1))
        key = split_names(m.group(2))
        if len(key) != k:
            raise FormatError(f"line {lineno}: m{k} with {len(key)} inputs")
        for n in key:
            if n not in known:
                raise FormatError(f"line {lineno}: unknown generator {n!r}")
        try:
            out = parse_lincomb(m.group(3), r, known)
        except ValueError as e:
            raise FormatError(f"line {lineno}: {e}") from None
        if key in table:
            raise FormatError(f"line {lineno}: duplicate entry for m{k}{key}")
        table[key] = out
        if m.group(4):
            synthetic.add(key)
    aug = None
    if "augmentation" in get:
        aug = {}
        src = {g.name: g.source for g in gens}
        for lineno, line in get["augmentation"]:
            k, v = line.split("=", 1)
            g = k.strip()
            if g not in known:
                raise FormatError(f"line {lineno}: unknown generator {g!r}")
            aug[g] = parse_base(v, r).component(src[g])
    incomplete = set()
    for lineno, line in get.get("incomplete", []):
        m = _KEY_RE.match(line)
        if not m:
            raise FormatError(f"line {lineno}: bad incomplete entry")
        incomplete.add(split_names(m.group(2)))
    try:
        return AInfStructure(gens, table, r=r, cutoff=cutoff, augmentation=aug,
                             incomplete=incomplete, synthetic=synthetic,
                             name=ring.get("name", ""), basis=ring.get("basis", "geometric"))
    except StructureError as e:
        raise FormatError(str(e)) from None


def parse_structure(text):
    return parse_structure_sections(_sections(text))


def load_structure(path):
    with open(path, encoding="utf-8") as fh:
        return parse_structure(fh.read())


def _key_sort(s):
    return lambda key: (len(key), tuple(s.index[n] for n in key))


def _coeff_term(c, name):
    t = c.text()
    if len(c.terms) > 1:
        t = f"({t})"
    return f"{t}*{name}"


def format_structure(s, prefix=""):
    lines = [f"[{prefix}ring]", f"name = {s.name}" if s.name else None, f"r = {s.r}",
             f"basis = {s.basis}", f"energy = {s.cutoff.energy}", f"max_len = {s.cutoff.max_len}",
             f"[{prefix}generators]"]
    lines = [x for x in lines if x is not None]
    for g in s.gens:
        fields = [g.name, str(g.degree), f"val={g.valuation}", f"src={g.source}", f"tgt={g.target}"]
        if g.action is not None:
            fields.append(f"action={g.action}")
        if g.dual:
            fields.append(f"dual={g.dual}")
        if g.is_unit:
            fields.append("unit")
        if g.divisor:
            fields.append("divisor")
        lines.append(" ".join(fields))
    lines.append(f"[{prefix}ops]")
    for key in sorted(s.table, key=_key_sort(s)):
        out = s.table[key]
        rhs = " + ".join(_coeff_term(out[y], y) for y in sorted(out, key=s.index.get))
        tag = "  [synthetic]" if key in s.synthetic else ""
        lines.append(f"m{len(key)}({','.join(key)}) = {rhs}{tag}")
    if s.augmentation is not None:
        lines.append(f"[{prefix}augmentation]")
        for n in sorted(s.augmentation, key=s.index.get):
            lines.append(f"{n} = {s.augmentation[n].text()}")
    if s.incomplete:
        lines.append(f"[{prefix}incomplete]")
        for key in sorted(s.incomplete, key=_key_sort(s)):
            lines.append(f"m{len(key)}({','.join(key)})")
    return "\n".join(lines) + "\n"


def dump_structure(s, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_structure(s))


# ---------------------------------------------------------------- pairs

_MOD_RE = re.compile(r"^m\((.*)\)\s*=\s*(.*?)\s*(\[synthetic\])?$")
_CORR_RE = re.compile(r"^(qp|pq)\((.*)\)\s*=\s*(.*)$")


def _split_semis(s, n, lineno):
    parts = s.split(";")
    if len(parts) != n:
        raise FormatError(f"line {lineno}: expected {n} ';'-separated groups")
    return [split_names(p) for p in parts]


def parse_pair(text):
    from .koszul import PairData

    secs = _sections(text)
    get = {name: lines for name, lines in secs}
    meta = _kv(get.get("pair", []))
    W = parse_structure_sections(secs, "W.")
    V = parse_structure_sections(secs, "V.")
    pnames = split_names(meta.get("P", "P"))
    module, synthetic = {}, set()
    for lineno, line in get.get("module", []):
        m = _MOD_RE.match(line)
        if not m:
            raise FormatError(f"line {lineno}: bad module line")
        zs, ps, xs = _split_semis(m.group(1), 3, lineno)
        if len(ps) != 1 or ps[0] not in pnames:
            raise FormatError(f"line {lineno}: unknown connecting generator {ps!r}")
        c = parse_base(m.group(2), 1).component(0)
        module[(zs, xs)] = c
        if m.group(3):
            synthetic.add((zs, xs))
        if ps[0] != pnames[W.gen(zs[-1]).target if zs else 0]:
            raise FormatError(f"line {lineno}: connecting generator does not match typing")
    corr = None
    if "correction" in get:
        corr = {"Q": None, "QP": {}, "PQ": {}}
        for lineno, line in get["correction"]:
            if line.startswith("Q"):
                corr["Q"] = line.split("=", 1)[1].strip()
                continue
            m = _CORR_RE.match(line)
            if not m:
                raise FormatError(f"line {lineno}: bad correction line")
            head, xs = _split_semis(m.group(2), 2, lineno)
            corr[m.group(1).upper()][xs] = parse_base(m.group(3), 1).component(0)
    wknown = set(W.by_name)
    ideal = [{k: v.component(0) for k, v in parse_lincomb(l, 1, wknown).items()}
             for _, l in get.get("ideal", [])]
    chart = {}
    for lineno, line in get.get("chart", []):
        k, v = line.split("=", 1)
        chart[k.strip()] = {a: b.component(0) for a, b in parse_lincomb(v, 1, wknown).items()}
    try:
        return PairData(W=W, V=V, P=pnames, module=module, ideal_gens=ideal,
                        chart_coords=chart, correction=corr, name=meta.get("name", ""),
                        synthetic=synthetic,
                        precision=int(meta["precision"]) if "precision" in meta else None)
    except StructureError as e:
        raise FormatError(str(e)) from None


def load_pair(path):
    with open(path, encoding="utf-8") as fh:
        return parse_pair(fh.read())


def _w_lincomb(W, lc):
    if not lc:
        return "0"
    return " + ".join(_coeff_term(lc[n], n) for n in sorted(lc, key=W.index.get))


def format_pair(pd):
    W, V = pd.W, pd.V
    out = ["[pair]"]
    if pd.name:
        out.append(f"name = {pd.name}")
    out.append(f"P = {','.join(pd.P)}")
    if pd.precision is not None:
        out.append(f"precision = {pd.precision}")
    text = "\n".join(out) + "\n" + format_structure(W, "W.") + format_structure(V, "V.")
    lines = ["[module]"]

    def mkey(k):
        zs, xs = k
        return (len(zs), [W.index[z] for z in zs], len(xs), [V.index[x] for x in xs])

    for k in sorted(pd.module, key=mkey):
        zs, xs = k
        c = pd.module[k]
        p = pd.P[W.gen(zs[-1]).target]
        tag = "  [synthetic]" if k in pd.synthetic else ""
        lines.append(f"m({','.join(zs)};{p};{','.join(xs)}) = {c.text()}{tag}")
    if pd.correction:
        lines.append("[correction]")
        lines.append(f"Q = {pd.correction['Q']}")
        for kind in ("QP", "PQ"):
            head = pd.correction["Q"] if kind == "QP" else pd.P[0]
            for xs in sorted(pd.correction[kind], key=lambda x: (len(x), [V.index[n] for n in x])):
                lines.append(f"{kind.lower()}({head};{','.join(xs)}) = {pd.correction[kind][xs].text()}")
    if pd.ideal_gens:
        lines.append("[ideal]")
        lines.extend(_w_lincomb(W, g) for g in pd.ideal_gens)
    if pd.chart_coords:
        lines.append("[chart]")
        for label in pd.chart_coords:
            lines.append(f"{label} = {_w_lincomb(W, pd.chart_coords[label])}")
    return text + "\n".join(lines) + "\n"


def dump_pair(pd, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_pair(pd))
