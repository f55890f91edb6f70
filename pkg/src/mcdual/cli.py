"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails, 2 on usage or
parse errors.  Output is canonically ordered and does not depend on the
thread count or hash seed.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import examples as ex
from .ainf import (StructureError, augmentation_kernel, check_strict_augmentation,
                   rescale_to_exact, verify_ainf, verify_filtered_unital)
from .algfile import FormatError, dump_pair, dump_structure, load_pair, load_structure, split_names
from .barcobar import alphabet, cobar_agreement, d_squared_failures, dual_diff_table
from .fuzz import run_fuzz
from .koszul import augmentation, chart, kappa, madic_quotient, verify_kappa_hom
from .mcalg import complete, exp_substitute, mc_relations
from .scalar import EnergyCutoff, ScalarParseError


class UsageError(Exception):
    pass


class Report:
    """Ordered fields; text prints 'key: value' (or the bare value), JSON a mapping."""

    def __init__(self):
        self.fields = []
        self.failed = False

    def add(self, key, value, bare=False):
        self.fields.append((key, value, bare))

    def check(self, key, ok, detail=""):
        self.failed |= not ok
        self.add(key, ("pass" if ok else "FAIL") + (f" ({detail})" if detail else ""))

    def text(self):
        lines = []
        for key, value, bare in self.fields:
            if isinstance(value, list):
                if not bare:
                    lines.append(f"{key}:")
                lines.extend(("  " if not bare else "") + str(v) for v in value)
            elif bare:
                lines.append(str(value))
            else:
                lines.append(f"{key}: {value}")
        return "\n".join(lines) + "\n"

    def json(self):
        return json.dumps({k: v for k, v, _ in self.fields}, ensure_ascii=False, indent=2) + "\n"


# ---------------------------------------------------------------- loading


def _cutoff(args, base):
    energy = Fraction(args.max_energy) if args.max_energy is not None else base.energy
    max_len = args.max_len if args.max_len is not None else base.max_len
    return EnergyCutoff(energy, max_len)


def _load(path, args):
    """Load a .alg or .pair file and apply the cutoff flags."""
    try:
        if path.endswith(".pair"):
            obj = load_pair(path)
            cut = _cutoff(args, obj.V.cutoff)
            obj.W.cutoff = cut
            obj.V.cutoff = cut
            return "pair", obj
        obj = load_structure(path)
        obj.cutoff = _cutoff(args, obj.cutoff)
        return "alg", obj
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _structure(args, path, side=None):
    kind, obj = _load(path, args)
    if kind == "alg":
        return obj
    return obj.W if side == "W" else obj.V


# ---------------------------------------------------------------- commands


def _verify_structure(rep, s, label, args):
    prefix = f"{label} " if label else ""
    r = verify_ainf(s, maxlen=args.max_tuple, workers=args.threads)
    rep.failed |= not r.ok
    rep.add(f"{prefix}A∞ relations", r.summary().split(": ", 1)[1])
    for t, res in r.violations[:20]:
        rep.add(f"{prefix}violation {','.join(t)}", ", ".join(f"{y}: {c.text()}" for y, c in sorted(res.items())))
    probs = verify_filtered_unital(s)
    rep.check(f"{prefix}filtered unital", not probs, "; ".join(probs[:5]))
    probs = check_strict_augmentation(s)
    rep.check(f"{prefix}strict augmentation", not probs, "; ".join(probs[:5]))


def cmd_verify(args):
    kind, obj = _load(args.file, args)
    rep = Report()
    if kind == "alg":
        _verify_structure(rep, obj, "", args)
    else:
        _verify_structure(rep, obj.W, "W", args)
        _verify_structure(rep, obj.V, "V", args)
        k = verify_kappa_hom(obj, workers=args.threads)
        rep.check("kappa multiplicative", k.ok, f"pairs {k.checked}, skipped {k.skipped}")
    return rep


def cmd_bar(args):
    s = augmentation_kernel(_structure(args, args.file, args.side))
    rep = Report()
    rep.add("differential", [f"d({x}) = {t}" for x, t in dual_diff_table(s)])
    bad = d_squared_failures(s)
    rep.check("d^2 = 0", not bad, ", ".join(bad[:10]) if bad else f"letters {len(alphabet(s))}")
    bad = cobar_agreement(s)
    rep.check("cobar agreement", not bad, ", ".join(bad[:10]))
    return rep


def cmd_mc(args):
    kind, obj = _load(args.file, args)
    if kind == "pair":
        s = obj.V
        p = obj.presentation() if not args.exact else mc_relations(rescale_to_exact(s))
    else:
        s = rescale_to_exact(obj) if args.exact else obj
        p = mc_relations(s)
    if args.complete:
        p = complete(p)
    rep = Report()
    rep.add("presentation", p.text().splitlines(), bare=True)
    if args.exp:
        sp = exp_substitute(p, split_names(args.exp))
        rep.add("exponential relations", [f"{label}: {f.text()}" for label, f in sp.relations])
    return rep


def cmd_koszul(args):
    kind, pd = _load(args.pair, args)
    if kind != "pair":
        raise UsageError("koszul needs a .pair file")
    rep = Report()
    op = args.op
    if op == "augment":
        rep.add("augmentation", [f"{g.name}\t{augmentation(pd, g.name).text()}" for g in pd.W.gens])
    elif op == "kappa":
        if not args.arg:
            raise UsageError("--op kappa needs a W generator (or comma-separated tuple)")
        zs = split_names(args.arg)
        for z in zs:
            pd.W.gen(z)
        rep.add("kappa", kappa(pd, zs).text(), bare=True)
    elif op == "verify":
        k = verify_kappa_hom(pd, workers=args.threads)
        rep.check("kappa multiplicative", k.ok, f"pairs {k.checked}, skipped {k.skipped}")
        for pair, d in k.failures[:20]:
            rep.add(f"defect {','.join(pair)}", d.text())
    elif op == "madic":
        try:
            k = int(args.arg)
        except (TypeError, ValueError):
            raise UsageError("--op madic needs an integer k") from None
        m = madic_quotient(pd, k)
        rep.add("madic", m.text().splitlines(), bare=True)
        rep.failed |= not m.invertible
    elif op == "chart":
        return _chart_report(pd, args)
    return rep


def _chart_report(pd, args):
    ch = chart(pd)
    rep = Report()
    if args.format == "svg":
        rep.add("svg", ch.svg(), bare=True)
    elif args.format == "json":
        rep.add("chart", [{"coord": e.label, "eps": e.eps.text(),
                           "radius": None if e.radius is None else str(e.radius), "shape": e.shape}
                          for e in ch.entries])
    else:
        rep.add("tsv", ch.tsv().rstrip("\n"), bare=True)
    return rep


def cmd_chart(args):
    kind, pd = _load(args.pair, args)
    if kind != "pair":
        raise UsageError("chart needs a .pair file")
    return _chart_report(pd, args)


def cmd_examples(args):
    rep = Report()
    cut = EnergyCutoff(Fraction(args.max_energy or 10), args.max_len or 6)
    if args.emit:
        os.makedirs(args.emit, exist_ok=True)
        written = []
        for name in sorted(ex.REGISTRY):
            if args.name and name not in args.name:
                continue
            kind, obj = ex.build(name, cut)
            path = os.path.join(args.emit, f"{name}.{kind}")
            (dump_structure if kind == "alg" else dump_pair)(obj, path)
            written.append(path)
        rep.add("written", written)
    else:
        rep.add("datasets", [f"{n}\t{ex.REGISTRY[n][0]}\t{ex.REGISTRY[n][2]}" for n in sorted(ex.REGISTRY)])
    return rep


def cmd_fuzz(args):
    rows = run_fuzz(args.seed, args.count, args.max_tuple)
    rep = Report()
    disagree = [i for i, a, b in rows if a != b]
    valid = sum(1 for _, a, b in rows if not a and not b)
    rep.add("structures", str(len(rows)))
    rep.add("valid", str(valid))
    rep.check("oracle agreement", not disagree, ", ".join(map(str, disagree[:10])))
    return rep


# ---------------------------------------------------------------- entry point


def build_parser():
    p = argparse.ArgumentParser(prog="mcdual", description=__doc__.split("\n")[0])
    p.add_argument("--max-len", type=int, default=None, help="word-length cutoff N (default 6)")
    p.add_argument("--max-energy", default=None, help="energy cutoff E (default 10)")
    p.add_argument("--format", choices=["text", "json", "tsv", "svg"], default="text")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--max-tuple", type=int, default=5, help="longest input tuple in relation checks")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("verify", help="check A-inf relations and unit/augmentation axioms")
    s.add_argument("file")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("bar", help="dual differential with d^2 and cobar checks")
    s.add_argument("file")
    s.add_argument("--side", choices=["W", "V"], default="V", help="side of a .pair file")
    s.set_defaults(func=cmd_bar)

    s = sub.add_parser("mc", help="Maurer-Cartan presentation")
    s.add_argument("file")
    s.add_argument("--exact", action="store_true", help="use exact generators")
    s.add_argument("--complete", action="store_true", help="run bounded completion")
    s.add_argument("--exp", default=None, help="comma-separated divisor variables to exponentiate")
    s.set_defaults(func=cmd_mc)

    s = sub.add_parser("koszul", help="Koszul map computations on a pair")
    s.add_argument("--pair", required=True)
    s.add_argument("--op", required=True, choices=["augment", "kappa", "verify", "madic", "chart"])
    s.add_argument("arg", nargs="?")
    s.set_defaults(func=cmd_koszul)

    s = sub.add_parser("chart", help="chart radii (text formats or an SVG picture)")
    s.add_argument("--pair", required=True)
    s.set_defaults(func=cmd_chart)

    s = sub.add_parser("examples", help="list or emit the built-in datasets")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--list", action="store_true")
    g.add_argument("--emit", metavar="DIR")
    s.add_argument("--name", action="append", help="restrict --emit to these datasets")
    s.set_defaults(func=cmd_examples)

    s = sub.add_parser("fuzz", help="random structures against the brute-force oracle")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=100)
    s.set_defaults(func=cmd_fuzz)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be positive")
    try:
        rep = args.func(args)
    except (UsageError, FormatError, ScalarParseError, StructureError, KeyError) as e:
        msg = e.args[0] if e.args else str(e)
        print(f"mcdual: error: {msg}", file=sys.stderr)
        return 2
    out = rep.json() if args.format == "json" else rep.text()
    sys.stdout.write(out)
    return 1 if rep.failed else 0


if __name__ == "__main__":
    sys.exit(main())
