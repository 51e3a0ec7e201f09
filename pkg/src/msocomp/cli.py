"""Command-line front end.

Exit codes: 0 success, 1 violated precondition or malformed input,
2 budget exhausted.  Output is collected first and printed only on
success, so a failing run never leaves partial canonical output.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import chains, composition, ordinals, theory, trees, uniformize
from .errors import BudgetExceeded, DomainError, ParseError
from .formula import dp, ordered_vars, parse, to_text
from .structure import FiniteStructure, parse_chain_file, parse_tree_file, points_of

DEFAULT_BUDGET = theory.DEFAULT_BUDGET


class Output:
    def __init__(self, as_json):
        self.as_json = as_json
        self.lines = []
        self.data = {}

    def line(self, text=""):
        self.lines.append(str(text))

    def put(self, key, value, text=None):
        self.data[key] = value
        if text is not None:
            self.lines.append(text)

    def render(self):
        if self.as_json:
            return json.dumps(self.data, indent=2, sort_keys=True) + "\n"
        return "".join(line + "\n" for line in self.lines)


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None


def _structure(args, allow_tree=True):
    given = [v for v in (args.chain, getattr(args, "tree", None), args.fin) if v is not None]
    if len(given) != 1:
        raise DomainError("give exactly one of --chain, --tree, --fin")
    if args.chain is not None:
        return parse_chain_file(_read(args.chain))
    if getattr(args, "tree", None) is not None:
        return parse_tree_file(_read(args.tree))
    if args.fin < 0:
        raise DomainError("--fin takes a natural number")
    return FiniteStructure.chain(args.fin)


def _add_structure_opts(p, tree=True):
    p.add_argument("--chain", help="chain file ('size N' then 'NAME: points')")
    if tree:
        p.add_argument("--tree", help="tree file ('id parent|-' lines then 'NAME: ids')")
    p.add_argument("--fin", type=int, help="the finite chain 0 < 1 < ... < N-1")


def _formula(args):
    if args.formula is None:
        raise DomainError("--formula is required")
    return parse(args.formula)


def _set_text(s, mask):
    return "{" + ",".join(str(s.labels[p]) for p in points_of(mask)) + "}"


# ------------------------------------------------------------ commands

def cmd_theory(args, out):
    s = _structure(args)
    names = args.vars.split(",") if args.vars else sorted(s.predicates)
    t = theory.eval_theory(s, names, args.n, budget=args.budget)
    out.put("theory", t.serialize(), t.serialize())


def cmd_decide(args, out):
    phi = _formula(args)
    n = dp(phi)
    if args.ordinal is not None:
        if any(v is not None for v in (args.chain, args.tree, args.fin)):
            raise DomainError("give either --ordinal or a structure, not both")
        free = ordered_vars(phi)
        if free:
            raise DomainError(f"ordinals carry no named sets; free variable(s) {', '.join(free)}")
        a = ordinals.parse_ordinal(args.ordinal)
        t = ordinals.theory_of_ordinal(a, n)
        got = theory.decide(phi, t, [])
    else:
        s = _structure(args)
        free = ordered_vars(phi)
        missing = [v for v in free if v not in s.predicates]
        if missing:
            raise DomainError(f"free variable(s) {', '.join(missing)} are not named sets")
        t = theory.eval_theory(s, free, n, budget=args.budget)
        got = theory.decide(phi, t, free)
    out.put("result", got, "true" if got else "false")


def _theory_arg(text):
    if text.startswith("@"):
        text = _read(text[1:]).strip()
    return theory.parse_theory(text)


def cmd_compose(args, out):
    ts = [_theory_arg(x) for x in args.theories]
    if args.period:
        if args.period > len(ts):
            raise DomainError("--period exceeds the number of theories")
        r = composition.omega_sum(ts[:-args.period], ts[-args.period:])
    else:
        if not ts:
            raise DomainError("nothing to compose")
        r = composition.sum_finite(ts)
    out.put("theory", r.serialize(), r.serialize())


def cmd_types(args, out):
    space = theory.enumerate_types(args.n, args.l, budget=args.budget)
    members = [t.serialize() for t in space.members()]
    out.put("count", len(members), f"count {len(members)}")
    out.put("members", members)
    if not args.count_only:
        for m in members:
            out.line(m)


def cmd_ordinal(args, out):
    op = args.op
    if op in ("add", "mul", "sub", "decompose"):
        if len(args.values) != 2:
            raise DomainError(f"ordinal {op} takes two ordinals")
        a, b = (ordinals.parse_ordinal(v) for v in args.values)
        if op == "add":
            r = str(a + b)
        elif op == "mul":
            r = str(a * b)
        elif op == "sub":
            r = str(ordinals.ord_left_sub(a, b))
        else:
            found = ordinals.decomposition_search(a, b, args.bound)
            if found is None:
                out.put("result", None, "none")
                return
            r = f"{found[0]} ; {found[1]}"
            out.put("gamma1", str(found[0]))
            out.put("gamma2", str(found[1]))
        out.put("result", r, r)
    elif op == "log":
        if len(args.values) != 1:
            raise DomainError("ordinal log takes one ordinal")
        r = ordinals.log_of(ordinals.parse_ordinal(args.values[0]))
        out.put("result", r, str(r))
    elif op == "parttype":
        if args.alpha is None or args.classes is None:
            raise DomainError("parttype needs --alpha and --classes")
        p = ordinals.IntervalPartition(ordinals.parse_ordinal(args.alpha),
                                       ordinals.parse_intervals(args.classes))
        r = str(ordinals.partition_order_type(p))
        out.put("result", r, r)


def cmd_wellorder_chain(args, out):
    t = chains.parse_term(args.term)
    cert = chains.synthesize_wellorder(t)
    rep = chains.verify_wellorder(cert, t, samples=args.samples, seed=args.seed)
    out.put("term", chains.show_term(t), f"term {chains.show_term(t)}")
    out.put("degree", cert.degree, f"degree {cert.degree}")
    out.put("params", [p.describe() for p in cert.params])
    for p in cert.params:
        out.line(f"param {p.describe()}")
    out.put("formula", cert.text, f"formula {cert.text}")
    out.put("verified", rep.passed, f"verified {'yes' if rep.passed else 'no'} on {rep.checked} pairs (seed {args.seed})")
    if not rep.passed:
        raise DomainError(f"verification failed: {rep.notes}")


def cmd_wellorder_tree(args, out):
    s = parse_tree_file(_read(args.tree))
    w = trees.a2_wellorder(s)
    lab = lambda v: s.labels[v]
    order = [lab(v) for v in w.order]
    out.put("order", order, "order " + " < ".join(map(str, order)))
    subs = {".".join(map(str, e)) or "<>": [lab(v) for v in w.sub_branch[e]] for e in w.gamma}
    out.put("sub_branches", subs)
    for e in w.gamma:
        key = ".".join(map(str, e)) or "<>"
        out.line(f"A[{key}] = {subs[key]} rep {lab(w.rep[e])} colour {w.colour[w.rep[e]]}")
    colours = [[lab(v) for v in c] for c in w.colour_sets]
    out.put("colour_sets", colours)
    for k, c in enumerate(colours):
        out.line(f"D{k} = {c}")
    prof = trees.tameness_profile(s)
    out.put("n_star", prof.n_star)
    out.put("k_star", prof.k_star, f"n* {prof.n_star} k* {prof.k_star}")


def cmd_uniformize(args, out):
    phi = _formula(args)
    if args.product:
        a, b = args.product
        u = uniformize.product_uniformize(phi, FiniteStructure.chain(a), FiniteStructure.chain(b),
                                          x=args.x, y=args.y)
    else:
        s = _structure(args)
        if s.kind == "tree":
            u = uniformize.tree_uniformize(phi, s, x=args.x, y=args.y)
        else:
            u = uniformize.lex_uniformize(phi, s, x=args.x, y=args.y)
    s = u.structure
    ys = list(range(s.full + 1))
    if args.sample is not None and args.sample < len(ys):
        ys = sorted(random.Random(args.seed).sample(ys, args.sample))
    rows = []
    for ym in ys:
        xm = u.select(ym)
        rows.append({"Y": _set_text(s, ym), "X": _set_text(s, xm)})
        out.line(f"{args.y}={_set_text(s, ym)} -> {args.x}={_set_text(s, xm)}")
    out.put("selections", rows)
    out.put("recipe", u.recipe, f"recipe {u.recipe}")
    if u.psi is not None:
        out.put("psi", to_text(u.psi), f"psi {to_text(u.psi)}")
    params = {k: _set_text(s, m) for k, m in sorted(u.params.items())}
    out.put("params", params)
    for k, v in params.items():
        out.line(f"param {k} = {v}")
    if args.verify:
        ok, checked, bad = u.verify()
        out.put("verified", ok, f"verified {'yes' if ok else 'no'} over {checked} sets")
        if not ok:
            raise DomainError(f"uniformizer verification failed at {bad}")


def _parse_coloring(text, sg):
    size = None
    table = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if size is None:
            if len(parts) != 2 or parts[0] != "size" or not parts[1].isdigit():
                raise ParseError("expected 'size N'", 1, lineno)
            size = int(parts[1])
            continue
        if len(parts) != 3 or not parts[0].isdigit() or not parts[1].isdigit():
            raise ParseError("expected 'i j colour'", 1, lineno)
        table[(int(parts[0]), int(parts[1]))] = parts[2]
    if size is None:
        raise ParseError("missing 'size N' line", 1, 1)
    missing = [(i, j) for i in range(size) for j in range(i + 1, size) if (i, j) not in table]
    if missing:
        raise DomainError(f"pair {missing[0]} has no colour")
    return composition.AdditiveColoring(size, table, sg)


def cmd_ramsey(args, out):
    sg = composition.FiniteSemigroup.parse(_read(args.semigroup))
    col = _parse_coloring(_read(args.coloring), sg)
    found = composition.additive_ramsey(col, args.size)
    if found is None:
        out.put("homogeneous", None, "none")
        return
    c = col(found[0], found[1]) if len(found) > 1 else None
    out.put("homogeneous", found, " ".join(map(str, found)))
    out.put("colour", c)
    if c is not None:
        e = composition.idempotent_power(c, sg)
        out.put("idempotent", c == e, f"colour {c} idempotent {'yes' if c == e else 'no'}")


def cmd_tower(args, out):
    if args.theory is not None:
        t = _theory_arg(args.theory)
    else:
        t = theory.eval_theory(_structure(args, allow_tree=False), (), args.n, budget=args.budget)
    rep = composition.omega_power_tower(t, args.depth, budget=args.budget)
    out.put("p", rep.p, f"p {rep.p if rep.p is not None else 'none'}")
    out.put("semigroup_size", rep.semigroup_size, f"semigroup size {rep.semigroup_size}")
    if rep.stable is not None:
        out.put("stable", rep.stable.serialize(), f"stable {rep.stable.serialize()}")
        out.put("idempotent", rep.idempotent, f"idempotent {'yes' if rep.idempotent else 'no'}")
    for note in rep.notes:
        out.line(f"note {note}")


# -------------------------------------------------------------- parser

def build_parser():
    # global options are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="JSON report instead of plain lines")
    common.add_argument("--budget", type=int, help="evaluation budget")
    p = argparse.ArgumentParser(prog="msocomp", parents=[common],
                                description="Composition method toolkit for monadic theories of chains and trees.")
    sub = p.add_subparsers(dest="command", required=True)
    _sub = sub.add_parser
    sub.add_parser = lambda *a, **k: _sub(*a, parents=[common], **k)

    q = sub.add_parser("theory", help="Th^n of a structure")
    _add_structure_opts(q)
    q.add_argument("-n", type=int, required=True)
    q.add_argument("--vars", help="comma separated named sets (default: all, sorted)")
    q.set_defaults(func=cmd_theory)

    q = sub.add_parser("decide", help="truth of a formula on a structure or ordinal")
    _add_structure_opts(q)
    q.add_argument("--ordinal")
    q.add_argument("--formula")
    q.set_defaults(func=cmd_decide)

    q = sub.add_parser("compose", help="sum of theories (or @file)")
    q.add_argument("theories", nargs="*")
    q.add_argument("--period", type=int, default=0,
                   help="treat the last K theories as an omega-repeated period")
    q.set_defaults(func=cmd_compose)

    q = sub.add_parser("types", help="formally possible theories")
    q.add_argument("-n", type=int, required=True)
    q.add_argument("-l", type=int, required=True)
    q.add_argument("--count-only", action="store_true")
    q.set_defaults(func=cmd_types)

    q = sub.add_parser("ordinal", help="ordinal arithmetic below w^w")
    q.add_argument("op", choices=["add", "mul", "sub", "parttype", "decompose", "log"])
    q.add_argument("values", nargs="*")
    q.add_argument("--alpha")
    q.add_argument("--classes")
    q.add_argument("--bound", type=int)
    q.set_defaults(func=cmd_ordinal)

    q = sub.add_parser("wellorder-chain", help="well-ordering formula for a chain term")
    q.add_argument("--term", required=True)
    q.add_argument("--samples", type=int, default=500)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_wellorder_chain)

    q = sub.add_parser("wellorder-tree", help="sub-branch well-order of a finite tree")
    q.add_argument("--tree", required=True)
    q.set_defaults(func=cmd_wellorder_tree)

    q = sub.add_parser("uniformize", help="select one X per Y")
    _add_structure_opts(q)
    q.add_argument("--product", type=int, nargs=2, metavar=("A", "B"))
    q.add_argument("--formula")
    q.add_argument("--x", default="X")
    q.add_argument("--y", default="Y")
    q.add_argument("--sample", type=int)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--verify", action="store_true")
    q.set_defaults(func=cmd_uniformize)

    q = sub.add_parser("ramsey", help="homogeneous set of an additive colouring")
    q.add_argument("--semigroup", required=True)
    q.add_argument("--coloring", required=True)
    q.add_argument("--size", type=int, required=True)
    q.set_defaults(func=cmd_ramsey)

    q = sub.add_parser("tower", help="omega-power stabilization report")
    q.add_argument("--theory")
    _add_structure_opts(q, tree=False)
    q.add_argument("-n", type=int, default=1)
    q.add_argument("--depth", type=int, default=6)
    q.set_defaults(func=cmd_tower)
    return p


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    # parent parsers share action objects, so defaults are filled in here
    args.json = getattr(args, "json", False)
    args.budget = getattr(args, "budget", DEFAULT_BUDGET)
    if args.budget <= 0:
        stderr.write("error: --budget must be positive\n")
        return 1
    out = Output(args.json)
    try:
        args.func(args, out)
    except BudgetExceeded as exc:
        stderr.write(f"budget exceeded: {exc}\n")
        return 2
    except (DomainError, ValueError) as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    stdout.write(out.render())
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
