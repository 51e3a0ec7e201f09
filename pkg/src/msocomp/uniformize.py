"""Uniformization on finite structures: choosing one witness X for each Y
so that phi(X, Y) holds, by a recipe that does not depend on Y.

Three recipes are provided.  On a chain the lexicographically least
witness is selected and a defining formula psi is emitted.  On a product
chain (blocks of one chain indexed by another) the choice is made block by
block from block theories.  On a tree the choice runs down the sub-branch
decomposition of `trees.a2_wellorder`.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

from .composition import sum_finite
from .errors import DomainError
from .formula import (
    And, Atom, Exists, Forall, Implies, Not, Or, dp, ordered_vars, rename_free,
)
from .structure import FiniteStructure, points_of
from .theory import bit_empty, compile_formula, decide, eval_theory, reduce
from .trees import a2_wellorder, induced


# -------------------------------------------------------------- helpers

def _names(phi, s, x, y):
    params = sorted(s.predicates)
    for v in ordered_vars(phi):
        if v not in (x, y) and v not in s.predicates:
            raise DomainError(f"free variable {v} is neither {x}, {y} nor a named set of the structure")
    if x in s.predicates or y in s.predicates:
        raise DomainError(f"{x} and {y} must not be named sets of the structure")
    return params


def check_pu(phi, s: FiniteStructure, x="X", y="Y") -> bool:
    """Every Y has some X with phi(X, Y)."""
    return _first_failure(phi, s, x, y) is None


def _first_failure(phi, s, x, y):
    _names(phi, s, x, y)
    f = compile_formula(s, phi, [x, y])
    for ym in range(s.full + 1):
        if not any(f((xm, ym)) for xm in range(s.full + 1)):
            return ym
    return None


def _require_pu(phi, s, x, y):
    bad = _first_failure(phi, s, x, y)
    if bad is not None:
        raise DomainError(
            f"not potentially uniformizable: no {x} works for {y} = {sorted(points_of(bad))}")


def lex_key(mask, order):
    """Sort key: X before X' iff the first point (in `order`) where they
    differ lies in X."""
    return tuple(0 if mask >> p & 1 else 1 for p in order)


def _x_empty(t):
    base = reduce(t, 0) if t.level else t
    return base.payload >> bit_empty(t.arity - 1) & 1


def target_key(t):
    """Order on candidate theories: a nonempty X first, then by text."""
    return (1 if _x_empty(t) else 0, t.serialize())


@dataclass
class Uniformizer:
    phi: object
    structure: FiniteStructure
    x: str
    y: str
    selection: dict
    params: dict = field(default_factory=dict)
    psi: object = None
    certificate: dict = field(default_factory=dict)
    accepts: object = None
    recipe: str = ""

    def select(self, y_mask):
        return self.selection[y_mask]

    def verify(self):
        """For every Y: the selected X satisfies phi, and exactly one X is
        accepted (by psi or by the certificate check), namely the selected
        one.  Returns (passed, checked, counterexample)."""
        s = self.structure
        f = compile_formula(s, self.phi, [self.x, self.y])
        accept = self.accepts
        if self.psi is not None:
            g = compile_formula(s, self.psi, [self.x, self.y])
            accept = lambda ym, xm: g((xm, ym))
        checked = 0
        for ym in range(s.full + 1):
            xm = self.selection[ym]
            checked += 1
            if not f((xm, ym)):
                return False, checked, (ym, xm, "selection violates phi")
            if accept is not None:
                ok = [z for z in range(s.full + 1) if accept(ym, z)]
                if ok != [xm]:
                    return False, checked, (ym, xm, f"accepted sets {ok}")
        return True, checked, None


# ---------------------------------------------------------------- chains

def lexle_formula(a, b, fresh=("ZL", "WL")):
    """a is lexicographically at most b."""
    z, w = fresh
    same_below = Forall(w, Implies(
        Atom("lt", (w, z)),
        And(Implies(Atom("sub", (w, a)), Atom("sub", (w, b))),
            Implies(Atom("sub", (w, b)), Atom("sub", (w, a))))))
    first_diff = Exists(z, And(And(Atom("sing", (z,)), Atom("sub", (z, a))),
                               And(Not(Atom("sub", (z, b))), same_below)))
    return Or(Atom("eq", (a, b)), first_diff)


def _fresh(phi, base):
    taken = set(ordered_vars(phi))
    from .formula import bound_vars
    taken |= bound_vars(phi)
    name = base
    k = 0
    while name in taken:
        k += 1
        name = f"{base}{k}"
    return name


def uniformizing_formula(phi, x="X", y="Y"):
    """phi(X, Y) and every X' with phi(X', Y) is lexicographically >= X."""
    alt = _fresh(phi, "XALT")
    z = _fresh(phi, "ZL")
    w = _fresh(phi, "WL")
    return And(phi, Forall(alt, Implies(rename_free(phi, {x: alt}),
                                        lexle_formula(x, alt, (z, w)))))


def lex_uniformize(phi, c: FiniteStructure, x="X", y="Y", emit=True) -> Uniformizer:
    if c.kind != "chain":
        raise DomainError("lex_uniformize takes a chain")
    _require_pu(phi, c, x, y)
    f = compile_formula(c, phi, [x, y])
    order = list(range(c.size))
    cands = sorted(range(c.full + 1), key=lambda m: lex_key(m, order))
    sel = {}
    for ym in range(c.full + 1):
        sel[ym] = next(m for m in cands if f((m, ym)))
    psi = uniformizing_formula(phi, x, y) if emit else None
    return Uniformizer(phi, c, x, y, sel, dict(c.predicates), psi, recipe="lex")


# -------------------------------------------------------------- products

def _block_masks(mask, lo, size):
    return (mask >> lo) & ((1 << size) - 1)


def product_chain(c: FiniteStructure, d: FiniteStructure, predicates=None):
    if c.kind != "chain" or d.kind != "chain":
        raise DomainError("product_uniformize takes two chains")
    return FiniteStructure.chain(c.size * d.size, predicates or {})


def _lex_theory_witness(block, local_fixed, target, n, size):
    order = list(range(size))
    for xm in sorted(range(1 << size), key=lambda m: lex_key(m, order)):
        if eval_theory(block, local_fixed + (xm,), n) is target:
            return xm
    raise DomainError("internal: target theory is not realized in its block")


def product_uniformize(phi, c: FiniteStructure, d: FiniteStructure, predicates=None,
                       x="X", y="Y", fast=True) -> Uniformizer:
    """Blocks of shape c indexed by d.  For each Y: compute every block's
    theory Th^{n+1}(block; Q, Y), pick the least assignment of members
    (one achievable Th^n(block; Q, Y, X) per block) whose sum satisfies
    phi, then the lex-least X inside each block realizing its target.
    With fast=False the sum of the targets is formed and phi decided on
    it; otherwise phi is evaluated on a realization of the targets."""
    p = product_chain(c, d, predicates)
    params = _names(phi, p, x, y)
    _require_pu(phi, p, x, y)
    n = dp(phi)
    a, b = c.size, d.size
    block = FiniteStructure.chain(a)
    vars_ = params + [y, x]
    sel = {}
    certs = {}
    bth = functools.lru_cache(maxsize=None)(lambda masks, level: eval_theory(block, masks, level))
    least = functools.lru_cache(maxsize=None)(
        lambda fx, target: _lex_theory_witness(block, fx, target, n, a))
    truth = {}
    f = compile_formula(p, phi, [x, y])
    for ym in range(p.full + 1):
        fixed = [tuple(_block_masks(p.predicates[q], j * a, a) for q in params)
                 + (_block_masks(ym, j * a, a),) for j in range(b)]
        r0 = [bth(fixed[j], n + 1) for j in range(b)]

        def realize(combo, ym=ym, fixed=fixed):
            # phi on any realization of the targets; the composition theorem
            # makes this a function of the combo
            xm = sum(least(fixed[j], u) << (j * a) for j, u in enumerate(combo))
            return f((xm, ym))
        # realizations are Y-specific, so their cache is too; keeping it per Y
        # also keeps the swap test from reading answers back out of a cache
        targets = (choose_targets(phi, r0, vars_, n, {}, realize) if fast
                   else choose_targets(phi, r0, vars_, n, truth))
        if targets is None:
            raise DomainError("internal: no coherent block assignment although phi is p.u.")
        xm = 0
        for j in range(b):
            part = least(fixed[j], targets[j])
            xm |= part << (j * a)
        sel[ym] = xm
        certs[ym] = {"blocks": [t.serialize() for t in r0],
                     "targets": [t.serialize() for t in targets]}

    def accepts(ym, xm):
        cert = certs[ym]
        for j in range(b):
            fx = tuple(_block_masks(p.predicates[q], j * a, a) for q in params)
            fx += (_block_masks(ym, j * a, a),)
            part = _block_masks(xm, j * a, a)
            t = bth(fx + (part,), n)
            if t.serialize() != cert["targets"][j]:
                return False
            # part must be the lex-least set realizing its own theory
            if least(fx, t) != part:
                return False
        return True

    return Uniformizer(phi, p, x, y, sel, dict(p.predicates), None, certs, accepts, "product")


def choose_targets(phi, r0, vars_, n, truth=None, realize=None):
    """Least sequence (target_key, blockwise lexicographic) of members of
    the block theories whose sum decides phi true; a function of r0 only.
    `realize(combo)`, when given, replaces forming the sum."""
    truth = {} if truth is None else truth
    options = [sorted(t.payload, key=target_key) for t in r0]
    for combo in itertools.product(*options):
        if realize is not None:
            key = tuple(u.uid for u in combo)
            hit = truth.get(key)
            if hit is None:
                hit = truth[key] = realize(combo)
        else:
            total = sum_finite(combo)
            hit = truth.get(total)
            if hit is None:
                hit = truth[total] = decide(phi, total, vars_)
        if hit:
            return list(combo)
    return None


def swap_test(phi, c: FiniteStructure, d: FiniteStructure, predicates=None, x="X", y="Y"):
    """Change one block's Y-content to different content with the same
    block theory; the targets chosen by product_uniformize must not move.
    Returns (swaps_checked, failures)."""
    u = product_uniformize(phi, c, d, predicates, x, y)
    p = u.structure
    params = sorted(p.predicates)
    n = dp(phi)
    a, b = c.size, d.size
    block = FiniteStructure.chain(a)
    swaps = 0
    fails = []
    for ym in range(p.full + 1):
        base = u.certificate[ym]["targets"]
        for j in range(b):
            qs = tuple(_block_masks(p.predicates[q], j * a, a) for q in params)
            mine = _block_masks(ym, j * a, a)
            r0 = eval_theory(block, qs + (mine,), n + 1)
            for other in range(1 << a):
                if other == mine or eval_theory(block, qs + (other,), n + 1) is not r0:
                    continue
                swaps += 1
                y2 = (ym & ~(((1 << a) - 1) << (j * a))) | (other << (j * a))
                if u.certificate[y2]["targets"] != base:
                    fails.append((ym, y2))
    return swaps, fails


# ----------------------------------------------------------------- trees

class _Region:
    """One node eta of the decomposition: the sub-branch A_eta and the
    regions of the children of eta."""

    def __init__(self, t, wo, eta):
        self.eta = eta
        self.nodes = wo.region[eta]
        self.branch = wo.sub_branch[eta]
        self.children = [g for g in wo.gamma if len(g) == len(eta) + 1 and g[:-1] == eta]
        self.struct = induced(t, self.nodes, {})
        self.index = {v: i for i, v in enumerate(self.nodes)}

    def local(self, mask):
        return sum(1 << self.index[v] for v in points_of(mask) if v in self.index)


def tree_uniformize(phi, t: FiniteStructure, x="X", y="Y") -> Uniformizer:
    """Top down over the decomposition index: the root target is the least
    achievable Th^n(T; Q, Y, X) deciding phi true; at each index node the
    least jointly achievable pair (X on the sub-branch, targets of the
    child regions) for the inherited target is fixed.  The level is
    n = dp(phi); with the sub-branch part of X fixed, Th^n of a region is
    determined by Th^n of its child regions."""
    if t.kind != "tree":
        raise DomainError("tree_uniformize takes a tree")
    params = _names(phi, t, x, y)
    _require_pu(phi, t, x, y)
    n = dp(phi)
    wo = a2_wellorder(t)
    regions = {eta: _Region(t, wo, eta) for eta in wo.gamma}
    vars_ = params + [y, x]
    memo = {}

    def th(eta, ym, xm):
        r = regions[eta]
        key = (eta, r.local(ym), r.local(xm))
        got = memo.get(key)
        if got is None:
            masks = tuple(r.local(t.predicates[q]) for q in params) + (key[1], key[2])
            got = memo[key] = eval_theory(r.struct, masks, n)
        return got

    def subsets(nodes):
        for bits in range(1 << len(nodes)):
            yield sum(1 << v for k, v in enumerate(nodes) if bits >> k & 1)

    @functools.lru_cache(maxsize=None)
    def options(eta, ym, target):
        """Achievable (branch part, child targets) for the target, least first."""
        r = regions[eta]
        found = set()
        for xm in subsets(r.nodes):
            if th(eta, ym, xm) is not target:
                continue
            bpart = xm & sum(1 << v for v in r.branch)
            found.add((bpart, tuple(th(c, ym, xm) for c in r.children)))
        return sorted(found, key=lambda o: (lex_key(o[0], r.branch),
                                            tuple(target_key(u) for u in o[1])))

    @functools.lru_cache(maxsize=None)
    def root_target(ym):
        cands = {th((), ym, xm) for xm in subsets(regions[()].nodes)}
        good = sorted((u for u in cands if decide(phi, u, vars_)), key=target_key)
        return good[0]

    sel = {}
    certs = {}
    if t.size == 0:
        sel[0] = 0
        certs[0] = {}
    for ym in range(t.full + 1) if t.size else []:
        plan = {}
        xm = 0
        stack = [((), root_target(ym))]
        while stack:
            eta, target = stack.pop()
            bpart, kids = options(eta, ym, target)[0]
            plan[eta] = (target, bpart, kids)
            xm |= bpart
            for c, u in zip(regions[eta].children, kids):
                stack.append((c, u))
        sel[ym] = xm
        certs[ym] = {eta: (u.serialize(), sorted(points_of(bp))) for eta, (u, bp, _) in plan.items()}

    def accepts(ym, xm):
        if th((), ym, xm) is not root_target(ym):
            return False
        for eta in wo.gamma:
            r = regions[eta]
            mine = (xm & sum(1 << v for v in r.branch),
                    tuple(th(c, ym, xm) for c in r.children))
            if options(eta, ym, th(eta, ym, xm))[0] != mine:
                return False
        return True

    params_out = dict(t.predicates)
    for k, cls in enumerate(wo.colour_sets):
        params_out[f"D{k}"] = t.mask(cls)
    params_out["K"] = t.mask(wo.reps)
    u = Uniformizer(phi, t, x, y, sel, params_out, None, certs, accepts, "tree")
    u.wellorder = wo
    return u


def check_region_determination(phi, t: FiniteStructure, x="X", y="Y"):
    """Brute-force check that Th^n of every region is a function of the
    sub-branch part of X and the Th^n of the child regions, for all X, Y."""
    params = _names(phi, t, x, y)
    n = dp(phi)
    wo = a2_wellorder(t)
    for eta in wo.gamma:
        r = _Region(t, wo, eta)
        kids = [_Region(t, wo, c) for c in r.children]
        qs = [t.predicates[q] for q in params]
        for ym in range(t.full + 1):
            seen = {}
            for bits in range(1 << len(r.nodes)):
                xm = sum(1 << v for k, v in enumerate(r.nodes) if bits >> k & 1)

                def th(reg):
                    return eval_theory(reg.struct, tuple(reg.local(q) for q in qs)
                                       + (reg.local(ym), reg.local(xm)), n)
                key = (xm & sum(1 << v for v in r.branch), tuple(th(k) for k in kids))
                if seen.setdefault(key, th(r)) is not th(r):
                    return False
    return True
