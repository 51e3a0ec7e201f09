"""Finite trees: ordered sums, branch decompositions, the two
equivalences relative to a sub-branch, tameness parameters, a definable
well-ordering built from a partition into sub-branches, and an
experiment on what determines the theory of a tree.

Trees are FiniteStructure objects of kind "tree"; nodes are 0..N-1 and
`labels` keeps the ids of the input.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field

from .composition import add
from .errors import DomainError
from .structure import FiniteStructure, points_of
from .theory import eval_theory


# ------------------------------------------------------------- helpers

def children_of(t: FiniteStructure):
    kids = [[] for _ in range(t.size)]
    for v, p in enumerate(t.parents):
        if p is not None:
            kids[p].append(v)
    return kids


def roots_of(t: FiniteStructure, nodes=None):
    nodes = range(t.size) if nodes is None else nodes
    nodes = set(nodes)
    return sorted(v for v in nodes if t.parents[v] is None or t.parents[v] not in nodes)


def comparable(t, a, b):
    return a == b or t.less(a, b) or t.less(b, a)


def is_chain(t, nodes):
    nodes = list(nodes)
    return all(comparable(t, a, b) for a, b in itertools.combinations(nodes, 2))


def branches(t: FiniteStructure):
    """All maximal chains: root-to-leaf paths, listed in lex order of ids."""
    kids = children_of(t)
    out = []

    def walk(v, path):
        path = path + [v]
        if not kids[v]:
            out.append(path)
        for c in kids[v]:
            walk(c, path)

    for r in roots_of(t):
        walk(r, [])
    return sorted(out)


def induced(t: FiniteStructure, nodes, predicates=None):
    """Subtree on a node set with the induced order, renumbered in order."""
    nodes = sorted(nodes)
    index = {v: i for i, v in enumerate(nodes)}
    parents = []
    for v in nodes:
        p = t.parents[v]
        while p is not None and p not in index:
            p = t.parents[p]
        parents.append(None if p is None else index[p])
    preds = {}
    for name, mask in (predicates if predicates is not None else t.predicates).items():
        preds[name] = sum(1 << index[v] for v in points_of(mask) if v in index)
    return FiniteStructure.tree(parents, preds, labels=[t.labels[v] for v in nodes])


# ------------------------------------------------------------ tree sums

def tree_sum(parts):
    """Ordered sum: the root of an earlier part lies below every node of
    each later part; parts with several roots only sit side by side."""
    labels = []
    parents = []
    preds = {}
    last_root = None
    seen = set()
    for part in parts:
        if part.kind != "tree":
            raise DomainError("tree_sum takes trees")
        offset = len(labels)
        for lab in part.labels:
            if lab in seen:
                raise DomainError(f"node name {lab} occurs in two parts")
            seen.add(lab)
        labels.extend(part.labels)
        for v, p in enumerate(part.parents):
            parents.append(offset + p if p is not None else last_root)
        for name, mask in part.predicates.items():
            preds[name] = preds.get(name, 0) | (mask << offset)
        rs = roots_of(part)
        if len(rs) == 1:
            last_root = offset + rs[0]
    return FiniteStructure.tree(parents, preds, labels=labels)


def same_shape_by_labels(a: FiniteStructure, b: FiniteStructure):
    """True if the label-preserving bijection is an isomorphism."""
    if sorted(a.labels) != sorted(b.labels):
        return False
    ia = {lab: i for i, lab in enumerate(a.labels)}
    ib = {lab: i for i, lab in enumerate(b.labels)}
    for x in a.labels:
        for y in a.labels:
            if a.less(ia[x], ia[y]) != b.less(ib[x], ib[y]):
                return False
    return True


def canonical_form(t: FiniteStructure, nodes=None):
    """Isomorphism invariant string of a forest (order and predicates)."""
    kids = children_of(t)
    nodes = set(range(t.size)) if nodes is None else set(nodes)
    names = sorted(t.predicates)

    def enc(v):
        mark = "".join("1" if t.predicates[n] >> v & 1 else "0" for n in names)
        return "(" + mark + "".join(sorted(enc(c) for c in kids[v] if c in nodes)) + ")"

    return "".join(sorted(enc(r) for r in roots_of(t, nodes)))


def all_rooted_trees(max_nodes, min_nodes=1):
    """One parent list per isomorphism type, nodes in preorder."""
    out = []
    for n in range(min_nodes, max_nodes + 1):
        seen = {}
        if n == 0:
            out.append([])
            continue
        for choice in itertools.product(*[range(i) for i in range(1, n)]):
            parents = [None] + list(choice)
            t = FiniteStructure.tree(parents)
            key = canonical_form(t)
            if key not in seen:
                seen[key] = _preorder(t)
        out.extend(seen[k] for k in sorted(seen))
    return out


def _preorder(t):
    kids = children_of(t)
    order = []

    def walk(v):
        order.append(v)
        for c in sorted(kids[v], key=lambda c: canonical_form(t, _subtree(kids, c))):
            walk(c)

    for r in roots_of(t):
        walk(r)
    index = {v: i for i, v in enumerate(order)}
    return [None if t.parents[v] is None else index[t.parents[v]] for v in order]


def _subtree(kids, v):
    out = [v]
    for c in kids[v]:
        out.extend(_subtree(kids, c))
    return out


# --------------------------------------------------- cut decomposition

@dataclass
class CutDecomposition:
    tree: FiniteStructure
    branch: list
    cut_of: dict
    parts: dict
    branch_complement: list = field(default_factory=list)

    def reconstruct(self):
        return tree_sum([induced(self.tree, self.parts[e]) for e in self.branch])


def _check_branch(t, branch):
    b = list(branch)
    if not b or len(set(b)) != len(b):
        raise DomainError("a branch is a nonempty set of distinct nodes")
    if not is_chain(t, b):
        raise DomainError("the given set is not a chain")
    b.sort(key=lambda v: bin(t.below[v]).count("1"))
    if b not in branches(t):
        raise DomainError("the given chain is not a maximal chain")
    return b


def cut_decomposition(t: FiniteStructure, branch) -> CutDecomposition:
    """Split T along a branch B: T_eta holds the nodes whose deepest
    ancestor-or-self on B is eta.  The tree must have a single root."""
    if len(roots_of(t)) != 1:
        raise DomainError("cut decomposition needs a tree with one root")
    b = _check_branch(t, branch)
    cut = {}
    for v in range(t.size):
        on = [e for e in b if e == v or t.less(e, v)]
        cut[v] = on[-1]
    parts = {e: sorted(v for v in range(t.size) if cut[v] == e) for e in b}
    return CutDecomposition(t, b, cut, parts)


# -------------------------------------------------- relative equivalences

def sim_classes(t: FiniteStructure, a, level: int):
    """Partition of T minus A: level 0 groups nodes by the set of their
    A-ancestors; level 1 splits those groups into comparability components."""
    a = set(a)
    if not is_chain(t, a):
        raise DomainError("A must be a chain")
    if level not in (0, 1):
        raise DomainError("level is 0 or 1")
    groups = {}
    for v in range(t.size):
        if v in a:
            continue
        key = frozenset(x for x in a if t.less(x, v))
        groups.setdefault(key, []).append(v)
    classes = list(groups.values())
    if level == 1:
        classes = [c for g in classes for c in _components(t, g)]
    return sorted(sorted(c) for c in classes)


def _components(t, nodes):
    parent = {v: v for v in nodes}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for x, y in itertools.combinations(nodes, 2):
        if t.less(x, y) or t.less(y, x):
            parent[find(x)] = find(y)
    out = {}
    for v in nodes:
        out.setdefault(find(v), []).append(v)
    return list(out.values())


@dataclass
class TamenessProfile:
    n_star: int
    k_star: int


def tameness_profile(t: FiniteStructure) -> TamenessProfile:
    """n*: most level-1 classes inside one level-0 class, over all
    nonempty downward closed chains; k*: largest degree of a branch."""
    best = 0
    for br in branches(t):
        for m in range(1, len(br) + 1):
            a = br[:m]
            zero = sim_classes(t, a, 0)
            for cls in zero:
                best = max(best, len(_components(t, cls)))
    k = max((0 if len(br) <= 1 else 1 for br in branches(t)), default=0)
    return TamenessProfile(best, k)


# ---------------------------------------------------- sub-branch order

@dataclass
class TreeWellOrder:
    tree: FiniteStructure
    gamma: list
    region: dict
    sub_branch: dict
    rep: dict
    colour: dict
    cut_position: dict
    order: list
    owner: dict
    n_star: int

    @property
    def colour_sets(self):
        out = {}
        for v, c in self.colour.items():
            out.setdefault(c, set()).add(v)
        return [sorted(out[c]) for c in sorted(out)]

    @property
    def reps(self):
        return sorted(self.rep.values())

    def position(self, v):
        return self._pos[v]

    def __post_init__(self):
        self._pos = {v: i for i, v in enumerate(self.order)}

    def less(self, x, y):
        """The order by its three clauses, evaluated directly."""
        ex, ey = self.owner[x], self.owner[y]
        if ex == ey:
            return self.tree.less(x, y)
        if ey[:len(ex)] == ex:
            return True
        if ex[:len(ey)] == ey:
            return False
        k = 0
        while ex[k] == ey[k]:
            k += 1
        sigma = ex[:k]
        ci, cj = ex[:k + 1], ey[:k + 1]
        return self._plus_key(sigma, ci) < self._plus_key(sigma, cj)

    def _plus_key(self, sigma, child):
        # members of A_sigma come first, then representatives of children
        # by cut position along A_sigma and colour
        return (1, self.cut_position[child], self.colour[self.rep[child]])


def _lex_least_branch(t, kids, nodes):
    r = min(roots_of(t, nodes))
    path = [r]
    while True:
        nxt = [c for c in kids[path[-1]] if c in nodes]
        if not nxt:
            return path
        path.append(min(nxt))


def a2_wellorder(t: FiniteStructure) -> TreeWellOrder:
    """Partition T into sub-branches indexed by a finite tree Gamma, colour
    them and order T: within a sub-branch by the tree order, a sub-branch
    before its descendants in Gamma, and incomparable indices by the
    representatives of the children of their meet."""
    if t.kind != "tree":
        raise DomainError("a2_wellorder takes a tree")
    kids = children_of(t)
    gamma = []
    region = {}
    sub = {}
    rep = {}
    cut_pos = {}
    owner = {}
    frontier = [((), set(range(t.size)))] if t.size else []
    while frontier:
        eta, nodes = frontier.pop(0)
        gamma.append(eta)
        region[eta] = sorted(nodes)
        a = _lex_least_branch(t, kids, nodes)
        sub[eta] = a
        rep[eta] = a[0]
        for v in a:
            owner[v] = eta
        rest = sorted(nodes - set(a))
        comps = sorted((sorted(c) for c in _components(t, rest)), key=lambda c: c[0])
        for i, comp in enumerate(comps):
            child = eta + (i,)
            cut_pos[child] = sum(1 for x in a if t.less(x, comp[0]))
            frontier.append((child, set(comp)))
    colour = {}
    for eta in gamma:
        if eta == ():
            c = 0
        else:
            parent = eta[:-1]
            taken = {colour[rep[parent]]}
            for other in gamma:
                if (len(other) == len(eta) and other[:-1] == parent and other < eta
                        and cut_pos[other] == cut_pos[eta]):
                    taken.add(colour[rep[other]])
            c = 0
            while c in taken:
                c += 1
        for v in sub[eta]:
            colour[v] = c

    def key(v):
        eta = owner[v]
        path = tuple((cut_pos[eta[:k + 1]], colour[rep[eta[:k + 1]]]) for k in range(len(eta)))
        return (path, sub[eta].index(v))

    order = sorted(range(t.size), key=key)
    prof = tameness_profile(t) if t.size else TamenessProfile(0, 0)
    return TreeWellOrder(t, gamma, region, sub, rep, colour, cut_pos, order, owner, prof.n_star)


# ---------------------------------------------- determination experiment

@dataclass
class DeterminationReport:
    n: int
    tried: list
    least_k: int | None
    items: int
    digest: str
    dropped: tuple = ()

    def lines(self):
        out = [f"n={self.n} items={self.items} dropped={','.join(self.dropped) or '-'}"]
        for k, keys, conflicts in self.tried:
            out.append(f"k={k} keys={keys} conflicts={conflicts} "
                       f"functional={'yes' if conflicts == 0 else 'no'}")
        out.append(f"least functional k: {self.least_k if self.least_k is not None else 'none <= n+3'}")
        out.append(f"digest {self.digest}")
        return out


def _point_theory(memberships, k):
    one = FiniteStructure.chain(1)
    return eval_theory(one, tuple(int(b) for b in memberships), k)


def branch_key(t: FiniteStructure, branch, q_masks, n, k, drop=()):
    """Compact key: the sorted list of part types occurring on the branch
    and Th^k of the branch with predicates B, B^c and one P_t per type."""
    dec = cut_decomposition(t, branch)
    types = []
    for e in dec.branch:
        part = dec.parts[e]
        s = induced(t, part, {})
        idx = {v: i for i, v in enumerate(part)}
        local = tuple(sum(1 << idx[v] for v in points_of(m) if v in idx) for m in q_masks)
        types.append(eval_theory(s, local, n))
    occurring = sorted(set(types), key=lambda u: u.serialize())
    cols = []
    for pos, e in enumerate(dec.branch):
        row = []
        if "B" not in drop:
            row.append(1)
        if "Bc" not in drop:
            row.append(0)
        if "P" not in drop:
            row.extend(1 if types[pos] is u else 0 for u in occurring)
        cols.append(row)
    th = None
    for row in cols:
        p = _point_theory(row, k)
        th = p if th is None else add(th, p)
    head = () if "P" in drop else tuple(u.serialize() for u in occurring)
    return head, th


def determination_experiment(n: int, corpus, drop=(), max_extra=3) -> DeterminationReport:
    """corpus: iterable of (tree, branch, q_masks).  For k = n..n+max_extra
    build the map key -> Th^n(T; Q) and stop at the first functional k."""
    corpus = list(corpus)
    values = [eval_theory(t, q, n) for t, _, q in corpus]
    tried = []
    least = None
    h = hashlib.sha256()
    for k in range(n, n + max_extra + 1):
        seen = {}
        conflicts = set()
        for (t, br, q), val in zip(corpus, values):
            head, th = branch_key(t, br, q, n, k, drop)
            key = (head, th.serialize())
            old = seen.setdefault(key, val)
            if old is not val:
                conflicts.add(key)
        tried.append((k, len(seen), len(conflicts)))
        for key in sorted(seen):
            h.update(repr(key).encode())
            h.update(seen[key].serialize().encode())
        if not conflicts:
            least = k
            break
    return DeterminationReport(n, tried, least, len(corpus), h.hexdigest()[:16], tuple(drop))


def tree_corpus(max_nodes=5, arity=1):
    """(tree, branch, q_masks) for every rooted tree up to isomorphism,
    every branch and every predicate tuple of the given arity."""
    out = []
    for parents in all_rooted_trees(max_nodes):
        t = FiniteStructure.tree(parents)
        for br in branches(t):
            for q in itertools.product(range(1 << t.size), repeat=arity):
                out.append((t, br, tuple(q)))
    return out
