"""Bounded-depth monadic theories of finite structures.

A level-0 theory of arity l is a truth assignment to the atom basis over
X0..X{l-1}.  The basis is laid out in one block per variable j:

    empty(Xj), sing(Xj), then for each i < j:
    Xi sub Xj, Xj sub Xi, Xi < Xj, Xj < Xi

so the bits of arity l form a prefix of the bits of arity l+1 and dropping
the last variable at level 0 is a mask.  Reflexive facts (X sub X, X = X,
not X < X) and equality (mutual inclusion) are implied and never stored.

A level-(n+1) theory of arity l is the set of level-n theories of arity
l+1 obtained by adding one more predicate in every possible way.  Theories
are interned, so equal theories are the same object.
"""

from __future__ import annotations

import itertools
import threading

import numpy as np

from .errors import BudgetExceeded, CoherenceError, DomainError, ParseError
from .formula import (
    Atom, And, Exists, FALSE, Forall, Implies, Not, Or, TRUE,
    conj, disj, dp, ordered_vars,
)
from .structure import FiniteStructure

DEFAULT_BUDGET = 1 << 26


def nbits(arity):
    return 2 * arity * arity


def bit_empty(j):
    return 2 * j * j


def bit_sing(j):
    return 2 * j * j + 1


def bit_pair(i, j):
    """Offset of the four pair atoms for i < j."""
    return 2 * j * j + 2 + 4 * i


def bit_sub(i, j):
    return bit_pair(i, j) if i < j else bit_pair(j, i) + 1


def bit_lt(i, j):
    return bit_pair(i, j) + 2 if i < j else bit_pair(j, i) + 3


# ------------------------------------------------------------- interning

_TABLE = {}
_LOCK = threading.Lock()
_COUNTER = itertools.count()


class Theory:
    """Interned theory; compare with `is` or `==` (identity)."""

    __slots__ = ("kind", "level", "arity", "payload", "uid", "_ser", "_members", "__weakref__")

    def __init__(self, kind, level, arity, payload):
        self.kind = kind
        self.level = level
        self.arity = arity
        self.payload = payload
        self.uid = next(_COUNTER)
        self._ser = None
        self._members = None

    @property
    def members(self):
        """Members sorted by serialization (level >= 1 only)."""
        if self.level == 0:
            raise DomainError("a level-0 theory has no members")
        if self._members is None:
            self._members = tuple(sorted(self.payload, key=lambda u: u.body()))
        return self._members

    def body(self):
        if self._ser is None:
            if self.level == 0:
                self._ser = "[" + ",".join(literals0(self.arity, self.payload)) + "]"
            else:
                self._ser = "{" + ",".join(u.body() for u in self.members) + "}"
        return self._ser

    def serialize(self):
        return ("tree:" if self.kind == "tree" else "") + self.body()

    __str__ = serialize

    def __repr__(self):
        s = self.serialize()
        if len(s) > 70:
            s = s[:67] + "..."
        return f"<Theory n={self.level} l={self.arity} {s}>"

    def __reduce__(self):
        if self.level == 0:
            return (make0, (self.kind, self.arity, self.payload))
        return (make, (self.kind, self.level, self.arity, tuple(self.payload)))


def make0(kind, arity, payload):
    key = (kind, 0, arity, payload)
    t = _TABLE.get(key)
    if t is None:
        with _LOCK:
            t = _TABLE.get(key)
            if t is None:
                t = _TABLE[key] = Theory(kind, 0, arity, payload)
    return t


def make(kind, level, arity, members):
    if level == 0:
        raise DomainError("use make0 for level-0 theories")
    ms = frozenset(members)
    if not ms:
        raise CoherenceError("a theory of positive level has at least one member")
    for u in ms:
        if u.level != level - 1 or u.arity != arity + 1 or u.kind != kind:
            raise CoherenceError("member has the wrong level, arity or kind")
    key = (kind, level, arity, ms)
    t = _TABLE.get(key)
    if t is None:
        with _LOCK:
            t = _TABLE.get(key)
            if t is None:
                t = _TABLE[key] = Theory(kind, level, arity, ms)
    return t


def literals0(arity, payload):
    """Literal strings of a level-0 payload, sorted by atom then sign."""
    out = []
    for j in range(arity):
        x = f"X{j}"
        out.append((f"empty({x})", payload >> bit_empty(j) & 1))
        out.append((f"sing({x})", payload >> bit_sing(j) & 1))
        for i in range(j):
            y = f"X{i}"
            b = bit_pair(i, j)
            out.append((f"{y} sub {x}", payload >> b & 1))
            out.append((f"{x} sub {y}", payload >> (b + 1) & 1))
            out.append((f"{y} < {x}", payload >> (b + 2) & 1))
            out.append((f"{x} < {y}", payload >> (b + 3) & 1))
    out.sort()
    return [a if v else "~" + a for a, v in out]


def check0(arity, payload):
    """Raise CoherenceError if a level-0 payload violates forced facts."""
    if payload >> nbits(arity):
        raise CoherenceError("payload has bits beyond the atom basis")
    for j in range(arity):
        if payload >> bit_empty(j) & 1 and payload >> bit_sing(j) & 1:
            raise CoherenceError(f"X{j} cannot be both empty and a singleton")
    for j in range(arity):
        for i in range(arity):
            if i == j:
                continue
            if payload >> bit_empty(i) & 1 and not payload >> bit_sub(i, j) & 1:
                raise CoherenceError(f"empty X{i} must be included in X{j}")
            if payload >> bit_lt(i, j) & 1:
                if not (payload >> bit_sing(i) & 1 and payload >> bit_sing(j) & 1):
                    raise CoherenceError("< holds only between singletons")
                if payload >> bit_lt(j, i) & 1:
                    raise CoherenceError("< cannot hold in both directions")


# ------------------------------------------------------------ evaluation

def payload0(below, masks):
    p = 0
    for j, b in enumerate(masks):
        base = 2 * j * j
        bsing = b != 0 and b & (b - 1) == 0
        if b == 0:
            p |= 1 << base
        elif bsing:
            p |= 1 << (base + 1)
        for i in range(j):
            a = masks[i]
            o = base + 2 + 4 * i
            if a & ~b == 0:
                p |= 1 << o
            if b & ~a == 0:
                p |= 1 << (o + 1)
            if bsing and a != 0 and a & (a - 1) == 0:
                pa = a.bit_length() - 1
                pb = b.bit_length() - 1
                if below[pb] >> pa & 1:
                    p |= 1 << (o + 2)
                if below[pa] >> pb & 1:
                    p |= 1 << (o + 3)
    return p


class _Engine:
    """Per-shape precomputation: all subsets of the universe as a vector."""

    def __init__(self, below):
        self.below = below
        n = len(below)
        self.size = n
        self.count = 1 << n
        self.memo = {}
        self._vec = None

    def vectors(self):
        if self._vec is None:
            n = self.size
            bs = np.arange(self.count, dtype=np.int64)
            pc = np.zeros(self.count, dtype=np.int64)
            for p in range(n):
                pc += (bs >> p) & 1
            sing = pc == 1
            sp = np.full(self.count, n, dtype=np.int64)
            for p in range(n):
                sp[1 << p] = p
            # up[q, p]: q strictly below p (p == n is padding)
            up = np.zeros((max(n, 1), n + 1), dtype=bool)
            for p in range(n):
                for q in range(n):
                    up[q, p] = bool(self.below[p] >> q & 1)
            below_arr = np.array(self.below, dtype=np.int64) if n else np.zeros(0, np.int64)
            self._vec = (bs, sing, sp, up, below_arr)
        return self._vec

    def last_level(self, masks):
        """Sorted distinct payloads of masks + (B,) over all subsets B."""
        l = len(masks)
        if nbits(l + 1) > 63:
            return sorted({payload0(self.below, masks + (b,)) for b in range(self.count)})
        bs, sing, sp, up, below_arr = self.vectors()
        base = payload0(self.below, masks)
        vec = np.full(self.count, base, dtype=np.int64)
        vec |= (bs == 0).astype(np.int64) << bit_empty(l)
        vec |= sing.astype(np.int64) << bit_sing(l)
        for i, a in enumerate(masks):
            o = bit_pair(i, l)
            vec |= ((bs & a) == a).astype(np.int64) << o
            vec |= ((bs & ~a) == 0).astype(np.int64) << (o + 1)
            if a != 0 and a & (a - 1) == 0:
                q = a.bit_length() - 1
                vec |= up[q][sp].astype(np.int64) << (o + 2)
                vec |= (sing & ((bs & int(below_arr[q])) != 0)).astype(np.int64) << (o + 3)
        return [int(x) for x in np.unique(vec)]


_ENGINES = {}


def _engine(s):
    e = _ENGINES.get(s.below)
    if e is None:
        if len(_ENGINES) > 4096:
            _ENGINES.clear()
        e = _ENGINES[s.below] = _Engine(s.below)
    return e


def resolve_masks(s, vars):
    out = []
    for v in vars:
        if isinstance(v, str):
            if v not in s.predicates:
                raise DomainError(f"structure has no predicate named {v}")
            out.append(s.predicates[v])
        elif isinstance(v, (int, np.integer)):
            v = int(v)
            if v < 0 or v & ~s.full:
                raise DomainError("predicate is not a subset of the universe")
            out.append(v)
        else:
            out.append(s.mask(v))
    return tuple(out)


def eval_theory(s: FiniteStructure, vars=(), n: int = 0, budget: int = DEFAULT_BUDGET) -> Theory:
    """Th^n(s; vars) by exhaustive recursion over subsets."""
    masks = resolve_masks(s, vars)
    if n < 0:
        raise DomainError("level must be non-negative")
    if (1 << (s.size * n)) > budget:
        raise BudgetExceeded(f"2^({s.size}*{n}) subset choices exceed the budget {budget}")
    return _eval(_engine(s), s.kind, masks, n)


def _eval(eng, kind, masks, n):
    if n == 0:
        return make0(kind, len(masks), payload0(eng.below, masks))
    key = (kind, masks, n)
    t = eng.memo.get(key)
    if t is not None:
        return t
    l = len(masks)
    if n == 1:
        members = [make0(kind, l + 1, p) for p in eng.last_level(masks)]
    else:
        members = {_eval(eng, kind, masks + (b,), n - 1) for b in range(eng.count)}
    t = make(kind, n, l, members)
    if len(eng.memo) > 200000:
        eng.memo.clear()
    eng.memo[key] = t
    return t


# ------------------------------------------------------------ model check

def _flatten(phi, cls):
    out = []
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, cls):
            stack.append(f.right)
            stack.append(f.left)
        else:
            out.append(f)
    return out


def _is_sing(a):
    return a != 0 and a & (a - 1) == 0


def _compile(phi, scope, depth, s):
    below = s.below
    full = s.full
    if isinstance(phi, Atom):
        k = phi.kind
        if k == "true":
            return lambda env: True
        if k == "false":
            return lambda env: False
        idx = [scope[a] for a in phi.args]
        if k == "sing":
            i = idx[0]
            return lambda env: _is_sing(env[i])
        if k == "empty":
            i = idx[0]
            return lambda env: env[i] == 0
        i, j = idx
        if k == "sub":
            return lambda env: env[i] & ~env[j] == 0
        if k == "eq":
            return lambda env: env[i] == env[j]

        def lt(env):
            a = env[i]
            b = env[j]
            if not (_is_sing(a) and _is_sing(b)):
                return False
            return bool(below[b.bit_length() - 1] >> (a.bit_length() - 1) & 1)
        return lt
    if isinstance(phi, Not):
        f = _compile(phi.body, scope, depth, s)
        return lambda env: not f(env)
    if isinstance(phi, And):
        fs = [_compile(p, scope, depth, s) for p in _flatten(phi, And)]

        def all_(env):
            for f in fs:
                if not f(env):
                    return False
            return True
        return all_
    if isinstance(phi, Or):
        fs = [_compile(p, scope, depth, s) for p in _flatten(phi, Or)]

        def any_(env):
            for f in fs:
                if f(env):
                    return True
            return False
        return any_
    if isinstance(phi, Implies):
        f = _compile(phi.left, scope, depth, s)
        g = _compile(phi.right, scope, depth, s)
        return lambda env: (not f(env)) or g(env)
    inner = dict(scope)
    inner[phi.var] = depth
    f = _compile(phi.body, inner, depth + 1, s)
    want = isinstance(phi, Exists)

    def quant(env):
        env.append(0)
        try:
            for b in range(full + 1):
                env[-1] = b
                if f(env) == want:
                    return want
            return not want
        finally:
            env.pop()
    return quant


def model_check(s: FiniteStructure, phi, assignment=(), vars=None, budget: int = DEFAULT_BUDGET) -> bool:
    """Exhaustive satisfaction check.

    `assignment` is a dict from variable names to sets, or a sequence
    aligned with `vars` (default: the free variables of phi that are not
    named predicates of s, in natural order).  Named predicates of s are
    available to phi by name.
    """
    if isinstance(assignment, dict):
        env_map = {k: resolve_masks(s, [v])[0] for k, v in assignment.items()}
    else:
        if vars is None:
            vars = [v for v in ordered_vars(phi) if v not in s.predicates]
        assignment = tuple(assignment)
        if len(assignment) != len(vars):
            raise DomainError(f"expected {len(vars)} sets, got {len(assignment)}")
        env_map = dict(zip(vars, resolve_masks(s, assignment)))
    for name, m in s.predicates.items():
        env_map.setdefault(name, m)
    missing = [v for v in ordered_vars(phi) if v not in env_map]
    if missing:
        raise DomainError(f"no value for free variable(s) {', '.join(missing)}")
    if (1 << (s.size * dp(phi))) > budget:
        raise BudgetExceeded("formula depth times structure size exceeds the budget")
    names = list(env_map)
    scope = {v: i for i, v in enumerate(names)}
    f = _compile(phi, scope, len(names), s)
    return bool(f([env_map[v] for v in names]))


def compile_formula(s: FiniteStructure, phi, names):
    """Reusable checker: returns f(masks) with masks aligned with names;
    named predicates of s fill the remaining free variables."""
    names = list(names)
    rest = [v for v in ordered_vars(phi) if v not in names]
    missing = [v for v in rest if v not in s.predicates]
    if missing:
        raise DomainError(f"no value for free variable(s) {', '.join(missing)}")
    scope = {v: i for i, v in enumerate(names + rest)}
    f = _compile(phi, scope, len(scope), s)
    fixed = [s.predicates[v] for v in rest]

    def check(masks):
        return bool(f(list(masks) + fixed))
    return check


# -------------------------------------------------------------- decide

def decide(phi, t: Theory, vars=None) -> bool:
    """Read the truth of phi off t; vars names the positions of t."""
    if vars is None:
        vars = ordered_vars(phi)
    vars = list(vars)
    if len(vars) != t.arity:
        raise DomainError(f"theory has arity {t.arity} but {len(vars)} variables were given")
    if dp(phi) > t.level:
        raise DomainError(f"formula depth {dp(phi)} exceeds theory level {t.level}")
    extra = set(ordered_vars(phi)) - set(vars)
    if extra:
        raise DomainError(f"free variable(s) {', '.join(sorted(extra))} not among the positions")
    return _decide(phi, t, {v: i for i, v in enumerate(vars)})


def _atom0(kind, idx, p):
    if kind == "true":
        return True
    if kind == "false":
        return False
    if kind == "sing":
        return bool(p >> bit_sing(idx[0]) & 1)
    if kind == "empty":
        return bool(p >> bit_empty(idx[0]) & 1)
    i, j = idx
    if kind == "sub":
        return i == j or bool(p >> bit_sub(i, j) & 1)
    if kind == "eq":
        return i == j or bool(p >> bit_sub(i, j) & 1 and p >> bit_sub(j, i) & 1)
    return i != j and bool(p >> bit_lt(i, j) & 1)


def _decide(phi, t, pos):
    if isinstance(phi, Atom):
        return _atom0(phi.kind, [pos[a] for a in phi.args], reduce(t, 0).payload)
    if isinstance(phi, Not):
        return not _decide(phi.body, t, pos)
    if isinstance(phi, And):
        return all(_decide(p, t, pos) for p in _flatten(phi, And))
    if isinstance(phi, Or):
        return any(_decide(p, t, pos) for p in _flatten(phi, Or))
    if isinstance(phi, Implies):
        return (not _decide(phi.left, t, pos)) or _decide(phi.right, t, pos)
    if t.level == 0:
        raise DomainError("quantifier reached a level-0 theory")
    inner = dict(pos)
    inner[phi.var] = t.arity
    test = (_decide(phi.body, u, inner) for u in t.members)
    return any(test) if isinstance(phi, Exists) else all(test)


# -------------------------------------------------------- projections

_REDUCE = {}
_DROP = {}


def drop_last(t: Theory) -> Theory:
    return drop_var(t, t.arity - 1)


def drop_var(t: Theory, pos: int) -> Theory:
    if not 0 <= pos < t.arity:
        raise DomainError(f"position {pos} out of range for arity {t.arity}")
    key = (t.uid, pos)
    r = _DROP.get(key)
    if r is not None:
        return r
    if t.level == 0:
        r = make0(t.kind, t.arity - 1, _drop0(t.arity, t.payload, pos))
    else:
        r = make(t.kind, t.level, t.arity - 1, {drop_var(u, pos) for u in t.payload})
    _DROP[key] = r
    return r


def _remap0(arity, new_arity, payload, index_map):
    """Move atoms according to index_map (old index -> new index or None)."""
    out = 0
    for j in range(arity):
        nj = index_map[j]
        if nj is None:
            continue
        if payload >> bit_empty(j) & 1:
            out |= 1 << bit_empty(nj)
        if payload >> bit_sing(j) & 1:
            out |= 1 << bit_sing(nj)
        for i in range(arity):
            ni = index_map[i]
            if i == j or ni is None:
                continue
            if payload >> bit_sub(i, j) & 1:
                out |= 1 << bit_sub(ni, nj)
            if payload >> bit_lt(i, j) & 1:
                out |= 1 << bit_lt(ni, nj)
    return out


def _drop0(arity, payload, pos):
    if pos == arity - 1:
        return payload & ((1 << nbits(arity - 1)) - 1)
    m = [i if i < pos else (None if i == pos else i - 1) for i in range(arity)]
    return _remap0(arity, arity - 1, payload, m)


def insert_empty(t: Theory, pos: int) -> Theory:
    """Theory of the same structure with an empty predicate inserted at pos."""
    if not 0 <= pos <= t.arity:
        raise DomainError(f"position {pos} out of range")
    if t.level > 0:
        return make(t.kind, t.level, t.arity + 1, {insert_empty(u, pos) for u in t.payload})
    l = t.arity
    m = [i if i < pos else i + 1 for i in range(l)]
    p = _remap0(l, l + 1, t.payload, m)
    p |= 1 << bit_empty(pos)
    for i in range(l + 1):
        if i == pos:
            continue
        p |= 1 << bit_sub(pos, i)
        oi = i if i < pos else i - 1
        if t.payload >> bit_empty(oi) & 1:
            p |= 1 << bit_sub(i, pos)
    return make0(t.kind, l + 1, p)


def pad(t: Theory) -> Theory:
    return insert_empty(t, t.arity)


def reduce(t: Theory, m: int) -> Theory:
    """Level-m theory of any realization of t."""
    if not 0 <= m <= t.level:
        raise DomainError(f"cannot reduce level {t.level} to {m}")
    if m == t.level:
        return t
    key = (t.uid, m)
    r = _REDUCE.get(key)
    if r is not None:
        return r
    projections = {drop_last(u) for u in t.payload}
    if len(projections) != 1:
        raise CoherenceError("members disagree on the projection of their last variable")
    (p,) = projections
    r = reduce(p, m)
    _REDUCE[key] = r
    return r


def coherent(t: Theory) -> bool:
    try:
        reduce(t, 0)
        if t.level > 0:
            return all(coherent(u) for u in t.payload)
        check0(t.arity, t.payload)
        return True
    except CoherenceError:
        return False


# ------------------------------------------------ characteristic formula

_CHAR = {}


def _literals_formula(arity, payload):
    parts = []
    for j in range(arity):
        x = f"X{j}"
        for kind, bit in (("empty", bit_empty(j)), ("sing", bit_sing(j))):
            a = Atom(kind, (x,))
            parts.append(a if payload >> bit & 1 else Not(a))
        for i in range(j):
            y = f"X{i}"
            b = bit_pair(i, j)
            for k, (kind, args) in enumerate((("sub", (y, x)), ("sub", (x, y)),
                                              ("lt", (y, x)), ("lt", (x, y)))):
                a = Atom(kind, args)
                parts.append(a if payload >> (b + k) & 1 else Not(a))
    return conj(parts)


def characteristic_formula(t: Theory):
    """psi_t over X0..X{l-1}: holds exactly on realizations of t."""
    r = _CHAR.get(t.uid)
    if r is not None:
        return r
    if t.level == 0:
        r = _literals_formula(t.arity, t.payload)
    else:
        v = f"X{t.arity}"
        subs = [characteristic_formula(u) for u in t.members]
        r = And(conj(Exists(v, f) for f in subs), Forall(v, disj(subs)))
    _CHAR[t.uid] = r
    return r


# --------------------------------------------------------------- parsing

def parse_theory(text: str) -> Theory:
    """Inverse of Theory.serialize."""
    text = text.strip()
    kind = "chain"
    offset = 0
    if text.startswith("tree:"):
        kind = "tree"
        offset = 5
    t, end = _parse_at(text, offset, kind)
    if end != len(text):
        raise ParseError("trailing characters after theory", end + 1)
    return t


def _parse_at(text, i, kind):
    if i >= len(text):
        raise ParseError("unexpected end of theory text", i + 1)
    if text[i] == "[":
        j = text.find("]", i)
        if j < 0:
            raise ParseError("unclosed '['", i + 1)
        return _parse_level0(text[i + 1:j], i + 1, kind), j + 1
    if text[i] != "{":
        raise ParseError(f"expected '[' or '{{', found {text[i]!r}", i + 1)
    members = []
    i += 1
    while True:
        u, i = _parse_at(text, i, kind)
        members.append(u)
        if i < len(text) and text[i] == ",":
            i += 1
            continue
        if i < len(text) and text[i] == "}":
            break
        raise ParseError("expected ',' or '}'", i + 1)
    levels = {u.level for u in members}
    arities = {u.arity for u in members}
    if len(levels) != 1 or len(arities) != 1:
        raise ParseError("members of mixed level or arity", i + 1)
    level = levels.pop() + 1
    arity = arities.pop() - 1
    if arity < 0:
        raise ParseError("members of arity 0 cannot form a theory", i + 1)
    return make(kind, level, arity, members), i + 1


def _parse_level0(body, start, kind):
    lits = [x for x in body.split(",")] if body else []
    facts = {}
    maxvar = -1
    for raw in lits:
        lit = raw.strip()
        neg = lit.startswith("~")
        if neg:
            lit = lit[1:]
        try:
            if lit.startswith(("empty(", "sing(")):
                name, _, rest = lit.partition("(")
                j = _var_index(rest.rstrip(")"))
                key = (name, j)
                maxvar = max(maxvar, j)
            else:
                a, op, b = lit.split()
                i, j = _var_index(a), _var_index(b)
                if op not in ("sub", "<") or i == j:
                    raise ValueError
                key = ("sub" if op == "sub" else "lt", i, j)
                maxvar = max(maxvar, i, j)
        except ValueError:
            raise ParseError(f"bad literal {raw!r}", start) from None
        facts[key] = not neg
    arity = maxvar + 1
    p = 0
    for key, val in facts.items():
        if not val:
            continue
        if key[0] == "empty":
            p |= 1 << bit_empty(key[1])
        elif key[0] == "sing":
            p |= 1 << bit_sing(key[1])
        elif key[0] == "sub":
            p |= 1 << bit_sub(key[1], key[2])
        else:
            p |= 1 << bit_lt(key[1], key[2])
    if len(facts) != nbits(arity):
        raise ParseError("level-0 theory must list every atom exactly once", start)
    check0(arity, p)
    return make0(kind, arity, p)


def _var_index(name):
    if not name.startswith("X") or not name[1:].isdigit():
        raise ValueError
    return int(name[1:])


# ------------------------------------------------------------ type spaces

_LEVEL0_SPACE = {}


def level0_space(arity, max_size=None):
    """Payloads realizable in some chain with at most max_size points."""
    if max_size is None:
        max_size = 2 * arity + 1
    key = (arity, max_size)
    if key in _LEVEL0_SPACE:
        return _LEVEL0_SPACE[key]
    found = set()
    if arity == 0:
        found.add(0)
    else:
        for n in range(max_size + 1):
            eng = _engine(FiniteStructure.chain(n))
            for masks in itertools.product(range(1 << n), repeat=arity - 1):
                found.update(eng.last_level(tuple(masks)))
    out = frozenset(found)
    _LEVEL0_SPACE[key] = out
    return out


class TypeSpace:
    """Formally possible theories of a given level and arity (chains)."""

    def __init__(self, level, arity, budget=1 << 20, max_size=None):
        if level < 0 or arity < 0:
            raise DomainError("level and arity must be non-negative")
        self.level = level
        self.arity = arity
        self.budget = budget
        self.max_size = max_size
        self._members = None

    def _sub(self, level, arity):
        return TypeSpace(level, arity, self.budget, self.max_size)

    def __contains__(self, t):
        if not isinstance(t, Theory) or t.kind != "chain":
            return False
        if t.level != self.level or t.arity != self.arity:
            return False
        if t.level == 0:
            return t.payload in level0_space(t.arity, self._bound(t.arity))
        inner = self._sub(self.level - 1, self.arity + 1)
        if not all(u in inner for u in t.payload):
            return False
        try:
            reduce(t, 0)
        except CoherenceError:
            return False
        return True

    def _bound(self, arity):
        return self.max_size if self.max_size is not None else 2 * arity + 1

    def members(self):
        if self._members is None:
            self._members = tuple(self._generate())
        return self._members

    def __iter__(self):
        return iter(self.members())

    def __len__(self):
        return len(self.members())

    def _generate(self):
        if self.level == 0:
            space = sorted(level0_space(self.arity, self._bound(self.arity)))
            if len(space) > self.budget:
                raise BudgetExceeded("level-0 type space exceeds the budget")
            ts = [make0("chain", self.arity, p) for p in space]
            return sorted(ts, key=Theory.body)
        inner = self._sub(self.level - 1, self.arity + 1).members()
        groups = {}
        for u in inner:
            groups.setdefault(drop_last(u), []).append(u)
        total = sum((1 << len(g)) - 1 for g in groups.values())
        if total > self.budget:
            raise BudgetExceeded(f"{total} candidate subsets exceed the budget {self.budget}")
        below = self._sub(self.level - 1, self.arity)
        out = []
        for proj, g in groups.items():
            if proj not in below:
                continue
            for r in range(1, len(g) + 1):
                for combo in itertools.combinations(g, r):
                    t = make("chain", self.level, self.arity, combo)
                    if t in self:
                        out.append(t)
        return sorted(out, key=Theory.body)


def enumerate_types(n: int, l: int, budget: int = 1 << 20) -> TypeSpace:
    return TypeSpace(n, l, budget)
