"""Addition of chain theories, finite and omega-indexed sums, finite
semigroups, additive colourings and omega-power towers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import BudgetExceeded, DomainError, ParseError
from .structure import FiniteStructure
from .theory import (
    Theory, bit_empty, bit_lt, bit_sing, bit_sub, eval_theory, make, make0,
)

CLOSURE_BUDGET = 200000

_ADD = {}
_OMEGA = {}


def _check_pair(t1, t2):
    if t1.kind != "chain" or t2.kind != "chain":
        raise DomainError("addition is defined for chain theories only")
    if t1.level != t2.level or t1.arity != t2.arity:
        raise DomainError(
            f"cannot add level {t1.level}/arity {t1.arity} to level {t2.level}/arity {t2.arity}")


def _add0(arity, p, q):
    out = 0
    side = []
    for j in range(arity):
        e1, e2 = p >> bit_empty(j) & 1, q >> bit_empty(j) & 1
        s1, s2 = p >> bit_sing(j) & 1, q >> bit_sing(j) & 1
        if e1 and e2:
            out |= 1 << bit_empty(j)
        if s1 and e2:
            out |= 1 << bit_sing(j)
            side.append(0)
        elif e1 and s2:
            out |= 1 << bit_sing(j)
            side.append(1)
        else:
            side.append(None)
    for j in range(arity):
        for i in range(arity):
            if i == j:
                continue
            if p >> bit_sub(i, j) & 1 and q >> bit_sub(i, j) & 1:
                out |= 1 << bit_sub(i, j)
            si, sj = side[i], side[j]
            if si is None or sj is None:
                continue
            if si == sj:
                src = p if si == 0 else q
                hit = src >> bit_lt(i, j) & 1
            else:
                hit = si < sj
            if hit:
                out |= 1 << bit_lt(i, j)
    return out


def add(t1: Theory, t2: Theory) -> Theory:
    """Theory of the concatenation of a realization of t1 then one of t2."""
    key = (t1.uid, t2.uid)
    r = _ADD.get(key)
    if r is not None:
        return r
    _check_pair(t1, t2)
    if t1.level == 0:
        r = make0("chain", t1.arity, _add0(t1.arity, t1.payload, t2.payload))
    else:
        r = make("chain", t1.level, t1.arity,
                 {add(u, v) for u in t1.payload for v in t2.payload})
    _ADD[key] = r
    return r


def empty_theory(level: int, arity: int) -> Theory:
    """Theory of the empty chain with arity empty predicates."""
    return eval_theory(FiniteStructure.chain(0), (0,) * arity, level)


def _uniform(seq):
    seq = list(seq)
    for t in seq[1:]:
        _check_pair(seq[0], t)
    return seq


def sum_finite(seq, level=None, arity=None) -> Theory:
    seq = _uniform(seq)
    if not seq:
        if level is None or arity is None:
            raise DomainError("an empty sum needs an explicit level and arity")
        return empty_theory(level, arity)
    if level is not None and seq[0].level != level:
        raise DomainError("sequence level differs from the requested level")
    out = seq[0]
    for t in seq[1:]:
        out = add(out, t)
    return out


def closure(gens, op=None, budget=CLOSURE_BUDGET):
    """Semigroup generated by gens under op (default: add)."""
    op = op or add
    gens = list(dict.fromkeys(gens))
    seen = set(gens)
    order = list(gens)
    frontier = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = op(x, g)
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    nxt.append(y)
                    if len(seen) > budget:
                        raise BudgetExceeded(f"semigroup closure exceeds {budget} elements")
        frontier = nxt
    return order


def _omega0(arity, prefix, period):
    out = 0
    pos = [None] * arity
    for j in range(arity):
        if all(t.payload >> bit_empty(j) & 1 for t in period):
            if all(t.payload >> bit_empty(j) & 1 for t in prefix):
                out |= 1 << bit_empty(j)
            else:
                owners = [k for k, t in enumerate(prefix) if not t.payload >> bit_empty(j) & 1]
                if len(owners) == 1 and prefix[owners[0]].payload >> bit_sing(j) & 1:
                    out |= 1 << bit_sing(j)
                    pos[j] = owners[0]
    everything = list(prefix) + list(period)
    for j in range(arity):
        for i in range(arity):
            if i == j:
                continue
            b = bit_sub(i, j)
            if all(t.payload >> b & 1 for t in everything):
                out |= 1 << b
            if pos[i] is None or pos[j] is None:
                continue
            if pos[i] == pos[j]:
                hit = prefix[pos[i]].payload >> bit_lt(i, j) & 1
            else:
                hit = pos[i] < pos[j]
            if hit:
                out |= 1 << bit_lt(i, j)
    return out


def omega_sum(prefix, period) -> Theory:
    """Theory of prefix[0] + ... + prefix[-1] + period + period + ...

    Positive levels: a member of the result is the theory of one choice
    of members in each summand.  Grouping the choices after the prefix by
    whole periods, the choices form a finite part a followed by an
    omega-sequence from the semigroup G generated by the period's
    achievable block values; by Ramsey's theorem for additive colourings
    every such omega-sequence sums to s + omega(e) with s in G and e an
    idempotent of G, and every such pair is realized.
    """
    prefix = list(prefix)
    period = list(period)
    if not period:
        raise DomainError("omega_sum needs a nonempty period")
    seq = _uniform(prefix + period)
    key = (tuple(t.uid for t in prefix), tuple(t.uid for t in period))
    r = _OMEGA.get(key)
    if r is not None:
        return r
    head = seq[0]
    level, arity = head.level, head.arity
    if level == 0:
        r = make0("chain", arity, _omega0(arity, prefix, period))
    else:
        a_part = sum_finite(prefix, level, arity)
        block = sum_finite(period)
        g = closure(block.payload)
        idem = [e for e in g if add(e, e) is e]
        tails = set()
        for e in idem:
            w = omega_sum((), (e,))
            tails.add(w)
            for s in g:
                tails.add(add(s, w))
        r = make("chain", level, arity,
                 {add(a, w) for a in a_part.payload for w in tails})
    _OMEGA[key] = r
    return r


def generalized_sum(index: FiniteStructure, partition) -> Theory:
    """Sum along a finite index chain; partition maps points to theories."""
    if index.kind != "chain":
        raise DomainError("the index must be a chain")
    missing = [i for i in range(index.size) if i not in partition]
    if missing:
        raise DomainError(f"index point {missing[0]} is not mapped to a theory")
    seq = [partition[i] for i in range(index.size)]
    if not seq:
        raise DomainError("an empty index needs sum_finite with explicit level and arity")
    return sum_finite(seq)


# ----------------------------------------------------------- semigroups

class FiniteSemigroup:
    def __init__(self, elements, table):
        self.elements = list(elements)
        self.table = dict(table)
        names = set(self.elements)
        if len(names) != len(self.elements):
            raise DomainError("duplicate element names")
        for a in self.elements:
            for b in self.elements:
                c = self.table.get((a, b))
                if c is None:
                    raise DomainError(f"missing product {a} + {b}")
                if c not in names:
                    raise DomainError(f"product {a} + {b} = {c} is not an element")
        for a, b, c in itertools.product(self.elements, repeat=3):
            if self.op(self.op(a, b), c) != self.op(a, self.op(b, c)):
                raise DomainError(f"table is not associative at ({a}, {b}, {c})")

    def op(self, a, b):
        return self.table[(a, b)]

    @classmethod
    def parse(cls, text):
        """First line: element names.  Then one 'a + b = c' line per pair."""
        elements = None
        table = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if elements is None:
                elements = line.replace(",", " ").split()
                continue
            lhs, eq, rhs = line.partition("=")
            a, plus, b = lhs.partition("+")
            if not eq or not plus or not a.strip() or not b.strip() or not rhs.strip():
                raise ParseError("expected 'a + b = c'", 1, lineno)
            table[(a.strip(), b.strip())] = rhs.strip()
        if elements is None:
            raise ParseError("missing element list", 1, 1)
        return cls(elements, table)


def idempotent_power_with_exponent(x, semigroup: FiniteSemigroup):
    if x not in semigroup.elements:
        raise DomainError(f"{x} is not an element")
    y = x
    for k in range(1, len(semigroup.elements) + 2):
        if semigroup.op(y, y) == y:
            return y, k
        y = semigroup.op(y, x)
    raise DomainError("no idempotent power found; table is not a semigroup")


def idempotent_power(x, semigroup: FiniteSemigroup):
    """The idempotent among x, x+x, x+x+x, ..."""
    return idempotent_power_with_exponent(x, semigroup)[0]


# --------------------------------------------------------- omega towers

@dataclass
class TowerReport:
    values: list
    p: int | None
    stable: Theory | None
    idempotent: bool | None
    semigroup_size: int
    notes: list = field(default_factory=list)


def omega_power_tower(t: Theory, depth: int, budget: int = CLOSURE_BUDGET) -> TowerReport:
    """values[r] is the theory of omega^(r+1) copies of t, r < depth."""
    if t.kind != "chain":
        raise DomainError("omega powers are defined for chain theories")
    values = []
    cur = t
    for _ in range(depth):
        cur = omega_sum((), (cur,))
        values.append(cur)
    p = next((r for r in range(len(values) - 1) if values[r + 1] is values[r]), None)
    stable = values[p] if p is not None else None
    idem = None if stable is None else add(stable, stable) is stable
    size = len(closure([t] + values, budget=budget)) if values else 0
    notes = []
    if p is None and depth:
        notes.append("no stabilization within the requested depth")
    return TowerReport(values, p, stable, idem, size, notes)


# ------------------------------------------------------ additive Ramsey

class AdditiveColoring:
    """Colouring of pairs i < j of 0..size-1 into a finite semigroup."""

    def __init__(self, size, color, semigroup: FiniteSemigroup):
        self.size = size
        self.semigroup = semigroup
        self._f = {}
        for i in range(size):
            for j in range(i + 1, size):
                c = color(i, j) if callable(color) else color[(i, j)]
                if c not in semigroup.elements:
                    raise DomainError(f"colour {c!r} of ({i}, {j}) is not an element")
                self._f[(i, j)] = c

    def __call__(self, i, j):
        return self._f[(i, j)]

    def check_additive(self):
        op = self.semigroup.op
        for x in range(self.size):
            for y in range(x + 1, self.size):
                for z in range(y + 1, self.size):
                    if self(x, z) != op(self(x, y), self(y, z)):
                        raise DomainError(f"colouring is not additive at ({x}, {y}, {z})")


def additive_ramsey(coloring: AdditiveColoring, size: int):
    """Lexicographically first homogeneous increasing index list, or None."""
    coloring.check_additive()
    if size <= 0:
        return []
    if size > coloring.size:
        return None
    if size == 1:
        return [0]

    def extend(chosen, color):
        if len(chosen) == size:
            return list(chosen)
        start = chosen[-1] + 1
        for j in range(start, coloring.size - (size - len(chosen) - 1)):
            c = coloring(chosen[0], j) if color is None else color
            if all(coloring(i, j) == c for i in chosen):
                found = extend(chosen + [j], c)
                if found:
                    return found
        return None

    for first in range(coloring.size - size + 1):
        found = extend([first], None)
        if found:
            return found
    return None
