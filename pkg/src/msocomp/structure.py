"""Finite chains and finite trees with named predicate sets.

Points are numbered 0..N-1 and sets are bitmasks over those numbers.
For a chain the order is the numeric one; for a tree it is the strict
ancestor relation given by parent links (several roots are allowed).
"""

from __future__ import annotations

import re

from .errors import DomainError, ParseError


class FiniteStructure:
    def __init__(self, size, parents=None, predicates=None, labels=None):
        self.size = size
        self.kind = "chain" if parents is None else "tree"
        self.parents = None if parents is None else tuple(parents)
        self.predicates = dict(predicates or {})
        self.labels = tuple(labels) if labels is not None else tuple(range(size))
        full = (1 << size) - 1
        for name, mask in self.predicates.items():
            if mask & ~full:
                raise DomainError(f"predicate {name} is not a subset of the universe")
        if self.parents is None:
            # below[j]: mask of points strictly below j
            self.below = tuple((1 << j) - 1 for j in range(size))
        else:
            if len(self.parents) != size:
                raise DomainError("one parent entry per node is required")
            self.below = tuple(self._ancestors(j) for j in range(size))
        self._memo = {}

    @classmethod
    def chain(cls, size, predicates=None):
        return cls(size, None, predicates)

    @classmethod
    def tree(cls, parents, predicates=None, labels=None):
        return cls(len(parents), parents, predicates, labels)

    def _ancestors(self, j):
        seen = 0
        p = self.parents[j]
        steps = 0
        while p is not None:
            if not 0 <= p < self.size:
                raise DomainError(f"parent {p} of node {j} is out of range")
            if seen >> p & 1 or p == j:
                raise DomainError("parent links contain a cycle")
            seen |= 1 << p
            p = self.parents[p]
            steps += 1
            if steps > self.size:
                raise DomainError("parent links contain a cycle")
        return seen

    @property
    def full(self):
        return (1 << self.size) - 1

    def less(self, a, b):
        return bool(self.below[b] >> a & 1)

    def mask(self, points):
        out = 0
        for p in points:
            if not 0 <= p < self.size:
                raise DomainError(f"point {p} outside the universe")
            out |= 1 << p
        return out

    def __repr__(self):
        if self.kind == "chain":
            return f"FiniteStructure.chain({self.size})"
        return f"FiniteStructure.tree({list(self.parents)})"


def points_of(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def parse_chain_file(text):
    """Chain file: a line 'size N' followed by 'NAME: p1 p2 ...' lines.

    Blank lines and '#' comments are ignored.
    """
    size = None
    preds = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if size is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "size" or not parts[1].isdigit():
                raise ParseError("expected 'size N'", _column(raw), lineno)
            size = int(parts[1])
            continue
        name, pts = _named_subset(raw, lineno)
        mask = 0
        for p, col in pts:
            if not 0 <= p < size:
                raise ParseError(f"point {p} of {name} is outside 0..{size - 1}", col, lineno)
            mask |= 1 << p
        preds[name] = mask
    if size is None:
        raise ParseError("missing 'size N' line", 1, 1)
    return FiniteStructure.chain(size, preds)


def parse_tree_file(text):
    """Tree file: lines 'id parent' (parent '-' for roots), then 'NAME: ids'.

    Node ids are integers; they are renumbered in order of appearance and
    the original ids are kept as labels.
    """
    lines = text.splitlines()
    ids = []
    parent_of = {}
    preds_raw = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" in line:
            name, pts = _named_subset(raw, lineno)
            preds_raw[name] = (pts, lineno)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("expected 'id parent_id' or 'id -'", _column(raw), lineno)
        for k, tok in enumerate(parts):
            if not (tok.lstrip("-").isdigit() or (k == 1 and tok == "-")):
                raise ParseError(f"node id {tok!r} is not an integer", _column(raw, k), lineno)
        node = int(parts[0])
        par = None if parts[1] == "-" else int(parts[1])
        if node in parent_of:
            raise ParseError(f"duplicate node {node}", 1, lineno)
        ids.append(node)
        parent_of[node] = (par, lineno)
    index = {v: i for i, v in enumerate(ids)}
    parents = []
    for v in ids:
        par, lineno = parent_of[v]
        if par is not None and par not in index:
            raise ParseError(f"unknown parent {par}", _column(lines[lineno - 1], 1), lineno)
        parents.append(None if par is None else index[par])
    preds = {}
    for name, (pts, lineno) in preds_raw.items():
        mask = 0
        for p, col in pts:
            if p not in index:
                raise ParseError(f"unknown node {p} in {name}", col, lineno)
            mask |= 1 << index[p]
        preds[name] = mask
    return FiniteStructure.tree(parents, preds, labels=ids)


def _column(raw, k=0):
    """1-based column of the k-th whitespace separated token of raw."""
    found = list(re.finditer(r"\S+", raw))
    return found[k].start() + 1 if k < len(found) else len(raw) + 1


def _named_subset(raw, lineno):
    line = raw.split("#", 1)[0]
    name, _, rest = line.partition(":")
    name = name.strip()
    if not name or not name[0].isupper():
        raise ParseError("predicate names are uppercase identifiers", _column(raw), lineno)
    pts = []
    start = line.index(":") + 1
    for m in re.finditer(r"[^\s,]+", rest):
        try:
            pts.append((int(m.group()), start + m.start() + 1))
        except ValueError:
            raise ParseError(f"subset member {m.group()!r} is not an integer",
                             start + m.start() + 1, lineno) from None
    return name, pts
