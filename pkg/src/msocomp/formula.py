"""Formulas of the monadic language of order over set variables.

Atoms are sing(X), empty(X), X sub Y, X < Y and X = Y, where X < Y holds
when both sets are singletons and the element of X is below the element
of Y.  Two constants, true and false, are accepted as well so that empty
conjunctions and disjunctions have a printable form.

Concrete syntax::

    formula  := implies
    implies  := or ('->' implies)?
    or       := and ('|' and)*
    and      := unary ('&' unary)*
    unary    := '~' unary | quant | primary
    quant    := ('EX' | 'ALL') VAR '.' formula
    primary  := '(' formula ')' | 'sing(' VAR ')' | 'empty(' VAR ')'
              | 'true' | 'false' | VAR ('sub' | '<' | '=') VAR

A quantifier body extends as far to the right as possible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError

__all__ = [
    "Formula", "Atom", "Not", "And", "Or", "Implies", "Exists", "Forall",
    "parse", "to_text", "dp", "free_vars", "ordered_vars", "natural_key",
    "conj", "disj", "subformulas", "rename_free",
]


class Formula:
    __slots__ = ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Atom(Formula):
    kind: str
    args: tuple

    def __post_init__(self):
        want = ATOM_ARITY.get(self.kind)
        if want is None or len(self.args) != want:
            raise ValueError(f"bad atom {self.kind}{self.args}")


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


ATOM_ARITY = {"sing": 1, "empty": 1, "sub": 2, "lt": 2, "eq": 2, "true": 0, "false": 0}
INFIX = {"sub": "sub", "lt": "<", "eq": "="}
TRUE = Atom("true", ())
FALSE = Atom("false", ())


def conj(parts):
    parts = list(parts)
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts):
    parts = list(parts)
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


# ---------------------------------------------------------------- lexer

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<sym>[~&|().<=])
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)

KEYWORDS = {"EX", "ALL"}
LOWER_WORDS = {"sing", "empty", "sub", "true", "false"}


def _is_var(word):
    return word[0].isupper() and word not in KEYWORDS


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            toks.append((kind, m.group(), pos + 1))
        pos = m.end()
    toks.append(("eof", "", len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0
        self.bound = []

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value, what=None):
        kind, text, pos = self.next()
        if text != value or kind == "eof":
            shown = "end of input" if kind == "eof" else repr(text)
            raise ParseError(f"expected {what or repr(value)}, found {shown}", pos)

    def var(self):
        kind, text, pos = self.next()
        if kind != "word" or not _is_var(text):
            shown = "end of input" if kind == "eof" else repr(text)
            raise ParseError(f"expected a variable, found {shown}", pos)
        return text

    def formula(self):
        left = self.disjunction()
        if self.peek()[1] == "->":
            self.next()
            return Implies(left, self.formula())
        return left

    def disjunction(self):
        out = self.conjunction()
        while self.peek()[1] == "|":
            self.next()
            out = Or(out, self.conjunction())
        return out

    def conjunction(self):
        out = self.unary()
        while self.peek()[1] == "&":
            self.next()
            out = And(out, self.unary())
        return out

    def unary(self):
        kind, text, pos = self.peek()
        if text == "~":
            self.next()
            return Not(self.unary())
        if kind == "word" and text in KEYWORDS:
            self.next()
            vpos = self.peek()[2]
            v = self.var()
            if v in self.bound:
                raise ParseError(f"variable {v} is already bound", vpos)
            self.expect(".")
            self.bound.append(v)
            body = self.formula()
            self.bound.pop()
            return Exists(v, body) if text == "EX" else Forall(v, body)
        return self.primary()

    def primary(self):
        kind, text, pos = self.next()
        if text == "(" and kind == "sym":
            inner = self.formula()
            self.expect(")")
            return inner
        if kind == "word" and text in ("sing", "empty"):
            self.expect("(")
            v = self.var()
            self.expect(")")
            return Atom(text, (v,))
        if kind == "word" and text in ("true", "false"):
            return Atom(text, ())
        if kind == "word" and _is_var(text):
            okind, op, opos = self.next()
            kinds = {"sub": "sub", "<": "lt", "=": "eq"}
            if op not in kinds:
                shown = "end of input" if okind == "eof" else repr(op)
                raise ParseError(f"expected 'sub', '<' or '=', found {shown}", opos)
            return Atom(kinds[op], (text, self.var()))
        shown = "end of input" if kind == "eof" else repr(text)
        raise ParseError(f"unexpected {shown}", pos)


def parse(text: str) -> Formula:
    p = _Parser(text)
    out = p.formula()
    kind, tok, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {tok!r}", pos)
    return out


# -------------------------------------------------------------- printer

_PREC = {Implies: 1, Or: 2, And: 3}


def to_text(phi: Formula) -> str:
    return _show(phi, 0)


def _show(phi, ctx):
    # ctx is the binding strength required by the surrounding operator;
    # quantifiers are wrapped whenever they are not at the top of a body
    if isinstance(phi, Atom):
        if phi.kind in ("sing", "empty"):
            return f"{phi.kind}({phi.args[0]})"
        if phi.kind in ("true", "false"):
            return phi.kind
        return f"{phi.args[0]} {INFIX[phi.kind]} {phi.args[1]}"
    if isinstance(phi, Not):
        return "~" + _show(phi.body, 4)
    if isinstance(phi, (Exists, Forall)):
        q = "EX" if isinstance(phi, Exists) else "ALL"
        s = f"{q} {phi.var}. {_show(phi.body, 0)}"
        return s if ctx == 0 else f"({s})"
    prec = _PREC[type(phi)]
    op = {And: "&", Or: "|", Implies: "->"}[type(phi)]
    if isinstance(phi, Implies):
        s = f"{_show(phi.left, prec + 1)} {op} {_show(phi.right, prec)}"
    else:
        s = f"{_show(phi.left, prec)} {op} {_show(phi.right, prec + 1)}"
    return f"({s})" if ctx and prec < ctx else s


# ------------------------------------------------------------ analysis

def dp(phi: Formula) -> int:
    """Quantifier depth."""
    if isinstance(phi, Atom):
        return 0
    if isinstance(phi, Not):
        return dp(phi.body)
    if isinstance(phi, (Exists, Forall)):
        return dp(phi.body) + 1
    return max(dp(phi.left), dp(phi.right))


def free_vars(phi: Formula) -> frozenset:
    if isinstance(phi, Atom):
        return frozenset(phi.args)
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, (Exists, Forall)):
        return free_vars(phi.body) - {phi.var}
    return free_vars(phi.left) | free_vars(phi.right)


def natural_key(name):
    return [int(p) if p.isdigit() else p for p in re.split(r"(\d+)", name)]


def ordered_vars(phi: Formula):
    """Free variables sorted so that X2 comes before X10."""
    return sorted(free_vars(phi), key=natural_key)


def subformulas(phi: Formula):
    yield phi
    if isinstance(phi, Not) or isinstance(phi, (Exists, Forall)):
        yield from subformulas(phi.body)
    elif not isinstance(phi, Atom):
        yield from subformulas(phi.left)
        yield from subformulas(phi.right)


def bound_vars(phi: Formula) -> set:
    return {s.var for s in subformulas(phi) if isinstance(s, (Exists, Forall))}


def rename_free(phi: Formula, mapping: dict) -> Formula:
    """Rename free occurrences; the caller keeps new names clear of binders."""
    if isinstance(phi, Atom):
        return Atom(phi.kind, tuple(mapping.get(a, a) for a in phi.args))
    if isinstance(phi, Not):
        return Not(rename_free(phi.body, mapping))
    if isinstance(phi, (Exists, Forall)):
        inner = {k: v for k, v in mapping.items() if k != phi.var}
        return type(phi)(phi.var, rename_free(phi.body, inner))
    return type(phi)(rename_free(phi.left, mapping), rename_free(phi.right, mapping))
