"""Ordinals below omega^omega in Cantor normal form, interval partitions
of such ordinals and the theories of ordinal chains."""

from __future__ import annotations

import functools
import itertools
import re

from .errors import DomainError, ParseError


@functools.total_ordering
class Ordinal:
    """Sum of w^e * c terms with strictly decreasing exponents."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        terms = tuple((int(e), int(c)) for e, c in terms)
        for k, (e, c) in enumerate(terms):
            if e < 0 or c <= 0:
                raise DomainError("exponents must be >= 0 and coefficients > 0")
            if k and terms[k - 1][0] <= e:
                raise DomainError("exponents must be strictly decreasing")
        self.terms = terms

    @classmethod
    def nat(cls, k):
        if k < 0:
            raise DomainError("naturals are non-negative")
        return cls(((0, k),)) if k else cls()

    @classmethod
    def omega_power(cls, e, c=1):
        return cls(((e, c),))

    def __add__(self, other):
        return ord_add(self, other)

    def __mul__(self, other):
        return ord_mul(self, other)

    def __eq__(self, other):
        return isinstance(other, Ordinal) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __lt__(self, other):
        return ord_cmp(self, other) < 0

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self):
        return self.terms[0][0] if self.terms else 0

    def is_finite(self):
        return not self.terms or self.terms[0][0] == 0

    def __int__(self):
        if not self.is_finite():
            raise DomainError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(str(c))
                continue
            base = "w" if e == 1 else f"w^{e}"
            parts.append(base if c == 1 else f"{base}*{c}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Ordinal({str(self)!r})"


ZERO = Ordinal()
ONE = Ordinal.nat(1)
OMEGA = Ordinal.omega_power(1)


def ord_add(a: Ordinal, b: Ordinal) -> Ordinal:
    if not b.terms:
        return a
    e = b.terms[0][0]
    head = [t for t in a.terms if t[0] > e]
    same = [c for x, c in a.terms if x == e]
    tail = list(b.terms)
    if same:
        tail[0] = (e, tail[0][1] + same[0])
    return Ordinal(head + tail)


def ord_mul(a: Ordinal, b: Ordinal) -> Ordinal:
    if not a.terms or not b.terms:
        return ZERO
    ea, ca = a.terms[0]
    out = ZERO
    for f, d in b.terms:
        if f > 0:
            piece = Ordinal(((ea + f, d),))
        else:
            piece = Ordinal(((ea, ca * d),) + a.terms[1:])
        out = ord_add(out, piece)
    return out


def ord_cmp(a: Ordinal, b: Ordinal) -> int:
    for (e1, c1), (e2, c2) in zip(a.terms, b.terms):
        if e1 != e2:
            return 1 if e1 > e2 else -1
        if c1 != c2:
            return 1 if c1 > c2 else -1
    return (len(a.terms) > len(b.terms)) - (len(a.terms) < len(b.terms))


def ord_left_sub(a: Ordinal, b: Ordinal) -> Ordinal:
    """The unique x with a + x = b."""
    if b < a:
        raise DomainError(f"{b} is smaller than {a}")
    k = 0
    while k < len(a.terms) and a.terms[k] == b.terms[k]:
        k += 1
    if k == len(a.terms):
        return Ordinal(b.terms[k:])
    (e, c), (f, d) = a.terms[k], b.terms[k]
    if f > e:
        return Ordinal(b.terms[k:])
    return Ordinal(((e, d - c),) + b.terms[k + 1:])


def ord_pow_omega(e: int) -> Ordinal:
    return Ordinal.omega_power(e)


def log_of(a: Ordinal) -> int:
    if not a:
        raise DomainError("log of 0 is undefined")
    return a.degree


# ---------------------------------------------------------------- parsing

_TERM = re.compile(r"^(?:w(?:\^(\d+))?(?:\*(\d+))?|(\d+))$")


def parse_ordinal(text: str) -> Ordinal:
    """Parse 'w^3*2 + w + 4'; terms are summed with ordinal addition."""
    src = text.strip()
    if not src:
        raise ParseError("empty ordinal", 1)
    out = ZERO
    pos = 0
    for piece in text.split("+"):
        tok = piece.strip().replace(" ", "")
        start = pos + (len(piece) - len(piece.lstrip())) + 1
        pos += len(piece) + 1
        m = _TERM.match(tok)
        if not m:
            raise ParseError(f"bad ordinal term {piece.strip()!r}", start)
        if m.group(3) is not None:
            term = Ordinal.nat(int(m.group(3)))
        else:
            e = int(m.group(1)) if m.group(1) is not None else 1
            c = int(m.group(2)) if m.group(2) is not None else 1
            term = Ordinal(((e, c),)) if c else ZERO
        out = ord_add(out, term)
    return out


_INTERVAL = re.compile(r"\[\s*([^,\[\]()]+?)\s*,\s*([^,\[\]()]+?)\s*\)")


def parse_intervals(text: str):
    """Classes separated by ';', each a list of '[b, g)' intervals."""
    classes = []
    for chunk in text.split(";"):
        found = []
        rest = chunk
        for m in _INTERVAL.finditer(chunk):
            found.append((parse_ordinal(m.group(1)), parse_ordinal(m.group(2))))
        leftover = _INTERVAL.sub("", rest).replace(",", "").strip()
        if leftover or not found:
            raise ParseError(f"bad interval class {chunk.strip()!r}", 1)
        classes.append(found)
    return classes


# -------------------------------------------------------------- partitions

class IntervalPartition:
    """Ordered classes of half-open intervals covering [0, alpha)."""

    def __init__(self, alpha: Ordinal, classes):
        self.alpha = alpha
        self.classes = [sorted(c) for c in classes]
        pieces = []
        for k, cls in enumerate(self.classes):
            for lo, hi in cls:
                if not lo < hi:
                    raise DomainError(f"empty or reversed interval [{lo}, {hi})")
                pieces.append((lo, hi, k))
        pieces.sort()
        at = ZERO
        for lo, hi, _ in pieces:
            if lo < at:
                raise DomainError(f"interval [{lo}, {hi}) overlaps another interval")
            if at < lo:
                raise DomainError(f"the point {at} is not covered")
            at = hi
        if at != alpha:
            if alpha < at:
                raise DomainError(f"intervals run past {alpha}")
            raise DomainError(f"the point {at} is not covered")
        self.pieces = pieces

    def __str__(self):
        return " ; ".join(" ".join(f"[{lo}, {hi})" for lo, hi in c) for c in self.classes)

    def pieces_in_order(self):
        """(lo, hi, start) with start the position of lo in the new order."""
        out = []
        at = ZERO
        for cls in self.classes:
            for lo, hi in cls:
                out.append((lo, hi, at))
                at = ord_add(at, ord_left_sub(lo, hi))
        return out


def class_order_type(cls) -> Ordinal:
    out = ZERO
    for lo, hi in sorted(cls):
        out = ord_add(out, ord_left_sub(lo, hi))
    return out


def partition_order_type(p: IntervalPartition) -> Ordinal:
    out = ZERO
    for cls in p.classes:
        out = ord_add(out, class_order_type(cls))
    return out


def compose_partitions(p1: IntervalPartition, p2: IntervalPartition) -> IntervalPartition:
    """A single partition of p1.alpha giving the same order as p2 after p1.

    p2 partitions the order type of p1.  Each p2 interval is cut along the
    images of p1's intervals and pulled back; the pieces become classes,
    ordered by p2 class and then by their position in p1's order.
    """
    beta = partition_order_type(p1)
    if p2.alpha != beta:
        raise DomainError(f"second partition is over {p2.alpha}, expected {beta}")
    images = p1.pieces_in_order()
    out = []
    for cls in p2.classes:
        pulled = []
        for x, y in cls:
            for lo, hi, start in images:
                end = ord_add(start, ord_left_sub(lo, hi))
                a = max(x, start)
                b = min(y, end)
                if a < b:
                    src_lo = ord_add(lo, ord_left_sub(start, a))
                    src_hi = ord_add(lo, ord_left_sub(start, b))
                    pulled.append((a, (src_lo, src_hi)))
        pulled.sort(key=lambda z: z[0])
        out.extend([iv] for _, iv in pulled)
    return IntervalPartition(p1.alpha, out)


def random_ordinal_below(rng, alpha: Ordinal, max_coef=3) -> Ordinal:
    """Random ordinal < alpha (alpha > 0) with small coefficients."""
    if not alpha:
        raise DomainError("no ordinal is below 0")
    deg = alpha.degree
    while True:
        terms = [(e, rng.randint(0, max_coef)) for e in range(deg, -1, -1)]
        cand = Ordinal([(e, c) for e, c in terms if c])
        if cand < alpha:
            return cand


def random_partition(rng, alpha: Ordinal, max_classes=4, max_per_class=3) -> IntervalPartition:
    if not alpha:
        return IntervalPartition(alpha, [])
    k = rng.randint(1, max_classes)
    total = rng.randint(1, k * max_per_class)
    cuts = {ZERO}
    for _ in range(total * 3):
        if len(cuts) >= total:
            break
        cuts.add(random_ordinal_below(rng, alpha))
    pts = sorted(cuts) + [alpha]
    intervals = [(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]
    rng.shuffle(intervals)
    k = min(k, len(intervals))
    classes = [[] for _ in range(k)]
    for idx, iv in enumerate(intervals):
        if idx < k:
            classes[idx].append(iv)
        else:
            open_ = [c for c in classes if len(c) < max_per_class]
            rng.choice(open_).append(iv)
    return IntervalPartition(alpha, classes)


# ------------------------------------------------------------ searches

def decomposition_search(a: Ordinal, b: Ordinal, bound: int | None = None):
    """First (g1, g2) in increasing g1 with g1 + g2 = a and g2 + g1 = b."""
    if bound is None:
        bound = max([c for _, c in a.terms + b.terms] or [0]) + 1
    deg = a.degree
    cands = []
    for coefs in itertools.product(range(bound + 1), repeat=deg + 1):
        g = Ordinal([(deg - i, c) for i, c in enumerate(coefs) if c])
        if not a < g:
            cands.append(g)
    cands.sort()
    for g1 in cands:
        g2 = ord_left_sub(g1, a)
        if ord_add(g2, g1) == b:
            return g1, g2
    return None


# ------------------------------------------------------------- theories

_POWER = {}


def _theory_of_power(k, n):
    from .composition import omega_sum
    from .structure import FiniteStructure
    from .theory import eval_theory

    key = (k, n)
    if key not in _POWER:
        if k == 0:
            _POWER[key] = eval_theory(FiniteStructure.chain(1), (), n)
        else:
            _POWER[key] = omega_sum((), (_theory_of_power(k - 1, n),))
    return _POWER[key]


def theory_of_ordinal(a: Ordinal, n: int):
    """Th^n of the ordinal a with no predicates."""
    from .composition import add, empty_theory

    out = empty_theory(n, 0)
    for e, c in a.terms:
        t = _theory_of_power(e, n)
        for _ in range(c):
            out = add(out, t)
    return out
