import itertools

import pytest

from msocomp.composition import (
    AdditiveColoring, FiniteSemigroup, add, additive_ramsey, closure, empty_theory,
    generalized_sum, idempotent_power, idempotent_power_with_exponent, omega_power_tower,
    omega_sum, sum_finite,
)
from msocomp.errors import DomainError, ParseError
from msocomp.formula import parse
from msocomp.structure import FiniteStructure
from msocomp.theory import decide, eval_theory, model_check, reduce


def th(n, level, *masks):
    return eval_theory(FiniteStructure.chain(n), masks, level)


SING = th(1, 0, 1)
EMPTY = th(1, 0, 0)


def small_theories(level, max_size=2):
    out = []
    for n in range(max_size + 1):
        for a in range(1 << n):
            out.append(th(n, level, a))
    return list(dict.fromkeys(out))


# ------------------------------------------------------------------ add

def test_add_singleton_empty():
    assert add(SING, EMPTY) is SING


def test_add_fin1_fin1():
    assert add(th(1, 1), th(1, 1)) is th(2, 1)


def test_add_matches_concatenation():
    for n1, n2 in itertools.product(range(4), repeat=2):
        for a, b in itertools.product(range(1 << n1), range(1 << n2)):
            for level in range(3):
                assert add(th(n1, level, a), th(n2, level, b)) is th(n1 + n2, level, a | b << n1)


def test_associativity_and_identity():
    for level in range(3):
        ts = small_theories(level)
        e = empty_theory(level, 1)
        for x in ts:
            assert add(x, e) is x and add(e, x) is x
        for x, y, z in itertools.product(ts, repeat=3):
            assert add(add(x, y), z) is add(x, add(y, z))


def test_reduce_commutes_with_add():
    ts = small_theories(2)
    for x, y in itertools.product(ts, repeat=2):
        for m in range(3):
            assert reduce(add(x, y), m) is add(reduce(x, m), reduce(y, m))


def test_add_rejects_mismatch_and_trees():
    with pytest.raises(DomainError):
        add(th(1, 1), th(1, 0))
    tree = eval_theory(FiniteStructure.tree([None]), (), 1)
    with pytest.raises(DomainError):
        add(tree, tree)


# ---------------------------------------------------------- finite sums

def test_sum_finite():
    assert sum_finite([th(2, 1)]) is th(2, 1)
    for k in range(1, 6):
        assert sum_finite([th(1, 1)] * k) is th(k, 1)
    assert sum_finite([], level=1, arity=0) is th(0, 1)
    with pytest.raises(DomainError):
        sum_finite([])
    with pytest.raises(DomainError):
        sum_finite([th(1, 1), th(1, 2)])


def test_generalized_sum():
    idx = FiniteStructure.chain(3)
    assert generalized_sum(idx, {i: th(1, 1) for i in range(3)}) is th(3, 1)
    two = FiniteStructure.chain(2)
    assert generalized_sum(two, {0: th(1, 1), 1: th(2, 1)}) is add(th(1, 1), th(2, 1))
    for sizes in itertools.product(range(3), repeat=3):
        for bits in itertools.product(*[range(1 << s) for s in sizes]):
            parts = {i: th(sizes[i], 1, bits[i]) for i in range(3)}
            mask, off = 0, 0
            for s, b in zip(sizes, bits):
                mask |= b << off
                off += s
            assert generalized_sum(idx, parts) is th(sum(sizes), 1, mask)
    with pytest.raises(DomainError):
        generalized_sum(idx, {0: th(1, 1)})


# ------------------------------------------------------------ omega sums

HAS_MAX = parse("EX X.(sing(X) & ALL Y.(sing(Y) -> (Y<X | Y=X)))")
NO_MAX = parse("ALL X.(sing(X) -> EX Y.(sing(Y) & X<Y))")


def test_omega_sum_level0():
    assert omega_sum((), (EMPTY,)) is EMPTY
    many = th(2, 0, 3)
    assert omega_sum((), (SING,)) is many


def test_omega_has_no_max():
    w = omega_sum((), (th(1, 2),))
    assert decide(HAS_MAX, w) is False
    assert decide(NO_MAX, w) is True
    assert decide(HAS_MAX, th(3, 2)) is True
    assert model_check(FiniteStructure.chain(3), HAS_MAX)


def test_omega_sum_absorbs_one_period():
    for p in small_theories(1):
        for q in small_theories(1):
            assert omega_sum((q, p), (p,)) is omega_sum((q,), (p,))
            assert omega_sum((q, p, q), (p, q)) is omega_sum((q,), (p, q))


def test_omega_sum_level_reduction():
    w2 = omega_sum((), (th(1, 2),))
    assert reduce(w2, 1) is omega_sum((), (th(1, 1),))


def test_omega_sum_needs_period():
    with pytest.raises(DomainError):
        omega_sum((th(1, 1),), ())


# ----------------------------------------------------------- semigroups

def cyclic(n):
    names = [str(i) for i in range(n)]
    return FiniteSemigroup(names, {(a, b): str((int(a) + int(b)) % n) for a in names for b in names})


def test_idempotent_power_examples():
    z3 = cyclic(3)
    assert idempotent_power_with_exponent("1", z3) == ("0", 3)
    assert idempotent_power_with_exponent("0", z3) == ("0", 1)
    left_zero = FiniteSemigroup(["a", "b"], {(x, y): x for x in "ab" for y in "ab"})
    assert idempotent_power("a", left_zero) == "a"
    assert idempotent_power("b", left_zero) == "b"


def test_non_associative_rejected():
    table = {("a", "a"): "b", ("a", "b"): "a", ("b", "a"): "b", ("b", "b"): "a"}
    with pytest.raises(DomainError):
        FiniteSemigroup(["a", "b"], table)


def test_semigroup_parse():
    sg = FiniteSemigroup.parse("e a\ne + e = e\ne + a = a\na + e = a\na + a = e\n")
    assert sg.op("a", "a") == "e"
    with pytest.raises(ParseError, match="line 2"):
        FiniteSemigroup.parse("e\ne e = e\n")
    with pytest.raises(DomainError):
        FiniteSemigroup.parse("e a\ne + e = e\n")


def test_closure():
    g = closure([th(1, 1)])
    assert set(g) == {th(1, 1), th(2, 1)}


# --------------------------------------------------------------- ramsey

def test_ramsey_constant():
    sg = cyclic(1)
    col = AdditiveColoring(6, lambda i, j: "0", sg)
    assert additive_ramsey(col, 4) == [0, 1, 2, 3]
    assert additive_ramsey(col, 1) == [0]
    assert additive_ramsey(col, 7) is None


def test_ramsey_parity():
    sg = cyclic(2)
    col = AdditiveColoring(10, lambda i, j: str((j - i) % 2), sg)
    found = additive_ramsey(col, 3)
    assert found == [0, 2, 4]
    # brute-force oracle: lexicographically first homogeneous triple
    brute = next(list(c) for c in itertools.combinations(range(10), 3)
                 if len({col(a, b) for a, b in itertools.combinations(c, 2)}) == 1)
    assert brute == found


def test_ramsey_rejects_non_additive():
    sg = cyclic(2)
    col = AdditiveColoring(4, lambda i, j: "1", sg)
    with pytest.raises(DomainError):
        additive_ramsey(col, 2)


# ---------------------------------------------------------------- towers

@pytest.mark.parametrize("k", [1, 2])
def test_tower_stabilizes(k):
    rep = omega_power_tower(th(k, 1), 6)
    assert rep.p is not None
    assert rep.p <= rep.semigroup_size
    v = rep.stable
    assert add(v, v) is v
    assert rep.values[rep.p + 1] is rep.values[rep.p]


def test_tower_depth0():
    rep = omega_power_tower(th(1, 1), 0)
    assert rep.values == [] and rep.p is None


def test_tower_level2_idempotent():
    rep = omega_power_tower(th(1, 2), 5)
    assert rep.p is not None and rep.idempotent
