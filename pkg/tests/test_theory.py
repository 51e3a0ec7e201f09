import itertools
import random

import pytest

from msocomp.errors import BudgetExceeded, CoherenceError, DomainError, ParseError
from msocomp.formula import dp, parse, to_text
from msocomp.structure import FiniteStructure, parse_chain_file, parse_tree_file
from msocomp.theory import (
    characteristic_formula, coherent, decide, drop_var, enumerate_types, eval_theory,
    make, make0, model_check, pad, parse_theory, reduce,
)

import oracle
from corpus import FORMULAS


def chain(n, **preds):
    return FiniteStructure.chain(n, preds)


# ---------------------------------------------------------- eval_theory

def test_one_point_level0():
    t = eval_theory(chain(1), [1], 0)
    assert t.serialize() == "[~empty(X0),sing(X0)]"


def test_two_point_chain_has_three_members():
    assert len(eval_theory(chain(2), (), 1).members) == 3


def test_empty_chain_level1():
    t = eval_theory(chain(0), (), 1)
    assert [m.serialize() for m in t.members] == ["[empty(X0),~sing(X0)]"]


@pytest.mark.parametrize("n,size", [(0, 1), (1, 2), (2, 4), (3, 6), (4, 7)])
def test_level2_sizes_frozen(n, size):
    # frozen from tests/oracle.py
    assert len(eval_theory(chain(n), (), 2).members) == size


@pytest.mark.parametrize("parents,size", [([None, 0, 0], 5), ([None, 0, 1], 6), ([None, 0, 0, 0], 6)])
def test_tree_level2_sizes_frozen(parents, size):
    assert len(eval_theory(FiniteStructure.tree(parents), (), 2).members) == size


def test_engine_matches_oracle_chains():
    for n in range(5):
        pts, lt = oracle.chain_rel(n)
        s = chain(n)
        for level in range(3 if n < 4 else 2):
            for a in oracle.powerset(pts):
                got = oracle.as_nested(eval_theory(s, [s.mask(a)], level))
                assert got == oracle.theory(pts, lt, [a], level)


def test_engine_matches_oracle_trees():
    for parents in ([None], [None, 0, 0], [None, 0, 1, 1], [None, None, 0], [None, 0, 0, 2]):
        pts, lt = oracle.tree_rel(parents)
        s = FiniteStructure.tree(parents)
        for level in range(3):
            for a in oracle.powerset(pts):
                got = oracle.as_nested(eval_theory(s, [s.mask(a)], level))
                assert got == oracle.theory(pts, lt, [a], level)


def test_tree_relabelling_invariance():
    a = FiniteStructure.tree([None, 0, 0, 1])
    b = FiniteStructure.tree([2, 2, None, 0])
    assert eval_theory(a, (), 2) is eval_theory(b, (), 2)


def test_predicates_by_name_and_points():
    s = chain(3, Q=0b101)
    assert eval_theory(s, ["Q"], 1) is eval_theory(s, [[0, 2]], 1) is eval_theory(s, [5], 1)


def test_budget():
    with pytest.raises(BudgetExceeded):
        eval_theory(chain(10), (), 3, budget=1000)


def test_predicate_outside_universe():
    with pytest.raises(DomainError):
        eval_theory(chain(2), [0b100], 1)


# ----------------------------------------------------------- model check

@pytest.mark.parametrize("n,text,want", [
    (3, "EX X. sing(X)", True),
    (0, "EX X. sing(X)", False),
    (2, "ALL X. ALL Y. ((sing(X) & sing(Y) & ~(X=Y)) -> (X<Y | Y<X))", True),
])
def test_model_check_examples(n, text, want):
    assert model_check(chain(n), parse(text)) is want


def test_model_check_matches_oracle():
    for n in range(4):
        pts, lt = oracle.chain_rel(n)
        s = chain(n)
        for phi in FORMULAS:
            for a in oracle.powerset(pts):
                env = {"A": a}
                assert model_check(s, phi, env) == oracle.holds(pts, lt, phi, env), to_text(phi)


def test_model_check_missing_variable():
    with pytest.raises(DomainError):
        model_check(chain(2), parse("sing(A)"), {})


# ----------------------------------------------------------------- decide

def test_decide_examples():
    phi = parse("EX X. sing(X)")
    assert decide(phi, eval_theory(chain(2), (), 1))
    assert not decide(phi, eval_theory(chain(0), (), 1))
    least = parse("EX X. ALL Y. (sing(Y) -> (X=Y | X<Y))")
    assert decide(least, eval_theory(chain(3), (), 2))
    assert decide(least, eval_theory(chain(3), (), 2)) == model_check(chain(3), least)


def test_decide_errors():
    with pytest.raises(DomainError):
        decide(parse("EX X. EX Y. X < Y"), eval_theory(chain(2), (), 1))
    with pytest.raises(DomainError):
        decide(parse("sing(A)"), eval_theory(chain(2), (), 1))


def test_decide_below_level_uses_reduction():
    t = eval_theory(chain(3), (), 2)
    assert decide(parse("EX X. sing(X)"), t)


# --------------------------------------------------------- projections

def test_reduce_identity_and_agreement():
    for n in range(4):
        s = chain(n)
        for a in range(1 << n):
            t = eval_theory(s, [a], 2)
            assert reduce(t, 2) is t
            for m in range(3):
                assert reduce(t, m) is eval_theory(s, [a], m)


def test_reduce_incoherent():
    empty0 = make0("chain", 2, eval_theory(chain(1), [0, 0], 0).payload)
    other = eval_theory(chain(1), [1, 0], 0)
    bad = make("chain", 1, 1, {empty0, other})
    with pytest.raises(CoherenceError):
        reduce(bad, 0)
    assert not coherent(bad)


def test_drop_var_and_pad():
    for n in range(4):
        s = chain(n)
        for a in range(1 << n):
            for level in range(3):
                t = eval_theory(s, [a], level)
                assert drop_var(t, 0) is eval_theory(s, (), level)
                u = eval_theory(s, (), level)
                assert drop_var(pad(u), 0) is u
                assert pad(u) is eval_theory(s, [0], level)
    t = eval_theory(chain(1), [1], 0)
    assert drop_var(t, 0).arity == 0
    with pytest.raises(DomainError):
        drop_var(t, 1)


def test_drop_middle_variable():
    s = chain(3)
    t = eval_theory(s, [1, 2, 4], 1)
    assert drop_var(t, 1) is eval_theory(s, [1, 4], 1)


# ---------------------------------------------------- characteristic

def test_characteristic_empty_type():
    t = eval_theory(chain(2), [0], 0)
    assert to_text(characteristic_formula(t)) == "empty(X0) & ~sing(X0)"


def test_characteristic_roundtrip_and_separation():
    rng = random.Random(3)
    cases = []
    for n in range(4):
        for a in range(1 << n):
            cases.append((chain(n), a))
    for level in (0, 1):
        thys = {}
        for s, a in cases:
            thys.setdefault(eval_theory(s, [a], level), (s, a))
        for t in thys:
            psi = characteristic_formula(t)
            assert dp(psi) == level
            for s, a in rng.sample(cases, 8) + [thys[t]]:
                want = eval_theory(s, [a], level) is t
                assert model_check(s, psi, {"X0": a}) == want


# ---------------------------------------------------------- serialization

def test_parse_theory_roundtrip():
    for s in (chain(3), FiniteStructure.tree([None, 0, 0])):
        for level in range(3):
            t = eval_theory(s, [1], level)
            assert parse_theory(t.serialize()) is t


def test_parse_theory_errors():
    for bad in ["", "{", "[sing(X0)", "{[empty(X0),sing(X0)]}", "[bogus(X0)]"]:
        with pytest.raises((ParseError, DomainError)):
            parse_theory(bad)


# ------------------------------------------------------------ type spaces

def test_type_space_sizes():
    assert len(enumerate_types(0, 0)) == 1
    assert len(enumerate_types(0, 1)) == 3
    assert len(enumerate_types(1, 0)) == 7


def test_realizable_theories_are_formally_possible():
    spaces = {(n, l): enumerate_types(n, l) for n in range(2) for l in range(2)}
    for size in range(5):
        s = chain(size)
        for n in range(2):
            assert eval_theory(s, (), n) in spaces[(n, 0)]
            for a in range(1 << size):
                assert eval_theory(s, [a], n) in spaces[(n, 1)]


def test_type_space_budget():
    with pytest.raises(BudgetExceeded):
        len(enumerate_types(2, 1, budget=10))


# ------------------------------------------------------------ file formats

def test_chain_file():
    s = parse_chain_file("# demo\nsize 4\nQ: 1 3\n")
    assert s.size == 4 and s.predicates["Q"] == 0b1010


def test_chain_file_errors_report_line():
    with pytest.raises(ParseError, match="line 2"):
        parse_chain_file("size 3\nq: 1\n")
    with pytest.raises(ParseError, match="line 1"):
        parse_chain_file("sz 3\n")


def test_tree_file():
    s = parse_tree_file("10 -\n20 10\n30 10\nQ: 30\n")
    assert list(s.parents) == [None, 0, 0] and list(s.labels) == [10, 20, 30]
    assert s.predicates["Q"] == 0b100
    with pytest.raises(ParseError, match="line 2"):
        parse_tree_file("1 -\n2 7\n")


def test_tree_cycle_rejected():
    with pytest.raises(DomainError):
        FiniteStructure.tree([1, 0])
