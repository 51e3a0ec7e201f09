import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from msocomp.errors import DomainError
from msocomp.structure import FiniteStructure
from msocomp.trees import (
    a2_wellorder, all_rooted_trees, branches, children_of, cut_decomposition,
    determination_experiment, induced, is_chain, sim_classes, tameness_profile, tree_corpus,
    tree_sum,
)


def T(parents, labels=None, **preds):
    return FiniteStructure.tree(parents, preds, labels=labels)


def isomorphic(a, b):
    """Brute force over all bijections; only for tiny trees."""
    if a.size != b.size:
        return False
    for perm in itertools.permutations(range(b.size)):
        if all(a.less(x, y) == b.less(perm[x], perm[y]) for x in range(a.size) for y in range(a.size)):
            return True
    return False


FORK = T([None, 0, 0])           # r with children x=1, y=2


# ---------------------------------------------------------------- sums

def test_sum_chain_then_tree():
    s = tree_sum([T([None, 0], labels=["a", "b"]), T([None, 0, 0], labels=["c", "d", "e"])])
    assert s.size == 5
    assert s.parents[0] is None
    for v in range(2, 5):
        assert s.less(0, v)
    assert not s.less(1, 2)          # only the root of the earlier part lies below


def test_sum_of_points_is_chain():
    parts = [T([None], labels=[i]) for i in range(4)]
    s = tree_sum(parts)
    assert is_chain(s, range(4))


def test_sum_rootless_part_sits_beside():
    forest = T([None, None], labels=["p", "q"])
    s = tree_sum([forest, T([None], labels=["z"])])
    assert not any(s.less(u, v) or s.less(v, u) for u in (0, 1) for v in (2,))


def test_sum_name_collision():
    with pytest.raises(DomainError):
        tree_sum([T([None], labels=["a"]), T([None], labels=["a"])])


def _relabel(parents, start):
    return T(parents, labels=list(range(start, start + len(parents))))


def test_sum_nesting_exhaustive_small():
    # the flat sum agrees with nesting to the right; nesting to the left
    # hangs the third part on the first root and never matches for rooted parts
    shapes = all_rooted_trees(3)
    for a, b, c in itertools.product(shapes, repeat=3):
        x, y, z = _relabel(a, 0), _relabel(b, 10), _relabel(c, 20)
        flat = tree_sum([x, y, z])
        right = tree_sum([x, tree_sum([y, z])])
        left = tree_sum([tree_sum([x, y]), z])
        assert isomorphic(flat, right)
        assert not isomorphic(flat, left)


# -------------------------------------------------------- decomposition

def test_cut_chain():
    t = T([None, 0, 1, 2])
    dec = cut_decomposition(t, [0, 1, 2, 3])
    assert dec.parts == {0: [0], 1: [1], 2: [2], 3: [3]}


def test_cut_fork():
    dec = cut_decomposition(FORK, [0, 1])
    assert dec.parts == {0: [0, 2], 1: [1]}
    assert dec.branch_complement == []


def test_cut_errors():
    with pytest.raises(DomainError):
        cut_decomposition(FORK, [1, 2])
    with pytest.raises(DomainError):
        cut_decomposition(FORK, [0])
    with pytest.raises(DomainError):
        cut_decomposition(T([None, None]), [0])


def test_cut_reconstruction_exhaustive():
    n = 0
    for parents in all_rooted_trees(6):
        t = T(parents)
        for br in branches(t):
            dec = cut_decomposition(t, br)
            assert sorted(v for p in dec.parts.values() for v in p) == list(range(t.size))
            r = dec.reconstruct()
            # label preserving: the sum must rebuild T exactly
            for u in range(t.size):
                for v in range(t.size):
                    assert r.less(r.labels.index(u), r.labels.index(v)) == t.less(u, v)
            n += 1
    assert n == 93


# ---------------------------------------------------------- equivalences

def test_sim_examples():
    assert sim_classes(FORK, [0, 1], 0) == [[2]]
    assert sim_classes(FORK, [0, 1], 1) == [[2]]
    three = T([None, 0, 0, 0])
    assert sim_classes(three, [0, 1], 0) == [[2, 3]]
    assert sim_classes(three, [0, 1], 1) == [[2], [3]]
    chain = T([None, 0, 1])
    assert sim_classes(chain, [0, 1, 2], 0) == []


def test_sim_errors():
    with pytest.raises(DomainError):
        sim_classes(FORK, [1, 2], 0)
    with pytest.raises(DomainError):
        sim_classes(FORK, [0], 2)


def _as_relation(classes):
    return {(u, v) for c in classes for u in c for v in c}


def test_sim_refinement_exhaustive():
    for parents in all_rooted_trees(6):
        t = T(parents)
        for br in branches(t):
            for m in range(1, len(br) + 1):
                a = br[:m]
                zero, one = sim_classes(t, a, 0), sim_classes(t, a, 1)
                rest = sorted(set(range(t.size)) - set(a))
                for cls in (zero, one):
                    # partition of T minus A, so an equivalence relation on it
                    assert sorted(v for c in cls for v in c) == rest
                assert _as_relation(one) <= _as_relation(zero)


# -------------------------------------------------------------- tameness

def test_tameness_examples():
    assert tameness_profile(T([None])).n_star == 0
    assert tameness_profile(T([None])).k_star == 0
    assert tameness_profile(T([None, 0, 1])).n_star == 1
    assert tameness_profile(T([None, 0, 1])).k_star == 1
    assert tameness_profile(FORK).n_star == 2
    for k in range(2, 6):
        star = T([None] + [0] * k)
        assert tameness_profile(star).n_star >= k - 1


def test_tameness_monotone_on_subtrees():
    rng = random.Random(3)
    for parents in all_rooted_trees(6):
        t = T(parents)
        big = tameness_profile(t).n_star
        kids = children_of(t)
        for v in range(t.size):
            # the subtree above v
            below = [u for u in range(t.size) if u == v or t.less(v, u)]
            assert tameness_profile(induced(t, below)).n_star <= big
        # a random downward closed part
        keep = {0}
        for u in range(1, t.size):
            if t.parents[u] in keep and rng.random() < 0.6:
                keep.add(u)
        assert tameness_profile(induced(t, keep)).n_star <= big
        assert kids is not None


# ------------------------------------------------------------ well-order

def test_a2_fork():
    w = a2_wellorder(FORK)
    assert w.order == [0, 1, 2]
    assert w.sub_branch[()] == [0, 1]
    assert w.reps == [0, 2]


def test_a2_chain_is_tree_order():
    w = a2_wellorder(T([None, 0, 1, 2]))
    assert w.order == [0, 1, 2, 3]
    assert w.gamma == [()]


def test_a2_rejects_chain_structure():
    with pytest.raises(DomainError):
        a2_wellorder(FiniteStructure.chain(3))


def check_wellorder(t):
    w = a2_wellorder(t)
    n = t.size
    assert sorted(w.order) == list(range(n))
    for x in range(n):
        assert not w.less(x, x)
        for y in range(n):
            if x != y:
                assert w.less(x, y) != w.less(y, x)
                assert w.less(x, y) == (w.position(x) < w.position(y))
    parts = sorted(v for a in w.sub_branch.values() for v in a)
    assert parts == list(range(n))
    for a in w.sub_branch.values():
        pos = sorted(w.position(v) for v in a)
        assert pos == list(range(pos[0], pos[0] + len(a)))
        assert [v for v in w.order if v in a] == a
        assert is_chain(t, a)
        assert len({w.colour[v] for v in a}) == 1
    # siblings in Gamma with the same cut position receive distinct colours
    for eta in w.gamma:
        for other in w.gamma:
            if eta != other and eta and other and eta[:-1] == other[:-1] \
                    and w.cut_position[eta] == w.cut_position[other]:
                assert w.colour[w.rep[eta]] != w.colour[w.rep[other]]
    assert max(w.colour.values()) <= w.n_star
    return w


def test_a2_exhaustive_seven():
    count = 0
    for parents in all_rooted_trees(7):
        check_wellorder(T(parents))
        count += 1
    assert count == 85


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=50), min_size=0, max_size=9))
def test_a2_random_trees(raw):
    parents = [None] + [r % (i + 1) for i, r in enumerate(raw)]
    check_wellorder(T(parents))


# -------------------------------------------------------- determination

def test_determination_chain_corpus():
    corpus = [c for c in tree_corpus(5) if is_chain(c[0], range(c[0].size))]
    assert len(corpus) == 2 + 4 + 8 + 16 + 32
    for n in (0, 1):
        rep = determination_experiment(n, corpus)
        assert rep.least_k == n


def test_determination_full_corpus():
    corpus = tree_corpus(5)
    rep = determination_experiment(1, corpus)
    assert rep.items == 862
    assert rep.least_k == 1
    assert rep.tried == [(1, 247, 0)]
    again = determination_experiment(1, tree_corpus(5))
    assert again.digest == rep.digest and again.lines() == rep.lines()


def test_determination_ablations():
    corpus = tree_corpus(5)
    full = determination_experiment(1, corpus)
    no_bc = determination_experiment(1, corpus, drop=("Bc",))
    # the complement of the branch in the index chain is empty for finite trees
    assert no_bc.least_k == full.least_k and no_bc.tried[0][1:] == full.tried[0][1:]
    no_p = determination_experiment(1, corpus, drop=("P",))
    assert no_p.least_k is None
    assert all(conf > 0 for _, _, conf in no_p.tried)
    assert "none" in no_p.lines()[-2]
