"""Shared formula corpora."""

from msocomp.formula import parse

# sentences and formulas in one free variable A, depth at most 2
FORMULA_TEXTS = [
    "true",
    "false",
    "empty(A)",
    "sing(A)",
    "~empty(A) & ~sing(A)",
    "EX X. sing(X)",
    "ALL X. empty(X) | ~empty(X)",
    "EX X. (sing(X) & X sub A)",
    "EX X. (X sub A & ~X = A)",
    "ALL X. (X sub A -> (empty(X) | X = A))",
    "EX X. (~X sub A & sing(X))",
    "EX X. (sing(X) & ALL Y. (sing(Y) -> (X = Y | X < Y)))",
    "EX X. (sing(X) & ALL Y. (sing(Y) -> (Y < X | Y = X)))",
    "ALL X. ALL Y. ((sing(X) & sing(Y) & ~X = Y) -> (X < Y | Y < X))",
    "EX X. EX Y. (sing(X) & sing(Y) & X < Y)",
    "EX X. (sing(X) & X sub A & ALL Y. (sing(Y) & Y sub A -> ~Y < X))",
    "EX X. (sing(X) & X sub A & ALL Y. (sing(Y) & Y sub A -> ~X < Y))",
    "EX X. EX Y. (sing(X) & sing(Y) & X sub A & Y sub A & X < Y)",
    "ALL X. (sing(X) -> X sub A)",
    "EX X. (sing(X) & ~X sub A & EX Y. (sing(Y) & Y sub A & X < Y))",
    "EX X. (sing(X) & X sub A & EX Y. (sing(Y) & ~Y sub A & X < Y))",
    "ALL X. (sing(X) & X sub A -> EX Y. (sing(Y) & X < Y))",
    "ALL X. (sing(X) & X sub A -> EX Y. (sing(Y) & Y < X))",
    "EX X. (A sub X & ~A = X)",
    "EX X. EX Y. (X sub A & Y sub A & ~X = Y & ~empty(X) & ~empty(Y))",
    "ALL X. (sing(X) -> EX Y. (sing(Y) & (X < Y | Y < X)))",
    "EX X. (sing(X) & ALL Y. (sing(Y) & X < Y -> Y sub A))",
    "EX X. (sing(X) & ~X sub A & ALL Y. (sing(Y) & Y < X -> Y sub A))",
    "ALL X. ALL Y. (sing(X) & sing(Y) & X sub A & Y sub A -> X = Y)",
    "EX X. EX Y. (sing(X) & sing(Y) & X < Y & ~X sub A & ~Y sub A)",
    "(EX X. (sing(X) & X sub A)) -> (ALL Y. (sing(Y) -> Y sub A))",
    "EX X. (~empty(X) & ALL Y. (sing(Y) & Y sub X -> Y sub A))",
]

FORMULAS = [parse(t) for t in FORMULA_TEXTS]

# uniformization corpus over X (witness) and Y (given), depth at most 2
UNIFORM_TEXTS = [
    "X sub Y",
    "X = Y",
    "Y sub X",
    "(empty(Y) & empty(X)) | (sing(X) & X sub Y)",
    "(empty(Y) & empty(X)) | (sing(X) & X sub Y & ALL Z. (sing(Z) & Z sub Y -> ~Z < X))",
    "X sub Y & ALL Z. (sing(Z) & Z sub Y -> EX W. (sing(W) & W sub X & (W = Z | W < Z)))",
    "(empty(Y) & empty(X)) | (EX Z. (sing(Z) & Z sub Y & ~Z sub X))",
    "sing(X) | empty(X)",
    "~X = Y",
    "EX Z. (sing(Z) & Z sub X) | empty(Y)",
    "X sub Y & ALL Z. (sing(Z) & Z sub Y & ~Z sub X -> EX W. (sing(W) & W sub X & W < Z))",
]

UNIFORM = [parse(t) for t in UNIFORM_TEXTS]


def arity1_sets(n, rng):
    """Predicate choices of the criterion-1 corpus: empty, each singleton,
    the whole chain and one random subset per size."""
    out = {0, (1 << n) - 1}
    out |= {1 << i for i in range(n)}
    for size in range(n + 1):
        pts = rng.sample(range(n), size)
        out.add(sum(1 << p for p in pts))
    return sorted(out)
