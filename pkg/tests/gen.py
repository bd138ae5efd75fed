"""Shared golden quivers and random instance generators for the test suite.

All randomness flows through explicit random.Random instances so every
test run is reproducible.
"""

from fractions import Fraction
from random import Random

from quivdiff import (
    GF,
    QQ,
    DiffProj,
    Mat,
    ScalarField,
    contractible_standard,
    dp_direct_sum,
    make_diffproj,
    make_quiver,
    make_rep,
    mat_rank,
    opposite,
)
from quivdiff.diffproj import conjugate
from quivdiff.exactla import mat_identity, mat_zeros

# --- golden quivers -------------------------------------------------------

A2 = make_quiver(["1", "2"], [("a", "1", "2")])
A3 = make_quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")])
LOOP = make_quiver(["1"], [("a", "1", "1")])
TWO_CYCLE = make_quiver(["1", "2"], [("a", "1", "2"), ("b", "2", "1")])
THREE_CYCLE = make_quiver(
    ["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")]
)
# Three vertices, two routes from 1 to 3: one through 2, one direct.
TRIANGLE = make_quiver(
    ["1", "2", "3"],
    [("alpha", "1", "2"), ("beta", "2", "3"), ("gamma", "1", "3")],
)
# A loop at 1 plus an arrow out of it: cyclic but not a basic cycle.
LOOP_PLUS_ARROW = make_quiver(["1", "2"], [("alpha", "1", "1"), ("beta", "1", "2")])
KRONECKER = make_quiver(["1", "2"], [("a", "1", "2"), ("b", "1", "2")])

GOLDEN_QUIVERS = [A2, A3, LOOP, TWO_CYCLE, THREE_CYCLE, TRIANGLE, LOOP_PLUS_ARROW, KRONECKER]

FIELDS = [QQ, GF(2), GF(5)]


# --- random generators -------------------------------------------------------

def random_scalar(field: ScalarField, rng: Random):
    if field.is_prime_field:
        return rng.randrange(field.p)
    num = rng.randint(-4, 4)
    den = rng.choice([1, 1, 1, 2, 3])
    return Fraction(num, den)


def random_mat(field: ScalarField, rows: int, cols: int, rng: Random) -> Mat:
    return Mat(field, rows, cols, tuple(
        random_scalar(field, rng) for _ in range(rows * cols)
    ))


def random_invertible(field: ScalarField, n: int, rng: Random) -> Mat:
    if n == 0:
        return mat_identity(field, 0)
    while True:
        M = random_mat(field, n, n, rng)
        if mat_rank(M) == n:
            return M


def random_quiver(rng: Random, max_vertices=6, max_arrows=10):
    nv = rng.randint(1, max_vertices)
    na = rng.randint(0, max_arrows)
    vertices = [str(i + 1) for i in range(nv)]
    arrows = []
    for k in range(na):
        arrows.append((f"a{k + 1}", rng.choice(vertices), rng.choice(vertices)))
    return make_quiver(vertices, arrows)


def random_rep(Q, field, rng: Random, max_dim=6):
    dims = tuple(rng.randint(0, max_dim) for _ in Q.vertices)
    maps = {}
    for a in Q.arrows:
        rows = dims[Q.vertex_index(a.tgt)]
        cols = dims[Q.vertex_index(a.src)]
        maps[a.name] = random_mat(field, rows, cols, rng)
    return make_rep(Q, field, dims, maps)


def random_reduced(Q, field, rng: Random, max_m=2) -> DiffProj:
    """Random reduced module: random tops, zero g, random radical datum."""
    m = tuple(rng.randint(0, max_m) for _ in Q.vertices)
    h = {}
    for a in Q.arrows:
        rows = m[Q.vertex_index(a.src)]
        cols = m[Q.vertex_index(a.tgt)]
        h[a.name] = random_mat(field, rows, cols, rng)
    return make_diffproj(Q, field, m, h=h)


def random_nilpotent_reduced(Q, field, rng: Random, max_m=2) -> DiffProj:
    """Reduced module whose top representation is nilpotent.

    Choose a global order on (vertex, layer) slots and let each h block
    only map lower layers to strictly higher ones, so some power of the
    radical action is zero.
    """
    m = tuple(rng.randint(0, max_m) for _ in Q.vertices)
    layer = {(i, j): rng.randint(0, 3) for i in range(len(m)) for j in range(max(m))}
    h = {}
    zero = field.zero()
    for a in Q.arrows:
        s, t = Q.vertex_index(a.src), Q.vertex_index(a.tgt)
        rows, cols = m[s], m[t]
        buf = []
        for r in range(rows):
            for c in range(cols):
                # h_a maps the layer of (t, c) to the layer of (s, r)
                if layer[(s, r)] > layer[(t, c)]:
                    buf.append(random_scalar(field, rng))
                else:
                    buf.append(zero)
        h[a.name] = Mat(field, rows, cols, tuple(buf))
    return make_diffproj(Q, field, m, h=h)


def random_module_automorphism(M: DiffProj, rng: Random):
    """A (g, h) pair with invertible tops and arbitrary radical datum."""
    Q, field = M.quiver, M.field
    S = tuple(random_invertible(field, d, rng) for d in M.m)
    k = []
    for a in Q.arrows:
        s, t = Q.vertex_index(a.src), Q.vertex_index(a.tgt)
        k.append(random_mat(field, M.m[s], M.m[t], rng))
    return S, tuple(k)


def random_split_instance(Q, field, rng: Random, max_m=2, max_r=1, nilpotent=False):
    """(conjugated direct sum, reduced part, contractible multiplicities)."""
    maker = random_nilpotent_reduced if nilpotent else random_reduced
    red = maker(Q, field, rng, max_m=max_m)
    mults = tuple(rng.randint(0, max_r) for _ in Q.vertices)
    M = dp_direct_sum(red, contractible_standard(Q, field, mults))
    u = random_module_automorphism(M, rng)
    return conjugate(M, u), red, mults


def random_diffproj(Q, field, rng: Random, max_m=2, max_r=1, nilpotent=False) -> DiffProj:
    return random_split_instance(Q, field, rng, max_m, max_r, nilpotent)[0]
