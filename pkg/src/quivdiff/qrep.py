"""Representations of a finite quiver over an exact field.

Hom spaces and first extension groups are computed from one linear system:
the map Theta sending a vertex-indexed family of matrices theta to the
per-arrow defects theta_t X_a - Y_a theta_s.  Its kernel is the morphism
space; the quotient of the per-arrow matrix space E by its image has the
dimension of the extension group, because path algebras are hereditary.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random

from ._blocksys import BlockSystem
from .errors import MismatchError
from .exactla import (
    Mat,
    ScalarField,
    mat,
    mat_add,
    mat_direct_sum,
    mat_identity,
    mat_kernel_basis,
    mat_mul,
    mat_neg,
    mat_rank,
    mat_scale,
    mat_zeros,
)
from .quiver import Quiver


@dataclass(frozen=True)
class Rep:
    """Dimension vector plus one exact matrix per arrow.

    dims and maps are tuples aligned with the quiver's declaration order;
    the map of arrow a has shape dims[t(a)] x dims[s(a)].
    """

    quiver: Quiver
    field: ScalarField
    dims: tuple
    maps: tuple

    def __post_init__(self):
        Q = self.quiver
        if len(self.dims) != Q.n_vertices:
            raise ValueError("dims length != number of vertices")
        if any(d < 0 for d in self.dims):
            raise ValueError("negative dimension")
        if len(self.maps) != Q.n_arrows:
            raise ValueError("maps length != number of arrows")
        for a, M in zip(Q.arrows, self.maps):
            if M.field != self.field:
                raise ValueError(f"map {a.name!r} over {M.field}, expected {self.field}")
            want = (self.dims[Q.vertex_index(a.tgt)], self.dims[Q.vertex_index(a.src)])
            if M.shape != want:
                raise ValueError(f"map {a.name!r} has shape {M.shape}, expected {want}")

    def dim(self, v: str) -> int:
        return self.dims[self.quiver.vertex_index(v)]

    def map(self, arrow_name: str) -> Mat:
        return self.maps[self.quiver.arrow_index(arrow_name)]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)


def make_rep(Q: Quiver, field: ScalarField, dims, maps=None) -> Rep:
    """Build a Rep from dicts or sequences; omitted maps are zero."""
    if isinstance(dims, dict):
        dims = tuple(int(dims.get(v, 0)) for v in Q.vertices)
    else:
        dims = tuple(int(d) for d in dims)
    maps = dict(maps or {})
    out = []
    for a in Q.arrows:
        rows = dims[Q.vertex_index(a.tgt)]
        cols = dims[Q.vertex_index(a.src)]
        M = maps.pop(a.name, None)
        if M is None:
            out.append(mat_zeros(field, rows, cols))
        elif isinstance(M, Mat):
            out.append(M)
        else:
            out.append(mat(field, M) if M else mat_zeros(field, rows, cols))
    if maps:
        raise ValueError(f"maps for unknown arrows: {sorted(maps)}")
    return Rep(Q, field, dims, tuple(out))


@dataclass(frozen=True)
class RepMorphism:
    source: Rep
    target: Rep
    blocks: tuple  # per vertex, shape dims_Y(i) x dims_X(i)

    def block(self, v: str) -> Mat:
        return self.blocks[self.source.quiver.vertex_index(v)]

    def is_morphism(self) -> bool:
        """Exact intertwining check for every arrow."""
        X, Y = self.source, self.target
        Q = X.quiver
        for i, a in enumerate(Q.arrows):
            s, t = Q.vertex_index(a.src), Q.vertex_index(a.tgt)
            if mat_mul(self.blocks[t], X.maps[i]) != mat_mul(Y.maps[i], self.blocks[s]):
                return False
        return True


def rep_identity_morphism(X: Rep) -> RepMorphism:
    return RepMorphism(X, X, tuple(mat_identity(X.field, d) for d in X.dims))


def rep_compose(g: RepMorphism, f: RepMorphism) -> RepMorphism:
    if f.target != g.source:
        raise MismatchError("morphisms are not composable")
    blocks = tuple(mat_mul(gb, fb) for gb, fb in zip(g.blocks, f.blocks))
    return RepMorphism(f.source, g.target, blocks)


def _check_pair(X: Rep, Y: Rep):
    if X.quiver != Y.quiver:
        raise MismatchError("representations live over different quivers")
    if X.field != Y.field:
        raise MismatchError(f"field mismatch: {X.field} vs {Y.field}")


def _intertwining_system(X: Rep, Y: Rep) -> BlockSystem:
    """Theta: (theta_i) -> (theta_t X_a - Y_a theta_s) per arrow."""
    _check_pair(X, Y)
    Q = X.quiver
    sys = BlockSystem(X.field)
    theta = [sys.add_var(Y.dims[i], X.dims[i]) for i in range(Q.n_vertices)]
    for i, a in enumerate(Q.arrows):
        s, t = Q.vertex_index(a.src), Q.vertex_index(a.tgt)
        eq = sys.add_eq(Y.dims[t], X.dims[s])
        sys.add_right(eq, theta[t], X.maps[i])
        sys.add_left(eq, theta[s], mat_neg(Y.maps[i]))
    return sys


def rep_hom_basis(X: Rep, Y: Rep) -> list:
    """A basis of Hom(X, Y) as RepMorphism objects."""
    sys = _intertwining_system(X, Y)
    Theta = sys.to_mat()
    K = mat_kernel_basis(Theta)
    out = []
    for j in range(K.cols):
        vec = K.col(j)
        blocks = tuple(sys.unflatten(vec, i) for i in range(X.quiver.n_vertices))
        out.append(RepMorphism(X, Y, blocks))
    return out


def rep_hom_dim(X: Rep, Y: Rep) -> int:
    sys = _intertwining_system(X, Y)
    return sys.n_vars - mat_rank(sys.to_mat())


def rep_ext1_dim(X: Rep, Y: Rep) -> int:
    """dim E - rank Theta, with E the raw per-arrow matrix space."""
    sys = _intertwining_system(X, Y)
    return sys.n_eqs - mat_rank(sys.to_mat())


def euler_pairing(Q: Quiver, x, y) -> int:
    """sum_i x_i y_i - sum_a x_{s(a)} y_{t(a)}, on dimension vectors."""
    if isinstance(x, dict):
        x = [x.get(v, 0) for v in Q.vertices]
    if isinstance(y, dict):
        y = [y.get(v, 0) for v in Q.vertices]
    x = list(x)
    y = list(y)
    if len(x) != Q.n_vertices or len(y) != Q.n_vertices:
        raise ValueError("dimension vectors must be indexed by the vertices")
    total = sum(a * b for a, b in zip(x, y))
    for a in Q.arrows:
        total -= x[Q.vertex_index(a.src)] * y[Q.vertex_index(a.tgt)]
    return total


def twist_sigma(X: Rep) -> Rep:
    """Sign twist: negate every arrow map (an involution; identity in char 2)."""
    return Rep(X.quiver, X.field, X.dims, tuple(mat_neg(M) for M in X.maps))


def simple(Q: Quiver, field: ScalarField, v: str) -> Rep:
    dims = tuple(1 if w == v else 0 for w in Q.vertices)
    return make_rep(Q, field, dims)


def semisimple_kQ0(Q: Quiver, field: ScalarField) -> Rep:
    """One-dimensional space at every vertex, all maps zero."""
    return make_rep(Q, field, (1,) * Q.n_vertices)


def _paths_shorter_than(Q: Quiver, N: int):
    """Per vertex: paths p with t(p) = vertex and len(p) < N.

    A path is the tuple of its arrow names in order of application; basis
    order is (length, name tuple), which fixes all matrices.
    """
    frontier = {v: [()] for v in Q.vertices}
    per_vertex = {v: [()] for v in Q.vertices}
    for _ in range(N - 1):
        new_frontier = {v: [] for v in Q.vertices}
        grew = False
        for v in Q.vertices:
            for p in frontier[v]:
                for i in Q.arrows_out_of(v):
                    a = Q.arrows[i]
                    new_frontier[a.tgt].append(p + (a.name,))
                    grew = True
        for v in Q.vertices:
            per_vertex[v].extend(new_frontier[v])
        frontier = new_frontier
        if not grew:
            break
    return {v: sorted(ps, key=lambda p: (len(p), p)) for v, ps in per_vertex.items()}


def path_truncation(Q: Quiver, field: ScalarField, N: int) -> Rep:
    """Paths of length < N as a representation; arrows act by composition.

    Composites that reach length N are truncated to zero.  For an acyclic
    quiver and N beyond the longest path this is the full regular module.
    """
    if N < 1:
        raise ValueError(f"truncation depth must be >= 1, got {N}")
    basis = _paths_shorter_than(Q, N)
    index = {v: {p: k for k, p in enumerate(basis[v])} for v in Q.vertices}
    dims = tuple(len(basis[v]) for v in Q.vertices)
    maps = {}
    zero, one = field.zero(), field.one()
    for a in Q.arrows:
        rows = dims[Q.vertex_index(a.tgt)]
        cols = dims[Q.vertex_index(a.src)]
        buf = [[zero] * cols for _ in range(rows)]
        for j, p in enumerate(basis[a.src]):
            q = p + (a.name,)
            if len(q) < N:
                buf[index[a.tgt][q]][j] = one
        maps[a.name] = mat(field, buf) if rows and cols else mat_zeros(field, rows, cols)
    return make_rep(Q, field, dims, maps)


def rep_direct_sum(X: Rep, Y: Rep) -> Rep:
    _check_pair(X, Y)
    dims = tuple(a + b for a, b in zip(X.dims, Y.dims))
    maps = tuple(mat_direct_sum(a, b) for a, b in zip(X.maps, Y.maps))
    return Rep(X.quiver, X.field, dims, maps)


@dataclass(frozen=True)
class IsoProbeResult:
    kind: str  # "iso" | "not_iso" | "inconclusive"
    witness: RepMorphism | None = None
    reason: str | None = None


def _random_element(field: ScalarField, rng: Random):
    if field.is_prime_field:
        return rng.randrange(field.p)
    return rng.randint(-9, 9)


def iso_probe(X: Rep, Y: Rep, trials: int = 8, seed: int = 0) -> IsoProbeResult:
    """Randomized isomorphism test with one-sided certainty.

    "not_iso" answers are certified by invariants (dimension vectors, Hom
    dimensions); "iso" answers carry a verified witness.  Only
    "inconclusive" is uncertain, after `trials` random draws from the
    morphism space fail to be invertible at every vertex.
    """
    _check_pair(X, Y)
    if X.dims != Y.dims:
        return IsoProbeResult("not_iso", reason=f"dimension vectors differ: {X.dims} vs {Y.dims}")
    if all(d == 0 for d in X.dims):
        return IsoProbeResult("iso", witness=rep_identity_morphism(X))
    basis = rep_hom_basis(X, Y)
    back = rep_hom_dim(Y, X)
    if len(basis) != back:
        return IsoProbeResult(
            "not_iso", reason=f"hom dimensions differ: {len(basis)} vs {back}"
        )
    if not basis:
        return IsoProbeResult("not_iso", reason="no nonzero homomorphisms")
    rng = Random(seed)
    field = X.field
    for _ in range(trials):
        coeffs = [_random_element(field, rng) for _ in basis]
        blocks = []
        for i in range(X.quiver.n_vertices):
            acc = mat_zeros(field, Y.dims[i], X.dims[i])
            for c, f in zip(coeffs, basis):
                if c:
                    acc = mat_add(acc, mat_scale(c, f.blocks[i]))
            blocks.append(acc)
        if all(mat_rank(b) == b.rows == b.cols for b in blocks):
            return IsoProbeResult("iso", witness=RepMorphism(X, Y, tuple(blocks)))
    return IsoProbeResult("inconclusive", reason=f"no invertible combination in {trials} trials")
