"""The top-functor correspondence and what it computes.

Taking tops sends a reduced differential projective module over kQ/J^2 to
a representation of the opposite quiver: dimensions are the top
multiplicities and the reversed arrow acts by the radical datum of the
differential.  The inverse direction decorates kQ/J^2 (x) X with the
differential read off from X.  On homotopy classes of maps the
correspondence gives

    dim Hom_hot(M, N) = dim Hom(FM'', FN'') + dim Ext^1(FM'', sigma FN'')

which `hom_homotopy_dim_formula` computes, optionally cross-checked
against the brute-force count from `diffproj`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diffproj import (
    DiffMorphism,
    DiffProj,
    cohomology_dims,
    hom_homotopy_dim_bruteforce,
    is_differential_map,
    reduce as dp_reduce,
    _require_valid,
)
from .errors import (
    InternalInvariantError,
    NotAcyclicError,
    NotDifferentialMapError,
    NotReducedError,
)
from .exactla import ScalarField, mat_zeros
from .qrep import (
    Rep,
    RepMorphism,
    path_truncation,
    rep_ext1_dim,
    rep_hom_dim,
    semisimple_kQ0,
    twist_sigma,
)
from .quiver import Quiver, is_acyclic, opposite


def F_module(M: DiffProj) -> Rep:
    """Top representation of a reduced module, over the opposite quiver.

    The arrow a* acts by h_a.  Raises NotReduced on a nonzero top
    differential; callers holding general modules should reduce first.
    """
    if not M.is_reduced:
        raise NotReducedError(
            "module has a nonzero top differential; split it with reduce() first"
        )
    Qop = opposite(M.quiver)
    return Rep(Qop, M.field, M.m, M.h)


def F_morphism(f: DiffMorphism) -> RepMorphism:
    """Top blocks of a differential map between reduced modules."""
    if not (f.source.is_reduced and f.target.is_reduced):
        raise NotReducedError("both endpoints must be reduced")
    if not is_differential_map(f):
        raise NotDifferentialMapError("map does not commute with the differentials")
    return RepMorphism(F_module(f.source), F_module(f.target), f.gf)


def G_module(X: Rep) -> DiffProj:
    """Reduced differential projective module with top representation X.

    X lives over the opposite of the output's quiver; the radical datum of
    arrow a is X's map at a*.  F_module(G_module(X)) == X bit-exact.
    """
    Q = opposite(X.quiver)
    return DiffProj(
        Q, X.field, X.dims,
        tuple(mat_zeros(X.field, d, d) for d in X.dims),
        X.maps,
    )


@dataclass(frozen=True)
class HomotopyHomReport:
    """Hom/Ext split of a homotopy hom-space dimension."""

    dim_hom: int
    dim_ext_shift: int
    oracle_total: int | None = None

    @property
    def total(self) -> int:
        return self.dim_hom + self.dim_ext_shift

    def to_json(self) -> dict:
        out = {
            "dim_hom": self.dim_hom,
            "dim_ext_shift": self.dim_ext_shift,
            "total": self.total,
        }
        if self.oracle_total is not None:
            out["oracle_total"] = self.oracle_total
        return out


def hom_homotopy_dim_formula(M: DiffProj, N: DiffProj, with_oracle: bool = False) -> HomotopyHomReport:
    """Homotopy hom dimension through the top correspondence.

    Both inputs are split first; contractible summands are invisible to
    homotopy classes.  With the oracle enabled the brute-force count runs
    on the original inputs and any disagreement raises, loudly.
    """
    _require_valid(M)
    _require_valid(N)
    FM = F_module(dp_reduce(M).reduced)
    FN = F_module(dp_reduce(N).reduced)
    dim_hom = rep_hom_dim(FM, FN)
    dim_ext = rep_ext1_dim(FM, twist_sigma(FN))
    oracle = None
    if with_oracle:
        oracle = hom_homotopy_dim_bruteforce(M, N)
        if oracle != dim_hom + dim_ext:
            raise InternalInvariantError(
                f"formula total {dim_hom + dim_ext} != brute-force total {oracle}"
            )
    return HomotopyHomReport(dim_hom, dim_ext, oracle)


@dataclass(frozen=True)
class ExactnessReport:
    h_total: int
    dim_hom_simple: int
    dim_ext_simple: int
    consistent: bool

    def to_json(self) -> dict:
        return {
            "h_total": self.h_total,
            "dim_hom_simple": self.dim_hom_simple,
            "dim_ext_simple": self.dim_ext_simple,
            "consistent": self.consistent,
        }


def exactness_report(M: DiffProj) -> ExactnessReport:
    """Cohomology against hom/ext from the vertex simples.

    The total cohomology dimension must equal
    dim Hom(kQ0, FM'') + dim Ext^1(kQ0, FM''), and M is exact exactly when
    both summands vanish.
    """
    _, h_total = cohomology_dims(M)
    FM = F_module(dp_reduce(M).reduced)
    simples = semisimple_kQ0(FM.quiver, M.field)
    dim_hom = rep_hom_dim(simples, FM)
    dim_ext = rep_ext1_dim(simples, FM)
    consistent = h_total == dim_hom + dim_ext and (h_total == 0) == (
        dim_hom == 0 and dim_ext == 0
    )
    return ExactnessReport(h_total, dim_hom, dim_ext, consistent)


def longest_path_length(Q: Quiver) -> int:
    """Number of arrows on a longest directed path; Q must be acyclic."""
    if not is_acyclic(Q):
        raise NotAcyclicError("longest path is unbounded on a cyclic quiver")
    best = {v: 0 for v in Q.vertices}
    # Relax in topological order via repeated passes (small quivers).
    changed = True
    while changed:
        changed = False
        for a in Q.arrows:
            cand = best[a.src] + 1
            if cand > best[a.tgt]:
                best[a.tgt] = cand
                changed = True
    return max(best.values()) if best else 0


def truncated_generator(Q: Quiver, field: ScalarField, N: int) -> DiffProj:
    """Generator built from opposite paths of length below N.

    Left multiplication descends to the length-truncated path algebra and
    the induced differential still squares to zero, so this is a
    well-defined finite stand-in when Q has cycles.
    """
    if N < 1:
        raise ValueError(f"truncation depth must be >= 1, got {N}")
    return G_module(path_truncation(opposite(Q), field, N))


def compact_generator(Q: Quiver, field: ScalarField) -> DiffProj:
    """The canonical compact generator; finite only for acyclic quivers."""
    if not is_acyclic(Q):
        raise NotAcyclicError(
            "quiver has oriented cycles; use truncated_generator(Q, field, N)"
        )
    return truncated_generator(Q, field, longest_path_length(Q) + 1)


def default_truncation_depth(M: DiffProj) -> int:
    """Depth used by detects_zero: one beyond the total top multiplicity."""
    return 1 + sum(M.m)


def detects_zero(M: DiffProj, n_trunc: int | None = None) -> bool:
    """Whether M vanishes in the homotopy category.

    True exactly when the reduced part of M is the zero module; in that
    case hom from the truncated generator is asserted to vanish too.
    """
    _require_valid(M)
    if n_trunc is None:
        n_trunc = default_truncation_depth(M)
    answer = dp_reduce(M).reduced.is_zero
    if answer:
        C = truncated_generator(M.quiver, M.field, n_trunc)
        total = hom_homotopy_dim_bruteforce(C, M)
        if total != 0:
            raise InternalInvariantError(
                f"zero module admits {total} homotopy classes from the generator"
            )
    return answer
