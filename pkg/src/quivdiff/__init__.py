"""Differential projective modules over radical-square-zero path algebras.

Exact linear algebra over Q and prime fields, quiver representations with
hom/ext computation, the contractible/reduced splitting, the top-functor
correspondence with the opposite quiver, homotopy hom dimensions with an
independent brute-force oracle, and the shape-based classification of the
dual-numbers algebra.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .diffproj import (
    DiffMorphism,
    DiffProj,
    RawModule,
    SplitResult,
    Violation,
    apply_witness,
    cohomology_dims,
    contractible_standard,
    diff_map_space_dim,
    dp_direct_sum,
    from_raw,
    hom_homotopy_dim_bruteforce,
    make_diffproj,
    make_raw,
    null_homotopic_space_dim,
    reconstruct_from_split,
    reduce,
    shift,
    to_raw,
    validate,
    zero_diffproj,
)
from .exactla import (
    GF,
    QQ,
    Mat,
    ScalarField,
    mat,
    mat_add,
    mat_block,
    mat_direct_sum,
    mat_identity,
    mat_image_basis,
    mat_inverse,
    mat_kernel_basis,
    mat_mul,
    mat_rank,
    mat_rref,
    mat_solve,
    mat_zeros,
)
from .koszul import (
    ExactnessReport,
    F_module,
    F_morphism,
    G_module,
    HomotopyHomReport,
    compact_generator,
    detects_zero,
    exactness_report,
    hom_homotopy_dim_formula,
    truncated_generator,
)
from .qrep import (
    Rep,
    RepMorphism,
    euler_pairing,
    iso_probe,
    make_rep,
    path_truncation,
    rep_direct_sum,
    rep_ext1_dim,
    rep_hom_basis,
    rep_hom_dim,
    semisimple_kQ0,
    simple,
    twist_sigma,
)
from .quiver import (
    ClassificationVerdict,
    Quiver,
    classify_algebra,
    connected_components,
    is_acyclic,
    is_basic_cycle,
    is_connected,
    make_quiver,
    opposite,
    parse_quiver,
)

__version__ = "0.1.0"
