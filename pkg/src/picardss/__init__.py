"""Exact invariants of supersingular loci on Picard modular surfaces at an inert prime."""

from .errors import GuardError, HypothesisError, IdentityCheckError
from .kfield import (
    HermitianSpace,
    LatticeBasis,
    QuadElement,
    QuadField,
    default_lattice_basis,
    hermitian_pair,
    im_delta,
    is_self_dual,
    polarization_identity_holds,
    polarization_pair,
    type_decompose,
    type_idempotents,
)
from .lfunc import (
    KroneckerCharacter,
    SurfaceInvariants,
    brute_force_su3_order,
    chern_c2,
    chern_c2_analytic,
    component_count,
    gen_bernoulli,
    index_gamma,
    l_value_neg2,
    l_value_series,
)
from .ffield import (
    BranchMap,
    Fp2,
    SeriesRing,
    TruncatedSeries,
    frobenius_twist,
    local_model_ideal,
    normal_form,
    order_at_origin,
    quotient_dimension,
    roots_of_minus_one,
    vanishing_scheme_ideal,
)
from .dieudonne import (
    BranchReport,
    TwistedMap,
    UnitaryModule,
    all_branches,
    branch_analysis,
    braid3,
    classify_stratum,
    dualize,
    filtration_ranks,
    frobenius_square_lie,
    gluing_obstruction,
    gss_deformation,
    hasse_invariant,
    sigma_block_nilpotent,
    ssp_covariant_display,
    ssp_display,
)
from .curves import FermatCurve, count_points, genus, incidence_consistency
from .intersect import (
    IntersectionReport,
    PolyInP,
    arithmetic_genus,
    chern_from_components,
    degree_l_on_component,
    self_intersection,
    symbolic_identities,
    total_self_intersection,
)

__version__ = "0.1.0"
