"""Exact determinantal polynomial convolutions with brute-force oracles."""

from .polyalg import (
    MultiPoly,
    as_fraction,
    coefficient_of,
    format_poly,
    format_rational,
    parse_rational,
    partial_derivative,
    poly_mul,
    poly_substitute,
)
from .matpoly import (
    IndexSet,
    PolyMatrix,
    minor,
    minor_of_product,
    minor_of_sum,
    mixed_discriminant,
)
from .ensembles import (
    CapExceededError,
    EnsembleSpec,
    SignedPermutation,
    enumerate_signed_permutations,
    expectation_over_ensemble,
    group_order,
    haar_orthogonal_sample,
    sample_signed_permutation,
    verify_minor_orthogonality,
)
from .convolve import (
    GlobalInstance,
    LocalInstance,
    boxplus,
    boxplus_oracle,
    boxtimes,
    boxtimes_oracle,
    global_convolution,
    global_expectation_oracle,
    l_operator,
    local_convolution,
    local_expectation_oracle,
    mixed_discriminant_identity_check,
    nonhermitian_mult,
    nonhermitian_oracle,
    rect_boxplus,
    rect_boxplus_oracle,
    star_convolve,
)
from .gsvd import (
    GsvcpCoeffs,
    GsvcpInstance,
    block_determinant_identity_check,
    extract_gsvcp_coeffs,
    gsvcp,
    gsvcp_operator_form,
    gsvd_charpoly_identity_check,
    gsvd_convolve,
    gsvd_expectation_oracle,
)
from .permanent import (
    RankDecomposition,
    lowrank_permanent,
    ryser_permanent,
    term_count_report,
)

__version__ = "0.1.0"
