"""Level matrices, their resolutions and almost Cohen-Macaulay three-generated ideals."""

from .errors import (
    CertificationError,
    CharacteristicError,
    ContractViolation,
    LevelmatError,
    ParseError,
    PreconditionError,
    ResolutionShapeError,
    ResourceLimitError,
    RingMismatchError,
    ShapeError,
)
from .groebner import (
    GroebnerBasis,
    Limits,
    MonomialOrder,
    buchberger,
    dimension,
    height,
    ideal_contains,
    ideal_equal,
    normal_form,
    syzygies,
)
from .latent import LatentData, LatentReport, check_nonperfect_shifts, latent_from_shifts, validate_latent
from .level import (
    Certification,
    LevelMatrix,
    certify_level,
    check_degree_shape,
    embed_identity_level,
    minors_fixing_lower_block,
    monomial_level,
)
from .matrices import (
    GradedMap,
    PolyMatrix,
    adjugate,
    compound,
    determinant,
    ideal_of_minors,
    minor,
    rank_ff,
    signed_maximal_minors,
)
from .resolution import (
    GradedComplex,
    HilbertNumerator,
    build_resolution,
    buchsbaum_eisenbud_check,
    hilbert_numerator,
    recover_level_matrix,
    resolve_3generated,
    verify_complex,
)
from .rim import (
    build_K,
    height_equivalences,
    vasconcelos_identity_a,
    vasconcelos_identity_b,
    verify_rank2_compound,
)
from .ring import QQ, Field, Polynomial, PolyRing, is_homogeneous, parse_poly, partial_derivative, poly_op

__version__ = "0.1.0"
