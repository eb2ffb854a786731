"""weylgen: exact invariant-theory engine for pseudo-reflection groups.

Builds fundamental invariants, the Jacobian/discriminant machinery, and the
invariant derivation generators d_i with d_i(e_j) = delta_ij, all over
cyclotomic coefficient fields with no floating point anywhere.  Also ships
the shift cross product k(t)*Z^n together with the embedding of the Weyl
algebra into it.
"""

from .cyclotomic import CycNum, Rat, euler_phi, cyclotomic_polynomial, format_scalar, parse_scalar
from .errors import (
    ArityMismatchError,
    ClosureBoundExceededError,
    ConductorMismatchError,
    GroupSpecError,
    InexactDivisionError,
    InvalidInvariantsError,
    NotReflectionGroupError,
    NotScalarMultipleError,
    OperatorOrderError,
    SingularMatrixError,
    VerificationError,
    WeylgenError,
)
from .polynomials import MPoly, format_poly, parse_poly
from .ratfunc import RatFrac
from .linalg import Matrix, solve_cramer, solve_linear_system
from .groups import (
    MatrixGroup,
    Reflection,
    SubspaceVerdict,
    act_on_poly,
    build_family,
    build_reflection,
    classify_reflections,
    commuting_criterion,
    cyclic_diagonal_group,
    decompose,
    demihyperoctahedral_group,
    group_closure,
    hyperoctahedral_group,
    invariant_subspace_check,
    monomial_group,
    parse_group_spec,
    reynolds,
    symmetric_group,
    trivial_group,
)
from .invariants import (
    FactoredPower,
    InvariantSystem,
    build_invariant_system,
    compare_scalar_multiple,
    elementary_symmetric,
    express_in_invariants,
    fundamental_invariants,
    jacobian,
    reflection_product,
    semi_invariance_check,
)
from .weyl import (
    DiffOp,
    VerificationReport,
    WeylGenerators,
    act_on_op,
    assemble_weyl_generators,
    build_weyl_generators,
    format_weyl_generator,
    verify_generators,
)
from .crossprod import (
    CrossElem,
    RelationReport,
    cross_mul,
    embed_weyl,
    flipped_shift_action,
    group_act_cross,
    is_fixed_by,
    relation_check,
    shift_action,
)

__version__ = "0.1.0"
