"""Exact bigraded calculus for invariant almost Hermitian structures.

The package computes, in exact rational arithmetic, the bidegree
decomposition of the Chevalley-Eilenberg differential on a Lie algebra
with a compatible almost complex structure and inner product, verifies
the operator identities that hold in the almost Kahler case, and derives
harmonic dimension diamonds, Lefschetz maps, signature data, and
obstructions to compatible symplectic structures.

Most callers want:

    from akh import catalog, build, verify_identities, ell_diamond

and then the report helpers in :mod:`akh.harmonic`.
"""

from .exact import (
    ExactError,
    ExactMatrix,
    GaussScalar,
    ParamPoly,
    hermitian_signature,
    in_span,
    kernel,
    rank,
    rref,
    symmetric_signature,
)
from .forms import (
    AlgebraError,
    BigradedAlgebra,
    BlockOperator,
    Form,
    build,
    d_squared_relations,
    form_from_coordinates,
    form_from_json,
    form_to_json,
)
from .harmonic import (
    AK_NONEXISTENCE_VERDICT,
    AkNonexistenceReport,
    Diamond,
    HarmonicError,
    HodgeIndexReport,
    HodgeRiemannReport,
    HolomorphicReport,
    LefschetzReport,
    ObstructionReport,
    PrimitiveDecomposition,
    ak_nonexistence_report,
    betti,
    ell_diamond,
    hard_lefschetz,
    harmonic_basis,
    hodge_index,
    hodge_riemann_check,
    holomorphic_forms,
    mu_bar_cohomology,
    obstruction_report,
    primitive_decomposition,
)
from .model import (
    CATALOG_NAMES,
    LieModel,
    ModelError,
    StructureReport,
    catalog,
    load_model,
    model_from_json,
    model_to_json,
    save_model,
    validate,
)
from .operators import (
    IdentityLedger,
    LedgerEntry,
    adjoint,
    graded_commutator,
    laplacian,
    laplacian_symmetry_witness,
    ledger_to_text,
    star_conjugate,
    verify_identities,
)

__version__ = "0.1.0"

__all__ = [
    "AK_NONEXISTENCE_VERDICT",
    "AkNonexistenceReport",
    "AlgebraError",
    "BigradedAlgebra",
    "BlockOperator",
    "CATALOG_NAMES",
    "Diamond",
    "ExactError",
    "ExactMatrix",
    "Form",
    "GaussScalar",
    "HarmonicError",
    "HodgeIndexReport",
    "HodgeRiemannReport",
    "HolomorphicReport",
    "IdentityLedger",
    "LedgerEntry",
    "LefschetzReport",
    "LieModel",
    "ModelError",
    "ObstructionReport",
    "ParamPoly",
    "PrimitiveDecomposition",
    "StructureReport",
    "adjoint",
    "ak_nonexistence_report",
    "betti",
    "build",
    "catalog",
    "d_squared_relations",
    "ell_diamond",
    "form_from_coordinates",
    "form_from_json",
    "form_to_json",
    "graded_commutator",
    "hard_lefschetz",
    "harmonic_basis",
    "hermitian_signature",
    "hodge_index",
    "hodge_riemann_check",
    "holomorphic_forms",
    "in_span",
    "kernel",
    "laplacian",
    "laplacian_symmetry_witness",
    "ledger_to_text",
    "load_model",
    "model_from_json",
    "model_to_json",
    "mu_bar_cohomology",
    "obstruction_report",
    "primitive_decomposition",
    "rank",
    "rref",
    "save_model",
    "star_conjugate",
    "symmetric_signature",
    "validate",
    "verify_identities",
]
