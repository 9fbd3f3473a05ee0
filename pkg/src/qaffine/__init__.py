"""Qudit channels as dynamical matrices, weighted Kraus sets and affine maps
of the polarization vector."""
from .errors import DimensionError, NotHermitianError, ParameterError, QAffineError
from .maps import (
    AffineMap,
    DynamicalMapB,
    KrausSet,
    affine_from_dynamical,
    affine_from_osr,
    antisymmetric_part,
    apply_affine,
    apply_dynamical,
    apply_osr,
    check_trace_preserving,
    check_unital,
    compose_affine,
    decompose_kraus,
    dynamical_from_osr,
    osr_from_dynamical,
    svd_affine,
)
from .state import (
    DensityMatrix,
    PolarizationVector,
    from_polarization,
    min_eigenvalue,
    purity,
    s3_invariant,
    to_polarization,
)
from .su_basis import (
    GeneratorSet,
    StructureTensors,
    compute_structure_constants,
    cross_product,
    generate_gellmann,
    star_product,
    verify_identities,
)

__version__ = "0.1.0"
