"""Kernel orthogonal polynomials, spectral transformations, and
continued-fraction ratio machinery, with a quadrature-based moment oracle.

Everything is pure and immutable after construction; see the module
docstrings for the conventions (monic sequences, 1-based coefficient
indices, lambda_1 = mu_0).
"""

from .errors import (
    ConstraintViolated,
    DegenerateDenominator,
    Divergent,
    EvalAtShift,
    InvalidAlphas,
    IteratedUndefined,
    KernelUndefined,
    NonConvergent,
    NotPositiveDefinite,
    OpxError,
    ParameterOutOfRange,
    PoleAtSample,
    ShiftInsideSupport,
    ZeroDenominator,
)
from .families import (
    FamilySpec,
    PolySequence,
    chebyshev1,
    custom_family,
    eval_sequence,
    eval_table,
    jacobi,
    laguerre,
    monic_coefficient_table,
    norm_products,
    recurrence_coefficients,
)
from .kernels import (
    IteratedKernelContext,
    KernelContext,
    cd_kernel,
    iterated_kernel,
    kernel_family,
    kernel_poly,
    kernel_recurrence,
    op_from_kernels,
    product_orthogonality_check,
)
from .moments import (
    Base,
    Christoffel,
    GaussRule,
    Geronimus,
    Uvarov,
    apply_functional,
    gauss_rule,
    integrate_until_stable,
    moment_sequence,
    orthogonality_residual,
)
from .quasi import (
    DifferenceEqCoeffs,
    QkOrthogonalityReport,
    QuasiSpec,
    difference_equation_coeffs,
    difference_equation_residual,
    qk_orthogonality_check,
    quasi_kernel,
)
from .ratios import (
    ChainSequence,
    ContinuedFraction,
    chain_params,
    confluent_cd,
    evaluate_cf,
    gauss_cf_ratio,
    hyp_series,
    jacobi_ratio_cf,
    kernel_ratio_limit,
    kummer_cf_ratio,
    laguerre_mixed_cf,
    laguerre_ratio_cf,
)
from .transforms import (
    GeronimusData,
    RecoveryCoefficients,
    UvarovData,
    christoffel_recovery_poly,
    geronimus_data,
    geronimus_family,
    geronimus_mass0,
    geronimus_poly,
    geronimus_recovery_poly,
    op_from_geronimus,
    order2_constraint_rhs,
    order2_recovery_poly,
    recover_christoffel,
    recover_geronimus,
    recover_order2,
    recover_uvarov,
    uvarov_data,
    uvarov_poly,
    uvarov_recovery_poly,
)

__version__ = "0.1.0"
