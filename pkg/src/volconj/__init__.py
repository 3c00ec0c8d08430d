"""volconj: colored Jones polynomials at deformed roots of unity and the
parameterized volume conjecture machinery (potentials, volume function,
Schlafli identity, A-polynomial pairing, surgery coefficients)."""

from .errors import (
    AmbiguousBranchError,
    DomainError,
    InsufficientDataError,
    NumericalError,
    PoleError,
    VolconjError,
)
from .numerics import (
    LimitEstimate,
    LogComplex,
    central_derivative,
    derivative,
    dilog,
    extrapolate,
    log_branch_neg,
    log_principal,
    log_sum_exp,
)
from .knots import (
    APolynomial,
    BivariatePolynomial,
    KnotSpec,
    UnivariatePolynomial,
    a_polynomial,
    alexander,
    alexander_roots,
    eval_bivariate,
)
from .jones import (
    JonesEvaluation,
    colored_jones,
    colored_jones_fig8,
    colored_jones_torus,
    log_jones_scaled,
    log_jones_sequence,
)
from .geometry import (
    GeometryPoint,
    GukovReport,
    MMReport,
    SaddleY,
    SharedRootReport,
    geodesic_length,
    geometry_point,
    gukov_check,
    h_closed,
    h_numeric,
    mm_check,
    nz_potential,
    schlafli_residual,
    shared_root_check,
    solve_y,
    surgery_coefficients,
    torus_in_region,
    v_of_u,
    volume,
    volume_geodesic_form,
)
from .sweep import SweepJob, SweepResult, run_sweep

__version__ = "0.1.0"
