"""Exact free-field computations for the affine Lie algebra sl2-hat.

The package realizes the loop generators as differential operators on
sparse Laurent polynomials with exact rational coefficients, and builds on
that action: module quotients and their weight censuses, localization and
twisted localization, primitive vectors, and constructive irreducibility
certificates with replayable reduction traces.
"""

from .errors import (
    ContextMismatchError,
    DomainError,
    ElementIndexError,
    ElementSyntaxError,
    HypothesisError,
    InvalidContextError,
    NonNilpotentError,
    NotIntegralError,
    NotReducibleError,
    ReductionStuckError,
    ZeroVectorError,
)
from .modules import (
    ModuleContext,
    ModuleKind,
    Params,
    Weight,
    is_member,
    make_context,
    monomial_weight,
    params,
    project,
    support_census,
    weight_of,
)
from .parsing import (
    format_element,
    format_monomial,
    format_uelement,
    parse_element,
    parse_generator,
    parse_uelement,
)
from .realization import (
    CENTRAL,
    DEGREE,
    E,
    F,
    H,
    apply_generator,
    apply_script_E,
    e_minus_i_part,
)
from .ring import (
    Element,
    Monomial,
    Q,
    X,
    Y,
    add,
    diff,
    monomial,
    mul,
    neg,
    one,
    power,
    scale,
    scale_var,
    sub,
    var,
    zero,
)
from .structure import (
    CriterionResult,
    DegreeReport,
    ProbeResult,
    ReductionTrace,
    TraceStep,
    Witness,
    canonical_generator,
    degrees,
    generate_from_generator,
    h0_components,
    h_diag_constant,
    irreducibility_criterion,
    local_nilpotency_probe,
    lowering_eigenvalue,
    primitive_vector,
    probe_leading_constant,
    probe_leading_constant_from_lowering,
    reduce_to_generator,
    reducibility_witness,
    replay_trace,
    script_e_chain_constant,
)
from .ualgebra import (
    UElement,
    UWord,
    apply_uelement,
    bracket,
    commutator_residual,
    theta,
    u_add,
    u_gen,
    u_mul,
    u_one,
    u_scalar,
    u_scale,
    uword,
)

__version__ = "0.1.0"
