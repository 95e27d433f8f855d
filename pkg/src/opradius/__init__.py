"""Generalized numerical radius toolkit.

Computes the generalized numerical radius w_N and the pair radius w_(N,e)
for dense complex matrices under pluggable norms, exposes an executable
registry of radius inequalities with sharpness search, and ships seeded
matrix samplers plus a batch CLI (``opradius``).
"""

from .backend import active_backend, set_backend
from .checks import (
    CheckContext,
    InequalityCheck,
    SharpnessResult,
    Verdict,
    lookup,
    registry,
    run_check,
    run_suite,
    search_sharpness,
    suite_exit_code,
)
from .matrices import (
    ConvergenceError,
    add,
    adjoint,
    as_matrix,
    cartesian_parts,
    frobenius_norm,
    hermitian_eigenvalues,
    hermitian_eigensystem,
    load_matrix,
    matrix_from_json,
    matrix_to_json,
    mul,
    save_matrix,
    scale,
    singular_values,
    trace,
)
from .norms import (
    HS,
    OP,
    TRACE,
    WNUM,
    FlagAudit,
    NormDescriptor,
    check_flags,
    norm_evaluate,
    parse_norm,
    schatten,
)
from .radius import (
    RadiusOptions,
    RadiusResult,
    w2_closed_form,
    w2e_reduced,
    w_e_vector_oracle,
    w_N,
    w_N_multi,
    w_Ne,
    w_Ne_alpha_beta,
    w_Ne_alpha_beta_multi,
    w_Ne_multi,
)
from .sampling import (
    SamplerSpec,
    SamplingError,
    SplitMix64,
    parse_sampler,
    sample,
    sample_pair,
)

__version__ = "0.1.0"

__all__ = [
    "active_backend",
    "set_backend",
    "CheckContext",
    "InequalityCheck",
    "SharpnessResult",
    "Verdict",
    "lookup",
    "registry",
    "run_check",
    "run_suite",
    "search_sharpness",
    "suite_exit_code",
    "ConvergenceError",
    "add",
    "adjoint",
    "as_matrix",
    "cartesian_parts",
    "frobenius_norm",
    "hermitian_eigenvalues",
    "hermitian_eigensystem",
    "load_matrix",
    "matrix_from_json",
    "matrix_to_json",
    "mul",
    "save_matrix",
    "scale",
    "singular_values",
    "trace",
    "HS",
    "OP",
    "TRACE",
    "WNUM",
    "FlagAudit",
    "NormDescriptor",
    "check_flags",
    "norm_evaluate",
    "parse_norm",
    "schatten",
    "RadiusOptions",
    "RadiusResult",
    "w2_closed_form",
    "w2e_reduced",
    "w_e_vector_oracle",
    "w_N",
    "w_N_multi",
    "w_Ne",
    "w_Ne_alpha_beta",
    "w_Ne_alpha_beta_multi",
    "w_Ne_multi",
    "SamplerSpec",
    "SamplingError",
    "SplitMix64",
    "parse_sampler",
    "sample",
    "sample_pair",
    "__version__",
]
