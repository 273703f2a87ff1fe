"""Optimal state-dependent cloning machines for coplanar qubit families.

Public surface: family construction, the fidelity quadratic form, the
reduced (closed-form constrained) optimizer, and a brute-force oracle that
validates it without the symmetry assumptions.
"""

from .family import (
    DegenerateFamilyError,
    StateFamily,
    build_family,
    complement_basis,
    denseness,
    expansion_coeffs,
    shannon_entropy,
)
from .forms import OverlapVector, QuadraticForm, continuum_form, discrete_form, overlap_vector
from .oracle import (
    FullParams,
    OracleInfeasibleError,
    SymmetryReport,
    constraint_residuals,
    full_fidelity,
    oracle_optimize,
    output_states,
    symmetry_report,
)
from .qubit import KET0, KET1, Ket2, Ket4, inner_product, linear_combination, tensor_product
from .reduced import (
    FeasibleInterval,
    InternalConsistencyError,
    Optimum,
    Quartic,
    ReducedParams,
    c_sq_of_eta,
    derive_quartic,
    feasible_interval,
    fidelity_of_eta,
    optimize_reduced,
    restoration_residuals,
    solve_quartic,
    xi_of_eta,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateFamilyError",
    "StateFamily",
    "build_family",
    "complement_basis",
    "denseness",
    "expansion_coeffs",
    "shannon_entropy",
    "OverlapVector",
    "QuadraticForm",
    "continuum_form",
    "discrete_form",
    "overlap_vector",
    "FullParams",
    "OracleInfeasibleError",
    "SymmetryReport",
    "constraint_residuals",
    "full_fidelity",
    "oracle_optimize",
    "output_states",
    "symmetry_report",
    "KET0",
    "KET1",
    "Ket2",
    "Ket4",
    "inner_product",
    "linear_combination",
    "tensor_product",
    "FeasibleInterval",
    "InternalConsistencyError",
    "Optimum",
    "Quartic",
    "ReducedParams",
    "c_sq_of_eta",
    "derive_quartic",
    "feasible_interval",
    "fidelity_of_eta",
    "optimize_reduced",
    "restoration_residuals",
    "solve_quartic",
    "xi_of_eta",
]
