"""
urfock: simulator and verification suite for a truncated 4-mode bosonic
tensor space and its algebraic superstructure.

Core concepts:
- Truncated bosonic Fock space over 4 modes (total occupation <= n_max),
  with ladder operators in three unitarily related mode conventions
  (abcd raw modes, ABCD complex combinations, xyzn position modes).
- Position/momentum quadratures and a positive-semidefinite energy
  operator E = sqrt(Px^2 + Py^2 + Pz^2).
- Hermite-function map from occupation labels to 3-D wavefunctions.
- Octonion arithmetic, G2 generator checks, Dirac matrices.
- Parabose (Green ansatz) many-body layer, diagonal-matching
  interactions, and a correspondence quantizer.
- Spinor-bilinear metric tensors and a quantized Ricci evaluator.
"""

from .fock import (
    MIXING_XYZN,
    FockOperator,
    FockSpace,
    StateVector,
    basis_state,
    build_space,
    change_basis_xyzn,
    elementary_ladder,
    interior_projector,
    ladder,
    ladder_ABCD,
    mode_transform,
    permanent,
    transform_matrix_element,
    vacuum,
)
from .modeops import (
    QuadratureSet,
    apply_four_momentum,
    build_quadratures,
    number_energy_commutator_norm,
    total_number,
)
from .spatial import (
    Grid3,
    WaveField,
    export_wavefield,
    hermite_fn,
    hermite_gram,
    quadrature_overlap,
    state_grid_norm,
    state_to_wavefield,
)
from .dynamics import evolve_fock, evolve_fock_series, klein_gordon_residual
from .algebra import (
    FANO_LINES,
    DiracMatrices,
    G2GeneratorSet,
    Octonion,
    StructureConstantTable,
    associator,
    build_dirac,
    build_g2_generators,
    derive_eps4,
    g2_closure_report,
    jacobi_check,
    oct_mul,
)
from .internal import (
    ExtendedState,
    InternalState,
    MajoranaSpinor,
    UrSpinor,
    build_internal,
    dirac_hamiltonian,
    dirac_kernel,
    dirac_operator,
    extend_state,
    spinor_to_vector,
)
from .manybody import (
    LayerTwoSpace,
    MultiObjectState,
    ObjectRegistry,
    build_green_components,
    em_demo,
    evolve_interacting,
    interaction_apply,
    parabose_ladder,
    product_state,
    propagator,
    quantize_expression,
    schmidt_entropy,
)
from .gravity import (
    GravitonState,
    RicciResult,
    SpinorMetric,
    build_graviton,
    build_metric,
    classical_ricci_oracle,
    classical_term_evaluation,
    evaluate_quantized_ricci,
    metric_long_form,
    ricci_symmetry_defect,
    ricci_terms,
)

__all__ = [
    # fock
    "MIXING_XYZN",
    "FockOperator",
    "FockSpace",
    "StateVector",
    "basis_state",
    "build_space",
    "change_basis_xyzn",
    "elementary_ladder",
    "interior_projector",
    "ladder",
    "ladder_ABCD",
    "mode_transform",
    "permanent",
    "transform_matrix_element",
    "vacuum",
    # modeops
    "QuadratureSet",
    "apply_four_momentum",
    "build_quadratures",
    "number_energy_commutator_norm",
    "total_number",
    # spatial
    "Grid3",
    "WaveField",
    "export_wavefield",
    "hermite_fn",
    "hermite_gram",
    "quadrature_overlap",
    "state_grid_norm",
    "state_to_wavefield",
    # dynamics
    "evolve_fock",
    "evolve_fock_series",
    "klein_gordon_residual",
    # algebra
    "FANO_LINES",
    "DiracMatrices",
    "G2GeneratorSet",
    "Octonion",
    "StructureConstantTable",
    "associator",
    "build_dirac",
    "build_g2_generators",
    "derive_eps4",
    "g2_closure_report",
    "jacobi_check",
    "oct_mul",
    # internal
    "ExtendedState",
    "InternalState",
    "MajoranaSpinor",
    "UrSpinor",
    "build_internal",
    "dirac_hamiltonian",
    "dirac_kernel",
    "dirac_operator",
    "extend_state",
    "spinor_to_vector",
    # manybody
    "LayerTwoSpace",
    "MultiObjectState",
    "ObjectRegistry",
    "build_green_components",
    "em_demo",
    "evolve_interacting",
    "interaction_apply",
    "parabose_ladder",
    "product_state",
    "propagator",
    "quantize_expression",
    "schmidt_entropy",
    # gravity
    "GravitonState",
    "RicciResult",
    "SpinorMetric",
    "build_graviton",
    "build_metric",
    "classical_ricci_oracle",
    "classical_term_evaluation",
    "evaluate_quantized_ricci",
    "metric_long_form",
    "ricci_symmetry_defect",
    "ricci_terms",
]
