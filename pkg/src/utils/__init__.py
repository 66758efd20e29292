"""
Package initialization for utilities.
"""

from .state_utils import (
    canonical_phase,
    make_state,
    fidelity,
    bloch_to_state,
    state_to_bloch,
    random_state
)

from .spectral_utils import (
    as_hermitian,
    minimal_polynomial,
    alpha_at,
    alpha_via_ode,
    matrix_powers,
    propagator,
    expansion_operator,
    taylor_propagator
)

from .frame_utils import (
    krylov_vectors,
    build_frame,
    frame_from_vectors,
    check_necessary_condition,
    frame_intensities
)

from .injectivity_utils import (
    hermitian_basis,
    hermitian_to_coords,
    coords_to_hermitian,
    constraint_matrix,
    hermitian_nullspace,
    find_low_rank_witness,
    verify_witness,
    check_injectivity,
    ambiguous_pair
)

from .measurement_utils import (
    make_rng,
    measure_exact,
    measure_factored,
    model_discrepancy,
    add_shot_noise,
    simulate_records,
    discrepancy_profile
)

from .reconstruction_utils import (
    lambda_matrix,
    check_theorem1,
    select_times,
    recover_intensities,
    is_reference_qubit_setup,
    qubit_intensities,
    qubit_closed_form,
    general_phase_retrieval,
    exact_fit,
    reconstruct_dynamic
)

from .data_access import (
    ExperimentStore,
    load_experiment_config,
    load_measurements,
    save_measurements,
    save_report
)

__all__ = [
    # States
    'canonical_phase',
    'make_state',
    'fidelity',
    'bloch_to_state',
    'state_to_bloch',
    'random_state',
    # Spectral
    'as_hermitian',
    'minimal_polynomial',
    'alpha_at',
    'alpha_via_ode',
    'matrix_powers',
    'propagator',
    'expansion_operator',
    'taylor_propagator',
    # Frames
    'krylov_vectors',
    'build_frame',
    'frame_from_vectors',
    'check_necessary_condition',
    'frame_intensities',
    # Injectivity
    'hermitian_basis',
    'hermitian_to_coords',
    'coords_to_hermitian',
    'constraint_matrix',
    'hermitian_nullspace',
    'find_low_rank_witness',
    'verify_witness',
    'check_injectivity',
    'ambiguous_pair',
    # Measurement
    'make_rng',
    'measure_exact',
    'measure_factored',
    'model_discrepancy',
    'add_shot_noise',
    'simulate_records',
    'discrepancy_profile',
    # Reconstruction
    'lambda_matrix',
    'check_theorem1',
    'select_times',
    'recover_intensities',
    'is_reference_qubit_setup',
    'qubit_intensities',
    'qubit_closed_form',
    'general_phase_retrieval',
    'exact_fit',
    'reconstruct_dynamic',
    # Data access
    'ExperimentStore',
    'load_experiment_config',
    'load_measurements',
    'save_measurements',
    'save_report'
]
