"""Measurement-based steering of resonator modes into Fock and Bell states.

A resonator starting in a coherent state is driven through repeated
joint-evolution-plus-ancilla-measurement cycles. Conditioned on the ancilla
always returning to its initial state, the cycles act as a diagonal filter
in the Fock basis; choosing the period pins the target level (or level pair)
at unit reduction factor while everything else decays.
"""

__version__ = "0.1.0"

from .errors import (
    DegenerateTarget,
    DimensionMismatch,
    FockgenError,
    InconsistentStrategy,
    SchemaError,
    TailMassExceeded,
    TruncationTooLarge,
    VanishingBranch,
)
from .hilbert import (
    DensityMatrixView,
    FockVector,
    TwoModeState,
    basis_state,
    coherent_dim,
    coherent_state,
    density_view,
    fidelity,
    product_state,
)
from .kraus import (
    DiagonalKraus,
    SystemParams,
    TwoModeKraus,
    TwoModeParams,
    jc_propagator_oracle,
    kraus_diagonal,
    qutrit_propagator_oracle,
    rabi_frequency,
    reduction_coefficient,
    two_mode_kraus,
    two_mode_rabi,
)
from .protocol import (
    CycleSpec,
    EvolutionRecord,
    TrajectoryStats,
    apply_cycle,
    run_postselected,
    sample_trajectory,
    trajectory_ensemble,
)
from .schedules import (
    StrategySpec,
    TargetSpec,
    build_schedule,
    default_dims,
    initial_amplitude,
    initial_state,
    optimize_schedule,
    stabilized_indices,
    tau_bell,
    tau_excited,
    tau_ground,
)
from .metrics import (
    FidelityCurve,
    asymptotic_success,
    bell_fidelity_closed_form,
    fock_fidelity_closed_form,
    fock_success_closed_form,
    superposed_fidelity_closed_form,
)
from .config import RunConfig, parse_config, serialize_config
