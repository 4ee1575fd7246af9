"""Evolution-and-measurement cycles: post-selected runs and Monte-Carlo trajectories.

A cycle multiplies the state by the diagonal reduction coefficients of its
measurement operator and renormalizes; the squared norm before renormalizing
is the per-cycle success probability. Post-selected runs keep every cycle
successful and track the cumulative success probability. Trajectories sample
each outcome and restart the whole protocol from the initial state on
failure; the failed branch is discarded, never propagated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, VanishingBranch
from .hilbert import FockVector, State, TwoModeState, fidelity
from .kraus import (
    DiagonalKraus,
    SystemParams,
    TwoModeKraus,
    TwoModeParams,
    kraus_diagonal,
    two_mode_kraus,
)

MIN_BRANCH_PROBABILITY = 1e-300
DEFAULT_MAX_RESTARTS = 1_000_000


@dataclass(frozen=True)
class CycleSpec:
    """One evolution-and-measurement round: period, measured branch, active couplings."""

    tau: float
    meas_label: str
    params: SystemParams | TwoModeParams

    def __post_init__(self):
        if not self.tau > 0.0:
            raise ValueError("tau must be positive")
        if isinstance(self.params, TwoModeParams):
            if self.meas_label != "g":
                raise ValueError("two-mode cycles measure the qutrit ground state")
        elif self.meas_label not in ("e", "g"):
            raise ValueError(f"bad measurement label {self.meas_label!r}")


@dataclass(frozen=True)
class EvolutionRecord:
    """Per-cycle fidelity and cumulative success of a post-selected run.

    Entry 0 is the initial state (success probability 1). `states` holds the
    normalized snapshots when requested, aligned with `cycles`.
    """

    cycles: np.ndarray
    fidelity: np.ndarray
    success: np.ndarray
    states: list[State] | None = None

    def final_fidelity(self) -> float:
        return float(self.fidelity[-1])

    def final_success(self) -> float:
        return float(self.success[-1])

    def fidelity_at(self, n: int) -> float:
        return float(self.fidelity[n])

    def success_at(self, n: int) -> float:
        return float(self.success[n])


@dataclass
class TrajectoryStats:
    """Restart bookkeeping for stochastic runs.

    `attempts` counts protocol starts (each restart is a new attempt),
    `failure_counts[i]` the number of attempts that failed at cycle i+1,
    `total_cycles` every cycle consumed including the failing ones.
    """

    attempts: int = 0
    accepted_full_runs: int = 0
    failure_counts: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    total_cycles: int = 0

    def merge(self, other: "TrajectoryStats") -> None:
        if self.failure_counts.size == 0:
            self.failure_counts = np.zeros_like(other.failure_counts)
        self.attempts += other.attempts
        self.accepted_full_runs += other.accepted_full_runs
        self.failure_counts = self.failure_counts + other.failure_counts
        self.total_cycles += other.total_cycles

    def survivors_past(self, n: int) -> int:
        """Attempts that completed cycle n successfully."""
        return self.attempts - int(self.failure_counts[:n].sum())


@dataclass(frozen=True)
class TrajectoryResult:
    accepted: bool
    stats: TrajectoryStats
    final_state: State | None


@dataclass(frozen=True)
class EnsembleResult:
    stats: TrajectoryStats
    acceptance_rate: float
    mean_final_fidelity: float | None
    reference_state: State


def kraus_for_cycle(cycle: CycleSpec, state: State) -> DiagonalKraus | TwoModeKraus:
    """Build the cycle's measurement operator at the state's truncation."""
    if isinstance(cycle.params, TwoModeParams):
        if not isinstance(state, TwoModeState):
            raise DimensionMismatch("two-mode cycle applied to a single-mode state")
        dims = state.trunc_dims
        return two_mode_kraus(cycle.tau, cycle.params, dims[0], dims[1])
    if not isinstance(state, FockVector):
        raise DimensionMismatch("single-mode cycle applied to a two-mode state")
    return kraus_diagonal(cycle.meas_label, cycle.tau, cycle.params, state.trunc_dim)


def _coeffs_for(state: State, kraus: DiagonalKraus | TwoModeKraus) -> np.ndarray:
    if isinstance(kraus, DiagonalKraus):
        if not isinstance(state, FockVector):
            raise DimensionMismatch("single-mode operator applied to a two-mode state")
        if kraus.dim < state.trunc_dim:
            raise DimensionMismatch(
                f"operator covers {kraus.dim} levels, state needs {state.trunc_dim}"
            )
        return kraus.coeffs[: state.trunc_dim]
    if not isinstance(state, TwoModeState):
        raise DimensionMismatch("two-mode operator applied to a single-mode state")
    da, db = state.trunc_dims
    ka, kb = kraus.dims
    if ka < da or kb < db:
        raise DimensionMismatch(f"operator covers {kraus.dims}, state needs {state.trunc_dims}")
    return kraus.coeffs[:da, :db]


def apply_cycle(state: State, kraus: DiagonalKraus | TwoModeKraus) -> tuple[State, float]:
    """One successful cycle: returns the renormalized state and its probability."""
    coeffs = _coeffs_for(state, kraus)
    weighted = coeffs * state.amps
    p_success = float(np.vdot(weighted, weighted).real)
    if p_success < MIN_BRANCH_PROBABILITY:
        raise VanishingBranch(f"post-selected branch died (p = {p_success:.3e})")
    post = weighted / math.sqrt(p_success)
    return type(state)(post), p_success


def _kraus_sequence(schedule, state: State):
    return [kraus_for_cycle(cycle, state) for cycle in schedule]


def run_postselected(
    initial_state: State,
    schedule: list[CycleSpec],
    target: State,
    keep_states: bool = False,
) -> EvolutionRecord:
    """Deterministic all-success run over the full schedule.

    The cumulative success probability is the product of per-cycle
    probabilities; for a uniform schedule it reproduces the closed form
    sum_k p_k |lambda_k|^{2N}.
    """
    if not schedule:
        raise ValueError("schedule must contain at least one cycle")
    ops = _kraus_sequence(schedule, initial_state)
    state = initial_state
    cumulative = 1.0
    fids = [fidelity(state, target)]
    probs = [1.0]
    states = [state] if keep_states else None
    for op in ops:
        state, p = apply_cycle(state, op)
        cumulative *= p
        fids.append(fidelity(state, target))
        probs.append(cumulative)
        if keep_states:
            states.append(state)
    return EvolutionRecord(
        cycles=np.arange(len(schedule) + 1),
        fidelity=np.array(fids),
        success=np.array(probs),
        states=states,
    )


def success_path_state(initial_state: State, schedule: list[CycleSpec]) -> State:
    """Final state conditioned on every measurement succeeding."""
    state = initial_state
    for op in _kraus_sequence(schedule, initial_state):
        state, _ = apply_cycle(state, op)
    return state


def sample_trajectory(
    initial_state: State,
    schedule: list[CycleSpec],
    rng: np.random.Generator,
    max_restarts: int = DEFAULT_MAX_RESTARTS,
) -> TrajectoryResult:
    """Stochastic run with restart-on-failure.

    Each cycle succeeds with the probability delivered by apply_cycle; one
    uniform draw decides the outcome. A failure restarts the protocol from
    the initial state at cycle 1. Exceeding `max_restarts` is reported via
    the accepted flag, not an exception.
    """
    ops = _kraus_sequence(schedule, initial_state)
    n_cycles = len(ops)
    stats = TrajectoryStats(failure_counts=np.zeros(n_cycles, dtype=np.int64))
    restarts = 0
    while True:
        stats.attempts += 1
        state = initial_state
        failed_at = None
        for i, op in enumerate(ops):
            state, p = apply_cycle(state, op)
            stats.total_cycles += 1
            if rng.random() >= p:
                failed_at = i
                break
        if failed_at is None:
            stats.accepted_full_runs += 1
            return TrajectoryResult(accepted=True, stats=stats, final_state=state)
        stats.failure_counts[failed_at] += 1
        restarts += 1
        if restarts > max_restarts:
            return TrajectoryResult(accepted=False, stats=stats, final_state=None)


def trajectory_ensemble(
    initial_state: State,
    schedule: list[CycleSpec],
    n_traj: int,
    master_seed: int,
    target: State | None = None,
    max_restarts: int = DEFAULT_MAX_RESTARTS,
) -> EnsembleResult:
    """Aggregate independent trajectories with per-trajectory RNG streams.

    Stream i is seeded from (master_seed, spawn_key=i), so results are
    reproducible bit-for-bit for a fixed seed regardless of execution order.
    `mean_final_fidelity` averages the accepted final states' fidelity to
    `target` when given, otherwise to the deterministic success-path state.
    """
    if n_traj < 1:
        raise ValueError("n_traj must be >= 1")
    reference = success_path_state(initial_state, schedule)
    compare_to = target if target is not None else reference
    stats = TrajectoryStats(failure_counts=np.zeros(len(schedule), dtype=np.int64))
    fid_sum = 0.0
    accepted = 0
    for i in range(n_traj):
        rng = np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(i,)))
        result = sample_trajectory(initial_state, schedule, rng, max_restarts=max_restarts)
        stats.merge(result.stats)
        if result.accepted:
            accepted += 1
            fid_sum += fidelity(result.final_state, compare_to)
    acceptance_rate = stats.accepted_full_runs / stats.attempts
    mean_fid = fid_sum / accepted if accepted else None
    return EnsembleResult(
        stats=stats,
        acceptance_rate=acceptance_rate,
        mean_final_fidelity=mean_fid,
        reference_state=reference,
    )
