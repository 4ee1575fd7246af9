"""Targets, measurement strategies and schedule construction.

Periods are chosen so the targeted reduction coefficient has modulus one:
tau = l pi / W with W the Rabi frequency of the protected level. A hybrid
strategy spends its first q rounds at the base period (broad filter) and the
rest at l times the base period (sharp filter); the two-mode variant
additionally swaps the coupling ratio after round L and re-applies the short
period for q rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTarget, InconsistentStrategy
from .hilbert import FockVector, TwoModeState, basis_state, coherent_dim, coherent_state, product_state
from .kraus import SystemParams, TwoModeParams, rabi_frequency, two_mode_rabi
from .protocol import CycleSpec, run_postselected

UNIFORM = "uniform"
HYBRID_SINGLE = "hybrid_single"
HYBRID_TWO_MODE = "hybrid_two_mode"

FOCK = "fock"
SUPERPOSED = "superposed"
BELL = "bell"

_AMP_TOL = 1e-12


@dataclass(frozen=True)
class TargetSpec:
    """What to steer the resonator(s) into.

    fock:       |n>
    superposed: c_low |0> + sign * c_high |n>
    bell:       c_low |00> + sign * c_high |m n>
    """

    kind: str
    n: int
    m: int = 0
    c_low: float = 1.0
    c_high: float = 0.0
    sign: int = 1

    def __post_init__(self):
        if self.kind not in (FOCK, SUPERPOSED, BELL):
            raise ValueError(f"unknown target kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("target level n must be >= 1")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.kind == BELL and self.m < 1:
            raise ValueError("target level m must be >= 1")
        if self.kind in (SUPERPOSED, BELL):
            norm = self.c_low**2 + self.c_high**2
            if abs(norm - 1.0) > _AMP_TOL:
                raise ValueError(f"|c_low|^2 + |c_high|^2 = {norm}, expected 1")

    @classmethod
    def fock(cls, n: int) -> "TargetSpec":
        return cls(kind=FOCK, n=n)

    @classmethod
    def superposed(cls, n: int, c_low: float = 1 / math.sqrt(2),
                   c_high: float = 1 / math.sqrt(2), sign: int = 1) -> "TargetSpec":
        return cls(kind=SUPERPOSED, n=n, c_low=c_low, c_high=c_high, sign=sign)

    @classmethod
    def bell(cls, m: int, n: int, c_low: float = 1 / math.sqrt(2),
             c_high: float = 1 / math.sqrt(2), sign: int = 1) -> "TargetSpec":
        return cls(kind=BELL, n=n, m=m, c_low=c_low, c_high=c_high, sign=sign)

    @property
    def meas_label(self) -> str:
        return "e" if self.kind == FOCK else "g"

    def with_sign(self, sign: int) -> "TargetSpec":
        return TargetSpec(kind=self.kind, n=self.n, m=self.m,
                          c_low=self.c_low, c_high=self.c_high, sign=sign)

    def state(self, dims) -> FockVector | TwoModeState:
        """Target state vector at the given truncation."""
        if self.kind == FOCK:
            return basis_state(self.n, int(dims))
        if self.kind == SUPERPOSED:
            dim = int(dims)
            amps = np.zeros(dim, dtype=complex)
            amps[0] = self.c_low
            amps[self.n] = self.sign * self.c_high
            return FockVector(amps)
        dim_a, dim_b = dims
        amps = np.zeros((dim_a, dim_b), dtype=complex)
        amps[0, 0] = self.c_low
        amps[self.m, self.n] = self.sign * self.c_high
        return TwoModeState(amps)


@dataclass(frozen=True)
class StrategySpec:
    """Measurement-schedule family: uniform, S_l^(q), or the two-mode S_l^(q,L)."""

    kind: str
    cycles: int
    l: int = 1
    q: int = 0
    switch_round: int | None = None
    params_before: TwoModeParams | None = None
    params_after: TwoModeParams | None = None

    def __post_init__(self):
        if self.kind not in (UNIFORM, HYBRID_SINGLE, HYBRID_TWO_MODE):
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.cycles < 1:
            raise ValueError("cycles must be >= 1")
        if self.l < 1:
            raise ValueError("l must be >= 1")
        if not 0 <= self.q <= self.cycles:
            raise ValueError("q must satisfy 0 <= q <= cycles")
        if self.kind == HYBRID_TWO_MODE:
            if self.switch_round is None:
                raise ValueError("two-mode hybrid needs a switch round L")
            if not self.q <= self.switch_round <= self.cycles:
                raise ValueError("switch round must satisfy q <= L <= cycles")

    @classmethod
    def uniform(cls, cycles: int) -> "StrategySpec":
        return cls(kind=UNIFORM, cycles=cycles)

    @classmethod
    def hybrid(cls, l: int, q: int, cycles: int) -> "StrategySpec":
        return cls(kind=HYBRID_SINGLE, cycles=cycles, l=l, q=q)

    @classmethod
    def hybrid_two_mode(cls, l: int, q: int, switch_round: int, cycles: int,
                        params_before: TwoModeParams | None = None,
                        params_after: TwoModeParams | None = None) -> "StrategySpec":
        return cls(kind=HYBRID_TWO_MODE, cycles=cycles, l=l, q=q,
                   switch_round=switch_round,
                   params_before=params_before, params_after=params_after)


def tau_excited(n: int, l: int, params: SystemParams) -> float:
    """Base period protecting |n> on the excited-state branch: l pi / W_n."""
    if n < 0 or l < 1:
        raise ValueError("need n >= 0 and l >= 1")
    return l * math.pi / rabi_frequency("e", n, params)


def tau_ground(n: int, l: int, params: SystemParams) -> float:
    """Base period protecting |n> on the ground-state branch: l pi / (g sqrt(n))."""
    if l < 1:
        raise ValueError("need l >= 1")
    freq = rabi_frequency("g", n, params) if n >= 0 else 0.0
    if freq == 0.0:
        raise DegenerateTarget(f"ground-branch Rabi frequency vanishes for n = {n}")
    return l * math.pi / freq


def tau_bell(m: int, n: int, l: int, params: TwoModeParams) -> float:
    """Base period protecting |m n> on the qutrit ground branch: l pi / W_mn."""
    if l < 1:
        raise ValueError("need l >= 1")
    freq = two_mode_rabi(m, n, params)
    if freq == 0.0:
        raise DegenerateTarget(f"two-mode Rabi frequency vanishes for (m, n) = ({m}, {n})")
    return l * math.pi / freq


def stabilized_indices(n: int, l: int, dim: int, label: str) -> list[int]:
    """Fock levels protected exactly by the period l tau_n at zero detuning.

    Exact integer arithmetic: on the excited branch these are k with
    k + 1 = j^2 (n+1) / l^2 for integer j >= 1; on the ground branch the
    vacuum plus k = j^2 n / l^2. Floating-point membership tests would
    misclassify the nearly protected levels the hybrid strategies exist
    to suppress.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if label not in ("e", "g"):
        raise ValueError("label must be 'e' or 'g'")
    base = n + 1 if label == "e" else n
    out = {0} if label == "g" else set()
    j = 1
    lsq = l * l
    while True:
        num = j * j * base
        value = num // lsq - (1 if label == "e" else 0)
        if num % lsq == 0:
            if value >= dim:
                break
            if value >= 0:
                out.add(value)
        elif num // lsq - 1 >= dim:
            break
        j += 1
    return sorted(k for k in out if k < dim)


def initial_amplitude(target: TargetSpec) -> float | tuple[float, float]:
    """Coherent amplitude(s) matching the target's amplitude ratio.

    fock(n): |alpha|^2 = n puts the population peak on |n>.
    superposed: alpha = (c_high sqrt(n!) / c_low)^(1/n).
    bell: alpha = (c_high m! / c_low)^(1/2m), beta likewise with n.
    Amplitudes are returned real positive; the targets carry real
    coefficients and the global phase is unobservable.
    """
    if target.kind == FOCK:
        return math.sqrt(target.n)
    ratio = target.c_high / target.c_low
    if target.kind == SUPERPOSED:
        n = target.n
        log_alpha = (math.log(ratio) + 0.5 * math.lgamma(n + 1)) / n
        return math.exp(log_alpha)
    m, n = target.m, target.n
    log_alpha = (math.log(ratio) + math.lgamma(m + 1)) / (2 * m)
    log_beta = (math.log(ratio) + math.lgamma(n + 1)) / (2 * n)
    return math.exp(log_alpha), math.exp(log_beta)


def default_dims(target: TargetSpec) -> int | tuple[int, int]:
    """Truncation covering the Poisson support plus the first unwanted protected level."""
    if target.kind == FOCK:
        margin = 4 * (target.n + 1) - 1  # j = 2 protected level on the e branch
        return max(coherent_dim(initial_amplitude(target)), margin + 2)
    if target.kind == SUPERPOSED:
        alpha = initial_amplitude(target)
        margin = 4 * target.n  # j = 2 protected level on the g branch
        return max(coherent_dim(alpha), margin + 2)
    alpha, beta = initial_amplitude(target)
    dim_a = max(coherent_dim(alpha), 4 * target.m + 2)
    dim_b = max(coherent_dim(beta), 4 * target.n + 2)
    return dim_a, dim_b


def initial_state(target: TargetSpec, dims=None) -> FockVector | TwoModeState:
    """Coherent (product) state the protocol starts from, at the default truncation."""
    if dims is None:
        dims = default_dims(target)
    if target.kind == BELL:
        alpha, beta = initial_amplitude(target)
        dim_a, dim_b = dims
        return product_state(coherent_state(alpha, dim_a), coherent_state(beta, dim_b))
    return coherent_state(initial_amplitude(target), int(dims))


def build_schedule(target: TargetSpec, strategy: StrategySpec,
                   params: SystemParams | TwoModeParams) -> list[CycleSpec]:
    """Expand a strategy into per-cycle specifications.

    Single mode: q cycles at the base period, the rest at l times it.
    Two modes: q short + (L - q) long cycles with the starting couplings,
    then q short + rest long with the swapped couplings; the base period is
    recomputed from the couplings active in each segment.
    """
    n_cycles = strategy.cycles
    if target.kind == BELL:
        if strategy.kind == HYBRID_SINGLE:
            raise InconsistentStrategy("bell targets need uniform or hybrid_two_mode")
        if not isinstance(params, TwoModeParams):
            raise InconsistentStrategy("bell targets need TwoModeParams")
        before = strategy.params_before or params
        if strategy.kind == UNIFORM:
            tau = tau_bell(target.m, target.n, 1, before)
            return [CycleSpec(tau=tau, meas_label="g", params=before)] * n_cycles
        after = strategy.params_after or before.swapped()
        tau_b = tau_bell(target.m, target.n, 1, before)
        tau_a = tau_bell(target.m, target.n, 1, after)
        q, l, switch = strategy.q, strategy.l, strategy.switch_round
        cycles = []
        cycles += [CycleSpec(tau=tau_b, meas_label="g", params=before)] * q
        cycles += [CycleSpec(tau=l * tau_b, meas_label="g", params=before)] * (switch - q)
        second_short = min(q, n_cycles - switch)
        cycles += [CycleSpec(tau=tau_a, meas_label="g", params=after)] * second_short
        cycles += [CycleSpec(tau=l * tau_a, meas_label="g", params=after)] * (n_cycles - switch - second_short)
        return cycles

    if strategy.kind == HYBRID_TWO_MODE:
        raise InconsistentStrategy("hybrid_two_mode applies to bell targets only")
    if not isinstance(params, SystemParams):
        raise InconsistentStrategy("single-mode targets need SystemParams")
    label = target.meas_label
    if target.kind == FOCK:
        tau = tau_excited(target.n, 1, params)
    else:
        tau = tau_ground(target.n, 1, params)
    if strategy.kind == UNIFORM:
        return [CycleSpec(tau=tau, meas_label=label, params=params)] * n_cycles
    q, l = strategy.q, strategy.l
    cycles = [CycleSpec(tau=tau, meas_label=label, params=params)] * q
    cycles += [CycleSpec(tau=l * tau, meas_label=label, params=params)] * (n_cycles - q)
    return cycles


@dataclass(frozen=True)
class OptimizeResult:
    strategy: StrategySpec
    fidelity: float
    success: float
    evaluations: tuple


def optimize_schedule(target: TargetSpec,
                      params: SystemParams | TwoModeParams,
                      cycle_budget: int,
                      l_values,
                      q_values,
                      switch_values=None) -> OptimizeResult:
    """Exhaustive search over the strategy family within a cycle budget.

    Every candidate is evaluated with a full post-selected run; the winner
    maximizes final fidelity with ties broken by higher final success
    probability, then smaller l, then smaller q (then smaller L).
    Deterministic by construction.
    """
    if cycle_budget < 1:
        raise ValueError("cycle_budget must be >= 1")
    start = initial_state(target)
    dims = default_dims(target)
    goal = target.state(dims)

    candidates = []
    for l in sorted(set(int(v) for v in l_values)):
        for q in sorted(set(int(v) for v in q_values)):
            if not 0 <= q <= cycle_budget:
                continue
            if target.kind == BELL and switch_values is not None:
                for switch in sorted(set(int(v) for v in switch_values)):
                    if q <= switch <= cycle_budget:
                        candidates.append(StrategySpec.hybrid_two_mode(
                            l=l, q=q, switch_round=switch, cycles=cycle_budget))
            elif target.kind != BELL:
                candidates.append(StrategySpec.hybrid(l=l, q=q, cycles=cycle_budget))
    if not candidates:
        raise ValueError("empty search space")

    best = None
    best_key = None
    rows = []
    for strat in candidates:
        record = run_postselected(start, build_schedule(target, strat, params), goal)
        fid, succ = record.final_fidelity(), record.final_success()
        rows.append((strat, fid, succ))
        key = (fid, succ)
        if best_key is None or key > best_key:
            best, best_key = (strat, fid, succ), key
    strat, fid, succ = best
    return OptimizeResult(strategy=strat, fidelity=fid, success=succ, evaluations=tuple(rows))
