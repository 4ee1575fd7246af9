"""Periods, protected-level sets, strategy expansion and the optimizer."""

import math

import numpy as np
import pytest

from fockgen.errors import DegenerateTarget, InconsistentStrategy
from fockgen.kraus import SystemParams, TwoModeParams, reduction_coefficient, two_mode_rabi
from fockgen.schedules import (
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

G = SystemParams(g=0.05)
G2 = TwoModeParams(g_a=0.05, g_b=0.03)


def test_tau_excited_value_and_linearity():
    base = tau_excited(5, 1, G)
    assert np.isclose(base, math.pi / (0.05 * math.sqrt(6)), atol=1e-12)
    assert np.isclose(base, 25.6509, atol=1e-4)
    assert np.isclose(tau_excited(5, 3, G), 3 * base, atol=1e-12)
    assert np.isclose(abs(reduction_coefficient("e", 5, base, G)), 1.0, atol=1e-12)


def test_tau_ground_value():
    base = tau_ground(5, 1, G)
    assert np.isclose(base, 28.0993, atol=1e-4)
    assert np.isclose(abs(reduction_coefficient("g", 5, base, G)), 1.0, atol=1e-12)
    assert np.isclose(reduction_coefficient("g", 0, base, G).real, 1.0, atol=1e-12)
    assert np.isclose(tau_ground(1, 2, G), 2 * math.pi / G.g, atol=1e-12)


def test_tau_ground_degenerate():
    with pytest.raises(DegenerateTarget):
        tau_ground(0, 1, G)


def test_tau_ground_protects_higher_member():
    base = tau_ground(4, 1, G)
    assert np.isclose(reduction_coefficient("g", 16, base, G).real, 1.0, atol=1e-12)


def test_tau_bell_value_and_symmetry():
    base = tau_bell(4, 4, 1, G2)
    # pi / (2 sqrt(0.0025 + 0.0009)) evaluated exactly
    assert np.isclose(base, math.pi / (2 * math.sqrt(0.0034)), atol=1e-12)
    assert np.isclose(base, 26.93893, atol=1e-4)
    assert np.isclose(tau_bell(4, 4, 1, G2.swapped()), base, atol=1e-12)
    assert np.isclose(tau_bell(4, 4, 3, G2), 3 * base, atol=1e-12)
    with pytest.raises(DegenerateTarget):
        tau_bell(0, 0, 1, G2)


def test_stabilized_indices_examples():
    assert stabilized_indices(5, 1, 64, "e") == [5, 23, 53]
    assert stabilized_indices(3, 2, 30, "e") == [0, 3, 8, 15, 24]
    assert set(stabilized_indices(3, 1, 30, "e")) <= set(stabilized_indices(3, 2, 30, "e"))
    assert stabilized_indices(5, 1, 64, "g") == [0, 5, 20, 45]


def test_stabilized_indices_match_modulus_scan():
    # the exact integer rule must coincide with a float scan of |lambda| = 1
    cases = [(5, 1, "e"), (5, 3, "e"), (3, 2, "e"), (5, 1, "g"), (4, 2, "g")]
    for n, l, label in cases:
        tau = tau_excited(n, l, G) if label == "e" else tau_ground(n, l, G)
        scanned = [
            k for k in range(64)
            if abs(abs(reduction_coefficient(label, k, tau, G)) - 1.0) < 1e-12
        ]
        assert scanned == stabilized_indices(n, l, 64, label), (n, l, label)


def test_initial_amplitude_values():
    assert initial_amplitude(TargetSpec.fock(5)) == math.sqrt(5)
    alpha = initial_amplitude(TargetSpec.superposed(5))
    assert np.isclose(alpha, 120 ** 0.1, atol=1e-12)
    assert np.isclose(alpha, 1.6141, atol=1e-4)
    a, b = initial_amplitude(TargetSpec.bell(4, 4))
    assert np.isclose(a, 24 ** 0.125, atol=1e-12)
    assert np.isclose(b, 24 ** 0.125, atol=1e-12)


def test_initial_amplitude_reproduces_target_ratio():
    target = TargetSpec.superposed(4, c_low=0.8, c_high=0.6)
    alpha = initial_amplitude(target)
    state = initial_state(target, 40)
    ratio = (state.amps[4] / state.amps[0]).real
    assert np.isclose(ratio, 0.6 / 0.8, rtol=1e-12)
    assert alpha > 0


def test_bell_initial_state_marginal_tails():
    state = initial_state(TargetSpec.bell(4, 4))
    for mode in (0, 1):
        assert state.marginal_populations(mode)[-1] < 1e-12
    assert abs(state.norm_sq() - 1.0) < 1e-12
    assert abs(state.normalized().norm_sq() - 1.0) < 1e-12


def test_default_dims_cover_protected_levels():
    assert default_dims(TargetSpec.fock(5)) >= 25  # level 23 plus margin
    assert default_dims(TargetSpec.superposed(5)) >= 22  # level 20 plus margin
    da, db = default_dims(TargetSpec.bell(4, 4))
    assert da >= 18 and db >= 18


def test_build_schedule_uniform():
    cycles = build_schedule(TargetSpec.fock(5), StrategySpec.uniform(3), G)
    assert len(cycles) == 3
    assert all(c.meas_label == "e" for c in cycles)
    assert all(np.isclose(c.tau, 25.6509, atol=1e-4) for c in cycles)


def test_build_schedule_hybrid_single():
    cycles = build_schedule(TargetSpec.fock(5), StrategySpec.hybrid(l=3, q=5, cycles=15), G)
    base = tau_excited(5, 1, G)
    assert len(cycles) == 15
    assert all(np.isclose(c.tau, base) for c in cycles[:5])
    assert all(np.isclose(c.tau, 3 * base) for c in cycles[5:])


def test_build_schedule_superposed_uses_ground_branch():
    cycles = build_schedule(TargetSpec.superposed(5), StrategySpec.hybrid(l=3, q=5, cycles=10), G)
    assert all(c.meas_label == "g" for c in cycles)
    assert np.isclose(cycles[0].tau, tau_ground(5, 1, G))


def test_build_schedule_two_mode_switch():
    strategy = StrategySpec.hybrid_two_mode(l=3, q=5, switch_round=15, cycles=30)
    cycles = build_schedule(TargetSpec.bell(4, 4), strategy, G2)
    base = tau_bell(4, 4, 1, G2)
    assert len(cycles) == 30
    assert all(c.params == G2 for c in cycles[:15])
    assert all(c.params == G2.swapped() for c in cycles[15:])
    assert all(np.isclose(c.tau, base) for c in cycles[:5])
    assert all(np.isclose(c.tau, 3 * base) for c in cycles[5:15])
    assert all(np.isclose(c.tau, base) for c in cycles[15:20])  # re-shortened
    assert all(np.isclose(c.tau, 3 * base) for c in cycles[20:])


def test_build_schedule_two_mode_asymmetric_recomputes_tau():
    strategy = StrategySpec.hybrid_two_mode(l=1, q=1, switch_round=2, cycles=4)
    cycles = build_schedule(TargetSpec.bell(2, 5), strategy, G2)
    assert np.isclose(cycles[0].tau, math.pi / two_mode_rabi(2, 5, G2))
    assert np.isclose(cycles[-1].tau, math.pi / two_mode_rabi(2, 5, G2.swapped()))


def test_build_schedule_kind_mismatch():
    with pytest.raises(InconsistentStrategy):
        build_schedule(TargetSpec.bell(4, 4), StrategySpec.hybrid(l=2, q=3, cycles=8), G2)
    with pytest.raises(InconsistentStrategy):
        build_schedule(TargetSpec.fock(5),
                       StrategySpec.hybrid_two_mode(l=2, q=1, switch_round=3, cycles=8), G)
    with pytest.raises(InconsistentStrategy):
        build_schedule(TargetSpec.bell(4, 4), StrategySpec.uniform(5), G)


def test_strategy_validation():
    with pytest.raises(ValueError):
        StrategySpec.hybrid(l=0, q=1, cycles=5)
    with pytest.raises(ValueError):
        StrategySpec.hybrid(l=1, q=9, cycles=5)
    with pytest.raises(ValueError):
        StrategySpec.hybrid_two_mode(l=1, q=4, switch_round=3, cycles=5)


def test_target_validation():
    with pytest.raises(ValueError):
        TargetSpec.fock(0)
    with pytest.raises(ValueError):
        TargetSpec.superposed(3, c_low=0.9, c_high=0.6)
    with pytest.raises(ValueError):
        TargetSpec.bell(0, 2)


def test_optimizer_dominates_fixed_strategy():
    from fockgen.protocol import run_postselected

    target = TargetSpec.fock(5)
    dims = default_dims(target)
    fixed = run_postselected(initial_state(target, dims),
                             build_schedule(target, StrategySpec.hybrid(l=3, q=5, cycles=15), G),
                             target.state(dims))
    result = optimize_schedule(target, G, 15, l_values=(1, 2, 3), q_values=range(11))
    assert result.fidelity >= fixed.final_fidelity()


def test_optimizer_tie_break_prefers_small_l_q():
    result = optimize_schedule(TargetSpec.fock(5), G, 1, l_values=(1, 2, 3),
                               q_values=(1, 2, 3))
    assert result.strategy.l == 1
    assert result.strategy.q == 1


def test_optimizer_fock2_budget6():
    result = optimize_schedule(TargetSpec.fock(2), G, 6, l_values=(1, 2, 3),
                               q_values=range(7))
    assert result.fidelity >= 0.99


def test_optimizer_two_mode_requires_switch_grid():
    with pytest.raises(ValueError):
        optimize_schedule(TargetSpec.bell(1, 1), G2, 10, l_values=(3,), q_values=(5,))


def test_optimizer_two_mode_small_grid():
    result = optimize_schedule(TargetSpec.bell(1, 1), G2, 12, l_values=(3,),
                               q_values=(3, 5), switch_values=(6, 8))
    assert result.strategy.switch_round in (6, 8)
    assert result.fidelity > 0.9
