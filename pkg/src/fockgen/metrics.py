"""Closed-form fidelity and success-probability curves for uniform schedules.

These formulas share no evolution code with the protocol engine: populations
come from a log-domain Poisson evaluation and reduction weights from their
trigonometric form, so engine and formulas can serve as mutual oracles. All
curves assume a single repeated period; hybrid schedules go through the
engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kraus import SystemParams, TwoModeParams
from .schedules import BELL, FOCK, SUPERPOSED, TargetSpec, initial_amplitude


@dataclass(frozen=True)
class FidelityCurve:
    """Fidelity and cumulative success versus measurement number.

    Single targets fill `fidelity`; sign pairs fill `fidelity_plus` and
    `fidelity_minus`.
    """

    cycles: np.ndarray
    success: np.ndarray
    fidelity: np.ndarray | None = None
    fidelity_plus: np.ndarray | None = None
    fidelity_minus: np.ndarray | None = None


def _poisson_populations(alpha_sq: float, dim: int) -> np.ndarray:
    """p_k = exp(-a) a^k / k!, evaluated in the log domain."""
    if alpha_sq == 0.0:
        pops = np.zeros(dim)
        pops[0] = 1.0
        return pops
    ks = np.arange(dim)
    log_p = -alpha_sq + ks * math.log(alpha_sq) - np.array([math.lgamma(k + 1) for k in ks])
    return np.exp(log_p)


def _coherent_coherence(alpha: float, n: int) -> float:
    """<n|alpha><alpha|0> for real positive alpha: exp(-a^2) a^n / sqrt(n!)."""
    if alpha == 0.0:
        return 1.0 if n == 0 else 0.0
    return math.exp(-alpha**2 + n * math.log(alpha) - 0.5 * math.lgamma(n + 1))


def _reduction_weights(freqs: np.ndarray, tau: float, delta: float) -> np.ndarray:
    """|lambda_k|^2 = cos^2(W tau) + (delta/(2W))^2 sin^2(W tau), sinc-safe at W = 0."""
    x = freqs * tau
    small = np.abs(x) < 1e-6
    safe = np.where(small, 1.0, x)
    sinc = np.where(small, 1.0 - x * x / 6.0, np.sin(safe) / safe)
    return np.cos(x) ** 2 + (delta * tau / 2.0 * sinc) ** 2


def _single_mode_weights(label: str, tau: float, params: SystemParams, dim: int) -> np.ndarray:
    shift = 1 if label == "e" else 0
    ks = np.arange(dim, dtype=float)
    freqs = np.sqrt(params.delta**2 / 4.0 + (ks + shift) * params.g**2)
    return _reduction_weights(freqs, tau, params.delta)


def _fock_dim(alpha: float, at_least: int) -> int:
    a2 = alpha**2
    return max(math.ceil(a2 + 8.0 * math.sqrt(a2) + 8.0), at_least)


def fock_fidelity_closed_form(n: int, cycles: int, tau: float, params: SystemParams,
                              alpha: float, dim: int | None = None) -> float:
    """Fidelity of |n> after `cycles` uniform rounds on the excited branch.

    F(N) = p_n w_n^N / sum_k p_k w_k^N with w_k the per-cycle reduction weight.
    """
    if dim is None:
        dim = _fock_dim(alpha, 4 * (n + 1) + 1)
    pops = _poisson_populations(alpha**2, dim)
    weights = _single_mode_weights("e", tau, params, dim)
    filtered = pops * weights**cycles
    return float(filtered[n] / filtered.sum())


def fock_success_closed_form(cycles: int, tau: float, params: SystemParams,
                             alpha: float, dim: int | None = None,
                             label: str = "e") -> float:
    """Cumulative success probability sum_k p_k w_k^N of a uniform schedule."""
    if dim is None:
        dim = _fock_dim(alpha, 1)
    pops = _poisson_populations(alpha**2, dim)
    weights = _single_mode_weights(label, tau, params, dim)
    return float((pops * weights**cycles).sum())


def superposed_fidelity_closed_form(target: TargetSpec, cycles: int, tau: float,
                                    params: SystemParams, alpha: float | None = None,
                                    dim: int | None = None) -> tuple[float, float]:
    """Fidelities (F_plus, F_minus) for c_low |0> +/- c_high |n>, uniform schedule.

    Resonant case only: the protected-level factor is cos(sqrt(n) g tau),
    raised to 2N for the population and N for the coherence, over the full
    ground-branch success probability.
    """
    if target.kind != SUPERPOSED:
        raise ValueError("target must be a superposed spec")
    if params.delta != 0.0:
        raise ValueError("closed form assumes zero detuning")
    if alpha is None:
        alpha = initial_amplitude(target)
    n = target.n
    if dim is None:
        dim = _fock_dim(alpha, 4 * n + 2)
    pops = _poisson_populations(alpha**2, dim)
    weights = _single_mode_weights("g", tau, params, dim)
    success = float((pops * weights**cycles).sum())
    cos_n = math.cos(math.sqrt(n) * params.g * tau)
    coherence = _coherent_coherence(alpha, n)
    c0, cn = target.c_low, target.c_high
    base = c0**2 * pops[0] + cn**2 * pops[n] * cos_n ** (2 * cycles)
    cross = 2.0 * c0 * cn * coherence * cos_n**cycles
    return (base + cross) / success, (base - cross) / success


def bell_fidelity_closed_form(target: TargetSpec, cycles: int, tau: float,
                              params: TwoModeParams,
                              alpha: float | None = None, beta: float | None = None,
                              dims: tuple[int, int] | None = None) -> tuple[float, float]:
    """Fidelities (F_plus, F_minus) for c_low |00> +/- c_high |mn>, uniform schedule."""
    if target.kind != BELL:
        raise ValueError("target must be a bell spec")
    if params.delta != 0.0:
        raise ValueError("closed form assumes zero detuning")
    if alpha is None or beta is None:
        alpha, beta = initial_amplitude(target)
    m, n = target.m, target.n
    if dims is None:
        dims = (_fock_dim(alpha, 4 * m + 2), _fock_dim(beta, 4 * n + 2))
    dim_a, dim_b = dims
    pops = np.outer(_poisson_populations(alpha**2, dim_a), _poisson_populations(beta**2, dim_b))
    ka = np.arange(dim_a, dtype=float)[:, None]
    kb = np.arange(dim_b, dtype=float)[None, :]
    freqs = np.sqrt(params.g_a**2 * ka + params.g_b**2 * kb)
    weights = np.cos(freqs * tau) ** 2
    success = float((pops * weights**cycles).sum())
    cos_mn = math.cos(math.sqrt(params.g_a**2 * m + params.g_b**2 * n) * tau)
    coherence = _coherent_coherence(alpha, m) * _coherent_coherence(beta, n)
    c0, cmn = target.c_low, target.c_high
    base = c0**2 * pops[0, 0] + cmn**2 * pops[m, n] * cos_mn ** (2 * cycles)
    cross = 2.0 * c0 * cmn * coherence * cos_mn**cycles
    return (base + cross) / success, (base - cross) / success


def asymptotic_success(target: TargetSpec) -> float:
    """Large-N success probability: the overlap of start and protected subspace.

    fock(n):    e^{-n} n^n / n!
    superposed: (p_0 + p_n) = exp(-alpha^2) / c_low^2
    bell:       (p_00 + p_mn) = exp(-alpha^2 - beta^2) / c_low^2

    The j >= 2 protected residuals are dropped, as their initial occupation
    is negligible for every target treated here.
    """
    if target.kind == FOCK:
        n = target.n
        return math.exp(-n + n * math.log(n) - math.lgamma(n + 1))
    if target.kind == SUPERPOSED:
        alpha = initial_amplitude(target)
        return math.exp(-alpha**2) / target.c_low**2
    alpha, beta = initial_amplitude(target)
    return math.exp(-alpha**2 - beta**2) / target.c_low**2


def fock_curve(n: int, cycles: int, tau: float, params: SystemParams,
               alpha: float, dim: int | None = None) -> FidelityCurve:
    """Closed-form fidelity/success curve for a uniform Fock-target schedule."""
    ns = np.arange(cycles + 1)
    fid = np.array([fock_fidelity_closed_form(n, int(k), tau, params, alpha, dim) for k in ns])
    suc = np.array([fock_success_closed_form(int(k), tau, params, alpha, dim, label="e") for k in ns])
    return FidelityCurve(cycles=ns, success=suc, fidelity=fid)


def superposed_curve(target: TargetSpec, cycles: int, tau: float, params: SystemParams,
                     dim: int | None = None) -> FidelityCurve:
    """Closed-form sign-pair curve for a uniform superposition-target schedule."""
    alpha = initial_amplitude(target)
    ns = np.arange(cycles + 1)
    pairs = [superposed_fidelity_closed_form(target, int(k), tau, params, alpha, dim) for k in ns]
    suc = np.array([fock_success_closed_form(int(k), tau, params, alpha, dim, label="g") for k in ns])
    return FidelityCurve(cycles=ns, success=suc,
                         fidelity_plus=np.array([p for p, _ in pairs]),
                         fidelity_minus=np.array([mn for _, mn in pairs]))


def bell_curve(target: TargetSpec, cycles: int, tau: float, params: TwoModeParams,
               dims: tuple[int, int] | None = None) -> FidelityCurve:
    """Closed-form sign-pair curve for a uniform Bell-target schedule."""
    alpha, beta = initial_amplitude(target)
    if dims is None:
        dims = (_fock_dim(alpha, 4 * target.m + 2), _fock_dim(beta, 4 * target.n + 2))
    pops = np.outer(_poisson_populations(alpha**2, dims[0]), _poisson_populations(beta**2, dims[1]))
    ka = np.arange(dims[0], dtype=float)[:, None]
    kb = np.arange(dims[1], dtype=float)[None, :]
    weights = np.cos(np.sqrt(params.g_a**2 * ka + params.g_b**2 * kb) * tau) ** 2
    ns = np.arange(cycles + 1)
    pairs = [bell_fidelity_closed_form(target, int(k), tau, params, alpha, beta, dims) for k in ns]
    suc = np.array([float((pops * weights**int(k)).sum()) for k in ns])
    return FidelityCurve(cycles=ns, success=suc,
                         fidelity_plus=np.array([p for p, _ in pairs]),
                         fidelity_minus=np.array([mn for _, mn in pairs]))
