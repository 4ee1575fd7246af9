"""Reduction coefficients and diagonal measurement operators.

One evolution-and-measurement cycle acts on the resonator as a diagonal
operator in the Fock basis. Conditioned on the ancilla coming back in the
state it started in, level k is multiplied by a reduction coefficient whose
modulus never exceeds one:

    lambda_k = exp(-i delta tau / 2) [cos(W_k tau) -/+ i delta sin(W_k tau) / (2 W_k)]

with the k-dependent Rabi frequency W_k. The bracket carries a minus sign for
the excited-state branch and a plus sign for the ground-state branch; this
follows from the 2x2 block structure of the exchange interaction and is
validated against dense propagators built independently below.

Rabi frequencies:

    ancilla |e>:  W_k = sqrt(delta^2/4 + (k+1) g^2)
    ancilla |g>:  W_k = sqrt(delta^2/4 + k g^2)
    qutrit  |g>:  W_kk' = sqrt(delta^2/4 + g_a^2 k + g_b^2 k')
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TruncationTooLarge

LABELS = ("e", "g")

# |lambda| may exceed 1 only through rounding.
_MODULUS_TOL = 1e-12


@dataclass(frozen=True)
class SystemParams:
    """Qubit-resonator coupling g and detuning delta, in units of the qubit splitting."""

    g: float
    delta: float = 0.0

    def __post_init__(self):
        if not self.g > 0.0:
            raise ValueError("coupling g must be positive")
        if not math.isfinite(self.delta):
            raise ValueError("detuning must be finite")


@dataclass(frozen=True)
class TwoModeParams:
    """Qutrit couplings to the two resonator modes, equal detuning on both arms."""

    g_a: float
    g_b: float
    delta: float = 0.0

    def __post_init__(self):
        if not (self.g_a > 0.0 and self.g_b > 0.0):
            raise ValueError("couplings g_a, g_b must be positive")
        if not math.isfinite(self.delta):
            raise ValueError("detuning must be finite")

    def swapped(self) -> "TwoModeParams":
        """Exchange the two couplings (the ratio switch used by hybrid schedules)."""
        return TwoModeParams(g_a=self.g_b, g_b=self.g_a, delta=self.delta)


@dataclass(frozen=True)
class DiagonalKraus:
    """Conditional single-cycle operator, diagonal in the Fock basis."""

    coeffs: np.ndarray
    label: str
    tau: float

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        if self.label not in LABELS:
            raise ValueError(f"label must be one of {LABELS}")
        excess = float(np.max(np.abs(coeffs))) - 1.0
        if excess > _MODULUS_TOL:
            raise ValueError(f"reduction coefficient modulus exceeds 1 by {excess:.2e}")

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]


@dataclass(frozen=True)
class TwoModeKraus:
    """Conditional single-cycle operator on two modes, diagonal in |k k'>."""

    coeffs: np.ndarray
    tau: float

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex)
        if coeffs.ndim != 2:
            raise ValueError("two-mode coefficients must be a matrix")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        excess = float(np.max(np.abs(coeffs))) - 1.0
        if excess > _MODULUS_TOL:
            raise ValueError(f"reduction coefficient modulus exceeds 1 by {excess:.2e}")

    @property
    def dims(self) -> tuple[int, int]:
        return self.coeffs.shape


def _check_label(label: str) -> None:
    if label not in LABELS:
        raise ValueError(f"measurement label must be one of {LABELS}, got {label!r}")


def rabi_frequency(label: str, k: int, params: SystemParams) -> float:
    """k-photon Rabi frequency for the given ancilla branch."""
    _check_label(label)
    if k < 0:
        raise ValueError("Fock index must be non-negative")
    shift = 1 if label == "e" else 0
    return math.sqrt(params.delta**2 / 4.0 + (k + shift) * params.g**2)


def two_mode_rabi(k: int, kp: int, params: TwoModeParams) -> float:
    """Two-mode Rabi frequency sqrt(delta^2/4 + g_a^2 k + g_b^2 k')."""
    if k < 0 or kp < 0:
        raise ValueError("Fock indices must be non-negative")
    return math.sqrt(params.delta**2 / 4.0 + params.g_a**2 * k + params.g_b**2 * kp)


def _sinc(x: np.ndarray) -> np.ndarray:
    """sin(x)/x with a series fallback below 1e-6 (removes the 0/0 at x = 0)."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-6
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 - x * x / 6.0, np.sin(safe) / safe)


def _reduction_array(frequencies: np.ndarray, tau: float, delta: float, branch_sign: float) -> np.ndarray:
    """Reduction coefficients for an array of Rabi frequencies.

    sin(W tau)/W is evaluated as tau * sinc(W tau) so the W -> 0 limit is
    exact; there lambda = 1 identically, matching the decoupled levels.
    """
    x = frequencies * tau
    bracket = np.cos(x) + 1j * branch_sign * delta * tau / 2.0 * _sinc(x)
    return np.exp(-1j * delta * tau / 2.0) * bracket


def reduction_coefficient(label: str, k: int, tau: float, params: SystemParams) -> complex:
    """Per-cycle multiplier of Fock amplitude c_k, conditioned on branch `label`."""
    _check_label(label)
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    freq = np.array([rabi_frequency(label, k, params)])
    sign = -1.0 if label == "e" else 1.0
    return complex(_reduction_array(freq, tau, params.delta, sign)[0])


def kraus_diagonal(label: str, tau: float, params: SystemParams, dim: int) -> DiagonalKraus:
    """Single-cycle conditional operator on the first `dim` Fock levels."""
    _check_label(label)
    if dim < 1:
        raise ValueError("dim must be >= 1")
    shift = 1 if label == "e" else 0
    ks = np.arange(dim, dtype=float)
    freqs = np.sqrt(params.delta**2 / 4.0 + (ks + shift) * params.g**2)
    sign = -1.0 if label == "e" else 1.0
    return DiagonalKraus(coeffs=_reduction_array(freqs, tau, params.delta, sign), label=label, tau=tau)


def two_mode_kraus(tau: float, params: TwoModeParams, dim_a: int, dim_b: int) -> TwoModeKraus:
    """Single-cycle conditional operator on the two-mode product basis.

    The ground-state qutrit branch behaves like the single-mode ground
    branch with a bright-state coupling sqrt(g_a^2 k + g_b^2 k'), so the
    coefficient carries the + sign. lambda_{00} = 1 for every tau.
    """
    if dim_a < 1 or dim_b < 1:
        raise ValueError("dims must be >= 1")
    ka = np.arange(dim_a, dtype=float)[:, None]
    kb = np.arange(dim_b, dtype=float)[None, :]
    freqs = np.sqrt(params.delta**2 / 4.0 + params.g_a**2 * ka + params.g_b**2 * kb)
    return TwoModeKraus(coeffs=_reduction_array(freqs, tau, params.delta, +1.0), tau=tau)


# ---------------------------------------------------------------------------
# Dense-propagator oracles. These rebuild the full interaction Hamiltonian in
# the truncated product space and exponentiate it by Hermitian
# eigendecomposition, with no knowledge of the closed forms above. They exist
# purely to validate the analytic coefficients.
# ---------------------------------------------------------------------------

MAX_ORACLE_DIM = 200
MAX_QUTRIT_ORACLE_SIZE = 4000


def jc_propagator_oracle(tau: float, params: SystemParams, dim: int) -> np.ndarray:
    """Dense exp(-i H tau) on the (qubit x Fock) space.

    Basis ordering: index q*dim + k with q = 0 for |g>, q = 1 for |e>.
    The top excitation block is cut by the truncation, so diagonal entries
    with k = dim-1 on the |e> branch are not faithful; comparisons must
    exclude that edge row.
    """
    if dim > MAX_ORACLE_DIM:
        raise TruncationTooLarge(f"oracle limited to {MAX_ORACLE_DIM} levels, got {dim}")
    size = 2 * dim
    # real symmetric by construction: real couplings and detunings
    ham = np.zeros((size, size))
    for k in range(dim):
        ham[dim + k, dim + k] = params.delta
    for k in range(dim - 1):
        coupling = params.g * math.sqrt(k + 1)
        ham[k + 1, dim + k] = coupling  # a^dag |g><e|
        ham[dim + k, k + 1] = coupling  # a |e><g|
    energies, vectors = np.linalg.eigh(ham)
    return (vectors * np.exp(-1j * energies * tau)) @ vectors.conj().T


def qutrit_propagator_oracle(tau: float, params: TwoModeParams, dim_a: int, dim_b: int) -> np.ndarray:
    """Dense exp(-i H tau) on the (qutrit x Fock_a x Fock_b) space.

    Basis ordering: index (level*dim_a + k)*dim_b + k' with level 0 = |g>,
    1 = |h> (couples to mode a), 2 = |e> (couples to mode b).
    """
    size = 3 * dim_a * dim_b
    if size > MAX_QUTRIT_ORACLE_SIZE:
        raise TruncationTooLarge(
            f"oracle limited to {MAX_QUTRIT_ORACLE_SIZE} basis states, got {size}"
        )

    def idx(level: int, k: int, kp: int) -> int:
        return (level * dim_a + k) * dim_b + kp

    ham = np.zeros((size, size))
    for level in (1, 2):
        for k in range(dim_a):
            for kp in range(dim_b):
                ham[idx(level, k, kp), idx(level, k, kp)] = params.delta
    for k in range(dim_a - 1):
        for kp in range(dim_b):
            coupling = params.g_a * math.sqrt(k + 1)
            ham[idx(0, k + 1, kp), idx(1, k, kp)] = coupling  # a^dag |g><h|
            ham[idx(1, k, kp), idx(0, k + 1, kp)] = coupling
    for k in range(dim_a):
        for kp in range(dim_b - 1):
            coupling = params.g_b * math.sqrt(kp + 1)
            ham[idx(0, k, kp + 1), idx(2, k, kp)] = coupling  # b^dag |g><e|
            ham[idx(2, k, kp), idx(0, k, kp + 1)] = coupling
    energies, vectors = np.linalg.eigh(ham)
    return (vectors * np.exp(-1j * energies * tau)) @ vectors.conj().T
