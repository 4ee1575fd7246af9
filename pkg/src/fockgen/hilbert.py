"""Truncated Fock-space states: coherent states, fidelities, density-matrix views.

All states are pure and immutable. Amplitudes are stored as plain complex
ndarrays; a single mode is a length-K vector, two modes a K_a x K_b matrix
over the product basis |k>_a |k'>_b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, TailMassExceeded

TAIL_THRESHOLD = 1e-12
NORM_TOL = 1e-12


def _frozen_array(values, ndim):
    arr = np.array(values, dtype=complex)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d amplitude array, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("amplitude array must be non-empty")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FockVector:
    """Pure state of a single bosonic mode with amplitudes c_0 .. c_{K-1}."""

    amps: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amps", _frozen_array(self.amps, 1))

    @property
    def trunc_dim(self) -> int:
        return self.amps.shape[0]

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def normalized(self) -> "FockVector":
        n2 = self.norm_sq()
        if n2 <= 0.0:
            raise ValueError("cannot normalize a zero state")
        return FockVector(self.amps / math.sqrt(n2))

    def populations(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


@dataclass(frozen=True)
class TwoModeState:
    """Pure state of two bosonic modes with amplitudes c_{kk'} over |k>_a |k'>_b."""

    amps: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amps", _frozen_array(self.amps, 2))

    @property
    def trunc_dims(self) -> tuple[int, int]:
        return self.amps.shape

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def normalized(self) -> "TwoModeState":
        n2 = self.norm_sq()
        if n2 <= 0.0:
            raise ValueError("cannot normalize a zero state")
        return TwoModeState(self.amps / math.sqrt(n2))

    def populations(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def marginal_populations(self, mode: int) -> np.ndarray:
        pops = self.populations()
        return pops.sum(axis=1 - mode)


State = FockVector | TwoModeState


@dataclass(frozen=True)
class DensityMatrixView:
    """Diagonal populations p_k and off-diagonal coherences C_{kk'} of a pure state.

    The coherence matrix carries zeros on its diagonal; populations live in
    `diag`. Hermiticity C_{kk'} = conj(C_{k'k}) holds by construction and is
    re-checked here because views may be assembled by hand in tests.
    """

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        diag = np.array(self.diag, dtype=float)
        off = np.array(self.offdiag, dtype=complex)
        if off.shape != (diag.size, diag.size):
            raise DimensionMismatch(
                f"coherence matrix {off.shape} does not match {diag.size} populations"
            )
        if np.any(diag < -NORM_TOL):
            raise ValueError("populations must be non-negative")
        if abs(diag.sum() - 1.0) > 1e-9:
            raise ValueError(f"populations sum to {diag.sum()}, expected 1")
        if not np.allclose(off, off.conj().T, atol=1e-12):
            raise ValueError("coherences are not Hermitian")
        diag.setflags(write=False)
        off.setflags(write=False)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", off)

    def purity(self) -> float:
        """Tr rho^2 = sum_k p_k^2 + sum_{k != k'} |C_{kk'}|^2."""
        return float(np.sum(self.diag**2) + np.sum(np.abs(self.offdiag) ** 2))


def coherent_state(alpha: complex, dim: int, tail_threshold: float = TAIL_THRESHOLD) -> FockVector:
    """Coherent state |alpha> truncated to `dim` levels.

    Amplitudes c_k = exp(-|alpha|^2/2) alpha^k / sqrt(k!), evaluated by the
    cumulative product c_k = c_{k-1} alpha / sqrt(k), which stays within
    floating range for every truncation used here. Raises TailMassExceeded
    when the top level still holds |c_{dim-1}|^2 >= tail_threshold: that is
    an error, not a silent truncation.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    alpha = complex(alpha)
    amps = np.zeros(dim, dtype=complex)
    amps[0] = math.exp(-abs(alpha) ** 2 / 2.0)
    for k in range(1, dim):
        amps[k] = amps[k - 1] * alpha / math.sqrt(k)
    tail = abs(amps[-1]) ** 2
    if tail >= tail_threshold:
        raise TailMassExceeded(
            f"|c_{dim - 1}|^2 = {tail:.3e} >= {tail_threshold:.1e}; "
            f"increase the truncation for |alpha|^2 = {abs(alpha) ** 2:.3f}"
        )
    return FockVector(amps)


def coherent_dim(alpha: complex) -> int:
    """Default truncation for |alpha>: ceil(|a|^2 + 8 sqrt(|a|^2) + 8).

    Keeps the Poisson tail below the 1e-12 threshold across the amplitude
    range used by the protocols.
    """
    a2 = abs(complex(alpha)) ** 2
    return max(1, math.ceil(a2 + 8.0 * math.sqrt(a2) + 8.0))


def basis_state(n: int, dim: int) -> FockVector:
    """Fock state |n> in a `dim`-level truncation."""
    if not 0 <= n < dim:
        raise ValueError(f"level {n} outside truncation {dim}")
    amps = np.zeros(dim, dtype=complex)
    amps[n] = 1.0
    return FockVector(amps)


def product_state(a: FockVector, b: FockVector) -> TwoModeState:
    """Tensor product |a> x |b> with c_{kk'} = a_k b_{k'}."""
    for label, state in (("a", a), ("b", b)):
        if abs(state.norm_sq() - 1.0) > 1e-9:
            raise ValueError(f"input state {label} is not normalized")
    return TwoModeState(np.outer(a.amps, b.amps))


def fidelity(state: State, target: State) -> float:
    """Overlap |<target|state>|^2; symmetric and phase-insensitive."""
    if type(state) is not type(target):
        raise DimensionMismatch(
            f"cannot overlap {type(state).__name__} with {type(target).__name__}"
        )
    if state.amps.shape != target.amps.shape:
        raise DimensionMismatch(
            f"truncations differ: {state.amps.shape} vs {target.amps.shape}"
        )
    return float(abs(np.vdot(target.amps, state.amps)) ** 2)


def density_view(state: State) -> DensityMatrixView:
    """Split |psi><psi| into populations and coherences.

    Two-mode states are flattened to the product basis ordered by
    k * K_b + k'.
    """
    vec = state.amps.reshape(-1)
    rho = np.outer(vec, vec.conj())
    diag = np.real(np.diag(rho)).copy()
    off = rho.copy()
    np.fill_diagonal(off, 0.0)
    return DensityMatrixView(diag=diag, offdiag=off)
