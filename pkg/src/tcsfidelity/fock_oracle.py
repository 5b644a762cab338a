"""Brute-force verification layer on a truncated Fock basis.

Everything here is dense linear algebra on N x N (or N x N two-mode) arrays:
density operators, displacement operators built from a Laguerre recurrence,
the Bures-Uhlmann fidelity via Hermitian matrix square roots, and Schmidt
purifications with their partial traces and characteristic functions.

Truncated operators are deliberately not renormalized; callers budget for the
geometric truncation tail s^N instead, so convergence in the cutoff stays
observable.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .states import DisplacedThermalState

log = logging.getLogger(__name__)

DEFAULT_CUTOFF = 60

#: Tolerated deviation from Hermiticity for density-matrix inputs.
HERMITICITY_TOL = 1e-12

#: Eigenvalues below this are reported before being clipped to zero;
#: anything between it and zero is silent round-off from truncation.
EIGENVALUE_WARN = -1e-10


@dataclass(frozen=True)
class FockMatrix:
    """Dense complex matrix over the number basis truncated at ``cutoff``."""

    cutoff: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        if self.cutoff < 1:
            raise ValueError(f"cutoff must be >= 1, got {self.cutoff}")
        entries = np.asarray(self.entries, dtype=complex)
        if entries.shape != (self.cutoff, self.cutoff):
            raise ValueError(
                f"entries must be {self.cutoff}x{self.cutoff}, got {entries.shape}"
            )
        object.__setattr__(self, "entries", entries)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))


@dataclass(frozen=True)
class TwoModeVector:
    """Two-mode pure state; amplitudes[n1, n2] over the truncated number basis."""

    cutoff: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if self.cutoff < 1:
            raise ValueError(f"cutoff must be >= 1, got {self.cutoff}")
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.shape != (self.cutoff, self.cutoff):
            raise ValueError(
                f"amplitudes must be {self.cutoff}x{self.cutoff}, got {amp.shape}"
            )
        object.__setattr__(self, "amplitudes", amp)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def thermal_spectrum(nbar: float, count: int) -> np.ndarray:
    """First ``count`` eigenvalues of the thermal state, s^j / (nbar + 1)."""
    if nbar < 0:
        raise ValueError(f"nbar must be >= 0, got {nbar}")
    s = nbar / (nbar + 1.0)
    return s ** np.arange(count) / (nbar + 1.0)


def thermal_density_matrix(nbar: float, cutoff: int) -> FockMatrix:
    """Diagonal thermal density operator truncated at ``cutoff`` levels."""
    return FockMatrix(cutoff, np.diag(thermal_spectrum(nbar, cutoff)).astype(complex))


def _displacement_lower_triangle(alpha: complex, n: int) -> np.ndarray:
    """Entries (k, l) with k >= l of the displacement operator.

    <k|D(alpha)|l> = sqrt(l!/k!) alpha^(k-l) e^{-|alpha|^2/2} L_l^{(k-l)}(|alpha|^2),
    with the Laguerre values generated by the three-term recurrence upward in
    the degree l at fixed order k - l, and the factorial ratio in log space so
    large cutoffs cannot overflow.
    """
    x = abs(alpha) ** 2
    log_mag = math.log(abs(alpha))
    unit = alpha / abs(alpha)
    log_fact = [math.lgamma(i + 1.0) for i in range(n)]
    out = np.zeros((n, n), dtype=complex)
    for order in range(n):
        phase = unit**order
        previous = 0.0
        current = 1.0
        for l in range(n - order):
            k = l + order
            magnitude = math.exp(
                0.5 * (log_fact[l] - log_fact[k]) + order * log_mag - 0.5 * x
            )
            out[k, l] = magnitude * phase * current
            previous, current = (
                current,
                ((2 * l + order + 1 - x) * current - (l + order) * previous) / (l + 1),
            )
    return out


def displacement_matrix(alpha: complex, cutoff: int) -> FockMatrix:
    """Displacement operator D(alpha) on the truncated basis.

    The k >= l entries come from the Laguerre-recurrence formula; the k < l
    entries follow from D(alpha)^dag = D(-alpha), which keeps a single stable
    code path. Accuracy of the truncation degrades once |alpha|^2 approaches
    the cutoff.
    """
    alpha = complex(alpha)
    if alpha == 0:
        return FockMatrix(cutoff, np.eye(cutoff, dtype=complex))
    lower = _displacement_lower_triangle(alpha, cutoff)
    lower_negated = _displacement_lower_triangle(-alpha, cutoff)
    full = np.tril(lower) + np.triu(lower_negated.conj().T, 1)
    return FockMatrix(cutoff, full)


def displaced_thermal_matrix(state: DisplacedThermalState, cutoff: int) -> FockMatrix:
    """Density matrix D(alpha) rho_thermal D(alpha)^dag."""
    rho = thermal_density_matrix(state.mean_occupancy, cutoff)
    if state.displacement == 0:
        return rho
    d = displacement_matrix(state.displacement, cutoff).entries
    return FockMatrix(cutoff, d @ rho.entries @ d.conj().T)


#: Relative floor under which eigenvalues are zeroed in the matrix square
#: root. eigh resolves a rank-deficient input's null space only to absolute
#: round-off (~1e-16), and the square root would amplify that to ~1e-8.
EIGENVALUE_FLOOR = 1e-14


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(matrix)
    if w[0] < EIGENVALUE_WARN:
        log.warning(
            "clipping negative eigenvalue %.3e to zero before matrix square root",
            w[0],
        )
    w = np.clip(w, 0.0, None)
    if w[-1] > 0.0:
        w[w < EIGENVALUE_FLOOR * w[-1]] = 0.0
    return (v * np.sqrt(w)) @ v.conj().T


def _validate_density_input(rho: FockMatrix, name: str) -> None:
    defect = rho.hermiticity_defect()
    if defect > HERMITICITY_TOL:
        raise ValueError(
            f"{name} is not Hermitian: max |rho - rho^dag| = {defect:.3e}"
        )


def uhlmann_fidelity(rho1: FockMatrix, rho2: FockMatrix) -> float:
    """Bures-Uhlmann fidelity {Tr[(sqrt(rho1) rho2 sqrt(rho1))^(1/2)]}^2.

    Matrix square roots use Hermitian eigendecompositions with negative
    eigenvalues clipped at zero. The outer trace is evaluated in the
    identical nuclear-norm form sum of singular values of
    sqrt(rho2) sqrt(rho1), where round-off enters linearly; diagonalizing
    sqrt(rho1) rho2 sqrt(rho1) instead would square-root the noise floor of
    rank-deficient inputs up to ~1e-8.
    """
    if rho1.cutoff != rho2.cutoff:
        raise ValueError(
            f"cutoff mismatch: {rho1.cutoff} vs {rho2.cutoff}"
        )
    _validate_density_input(rho1, "rho1")
    _validate_density_input(rho2, "rho2")
    cross = _psd_sqrt(rho2.entries) @ _psd_sqrt(rho1.entries)
    singular_values = np.linalg.svd(cross, compute_uv=False)
    return float(np.sum(singular_values) ** 2)


def schmidt_purification(
    state: DisplacedThermalState, beta: complex, cutoff: int
) -> TwoModeVector:
    """Truncated Schmidt purification of a displaced thermal state.

    amplitudes[m, n] = sum_k sqrt(eta_k) <m|D(alpha)|k> <n|D(beta)|k>, so the
    mode-1 reduction is the displaced thermal state and the mode-2 reduction
    carries displacement beta at the same occupancy. The norm falls short of
    one by the truncation tail s^cutoff.
    """
    sqrt_eta = np.sqrt(thermal_spectrum(state.mean_occupancy, cutoff))
    d_alpha = displacement_matrix(state.displacement, cutoff).entries
    d_beta = displacement_matrix(beta, cutoff).entries
    amplitudes = (d_alpha * sqrt_eta) @ d_beta.T
    return TwoModeVector(cutoff, amplitudes)


def partial_trace_mode2(vector: TwoModeVector) -> FockMatrix:
    """Reduced mode-1 density matrix of a two-mode pure state."""
    amp = vector.amplitudes
    return FockMatrix(vector.cutoff, amp @ amp.conj().T)


def cf_of_two_mode_vector(
    vector: TwoModeVector, lambda1: complex, lambda2: complex
) -> complex:
    """Characteristic function <v| D(lambda1) x D(lambda2) |v> of the vector."""
    d1 = displacement_matrix(lambda1, vector.cutoff).entries
    d2 = displacement_matrix(lambda2, vector.cutoff).entries
    amp = vector.amplitudes
    return complex(np.vdot(amp, d1 @ amp @ d2.T))
