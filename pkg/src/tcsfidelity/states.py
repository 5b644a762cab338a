"""Domain types and characteristic-function conventions for displaced thermal states.

Every other module consumes the conventions fixed here:

* hbar = k_B = 1; temperature enters only through the mean occupancy.
* Quadrature ordering (x1, p1, x2, p2) with vacuum variance 1/2.
* Characteristic functions are symmetric (Weyl) ordered: chi(lam) = <D(lam)>
  with D(lam) = exp(lam a^dag - lam* a).
* A complex CF argument lam maps to the real vector conjugate to (x, p) as
  b = (sqrt(2) Im lam, -sqrt(2) Re lam), so that a Gaussian state with
  covariance V and mean vector d has chi = exp(-b^T V b / 2 + i b.d).
  A displacement by alpha shifts the mean by sqrt(2) (Re alpha, Im alpha).

The sign of the displacement factor exp(lam alpha* - lam* alpha) is pinned by
requiring that a pure coherent state (zero occupancy) reproduce the standard
coherent-state CF; a unit test enforces this.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

HBAR = 1.0
BOLTZMANN_K = 1.0

#: Determinant of the covariance matrix of any pure two-mode Gaussian state
#: in the vacuum-variance-1/2 convention.
PURE_COVARIANCE_DET = 1.0 / 16.0

_SQRT2 = math.sqrt(2.0)


def mean_occupancy_from_temperature(
    temperature: float | None = None,
    angular_frequency: float | None = None,
    *,
    ratio: float | None = None,
) -> float:
    """Mean occupancy of a thermal mode, 1 / (exp(hbar w / k_B T) - 1).

    Accepts either a (temperature, angular_frequency) pair in kelvin and
    rad/s, or the dimensionless ratio hbar*w / (k_B*T) directly via the
    ``ratio`` keyword.
    """
    if ratio is None:
        if temperature is None or angular_frequency is None:
            raise ValueError(
                "give both temperature and angular_frequency, or ratio alone"
            )
        if not (math.isfinite(temperature) and temperature > 0.0):
            raise ValueError(f"temperature must be positive, got {temperature}")
        if not (math.isfinite(angular_frequency) and angular_frequency > 0.0):
            raise ValueError(
                f"angular_frequency must be positive, got {angular_frequency}"
            )
        ratio = HBAR * angular_frequency / (BOLTZMANN_K * temperature)
    elif temperature is not None or angular_frequency is not None:
        raise ValueError("ratio excludes temperature/angular_frequency arguments")
    if not (math.isfinite(ratio) and ratio > 0.0):
        raise ValueError(f"hbar*w/(k_B*T) ratio must be positive, got {ratio}")
    try:
        return 1.0 / math.expm1(ratio)
    except OverflowError:
        # exp overflows past ratio ~ 709; the occupancy is below double
        # precision long before that.
        return 0.0


@dataclass(frozen=True)
class ThermalParams:
    """Thermal occupation of one bosonic mode, optionally tagged with its origin.

    ``temperature`` (kelvin) and ``angular_frequency`` (rad/s) are kept only
    as provenance when the occupancy was derived from them; the physics below
    never reads them.
    """

    mean_occupancy: float
    temperature: float | None = None
    angular_frequency: float | None = None

    def __post_init__(self) -> None:
        n = self.mean_occupancy
        if not (isinstance(n, (int, float)) and math.isfinite(n) and n >= 0.0):
            raise ValueError(f"mean_occupancy must be finite and >= 0, got {n!r}")
        object.__setattr__(self, "mean_occupancy", float(n))

    @classmethod
    def from_temperature(
        cls, temperature: float, angular_frequency: float
    ) -> "ThermalParams":
        n = mean_occupancy_from_temperature(temperature, angular_frequency)
        return cls(n, temperature=temperature, angular_frequency=angular_frequency)

    @property
    def s(self) -> float:
        """Geometric ratio n/(n+1) of the thermal spectrum; always in [0, 1)."""
        return self.mean_occupancy / (self.mean_occupancy + 1.0)


def _validate_complex(value: complex, name: str) -> complex:
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return z


@dataclass(frozen=True)
class DisplacedThermalState:
    """One-mode thermal state displaced in phase space by a coherent amplitude."""

    thermal: ThermalParams
    displacement: complex = 0j

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "displacement", _validate_complex(self.displacement, "displacement")
        )

    @property
    def mean_occupancy(self) -> float:
        return self.thermal.mean_occupancy

    @property
    def s(self) -> float:
        return self.thermal.s


@dataclass(frozen=True)
class PurificationSpec:
    """Two-mode Gaussian purification of a displaced thermal state.

    Mode 1 reduces to the displaced thermal state (thermal, alpha); mode 2
    reduces to a displaced thermal state at the same occupancy with
    displacement beta. beta is the free parameter of the fidelity
    maximization.
    """

    thermal: ThermalParams
    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", _validate_complex(self.alpha, "alpha"))
        object.__setattr__(self, "beta", _validate_complex(self.beta, "beta"))

    def mode1_state(self) -> DisplacedThermalState:
        return DisplacedThermalState(self.thermal, self.alpha)

    def mode2_state(self) -> DisplacedThermalState:
        return DisplacedThermalState(self.thermal, self.beta)


@dataclass(frozen=True)
class GaussianForm:
    """Two-mode Gaussian CF as a 4x4 covariance matrix and a mean vector.

    Coordinates are ordered (x1, p1, x2, p2). The covariance must be
    symmetric positive definite; purity corresponds to det V = 1/16.
    """

    covariance: np.ndarray
    displacement_vector: np.ndarray

    def __post_init__(self) -> None:
        cov = np.array(self.covariance, dtype=float)
        disp = np.array(self.displacement_vector, dtype=float)
        if cov.shape != (4, 4):
            raise ValueError(f"covariance must be 4x4, got shape {cov.shape}")
        if disp.shape != (4,):
            raise ValueError(
                f"displacement_vector must have length 4, got shape {disp.shape}"
            )
        scale = max(1.0, float(np.max(np.abs(cov))))
        if np.max(np.abs(cov - cov.T)) > 1e-9 * scale:
            raise ValueError("covariance must be symmetric")
        if np.linalg.eigvalsh(cov)[0] <= 0.0:
            raise ValueError("covariance must be positive definite")
        object.__setattr__(self, "covariance", cov)
        object.__setattr__(self, "displacement_vector", disp)

    def to_json_dict(self) -> dict:
        """Row-major JSON payload, {"cov": [[...], ...], "disp": [...]}."""
        return {
            "cov": self.covariance.tolist(),
            "disp": self.displacement_vector.tolist(),
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "GaussianForm":
        return cls(np.array(payload["cov"]), np.array(payload["disp"]))


def weyl_compose(alpha: complex, beta: complex) -> tuple[complex, complex]:
    """Heisenberg-Weyl composition: D(alpha) D(beta) = phase * D(alpha + beta).

    Returns (phase, alpha + beta) with phase = exp[(alpha beta* - alpha* beta)/2],
    which always has unit modulus.
    """
    alpha = _validate_complex(alpha, "alpha")
    beta = _validate_complex(beta, "beta")
    exponent = 0.5 * (alpha * beta.conjugate() - alpha.conjugate() * beta)
    return cmath.exp(exponent), alpha + beta


def tcs_cf(state: DisplacedThermalState, lam: complex) -> complex:
    """CF of a displaced thermal state, exp[-(n+1/2)|lam|^2 + lam a* - lam* a].

    Grouped so the displacement part is assembled as an exactly imaginary
    number first, which makes this bitwise identical to the lambda2 = 0
    marginal of purification_cf.
    """
    n = state.mean_occupancy
    a = state.displacement
    lam = complex(lam)
    quad = -(n + 0.5) * abs(lam) ** 2
    disp = lam * a.conjugate() - lam.conjugate() * a
    return cmath.exp(quad + disp)


def purification_cf(spec: PurificationSpec, lambda1: complex, lambda2: complex) -> complex:
    """Two-mode CF of the Gaussian purification.

    chi(l1, l2) = exp[-(n+1/2)(|l1|^2 + |l2|^2) + sqrt(n(n+1)) (l1 l2 + l1* l2*)]
                  * exp[l1 a* - l1* a + l2 b* - l2* b]

    Setting lambda2 = 0 recovers the mode-1 marginal CF independently of beta,
    and symmetrically for lambda1 = 0.
    """
    l1 = complex(lambda1)
    l2 = complex(lambda2)
    n = spec.thermal.mean_occupancy
    cross = math.sqrt(n * (n + 1.0)) * 2.0 * (l1 * l2).real
    quad = -(n + 0.5) * (abs(l1) ** 2 + abs(l2) ** 2) + cross
    disp = (
        l1 * spec.alpha.conjugate()
        - l1.conjugate() * spec.alpha
        + l2 * spec.beta.conjugate()
        - l2.conjugate() * spec.beta
    )
    return cmath.exp(quad + disp)


def purification_gaussian_form(spec: PurificationSpec) -> GaussianForm:
    """Covariance matrix and mean vector of the purification CF.

    The covariance has n + 1/2 on the diagonal and +-sqrt(n(n+1)) on the
    cross-mode x1x2 / p1p2 entries; its determinant is identically 1/16.
    """
    n = spec.thermal.mean_occupancy
    diag = n + 0.5
    c = math.sqrt(n * (n + 1.0))
    cov = np.array(
        [
            [diag, 0.0, c, 0.0],
            [0.0, diag, 0.0, -c],
            [c, 0.0, diag, 0.0],
            [0.0, -c, 0.0, diag],
        ]
    )
    disp = _SQRT2 * np.array(
        [spec.alpha.real, spec.alpha.imag, spec.beta.real, spec.beta.imag]
    )
    return GaussianForm(cov, disp)


def cf_phase_space_vector(lambda1: complex, lambda2: complex) -> np.ndarray:
    """Real vector b conjugate to (x1, p1, x2, p2) with D(l1, l2) = exp(i b.r)."""
    l1 = complex(lambda1)
    l2 = complex(lambda2)
    return np.array(
        [_SQRT2 * l1.imag, -_SQRT2 * l1.real, _SQRT2 * l2.imag, -_SQRT2 * l2.real]
    )


def gaussian_form_cf(form: GaussianForm, lambda1: complex, lambda2: complex) -> complex:
    """Evaluate the CF encoded by a GaussianForm at complex arguments (l1, l2)."""
    b = cf_phase_space_vector(lambda1, lambda2)
    quad = -0.5 * float(b @ form.covariance @ b)
    return cmath.exp(complex(quad, float(b @ form.displacement_vector)))
