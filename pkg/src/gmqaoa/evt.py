"""Extreme-value estimates of the minimum of a Gaussian energy landscape.

All estimates treat the 2^n basis-state energies as i.i.d. draws from
N(0, sigma^2).  Minima are handled through the lower tail of the normal
quantile function, so ``inv_norm_cdf(1/N)`` is negative and the Gumbel
location sits below the mean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GumbelParams",
    "DegenerateEstimateError",
    "norm_cdf",
    "inv_norm_cdf",
    "gumbel_params",
    "gumbel_mean",
    "emin_estimate_quantile",
    "emin_estimate_closed_form",
    "constant_angles",
]

EULER_GAMMA = 0.5772156649015329


class DegenerateEstimateError(ValueError):
    """Raised when a minimum-energy estimate is zero and cannot set a phase scale."""


@dataclass(frozen=True)
class GumbelParams:
    mu_g: float
    beta_g: float

    def __post_init__(self):
        if not self.beta_g > 0:
            raise ValueError(f"Gumbel scale must be positive, got {self.beta_g}")


# Acklam's rational approximation, relative error ~1.15e-9 before refinement.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def norm_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _acklam(p: float) -> float:
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
        den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        return num / den
    q = p - 0.5
    r = q * q
    num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
    den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    return num / den


def _lower_quantile(p: float) -> float:
    # p <= 0.5: refine in the lower tail where erfc keeps full relative precision
    x = _acklam(p)
    for _ in range(2):
        err = norm_cdf(x) - p
        u = err * math.sqrt(2.0 * math.pi) * math.exp(0.5 * x * x)
        x = x - u / (1.0 + 0.5 * x * u)
    return x


def inv_norm_cdf(p: float) -> float:
    """Quantile function of the standard normal distribution.

    Parameters
    ----------
    p : float
        Probability in the open interval (0, 1).

    Returns
    -------
    float
        ``x`` such that ``norm_cdf(x) == p`` to within about 1e-15 relative.

    Notes
    -----
    Acklam's rational approximation is polished with Halley steps against
    an erfc-based CDF.  The upper half is obtained by symmetry so both tails
    are computed where the CDF has full relative precision.
    """
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must lie in (0, 1), got {p!r}")
    if p == 0.5:
        return 0.0
    if p < 0.5:
        return _lower_quantile(p)
    return -_lower_quantile(1.0 - p)


def inv_norm_cdf_array(p) -> np.ndarray:
    """Elementwise :func:`inv_norm_cdf` over an array of probabilities."""
    p = np.asarray(p, dtype=float)
    out = np.empty_like(p)
    flat = out.reshape(-1)
    for i, v in enumerate(p.reshape(-1)):
        flat[i] = inv_norm_cdf(v)
    return out


def gumbel_params(mu: float, sigma: float, n_states: int) -> GumbelParams:
    """Location and scale of the Gumbel law for the minimum of ``n_states`` normals."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if n_states < 2:
        raise ValueError(f"need at least two states, got {n_states}")
    q1 = inv_norm_cdf(1.0 / n_states)
    qe = inv_norm_cdf(1.0 / (math.e * n_states))
    return GumbelParams(mu_g=mu + sigma * q1, beta_g=sigma * (q1 - qe))


def gumbel_mean(params: GumbelParams) -> float:
    """Mean of the minimum-convention Gumbel law, ``mu_g - gamma_E * beta_g``."""
    return params.mu_g - EULER_GAMMA * params.beta_g


def emin_estimate_quantile(sigma: float, n: int) -> float:
    """Gumbel-mode estimate ``sigma * inv_norm_cdf(2**-n)`` of the ground energy."""
    if sigma < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return sigma * inv_norm_cdf(2.0 ** (-n))


def emin_estimate_closed_form(sigma: float, n: int) -> float:
    """Large-n random-energy-model approximation of the ground energy."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    ln2 = math.log(2.0)
    correction = 1.0 + math.log(n) / (4.0 * ln2 * n)
    return -sigma * math.sqrt(2.0 * ln2) * math.sqrt(n) / correction


def constant_angles(e_min_est: float, depth: int):
    """Fixed Grover-like schedule: every beta is pi/2, every gamma is -pi/e_min_est."""
    from .simulator import ParamSchedule

    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    if e_min_est == 0:
        raise DegenerateEstimateError("minimum-energy estimate is zero; no phase scale")
    gamma = -math.pi / e_min_est
    return ParamSchedule(betas=(math.pi / 2,) * depth, gammas=(gamma,) * depth)
