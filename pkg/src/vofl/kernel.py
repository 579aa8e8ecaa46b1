"""The variable-order Riesz-type kernel, its radial moment p(r) = r K(r),
and the Green's function of the associated Poisson problem.

    K(r) = Gamma(n/2 - s(r)) / (4^s(r) pi^(n/2) Gamma(s(r))) * r^(2 s(r) - n)

Evaluation goes through log-gamma differences plus (2 s - n) log r so the
power-law factor cannot overflow at extreme radii.  The kernel is positive
for every admissible order function (both gamma arguments positive) and
weakly singular at r = 0, which stays outside the domain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .exponent import ExponentProfile, make_example1
from .specialfun import digamma, log_gamma

_LOG4 = np.log(4.0)
_LOGPI = np.log(np.pi)


@dataclass(frozen=True)
class KernelEvaluation:
    """Kernel value at one radius with its diagnostics."""

    r: float
    k_value: float
    p_value: float
    s_local: float


@dataclass(frozen=True)
class GreenFunctionSample:
    """Fundamental-solution value Phi(r) = -K(r) at one radius."""

    r: float
    phi_value: float


def _check_positive_radius(r) -> np.ndarray:
    arr = np.asarray(r, dtype=float)
    if arr.size and (np.any(arr <= 0.0) or not np.all(np.isfinite(arr))):
        raise DomainError("kernel is defined for finite r > 0 (weakly singular at 0)")
    return arr


def log_kernel_value(profile: ExponentProfile, r) -> np.ndarray:
    """ln K(r), vectorized; the numerically safe core of every evaluation."""
    arr = _check_positive_radius(r)
    s = profile.eval(arr)
    n = profile.n
    return (
        log_gamma(n / 2.0 - s)
        - log_gamma(s)
        - s * _LOG4
        - (n / 2.0) * _LOGPI
        + (2.0 * s - n) * np.log(arr)
    )


def kernel_value(profile: ExponentProfile, r):
    """K(r) for scalar or array r > 0."""
    return np.exp(log_kernel_value(profile, r))


def p_value(profile: ExponentProfile, r):
    """p(r) = r K(r), the radial weight entering the Fourier-sine transform."""
    arr = _check_positive_radius(r)
    return np.exp(log_kernel_value(profile, arr) + np.log(arr))


def kernel_eval(profile: ExponentProfile, r: float) -> KernelEvaluation:
    """Kernel value at one radius together with p(r) and the local order."""
    rr = float(r)
    kv = float(kernel_value(profile, rr))
    return KernelEvaluation(r=rr, k_value=kv, p_value=rr * kv, s_local=float(profile.eval(rr)))


def kernel_constant_order(s: float, n: int, r):
    """Constant-order kernel; homogeneous of degree 2s - n in r."""
    if not (0.0 < s < n / 2.0):
        raise DomainError(f"constant order must lie in (0, n/2), got s = {s!r}")
    arr = _check_positive_radius(r)
    out = np.exp(
        log_gamma(n / 2.0 - s)
        - log_gamma(s)
        - s * _LOG4
        - (n / 2.0) * _LOGPI
        + (2.0 * s - n) * np.log(arr)
    )
    return float(out) if np.ndim(r) == 0 else out


def green_function(profile: ExponentProfile, r: float) -> GreenFunctionSample:
    """Phi(r) = -K(r): the radial fundamental solution of the variable-order
    Poisson problem; strictly negative and vanishing at infinity."""
    ev = kernel_eval(profile, r)
    return GreenFunctionSample(r=ev.r, phi_value=-ev.k_value)


def green_values(profile: ExponentProfile, r):
    """Vectorized Phi(r) = -K(r)."""
    return -kernel_value(profile, r)


# ---------------------------------------------------------------------------
# closed forms specific to the first example profile s(r) = (6+9r)/(10(1+r))
# ---------------------------------------------------------------------------

def p_derivative_example1(r):
    """Closed-form p'(r) for the first example profile; strictly negative.

    p'(r) = -K(r)/(10 (1+r)^2) * { 2r (r + 5 + ln 8) - 6 r ln r + 8
            + 3r [ psi(s(r)) + psi(3/2 - s(r)) ] }

    where the two digamma arguments are s(r) = (9r+6)/(10(r+1)) and its
    complement (6r+9)/(10(r+1)).  Monotonicity of the digamma function
    makes the brace positive for all r > 0.
    """
    arr = _check_positive_radius(r)
    profile = make_example1()
    s = profile.eval(arr)
    kv = kernel_value(profile, arr)
    brace = (
        2.0 * arr * (arr + 5.0 + np.log(8.0))
        - 6.0 * arr * np.log(arr)
        + 8.0
        + 3.0 * arr * (digamma(s) + digamma(1.5 - s))
    )
    out = -kv / (10.0 * (1.0 + arr) ** 2) * brace
    return float(out) if np.ndim(r) == 0 else out


def p_derivative_fd(profile: ExponentProfile, r, rel_step: float = 1e-6):
    """Centered finite difference of p(r); the general-profile derivative."""
    arr = _check_positive_radius(r)
    h = rel_step * arr
    out = (p_value(profile, arr + h) - p_value(profile, arr - h)) / (2.0 * h)
    return float(out) if np.ndim(r) == 0 else out


# Expansion coefficients for the first example:
#   near 0:   p(r) ~ c0 r^(-4/5) - (3/10) c0 r^(1/5) [ -2 ln r + ln 4
#                    + psi(3/5) + psi(9/10) ] + O(r^(6/5))
#   near inf: p(r) ~ cinf r^(-1/5) + O(r^(-6/5))
def _example1_c0() -> float:
    return float(np.exp(log_gamma(0.9) - log_gamma(0.6) - 1.2 * np.log(2.0) - 1.5 * _LOGPI))


def _example1_cinf() -> float:
    return float(np.exp(log_gamma(0.6) - log_gamma(0.9) - 1.8 * np.log(2.0) - 1.5 * _LOGPI))


def p_asymptotics_example1(r, regime: str):
    """Two-term r -> 0 expansion or leading r -> inf tail of p for the
    first example profile."""
    arr = _check_positive_radius(r)
    if regime == "near_zero":
        c0 = _example1_c0()
        log_term = -2.0 * np.log(arr) + _LOG4 + digamma(0.6) + digamma(0.9)
        out = c0 * arr ** (-0.8) - 0.3 * c0 * arr ** 0.2 * log_term
    elif regime == "near_infinity":
        out = _example1_cinf() * arr ** (-0.2)
    else:
        raise DomainError(f"regime must be 'near_zero' or 'near_infinity', got {regime!r}")
    return float(out) if np.ndim(r) == 0 else out
