"""Executable checks: closed-form identities, the first example's provable
properties, and a slow direct-convolution reference for the spectral path.

Each check returns a CheckReport whose pass criterion is the single rule

    passed  <=>  |measured - expected| <= tolerance * max(|expected|, floor)

with floor = 1e-300.  Numeric comparisons put the worst observed value in
``measured``; predicate-style checks (positivity, monotonicity) count
violations, with expected = 0 and tolerance = 0.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DomainError
from .exponent import ExponentProfile, constant_profile, make_example1, make_example2
from .kernel import (
    green_values,
    kernel_value,
    p_derivative_example1,
    p_derivative_fd,
    p_value,
)
from .sinexform import (
    DEFAULT_POLICY,
    RegularizationPolicy,
    delta_khat_estimate,
    delta_khat_numeric,
    khat,
    truncation_error_estimate,
    tail_integral_measured,
)

REPORT_FLOOR = 1e-300


@dataclass(frozen=True)
class CheckReport:
    name: str
    passed: bool
    measured: float
    expected: float
    tolerance: float
    detail: str

    @staticmethod
    def from_comparison(name: str, measured: float, expected: float,
                        tolerance: float, detail: str = "") -> "CheckReport":
        ok = abs(measured - expected) <= tolerance * max(abs(expected), REPORT_FLOOR)
        return CheckReport(name, bool(ok), float(measured), float(expected),
                           float(tolerance), detail)

    @staticmethod
    def from_violations(name: str, count: int, detail: str = "") -> "CheckReport":
        return CheckReport.from_comparison(name, float(count), 0.0, 0.0, detail)


def check_constant_order_identity(s: float, k_grid,
                                  policy: RegularizationPolicy = DEFAULT_POLICY,
                                  tolerance: float | None = None) -> CheckReport:
    """Khat for a constant order equals k^(-2s) exactly; measured is the
    worst transform-to-closed-form ratio over the grid."""
    if not (0.0 < s < 1.5):
        raise DomainError("constant-order identity check needs s in (0, 3/2) for n = 3")
    prof = constant_profile(s)
    if tolerance is None:
        tolerance = 1e-6 if prof.decay_exponent < 0 else 1e-3
    worst_ratio, worst_k = 1.0, float("nan")
    for k in np.asarray(k_grid, dtype=float):
        ratio = khat(prof, float(k), policy).value / k ** (-2.0 * s)
        if abs(ratio - 1.0) > abs(worst_ratio - 1.0):
            worst_ratio, worst_k = ratio, k
    return CheckReport.from_comparison(
        f"constant_order_identity[s={s:g}]", worst_ratio, 1.0, tolerance,
        f"worst at k = {worst_k:g}; {len(np.atleast_1d(k_grid))} grid points",
    )


def check_classical_limit(r_grid) -> CheckReport:
    """Green's function at constant order 1 in n = 3 is -1/(4 pi r)."""
    r = np.asarray(r_grid, dtype=float)
    phi = green_values(constant_profile(1.0), r)
    target = -1.0 / (4.0 * np.pi * r)
    ratios = phi / target
    idx = int(np.argmax(np.abs(ratios - 1.0)))
    return CheckReport.from_comparison(
        "classical_limit_green", float(ratios[idx]), 1.0, 1e-10,
        f"worst at r = {r[idx]:g}; {len(r)} grid points",
    )


def check_example1_positivity(k_grid,
                              policy: RegularizationPolicy = DEFAULT_POLICY) -> CheckReport:
    """Khat of the first example is strictly positive on k > 0."""
    prof = make_example1()
    vals = np.array([khat(prof, float(k), policy).value for k in np.asarray(k_grid, float)])
    bad = int(np.sum(vals <= 0.0))
    return CheckReport.from_violations(
        "example1_khat_positivity", bad,
        f"min Khat = {vals.min():.6g} over {len(vals)} k points",
    )


def check_example1_monotonicity(r_grid) -> CheckReport:
    """p(r) = r K(r) is positive, strictly decreasing, blows up at 0 and
    vanishes at infinity for the first example; the closed-form derivative
    is negative and consistent with finite differences."""
    prof = make_example1()
    r = np.asarray(r_grid, dtype=float)
    p = p_value(prof, r)
    dp = p_derivative_example1(r)
    violations = 0
    notes = []
    if not np.all(np.diff(p) < 0.0):
        violations += 1
        notes.append("p not strictly decreasing on grid")
    if not np.all(dp < 0.0):
        violations += 1
        notes.append("closed-form p' not negative everywhere")
    mid = r[(r >= 0.01) & (r <= 100.0)]
    if mid.size:
        fd = p_derivative_fd(prof, mid)
        rel = np.max(np.abs(p_derivative_example1(mid) - fd) / np.abs(fd))
        if rel > 1e-5:
            violations += 1
            notes.append(f"p' disagrees with finite differences: {rel:.2e}")
        else:
            notes.append(f"p'-vs-FD worst rel dev {rel:.2e}")
    if not p_value(prof, 1e-8) > 1e3:
        violations += 1
        notes.append("p(1e-8) <= 1e3, blow-up limit violated")
    if not p_value(prof, 1e8) < 1e-1:
        violations += 1
        notes.append("p(1e8) >= 0.1, vanishing limit violated")
    return CheckReport.from_violations(
        "example1_p_monotonicity", violations, "; ".join(notes) or "all sub-checks hold",
    )


def fit_loglog_slope(k_values, khat_values) -> float:
    """Least-squares slope of log Khat against log k."""
    k = np.asarray(k_values, dtype=float)
    v = np.asarray(khat_values, dtype=float)
    if len(k) < 8:
        raise DomainError("slope fit needs at least 8 points")
    return float(np.polyfit(np.log(k), np.log(v), 1)[0])


def check_asymptotic_slopes(profile: ExponentProfile, k_small, k_large,
                            policy: RegularizationPolicy = DEFAULT_POLICY,
                            slope_tolerance: float = 0.1) -> CheckReport:
    """Khat's log-log slope approaches -2 s(inf) at small k and -2 s(0) at
    large k (small k probes large radii and vice versa)."""
    ks = np.asarray(k_small, dtype=float)
    kl = np.asarray(k_large, dtype=float)
    slope_s = fit_loglog_slope(ks, [khat(profile, float(k), policy).value for k in ks])
    slope_l = fit_loglog_slope(kl, [khat(profile, float(k), policy).value for k in kl])
    want_s = -2.0 * profile.s_at_infinity
    want_l = -2.0 * profile.s_at_zero
    violations = int(abs(slope_s - want_s) > slope_tolerance) + int(
        abs(slope_l - want_l) > slope_tolerance
    )
    return CheckReport.from_violations(
        "asymptotic_slopes", violations,
        f"small-k slope {slope_s:.4f} (target {want_s:g}), "
        f"large-k slope {slope_l:.4f} (target {want_l:g}), allowance {slope_tolerance:g}",
    )


def check_dki_consistency(k: float = 5.0, lam: float = 0.1,
                          indices=(50, 100, 200, 400),
                          tolerance: float = 0.05) -> CheckReport:
    """Per-period analytic estimate converges to the quadrature value as the
    period index grows (second example, damped)."""
    prof = make_example2()
    devs = []
    for i in indices:
        num = delta_khat_numeric(prof, int(i), k, lam)
        est = delta_khat_estimate(prof, int(i), k, lam)
        devs.append(abs(est - num) / abs(num))
    violations = int(devs[-1] > tolerance) + int(
        any(b >= a for a, b in zip(devs, devs[1:]))
    )
    return CheckReport.from_violations(
        "per_period_estimate_consistency", violations,
        "rel devs " + ", ".join(f"i={i}: {d:.4f}" for i, d in zip(indices, devs)),
    )


def check_truncation_soundness(k: float = 5.0, I_values=(50, 100, 200)) -> CheckReport:
    """Measured discarded tail is within a factor 2 of the analytic bound,
    for both example profiles."""
    cases = ((make_example1(), 0.0, "example1"), (make_example2(), 0.1, "example2"))
    violations = 0
    notes = []
    for prof, lam, name in cases:
        for I in I_values:
            measured = abs(tail_integral_measured(prof, int(I), k, lam))
            bound = truncation_error_estimate(prof, int(I), k, lam)
            ratio = measured / bound
            notes.append(f"{name} I={I}: ratio {ratio:.3f}")
            if measured > 2.0 * bound:
                violations += 1
    return CheckReport.from_violations(
        "truncation_bound_soundness", violations, "; ".join(notes),
    )


def _scalar_p(profile: ExponentProfile):
    """Scalar-fast p(rho) = rho K(rho) built on stdlib lgamma, so the oracle
    shares no evaluation code with the production kernel path."""
    import math

    n = profile.n
    c = -(n / 2.0) * math.log(math.pi)
    if profile.form == "moebius":
        num0, num1, den = profile.num0, profile.num1, profile.den
        s_of = lambda rho: (num0 + num1 * rho) / (den * (1.0 + rho))
    elif profile.form == "constant":
        s0 = profile.s_at_zero
        s_of = lambda rho: s0
    else:
        s_of = lambda rho: float(profile.eval(rho))

    def pfun(rho):
        s = s_of(rho)
        return math.exp(
            math.lgamma(n / 2.0 - s) - math.lgamma(s) - s * math.log(4.0)
            + c + (2.0 * s - n + 1.0) * math.log(rho)
        )

    return pfun


def direct_convolution_oracle(kernel, source, r: float,
                              r_support: float | None = None) -> float:
    """(K * g)(r) for radial g by the nested 1-d reduction

        (2 pi / r) int_0^R r' g(r') [ int_{|r-r'|}^{r+r'} rho K(rho) drho ] dr'

    computed with adaptive quadrature at every level.  Slow by design;
    serves as the independent reference for the spectral convolution.
    """
    if r <= 0.0:
        raise DomainError("oracle needs r > 0")
    if isinstance(kernel, ExponentProfile):
        pfun = _scalar_p(kernel)
    else:
        pfun = lambda rho: rho * float(kernel(rho))
    if hasattr(source, "interpolator"):
        g = source.interpolator()
        gfun = lambda rp: float(g(np.asarray([rp]))[0])
        support = r_support if r_support is not None else float(source.r_grid[-1])
    else:
        gfun = source
        if r_support is None:
            raise DomainError("callable sources need an explicit r_support")
        support = float(r_support)

    def inner(rp):
        lo, hi = abs(r - rp), r + rp
        if hi <= lo:
            return 0.0
        val, _ = quad(pfun, lo, hi, epsabs=1e-12, epsrel=1e-10, limit=200)
        return val

    outer, _ = quad(
        lambda rp: rp * gfun(rp) * inner(rp),
        0.0,
        support,
        epsabs=1e-12,
        epsrel=1e-8,
        limit=400,
        points=[r] if r < support else None,
    )
    return 2.0 * np.pi / r * outer


def check_spectral_vs_direct(radii=None, n_radii: int = 4,
                             policy: RegularizationPolicy = DEFAULT_POLICY,
                             tolerance: float = 1e-3) -> CheckReport:
    """Central cross-validation: the spectral convolution agrees with the
    direct-quadrature oracle for the first example and a Gaussian source."""
    from .sinexform import khat_grid
    from .spectral import RadialField, riesz_apply

    prof = make_example1()
    r_grid = np.geomspace(0.01, 30.0, 260)
    field = RadialField(r_grid, np.exp(-(r_grid**2)))
    # k_min well below 1/r_max: the potential's k^(-2 s(inf)) spectrum puts
    # real weight at small k, and truncating it shows up as a constant offset
    table = khat_grid(prof, np.geomspace(0.005, 40.0, 170), policy)
    if radii is None:
        radii = np.geomspace(0.5, 5.0, n_radii)
    out = riesz_apply(prof, field, table, r_grid=np.asarray(radii, dtype=float), policy=policy)
    worst_ratio, worst_r = 1.0, float("nan")
    for rr, spectral_val in zip(out.r_grid, out.values):
        reference = direct_convolution_oracle(prof, field, float(rr))
        ratio = spectral_val / reference
        if abs(ratio - 1.0) > abs(worst_ratio - 1.0):
            worst_ratio, worst_r = ratio, rr
    return CheckReport.from_comparison(
        "spectral_vs_direct_convolution", worst_ratio, 1.0, tolerance,
        f"worst at r = {worst_r:g}; {len(np.atleast_1d(radii))} radii",
    )


def run_suite(quick: bool = False, include_example2: bool = False,
              policy: RegularizationPolicy = DEFAULT_POLICY) -> list:
    """The standard validation battery; returns one report per check."""
    reports = []
    id_orders = (0.6,) if quick else (0.3, 0.6, 0.9)
    id_grid = np.geomspace(0.1, 10.0, 8 if quick else 20)
    for s in id_orders:
        reports.append(check_constant_order_identity(s, id_grid, policy))
    reports.append(check_classical_limit(np.geomspace(0.01, 100.0, 50)))
    pos_grid = np.geomspace(0.05, 20.0, 12 if quick else 40)
    reports.append(check_example1_positivity(pos_grid, policy))
    reports.append(check_example1_monotonicity(np.geomspace(1e-6, 1e6, 100)))
    if not quick:
        reports.append(
            check_asymptotic_slopes(
                make_example1(), np.geomspace(0.01, 0.02, 9), np.geomspace(50.0, 100.0, 9), policy
            )
        )
        reports.append(check_spectral_vs_direct(policy=policy))
    if include_example2:
        abel_grid = np.array([1.0, 2.0, 5.0])
        for s in (1.1, 1.3):
            reports.append(check_constant_order_identity(s, abel_grid, policy))
        reports.append(check_dki_consistency())
        reports.append(check_truncation_soundness())
    return reports


def reports_to_json(reports) -> str:
    return json.dumps([asdict(rep) for rep in reports], indent=1)
