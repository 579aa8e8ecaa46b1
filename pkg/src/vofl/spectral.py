"""Radial fields, spectral tables, and the transform-space operator algebra.

A radial field is a function of r = |x| sampled on a strictly increasing
grid.  The 3-d Fourier pair for such fields is

    fhat(k) = (4 pi / k) int_0^inf r f(r) sin(k r) dr
    f(r)    = 1 / (2 pi^2 r) int_0^inf k fhat(k) sin(k r) dk

and both directions reuse the half-period partition engine.  The
variable-order operator acts by division of fhat by the tabulated kernel
transform Khat (its inverse, the convolution with the kernel, acts by
multiplication), so all operator applications are three steps: forward
transform on the table's k grid, a pointwise multiply or divide, inverse
transform back to the radius grid.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .errors import DomainError, TableRangeError
from .exponent import ExponentProfile
from .sinexform import DEFAULT_POLICY, RegularizationPolicy, sine_integral

# positivity floor guarding division by interpolated Khat values
KHAT_FLOOR = 1e-14
# how far beyond the sampled k range power-law extrapolation is trusted
EXTRAPOLATION_SPAN = 1e3
# transform samples smaller than this fraction of the spectrum's peak are
# below any sampled field's fidelity; dividing them by Khat would
# manufacture energy
SPECTRAL_NOISE_FLOOR = 1e-12


@dataclass
class RadialField:
    """Samples of a radial function on a strictly increasing positive grid.

    tail_exponent, when given, continues the field beyond the last sample
    as value * (r / r_last)^tail_exponent; otherwise the field is treated
    as zero there.  head_exponent continues it the same way below the
    first sample; the default (None) freezes the first value, which is the
    right model for smooth radial profiles, while transform-space fields
    built from kernel multiplication or division carry genuine power-law
    behavior at small k and set it explicitly.
    """

    r_grid: np.ndarray
    values: np.ndarray
    tail_exponent: float | None = None
    head_exponent: float | None = None
    # per-sample numerical error estimates when the field came out of a
    # transform; consumers may gate on them, serialization ignores them
    value_errors: np.ndarray | None = None

    def __post_init__(self):
        r = np.asarray(self.r_grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if r.ndim != 1 or r.shape != v.shape or r.size == 0:
            raise DomainError("field needs matching nonempty 1-d grids")
        if np.any(r <= 0.0) or np.any(np.diff(r) <= 0.0):
            raise DomainError("radius grid must be positive and strictly increasing")
        if not np.all(np.isfinite(v)):
            raise DomainError("field values must be finite")
        r.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "r_grid", r)
        object.__setattr__(self, "values", v)

    def interpolator(self):
        """Callable f(r) for arbitrary positive radii (vectorized)."""
        from scipy.interpolate import PchipInterpolator

        interp = PchipInterpolator(np.log(self.r_grid), self.values, extrapolate=False)
        r0, r1 = self.r_grid[0], self.r_grid[-1]
        v0, v1 = self.values[0], self.values[-1]
        beta = self.tail_exponent
        alpha = self.head_exponent

        def f(r):
            r = np.asarray(r, dtype=float)
            out = np.empty_like(r)
            low = r <= r0
            high = r >= r1
            mid = ~(low | high)
            if alpha is None:
                out[low] = v0
            else:
                out[low] = v0 * (r[low] / r0) ** alpha
            out[mid] = interp(np.log(r[mid]))
            if beta is None:
                out[high] = 0.0
            else:
                out[high] = v1 * (r[high] / r1) ** beta
            return out

        return f

    def restricted(self, lo: float, hi: float) -> "RadialField":
        mask = (self.r_grid >= lo) & (self.r_grid <= hi)
        return RadialField(self.r_grid[mask], self.values[mask], self.tail_exponent)


@dataclass
class SpectralTable:
    """Khat sampled over a k grid, with log-log interpolation metadata.

    Interpolation is monotone cubic in (log k, log Khat); beyond the
    sampled range the constant-order power laws take over: slope
    -2 s(inf) below k_min (small k probes large radii) and -2 s(0) above
    k_max.  All stored values are strictly positive.
    """

    k_grid: np.ndarray
    khat_values: np.ndarray
    s_at_zero: float
    s_at_infinity: float
    provenance: dict = dataclass_field(default_factory=dict)
    failures: tuple = ()
    interpolation: str = "pchip-loglog"

    def __post_init__(self):
        k = np.asarray(self.k_grid, dtype=float)
        v = np.asarray(self.khat_values, dtype=float)
        if k.shape != v.shape or k.ndim != 1:
            raise DomainError("table needs matching 1-d grids")
        if k.size and (np.any(k <= 0.0) or np.any(np.diff(k) <= 0.0)):
            raise DomainError("k grid must be positive and strictly increasing")
        if v.size and (np.any(v <= 0.0) or not np.all(np.isfinite(v))):
            raise DomainError("Khat values must be positive and finite (non-vanishing transform)")
        k.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "k_grid", k)
        object.__setattr__(self, "khat_values", v)

    def __len__(self):
        return len(self.k_grid)

    def evaluate(self, k):
        """Interpolated Khat(k) with guarded power-law extrapolation."""
        from scipy.interpolate import PchipInterpolator

        if len(self.k_grid) < 2:
            raise TableRangeError("table too small to interpolate")
        kq = np.asarray(k, dtype=float)
        scalar = kq.ndim == 0
        kq = np.atleast_1d(kq)
        if np.any(kq <= 0.0):
            raise DomainError("Khat is defined for k > 0 only")
        k0, k1 = self.k_grid[0], self.k_grid[-1]
        if np.any(kq < k0 / EXTRAPOLATION_SPAN) or np.any(kq > k1 * EXTRAPOLATION_SPAN):
            raise TableRangeError(
                f"k outside the trusted range [{k0 / EXTRAPOLATION_SPAN:g}, "
                f"{k1 * EXTRAPOLATION_SPAN:g}] of this table"
            )
        interp = PchipInterpolator(np.log(self.k_grid), np.log(self.khat_values),
                                   extrapolate=False)
        out = np.empty_like(kq)
        low = kq < k0
        high = kq > k1
        mid = ~(low | high)
        out[mid] = np.exp(interp(np.log(kq[mid])))
        out[low] = self.khat_values[0] * (kq[low] / k0) ** (-2.0 * self.s_at_infinity)
        out[high] = self.khat_values[-1] * (kq[high] / k1) ** (-2.0 * self.s_at_zero)
        if np.any(out < KHAT_FLOOR):
            raise TableRangeError("interpolated Khat fell below the positivity floor")
        return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def _field_damping(field: RadialField):
    """(effective tail exponent of r*f, needs_damping) for engine routing."""
    if field.tail_exponent is None:
        return None, False
    a = field.tail_exponent + 1.0
    return a, a >= 0.0


def _sine_transform_values(g, freqs, policy, needs_damping):
    """Engine sweep: int_0^inf g(t) sin(w t) dt for each w in freqs.

    Returns (values, error_estimates); the estimates let consumers tell a
    genuinely small transform value from one buried in quadrature noise.
    """
    out = np.empty(len(freqs))
    errs = np.empty(len(freqs))
    for idx, w in enumerate(freqs):
        if needs_damping:
            # keep lambda/w fixed below w = 1: the damped value is analytic
            # in lambda with radius of convergence w
            lam_seq = tuple(l * min(1.0, w) for l in policy.lambda_sequence)
            pairs = [sine_integral(g, w, lam, policy) for lam in lam_seq]
            vals = [v for v, _ in pairs]
            base_err = max(info["error_estimate"] for _, info in pairs)
            if policy.extrapolation == "richardson" and len(vals) >= 2:
                from .sinexform import extrapolate_to_zero

                out[idx], extra_err, _ = extrapolate_to_zero(lam_seq, vals)
                errs[idx] = max(base_err, extra_err)
            else:
                out[idx] = vals[-1]
                errs[idx] = max(base_err, abs(vals[-1] - vals[-2]) if len(vals) > 1 else base_err)
        else:
            out[idx], info = sine_integral(g, w, 0.0, policy)
            errs[idx] = info["error_estimate"]
    return out, errs


def forward_transform(field: RadialField, k_grid,
                      policy: RegularizationPolicy = DEFAULT_POLICY) -> RadialField:
    """fhat on the requested k grid; fhat(k) = (4 pi / k) int r f(r) sin(kr) dr.

    Fields continued by a power law with tail_exponent >= -2 are not
    absolutely integrable against r sin(kr); those are routed through the
    damped evaluation with the policy's lambda sequence.
    """
    ks = np.asarray(k_grid, dtype=float)
    if ks.ndim != 1 or ks.size == 0 or np.any(ks <= 0.0) or np.any(np.diff(ks) <= 0.0):
        raise DomainError("k grid must be nonempty, positive, strictly increasing")
    f = field.interpolator()
    g = lambda r: r * f(r)
    _, damped = _field_damping(field)
    vals, errs = _sine_transform_values(g, ks, policy, damped)
    pre = 4.0 * np.pi / ks
    return RadialField(ks, pre * vals, tail_exponent=None, value_errors=pre * errs)


def inverse_transform(khat_field: RadialField, r_grid,
                      policy: RegularizationPolicy = DEFAULT_POLICY) -> RadialField:
    """Real-space field from its k-space samples,
    f(r) = 1/(2 pi^2 r) int k fhat(k) sin(kr) dk."""
    rs = np.asarray(r_grid, dtype=float)
    if rs.ndim != 1 or rs.size == 0 or np.any(rs <= 0.0) or np.any(np.diff(rs) <= 0.0):
        raise DomainError("radius grid must be nonempty, positive, strictly increasing")
    fhat = khat_field.interpolator()
    g = lambda k: k * fhat(k)
    _, damped = _field_damping(khat_field)
    vals, errs = _sine_transform_values(g, rs, policy, damped)
    pre = 1.0 / (2.0 * np.pi**2 * rs)
    return RadialField(rs, pre * vals, tail_exponent=None, value_errors=pre * errs)


# ---------------------------------------------------------------------------
# operator algebra
# ---------------------------------------------------------------------------

def _check_table(profile: ExponentProfile, table: SpectralTable):
    if len(table) < 4:
        raise TableRangeError("spectral table has too few samples for operator use")
    if (
        abs(table.s_at_zero - profile.s_at_zero) > 1e-12
        or abs(table.s_at_infinity - profile.s_at_infinity) > 1e-12
    ):
        raise DomainError("spectral table was built for a different order function")


def apply_vofl(profile: ExponentProfile, field: RadialField, table: SpectralTable,
               r_grid=None, policy: RegularizationPolicy = DEFAULT_POLICY) -> RadialField:
    """Variable-order fractional Laplacian of a radial field.

    Spectrally: inverse transform of fhat(k) / Khat(k).  The division uses
    the table's own sample points, so no interpolation error enters; the
    positivity floor guards against degenerate tables.  The result decays
    like r^-(3 + 2 s(inf)) far out (nonlocal operators leave algebraic
    tails on compactly concentrated fields), which the returned field
    records so further transforms stay accurate.
    """
    _check_table(profile, table)
    fhat = forward_transform(field, table.k_grid, policy)
    if np.any(table.khat_values < KHAT_FLOOR):
        raise TableRangeError("table contains Khat values below the positivity floor")
    fv = np.array(fhat.values)
    # samples indistinguishable from their own quadrature error would turn
    # into spurious energy once divided by a small Khat; gate them out
    gate = SPECTRAL_NOISE_FLOOR * np.max(np.abs(fv))
    if fhat.value_errors is not None:
        gate = np.maximum(gate, 10.0 * fhat.value_errors)
    fv[np.abs(fv) < gate] = 0.0
    # 1/Khat ~ k^(2 s(inf)) at small k while fhat is flat there
    quotient = RadialField(table.k_grid, fv / table.khat_values,
                           head_exponent=2.0 * profile.s_at_infinity)
    out_grid = field.r_grid if r_grid is None else np.asarray(r_grid, dtype=float)
    out = inverse_transform(quotient, out_grid, policy)
    return RadialField(out.r_grid, out.values,
                       tail_exponent=-(3.0 + 2.0 * profile.s_at_infinity))


def riesz_apply(profile: ExponentProfile, field: RadialField, table: SpectralTable,
                r_grid=None, policy: RegularizationPolicy = DEFAULT_POLICY) -> RadialField:
    """Convolution with the variable-order kernel (the operator inverse):
    inverse transform of Khat(k) * fhat(k).

    The far field of the convolution follows the kernel itself,
    ~ r^(2 s(inf) - 3), which the returned field records.
    """
    _check_table(profile, table)
    fhat = forward_transform(field, table.k_grid, policy)
    product = RadialField(table.k_grid, fhat.values * table.khat_values,
                          head_exponent=-2.0 * profile.s_at_infinity)
    out_grid = field.r_grid if r_grid is None else np.asarray(r_grid, dtype=float)
    out = inverse_transform(product, out_grid, policy)
    return RadialField(out.r_grid, out.values,
                       tail_exponent=2.0 * profile.s_at_infinity - 3.0)


def solve_poisson(profile: ExponentProfile, source: RadialField, table: SpectralTable,
                  r_grid=None, policy: RegularizationPolicy = DEFAULT_POLICY) -> RadialField:
    """Solution of the variable-order Poisson problem with the given source:
    f = -(K * g), so applying the operator to f returns -g."""
    sol = riesz_apply(profile, source, table, r_grid, policy)
    return RadialField(sol.r_grid, -sol.values, tail_exponent=sol.tail_exponent)


def relative_l2(a: np.ndarray, b: np.ndarray) -> float:
    """|| a - b ||_2 / || b ||_2 on a common grid."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    denom = float(np.linalg.norm(b))
    return float(np.linalg.norm(a - b)) / max(denom, 1e-300)


# ---------------------------------------------------------------------------
# named source families
# ---------------------------------------------------------------------------

def gaussian_field(r_grid, sigma: float = 1.0, mass: float | None = None) -> RadialField:
    """Gaussian profile; with mass given, normalized so the 3-d integral is
    mass, otherwise unit amplitude exp(-r^2 / (2 sigma^2))."""
    if sigma <= 0.0:
        raise DomainError("gaussian sigma must be positive")
    r = np.asarray(r_grid, dtype=float)
    if mass is None:
        amp = 1.0
    else:
        amp = mass / ((2.0 * np.pi) ** 1.5 * sigma**3)
    return RadialField(r, amp * np.exp(-(r**2) / (2.0 * sigma**2)))


def plummer_field(r_grid, a: float = 1.0, mass: float = 1.0) -> RadialField:
    """Plummer density profile, 3 mass / (4 pi a^3) (1 + r^2/a^2)^(-5/2)."""
    if a <= 0.0:
        raise DomainError("plummer scale radius must be positive")
    r = np.asarray(r_grid, dtype=float)
    vals = 3.0 * mass / (4.0 * np.pi * a**3) * (1.0 + (r / a) ** 2) ** (-2.5)
    return RadialField(r, vals, tail_exponent=-5.0)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

_FMT = "%.17g"


def field_to_csv(field: RadialField, path, value_name: str = "value"):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["r", value_name])
        for r, v in zip(field.r_grid, field.values):
            w.writerow([_FMT % r, _FMT % v])


def field_from_csv(path, tail_exponent: float | None = None) -> RadialField:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise DomainError(f"{path}: empty field file")
    data = np.array([[float(x) for x in row] for row in rows[1:]])
    return RadialField(data[:, 0], data[:, 1], tail_exponent)


def field_to_json(field: RadialField, path, provenance: dict | None = None):
    payload = {
        "kind": "radial_field",
        "columns": ["r", "value"],
        "rows": [[r, v] for r, v in zip(field.r_grid.tolist(), field.values.tolist())],
        "tail_exponent": field.tail_exponent,
        "provenance": provenance or {},
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)


def table_to_csv(table: SpectralTable, path):
    lam = table.provenance.get("lambda_used", [0.0] * len(table))
    bounds = table.provenance.get("truncation_bounds", [0.0] * len(table))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "khat", "lambda_used", "truncation_bound"])
        for i, (k, v) in enumerate(zip(table.k_grid, table.khat_values)):
            w.writerow([_FMT % k, _FMT % v, _FMT % lam[i], _FMT % bounds[i]])


def table_to_json(table: SpectralTable, path):
    payload = {
        "kind": "spectral_table",
        "columns": ["k", "khat"],
        "rows": [[k, v] for k, v in zip(table.k_grid.tolist(), table.khat_values.tolist())],
        "s_at_zero": table.s_at_zero,
        "s_at_infinity": table.s_at_infinity,
        "interpolation": table.interpolation,
        "provenance": table.provenance,
        "failures": list(table.failures),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)


def default_k_grid(r_grid, count: int | None = None, per_decade: int = 48) -> np.ndarray:
    """Log-spaced k grid spanning [0.5 / r_max, 20 / r_min] of a radius grid.

    Without an explicit count the density is fixed per decade, which is
    what controls interpolation error around a spectrum's peak.
    """
    r = np.asarray(r_grid, dtype=float)
    lo, hi = 0.5 / r[-1], 20.0 / r[0]
    if count is None:
        count = max(64, int(np.ceil(per_decade * np.log10(hi / lo))))
    return np.geomspace(lo, hi, count)


def restrict_table(table: SpectralTable, k_max: float) -> SpectralTable:
    """Sub-table keeping the samples with k <= k_max (at least 4 points)."""
    keep = table.k_grid <= k_max
    if np.sum(keep) < 4:
        keep = np.zeros(len(table), dtype=bool)
        keep[: min(4, len(table))] = True
    return SpectralTable(
        k_grid=table.k_grid[keep],
        khat_values=table.khat_values[keep],
        s_at_zero=table.s_at_zero,
        s_at_infinity=table.s_at_infinity,
        provenance=dict(table.provenance, restricted_to=float(k_max)),
        failures=table.failures,
        interpolation=table.interpolation,
    )


def spectral_support(field: RadialField, k_grid,
                     rel_threshold: float = 1e-8,
                     policy: RegularizationPolicy = DEFAULT_POLICY) -> float:
    """Largest k at which the field's transform is still above
    rel_threshold of its peak; beyond it a sampled field carries only
    interpolation artifacts."""
    ghat = forward_transform(field, np.asarray(k_grid, dtype=float), policy)
    mag = np.abs(ghat.values)
    alive = mag > rel_threshold * mag.max()
    return float(ghat.r_grid[alive][-1]) if np.any(alive) else float(ghat.r_grid[0])
