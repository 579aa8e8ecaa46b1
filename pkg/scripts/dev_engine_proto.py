#!/usr/bin/env python3
"""Scratch: prototype the half-period partition engine and check k^(-2s) identity."""
import time
import numpy as np
from scipy.special import gammaln

GL_N = 24
GL_X, GL_W = np.polynomial.legendre.leggauss(GL_N)


def p_const(s, r):
    logc = gammaln(1.5 - s) - gammaln(s) - s * np.log(4.0) - 1.5 * np.log(np.pi)
    return np.exp(logc + (2 * s - 2) * np.log(r))


def p_example1(r):
    s = (6.0 + 9.0 * r) / (10.0 * (1.0 + r))
    logc = gammaln(1.5 - s) - gammaln(s) - s * np.log(4.0) - 1.5 * np.log(np.pi)
    return np.exp(logc + (2 * s - 2) * np.log(r))


def panel_integrals(f, a_edges, b_edges, k, lam):
    a = np.asarray(a_edges)[:, None]
    b = np.asarray(b_edges)[:, None]
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    r = mid + half * GL_X[None, :]
    vals = f(r) * np.sin(k * r)
    if lam > 0:
        vals = vals * np.exp(-lam * r)
    return half[:, 0] * (vals @ GL_W)


def head_integral(f, k, lam, tol=1e-16, max_levels=600):
    top = np.pi / k
    total = 0.0
    for start in range(0, max_levels, 40):
        hi = top * 0.5 ** np.arange(start, start + 40)
        lo = hi * 0.5
        vals = panel_integrals(f, lo, hi, k, lam)
        total += vals.sum()
        if np.max(np.abs(vals)) < tol * max(abs(total), 1e-300):
            break
    return total


def cvz_alternating(a, n):
    """Sum of sum_{j>=0} (-1)^j a_j by Chebyshev-weighted acceleration."""
    d = (3.0 + np.sqrt(8.0)) ** n
    d = 0.5 * (d + 1.0 / d)
    b = -1.0
    c = -d
    s = 0.0
    for j in range(n):
        c = b - c
        s += c * a[j]
        b *= (j + n) * (j - n) / ((j + 0.5) * (j + 1.0))
    return s / d


def accel_tail(terms, tol_abs):
    """terms: strictly alternating sequence. Returns (sum, err_estimate) or None."""
    t = np.asarray(terms, dtype=float)
    if len(t) < 24:
        return None
    sign = 1.0 if t[0] > 0 else -1.0
    a = sign * t
    if np.any(a <= 0):
        return None
    best = None
    prev = None
    for n in range(12, len(t) + 1, 6):
        v = sign * cvz_alternating(a, n)
        if prev is not None:
            err = abs(v - prev)
            if best is None or err < best[1]:
                best = (v, err)
        prev = v
    if best and best[1] <= tol_abs:
        return best
    return best  # caller checks error


def sine_integral(f, k, lam=0.0, warm=12, block=24, max_half=200000, rtol=1e-9):
    h = np.pi / k
    head = head_integral(f, k, lam)
    terms = []
    direct = 0.0
    j = 1
    while j <= max_half:
        jj = np.arange(j, j + block)
        u = panel_integrals(f, jj * h, (jj + 1) * h, k, lam)
        terms.extend(u.tolist())
        direct += u.sum()
        j += block
        scale = max(abs(head + direct), abs(head), 1e-300)
        # direct termination (damped / compact support)
        if np.max(np.abs(u)) < 1e-16 * scale:
            return head + direct, j - 1, np.max(np.abs(u))
        if len(terms) >= warm + 24:
            t = np.asarray(terms[warm:])
            if np.all(t[:-1] * t[1:] < 0):
                got = accel_tail(t, rtol * scale)
                if got is not None:
                    v, err = got
                    val = head + sum(terms[:warm]) + v
                    if err <= rtol * max(abs(val), 1e-300):
                        return val, j - 1, err
        if lam > 0 and np.max(np.abs(u)) < rtol * scale:
            return head + direct, j - 1, np.max(np.abs(u))
    raise RuntimeError(f"no convergence, half-panels={j}")


def khat_generic(pfun, k, lam=0.0, rtol=1e-9):
    v, nh, err = sine_integral(pfun, k, lam, rtol=rtol)
    return 4 * np.pi / k * v, nh, err


print("lam = 0 identity check (acceptance-1 style):")
t0 = time.time()
for s in (0.3, 0.6, 0.9):
    errs, panels = [], []
    for k in np.geomspace(0.1, 10, 50):
        v, nh, err = khat_generic(lambda r: p_const(s, r), k)
        exact = k ** (-2 * s)
        errs.append(abs(v - exact) / exact)
        panels.append(nh)
    print(f"  s={s}: worst rel err {max(errs):.3e}, max half-panels {max(panels)}")
print(f"elapsed {time.time()-t0:.2f}s for 150 evaluations")

print("\nlam > 0 vs closed form (s=1.3):")
import mpmath as mp
mp.mp.dps = 30
t0 = time.time()
for kk in (1.0, 5.0):
    for lam in (0.2, 0.025):
        v, nh, err = khat_generic(lambda r: p_const(1.3, r), kk, lam)
        mu = mp.mpf(2 * 1.3 - 1)
        c = mp.gamma(mp.mpf(3) / 2 - mp.mpf("1.3")) / (4 ** mp.mpf("1.3") * mp.pi ** mp.mpf(1.5) * mp.gamma(mp.mpf("1.3")))
        exact = float(4 * mp.pi / kk * c * mp.gamma(mu) * mp.sin(mu * mp.atan(kk / mp.mpf(lam))) / (mp.mpf(lam) ** 2 + kk ** 2) ** (mu / 2))
        print(f"  k={kk} lam={lam}: rel err {abs(v-exact)/exact:.3e}  halfpanels={nh}")
print(f"elapsed {time.time()-t0:.2f}s")

print("\nexample-1 profile, small/large k:")
for k in (0.01, 0.02, 0.05, 1.0, 20.0, 50, 100):
    t1 = time.time()
    v, nh, err = khat_generic(p_example1, k)
    print(f"  k={k}: khat={v:.6e}  halfpanels={nh}  {time.time()-t1:.3f}s  (k^-1.8={k**-1.8:.4e}, k^-1.2={k**-1.2:.4e})")

print("\nslope checks example 1:")
ks = np.geomspace(0.01, 0.02, 9)
vs = np.array([khat_generic(p_example1, k)[0] for k in ks])
slope_small = np.polyfit(np.log(ks), np.log(vs), 1)[0]
ks2 = np.geomspace(50, 100, 9)
vs2 = np.array([khat_generic(p_example1, k)[0] for k in ks2])
slope_large = np.polyfit(np.log(ks2), np.log(vs2), 1)[0]
print(f"  slope at k in [0.01,0.02]: {slope_small:.4f} (want ~ -1.8)")
print(f"  slope at k in [50,100]:    {slope_large:.4f} (want ~ -1.2)")
