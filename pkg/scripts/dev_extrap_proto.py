#!/usr/bin/env python3
"""Scratch: compare lambda->0 extrapolation schemes on exact Abel-regularized values."""
import numpy as np
import mpmath as mp

mp.mp.dps = 30


def khat_lam(s, k, lam):
    s, k, lam = mp.mpf(s), mp.mpf(k), mp.mpf(lam)
    mu = 2 * s - 1
    c = mp.gamma(mp.mpf(3) / 2 - s) / (mp.mpf(4) ** s * mp.pi ** mp.mpf(1.5) * mp.gamma(s))
    integ = mp.gamma(mu) * mp.sin(mu * mp.atan(k / lam)) / (lam ** 2 + k ** 2) ** (mu / 2)
    return float(4 * mp.pi / k * c * integ)


def fit_beta_last3(lams, vals):
    d1 = vals[-2] - vals[-3]
    d2 = vals[-1] - vals[-2]
    if d1 == 0 or d2 == 0 or (d1 > 0) != (d2 > 0):
        return None
    rho = lams[-1] / lams[-2]
    return float(np.log(d2 / d1) / np.log(rho))


def single_term(lams, vals, beta):
    l1, l2 = lams[-2], lams[-1]
    v1, v2 = vals[-2], vals[-1]
    c = (v1 - v2) / (l1**beta - l2**beta)
    return v2 - c * l2**beta


def neville(lams, vals):
    """Polynomial extrapolation to lambda = 0 (standard Neville recursion)."""
    lam = np.asarray(lams, dtype=float)
    t = np.asarray(vals, dtype=float).copy()
    n = len(t)
    for m in range(1, n):
        for i in range(n - m):
            t[i] = (lam[i] * t[i + 1] - lam[i + m] * t[i]) / (lam[i] - lam[i + m])
    return t[0]


def neville_beta(lams, vals, beta):
    """Same but in the variable x = lambda^beta (first-order term becomes linear)."""
    x = np.asarray(lams, dtype=float) ** beta
    t = np.asarray(vals, dtype=float).copy()
    n = len(t)
    for m in range(1, n):
        for i in range(n - m):
            t[i] = (x[i] * t[i + 1] - x[i + m] * t[i]) / (x[i] - x[i + m])
    return t[0]


def rational_bs(lams, vals):
    """Bulirsch-Stoer rational extrapolation to 0."""
    lam = np.asarray(lams, dtype=float)
    n = len(lam)
    T = np.zeros((n, n))
    T[:, 0] = vals
    for m in range(1, n):
        for i in range(n - m):
            num = T[i + 1, m - 1] - T[i, m - 1]
            den = (lam[i] / lam[i + m]) * (1 - num / (T[i + 1, m - 1] - T[i + 1, m - 2] if m > 1 else 1)) - 1
            if den == 0:
                T[i, m] = T[i + 1, m - 1]
            else:
                T[i, m] = T[i + 1, m - 1] + num / den
    return T[0, n - 1]


lams = [0.2, 0.1, 0.05, 0.025]
print(f"{'s':>4} {'k':>3} {'exact':>12} {'beta':>7} {'1term':>11} {'neville':>11} {'nevbeta':>11} {'rational':>11}")
for s in (1.1, 1.3, 1.45):
    for k in (1, 2, 5):
        vals = [khat_lam(s, k, l) for l in lams]
        exact = float(mp.mpf(k) ** (-2 * mp.mpf(s)))
        beta = fit_beta_last3(lams, vals)
        st = single_term(lams, vals, beta) if beta else float("nan")
        nv = neville(lams, vals)
        nb = neville_beta(lams, vals, beta) if beta else float("nan")
        rt = rational_bs(lams, vals)
        print(f"{s:4} {k:3} {exact:12.8f} {beta:7.3f} "
              f"{abs(st-exact)/exact:11.2e} {abs(nv-exact)/exact:11.2e} "
              f"{abs(nb-exact)/exact:11.2e} {abs(rt-exact)/exact:11.2e}")

# how accurate do per-lambda values need to be? perturb with 1e-8 noise
rng = np.random.default_rng(0)
print("\nnoise sensitivity (1e-7 rel noise on values, neville):")
for s, k in [(1.1, 1), (1.3, 1)]:
    vals = np.array([khat_lam(s, k, l) for l in lams])
    exact = float(mp.mpf(k) ** (-2 * mp.mpf(s)))
    errs = []
    for _ in range(200):
        noisy = vals * (1 + 1e-7 * rng.standard_normal(4))
        errs.append(abs(neville(lams, noisy) - exact) / exact)
    print(f"  s={s} k={k}: median {np.median(errs):.2e}  p95 {np.quantile(errs, 0.95):.2e}")
