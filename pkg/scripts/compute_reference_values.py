#!/usr/bin/env python3
"""Arbitrary-precision oracle for the frozen constants used in the test suite.

Every hard-coded expected value in tests/ that is not a textbook identity was
produced by this script (mpmath at 50 significant digits).  Re-run it to
regenerate the table printed below; the tests quote these digits verbatim.
"""

import mpmath as mp

mp.mp.dps = 50


def kernel_constant(s, n, r):
    """Riesz-type kernel Gamma(n/2-s) / (4^s pi^(n/2) Gamma(s)) * r^(2s-n)."""
    return (
        mp.gamma(n / mp.mpf(2) - s)
        / (mp.mpf(4) ** s * mp.pi ** (n / mp.mpf(2)) * mp.gamma(s))
        * r ** (2 * s - n)
    )


def s_example1(r):
    return (6 + 9 * r) / (10 * (1 + r))


def s_example2(r):
    return (11 + 13 * r) / (10 * (1 + r))


def kernel_profile(s_of_r, n, r):
    s = s_of_r(mp.mpf(r))
    return kernel_constant(s, n, mp.mpf(r))


def khat_constant_regularized(s, k, lam):
    """Closed form of (4 pi / k) * int_0^inf e^(-lam r) C_s r^(2s-2) sin(kr) dr.

    Uses int_0^inf e^(-lam r) r^(mu-1) sin(kr) dr
        = Gamma(mu) sin(mu arctan(k/lam)) / (lam^2+k^2)^(mu/2),  mu = 2s-1.
    """
    s, k, lam = mp.mpf(s), mp.mpf(k), mp.mpf(lam)
    mu = 2 * s - 1
    c = mp.gamma(mp.mpf(3) / 2 - s) / (mp.mpf(4) ** s * mp.pi ** mp.mpf(1.5) * mp.gamma(s))
    integral = mp.gamma(mu) * mp.sin(mu * mp.atan(k / lam)) / (lam ** 2 + k ** 2) ** (mu / 2)
    return 4 * mp.pi / k * c * integral


def main():
    print("# special functions")
    print("gamma(0.75)        =", mp.nstr(mp.gamma(mp.mpf(3) / 4), 20))
    print("gamma(0.5)         =", mp.nstr(mp.sqrt(mp.pi), 20))
    print("digamma(0.9)       =", mp.nstr(mp.digamma(mp.mpf("0.9")), 20))
    print("digamma(0.5)       =", mp.nstr(-mp.euler - 2 * mp.log(2), 20))
    print("digamma(1.0)       =", mp.nstr(-mp.euler, 20))
    print("log_gamma(30.5)    =", mp.nstr(mp.loggamma(mp.mpf("30.5")), 20))
    print("gamma(12.3)        =", mp.nstr(mp.gamma(mp.mpf("12.3")), 20))

    print()
    print("# kernel values (n = 3)")
    print("K[s=0.6](r=2)      =", mp.nstr(kernel_constant(mp.mpf("0.6"), 3, mp.mpf(2)), 20))
    print("K[s=0.5](r=1)      =", mp.nstr(kernel_constant(mp.mpf("0.5"), 3, mp.mpf(1)), 20),
          " (exact 1/(2 pi^2) =", mp.nstr(1 / (2 * mp.pi ** 2), 20), ")")
    print("K[example1](r=1)   =", mp.nstr(kernel_profile(s_example1, 3, 1), 20),
          " (exact 4^(-3/4) pi^(-3/2))")
    print("K[example1](r=0.3) =", mp.nstr(kernel_profile(s_example1, 3, mp.mpf("0.3")), 20))
    print("K[example2](r=1)   =", mp.nstr(kernel_profile(s_example2, 3, 1), 20))
    print("K[example2](r=5)   =", mp.nstr(kernel_profile(s_example2, 3, 5), 20))
    print("p[example1](r=1e-4)=", mp.nstr(mp.mpf("1e-4") * kernel_profile(s_example1, 3, mp.mpf("1e-4")), 20))
    print("p[example1](r=1e4) =", mp.nstr(mp.mpf("1e4") * kernel_profile(s_example1, 3, mp.mpf("1e4")), 20))

    print()
    print("# constant-order transform identity spot values")
    for s, k in [(mp.mpf("0.9"), 3), (mp.mpf("0.6"), 2), (mp.mpf("1.1"), 2)]:
        print(f"k^(-2s) s={float(s)}, k={k}   =", mp.nstr(mp.mpf(k) ** (-2 * s), 20))

    print()
    print("# Abel-regularized constant-order closed form (lambda > 0)")
    for s in ("1.1", "1.3"):
        for k in (1, 2, 5):
            for lam in ("0.2", "0.1", "0.05", "0.025"):
                v = khat_constant_regularized(mp.mpf(s), k, mp.mpf(lam))
                print(f"khat_lam s={s} k={k} lam={lam} =", mp.nstr(v, 20))

    print()
    print("# 3D radial Fourier pair: f = exp(-r^2)  ->  fhat = pi^(3/2) exp(-k^2/4)")
    for k in ("0.5", "1", "2"):
        num = 4 * mp.pi / mp.mpf(k) * mp.quad(
            lambda r: r * mp.e ** (-r ** 2) * mp.sin(mp.mpf(k) * r), [0, mp.inf]
        )
        print(f"fhat({k}) quad =", mp.nstr(num, 20),
              " closed =", mp.nstr(mp.pi ** mp.mpf(1.5) * mp.e ** (-mp.mpf(k) ** 2 / 4), 20))

    print()
    print("# Newtonian potential of g = exp(-r^2):  sqrt(pi) erf(r) / (4 r)")
    for r in ("0.5", "1", "3"):
        print(f"pot({r}) =", mp.nstr(mp.sqrt(mp.pi) * mp.erf(mp.mpf(r)) / (4 * mp.mpf(r)), 20))

    print()
    print("# example-1 expansion coefficients near r = 0 and r = inf")
    c0 = mp.gamma(mp.mpf(9) / 10) / (2 ** mp.mpf("1.2") * mp.pi ** mp.mpf(1.5) * mp.gamma(mp.mpf(3) / 5))
    cinf = mp.gamma(mp.mpf(3) / 5) / (2 ** mp.mpf("1.8") * mp.pi ** mp.mpf(1.5) * mp.gamma(mp.mpf(9) / 10))
    print("c0 (r^-4/5 coeff)  =", mp.nstr(c0, 20))
    print("cinf (r^-1/5 coeff)=", mp.nstr(cinf, 20))
    print("psi(3/5)+psi(9/10) =", mp.nstr(mp.digamma(mp.mpf(3) / 5) + mp.digamma(mp.mpf(9) / 10), 20))


if __name__ == "__main__":
    main()
