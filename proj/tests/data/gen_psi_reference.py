#!/usr/bin/env python3
"""Regenerate psi_reference.csv: high-precision psi(t) for mu(t) = 1/(1+t).

psi(t) = int_0^t (t-s)^(a-1) E_{a,a}(-lambda (t-s)^a) mu(s) ds, evaluated by the
integrated-by-parts form psi(t) = G(t) mu(0) + int_0^t G(tau) mu'(t-tau) dtau
with G(tau) = lambda^-1 (1 - E_{a,1}(-lambda tau^a)): the integrand is smooth,
so plain adaptive quadrature at high working precision converges.

Independent of the C++ code (language, algorithm route, precision).
Output columns: alpha,lambda,t,psi (25 significant digits).
"""
import mpmath as mp

from gen_ml_reference import ml_neg


def G(a, lam, tau):
    if tau == 0:
        return mp.mpf(0)
    x = lam * mp.mpf(tau) ** a
    return (1 - ml_neg(a, 1.0, x)) / lam


def psi_inverse_linear(a, lam, t):
    """mu = 1/(1+t): psi(t) = G(t) - int_0^t G(tau) (1+t-tau)^-2 dtau."""
    tm = mp.mpf(t)
    # geometric split points from both endpoints keep tanh-sinh panels balanced
    pts = [mp.mpf(0)]
    x = mp.mpf(10) ** -3
    while x < tm / 2:
        pts.append(x)
        x *= 10
    xs = []
    x = mp.mpf(10) ** -3
    while x < tm / 2:
        xs.append(tm - x)
        x *= 10
    pts += sorted(xs) + [tm]
    integral = mp.quad(lambda u: G(a, lam, u) / (1 + tm - u) ** 2, pts)
    return G(a, lam, t) - integral


def main():
    mp.mp.dps = 30
    cases = []
    for a, lam in [(0.7, 1.0), (0.7, 4.0), (0.70710678118654752, 1.0), (1.3, 2.0)]:
        for t in [0.5, 5.0, 1e2, 1e4, 1e6]:
            cases.append((a, lam, t))
    rows = []
    for a, lam, t in cases:
        v = psi_inverse_linear(a, lam, t)
        rows.append("%.17g,%.17g,%.17g,%s" % (a, lam, t, mp.nstr(v, 25)))
        print(rows[-1])
    with open("psi_reference.csv", "w") as f:
        f.write("alpha,lambda,t,psi\n")
        f.write("\n".join(rows) + "\n")
    print("wrote %d rows" % len(rows))


if __name__ == "__main__":
    main()
