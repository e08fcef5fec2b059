#!/usr/bin/env python3
"""Regenerate ml_reference.csv: high-precision values of E_{a,b}(-x).

Reference route (independent of the C++ implementation): mpmath power series
with adaptive guard digits for x^(1/a) <= 80, otherwise the optimally-truncated
algebraic asymptotic series plus the saddle exponential pair (weight 0 for a<1,
1/2 for a=1, 1 for a>1). Self-checks against e^-x, cos, sin identities before
writing anything.

Output columns: alpha,beta,x,value (30 significant digits).
"""
import mpmath as mp

R_CROSS = 80.0  # series/asymptotic crossover in r = x^(1/a)


def ml_series(a, b, x):
    """Defining series with guard digits covering the cancellation.

    Peak term ~ e^{r}; the value itself can be as small as e^{r cos(pi/a)}
    for a >= 1, so the lost digits are r*(1 - min(0, cos(pi/a)))*log10(e).
    """
    import math
    r = float(mp.mpf(x) ** (1.0 / a)) if x > 0 else 0.0
    canc = r * (1.0 - min(0.0, math.cos(math.pi / a))) * 0.4343
    dps = int(canc) + 60
    with mp.workdps(dps):
        xa, am, bm = mp.mpf(x), mp.mpf(a), mp.mpf(b)
        s = mp.mpf(0)
        term_scale = mp.mpf(1)
        k = 0
        max_abs = mp.mpf(0)
        while True:
            # the Gamma argument must be formed in working precision: a float
            # a*k+b perturbs e^50-sized terms by ~1e7 absolute
            t = term_scale / mp.gamma(am * k + bm)
            s += t
            max_abs = max(max_abs, abs(t))
            term_scale *= -xa
            k += 1
            if k > 8 and abs(t) < mp.mpf(10) ** (-(dps - 5)) * max(max_abs, mp.mpf(1)):
                break
            if k > 200000:
                raise RuntimeError("series did not converge")
        return +s


def ml_asymptotic(a, b, x, dps=80):
    """Envelope-truncated algebraic series + saddle pair; returns (value, err)."""
    with mp.workdps(dps):
        xa, am, bm = mp.mpf(x), mp.mpf(a), mp.mpf(b)
        s = mp.mpf(0)
        k = 1
        prev_env = mp.inf
        floor = mp.mpf(10) ** (-(dps - 5))
        while k < 5000:
            # smooth magnitude envelope of 1/Gamma(b-ka): Gamma(1-b+ka)/pi
            env = mp.gamma(1 - bm + k * am) / mp.pi * xa ** (-k)
            if env > prev_env:  # divergence onset: optimal truncation point
                break
            s += (-1) ** (k + 1) * mp.rgamma(bm - k * am) * xa ** (-k)
            prev_env = env
            k += 1
            if env < floor * max(abs(s), mp.mpf(1e-300)):
                break  # converged to working precision; no need to reach the onset
        err = mp.gamma(1 - bm + k * am) / mp.pi * xa ** (-k)
        # exponentially small saddle pair (the only saddles on the principal
        # sheet for a in (0,2]); absent below a=1, half weight exactly at a=1
        if a >= 1.0:
            w = mp.mpf(1) if a > 1.0 else mp.mpf(0.5)
            r = xa ** (1 / am)
            th = mp.pi / am
            pair = (2 / am) * r ** (1 - bm) * mp.e ** (r * mp.cos(th)) \
                * mp.cos(r * mp.sin(th) + (1 - bm) * th)
            s += w * pair
        if a in (1.0, 2.0):
            # integer order: the algebraic series terminates (Gamma poles) and
            # the saddle pair is the exact remainder -> representation is exact
            err = mp.mpf(0)
        return +s, err


def ml_neg(a, b, x):
    """E_{a,b}(-x) accurate to <= 1e-28 relative."""
    if x == 0:
        return mp.rgamma(b)
    r = float(mp.mpf(x) ** (1.0 / a))
    if r <= R_CROSS:
        return ml_series(a, b, x)
    v, err = ml_asymptotic(a, b, x)
    if v != 0 and abs(err / v) > mp.mpf(1e-28):
        return ml_series(a, b, x)
    return v


def self_check():
    mp.mp.dps = 40
    for x in [0.0, 0.5, 2.0, 20.0, 300.0, 1e6]:
        got = ml_neg(1.0, 1.0, x)
        want = mp.e ** (-mp.mpf(x))
        assert abs(got - want) <= mp.mpf(1e-28) * max(abs(want), mp.mpf(1e-30)), (x, got, want)
    for x in [0.5, 3.0, 12.0, 80.0, 10000.0]:
        got = ml_neg(2.0, 1.0, mp.mpf(x) ** 2)
        assert abs(got - mp.cos(x)) < mp.mpf(1e-27), (x, got)
        got = ml_neg(2.0, 2.0, mp.mpf(x) ** 2)
        assert abs(got - mp.sin(x) / x) < mp.mpf(1e-27), (x, got)
    # series/asymptotic overlap agreement at the crossover
    for a, b in [(0.5, 0.5), (0.7, 1.0), (1.3, 1.3), (1.7, 1.0)]:
        x = mp.mpf(85.0) ** a
        s = ml_series(a, b, x)
        v, err = ml_asymptotic(a, b, x)
        assert abs(s - v) <= 10 * err + mp.mpf(1e-28) * abs(s), (a, b, float(abs(s - v)), float(err))


def main():
    self_check()
    mp.mp.dps = 40
    alphas = [0.3, 0.5, 0.7, 1.0, 1.3, 1.7, 2.0]
    xgrid = [mp.mpf(0)] + [mp.mpf(10) ** (mp.mpf(j) / 3) for j in range(-9, 25)]
    rows = []
    for a in alphas:
        betas = [1.0] if a == 1.0 else [a, 1.0]
        for b in betas:
            for x in xgrid:
                v = ml_neg(a, b, float(x) if x < 1 else x)
                rows.append("%.17g,%.17g,%s,%s" % (a, b, mp.nstr(x, 17), mp.nstr(v, 30)))
    with open("ml_reference.csv", "w") as f:
        f.write("alpha,beta,x,value\n")
        f.write("\n".join(rows) + "\n")
    print("wrote %d rows" % len(rows))


if __name__ == "__main__":
    main()
