"""Independent re-evaluation of the closed-form reference values frozen into
the C++ unit tests. Uses mpmath at 50 digits; run with `python3 reference_values.py`."""
from itertools import combinations

from mpmath import mp, mpf, log, sqrt, floor, findroot

mp.dps = 50


def cap(p, n=1):
    return log(1 + mpf(p) / n) / 2


def rank(h, p, s, n=1):
    return cap(sum(mpf(h[i]) * p[i] for i in s), n)


def subsets(m):
    for size in range(1, m + 1):
        yield from combinations(range(m), size)


print("awgn (1,1)", cap(1), "(3,1)", cap(3))
h, p = (1, 1), (1, 1)
print("rank {1}", rank(h, p, (0,)), "rank {1,2}", rank(h, p, (0, 1)))
r = (mpf("0.5"), mpf("0.5"))
for s in subsets(2):
    print("violation", s, sum(r[i] for i in s) - rank(h, p, s))
f1, f12 = rank(h, p, (0,)), rank(h, p, (0, 1))
print("vertex (1,2)", f1, f12 - f1)
excess = (1 - f12) / 2
print("approx project (0.5,0.5): subtract", excess, "->", mpf("0.5") - excess)
hb = (mpf("1.2"), 1)
print("region distance", [abs(rank(h, p, s) - rank(hb, p, s)) for s in subsets(2)])
print("linear utility", 2 * f1 + (f12 - f1))
print("constants log box=f1: B", sqrt(2), "A", mpf("0.5") / (1 + f1) ** 2)


def worst(a, b, what):
    a, b, what = mpf(a), mpf(b), mpf(what)
    wp = sqrt(what) * (sqrt(what) + sqrt(b / a))
    k = floor((2 * b / (a * wp)) ** (mpf(2) / 3))
    alpha = (16 * a / b**2) ** (mpf(1) / 3) * wp ** (mpf(2) / 3)
    theta = (2 * b / a) ** (mpf(2) / 3) * wp ** (mpf(1) / 3)
    return wp, k, alpha, theta


def solve_c(what):
    what = mpf(what)
    if what == 0:
        return mpf(1)
    g = lambda c: (c * c - 1) ** 8 / (2**8 * c**4) - what
    lo, hi = mpf(1), mpf(2)
    while g(hi) < 0:
        hi *= 2
    for _ in range(400):
        mid = (lo + hi) / 2
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def avg(a, b, wbar, what):
    a, b, wbar = mpf(a), mpf(b), mpf(wbar)
    c = solve_c(what)
    gamma = c * (b / a) ** (mpf(3) / 4) * wbar ** (mpf(1) / 4)
    k = floor(gamma / wbar)
    alpha = a * gamma**2 / b**2
    bound = 2 * gamma + sqrt(gamma * b / a)
    return c, gamma, k, alpha, bound


print("worst(0.5,1,1e-4): w', k, alpha, theta =", worst("0.5", 1, "1e-4"))
for w in ("0", "1e-8", 2 ** -8, "0.1", "1e-4"):
    print("solve_c", w, solve_c(mpf(w)))
print("avg(0.5,1,1e-4,1e-4): c, gamma, k, alpha, bound =", avg("0.5", 1, "1e-4", "1e-4"))

# Scenario S1: M=2, P=(1,1), N0=1, gains in [0.5,2], vhat=1e-4 (what=1e-4),
# uniform steps (wbar = vhat/2), weighted-log w=(1,1), box from hMax=2.
rmax = cap(2)
A1 = mpf("0.5") / (1 + rmax) ** 2
B1 = sqrt(2)
print("S1 A, B =", A1, B1)
print("S1 worst:", worst(A1, B1, "1e-4"))
print("S1 avg:", avg(A1, B1, "5e-5", "1e-4"))
