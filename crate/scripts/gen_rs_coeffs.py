"""Generate the Riemann-Siegel correction tables in crates/core/src/zeta_lab/rs_coeffs.rs.

Each C_j(p) (Gabcke's form, built from Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p)
and its derivatives) is expanded as a power series in u = p - 1/2 and truncated once
the tail is below 1e-19 on |u| <= 1/2. The series of Psi comes from dividing
-cos(2 pi u^2 - 5 pi / 8) by cos(2 pi u); the removable poles at u = +-1/4 make that
division unstable, hence the very high working precision.

Usage: python3 scripts/gen_rs_coeffs.py > crates/core/src/zeta_lab/rs_coeffs.rs
"""
import sys
from mpmath import mp, mpf, cos, sin, pi, factorial, siegelz, floor, sqrt, log, loggamma, mpc, im

mp.dps = 320
DEG = 420

def cos_series(scale, deg):
    # cos(scale * u): coefficients of u^n
    c = [mpf(0)] * (deg + 1)
    for m in range(0, deg // 2 + 1):
        c[2 * m] = (-1) ** m * scale ** (2 * m) / factorial(2 * m)
    return c

def numerator(deg):
    # -cos(2 pi u^2 - 5 pi/8) = -[cos(5pi/8) cos(2 pi u^2) + sin(5pi/8) sin(2 pi u^2)]
    a, b = cos(5 * pi / 8), sin(5 * pi / 8)
    c = [mpf(0)] * (deg + 1)
    m = 0
    while 2 * m <= deg:
        v = (2 * pi) ** m / factorial(m)
        if m % 4 == 0:
            term = a * v
        elif m % 4 == 1:
            term = b * v
        elif m % 4 == 2:
            term = -a * v
        else:
            term = -b * v
        c[2 * m] = -term
        m += 1
    return c

def divide(n, d):
    q = [mpf(0)] * len(n)
    for i in range(len(n)):
        s = n[i] - sum(d[j] * q[i - j] for j in range(1, i + 1) if d[j] != 0)
        q[i] = s / d[0]
    return q

def deriv(c, m):
    out = []
    for i in range(m, len(c)):
        f = mpf(1)
        for r in range(m):
            f *= i - r
        out.append(c[i] * f)
    return out

def lin(*parts):
    n = max(len(p) for _, p in parts)
    out = [mpf(0)] * n
    for w, p in parts:
        for i, v in enumerate(p):
            out[i] += w * v
    return out

psi = divide(numerator(DEG), cos_series(2 * pi, DEG))
d = lambda m: deriv(psi, m)
P2 = pi ** 2
tables = [
    psi,
    lin((-1 / (96 * P2), d(3))),
    lin((1 / (64 * P2), d(2)), (1 / (18432 * P2 ** 2), d(6))),
    lin((-1 / (64 * P2), d(1)), (-1 / (3840 * P2 ** 2), d(5)), (-1 / (5308416 * P2 ** 3), d(9))),
    lin((1 / (128 * P2), psi), (19 / (24576 * P2 ** 2), d(4)), (11 / (5898240 * P2 ** 3), d(8)),
        (1 / (2038431744 * P2 ** 4), d(12))),
]

def truncate(c):
    # keep terms until the remaining tail on |u| <= 1/2 is negligible
    last = 0
    for i, v in enumerate(c):
        if abs(v) * mpf(0.5) ** i > mpf('1e-19'):
            last = i
    return c[: last + 1]

tables = [truncate(t) for t in tables]

def horner(c, u):
    s = mpf(0)
    for v in reversed(c):
        s = s * u + v
    return s

def z_rs(t):
    t = mpf(t)
    tau = t / (2 * pi)
    a = sqrt(tau)
    n = int(floor(a))
    p = a - n
    theta = im(loggamma(mpc(0.25, t / 2))) - t / 2 * log(pi)
    s = sum(cos(theta - t * log(k)) / sqrt(k) for k in range(1, n + 1))
    r = sum(horner(c, p - mpf(0.5)) * tau ** (-mpf(j) / 2) for j, c in enumerate(tables))
    return 2 * s + (-1) ** (n - 1) * tau ** (-mpf(1) / 4) * r

mp.dps = 30
for t in [14.134725, 20, 50, 100, 1000, 5000]:
    print(f"// check t={t}: rs-siegelz = {float(z_rs(t) - siegelz(t)):.3e}", file=sys.stderr)

out = ["// Generated by scripts/gen_rs_coeffs.py; do not edit.",
       "// Power series in u = p - 1/2 of the Riemann-Siegel corrections C_0..C_4.",
       ""]
for j, c in enumerate(tables):
    out.append(f"pub(super) const C{j}: [f64; {len(c)}] = [")
    for v in c:
        out.append(f"    {mp.nstr(v, 20, min_fixed=-1, max_fixed=-1)},")
    out.append("];")
    out.append("")
print("\n".join(out).rstrip())
