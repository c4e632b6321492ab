#!/usr/bin/env python3
"""Generate the classical modular polynomials used by the intersection code.

Psi_m(X, j) = prod over primitive [[a,b],[0,d]], ad = m, of (X - j((a tau + b)/d)).
Its coefficients are elementary symmetric functions of the conjugates; we get
the power sums as polynomials in j from their principal parts (the sum over b
of roots of unity is a Ramanujan-type integer), then apply Newton's identities.

Output records are "m i j c" with i >= j, for phi_m = prod_{n^2 | m} psi_{m/n^2}.
phi_m is symmetric unless m is a square, in which case the factor psi_1 = x - y
makes it antisymmetric; the loader mirrors with that sign.
"""
import argparse
import sys
from fractions import Fraction
from math import gcd


def sigma(n, k):
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def mobius(n):
    r, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            r = -r
        p += 1
    return -r if n > 1 else r


def mul(a, b, prec):
    out = [0] * prec
    for i, x in enumerate(a[:prec]):
        if x:
            for j, y in enumerate(b[: prec - i]):
                out[i + j] += x * y
    return out


def j_shifted(prec):
    """Coefficients of q*j(q) = E4^3 / prod(1-q^n)^24, prec terms."""
    e4 = [1] + [240 * sigma(n, 3) for n in range(1, prec)]
    num = mul(mul(e4, e4, prec), e4, prec)
    # prod(1-q^n) from the pentagonal number theorem, then its 24th power
    eta = [0] * prec
    k = 0
    while True:
        hit = False
        for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if g < prec:
                eta[g] = -1 if k % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    e2 = mul(eta, eta, prec)
    e8 = mul(mul(e2, e2, prec), mul(e2, e2, prec), prec)
    eta = mul(mul(e8, e8, prec), e8, prec)
    inv = [0] * prec
    inv[0] = 1
    for n in range(1, prec):
        inv[n] = -sum(eta[k] * inv[n - k] for k in range(1, n + 1))
    return mul(num, inv, prec)


def primitive_pairs(m):
    return [(a, m // a) for a in range(1, m + 1) if m % a == 0]


def psi_degree(m):
    return sum(m // a // gcd(a, m // a) * phi_euler(gcd(a, m // a)) for a in range(1, m + 1) if m % a == 0)


def phi_euler(n):
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def ramanujan(d, g, n):
    """sum over 0 <= b < d with gcd(b, g) = 1 of exp(2 pi i b n / d)."""
    s = 0
    for e in range(1, g + 1):
        if g % e == 0 and mobius(e):
            de = d // e
            if n % de == 0:
                s += mobius(e) * de
    return s


def primitive_psi(m, jsh):
    deg = psi_degree(m)
    top = m * deg
    # jpow[i] = coefficients of (q j)^i, truncated to top + 1 terms
    jpow = [[1] + [0] * top]
    for i in range(1, top + 1):
        jpow.append(mul(jpow[-1], jsh, top + 1))
    power_sums = []
    for k in range(1, deg + 1):
        # coefficients of j^k at q^n for -k <= n <= 0: jpow[k][n + k]
        coef = {}
        for a, d in primitive_pairs(m):
            g = gcd(a, d)
            for n in range(-k, 1):
                c = jpow[k][n + k]
                if c == 0:
                    continue
                r = ramanujan(d, g, n)
                if r == 0:
                    continue
                e = Fraction(a * n, d)
                assert e.denominator == 1
                coef[int(e)] = coef.get(int(e), 0) + c * r
        # express as a polynomial in j of degree m*k
        lead = m * k
        series = [coef.get(e, 0) for e in range(-lead, 1)]
        poly = [0] * (lead + 1)
        for i in range(lead, -1, -1):
            c = series[lead - i]
            if c == 0:
                continue
            poly[i] = c
            # subtract c * j^i, which starts at q^-i, i.e. series index lead - i
            for t in range(i + 1):
                series[lead - i + t] -= c * jpow[i][t]
        power_sums.append(poly)
    # Newton: k e_k = sum_{i=1}^k (-1)^(i-1) e_{k-i} p_i
    elem = [[Fraction(1)]]
    for k in range(1, deg + 1):
        acc = {}
        for i in range(1, k + 1):
            sgn = 1 if i % 2 == 1 else -1
            a, b = elem[k - i], power_sums[i - 1]
            for x, ca in enumerate(a):
                if ca:
                    for y, cb in enumerate(b):
                        if cb:
                            acc[x + y] = acc.get(x + y, 0) + sgn * ca * cb
        size = max(acc) + 1 if acc else 1
        ek = [Fraction(acc.get(t, 0), k) for t in range(size)]
        elem.append(ek)
    # Psi(X, Y) = sum_k (-1)^k e_k(Y) X^(deg - k)
    out = {}
    for k, ek in enumerate(elem):
        for y, c in enumerate(ek):
            if c:
                assert c.denominator == 1, (m, k, y)
                v = int(c) * (1 if k % 2 == 0 else -1)
                out[(deg - k, y)] = out.get((deg - k, y), 0) + v
    return {key: v for key, v in out.items() if v}


def pmul(a, b):
    out = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            key = (i1 + i2, j1 + j2)
            out[key] = out.get(key, 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-m", type=int, default=10)
    ap.add_argument("-o", "--output", default="-")
    args = ap.parse_args()
    psi = {1: {(1, 0): 1, (0, 1): -1}}
    need = args.max_m * max(psi_degree(m) for m in range(1, args.max_m + 1)) + 2
    jsh = j_shifted(need + 1)
    for m in range(2, args.max_m + 1):
        psi[m] = primitive_psi(m, jsh)
        for (i, j), c in psi[m].items():
            assert psi[m].get((j, i)) == c, "psi not symmetric"
    out = open(args.output, "w") if args.output != "-" else sys.stdout
    out.write("# phi_m = prod_{n^2|m} psi_{m/n^2}, records: m i j coefficient (i >= j)\n")
    out.write("# mirror (j,i) has the same coefficient, negated when m is a perfect square\n")
    for m in range(1, args.max_m + 1):
        poly = {(0, 0): 1}
        n = 1
        while n * n <= m:
            if m % (n * n) == 0:
                poly = pmul(poly, psi[m // (n * n)])
            n += 1
        for (i, j) in sorted(poly, reverse=True):
            if i >= j:
                out.write(f"{m} {i} {j} {poly[(i, j)]}\n")


if __name__ == "__main__":
    main()
