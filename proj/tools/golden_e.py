"""Naive term-by-term evaluation of E^{m,n} for a rational-kernel JSON file.

Writes the value (40 significant digits) next to the input as <name>.golden.
Sums every mu with |mu| <= N + 2; the extra shells must vanish exactly.
"""
import itertools
import json
import pathlib
import sys

import mpmath as mp

mp.mp.dps = 50


def c(pair):
    return mp.mpc(pair[0], pair[1])


def main(path):
    p = json.loads(pathlib.Path(path).read_text())
    k = p["kernel"]
    assert k["variant"] == "rational"
    ga, gb, gc = (c(k["gauge"][key]) for key in "abc")
    d = c(k["delta"])

    def br(x):
        return mp.exp(ga * x * x + gb) * gc * x

    def fac(x, n):
        out = mp.mpc(1)
        for j in range(n):
            out *= br(x + j * d)
        return out

    a = [c(z) for z in p["a"]]
    x = [c(z) for z in p["x"]]
    s = c(p["s"])
    u = [c(z) for z in p["u"]]
    v = [c(z) for z in p["v"]]
    N = p["termination"]["N"]
    m = len(a)

    def vandermonde(y):
        out = mp.mpc(1)
        for i in range(m):
            for j in range(i + 1, m):
                out *= br(y[i] - y[j])
        return out

    total = mp.mpc(0)
    tail = mp.mpc(0)
    for mu in itertools.product(range(N + 3), repeat=m):
        w = sum(mu)
        if w > N + 2:
            continue
        t = vandermonde([x[i] + mu[i] * d for i in range(m)]) / vandermonde(x)
        for i in range(m):
            t *= br(x[i] + s + (w + mu[i]) * d) / br(x[i] + s)
        for j in range(m):
            t *= fac(s + x[j], w) / fac(d + s + x[j] - a[j], w)
            for i in range(m):
                t *= fac(x[i] - x[j] + a[j], mu[i]) / fac(x[i] - x[j] + d, mu[i])
        for kk in range(len(u)):
            t *= fac(v[kk], w) / fac(d + s - u[kk], w)
            for i in range(m):
                t *= fac(x[i] + u[kk], mu[i]) / fac(x[i] + d + s - v[kk], mu[i])
        if w > N:
            tail += t
        else:
            total += t
    assert tail == 0, tail
    out = pathlib.Path(path).with_suffix(".golden")
    out.write_text(f"{mp.nstr(total.real, 40)} {mp.nstr(total.imag, 40)}\n")
    print(out.read_text(), end="")


if __name__ == "__main__":
    main(sys.argv[1])
