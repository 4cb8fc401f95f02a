#!/usr/bin/env python3
"""Regenerates looptab.json: pole coefficients (divided by i) of the one-loop
integrals, componentwise, at fixed rational external momenta."""
import itertools
import json
import pathlib

import sympy as sp

ETA = sp.diag(-1, 1, 1, 1)
K = {
    2: [sp.Rational(1), sp.Rational(2), sp.Rational(-1), sp.Rational(3)],
    3: [sp.Rational(2), sp.Rational(-1), sp.Rational(1, 2), sp.Rational(0)],
    4: [sp.Rational(-3), sp.Rational(1), sp.Rational(2), sp.Rational(1, 3)],
}


def mdot(a, b):
    return sum(ETA[i, i] * a[i] * b[i] for i in range(4))


def matchings(items):
    if not items:
        yield []
        return
    a = items[0]
    for j in range(1, len(items)):
        rest = items[1:j] + items[j + 1:]
        for m in matchings(rest):
            yield [(a, items[j])] + m


def simplex_integral(expr, xs):
    # x_1 = 1 - x_2 - ... - x_n, then nested integration over the remaining ones
    n = len(xs)
    expr = sp.expand(sp.sympify(expr).subs(xs[0], 1 - sum(xs[1:])))
    bounds = []
    for j in range(1, n):
        bounds.append((xs[j], 0, 1 - sum(xs[j + 1:])))
    for var, lo, hi in bounds:
        expr = sp.integrate(expr, (var, lo, hi))
    return sp.nsimplify(sp.expand(expr))


def pole(rank, n, comps):
    xs = sp.symbols(f"x1:{n + 1}")
    q = [[sp.Integer(0)] * 4]
    for j in range(2, n + 1):
        q.append([q[-1][c] + K[j][c] for c in range(4)])
    s = [sum(xs[j] * q[j][c] for j in range(n)) for c in range(4)]
    delta = sum(xs[j] * mdot(q[j], q[j]) for j in range(n)) - mdot(s, s)
    total = 0
    for size in range(0, rank + 1, 2):
        a = size // 2
        m = a + 2 - n
        if m < 0:
            continue
        for loop in itertools.combinations(range(rank), size):
            ext = [b for b in range(rank) if b not in loop]
            tensor = 0
            for pm in matchings(list(loop)):
                v = 1
                for x, y in pm:
                    v *= ETA[comps[x], comps[y]]
                tensor += v
            if tensor == 0:
                continue
            norm = sp.prod([4 + 2 * j for j in range(a)])
            term = sp.factorial(a + 1) * (-1) ** m / sp.factorial(m) * delta ** m * tensor / norm
            for b in ext:
                term *= -s[comps[b]]
            total += term
    return simplex_integral(total, xs)


def main():
    published = {(0, 1), (0, 2), (1, 2), (2, 2), (2, 3), (3, 3), (4, 4)}
    out = {"momenta": {str(j): [str(v) for v in K[j]] for j in K}, "cases": []}
    for rank in range(5):
        for n in range(1, 5):
            if (rank, n) in published:
                continue
            comps = {}
            for idx in itertools.product(range(4), repeat=rank):
                v = pole(rank, n, idx)
                if v != 0:
                    comps[",".join(map(str, idx))] = str(v)
            out["cases"].append({"rank": rank, "denoms": n, "components_over_i": comps})
    path = pathlib.Path(__file__).with_name("looptab.json")
    path.write_text(json.dumps(out, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
