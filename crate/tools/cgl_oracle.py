#!/usr/bin/env python3
"""Step-by-step CGL walk, written from scratch for freezing test vectors.

Everything is brute force over F_{p^2} = F_p[u]/(u^2 - c): square roots and
cubic roots by table lookup, point counts by a full sweep, and the canonical
model as the first (a, b) in canonical order with j(a, b) = j and (p+1)^2
points. Only the 2-isogeny formula is shared knowledge:

    kernel (x0, 0), t = 3 x0^2 + a:  a' = a - 5t,  b' = b - 7 x0 t,
    x -> x + t / (x - x0).

Usage: cgl_oracle.py P OUT.json
"""

import json
import random
import sys


def nonresidue(p):
    if p % 4 == 3:
        return p - 1
    return next(c for c in range(2, p) if pow(c, (p - 1) // 2, p) == p - 1)


class F:
    """Elements are pairs (c0, c1) meaning c0 + c1 u."""

    def __init__(self, p):
        self.p = p
        self.c = nonresidue(p)
        self.q = p * p
        self.elems = [(i % p, i // p) for i in range(self.q)]  # canonical order
        self.sq = {}
        for x in self.elems:
            self.sq.setdefault(self.mul(x, x), []).append(x)
        for v in self.sq.values():
            v.sort(key=self.key)

    def key(self, x):
        return (x[1], x[0])

    def add(self, x, y):
        return ((x[0] + y[0]) % self.p, (x[1] + y[1]) % self.p)

    def sub(self, x, y):
        return ((x[0] - y[0]) % self.p, (x[1] - y[1]) % self.p)

    def mul(self, x, y):
        p = self.p
        return ((x[0] * y[0] + self.c * x[1] * y[1]) % p, (x[0] * y[1] + x[1] * y[0]) % p)

    def k(self, n):
        return (n % self.p, 0)

    def inv(self, x):
        n = (x[0] * x[0] - self.c * x[1] * x[1]) % self.p
        ni = pow(n, self.p - 2, self.p)
        return (x[0] * ni % self.p, -x[1] * ni % self.p)

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def chi(self, x):
        if x == (0, 0):
            return 0
        return 1 if x in self.sq else -1

    def fmt(self, x):
        return f"{x[1]}*u+{x[0]}" if x[1] else str(x[0])


def rhs(f, a, b, x):
    return f.add(f.add(f.mul(f.mul(x, x), x), f.mul(a, x)), b)


def count(f, a, b):
    return f.q + 1 + sum(f.chi(rhs(f, a, b, x)) for x in f.elems)


def j_of(f, a, b):
    a3 = f.mul(f.mul(a, a), a)
    num = f.mul(f.k(1728 * 4), a3)
    den = f.add(f.mul(f.k(4), a3), f.mul(f.k(27), f.mul(b, b)))
    return f.div(num, den)


class Oracle:
    def __init__(self, p):
        self.f = F(p)
        self.target = (p + 1) ** 2
        self.models = {}

    def canonical(self, j):
        if j in self.models:
            return self.models[j]
        f = self.f
        zero = (0, 0)
        found = None
        if j == zero:
            for b in f.elems[1:]:
                if count(f, zero, b) == self.target:
                    found = (zero, b)
                    break
        else:
            for a in f.elems[1:]:
                if j == f.k(1728):
                    bs = [zero]
                else:
                    a3 = f.mul(f.mul(a, a), a)
                    b2 = f.div(f.mul(f.mul(f.k(4), a3), f.sub(f.k(1728), j)), f.mul(f.k(27), j))
                    bs = f.sq.get(b2, [])
                hit = [b for b in bs if count(f, a, b) == self.target]
                if hit:
                    found = (a, hit[0])
                    break
        assert found is not None and j_of(f, *found) == j
        self.models[j] = found
        return found

    def two_torsion(self, a, b):
        xs = [x for x in self.f.elems if rhs(self.f, a, b, x) == (0, 0)]
        assert len(xs) == 3
        return xs

    def init(self, j0):
        a, b = self.canonical(j0)
        return (a, b, self.two_torsion(a, b)[0])

    def step(self, state, bit):
        f = self.f
        a, b, marked = state
        others = [x for x in self.two_torsion(a, b) if x != marked]
        x0 = others[bit]
        t = f.add(f.mul(f.k(3), f.mul(x0, x0)), a)
        a1 = f.sub(a, f.mul(f.k(5), t))
        b1 = f.sub(b, f.mul(f.k(7), f.mul(x0, t)))
        xm = f.add(marked, f.div(t, f.sub(marked, x0)))
        ac, bc = self.canonical(j_of(f, a1, b1))
        us = [u for u in f.elems[1:]
              if f.mul(f.mul(u, u), a1) == ac and f.mul(f.mul(f.mul(u, u), u), b1) == bc]
        return (ac, bc, f.mul(us[0], xm))


def seed_j(p):
    if p % 3 == 2:
        return (0, 0)
    if p % 4 == 3:
        return (1728 % p, 0)
    raise SystemExit("oracle only handles seeds j = 0 and j = 1728")


def main():
    p, out = int(sys.argv[1]), sys.argv[2]
    o = Oracle(p)
    rng = random.Random(p)
    msgs = ["", "0", "1", "01", "10", "11", "0110", "1111", "11111111",
            "10100001", "0" * 16, "1" * 16, "01" * 8, "0011" * 4]
    msgs += ["".join(rng.choice("01") for _ in range(n)) for n in (5, 9, 12, 13, 15, 16, 16)]
    vectors = []
    for m in msgs:
        s = o.init(seed_j(p))
        path = [o.f.fmt(j_of(o.f, s[0], s[1]))]
        for ch in m:
            s = o.step(s, int(ch))
            path.append(o.f.fmt(j_of(o.f, s[0], s[1])))
        vectors.append({"bits": m, "path": path})
    with open(out, "w") as fh:
        json.dump({"p": p, "vectors": vectors}, fh, indent=1)
        fh.write("\n")


if __name__ == "__main__":
    main()
