#!/usr/bin/env python3
"""Independent reference computations for values frozen into the C++ tests.

Plain Python, no shared code with the library: formulas are lists of signed
1-based literals, assignments are tuples of +1/-1. Run it to print every
reference value; the unit tests quote the printed numbers.
"""
import itertools
import math
from fractions import Fraction

FIVE_CLAUSE = [[1, -2, 3], [3, 4, 5], [1, 4, 5], [1, -2, -3], [1, -2, -5]]


def sat_count(f, w):
    return sum(any((w[abs(l) - 1] > 0) == (l > 0) for l in c) for c in f)


def all_assignments(v):
    # lexicographic with false < true, variable 0 most significant
    for bits in itertools.product((-1, 1), repeat=v):
        yield bits


def brute_sat(f, v):
    for w in all_assignments(v):
        if sat_count(f, w) == len(f):
            return w
    return None


def brute_maxsat(f, v):
    best, arg = -1, None
    for w in all_assignments(v):
        c = sat_count(f, w)
        if c > best:
            best, arg = c, w
    return best, arg


def taylor(p, x):
    return sum(x ** i / math.factorial(i) for i in range(p + 1))


class Params:
    def __init__(self, v, h, p=2, q=4, eps=0.25, b=6):
        self.v, self.h, self.p, self.q, self.eps, self.b = v, h, p, q, eps, b

    def g(self, i, x):
        return taylor(self.p, -x / (self.v ** (self.q - 1) * (3 - i / self.h)))


def threshold(eps, m):
    return math.floor((1 - eps) * m + 1e-9)


class Mdp:
    def __init__(self, f, v, params, wstar, start=None):
        self.f, self.v, self.P, self.wstar = f, v, params, wstar
        self.T = threshold(params.eps, len(f))
        self.start = tuple(start) if start else tuple([-1] * v)

    def stage(self, w, free):
        for j, c in enumerate(self.f):
            vs = sorted(abs(l) - 1 for l in c)
            if all(x in free for x in vs) and not any((w[abs(l) - 1] > 0) == (l > 0) for l in c):
                return ("One", j)
        return ("Two", min(free))

    def initial(self):
        w = self.start
        if sat_count(self.f, w) > self.T:
            return (1, ("Term", "GapSatisfied"), w, w, frozenset(range(self.v)), ())
        free = frozenset(range(self.v))
        return (1, self.stage(w, free), w, w, free, ())

    def step(self, s, a):
        n, st, w, wr, free, rd = s
        kind, cur = st
        assert kind in ("One", "Two")
        w = list(w)
        if kind == "One":
            x = sorted(abs(l) - 1 for l in self.f[cur])[a]
            w[x] = -w[x]
        else:
            x = cur
            if a == 1:
                w[x] = -w[x]
        w = tuple(w)
        free = free - {x}
        if sat_count(self.f, w) > self.T:
            return (n, ("Term", "GapSatisfied"), w, wr, free, rd)
        if not free:
            if n == self.P.h:
                return (n, ("Term", "LastLevel"), w, wr, free, rd)
            d = sum(a != b for a, b in zip(wr, w))
            full = frozenset(range(self.v))
            return (n + 1, self.stage(w, full), w, w, full, rd + (d,))
        return (n, self.stage(w, free), w, wr, free, rd)

    def reward(self, s):
        n, st, w, wr, free, rd = s
        if st[0] != "Term" or self.wstar is None:
            return 0.0
        P = self.P
        within = sum(a != b for a, b in zip(wr, w))
        fd = sum(w[i] != self.wstar[i] for i in free)
        ud = sum(w[i] != self.wstar[i] for i in range(self.v) if i not in free)
        r = 1.0
        for i, d in enumerate(rd):
            r *= P.g(i + 1, d)
        return r * P.g(n, within + fd) * P.g(n + 1, ud)

    def value(self, s, memo):
        if s[1][0] == "Term":
            return 0.0
        if s in memo:
            return memo[s]
        best = max(self.reward(t) + self.value(t, memo) for t in (self.step(s, a) for a in range(3)))
        memo[s] = best
        return best

    def reachable(self):
        s0 = self.initial()
        seen, order = {s0}, [s0]
        k = 0
        while k < len(order):
            s = order[k]
            k += 1
            if s[1][0] == "Term":
                continue
            for a in range(3):
                t = self.step(s, a)
                if t not in seen:
                    seen.add(t)
                    order.append(t)
        return order


def lattice_count(d, eps, H):
    r = eps / (2 * H * math.sqrt(d))
    s = r / math.sqrt(d)
    top = int(math.floor(1 / s))
    count = 0
    def rec(i, used):
        nonlocal count
        if i == d:
            count += 1
            return
        for k in range(-top, top + 1):
            nu = used + (k * s) ** 2
            if nu <= 1 + 1e-12:
                rec(i + 1, nu)
    rec(0, 0.0)
    return count


def fmt(w):
    return "".join("1" if x > 0 else "0" for x in w)


def main():
    print("== cnf")
    print("five sat_count FTFFF =", sat_count(FIVE_CLAUSE, (-1, 1, -1, -1, -1)))
    print("five sat_count FTTTT =", sat_count(FIVE_CLAUSE, (-1, 1, 1, 1, 1)))
    print("five brute_sat =", fmt(brute_sat(FIVE_CLAUSE, 5)))
    print("five maxsat =", brute_maxsat(FIVE_CLAUSE, 5)[0])
    contra = [[1, 1, 1], [-1, -1, -1]]
    print("x & ~x maxsat =", brute_maxsat(contra, 1)[0])

    print("== reward")
    print("taylor(2,-0.5) =", taylor(2, -0.5))
    print("g p2 q2 v5 h5 i1 x7 =", repr(Params(5, 5, p=2, q=2).g(1, 7)))
    P = Params(10, 62)
    print("g v10 h62 i1 x3 =", repr(P.g(1, 3)), " i63 x20 =", repr(P.g(63, 20)))

    print("== mdp five-clause instance (q=2, h=2, eps=0.25, b=6)")
    P = Params(5, 2, p=2, q=2, eps=0.25, b=6)
    wstar = brute_sat(FIVE_CLAUSE, 5)
    M = Mdp(FIVE_CLAUSE, 5, P, wstar, start=(-1, 1, -1, -1, -1))
    s = M.initial()
    print("T =", M.T, "initial stage", s[1])
    path = []
    for a in (2, 2, 0, 0, 1):  # c, then e from clause (c,d,e), keep a, keep b, flip d
        s = M.step(s, a)
        path.append((fmt(s[2]), s[1]))
    print("path c,e,keep,keep,flip:", path)
    s = M.initial()
    s = M.step(s, 2)
    print("after c: stage", s[1], "w", fmt(s[2]))
    s = M.initial()
    for a in (2, 2, 0, 1):
        s = M.step(s, a)
    print("c,e,keep a,flip b:", fmt(s[2]), s[1])
    states = M.reachable()
    print("reachable states =", len(states))
    memo = {}
    print("V*(initial) =", repr(M.value(M.initial(), memo)))
    print("g_1(dist(start,w*)) =", repr(P.g(1, sum(a != b for a, b in zip(M.start, wstar)))))
    M0 = Mdp(FIVE_CLAUSE, 5, P, wstar)
    print("default-start reachable =", len(M0.reachable()), "V* =", repr(M0.value(M0.initial(), {})))

    print("== gapsat")
    # (x)^3 & (~x)^3 as padded 3-clauses over x, y, z with y, z constant-free padding
    print("lattice count d2 eps0.1 H3 =", lattice_count(2, 0.1, 3))
    print("lattice count d2 eps0.1 H4 =", lattice_count(2, 0.1, 4))
    print("lattice count d2 eps0.5 H2 =", lattice_count(2, 0.5, 2))
    print("feature dims v5 p2 =", sum(math.comb(5, i) for i in range(5)), " v7 =", sum(math.comb(7, i) for i in range(5)))


if __name__ == "__main__":
    main()
