"""Brute-force reference implementations used to freeze expected values.

Everything here works on plain frozensets and python functions and shares
no code with the package under test.
"""
from __future__ import annotations

from itertools import chain, combinations, product


def powerset(xs):
    xs = list(xs)
    return [frozenset(c) for c in chain.from_iterable(combinations(xs, r) for r in range(len(xs) + 1))]


class BruteRL:
    def __init__(self, terms, stacks, pole, push):
        self.terms = list(terms)
        self.stacks = list(stacks)
        self.pole = pole  # callable (t, pi) -> bool
        self.push = push  # callable (t, pi) -> pi

    def perp_t(self, L):
        return frozenset(p for p in self.stacks if all(self.pole(t, p) for t in L))

    def perp_s(self, P):
        return frozenset(t for t in self.terms if all(self.pole(t, p) for p in P))

    def bar(self, P):
        return self.perp_t(self.perp_s(P))

    def hat(self, P):
        out = set()
        for p in P:
            out |= self.bar({p})
        return frozenset(out)

    def tilde(self, P):
        return frozenset(p for p in P if self.bar({p}) <= P)

    def push_set(self, L, P):
        return frozenset(self.push(t, p) for t in L for p in P)

    def conduct(self, P, L):
        return frozenset(p for p in self.stacks if all(self.push(t, p) in P for t in L))

    def conduct_bullet(self, P, L):
        return frozenset(p for p in self.stacks if self.push_set(L, self.bar({p})) <= P)


def vec_f2():
    return [tuple(v) for v in product(range(2), repeat=3)]


def dot(v, w, p=2):
    return sum(a * b for a, b in zip(v, w)) % p


def cross(v, w, p=2):
    return ((v[1] * w[2] - v[2] * w[1]) % p, (v[2] * w[0] - v[0] * w[2]) % p, (v[0] * w[1] - v[1] * w[0]) % p)


def scale(c, v, p=2):
    return tuple((c * a) % p for a in v)


def sub(v, w, p=2):
    return tuple((a - b) % p for a, b in zip(v, w))


def f2_rl(w0=None):
    vs = vec_f2()
    if w0 is None:
        push = lambda v, w: scale(dot(v, w), cross(v, w))
    else:
        push = lambda v, w: scale(dot(v, sub(w, w0)), cross(v, w))
    return BruteRL(vs, vs, lambda t, p: dot(t, p) == 0, push)


def vec_f3():
    return [tuple(v) for v in product(range(3), repeat=3)]


def f3_rl(w0=None):
    vs = vec_f3()
    w0 = (0, 0, 0) if w0 is None else w0
    return BruteRL(vs, vs, lambda t, p: dot(t, p, 3) == 0,
                   lambda v, w: scale(dot(v, sub(w, w0, 3), 3), cross(v, w, 3), 3))


def subspaces(vs, p):
    """Every linear span of at most three vectors, as frozensets."""
    out = set()
    for a in vs:
        for b in vs:
            for c in vs:
                out.add(frozenset(tuple((i * x + j * y + k * z) % p for x, y, z in zip(a, b, c))
                                  for i in range(p) for j in range(p) for k in range(p)))
    return sorted(out, key=lambda S: (len(S), sorted(S)))


def label(v):
    return "".join(str(a) for a in v)


def perp_adjunction_witnesses(rl):
    """(P, L, R) with P, R bar-closed, R subset of bar(P*L), bar(L~>R) not inside P."""
    closed = [P for P in powerset(rl.stacks) if rl.bar(P) == P]
    out = []
    for P in closed:
        for L in powerset(rl.terms):
            cp = rl.bar(rl.conduct(P, L))
            for R in closed:
                if R <= cp and not rl.bar(rl.push_set(L, R)) <= P:
                    out.append((P, L, R))
    return out


class BruteAKS(BruteRL):
    """Structure over plain tables: ``pole`` a set of pairs, ``push`` and ``app`` nested lists."""

    def __init__(self, n_terms, n_stacks, pole_pairs, push, app, qp, K, S):
        pole_pairs = frozenset(pole_pairs)
        super().__init__(range(n_terms), range(n_stacks), lambda t, p: (t, p) in pole_pairs,
                         lambda t, p: push[t][p])
        self.pole_pairs = pole_pairs
        self.app_t = app
        self.K, self.S = K, S
        qp = set(qp) | {K, S}
        while True:
            more = {app[a][b] for a in qp for b in qp} - qp
            if not more:
                break
            qp |= more
        self.qp = frozenset(qp)

    def ap(self, *xs):
        out = xs[0]
        for x in xs[1:]:
            out = self.app_t[out][x]
        return out

    def closed_family(self, kind):
        subsets = powerset(self.stacks)
        if kind == "perp":
            return sorted({self.bar(P) for P in subsets}, key=mask)
        return sorted({P for P in subsets if self.hat(P) == P}, key=mask)

    def imp(self, P, Q, variant):
        out = self.push_set(self.perp_s(P), Q)
        return {"plain": out, "bullet": self.hat(out), "perp": self.bar(out)}[variant]

    def conduct_variant(self, P, L, variant):
        if variant == "bullet":
            return self.conduct_bullet(P, L)
        out = self.conduct(P, L)
        return self.bar(out) if variant == "perp" else out

    def appl(self, P, Q, variant):
        return self.conduct_variant(P, self.perp_s(Q), variant)

    def app_image(self, L, M):
        return frozenset(self.app_t[t][u] for t in L for u in M)

    def clubsuit(self, P, L):
        return self.perp_t(self.app_image(self.perp_s(P), L))

    def derived(self):
        K, S, ap = self.K, self.S, self.ap
        I = ap(S, K, K)
        E = ap(S, ap(K, I))
        B = ap(S, ap(K, S), K)
        return I, E, B, ap(E, E)

    def eta(self, P):
        EE = self.derived()[3]
        return self.conduct_bullet(self.perp_t({EE}), self.perp_s(P))

    def axiom_violations(self):
        pole, push, ap = self.pole, self.push, self.ap
        bad = []
        for t in self.terms:
            for s in self.terms:
                for p in self.stacks:
                    if pole(t, push(s, p)) and not pole(ap(t, s), p):
                        bad.append(("a", t, s, p))
                    if pole(t, p) and not pole(self.K, push(t, push(s, p))):
                        bad.append(("b", t, s, p))
                    for u in self.terms:
                        if pole(ap(ap(t, u), ap(s, u)), p) and not pole(self.S, push(t, push(s, push(u, p)))):
                            bad.append(("c", t, s, u, p))
        return bad


def mask(S):
    return sum(1 << int(i) for i in S)


def brute_saturate_pairs(n_terms, n_stacks, pole_pairs, push, app, K, S):
    """Least pole containing the given pairs and closed under the three rules, by naive rounds."""
    pole = set(pole_pairs)
    while True:
        new = set()
        for t in range(n_terms):
            for s in range(n_terms):
                for p in range(n_stacks):
                    if (t, push[s][p]) in pole:
                        new.add((app[t][s], p))
                    if (t, p) in pole:
                        new.add((K, push[t][push[s][p]]))
                    for u in range(n_terms):
                        if (app[app[t][u]][app[s][u]], p) in pole:
                            new.add((S, push[t][push[s][push[u][p]]]))
        if new <= pole:
            return frozenset(pole)
        pole |= new


def brute_family_algebra(k, kind, variant):
    """Tables of the algebra on a closed family under reverse inclusion, by direct set computation."""
    fam = k.closed_family(kind)
    index = {P: i for i, P in enumerate(fam)}
    n = len(fam)
    leq = [[fam[j] <= fam[i] for j in range(n)] for i in range(n)]
    app = [[index[k.appl(fam[i], fam[j], variant)] for j in range(n)] for i in range(n)]
    imp = [[index[k.imp(fam[i], fam[j], variant)] for j in range(n)] for i in range(n)]
    phi = [i for i, P in enumerate(fam) if any(all(k.pole(t, p) for p in P) for t in k.qp)]
    return fam, leq, app, imp, phi


def brute_inf(leq, members):
    """Infimum in a finite poset given as a nested list: the greatest common lower bound."""
    n = len(leq)
    lower = [z for z in range(n) if all(leq[z][m] for m in members)]
    top = [g for g in lower if all(leq[z][g] for z in lower)]
    assert len(top) == 1, "not a lattice"
    return top[0]


def brute_sharp(leq, imp, x, y):
    """inf of the comprehension {c : x <= y -> c}."""
    return brute_inf(leq, [c for c in range(len(leq)) if leq[x][imp[y][c]]])


def brute_entails_oca(leq, app, phi_set, xs, ys):
    """Realizers r in the filter with r x_i <= y_i at every index."""
    return [r for r in sorted(phi_set) if all(leq[app[r][x]][y] for x, y in zip(xs, ys))]


if __name__ == "__main__":
    rl = f2_rl()
    e1, e2, e3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    print("L={e1} perp:", sorted(label(v) for v in rl.perp_t({e1})))
    print("P={e1} perp:", sorted(label(v) for v in rl.perp_s({e1})))
    print("bar{e1}:", sorted(label(v) for v in rl.bar({e1})))
    print("hat{e1,e2}:", sorted(label(v) for v in rl.hat({e1, e2})))
    print("bar{0,e1,e2}:", sorted(label(v) for v in rl.bar({(0, 0, 0), e1, e2})))
    print("push e1 e2:", rl.push(e1, e2))
    P = frozenset({(0, 0, 0), e1}); L = frozenset({(0, 0, 0), e2})
    print("P*L:", sorted(label(v) for v in rl.conduct(P, L)))
    print("P*.L:", sorted(label(v) for v in rl.conduct_bullet(P, L)))
    print("bar P*L:", sorted(label(v) for v in rl.bar(rl.conduct(P, L))))
    w = perp_adjunction_witnesses(rl)
    print("standard push perp-direction-2 witnesses:", len(w))
    for w0 in vec_f2():
        if w0[1] == 0:
            continue
        srl = f2_rl(w0)
        ws = perp_adjunction_witnesses(srl)
        diff = [(P, L) for P in powerset(srl.stacks) if srl.bar(P) == P for L in powerset(srl.terms)
                if srl.perp_t(srl.perp_s(L)) == L and srl.conduct(P, L) != srl.conduct_bullet(P, L)]
        print("shift", label(w0), "witnesses", len(ws), "first", [sorted(map(label, s)) for s in ws[0]] if ws else None,
              "bullet!=plain (closed P,L):", len(diff))
