"""Abstract Krivine structures: axioms, saturation, combinators and the set-level theorems.

Stacks are built right to left: ``t . s . p`` means ``push(t, push(s, p))``.
Application is a total table on terms; the quasi-proofs form an
application-closed set of terms containing ``K`` and ``S``.

The three Horn axioms checked by :func:`validate_aks` and enforced by
:func:`saturate` are

* (a) ``t`` orthogonal to ``s . p``  implies  ``ts`` orthogonal to ``p``;
* (b) ``t`` orthogonal to ``p``  implies  ``K`` orthogonal to ``t . s . p`` for every ``s``;
* (c) ``tu(su)`` orthogonal to ``p``  implies  ``S`` orthogonal to ``t . s . u . p``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._maskops import DEFAULT_BUDGET, DEFAULT_SAMPLES, MaskOps, all_masks, quantify, subset_of
from .errors import CarrierMismatchError
from .polarity import (RealizabilityLattice, Subset, _expect, enumerate_closed, enumerate_closed_terms,
                       iter_bits, ClosureKind)
from .reports import CheckReport


def app_closure(app: np.ndarray, generators: int) -> int:
    """Least application-closed term set containing ``generators`` (a mask)."""
    members = set(iter_bits(generators))
    todo = list(members)
    while todo:
        a = todo.pop()
        for b in list(members):
            for c in (int(app[a, b]), int(app[b, a])):
                if c not in members:
                    members.add(c)
                    todo.append(c)
    out = 0
    for m in members:
        out |= 1 << m
    return out


class AbstractKrivineStructure:
    """A realizability lattice with application, quasi-proofs and the combinators ``K`` and ``S``.

    ``qp`` is given as a mask of generators and stored closed under
    application together with ``K`` and ``S``. The axioms are not enforced
    here; see :func:`validate_aks` and :func:`saturate`.
    """

    def __init__(self, rl: RealizabilityLattice, app, qp: int, K: int, S: int):
        app = np.asarray(app, dtype=np.int64)
        n = rl.terms.size
        if app.shape != (n, n):
            raise ValueError(f"app has shape {app.shape}, expected {(n, n)}")
        if app.min() < 0 or app.max() >= n:
            raise ValueError("application table has values outside the term carrier")
        for name, x in (("K", K), ("S", S)):
            if not 0 <= x < n:
                raise CarrierMismatchError(f"{name}={x} is not a term (carrier size {n})")
        if qp < 0 or qp >> n:
            raise CarrierMismatchError(f"quasi-proof mask {qp:#x} has bits outside the terms")
        self.rl = rl
        self.app = app.copy()
        self.app.setflags(write=False)
        self.K = int(K)
        self.S = int(S)
        self.qp = app_closure(self.app, int(qp) | 1 << self.K | 1 << self.S)

    @property
    def terms(self):
        return self.rl.terms

    @property
    def stacks(self):
        return self.rl.stacks

    @cached_property
    def ops(self) -> MaskOps:
        return MaskOps(self.rl, self.app)

    def ap(self, *xs: int) -> int:
        """Left-associated application ``x0 x1 ... xn``."""
        out = xs[0]
        for x in xs[1:]:
            out = int(self.app[out, x])
        return out

    def stack(self, *items: int) -> int:
        """``t0 . t1 . ... . p`` with the last item a stack."""
        out = items[-1]
        for t in reversed(items[:-1]):
            out = int(self.rl.push[t, out])
        return out

    def with_pole(self, pole) -> "AbstractKrivineStructure":
        rl = RealizabilityLattice(self.rl.terms, self.rl.stacks, pole, self.rl.push)
        return AbstractKrivineStructure(rl, self.app, self.qp, self.K, self.S)

    def __eq__(self, other):
        if not isinstance(other, AbstractKrivineStructure):
            return NotImplemented
        return (self.rl == other.rl and np.array_equal(self.app, other.app) and self.qp == other.qp
                and self.K == other.K and self.S == other.S)

    __hash__ = None

    def __repr__(self):
        return (f"AbstractKrivineStructure(terms={self.terms.size}, stacks={self.stacks.size}, "
                f"pole_pairs={int(self.rl.pole.sum())}, qp={bin(self.qp).count('1')}, K={self.K}, S={self.S})")


# -- axioms and saturation ------------------------------------------------------

def _axiom_arrays(k: AbstractKrivineStructure):
    """Yield ``(axiom, premise, conclusion, index_names, shape)`` blocks of boolean arrays."""
    pole, push, app = k.rl.pole, k.rl.push, k.app
    nt, ns = pole.shape
    T = np.arange(nt)
    # (a) over (t, s, p)
    prem = pole[T[:, None, None], push[None, :, :]]
    concl = pole[app[:, :, None], np.arange(ns)[None, None, :]]
    yield "a", prem, concl, ("t", "s", "pi")
    # (b) over (t, s, p)
    prem = np.broadcast_to(pole[:, None, :], (nt, nt, ns))
    concl = pole[k.K, push[T[:, None, None], push[None, :, :]]]
    yield "b", prem, concl, ("t", "s", "pi")
    # (c) over (t, s, u, p), one t at a time to bound memory
    inner = push[T[:, None, None], push[None, :, :]]  # [s, u, p] -> s . u . p
    for t in range(nt):
        lhs = app[app[t][None, :], app]  # [s, u] -> t u (s u)
        prem = pole[lhs]  # [s, u, p]
        concl = pole[k.S, push[t][inner]]
        yield "c", prem[None], concl[None], ("t", "s", "u", "pi"), t


def validate_aks(k: AbstractKrivineStructure) -> CheckReport:
    """Check the three Horn axioms on every instance; each violation is a witness."""
    rep = CheckReport("aks.axioms")
    counts = {"a": 0, "b": 0, "c": 0}
    for block in _axiom_arrays(k):
        axiom, prem, concl, names = block[:4]
        offset = block[4] if len(block) > 4 else 0
        ok = ~prem | concl
        before = rep.violations

        def describe(i, ok=ok, names=names, axiom=axiom, offset=offset):
            idx = np.unravel_index(i, ok.shape)
            w = {"axiom": axiom}
            for n, v in zip(names, idx):
                w[n] = int(v)
            if axiom == "c":
                w["t"] = offset
            return w

        rep.tally(ok, describe)
        counts[axiom] += rep.violations - before
    rep.notes["violations_by_axiom"] = counts
    return rep


def saturate(k: AbstractKrivineStructure) -> AbstractKrivineStructure:
    """Least pole containing the given one and closed under the three axioms.

    Forward chaining with a worklist: each newly added pair fires every rule
    in which it can be the premise.
    """
    pole = np.array(k.rl.pole, dtype=bool)
    push = k.rl.push
    app = k.app
    nt, ns = pole.shape
    # premise of (a): t orthogonal to rho with rho = s . p'
    inv_push = [[] for _ in range(ns)]
    for s in range(nt):
        for p in range(ns):
            inv_push[int(push[s, p])].append((s, p))
    # premise of (c): term x equal to t u (s u)
    inv_c = [[] for _ in range(nt)]
    for t in range(nt):
        for s in range(nt):
            for u in range(nt):
                inv_c[int(app[app[t, u], app[s, u]])].append((t, s, u))
    queue = deque(zip(*np.nonzero(pole)))

    def add(t, p):
        if not pole[t, p]:
            pole[t, p] = True
            queue.append((t, p))

    while queue:
        t, p = queue.popleft()
        t, p = int(t), int(p)
        for s, q in inv_push[p]:
            add(int(app[t, s]), q)
        for s in range(nt):
            add(k.K, int(push[t, push[s, p]]))
        for a, b, u in inv_c[t]:
            add(k.S, int(push[a, push[b, push[u, p]]]))
    return k.with_pole(pole)


# -- derived combinators ---------------------------------------------------------

@dataclass(frozen=True)
class DerivedCombinators:
    I: int
    E: int
    B: int
    EE: int


def derived_combinators(k: AbstractKrivineStructure) -> DerivedCombinators:
    """``I = SKK``, ``E = S(KI)``, ``B = S(KS)K`` and ``EE``, read off the application table."""
    K, S = k.K, k.S
    I = k.ap(S, K, K)
    E = k.ap(S, k.ap(K, I))
    B = k.ap(S, k.ap(K, S), K)
    return DerivedCombinators(I=I, E=E, B=B, EE=k.ap(E, E))


def check_derived_laws(k: AbstractKrivineStructure) -> CheckReport:
    """Pointwise laws of ``I``, ``E`` and ``B``, plus ``I`` orthogonal to ``^perp Q ~> Q`` for all ``Q``."""
    c = derived_combinators(k)
    pole, push, app = k.rl.pole, k.rl.push, k.app
    nt, ns = pole.shape
    T = np.arange(nt)
    rep = CheckReport("aks.derived_combinators")
    rep.notes["combinators"] = {"I": c.I, "E": c.E, "B": c.B, "EE": c.EE}
    rep.notes["in_qp"] = all(k.qp >> x & 1 for x in (c.I, c.E, c.B))
    if not rep.notes["in_qp"]:
        rep.record({"law": "membership"})
    # I: t orthogonal to p  =>  I orthogonal to t . p
    rep.tally(~pole | pole[c.I, push], lambda i: {"law": "I", "t": i // ns, "pi": i % ns})
    # E: t l orthogonal to p  =>  E orthogonal to t . l . p
    prem = pole[app]  # [t, l, p]
    concl = pole[c.E, push[T[:, None, None], push[None, :, :]]]
    rep.tally(~prem | concl, lambda i: dict(zip(("law", "t", "l", "pi"), ("E",) + np.unravel_index(i, prem.shape))))
    # B: t orthogonal to (s l) . p  =>  B orthogonal to t . s . l . p
    for t in range(nt):
        prem = pole[t, push[app[:, :, None], np.arange(ns)[None, None, :]]]  # [s, l, p]
        concl = pole[c.B, push[t][push[T[:, None, None], push[None, :, :]]]]
        rep.tally(~prem | concl, lambda i, t=t: {"law": "B", "t": t, "s..": np.unravel_index(i, prem.shape)})
    ops = k.ops
    (Q,), _ = quantify([all_masks(ns)], DEFAULT_BUDGET, DEFAULT_SAMPLES, 0)
    img = ops.push_image(ops.stacks_perp(Q), Q)
    rep.tally(subset_of(img, k.rl.rows[c.I]), lambda i: {"law": "I_on_Q", "Q": int(Q[i])})
    return rep


# -- set-level operations ------------------------------------------------------

def clubsuit(k: AbstractKrivineStructure, P: Subset, L: Subset) -> Subset:
    """Polar of the application image of ``^perp P`` by ``L``; always bar-closed."""
    _expect(P, k.stacks, "P")
    _expect(L, k.terms, "L")
    return Subset(k.stacks, int(k.ops.clubsuit(P.mask, L.mask)))


def diamond(k: AbstractKrivineStructure, P: Subset, Q: Subset) -> Subset:
    _expect(Q, k.stacks, "Q")
    return clubsuit(k, P, Subset(k.terms, k.rl.stacks_perp(Q.mask)))


def eta(k: AbstractKrivineStructure, P: Subset) -> Subset:
    """Bullet conductor of ``^perp P`` into the stacks orthogonal to ``EE``."""
    _expect(P, k.stacks, "P")
    return Subset(k.stacks, int(_eta(k, P.mask)))


def _eta(k: AbstractKrivineStructure, P):
    ee = derived_combinators(k).EE
    row = np.full_like(np.asarray(P, dtype=np.int64), k.rl.rows[ee])
    return k.ops.conduct_variant(row, k.ops.stacks_perp(P), "bullet")


# -- theorem checks ------------------------------------------------------------

def _chain(rep: CheckReport, terms, describe) -> None:
    """Tally ``terms[i]`` inside ``terms[i+1]`` for every link, recording strict links in notes."""
    ok = np.ones(np.shape(terms[0]), dtype=bool)
    strict = rep.notes.setdefault("strict_links", {})
    for i, (a, b) in enumerate(zip(terms, terms[1:])):
        ok &= subset_of(a, b)
        strict[str(i)] = strict.get(str(i), 0) + int(np.count_nonzero(a != b))
    rep.tally(ok, describe)


def _setup(k, n_vars, budget, samples, seed, kinds=None):
    budget = DEFAULT_BUDGET if budget is None else budget
    samples = DEFAULT_SAMPLES if samples is None else samples
    cands = kinds or [all_masks(k.stacks.size)] * n_vars
    cols, mode = quantify(cands, budget, samples, seed)
    return cols, mode


def check_inclusion_chain(k: AbstractKrivineStructure, budget: int | None = None, samples: int | None = None,
                          seed: int = 0) -> list[CheckReport]:
    """The seven-term conductor chain, its application-form twin, the implication chain and the eta chain."""
    ops = k.ops
    ns, nt = k.stacks.size, k.terms.size
    ee = derived_combinators(k).EE
    (P, L), mode = _setup(k, 2, budget, samples, seed, [all_masks(ns), all_masks(nt)])
    eP = _eta(k, P)
    rep = CheckReport("aks.inclusion_chain", mode=mode, seed=seed if mode == "sampled" else None)
    _chain(rep, [ops.conduct_variant(P, L, "bullet"), ops.conductor(P, L), ops.conduct_variant(P, L, "perp"),
                 ops.clubsuit(P, L), ops.conduct_variant(eP, L, "bullet"), ops.conductor(eP, L),
                 ops.conduct_variant(eP, L, "perp")],
           lambda i: {"P": int(P[i]), "L": int(L[i])})
    # P clubsuit L inside (EE ^perp P)^perp bullet-conducted by L
    ee_img = ops.terms_perp(ops.app_image(np.full_like(P, 1 << ee), ops.stacks_perp(P)))
    rep.tally(subset_of(ops.conduct_variant(eP, L, "bullet"), ops.conduct_variant(ee_img, L, "bullet")),
              lambda i: {"P": int(P[i]), "L": int(L[i]), "link": "eta_bound"})
    reports = [rep]

    (A, B), mode2 = _setup(k, 2, budget, samples, seed)
    eA = _eta(k, A)
    rep = CheckReport("aks.application_chain", mode=mode2, seed=seed if mode2 == "sampled" else None)
    _chain(rep, [ops.appl(A, B, "bullet"), ops.appl(A, B), ops.appl(A, B, "perp"), ops.diamond(A, B),
                 ops.appl(eA, B, "bullet"), ops.appl(eA, B), ops.appl(eA, B, "perp")],
           lambda i: {"P": int(A[i]), "Q": int(B[i])})
    _chain(rep, [ops.imp(A, B), ops.imp(A, B, "bullet"), ops.imp(A, B, "perp")],
           lambda i: {"P": int(A[i]), "Q": int(B[i]), "chain": "implication"})
    reports.append(rep)

    (P1,), mode1 = _setup(k, 1, budget, samples, seed)
    row = np.full_like(P1, k.rl.rows[ee])
    sp = ops.stacks_perp(P1)
    ee_bar = ops.term_bar(np.full_like(P1, 1 << ee))
    rep = CheckReport("aks.eta_chain", mode=mode1)
    eP1 = _eta(k, P1)
    _chain(rep, [eP1, ops.conductor(row, sp), ops.conduct_variant(row, sp, "perp"), ops.clubsuit(row, sp),
                 ops.terms_perp(ops.app_image(ee_bar, sp)), ops.terms_perp(ops.app_image(np.full_like(P1, 1 << ee), sp))],
           lambda i: {"P": int(P1[i])})
    rep.tally(ops.clubsuit(row, sp) == ops.terms_perp(ops.app_image(ee_bar, sp)),
              lambda i: {"P": int(P1[i]), "link": "clubsuit_equals_closed_image"})
    rep.tally(ops.hat(eP1) == eP1, lambda i: {"P": int(P1[i]), "link": "eta_hat_closed"})
    reports.append(rep)
    return reports


def check_adjunctor_recovery(k: AbstractKrivineStructure, include_e_variant: bool = False,
                             budget: int | None = None, samples: int | None = None, seed: int = 0,
                             cap: int = 14) -> CheckReport:
    """Half adjunction and its recovery through ``EE`` over bar-closed ``L``, ``P``, ``R``.

    With ``include_e_variant`` the stronger bound using ``E`` alone is
    evaluated too and reported in ``notes`` without being asserted.
    """
    ops = k.ops
    fam_s = np.asarray(enumerate_closed(k.rl, ClosureKind.PERP, cap).masks, dtype=np.int64)
    fam_t = np.asarray(enumerate_closed_terms(k.rl, cap), dtype=np.int64)
    (P, L, R), mode = _setup(k, 3, budget, samples, seed, [fam_s, fam_t, fam_s])
    rep = CheckReport("aks.adjunctor_recovery", mode=mode, seed=seed if mode == "sampled" else None)
    c = derived_combinators(k)

    def wit(i):
        return {"P": int(P[i]), "L": int(L[i]), "R": int(R[i])}

    pushed = ops.push_variant(L, R, "perp")
    inside = subset_of(R, ops.conduct_variant(P, L, "perp"))
    rep.tally(~subset_of(pushed, P) | inside, wit)
    bound = ops.bar(_eta(k, P))
    rep.tally(~inside | subset_of(pushed, bound), wit)
    row = np.full_like(fam_s, k.rl.rows[c.EE])
    upper = ops.conduct_variant(row, ops.stacks_perp(fam_s), "perp")
    rep.tally(subset_of(ops.bar(_eta(k, fam_s)), upper), lambda i: {"P": int(fam_s[i]), "link": "eta_closure_bound"})
    if include_e_variant:
        e_row = np.full_like(P, k.rl.rows[c.E])
        e_bound = ops.conduct_variant(e_row, ops.stacks_perp(P), "perp")
        bad = inside & ~subset_of(pushed, e_bound)
        rep.notes["e_variant_failures"] = int(np.count_nonzero(bad))
    return rep


def check_combinator_inequalities(k: AbstractKrivineStructure, budget: int | None = None,
                                  samples: int | None = None, seed: int = 0) -> CheckReport:
    """Orthogonality of ``K``, ``S``, ``E`` and ``EE`` to the implication sets they realize."""
    ops = k.ops
    ns, nt = k.stacks.size, k.terms.size
    c = derived_combinators(k)
    realizes = lambda x, X: ((ops.stacks_perp(X) >> x) & 1).astype(bool)
    (P, Q, R), mode = _setup(k, 3, budget, samples, seed)
    rep = CheckReport("aks.combinator_inequalities", mode=mode, seed=seed if mode == "sampled" else None)

    def w3(name):
        return lambda i: {"law": name, "P": int(P[i]), "Q": int(Q[i]), "R": int(R[i])}

    imp, appl = ops.imp, ops.appl
    rep.tally(realizes(k.K, imp(P, imp(Q, P))), w3("K"))
    rep.tally(realizes(k.S, imp(P, imp(Q, imp(R, appl(appl(P, R), appl(Q, R)))))), w3("S"))
    rep.tally(realizes(c.E, imp(P, imp(Q, ops.diamond(P, Q)))), w3("E"))
    (P2, L2), _ = _setup(k, 2, budget, samples, seed, [all_masks(ns), all_masks(nt)])
    club = ops.clubsuit(P2, L2)
    sp = ops.stacks_perp(P2)
    rep.tally(realizes(c.EE, ops.push_variant(sp, ops.push_variant(L2, club, "bullet"), "bullet")),
              lambda i: {"law": "EE", "P": int(P2[i]), "L": int(L2[i])})
    rep.tally(realizes(c.E, ops.push_image(sp, ops.push_image(L2, club))),
              lambda i: {"law": "E_push", "P": int(P2[i]), "L": int(L2[i])})
    rep.tally(realizes(k.K, ops.push_image(sp, ops.push_image(L2, P2))),
              lambda i: {"law": "K_push", "P": int(P2[i]), "L": int(L2[i])})
    return rep


def check_lemma_equivalence(k: AbstractKrivineStructure, budget: int | None = None, samples: int | None = None,
                            seed: int = 0) -> CheckReport:
    """Axiom (a) and its three set-level reformulations must be simultaneously true or false.

    Meaningful on arbitrary structures, valid or not.
    """
    ops = k.ops
    pole, push, app = k.rl.pole, k.rl.push, k.app
    nt, ns = pole.shape
    prem = pole[np.arange(nt)[:, None, None], push[None, :, :]]
    concl = pole[app[:, :, None], np.arange(ns)[None, None, :]]
    s1 = bool(np.all(~prem | concl))
    (P, L), mode = _setup(k, 2, budget, samples, seed, [all_masks(ns), all_masks(nt)])
    club = ops.clubsuit(P, L)
    s2 = bool(np.all(subset_of(ops.conductor(P, L), club)))
    s3 = bool(np.all(subset_of(ops.conduct_variant(P, L, "perp"), club)))
    s4 = bool(np.all(subset_of(ops.app_image(ops.stacks_perp(P), L), ops.stacks_perp(ops.conductor(P, L)))))
    rep = CheckReport("aks.lemma_equivalence", mode=mode, seed=seed if mode == "sampled" else None, checked=1)
    rep.notes["statements"] = [s1, s2, s3, s4]
    if len({s1, s2, s3, s4}) != 1:
        rep.record({"statements": [s1, s2, s3, s4]})
    return rep
