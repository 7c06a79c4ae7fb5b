"""Push and conductor operations on subsets of stacks, and their adjunction laws.

Each operation comes in three variants: ``"plain"`` (the raw set), ``"bullet"``
(closed with hat, or for conductors the tilde interior) and ``"perp"`` (closed
with bar).
"""
from __future__ import annotations

import numpy as np

from ._maskops import DEFAULT_BUDGET, DEFAULT_SAMPLES, MaskOps, all_masks, quantify, subset_of
from .polarity import ClosureKind, RealizabilityLattice, Subset, _expect, enumerate_closed
from .reports import CheckReport

VARIANTS = ("plain", "bullet", "perp")


def _variant(variant: str) -> str:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    return variant


def _close_push(rl: RealizabilityLattice, m: int, variant: str) -> int:
    if variant == "bullet":
        return rl.hat(m)
    if variant == "perp":
        return rl.bar(m)
    return m


def push_set(rl: RealizabilityLattice, L: Subset, P: Subset, variant: str = "plain") -> Subset:
    """``L ~> P``: every ``t . p`` for ``t`` in ``L`` and ``p`` in ``P``, then closed per variant."""
    _variant(variant)
    _expect(L, rl.terms, "L")
    _expect(P, rl.stacks, "P")
    return Subset(rl.stacks, _close_push(rl, rl.push_image(L.mask, P.mask), variant))


def conduct(rl: RealizabilityLattice, P: Subset, L: Subset, variant: str = "plain") -> Subset:
    """``P * L``: stacks sent into ``P`` by every term of ``L``.

    The bullet variant keeps the stacks whose whole singleton closure is sent
    into ``P``; the perp variant takes the bar closure.
    """
    _variant(variant)
    _expect(P, rl.stacks, "P")
    _expect(L, rl.terms, "L")
    m = rl.conductor(P.mask, L.mask)
    if variant == "bullet":
        m = rl.tilde(m)
    elif variant == "perp":
        m = rl.bar(m)
    return Subset(rl.stacks, m)


def imp_pi(rl: RealizabilityLattice, P: Subset, Q: Subset, variant: str = "plain") -> Subset:
    """Implication on stack subsets: push the terms orthogonal to ``P`` onto ``Q``."""
    _expect(P, rl.stacks, "P")
    return push_set(rl, Subset(rl.terms, rl.stacks_perp(P.mask)), Q, variant)


def app_pi(rl: RealizabilityLattice, P: Subset, Q: Subset, variant: str = "plain") -> Subset:
    """Application on stack subsets: conductor of the terms orthogonal to ``Q`` into ``P``."""
    _expect(Q, rl.stacks, "Q")
    return conduct(rl, P, Subset(rl.terms, rl.stacks_perp(Q.mask)), variant)


# -- law checks ---------------------------------------------------------------

def _report(name: str, mode: str, seed: int) -> CheckReport:
    return CheckReport(name, mode=mode, seed=seed if mode == "sampled" else None)


def _family(rl: RealizabilityLattice, kind: ClosureKind, cap: int) -> np.ndarray:
    return np.asarray(enumerate_closed(rl, kind, cap).masks, dtype=np.int64)


def check_adjunction(rl: RealizabilityLattice, variant: str = "plain", budget: int | None = None,
                     samples: int | None = None, seed: int = 0, cap: int = 14) -> CheckReport:
    """Adjunction between push and conductor over triples ``(P, L, R)``.

    ``plain`` ranges over all subsets; ``bullet`` restricts ``P`` and ``R`` to
    hat-closed sets and ``perp`` to bar-closed sets. For ``perp`` only the
    direction ``L ~> R inside P  implies  R inside P * L`` is asserted; failures
    of the converse are counted in ``notes`` with the first witness in
    lexicographic order of ``(P, L, R)`` by mask value.
    """
    _variant(variant)
    budget = DEFAULT_BUDGET if budget is None else budget
    samples = DEFAULT_SAMPLES if samples is None else samples
    ops = MaskOps(rl)
    if variant == "plain":
        fam = all_masks(rl.stacks.size)
    elif variant == "bullet":
        fam = _family(rl, ClosureKind.BULLET, cap)
    else:
        fam = _family(rl, ClosureKind.PERP, cap)
    (P, L, R), mode = quantify([fam, all_masks(rl.terms.size), fam], budget, samples, seed)
    lhs = subset_of(ops.push_variant(L, R, variant), P)
    rhs = subset_of(R, ops.conduct_variant(P, L, variant))
    rep = _report(f"stackops.adjunction.{variant}", mode, seed)

    def wit(i):
        return {"P": int(P[i]), "L": int(L[i]), "R": int(R[i])}

    if variant == "perp":
        rep.tally(~lhs | rhs, wit)
        bad = np.flatnonzero(rhs & ~lhs)
        rep.notes["converse_checked"] = int(P.size)
        rep.notes["converse_failures"] = int(bad.size)
        if bad.size:
            order = np.lexsort((R[bad], L[bad], P[bad]))
            rep.notes["converse_witness"] = wit(int(bad[order[0]]))
    else:
        rep.tally(lhs == rhs, wit)
    return rep


def _monotone(rep: CheckReport, f, n_first: int, n_second: int, arg: int, sign: int,
              budget: int, samples: int, seed: int) -> None:
    """Check ``f`` is monotone (``sign=1``) or antitone (``sign=-1``) in argument ``arg``.

    Comparing ``f`` at ``X`` and ``X`` plus one element is enough, since every
    inclusion is a chain of single-element steps.
    """
    n_var = n_first if arg == 0 else n_second
    cols, mode = quantify([all_masks(n_first), all_masks(n_second), np.arange(n_var)], budget, samples, seed)
    X, Y, k = cols
    bit = np.left_shift(np.int64(1), k)
    if arg == 0:
        lo, hi = f(X & ~bit, Y), f(X | bit, Y)
    else:
        lo, hi = f(X, Y & ~bit), f(X, Y | bit)
    ok = subset_of(lo, hi) if sign > 0 else subset_of(hi, lo)
    if mode == "sampled":
        rep.mode, rep.seed = "sampled", seed
    rep.tally(ok, lambda i: {"X": int(X[i]), "Y": int(Y[i]), "element": int(k[i]), "argument": arg})


def check_stackops_laws(rl: RealizabilityLattice, budget: int | None = None, samples: int | None = None,
                        seed: int = 0, cap: int = 14) -> list[CheckReport]:
    """Monotony, inclusion tables, closure reflections and the pointwise form of the bullet conductor."""
    budget = DEFAULT_BUDGET if budget is None else budget
    samples = DEFAULT_SAMPLES if samples is None else samples
    ops = MaskOps(rl)
    nt, ns = rl.terms.size, rl.stacks.size
    reports = []

    rep = CheckReport("stackops.monotony")
    for v in VARIANTS:
        _monotone(rep, lambda L, P, v=v: ops.push_variant(L, P, v), nt, ns, 0, 1, budget, samples, seed)
        _monotone(rep, lambda L, P, v=v: ops.push_variant(L, P, v), nt, ns, 1, 1, budget, samples, seed)
        _monotone(rep, lambda P, L, v=v: ops.conduct_variant(P, L, v), ns, nt, 0, 1, budget, samples, seed)
        _monotone(rep, lambda P, L, v=v: ops.conduct_variant(P, L, v), ns, nt, 1, -1, budget, samples, seed)
        _monotone(rep, lambda P, Q, v=v: ops.imp(P, Q, v), ns, ns, 0, -1, budget, samples, seed)
        _monotone(rep, lambda P, Q, v=v: ops.imp(P, Q, v), ns, ns, 1, 1, budget, samples, seed)
        _monotone(rep, lambda P, Q, v=v: ops.appl(P, Q, v), ns, ns, 0, 1, budget, samples, seed)
        _monotone(rep, lambda P, Q, v=v: ops.appl(P, Q, v), ns, ns, 1, 1, budget, samples, seed)
    reports.append(rep)

    (P, L), mode = quantify([all_masks(ns), all_masks(nt)], budget, samples, seed)

    def wit(i):
        return {"P": int(P[i]), "L": int(L[i])}

    c0, c1, c2 = (ops.conduct_variant(P, L, v) for v in VARIANTS)
    p0, p1, p2 = (ops.push_variant(L, P, v) for v in VARIANTS)
    rep = _report("stackops.inclusion_table", mode, seed)
    rep.tally(subset_of(c1, c0) & subset_of(c0, c2), wit)
    rep.tally(subset_of(p0, p1) & subset_of(p1, p2), wit)
    reports.append(rep)

    # bullet conductor from its pointwise definition, independent of tilde
    rep = _report("stackops.bullet_conductor_pointwise", mode, seed)
    direct = np.zeros_like(P)
    for p, up in enumerate(rl.bar1):
        ok = subset_of(ops.push_image(L, np.full_like(L, up)), P)
        direct |= ok.astype(np.int64) << p
    rep.tally(direct == c1, wit)
    reports.append(rep)

    (A, B), mode2 = quantify([all_masks(ns)] * 2, budget, samples, seed)
    rep = _report("stackops.implication_perp_invariant", mode2, seed)
    i0, i1, i2 = (ops.stacks_perp(ops.imp(A, B, v)) for v in VARIANTS)
    rep.tally((i0 == i1) & (i1 == i2), lambda i: {"P": int(A[i]), "Q": int(B[i])})
    reports.append(rep)

    rep = CheckReport("stackops.reflection")
    for kind, name in ((ClosureKind.PERP, "perp"), (ClosureKind.BULLET, "bullet")):
        fam = _family(rl, kind, cap)
        (P3, L3, R3), m3 = quantify([all_masks(ns), all_masks(nt), fam], budget, samples, seed)
        if m3 == "sampled":
            rep.mode, rep.seed = "sampled", seed
        c_plain, p_plain = ops.conductor(P3, L3), ops.push_image(L3, P3)

        def w3(i, name=name):
            return {"closed": name, "P": int(P3[i]), "L": int(L3[i]), "R": int(R3[i])}

        if kind is ClosureKind.PERP:
            rep.tally(subset_of(c_plain, R3) == subset_of(ops.bar(c_plain), R3), w3)
            rep.tally(subset_of(p_plain, R3) == subset_of(ops.bar(p_plain), R3), w3)
        else:
            rep.tally(subset_of(R3, c_plain) == subset_of(R3, ops.tilde(c_plain)), w3)
            rep.tally(subset_of(p_plain, R3) == subset_of(ops.hat(p_plain), R3), w3)
    reports.append(rep)
    return reports
