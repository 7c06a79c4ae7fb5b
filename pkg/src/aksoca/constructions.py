"""Algebras built from realizability structures and back, with the comparison theorems.

* :func:`aks_to_foca_bullet`: hat-closed stack sets under reverse inclusion.
* :func:`aks_to_ioca_perp`: bar-closed stack sets, with an adjunctor.
* :func:`foca_to_aks`: an algebra read as a structure whose pole is its order.
* :func:`heyting_from_aks`: the realizability preorder on a closed family.

Orders on families of stack sets are reverse inclusion, so the infimum of
hat-closed sets is their union and the top element is the empty set.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._maskops import DEFAULT_BUDGET, MaskOps, bit_table, quantify, subset_of
from .aks import AbstractKrivineStructure, derived_combinators, validate_aks
from .errors import EnumerationCapError, NotFocaError
from .oca import (FiniteOca, HeytingPreorder, OcaClass, classify_oca, heyting_preorder, realizer_table,
                  sharp_table)
from .polarity import (Carrier, ClosureKind, RealizabilityLattice, enumerate_closed, iter_bits, up_sets)
from .reports import CheckReport

TRIANGLE_MAX_FAMILY = 20000
TRIANGLE_SAMPLES = 10000


def _masks_to_bits(masks, n: int) -> np.ndarray:
    masks = np.asarray(masks, dtype=np.int64)
    return ((masks[:, None] >> np.arange(n)) & 1).astype(bool)


def _family_algebra(k: AbstractKrivineStructure, kind: ClosureKind, variant: str, k_el: int, s_el: int,
                    e_el: int | None, cap: int) -> FiniteOca:
    fam = enumerate_closed(k.rl, kind, cap)
    masks = np.asarray(fam.masks, dtype=np.int64)
    n = masks.size
    ops = k.ops
    index = {int(m): i for i, m in enumerate(masks)}
    P, Q = np.meshgrid(masks, masks, indexing="ij")
    app = np.vectorize(index.__getitem__)(ops.appl(P, Q, variant)) if n else P
    imp = np.vectorize(index.__getitem__)(ops.imp(P, Q, variant)) if n else P
    leq = subset_of(Q, P)  # leq[i, j]: masks[j] inside masks[i]
    realized = (k.qp & ops.stacks_perp(masks)) != 0
    filt = sum(1 << i for i in np.flatnonzero(realized))
    rows = k.rl.rows
    label = ClosureKind.BULLET.value if kind is ClosureKind.BULLET else ClosureKind.PERP.value
    carrier = Carrier(f"closed_{label}", n, tuple(format(int(m), "b").zfill(k.stacks.size)[::-1] for m in masks))
    return FiniteOca(carrier, leq, app, imp, index[rows[k_el]], index[rows[s_el]],
                     None if e_el is None else index[rows[e_el]], filt, points=tuple(int(m) for m in masks))


def aks_to_foca_bullet(k: AbstractKrivineStructure, cap: int = 14) -> FiniteOca:
    """Hat-closed stack sets with bullet application and implication.

    ``k`` is the polar of ``EK`` and ``s`` the polar of ``E((BE)S)``; the
    filter holds the sets orthogonal to some quasi-proof.
    """
    c = derived_combinators(k)
    k_el = k.ap(c.E, k.K)
    s_el = k.ap(c.E, k.ap(c.B, c.E, k.S))
    return _family_algebra(k, ClosureKind.BULLET, "bullet", k_el, s_el, None, cap)


def aks_to_ioca_perp(k: AbstractKrivineStructure, cap: int = 14) -> FiniteOca:
    """Bar-closed stack sets with perp application and implication; adjunctor is the polar of ``E``."""
    c = derived_combinators(k)
    return _family_algebra(k, ClosureKind.PERP, "perp", k.K, k.S, c.E, cap)


def foca_to_aks(a: FiniteOca, require_foca: bool = True) -> AbstractKrivineStructure:
    """Terms and stacks are the elements, the pole is the order and push is implication."""
    if require_foca:
        cls, reports = classify_oca(a)
        if cls is not OcaClass.FOCA:
            failed = [r.name for r in reports if not r.passed]
            raise NotFocaError(f"algebra is not a full-adjunction algebra; failing: {failed}")
    terms = Carrier("terms", a.n, a.carrier.labels)
    stacks = Carrier("stacks", a.n, a.carrier.labels)
    rl = RealizabilityLattice(terms, stacks, a.leq, a.imp)
    return AbstractKrivineStructure(rl, a.app, a.filter, a.k, a.s)


# -- realizability preorders -------------------------------------------------------

def realizer_masks(rl: RealizabilityLattice, qp: int, C, D) -> np.ndarray:
    """Quasi-proofs orthogonal to ``C -> D`` for paired arrays of stack masks.

    Orthogonality to a set and to its hat closure coincide, so the same
    masks realize the bullet and plain implications. The result is the AND,
    over ``l`` orthogonal to ``C`` and ``d`` in ``D``, of the terms orthogonal
    to ``push(l, d)``.
    """
    C = np.asarray(C, dtype=np.int64)
    D = np.asarray(D, dtype=np.int64)
    C, D = np.broadcast_arrays(C, D)
    ops = MaskOps(rl, table_limit=0) if rl.stacks.size > 8 or rl.terms.size > 8 else MaskOps(rl)
    perpC = ops.stacks_perp(C)
    out = np.full(C.shape, qp, dtype=np.int64)
    cols = np.asarray(rl.cols, dtype=np.int64)
    full = np.int64(rl.terms.full)
    for l in range(rl.terms.size):
        has_l = ((perpC >> l) & 1).astype(bool)
        if not has_l.any():
            continue
        for d in range(rl.stacks.size):
            sel = has_l & ((D >> d) & 1).astype(bool)
            out = np.where(sel, out & cols[rl.push[l, d]], out)
    return out & np.int64(qp) if qp >= 0 else out


def _first_bit(masks: np.ndarray) -> np.ndarray:
    masks = np.asarray(masks, dtype=np.int64)
    low = masks & -masks
    out = np.full(masks.shape, -1, dtype=np.int64)
    nz = low != 0
    out[nz] = np.log2(low[nz].astype(np.float64)).round().astype(np.int64)
    return out


@dataclass(frozen=True)
class FamilyPreorder:
    """Realizability preorder on a closed family; ``realizers[i, j]`` is the first quasi-proof, or -1."""

    masks: tuple[int, ...]
    order: np.ndarray
    realizers: np.ndarray
    kind: ClosureKind


def heyting_from_aks(k: AbstractKrivineStructure, variant: str = "bullet", cap: int = 14) -> FamilyPreorder:
    """``P`` below ``Q`` when some quasi-proof is orthogonal to the implication from ``P`` to ``Q``."""
    kind = {"bullet": ClosureKind.BULLET, "perp": ClosureKind.PERP}[variant]
    masks = np.asarray(enumerate_closed(k.rl, kind, cap).masks, dtype=np.int64)
    P, Q = np.meshgrid(masks, masks, indexing="ij")
    direct = k.qp & k.ops.stacks_perp(k.ops.imp(P, Q, variant))
    first = _first_bit(direct)
    return FamilyPreorder(tuple(int(m) for m in masks), direct != 0, first, kind)


def check_realizers_across_variants(k: AbstractKrivineStructure, cap: int = 14) -> CheckReport:
    """The same quasi-proofs realize the plain, bullet and perp implications, and agree with :func:`realizer_masks`."""
    masks = np.asarray(enumerate_closed(k.rl, ClosureKind.PERP, cap).masks, dtype=np.int64)
    P, Q = np.meshgrid(masks, masks, indexing="ij")
    ops = k.ops
    r = [k.qp & ops.stacks_perp(ops.imp(P, Q, v)) for v in ("plain", "bullet", "perp")]
    alt = realizer_masks(k.rl, k.qp, P, Q)
    rep = CheckReport("constructions.realizers_across_variants")
    rep.tally((r[0] == r[1]) & (r[1] == r[2]) & (r[0] == alt), lambda i: {"P": int(P.flat[i]), "Q": int(Q.flat[i])})
    return rep


def check_iso_Hk_HA(k: AbstractKrivineStructure, cap: int = 14) -> CheckReport:
    """Order of the structure's preorder equals that of the derived algebra's preorder, entrywise."""
    hk = heyting_from_aks(k, "bullet", cap)
    a = aks_to_foca_bullet(k, cap)
    ha = heyting_preorder(a)
    rep = CheckReport("constructions.iso_Hk_HA")
    n = len(hk.masks)
    if a.points != hk.masks:
        rep.record({"carrier_mismatch": True})
    rep.tally(hk.order == ha.order, lambda i: {"P": hk.masks[i // n], "Q": hk.masks[i % n],
                                               "structure": bool(hk.order.flat[i]), "algebra": bool(ha.order.flat[i])})
    return rep


def check_inclusion_equivalence(k: AbstractKrivineStructure, cap: int = 14, budget: int = DEFAULT_BUDGET,
                                seed: int = 0) -> CheckReport:
    """Hat-closed sets sit in all stack sets as an equivalence of realizability preorders.

    Order reflection compares both preorders on hat-closed pairs; essential
    surjectivity exhibits realizers both ways between every ``P`` and its bar closure.
    """
    ns = k.stacks.size
    if ns > cap:
        raise EnumerationCapError(f"{ns} stacks exceeds the enumeration cap {cap}")
    hk = heyting_from_aks(k, "bullet", cap)
    masks = np.asarray(hk.masks, dtype=np.int64)
    P, Q = np.meshgrid(masks, masks, indexing="ij")
    plain = (k.qp & k.ops.stacks_perp(k.ops.imp(P, Q, "plain"))) != 0
    rep = CheckReport("constructions.inclusion_equivalence")
    rep.tally(plain == hk.order, lambda i: {"P": int(P.flat[i]), "Q": int(Q.flat[i])})
    (A,), mode = quantify([np.arange(1 << ns)], budget, 4096, seed)
    B = k.ops.bar(A)
    there = k.qp & k.ops.stacks_perp(k.ops.imp(A, B, "plain"))
    back = k.qp & k.ops.stacks_perp(k.ops.imp(B, A, "plain"))
    rep.tally((there != 0) & (back != 0), lambda i: {"P": int(A[i]), "bar": int(B[i])})
    I = derived_combinators(k).I
    rep.notes["identity_realizes_all"] = bool(np.all((there >> I) & (back >> I) & 1))
    rep.notes["bar_closed_members"] = int(np.count_nonzero(np.isin(B, masks)))
    return rep


# -- Galois pair ------------------------------------------------------------------

@dataclass(frozen=True)
class GaloisPair:
    """``iota[a]`` is the up-set of ``a`` as a stack mask of the derived structure; ``rho`` takes infima."""

    algebra: FiniteOca
    iota: tuple[int, ...]

    def rho(self, mask: int) -> int:
        return self.algebra.inf(iter_bits(mask))

    def rho_many(self, masks) -> np.ndarray:
        return self.algebra.inf_rows(_masks_to_bits(masks, self.algebra.n))


def galois_pair(a: FiniteOca, budget: int = 1 << 16, samples: int = 4096, seed: int = 0):
    """Up-set and infimum maps between an algebra and the stack sets of its derived structure.

    The report covers, for stack sets ``C`` (all of them when ``2^n`` fits the
    budget, otherwise a seeded sample) the closure identities, principal
    filters as the bar-closed family, the unit and counit, and for pairs
    ``(C, D)`` the comparison of implications.
    """
    ka = foca_to_aks(a)
    n = a.n
    up = a.leq  # up[x, y]: x <= y
    iota = tuple(int(sum(1 << int(y) for y in np.flatnonzero(up[x]))) for x in range(n))
    pair = GaloisPair(a, iota)
    rep = CheckReport("constructions.galois")
    ops = MaskOps(ka.rl, table_limit=0 if n > 8 else 8)
    io = np.asarray(iota, dtype=np.int64)
    down = np.asarray([int(sum(1 << int(y) for y in np.flatnonzero(up[:, x]))) for x in range(n)], dtype=np.int64)

    if n <= 20 and (1 << n) <= budget:
        C = np.arange(1 << n, dtype=np.int64)
        rep.mode = "exhaustive"
    else:
        rng = np.random.default_rng(seed)
        C = rng.integers(0, 1 << min(n, 62), size=samples, dtype=np.int64)
        rep.mode, rep.seed = "sampled", seed
    rho = pair.rho_many(C)
    rep.tally(ops.stacks_perp(C) == down[rho], lambda i: {"law": "perp_is_down_set", "C": int(C[i])})
    rep.tally(ops.bar(C) == io[rho], lambda i: {"law": "bar_is_up_set", "C": int(C[i])})
    hat_direct = np.zeros_like(C)
    for x in range(n):
        hat_direct |= np.where((C >> x) & 1 == 1, io[x], 0)
    rep.tally(ops.hat(C) == hat_direct, lambda i: {"law": "hat_is_union", "C": int(C[i])})
    rep.tally(subset_of(C, io[rho]), lambda i: {"law": "counit", "C": int(C[i])})
    # adjunction: x <= inf C  iff  the up-set of x contains C
    X = np.arange(n)
    adj = up[X[:, None], rho[None, :]] == subset_of(C[None, :], io[:, None])
    rep.tally(adj, lambda i: {"law": "adjunction", "x": i // C.size, "C": int(C[i % C.size])})
    rep.tally(pair.rho_many(io) == X, lambda i: {"law": "unit", "x": i})
    perp_family = np.asarray(enumerate_closed(ka.rl, ClosureKind.PERP, cap=max(n, 14)).masks, dtype=np.int64) \
        if n <= 20 else None
    if perp_family is not None:
        rep.checked += 1
        if sorted(set(io.tolist())) != perp_family.tolist():
            rep.record({"law": "principal_filters"})

    (Cp, Dp), mode = quantify([C, C], budget, samples, seed + 1)
    if mode == "sampled":
        rep.mode, rep.seed = "sampled", seed
    rC, rD = pair.rho_many(Cp), pair.rho_many(Dp)
    lhs = a.imp[rC, rD]
    equal = np.zeros(Cp.shape, dtype=bool)
    infs = [pair.rho_many(ops.imp(Cp, Dp, v)) for v in ("plain", "bullet", "perp")]
    rep.tally(a.leq[lhs, infs[0]] & (infs[0] == infs[1]) & (infs[1] == infs[2]),
              lambda i: {"law": "implication", "C": int(Cp[i]), "D": int(Dp[i])})
    equal = lhs == infs[0]
    rep.notes["implication_equalities"] = int(np.count_nonzero(equal))
    rep.notes["implication_pairs"] = int(equal.size)
    return pair, rep


# -- triangle -------------------------------------------------------------------------

def _second_level_family(ka: AbstractKrivineStructure, max_family: int, samples: int, seed: int):
    """Hat-closed stack sets of the derived structure: all of them, or a seeded sample if too many."""
    n = ka.stacks.size
    fam = _bounded_up_sets(n, ka.rl.bar1, max_family)
    if fam is not None:
        return np.asarray(sorted(fam), dtype=np.int64), "exhaustive"
    rng = np.random.default_rng(seed)
    density = rng.random(samples)
    bits = rng.random((samples, n)) < density[:, None]
    raw = (bits.astype(np.int64) << np.arange(n)).sum(axis=1)
    ops = MaskOps(ka.rl, table_limit=0)
    return np.unique(ops.hat(raw)), "sampled"


def _bounded_up_sets(n: int, up, limit: int):
    down = [0] * n
    for i in range(n):
        for j in iter_bits(up[i]):
            down[j] |= 1 << i
    full = (1 << n) - 1
    out = []
    stack = [(0, 0)]
    while stack:
        inc, exc = stack.pop()
        free = full & ~(inc | exc)
        if not free:
            out.append(inc)
            if len(out) > limit:
                return None
            continue
        i = (free & -free).bit_length() - 1
        stack.append((inc, exc | down[i]))
        stack.append((inc | up[i], exc))
    return out


def check_triangle_commutes(k: AbstractKrivineStructure, cap: int = 14, budget: int = DEFAULT_BUDGET,
                            samples: int = TRIANGLE_SAMPLES, seed: int = 0,
                            max_family: int = TRIANGLE_MAX_FAMILY) -> CheckReport:
    """Taking infima is an equivalence from hat-closed stack sets of the derived structure back to the algebra.

    Pairs of stack sets are exhaustive when their number fits ``budget``,
    otherwise ``samples`` seeded pairs; essential surjectivity is checked on
    every element.
    """
    a = aks_to_foca_bullet(k, cap)
    return check_triangle_for_algebra(a, budget=budget, samples=samples, seed=seed, max_family=max_family,
                                      name="constructions.triangle")


def check_triangle_for_algebra(a: FiniteOca, budget: int = DEFAULT_BUDGET, samples: int = TRIANGLE_SAMPLES,
                               seed: int = 0, max_family: int = TRIANGLE_MAX_FAMILY,
                               name: str = "constructions.triangle") -> CheckReport:
    ka = foca_to_aks(a)
    fam, fam_mode = _second_level_family(ka, max_family, samples, seed)
    pair = GaloisPair(a, tuple(int(sum(1 << int(y) for y in np.flatnonzero(a.leq[x]))) for x in range(a.n)))
    rho = pair.rho_many(fam)
    r_alg = realizer_table(a) >= 0
    (ci, di), mode = quantify([np.arange(fam.size)] * 2, budget, samples, seed)
    if fam_mode == "sampled":
        mode = "sampled"
    C, D = fam[ci], fam[di]
    structure = realizer_masks(ka.rl, ka.qp, C, D) != 0
    algebra = r_alg[rho[ci], rho[di]]
    rep = CheckReport(name, mode=mode, seed=seed if mode == "sampled" else None)
    rep.tally(structure == algebra, lambda i: {"C": int(C[i]), "D": int(D[i]),
                                               "structure": bool(structure[i]), "algebra": bool(algebra[i])})
    io = np.asarray(pair.iota, dtype=np.int64)
    hat_ok = MaskOps(ka.rl, table_limit=0 if a.n > 8 else 8).hat(io) == io
    rep.tally(hat_ok & (pair.rho_many(io) == np.arange(a.n)), lambda i: {"law": "essentially_surjective", "a": i})
    rep.notes["family_size"] = int(fam.size)
    rep.notes["pairs"] = int(C.size)
    return rep


# -- sharp on the perp-closed algebra -----------------------------------------------

def check_sharp_equals_bar_circ(k: AbstractKrivineStructure, cap: int = 14) -> CheckReport:
    """On bar-closed sets, the bar closure of the bullet application equals the sharp product.

    Also asserts that the bullet application lies inside the sharp product,
    which lies inside the perp application. Whether it also lies inside the
    plain application is counted in ``notes`` only.
    """
    a = aks_to_ioca_perp(k, cap)
    masks = np.asarray(a.points, dtype=np.int64)
    sh = masks[sharp_table(a)]
    P, Q = np.meshgrid(masks, masks, indexing="ij")
    ops = k.ops
    bullet = ops.appl(P, Q, "bullet")
    rep = CheckReport("constructions.sharp_equals_bar_circ")
    rep.tally(ops.bar(bullet) == sh, lambda i: {"a": int(P.flat[i]), "b": int(Q.flat[i])})
    rep.tally(subset_of(bullet, sh) & subset_of(sh, ops.appl(P, Q, "perp")),
              lambda i: {"a": int(P.flat[i]), "b": int(Q.flat[i]), "law": "sandwich"})
    rep.notes["sharp_outside_plain_app"] = int(np.count_nonzero(~subset_of(sh, ops.appl(P, Q, "plain"))))
    return rep


def check_construction_soundness(k: AbstractKrivineStructure, cap: int = 14) -> list[CheckReport]:
    """Both derived algebras classify as expected and the bullet algebra maps back to a valid structure."""
    reports = []
    fb = aks_to_foca_bullet(k, cap)
    cls, laws = classify_oca(fb)
    rep = CheckReport("constructions.foca_bullet", checked=1)
    rep.notes["class"] = None if cls is None else cls.name
    if cls is not OcaClass.FOCA:
        rep.record({"class": rep.notes["class"], "failing": [r.name for r in laws if not r.passed]})
    reports.append(rep)
    ip = aks_to_ioca_perp(k, cap)
    cls, laws = classify_oca(ip)
    rep = CheckReport("constructions.ioca_perp", checked=1)
    rep.notes["class"] = None if cls is None else cls.name
    rep.notes["full_adjunction"] = cls is OcaClass.FOCA
    if cls is None or cls < OcaClass.IOCA:
        rep.record({"class": rep.notes["class"], "failing": [r.name for r in laws if not r.passed]})
    reports.append(rep)
    back = validate_aks(foca_to_aks(fb))
    back.name = "constructions.foca_to_aks"
    reports.append(back)
    return reports
