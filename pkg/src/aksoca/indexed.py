"""Indexed preorders over finite index sets: uniform-realizer entailment and reindexing.

A predicate on an index set ``I = range(m)`` is a tuple of values, one per
index. Entailment needs a single realizer that works at every index at
once, so it is computed by AND-ing per-pair realizer masks across indices.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from ._maskops import DEFAULT_SAMPLES
from .aks import AbstractKrivineStructure
from .constructions import (GaloisPair, _bounded_up_sets, _second_level_family, aks_to_foca_bullet, foca_to_aks,
                            heyting_from_aks, realizer_masks)
from .errors import CarrierMismatchError
from .oca import FiniteOca, _bool_matmul, pairing_p
from .polarity import ClosureKind, iter_bits
from .reports import CheckReport

MAX_PREDICATES = 1024


@dataclass(frozen=True)
class IndexedPredicate:
    """Values indexed by ``range(index_size)``; values are indices into a target carrier."""

    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) < 1:
            raise ValueError("index sets must be nonempty")
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    @property
    def index_size(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> int:
        return self.values[i]


def reindex(f: Sequence[int], phi: IndexedPredicate) -> IndexedPredicate:
    """Precompose ``phi`` with ``f``, a map from ``range(len(f))`` into the index set of ``phi``."""
    for j, i in enumerate(f):
        if not 0 <= i < phi.index_size:
            raise IndexError(f"f({j}) = {i} is outside the index set of size {phi.index_size}")
    return IndexedPredicate(tuple(phi.values[i] for i in f))


class RealizerSystem:
    """Per-pair realizer sets as 64-bit masks over a numbered list of realizers.

    ``pair[x, y]`` has bit ``b`` set when ``realizers[b]`` realizes ``x``
    below ``y``; entailment between predicates ANDs these masks over indices.
    """

    def __init__(self, pair: np.ndarray, realizers: Sequence[int]):
        if len(realizers) > 64:
            raise ValueError("at most 64 realizers are supported")
        self.pair = np.asarray(pair, dtype=np.uint64)
        self.realizers = np.asarray(realizers, dtype=np.int64)
        self.size = self.pair.shape[0]

    @classmethod
    def for_aks(cls, k: AbstractKrivineStructure, cap: int = 14) -> "RealizerSystem":
        """Targets are the hat-closed stack sets (by position); realizers are the quasi-proofs."""
        pre = heyting_from_aks(k, "bullet", cap)
        masks = np.asarray(pre.masks, dtype=np.int64)
        P, Q = np.meshgrid(masks, masks, indexing="ij")
        direct = k.qp & k.ops.stacks_perp(k.ops.imp(P, Q, "bullet"))
        qp = list(iter_bits(k.qp))
        pair = np.zeros(direct.shape, dtype=np.uint64)
        for b, t in enumerate(qp):
            pair |= (((direct >> t) & 1).astype(np.uint64) << np.uint64(b))
        sys = cls(pair, qp)
        sys.masks = pre.masks
        return sys

    @classmethod
    def for_oca(cls, a: FiniteOca) -> "RealizerSystem":
        """Targets are the elements; realizers are the filter elements ``f`` with ``f x <= y``."""
        fs = list(iter_bits(a.filter))
        pair = np.zeros((a.n, a.n), dtype=np.uint64)
        for b, f in enumerate(fs):
            pair |= a.leq[a.app[f][:, None], np.arange(a.n)[None, :]].astype(np.uint64) << np.uint64(b)
        return cls(pair, fs)

    def masks_for(self, phis: np.ndarray, psis: np.ndarray) -> np.ndarray:
        """Uniform realizer masks for paired predicate arrays of shape ``[..., m]``."""
        out = np.full(np.broadcast_shapes(phis.shape[:-1], psis.shape[:-1]), np.uint64(2 ** 64 - 1))
        for i in range(phis.shape[-1]):
            out = out & self.pair[phis[..., i], psis[..., i]]
        return out

    def first(self, masks: np.ndarray) -> np.ndarray:
        """Realizer of the lowest set bit in each mask, or -1."""
        masks = np.asarray(masks, dtype=np.uint64)
        out = np.full(masks.shape, -1, dtype=np.int64)
        remaining = masks != 0
        for b in range(len(self.realizers)):
            hit = remaining & (((masks >> np.uint64(b)) & np.uint64(1)) == 1)
            out[hit] = self.realizers[b]
            remaining &= ~hit
        return out

    def entails(self, phi: IndexedPredicate, psi: IndexedPredicate) -> int | None:
        if phi.index_size != psi.index_size:
            raise CarrierMismatchError(f"index sets differ: {phi.index_size} vs {psi.index_size}")
        r = int(self.first(self.masks_for(np.array([phi.values]), np.array([psi.values])))[0])
        return None if r < 0 else r

    def matrix(self, preds: np.ndarray) -> np.ndarray:
        """Entailment matrix between all listed predicates (rows of ``preds``)."""
        return self.masks_for(preds[:, None, :], preds[None, :, :]) != 0


def entails_aks(k: AbstractKrivineStructure, phi: IndexedPredicate, psi: IndexedPredicate,
                cap: int = 14) -> int | None:
    """A quasi-proof orthogonal to every ``phi(i) -> psi(i)`` at once, or ``None``.

    Values index the hat-closed stack sets in increasing mask order.
    """
    return RealizerSystem.for_aks(k, cap).entails(phi, psi)


def entails_oca(a: FiniteOca, phi: IndexedPredicate, psi: IndexedPredicate) -> int | None:
    """A filter element ``r`` with ``r phi(i) <= psi(i)`` for every index, or ``None``."""
    return RealizerSystem.for_oca(a).entails(phi, psi)


def predicates(size: int, m: int, max_predicates: int = MAX_PREDICATES, seed: int = 0):
    """All predicates ``range(m) -> range(size)`` or a seeded sample; returns ``(array, mode)``."""
    if size ** m <= max_predicates:
        return np.array(list(product(range(size), repeat=m)), dtype=np.int64).reshape(-1, m), "exhaustive"
    rng = np.random.default_rng(seed)
    return rng.integers(0, size, size=(max_predicates, m)), "sampled"


def all_maps(j: int, i: int) -> list[tuple[int, ...]]:
    return list(product(range(i), repeat=j))


def _merge_mode(rep: CheckReport, mode: str, seed: int) -> None:
    if mode == "sampled":
        rep.mode, rep.seed = "sampled", seed


def check_entailment_laws(sys: RealizerSystem, max_index: int = 3, meet: np.ndarray | None = None,
                          top: int | None = None, seed: int = 0, name: str = "indexed.entailment",
                          max_predicates: int = MAX_PREDICATES) -> CheckReport:
    """Preorder laws, pointwise meet laws (when ``meet`` is given) and reindexing functoriality.

    ``top`` is the constant value of the top predicate. Pairs realized at
    each index separately but by no single realizer are counted in
    ``notes["pointwise_not_uniform"]``.
    """
    rep = CheckReport(name)
    rep.notes["pointwise_not_uniform"] = 0
    rng = np.random.default_rng(seed)
    for m in range(1, max_index + 1):
        preds, mode = predicates(sys.size, m, max_predicates, seed + m)
        _merge_mode(rep, mode, seed)
        E = sys.matrix(preds)
        pointwise = np.ones_like(E)
        for i in range(m):
            pointwise &= sys.pair[preds[:, None, i], preds[None, :, i]] != 0
        rep.notes["pointwise_not_uniform"] += int(np.count_nonzero(pointwise & ~E))
        rep.tally(E.diagonal(), lambda i, m=m: {"law": "reflexive", "m": m, "phi": preds[i].tolist()})
        rep.tally(~_bool_matmul(E, E) | E, lambda i, m=m: {"law": "transitive", "m": m})
        if meet is not None:
            idx = rng.integers(0, len(preds), size=(min(DEFAULT_SAMPLES, len(preds) ** 2), 2))
            phi, psi = preds[idx[:, 0]], preds[idx[:, 1]]
            both = meet[phi, psi]
            lower = (sys.masks_for(both, phi) != 0) & (sys.masks_for(both, psi) != 0)
            rep.tally(lower, lambda i, m=m: {"law": "meet_lower", "m": m})
            chi = preds[rng.integers(0, len(preds), size=len(idx))]
            below = (sys.masks_for(chi, phi) != 0) & (sys.masks_for(chi, psi) != 0)
            rep.tally(~below | (sys.masks_for(chi, both) != 0), lambda i, m=m: {"law": "meet_greatest", "m": m})
        if top is not None:
            topp = np.full((1, m), top)
            rep.tally(sys.masks_for(preds, topp) != 0, lambda i, m=m: {"law": "top", "m": m})
        # reindexing: identity, composition, and transport of realizers along every map into range(m)
        for j in range(1, max_index + 1):
            for f in all_maps(j, m):
                fa = np.asarray(f, dtype=np.int64)
                moved = preds[:, fa]
                same = sys.masks_for(preds[:, None, :], preds[None, :, :])
                moved_masks = sys.masks_for(moved[:, None, :], moved[None, :, :])
                # every uniform realizer of phi |- psi still realizes the reindexed pair
                rep.tally((same & ~moved_masks) == 0, lambda i, f=f: {"law": "transport", "f": f})
                if j == m and f == tuple(range(m)):
                    rep.tally(np.all(moved == preds, axis=1), lambda i: {"law": "identity"})
                for g in all_maps(m, m) if m <= 2 else [tuple(range(m))]:
                    ga = np.asarray(g, dtype=np.int64)
                    composite = preds[:, ga[fa]]
                    stepwise = preds[:, ga][:, fa]
                    rep.tally(np.all(composite == stepwise, axis=1), lambda i, f=f, g=g: {"law": "composition", "f": f, "g": g})
    return rep


def check_indexed_iso(k: AbstractKrivineStructure, max_index: int = 3, cap: int = 14, seed: int = 0,
                      max_predicates: int = MAX_PREDICATES) -> CheckReport:
    """Uniform entailment of the structure and of its bullet algebra agree for each index size."""
    ks = RealizerSystem.for_aks(k, cap)
    a = aks_to_foca_bullet(k, cap)
    asys = RealizerSystem.for_oca(a)
    rep = CheckReport("indexed.iso")
    if tuple(a.points) != tuple(ks.masks):
        rep.record({"carrier_mismatch": True})
    for m in range(1, max_index + 1):
        preds, mode = predicates(ks.size, m, max_predicates, seed + m)
        _merge_mode(rep, mode, seed)
        rep.tally(ks.matrix(preds) == asys.matrix(preds), lambda i, m=m: {"m": m, "pair": divmod(i, len(preds))})
    return rep


def check_indexed_inclusion_equivalence(k: AbstractKrivineStructure, max_index: int = 3, cap: int = 14,
                                        seed: int = 0, max_predicates: int = MAX_PREDICATES) -> CheckReport:
    """Hat-closed predicates inside all predicates: order reflection and pointwise bar-closure isomorphism."""
    ns = k.stacks.size
    bullet = RealizerSystem.for_aks(k, cap)
    masks = np.asarray(bullet.masks, dtype=np.int64)
    # plain-implication realizers between arbitrary stack sets, indexed by mask
    allm = np.arange(1 << ns, dtype=np.int64)
    P, Q = np.meshgrid(allm, allm, indexing="ij")
    direct = k.qp & k.ops.stacks_perp(k.ops.imp(P, Q, "plain"))
    qp = list(iter_bits(k.qp))
    pair = np.zeros(direct.shape, dtype=np.uint64)
    for b, t in enumerate(qp):
        pair |= ((direct >> t) & 1).astype(np.uint64) << np.uint64(b)
    plain = RealizerSystem(pair, qp)
    bar = k.ops.bar(allm)
    rep = CheckReport("indexed.inclusion_equivalence")
    for m in range(1, max_index + 1):
        preds, mode = predicates(len(masks), m, max_predicates, seed + m)
        _merge_mode(rep, mode, seed)
        as_masks = masks[preds]
        rep.tally(bullet.matrix(preds) == plain.matrix(as_masks), lambda i, m=m: {"law": "reflects", "m": m})
        anyp, mode = predicates(1 << ns, m, max_predicates, seed + 10 + m)
        _merge_mode(rep, mode, seed)
        closed = bar[anyp]
        there = plain.masks_for(anyp, closed)
        back = plain.masks_for(closed, anyp)
        rep.tally((there != 0) & (back != 0), lambda i, m=m: {"law": "bar_iso", "m": m, "phi": anyp[i].tolist()})
    return rep


def check_indexed_equivalence(a: FiniteOca, max_index: int = 3, seed: int = 0,
                              max_family: int = 20000, samples: int = DEFAULT_SAMPLES,
                              max_predicates: int = MAX_PREDICATES) -> CheckReport:
    """Pointwise infimum from hat-closed predicates of the derived structure to predicates of ``a``.

    Checks, per index size, that it preserves and reflects entailment and
    that every predicate of ``a`` is hit exactly by its pointwise up-sets.
    Pseudo-naturality along every map between index sets is checked with
    explicit realizers both ways.
    """
    ka = foca_to_aks(a)
    fam, fam_mode = _second_level_family(ka, max_family, samples, seed)
    iota = np.asarray([int(sum(1 << int(y) for y in np.flatnonzero(a.leq[x]))) for x in range(a.n)], dtype=np.int64)
    pair = GaloisPair(a, tuple(int(v) for v in iota))
    rho = pair.rho_many(fam)
    asys = RealizerSystem.for_oca(a)
    rep = CheckReport("indexed.equivalence")
    _merge_mode(rep, fam_mode, seed)
    for m in range(1, max_index + 1):
        preds, mode = predicates(fam.size, m, max_predicates, seed + m)
        _merge_mode(rep, mode, seed)
        C = fam[preds]
        n = len(preds)
        # structure side: uniform quasi-proof over indices, realizer sets ANDed pointwise
        struct = np.full((n, n), ka.qp, dtype=np.int64)
        for i in range(m):
            struct &= realizer_masks(ka.rl, ka.qp, C[:, None, i], C[None, :, i])
        sig = rho[preds]
        alg = asys.matrix(sig)
        rep.tally((struct != 0) == alg, lambda i, m=m: {"law": "reflects", "m": m, "pair": divmod(i, n)})
        apreds, _ = predicates(a.n, m, max_predicates, seed + m)
        back = pair.rho_many(iota[apreds].reshape(-1)).reshape(apreds.shape)
        rep.tally(np.all(back == apreds, axis=1), lambda i, m=m: {"law": "essentially_surjective", "m": m})
        for j in range(1, max_index + 1):
            for f in all_maps(j, m):
                fa = np.asarray(f, dtype=np.int64)
                lhs = rho[preds[:, fa]]
                rhs = sig[:, fa]
                ok = (asys.masks_for(lhs, rhs) != 0) & (asys.masks_for(rhs, lhs) != 0)
                rep.tally(ok, lambda i, f=f: {"law": "pseudo_natural", "f": f})
    return rep


def oca_meet_table(a: FiniteOca) -> np.ndarray:
    p = pairing_p(a)
    return a.app[a.app[p]]


def check_oca_entailment(a: FiniteOca, max_index: int = 3, seed: int = 0,
                         max_predicates: int = MAX_PREDICATES) -> CheckReport:
    """Entailment laws on predicates of ``a`` with top the constant ``k`` and meet through pairing.

    ``notes["top_is_order_maximum"]`` flags whether ``k`` is also the top of the order.
    """
    rep = check_entailment_laws(RealizerSystem.for_oca(a), max_index, oca_meet_table(a), a.k, seed,
                                max_predicates=max_predicates)
    rep.notes["top_is_order_maximum"] = a.k == a.top
    return rep
