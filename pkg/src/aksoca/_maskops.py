"""Vectorized mask operations over whole arrays of subsets.

Two interchangeable backends serve the law checks. When both carriers are
small every operation is precomputed into a lookup table indexed by mask
(built by doubling: the value on ``m | 1<<k`` combines the value on ``m``
with that of the singleton ``k``). Otherwise each call falls back to the
per-mask methods of the lattice, memoized and mapped over the array.
"""
from __future__ import annotations

from functools import cached_property, lru_cache
from typing import Callable, Sequence

import numpy as np

TABLE_LIMIT = 8
DEFAULT_BUDGET = 1 << 20
DEFAULT_SAMPLES = 4096


def or_table(singles: Sequence[int] | np.ndarray) -> np.ndarray:
    """``t[m]`` is the OR of ``singles[k]`` over the bits ``k`` of ``m``."""
    singles = np.asarray(singles, dtype=np.int64)
    n = singles.shape[0]
    t = np.zeros((1 << n,) + singles.shape[1:], dtype=np.int64)
    for k in range(n):
        t[1 << k:2 << k] = t[:1 << k] | singles[k]
    return t


def and_table(singles: Sequence[int] | np.ndarray, full) -> np.ndarray:
    """``t[m]`` is the AND of ``singles[k]`` over the bits of ``m``; ``t[0] = full``."""
    singles = np.asarray(singles, dtype=np.int64)
    n = singles.shape[0]
    t = np.empty((1 << n,) + singles.shape[1:], dtype=np.int64)
    t[0] = full
    for k in range(n):
        t[1 << k:2 << k] = t[:1 << k] & singles[k]
    return t


def bit_table(n: int) -> np.ndarray:
    """Boolean matrix ``b[m, k]`` telling whether bit ``k`` is set in ``m``."""
    m = np.arange(1 << n, dtype=np.int64)
    return ((m[:, None] >> np.arange(n)) & 1).astype(bool)


def subset_of(a, b) -> np.ndarray:
    return (np.asarray(a) & ~np.asarray(b)) == 0


def popcount(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    out = np.zeros(a.shape, dtype=np.int64)
    while np.any(a):
        out += a & 1
        a = a >> 1
    return out


class MaskOps:
    """Array-valued set operations of a realizability lattice (and optional application)."""

    def __init__(self, rl, app=None, table_limit: int = TABLE_LIMIT):
        self.rl = rl
        self.app = None if app is None else np.asarray(app, dtype=np.int64)
        self.nt = rl.terms.size
        self.ns = rl.stacks.size
        self.tabulated = self.nt <= table_limit and self.ns <= table_limit
        if not self.tabulated:
            self._direct = {}

    # -- tables -------------------------------------------------------------

    @cached_property
    def _t_tperp(self):
        return and_table(self.rl.rows, self.rl.stacks.full)

    @cached_property
    def _t_sperp(self):
        return and_table(self.rl.cols, self.rl.terms.full)

    @cached_property
    def _t_bar(self):
        return self._t_tperp[self._t_sperp]

    @cached_property
    def _t_hat(self):
        return or_table(self.rl.bar1)

    @cached_property
    def _t_tilde(self):
        P = np.arange(1 << self.ns, dtype=np.int64)
        out = np.zeros_like(P)
        for p, up in enumerate(self.rl.bar1):
            ok = ((P >> p) & 1).astype(bool) & ((up & ~P) == 0)
            out |= ok.astype(np.int64) << p
        return out

    @cached_property
    def _t_img(self):
        # per term: OR over stacks of the pushed singleton, then OR over terms
        push_bits = np.left_shift(np.int64(1), self.rl.push)
        per_term = np.stack([or_table(push_bits[t]) for t in range(self.nt)])
        return or_table(per_term)

    @cached_property
    def _t_cond(self):
        P = np.arange(1 << self.ns, dtype=np.int64)
        pre = np.zeros((self.nt, P.size), dtype=np.int64)
        for t in range(self.nt):
            for p in range(self.ns):
                pre[t] |= ((P >> int(self.rl.push[t, p])) & 1) << p
        # table indexed [L, P] first, then transposed to [P, L]
        return and_table(pre, self.rl.stacks.full).T.copy()

    @cached_property
    def _t_appimg(self):
        if self.app is None:
            raise ValueError("no application table attached")
        bits = np.left_shift(np.int64(1), self.app)
        per_term = np.stack([or_table(bits[t]) for t in range(self.nt)])
        return or_table(per_term)

    # -- direct fallback ----------------------------------------------------

    def _lift(self, name: str, fn: Callable, nargs: int):
        f = self._direct.get(name)
        if f is None:
            f = np.frompyfunc(lru_cache(maxsize=None)(fn), nargs, 1)
            self._direct[name] = f
        return f

    def _call(self, name, fn, *args):
        args = [np.asarray(a, dtype=np.int64) for a in args]
        out = self._lift(name, lambda *xs: fn(*map(int, xs)), len(args))(*args)
        return np.asarray(out, dtype=np.int64)

    def _app_image_direct(self, L1: int, L2: int) -> int:
        from .polarity import iter_bits
        out = 0
        ss = list(iter_bits(L2))
        for t in iter_bits(L1):
            for s in ss:
                out |= 1 << int(self.app[t, s])
        return out

    # -- public array API ---------------------------------------------------

    def terms_perp(self, L):
        if self.tabulated:
            return self._t_tperp[np.asarray(L)]
        return self._call("tperp", self.rl.terms_perp, L)

    def stacks_perp(self, P):
        if self.tabulated:
            return self._t_sperp[np.asarray(P)]
        return self._call("sperp", self.rl.stacks_perp, P)

    def bar(self, P):
        if self.tabulated:
            return self._t_bar[np.asarray(P)]
        return self._call("bar", self.rl.bar, P)

    def term_bar(self, L):
        """``^perp(L^perp)``, the closure on the term side."""
        return self.stacks_perp(self.terms_perp(L))

    def hat(self, P):
        if self.tabulated:
            return self._t_hat[np.asarray(P)]
        return self._call("hat", self.rl.hat, P)

    def tilde(self, P):
        if self.tabulated:
            return self._t_tilde[np.asarray(P)]
        return self._call("tilde", self.rl.tilde, P)

    def push_image(self, L, P):
        if self.tabulated:
            return self._t_img[np.asarray(L), np.asarray(P)]
        return self._call("img", self.rl.push_image, L, P)

    def conductor(self, P, L):
        if self.tabulated:
            return self._t_cond[np.asarray(P), np.asarray(L)]
        return self._call("cond", self.rl.conductor, P, L)

    def app_image(self, L1, L2):
        if self.app is None:
            raise ValueError("no application table attached")
        if self.tabulated:
            return self._t_appimg[np.asarray(L1), np.asarray(L2)]
        return self._call("appimg", self._app_image_direct, L1, L2)

    # -- derived operations on stack subsets ---------------------------------

    def push_variant(self, L, P, variant: str):
        r = self.push_image(L, P)
        return _close(self, r, variant)

    def conduct_variant(self, P, L, variant: str):
        r = self.conductor(P, L)
        if variant == "plain":
            return r
        if variant == "bullet":
            return self.tilde(r)
        if variant == "perp":
            return self.bar(r)
        raise ValueError(f"unknown variant {variant!r}")

    def imp(self, P, Q, variant: str = "plain"):
        return self.push_variant(self.stacks_perp(P), Q, variant)

    def appl(self, P, Q, variant: str = "plain"):
        return self.conduct_variant(P, self.stacks_perp(Q), variant)

    def clubsuit(self, P, L):
        return self.terms_perp(self.app_image(self.stacks_perp(P), L))

    def diamond(self, P, Q):
        return self.clubsuit(P, self.stacks_perp(Q))


def _close(ops: MaskOps, r, variant: str):
    if variant == "plain":
        return r
    if variant == "bullet":
        return ops.hat(r)
    if variant == "perp":
        return ops.bar(r)
    raise ValueError(f"unknown variant {variant!r}")


def all_masks(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def quantify(cands: Sequence[np.ndarray], budget: int = DEFAULT_BUDGET,
             samples: int = DEFAULT_SAMPLES, seed: int = 0):
    """Tuples drawn from the candidate arrays, one column per variable.

    Returns ``(columns, mode)``. With at most ``budget`` tuples every tuple is
    produced in lexicographic order of candidate position (``mode ==
    "exhaustive"``); otherwise ``samples`` tuples are drawn uniformly with a
    generator seeded by ``seed`` (``mode == "sampled"``).
    """
    cands = [np.asarray(c, dtype=np.int64) for c in cands]
    sizes = [c.size for c in cands]
    total = 1
    for s in sizes:
        total *= s
    if total == 0:
        return [c[:0] for c in cands], "exhaustive"
    if total <= budget:
        idx = np.indices(sizes).reshape(len(sizes), -1)
        return [c[i] for c, i in zip(cands, idx)], "exhaustive"
    rng = np.random.default_rng(seed)
    return [c[rng.integers(0, c.size, samples)] for c in cands], "sampled"
