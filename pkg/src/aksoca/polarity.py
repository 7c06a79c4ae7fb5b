"""Finite realizability lattices, polar maps and the bar / hat / tilde operators.

Subsets of a carrier are bit masks over the dense index range ``0..size-1``.
The :class:`RealizabilityLattice` methods work on raw ``int`` masks and are
what the rest of the package builds on; the module-level functions are the
checked public API taking and returning :class:`Subset` values.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CarrierMismatchError, EnumerationCapError, FamilyMembershipError

DEFAULT_CAP = 14


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << int(i)
    return m


@dataclass(frozen=True)
class Carrier:
    """A finite set identified with ``range(size)``; labels are cosmetic."""

    name: str
    size: int
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"carrier {self.name!r} must be nonempty, got size {self.size}")
        if self.labels is not None and len(self.labels) != self.size:
            raise ValueError(f"carrier {self.name!r}: {len(self.labels)} labels for {self.size} elements")

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def index(self, item: int | str) -> int:
        if isinstance(item, str):
            if self.labels is not None and item in self.labels:
                return self.labels.index(item)
            item = int(item)
        if not 0 <= item < self.size:
            raise IndexError(f"{item} is not an element of carrier {self.name!r} (size {self.size})")
        return item


class Subset:
    """A subset of a carrier, stored as a bit mask."""

    __slots__ = ("carrier", "mask")

    def __init__(self, carrier: Carrier, mask: int):
        if mask < 0 or mask >> carrier.size:
            raise ValueError(f"mask {mask:#x} has bits outside carrier {carrier.name!r}")
        self.carrier = carrier
        self.mask = int(mask)

    @classmethod
    def of(cls, carrier: Carrier, items: Iterable[int | str] = ()) -> "Subset":
        return cls(carrier, mask_of(carrier.index(i) for i in items))

    @classmethod
    def empty(cls, carrier: Carrier) -> "Subset":
        return cls(carrier, 0)

    @classmethod
    def full(cls, carrier: Carrier) -> "Subset":
        return cls(carrier, carrier.full)

    def members(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.mask))

    def labels(self) -> tuple[str, ...]:
        return tuple(self.carrier.label(i) for i in iter_bits(self.mask))

    def __iter__(self):
        return iter_bits(self.mask)

    def __len__(self):
        return self.mask.bit_count()

    def __contains__(self, i) -> bool:
        return bool(self.mask >> self.carrier.index(i) & 1)

    def _same(self, other: "Subset") -> None:
        if not isinstance(other, Subset):
            raise TypeError(f"expected Subset, got {type(other).__name__}")
        if other.carrier != self.carrier:
            raise CarrierMismatchError(f"{self.carrier.name!r} vs {other.carrier.name!r}")

    def __eq__(self, other):
        if not isinstance(other, Subset):
            return NotImplemented
        return self.carrier == other.carrier and self.mask == other.mask

    def __hash__(self):
        return hash((self.carrier, self.mask))

    def __le__(self, other: "Subset") -> bool:
        self._same(other)
        return self.mask & ~other.mask == 0

    def __ge__(self, other: "Subset") -> bool:
        return other <= self

    def __or__(self, other: "Subset") -> "Subset":
        self._same(other)
        return Subset(self.carrier, self.mask | other.mask)

    def __and__(self, other: "Subset") -> "Subset":
        self._same(other)
        return Subset(self.carrier, self.mask & other.mask)

    def __sub__(self, other: "Subset") -> "Subset":
        self._same(other)
        return Subset(self.carrier, self.mask & ~other.mask)

    def complement(self) -> "Subset":
        return Subset(self.carrier, self.carrier.full ^ self.mask)

    def __repr__(self):
        return f"{self.carrier.name}{{{','.join(self.labels())}}}"


class ClosureKind(enum.Enum):
    """Which closed family a subset of stacks belongs to."""

    PLAIN = "plain"
    PERP = "perp"
    BULLET = "bullet"


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


class RealizabilityLattice:
    """Terms, stacks, a pole relation and a total push map ``terms x stacks -> stacks``.

    ``pole[t, p]`` says the term ``t`` is orthogonal to the stack ``p`` and
    ``push[t, p]`` is the stack ``t . p``.
    """

    def __init__(self, terms: Carrier, stacks: Carrier, pole, push):
        pole = np.asarray(pole, dtype=bool)
        push = np.asarray(push, dtype=np.int64)
        shape = (terms.size, stacks.size)
        if pole.shape != shape:
            raise ValueError(f"pole has shape {pole.shape}, expected {shape}")
        if push.shape != shape:
            raise ValueError(f"push has shape {push.shape}, expected {shape}")
        if push.size and (push.min() < 0 or push.max() >= stacks.size):
            raise ValueError("push table has values outside the stack carrier")
        self.terms = terms
        self.stacks = stacks
        self.pole = _readonly(pole)
        self.push = _readonly(push)
        # rows[t]: stacks orthogonal to t; cols[p]: terms orthogonal to p
        self.rows = tuple(mask_of(np.flatnonzero(pole[t])) for t in range(terms.size))
        self.cols = tuple(mask_of(np.flatnonzero(pole[:, p])) for p in range(stacks.size))
        self._push_list = tuple(tuple(int(x) for x in push[t]) for t in range(terms.size))
        self.bar1 = tuple(self.bar(1 << p) for p in range(stacks.size))

    @classmethod
    def from_tables(cls, pole, push, term_labels=None, stack_labels=None):
        pole = np.asarray(pole, dtype=bool)
        nt, ns = pole.shape
        return cls(Carrier("terms", nt, _tuple(term_labels)), Carrier("stacks", ns, _tuple(stack_labels)),
                   pole, push)

    def __eq__(self, other):
        if not isinstance(other, RealizabilityLattice):
            return NotImplemented
        return (self.terms == other.terms and self.stacks == other.stacks
                and np.array_equal(self.pole, other.pole) and np.array_equal(self.push, other.push))

    __hash__ = None

    def __repr__(self):
        return (f"{type(self).__name__}(terms={self.terms.size}, stacks={self.stacks.size}, "
                f"pole_pairs={int(self.pole.sum())})")

    # -- raw mask operations ------------------------------------------------

    def terms_perp(self, L: int) -> int:
        """``L^perp``: stacks orthogonal to every term in ``L``."""
        out = self.stacks.full
        for t in iter_bits(L):
            out &= self.rows[t]
        return out

    def stacks_perp(self, P: int) -> int:
        """``^perp P``: terms orthogonal to every stack in ``P``."""
        out = self.terms.full
        for p in iter_bits(P):
            out &= self.cols[p]
        return out

    def bar(self, P: int) -> int:
        return self.terms_perp(self.stacks_perp(P))

    def hat(self, P: int) -> int:
        out = 0
        for p in iter_bits(P):
            out |= self.bar1[p]
        return out

    def tilde(self, P: int) -> int:
        out = 0
        for p in iter_bits(P):
            if self.bar1[p] & ~P == 0:
                out |= 1 << p
        return out

    def push_image(self, L: int, P: int) -> int:
        out = 0
        pl = self._push_list
        ps = list(iter_bits(P))
        for t in iter_bits(L):
            row = pl[t]
            for p in ps:
                out |= 1 << row[p]
        return out

    def conductor(self, P: int, L: int) -> int:
        """``P * L``: stacks ``p`` with ``t . p`` in ``P`` for every ``t`` in ``L``."""
        pl = self._push_list
        ts = list(iter_bits(L))
        out = 0
        for p in range(self.stacks.size):
            if all(P >> pl[t][p] & 1 for t in ts):
                out |= 1 << p
        return out

    def specialization_up(self, p: int) -> int:
        """Stacks ``q`` with ``p <= q`` in the specialization preorder, i.e. ``bar({p})``."""
        return self.bar1[p]


def _tuple(labels):
    return tuple(labels) if labels is not None else None


# -- checked Subset API -------------------------------------------------------

def _expect(s: Subset, carrier: Carrier, what: str) -> None:
    if not isinstance(s, Subset):
        raise TypeError(f"{what} must be a Subset, got {type(s).__name__}")
    if s.carrier != carrier:
        raise CarrierMismatchError(f"{what} lives on {s.carrier.name!r}, expected {carrier.name!r}")


def perp_of_terms(rl: RealizabilityLattice, L: Subset) -> Subset:
    _expect(L, rl.terms, "L")
    return Subset(rl.stacks, rl.terms_perp(L.mask))


def perp_of_stacks(rl: RealizabilityLattice, P: Subset) -> Subset:
    _expect(P, rl.stacks, "P")
    return Subset(rl.terms, rl.stacks_perp(P.mask))


def closure_bar(rl: RealizabilityLattice, P: Subset) -> Subset:
    _expect(P, rl.stacks, "P")
    return Subset(rl.stacks, rl.bar(P.mask))


def closure_hat(rl: RealizabilityLattice, P: Subset) -> Subset:
    """Union of the bar-closures of the singletons of ``P``."""
    _expect(P, rl.stacks, "P")
    return Subset(rl.stacks, rl.hat(P.mask))


def interior_tilde(rl: RealizabilityLattice, P: Subset) -> Subset:
    """Stacks of ``P`` whose singleton bar-closure stays inside ``P``."""
    _expect(P, rl.stacks, "P")
    return Subset(rl.stacks, rl.tilde(P.mask))


def classify(rl: RealizabilityLattice, P: Subset) -> ClosureKind:
    _expect(P, rl.stacks, "P")
    if rl.bar(P.mask) == P.mask:
        return ClosureKind.PERP
    if rl.hat(P.mask) == P.mask:
        return ClosureKind.BULLET
    return ClosureKind.PLAIN


# -- closed families ----------------------------------------------------------

@dataclass(frozen=True)
class ClosedFamily:
    """An enumerated family of subsets of stacks, members sorted by mask."""

    carrier: Carrier
    kind: ClosureKind
    masks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "_index", {m: i for i, m in enumerate(self.masks)})

    def __len__(self):
        return len(self.masks)

    def __iter__(self):
        return (Subset(self.carrier, m) for m in self.masks)

    def __contains__(self, s) -> bool:
        if isinstance(s, Subset):
            return s.carrier == self.carrier and s.mask in self._index
        return s in self._index

    def index(self, s: Subset | int) -> int:
        m = s.mask if isinstance(s, Subset) else s
        try:
            return self._index[m]
        except KeyError:
            raise FamilyMembershipError(f"{s!r} is not in the {self.kind.value} family") from None

    def subset(self, i: int) -> Subset:
        return Subset(self.carrier, self.masks[i])

    def sup(self, X: Sequence[Subset]) -> Subset:
        u = self._union(X)
        if self.kind is ClosureKind.PERP:
            # least member above the union; the family is intersection closed
            out = self.carrier.full
            for m in self.masks:
                if u & ~m == 0:
                    out &= m
            return Subset(self.carrier, out)
        return Subset(self.carrier, u)

    def inf(self, X: Sequence[Subset]) -> Subset:
        out = self.carrier.full
        for s in self._members(X):
            out &= s.mask
        return Subset(self.carrier, out)

    def _members(self, X):
        for s in X:
            _expect(s, self.carrier, "member")
            if s.mask not in self._index:
                raise FamilyMembershipError(f"{s!r} is not in the {self.kind.value} family")
            yield s

    def _union(self, X) -> int:
        u = 0
        for s in self._members(X):
            u |= s.mask
        return u


def enumerate_closed(rl: RealizabilityLattice, kind: ClosureKind, cap: int = DEFAULT_CAP) -> ClosedFamily:
    """Every subset of stacks closed for ``kind``.

    ``PERP`` enumerates intersections of the polars ``{t}^perp``; ``BULLET``
    enumerates up-sets of the specialization preorder ``p <= q iff q in bar({p})``;
    ``PLAIN`` is the full powerset.
    """
    n = rl.stacks.size
    if n > cap:
        raise EnumerationCapError(f"{n} stacks exceeds the enumeration cap {cap}")
    if kind is ClosureKind.PLAIN:
        masks = range(1 << n)
    elif kind is ClosureKind.PERP:
        masks = intersection_closure(rl.rows, rl.stacks.full)
    else:
        masks = up_sets(n, rl.bar1)
    return ClosedFamily(rl.stacks, kind, tuple(sorted(masks)))


def enumerate_closed_terms(rl: RealizabilityLattice, cap: int = DEFAULT_CAP) -> tuple[int, ...]:
    """Masks of the term subsets equal to their double polar, sorted."""
    if rl.terms.size > cap:
        raise EnumerationCapError(f"{rl.terms.size} terms exceeds the enumeration cap {cap}")
    return tuple(sorted(intersection_closure(rl.cols, rl.terms.full)))


def intersection_closure(generators: Sequence[int], full: int) -> set[int]:
    """All intersections of the generator masks, including the empty intersection ``full``."""
    seen = {full}
    frontier = [full]
    while frontier:
        nxt = []
        for m in frontier:
            for g in generators:
                c = m & g
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return seen


def up_sets(n: int, up: Sequence[int]) -> list[int]:
    """All up-closed subsets of ``range(n)`` for the preorder given by ``up[i]`` (the up-set of ``i``)."""
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
            continue
        i = (free & -free).bit_length() - 1
        stack.append((inc, exc | down[i]))
        stack.append((inc | up[i], exc))
    return out


def sup_inf_in_family(family: ClosedFamily, kind: ClosureKind, X: Sequence[Subset], which: str) -> Subset:
    """Supremum or infimum of ``X`` inside ``family`` ordered by inclusion."""
    if kind is not family.kind:
        raise ValueError(f"family is {family.kind.value}, not {kind.value}")
    if which == "sup":
        return family.sup(X)
    if which == "inf":
        return family.inf(X)
    raise ValueError(f"which must be 'sup' or 'inf', got {which!r}")


# -- law checks ---------------------------------------------------------------

def check_polarity_laws(rl: RealizabilityLattice, budget: int | None = None, samples: int | None = None,
                        seed: int = 0) -> list:
    """Closure, interior, Alexandroff and reflection laws over all (or sampled) subsets.

    Single-subset laws range over every subset of stacks (and of terms for
    the double-perp law on terms); two-subset laws range over pairs.
    """
    from ._maskops import DEFAULT_BUDGET, DEFAULT_SAMPLES, MaskOps, all_masks, quantify, subset_of
    from .reports import CheckReport

    budget = DEFAULT_BUDGET if budget is None else budget
    samples = DEFAULT_SAMPLES if samples is None else samples
    ops = MaskOps(rl)
    (P,), mode1 = quantify([all_masks(rl.stacks.size)], budget, samples, seed)
    (L,), _ = quantify([all_masks(rl.terms.size)], budget, samples, seed)
    (A, B), mode2 = quantify([all_masks(rl.stacks.size)] * 2, budget, samples, seed + 1)

    def new(name, mode):
        return CheckReport(name, mode=mode, seed=seed if mode == "sampled" else None)

    def one(i):
        return {"P": int(P[i])}

    def two(i):
        return {"P": int(A[i]), "Q": int(B[i])}

    reports = []
    bar, hat, tilde = ops.bar(P), ops.hat(P), ops.tilde(P)
    sperp = ops.stacks_perp(P)

    r = new("polarity.galois", mode1)
    r.tally(subset_of(L, ops.term_bar(L)), lambda i: {"L": int(L[i])})
    r.tally(subset_of(P, bar), one)
    r.tally(ops.terms_perp(ops.term_bar(L)) == ops.terms_perp(L), lambda i: {"L": int(L[i])})
    reports.append(r)

    r = new("polarity.closure_chain", mode1)
    r.tally(subset_of(tilde, P) & subset_of(P, hat) & subset_of(hat, bar), one)
    reports.append(r)

    r = new("polarity.closure_idempotent", mode1)
    r.tally((ops.bar(bar) == bar) & (ops.hat(hat) == hat) & (ops.tilde(tilde) == tilde), one)
    reports.append(r)

    r = new("polarity.hat_invisible", mode1)
    r.tally((ops.stacks_perp(hat) == sperp) & (ops.bar(hat) == bar), one)
    reports.append(r)

    r = new("polarity.perp_implies_bullet", mode1)
    r.tally(~(bar == P) | (hat == P), one)
    reports.append(r)

    r = new("polarity.open_equals_closed", mode1)
    r.tally((tilde == P) == (hat == P), one)
    reports.append(r)

    bA, bB, hA, hB = ops.bar(A), ops.bar(B), ops.hat(A), ops.hat(B)
    r = new("polarity.alexandroff_union", mode2)
    r.tally(ops.hat(A | B) == (hA | hB), two)
    reports.append(r)

    r = new("polarity.monotone", mode2)
    le = subset_of(A, B)
    r.tally(~le | (subset_of(bA, bB) & subset_of(hA, hB) & subset_of(ops.tilde(A), ops.tilde(B))
                   & subset_of(ops.stacks_perp(B), ops.stacks_perp(A))), two)
    reports.append(r)

    r = new("polarity.reflection", mode2)
    q_bar, q_hat, p_hat = bB == B, hB == B, hA == A
    r.tally(~q_bar | (le == subset_of(bA, B)), two)
    r.tally(~q_hat | (le == subset_of(hA, B)), two)
    r.tally(~p_hat | (le == subset_of(A, ops.tilde(B))), two)
    reports.append(r)
    return reports
