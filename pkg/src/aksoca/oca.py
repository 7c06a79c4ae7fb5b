"""Finite ordered combinatory algebras, the sharp product, realizer search and the Heyting preorder.

A :class:`FiniteOca` is a finite complete lattice with total application
and implication tables, designated ``k`` and ``s`` (and optionally an
adjunctor ``e``) and a filter of distinguished elements. Classification
checks, in order of strength,

* ``PK``: ``k a b <= a``; ``PS``: ``s a b c <= a c (b c)``;
* ``PA``: ``a <= b -> c`` implies ``a b <= c``;
* ``PE``: ``a b <= c`` implies ``e a <= b -> c``;
* full adjunction: ``a b <= c`` implies ``a <= b -> c``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .aks import app_closure
from .errors import OcaStructureError
from .polarity import Carrier, iter_bits
from .reports import CheckReport


def _bool_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Boolean matrix product (any-of-and) through float32 counting."""
    return (a.astype(np.float32) @ b.astype(np.float32)) > 0.5


class FiniteOca:
    """Finite ordered combinatory algebra on ``range(carrier.size)``.

    ``points`` optionally records what each element stands for (for the
    constructed algebras, the stack mask of each closed subset).
    """

    def __init__(self, carrier: Carrier, leq, app, imp, k: int, s: int, e: int | None = None,
                 filter: int | Iterable[int] | None = None, points: tuple | None = None):
        n = carrier.size
        leq = np.asarray(leq, dtype=bool)
        app = np.asarray(app, dtype=np.int64)
        imp = np.asarray(imp, dtype=np.int64)
        for name, t in (("leq", leq), ("app", app), ("imp", imp)):
            if t.shape != (n, n):
                raise OcaStructureError(f"{name} has shape {t.shape}, expected {(n, n)}")
        for name, t in (("app", app), ("imp", imp)):
            if t.min() < 0 or t.max() >= n:
                raise OcaStructureError(f"{name} table has values outside the carrier")
        for name, x in (("k", k), ("s", s), ("e", e)):
            if x is not None and not 0 <= x < n:
                raise OcaStructureError(f"{name}={x} is not an element (carrier size {n})")
        self.carrier = carrier
        self.leq = _frozen(leq)
        self.app = _frozen(app)
        self.imp = _frozen(imp)
        self.k, self.s = int(k), int(s)
        self.e = None if e is None else int(e)
        if filter is None:
            fmask = 0
        elif isinstance(filter, (int, np.integer)):
            fmask = int(filter)
        else:
            fmask = sum(1 << int(x) for x in set(filter))
        if fmask < 0 or fmask >> n:
            raise OcaStructureError("filter mask has bits outside the carrier")
        self.filter = fmask
        self.points = points
        self._check_order()

    @property
    def n(self) -> int:
        return self.carrier.size

    def _check_order(self) -> None:
        leq = self.leq
        if not leq.diagonal().all():
            raise OcaStructureError("order is not reflexive")
        if np.any(leq & leq.T & ~np.eye(self.n, dtype=bool)):
            raise OcaStructureError("order is not antisymmetric")
        if np.any(_bool_matmul(leq, leq) & ~leq):
            raise OcaStructureError("order is not transitive")
        tops = np.flatnonzero(leq.all(axis=0))
        if tops.size != 1:
            raise OcaStructureError("order has no top element, so the empty set has no infimum")
        self.top = int(tops[0])
        # on a finite poset with a top, pairwise meets give every infimum
        lower = leq[:, None, :] & leq[:, :, None]  # [z, x, y]: z <= x and z <= y
        lb = lower.transpose(1, 2, 0).reshape(self.n * self.n, self.n)
        meet = self._greatest(lb)
        if np.any(meet < 0):
            i = int(np.flatnonzero(meet < 0)[0])
            raise OcaStructureError(f"elements {i // self.n} and {i % self.n} have no infimum")
        self.meet = _frozen(meet.reshape(self.n, self.n))

    def _greatest(self, members: np.ndarray) -> np.ndarray:
        """Greatest element of each row set of ``members`` (bool ``[m, n]``), or -1."""
        not_below = ~self.leq  # [z, g]: not z <= g
        bad = _bool_matmul(members, not_below)  # [i, g]: some member z with not z <= g
        ok = members & ~bad
        has = ok.any(axis=1)
        return np.where(has, ok.argmax(axis=1), -1)

    def inf_rows(self, members: np.ndarray) -> np.ndarray:
        """Infimum of each row set of ``members`` (bool ``[m, n]``); empty rows give the top."""
        members = np.asarray(members, dtype=bool)
        lower = ~_bool_matmul(members, ~self.leq.T)  # [i, z]: z <= every member of row i
        out = self._greatest(lower)
        if np.any(out < 0):
            raise OcaStructureError("a subset has no infimum")
        return out

    def inf(self, xs: Iterable[int]) -> int:
        row = np.zeros((1, self.n), dtype=bool)
        for x in xs:
            row[0, int(x)] = True
        return int(self.inf_rows(row)[0])

    def in_filter(self, x: int) -> bool:
        return bool(self.filter >> x & 1)

    def filter_elements(self) -> list[int]:
        return list(iter_bits(self.filter))

    def ap(self, *xs: int) -> int:
        out = xs[0]
        for x in xs[1:]:
            out = int(self.app[out, x])
        return out

    def __eq__(self, other):
        if not isinstance(other, FiniteOca):
            return NotImplemented
        # carrier names and labels are cosmetic
        return (self.n == other.n and np.array_equal(self.leq, other.leq)
                and np.array_equal(self.app, other.app) and np.array_equal(self.imp, other.imp)
                and (self.k, self.s, self.e, self.filter) == (other.k, other.s, other.e, other.filter))

    __hash__ = None

    def __repr__(self):
        return f"FiniteOca(n={self.n}, k={self.k}, s={self.s}, e={self.e}, filter={bin(self.filter).count('1')})"

    @cached_property
    def i(self) -> int:
        return self.ap(self.s, self.k, self.k)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


# -- classification -------------------------------------------------------------

class OcaClass(enum.IntEnum):
    QOCA = 1
    IOCA = 2
    FOCA = 3


def _triples(n: int):
    return np.indices((n, n, n)).reshape(3, -1)


def _law(name: str, ok: np.ndarray, labels: tuple[str, ...], shape) -> CheckReport:
    rep = CheckReport(name)
    rep.tally(ok, lambda i: dict(zip(labels, (int(v) for v in np.unravel_index(i, shape)))))
    return rep


def check_oca_laws(a: FiniteOca) -> dict[str, CheckReport]:
    """Every axiom as its own report, keyed by short name."""
    n, leq, app, imp = a.n, a.leq, a.app, a.imp
    A, B, C = (x.reshape(n, n, n) for x in _triples(n))
    out = {}
    # monotony: a <= a' gives the expected comparison, third index is the fixed argument
    out["monotone"] = CheckReport("oca.monotone")
    le = leq[A, B]
    for name, lo, hi in (("app_left", app[A, C], app[B, C]), ("app_right", app[C, A], app[C, B]),
                         ("imp_right", imp[C, A], imp[C, B]), ("imp_left", imp[B, C], imp[A, C])):
        out["monotone"].tally(~le | leq[lo, hi], lambda i, name=name: {"law": name, "triple": np.unravel_index(i, (n, n, n))})
    out["PK"] = _law("oca.PK", leq[app[app[a.k, A[:, :, 0]], B[:, :, 0]], A[:, :, 0]], ("a", "b"), (n, n))
    sabc = app[app[app[a.s, A], B], C]
    acbc = app[app[A, C], app[B, C]]
    out["PS"] = _law("oca.PS", leq[sabc, acbc], ("a", "b", "c"), (n, n, n))
    ab_le_c = leq[app[A, B], C]
    a_le_imp = leq[A, imp[B, C]]
    out["PA"] = _law("oca.PA", ~a_le_imp | ab_le_c, ("a", "b", "c"), (n, n, n))
    rep = CheckReport("oca.filter")
    rep.checked += 2
    for name, x in (("k", a.k), ("s", a.s)):
        if not a.in_filter(x):
            rep.record({"missing": name})
    f = np.array(a.filter_elements(), dtype=np.int64)
    if f.size:
        prod = app[f[:, None], f[None, :]]
        rep.tally((a.filter >> prod) & 1 == 1, lambda i: {"not_closed": (int(f[i // f.size]), int(f[i % f.size]))})
    out["filter"] = rep
    if a.e is not None:
        out["PE"] = _law("oca.PE", ~ab_le_c | leq[app[a.e, A], imp[B, C]], ("a", "b", "c"), (n, n, n))
    out["full_adjunction"] = _law("oca.full_adjunction", ~ab_le_c | a_le_imp, ("a", "b", "c"), (n, n, n))
    return out


def classify_oca(a: FiniteOca) -> tuple[OcaClass | None, list[CheckReport]]:
    """Strongest class whose axioms all hold, with one report per axiom.

    Order-theoretic failures raise :class:`OcaStructureError` at construction.
    ``None`` means even the basic axioms fail.
    """
    laws = check_oca_laws(a)
    reports = sorted(laws.values(), key=lambda r: r.name)
    base = all(laws[x].passed for x in ("monotone", "PK", "PS", "PA", "filter"))
    if not base:
        return None, reports
    if laws["full_adjunction"].passed:
        return OcaClass.FOCA, reports
    if "PE" in laws and laws["PE"].passed:
        return OcaClass.IOCA, reports
    return OcaClass.QOCA, reports


# -- sharp ------------------------------------------------------------------------

def sharp_table(a: FiniteOca) -> np.ndarray:
    """``x # y`` for all pairs: infimum of every ``c`` with ``x <= y -> c``."""
    n = a.n
    X, Y, C = (x.reshape(n, n, n) for x in _triples(n))
    members = a.leq[X, a.imp[Y, C]].reshape(n * n, n)
    return a.inf_rows(members).reshape(n, n)


def sharp(a: FiniteOca, x: int, y: int) -> int:
    return a.inf(c for c in range(a.n) if a.leq[x, a.imp[y, c]])


def check_sharp_laws(a: FiniteOca, cls: OcaClass | None = None) -> CheckReport:
    """``xy <= x # y`` always; ``(e x) # y <= x y`` with an adjunctor; equality in the full case."""
    cls = classify_oca(a)[0] if cls is None else cls
    n = a.n
    sh = sharp_table(a)
    X, Y = np.indices((n, n))
    rep = CheckReport("oca.sharp")
    rep.tally(a.leq[a.app, sh], lambda i: {"law": "app_below_sharp", "x": i // n, "y": i % n})
    if a.e is not None and cls is not None and cls >= OcaClass.IOCA:
        rep.tally(a.leq[sh[a.app[a.e, X], Y], a.app], lambda i: {"law": "adjunctor", "x": i // n, "y": i % n})
    if cls is OcaClass.FOCA:
        rep.tally(sh == a.app, lambda i: {"law": "sharp_equals_app", "x": i // n, "y": i % n})
    return rep


# -- filters, realizers and the Heyting preorder -----------------------------------

def filter_closure(a: FiniteOca, generators: int | Iterable[int] = 0) -> int:
    """Least application-closed set of elements containing the generators, ``k`` and ``s``."""
    if not isinstance(generators, (int, np.integer)):
        generators = sum(1 << int(x) for x in set(generators))
    return app_closure(a.app, int(generators) | 1 << a.k | 1 << a.s)


def realizer_table(a: FiniteOca, filter_mask: int | None = None) -> np.ndarray:
    """``r[x, y]``: first filter element ``f`` (by index) with ``f x <= y``, or -1."""
    fmask = a.filter if filter_mask is None else filter_mask
    f = np.array(list(iter_bits(fmask)), dtype=np.int64)
    n = a.n
    if f.size == 0:
        return np.full((n, n), -1, dtype=np.int64)
    ok = a.leq[a.app[f][:, :, None], np.arange(n)[None, None, :]]  # [f, x, y]
    first = ok.argmax(axis=0)
    return np.where(ok.any(axis=0), f[first], -1)


def sqsubseteq(a: FiniteOca, x: int, y: int) -> int | None:
    """A filter element ``f`` with ``f x <= y`` (the first by index), or ``None``."""
    for f in iter_bits(a.filter):
        if a.leq[a.app[f, x], y]:
            return f
    return None


@dataclass(frozen=True)
class HeytingPreorder:
    """A preorder with meet and implication tables; ``realizers[x, y]`` witnesses ``order[x, y]``."""

    order: np.ndarray
    realizers: np.ndarray
    meet: np.ndarray
    imp: np.ndarray
    top: int


def pairing_p(a: FiniteOca) -> int:
    """Value of the pairing combinator that takes ``x``, ``y``, ``z`` to ``z x y``."""
    from .polynomials import App, Var, eval_polynomial, lambda_star
    body = App(App(Var("z"), Var("x")), Var("y"))
    return eval_polynomial(a, lambda_star("x", lambda_star("y", lambda_star("z", body))), {})


def heyting_preorder(a: FiniteOca) -> HeytingPreorder:
    """Carrier of ``a`` ordered by realizability, meet via pairing, implication from ``a``."""
    r = realizer_table(a)
    p = pairing_p(a)
    meet = a.app[a.app[p]]  # meet[x, y] = p x y
    return HeytingPreorder(order=r >= 0, realizers=r, meet=meet, imp=np.array(a.imp), top=a.top)


def check_heyting_laws(a: FiniteOca, h: HeytingPreorder | None = None) -> CheckReport:
    """Preorder, meet, implication and top laws of the realizability order, plus refinement of ``<=``."""
    h = heyting_preorder(a) if h is None else h
    n = a.n
    o = h.order
    rep = CheckReport("oca.heyting")
    X, Y = np.indices((n, n))
    rep.tally(o.diagonal(), lambda i: {"law": "reflexive", "x": i})
    rep.tally(~_bool_matmul(o, o) | o, lambda i: {"law": "transitive", "x": i // n, "z": i % n})
    rep.tally(~a.leq | o, lambda i: {"law": "refines_order", "x": i // n, "y": i % n})
    m = h.meet
    rep.tally(o[m, X] & o[m, Y], lambda i: {"law": "meet_lower", "x": i // n, "y": i % n})
    # c below a and below b gives c below a meet b, over triples (c, a, b)
    Cc, Aa, Bb = (x.reshape(n, n, n) for x in _triples(n))
    rep.tally(~(o[Cc, Aa] & o[Cc, Bb]) | o[Cc, m[Aa, Bb]],
              lambda i: {"law": "meet_greatest", "cab": np.unravel_index(i, (n, n, n))})
    rep.tally(o[m[Aa, Bb], Cc] == o[Aa, h.imp[Bb, Cc]],
              lambda i: {"law": "implication", "abc": np.unravel_index(i, (n, n, n))})
    rep.tally(o[:, h.top], lambda i: {"law": "top_maximal", "x": i})
    rep.notes["top_in_filter"] = a.in_filter(h.top)
    rep.notes["k_maximal"] = bool(o[:, a.k].all())
    return rep
