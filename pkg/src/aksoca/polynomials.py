"""Combinatory polynomials, bracket abstraction and the beta inequality.

Polynomials are trees of variables, constants (elements of a given algebra),
the combinator symbols ``k``, ``s``, ``e`` and binary application. Text form
uses juxtaposition for application, associating to the left::

    s (k x) (s k k)

Identifiers ``k``, ``s`` and ``e`` are combinators, other identifiers are
variables and ``#n`` is the constant element ``n``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import UnboundVariableError
from .reports import CheckReport

COMBINATORS = ("k", "s", "e")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Comb:
    name: str

    def __post_init__(self):
        if self.name not in COMBINATORS:
            raise ValueError(f"unknown combinator {self.name!r}")


@dataclass(frozen=True)
class App:
    fun: "Polynomial"
    arg: "Polynomial"


Polynomial = Var | Const | Comb | App

K, S = Comb("k"), Comb("s")


def app(*terms: Polynomial) -> Polynomial:
    out = terms[0]
    for t in terms[1:]:
        out = App(out, t)
    return out


def lambda_star(y: str, t: Polynomial) -> Polynomial:
    """Abstract the variable ``y`` out of ``t`` by the three-clause translation."""
    if isinstance(t, App):
        return App(App(S, lambda_star(y, t.fun)), lambda_star(y, t.arg))
    if t == Var(y):
        return App(App(S, K), K)
    return App(K, t)


def free_vars(t: Polynomial) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, App):
        return free_vars(t.fun) | free_vars(t.arg)
    return frozenset()


def substitute(t: Polynomial, y: str, u: Polynomial) -> Polynomial:
    if isinstance(t, Var):
        return u if t.name == y else t
    if isinstance(t, App):
        return App(substitute(t.fun, y, u), substitute(t.arg, y, u))
    return t


def depth(t: Polynomial) -> int:
    """Height of the tree; a single atom has depth 1."""
    if isinstance(t, App):
        return 1 + max(depth(t.fun), depth(t.arg))
    return 1


def _atom_value(a, t) -> int:
    if isinstance(t, Const):
        if not 0 <= t.value < a.n:
            raise ValueError(f"constant #{t.value} is not an element (carrier size {a.n})")
        return t.value
    if t.name == "e" and a.e is None:
        raise ValueError("the algebra has no adjunctor e")
    return getattr(a, t.name)


def eval_polynomial(a, t: Polynomial, env: Mapping[str, int]) -> int:
    """Value of ``t`` in the algebra ``a``, reading variables from ``env``."""
    if isinstance(t, App):
        return int(a.app[eval_polynomial(a, t.fun, env), eval_polynomial(a, t.arg, env)])
    if isinstance(t, Var):
        try:
            return int(env[t.name])
        except KeyError:
            raise UnboundVariableError(f"variable {t.name!r} is not bound") from None
    return _atom_value(a, t)


class GridEvaluator:
    """Evaluates polynomials over a grid of environments, one array axis per variable."""

    def __init__(self, a, axes: Mapping[str, int]):
        self.a = a
        self.axes = dict(axes)
        self.ndim = len(self.axes) and max(self.axes.values()) + 1
        self._memo: dict = {}

    def var(self, name: str) -> np.ndarray:
        if name not in self.axes:
            raise UnboundVariableError(f"variable {name!r} is not bound")
        shape = [1] * self.ndim
        shape[self.axes[name]] = self.a.n
        return np.arange(self.a.n).reshape(shape)

    def __call__(self, t: Polynomial) -> np.ndarray:
        hit = self._memo.get(t)
        if hit is not None:
            return hit
        if isinstance(t, App):
            out = self.a.app[self(t.fun), self(t.arg)]
        elif isinstance(t, Var):
            out = self.var(t.name)
        else:
            out = np.array(_atom_value(self.a, t)).reshape([1] * self.ndim)
        self._memo[t] = out
        return out


def check_beta_inequality(a, t: Polynomial, y: str, budget: int = 1 << 20, samples: int = 4096,
                          seed: int = 0) -> CheckReport:
    """``(lambda* y. t) u <= t[y := u]`` for every environment of the free variables and every ``u``."""
    names = sorted(free_vars(t) - {y}) + [y]
    rep = CheckReport("oca.beta")
    lam = lambda_star(y, t)
    if a.n ** len(names) <= budget:
        ev = GridEvaluator(a, {name: i for i, name in enumerate(names)})
        u = ev.var(y)
        lhs = a.app[ev(lam), u]
        rhs = ev(t)
        ok = np.broadcast_to(a.leq[lhs, rhs], (a.n,) * len(names))
        rep.tally(ok, lambda i: dict(zip(names, (int(v) for v in np.unravel_index(i, ok.shape)))))
        return rep
    rep.mode, rep.seed = "sampled", seed
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, a.n, size=(samples, len(names)))
    ok = np.empty(samples, dtype=bool)
    for j, row in enumerate(draws):
        env = dict(zip(names, (int(v) for v in row)))
        uval = env.pop(y)
        ok[j] = a.leq[a.app[eval_polynomial(a, lam, env), uval], eval_polynomial(a, t, {**env, y: uval})]
    rep.tally(ok, lambda i: dict(zip(names, (int(v) for v in draws[i]))))
    return rep


def polynomials_up_to(max_depth: int, atoms) -> list[list[Polynomial]]:
    """Trees by exact depth: ``layers[d]`` holds every tree of depth ``d + 1``."""
    layers = [list(atoms)]
    upto = list(atoms)
    for _ in range(1, max_depth):
        prev = layers[-1]
        older = upto[:len(upto) - len(prev)]
        new = [App(p, q) for p in prev for q in upto] + [App(p, q) for p in older for q in prev]
        layers.append(new)
        upto = upto + new
    return layers


def check_beta_exhaustive(a, max_depth: int = 4, variables=("x", "y"), combinators=("k", "s"),
                          y: str = "y") -> CheckReport:
    """Beta inequality for every polynomial up to ``max_depth`` over the given atoms, all environments.

    Trees of depth below ``max_depth`` are evaluated once and cached; the
    deepest layer is formed on the fly as applications of cached trees, so
    both ``t`` and its abstraction are computed from cached pieces.
    """
    atoms = [Var(v) for v in variables] + [Comb(c) for c in combinators]
    others = [v for v in variables if v != y]
    axes = {v: i for i, v in enumerate(others)}
    axes[y] = len(others)
    ev = GridEvaluator(a, axes)
    shape = (a.n,) * len(axes)
    u = ev.var(y)
    layers = polynomials_up_to(max_depth - 1, atoms) if max_depth > 1 else [atoms]
    cached = [t for layer in layers for t in layer]
    val = np.stack([np.broadcast_to(ev(t), shape) for t in cached])
    lam = np.stack([np.broadcast_to(ev(lambda_star(y, t)), shape) for t in cached])
    rep = CheckReport("oca.beta_exhaustive")
    rep.notes["polynomials"] = 0

    def check(tvals, lvals, describe):
        ok = a.leq[a.app[lvals, u], tvals]
        rep.tally(ok.reshape(ok.shape[0], -1).all(axis=1), describe)
        rep.notes["polynomials"] += ok.shape[0]

    check(val, lam, lambda i: {"t": format_polynomial(cached[i])})
    if max_depth > 1:
        n_top = len(layers[-1])
        top = np.arange(len(cached) - n_top, len(cached))
        full = np.arange(len(cached))
        s = a.s
        for pi in range(len(cached)):
            # pairs (p, q) with at least one side of the deepest cached layer
            qs = full if pi >= len(cached) - n_top else top
            tv = a.app[val[pi][None], val[qs]]
            lv = a.app[a.app[s, lam[pi]][None], lam[qs]]
            check(tv, lv, lambda i, pi=pi, qs=qs: {"t": format_polynomial(App(cached[pi], cached[int(qs[i])]))})
    return rep


# -- text form ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\()|(\))|(#\d+)|([A-Za-z_][A-Za-z0-9_']*))")


def parse_polynomial(text: str) -> Polynomial:
    """Parse the juxtaposition syntax; raises ``ValueError`` with the offending column."""
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            bad = len(text) - len(text[pos:].lstrip())
            raise ValueError(f"column {bad + 1}: unexpected character {text[bad]!r}")
        tokens.append((m.lastindex, m.group(m.lastindex), m.start(m.lastindex) + 1))
        pos = m.end()
    i = 0

    def seq():
        nonlocal i
        out = None
        while i < len(tokens) and tokens[i][0] != 2:
            kind, tok, col = tokens[i]
            i += 1
            if kind == 1:
                node = seq()
                if i >= len(tokens):
                    raise ValueError(f"column {col}: unclosed parenthesis")
                i += 1
            elif kind == 3:
                node = Const(int(tok[1:]))
            else:
                node = Comb(tok) if tok in COMBINATORS else Var(tok)
            out = node if out is None else App(out, node)
        if out is None:
            col = tokens[i][2] if i < len(tokens) else len(text) + 1
            raise ValueError(f"column {col}: empty expression")
        return out

    result = seq()
    if i < len(tokens):
        raise ValueError(f"column {tokens[i][2]}: unmatched closing parenthesis")
    return result


def format_polynomial(t: Polynomial) -> str:
    if isinstance(t, App):
        arg = format_polynomial(t.arg)
        if isinstance(t.arg, App):
            arg = f"({arg})"
        return f"{format_polynomial(t.fun)} {arg}"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return f"#{t.value}"
    return t.name
