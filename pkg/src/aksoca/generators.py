"""Seeded instance generators: random saturated structures and finite-field vector polarities."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import numpy as np

from .aks import AbstractKrivineStructure, saturate
from .polarity import Carrier, RealizabilityLattice


@dataclass(frozen=True)
class GeneratorParams:
    n_terms: int
    n_stacks: int
    pole_density: Fraction | float = Fraction(1, 4)
    qp_seed_size: int = 1
    rng_seed: int = 0

    def __post_init__(self):
        if self.n_terms < 1 or self.n_stacks < 1:
            raise ValueError(f"carrier sizes must be positive, got {self.n_terms}x{self.n_stacks}")
        if not 0 <= self.pole_density <= 1:
            raise ValueError(f"pole_density must lie in [0, 1], got {self.pole_density}")
        if not 0 <= self.qp_seed_size <= self.n_terms:
            raise ValueError(f"qp_seed_size must lie in [0, {self.n_terms}], got {self.qp_seed_size}")
        if not 0 <= self.rng_seed < 1 << 64:
            raise ValueError("rng_seed must be a 64-bit unsigned integer")


def gen_random_aks(params: GeneratorParams) -> AbstractKrivineStructure:
    """Random push and application tables, a random pole seed, saturated.

    Every draw comes from one generator seeded with ``rng_seed`` in a fixed
    order, so equal parameters give equal structures.
    """
    rng = np.random.default_rng(params.rng_seed)
    nt, ns = params.n_terms, params.n_stacks
    push = rng.integers(0, ns, size=(nt, ns))
    app = rng.integers(0, nt, size=(nt, nt))
    K, S = (int(x) for x in rng.choice(nt, size=2, replace=nt < 2))
    seeds = rng.choice(nt, size=params.qp_seed_size, replace=False)
    density = float(params.pole_density)
    pole = rng.random((nt, ns)) < density
    if density >= 1:
        pole[:] = True
    qp = 0
    for t in seeds:
        qp |= 1 << int(t)
    rl = RealizabilityLattice(Carrier("terms", nt), Carrier("stacks", ns), pole, push)
    return saturate(AbstractKrivineStructure(rl, app, qp, K, S))


@dataclass(frozen=True)
class VectorPolarityParams:
    """Vectors of ``F_p^3`` as terms and stacks; ``shift`` selects the shifted push."""

    p: int = 2
    shift: tuple[int, int, int] | None = None

    def __post_init__(self):
        if self.p not in (2, 3):
            raise ValueError(f"only p = 2 or p = 3 are supported, got {self.p}")
        if self.shift is not None:
            if len(self.shift) != 3 or any(not 0 <= c < self.p for c in self.shift):
                raise ValueError(f"shift must be a vector of F_{self.p}^3, got {self.shift}")


def vector_index(v, p: int) -> int:
    """Dense index ``x + p*y + p^2*z`` of the vector ``(x, y, z)``."""
    return int(v[0] + p * v[1] + p * p * v[2])


def vector_of(i: int, p: int) -> tuple[int, int, int]:
    return (i % p, i // p % p, i // (p * p))


def gen_vector_polarity(params: VectorPolarityParams) -> RealizabilityLattice:
    """Orthogonality for the standard inner product, push ``<v, w - w0> (v x w)``.

    With no shift ``w0 = 0``. Labels spell the coordinates, e.g. ``"100"`` is
    the first basis vector.
    """
    p = params.p
    w0 = np.array(params.shift or (0, 0, 0))
    vs = np.array([vector_of(i, p) for i in range(p ** 3)])
    dots = vs @ vs.T % p
    pole = dots == 0
    shifted = (vs[:, None, :] * (vs[None, :, :] - w0)).sum(-1) % p
    cross = np.cross(vs[:, None, :], vs[None, :, :]) % p
    pushed = shifted[:, :, None] * cross % p
    push = pushed[..., 0] + p * pushed[..., 1] + p * p * pushed[..., 2]
    labels = tuple("".join(str(c) for c in v) for v in vs)
    return RealizabilityLattice(Carrier("terms", p ** 3, labels), Carrier("stacks", p ** 3, labels), pole, push)


def vector_labels(p: int) -> list[str]:
    return ["".join(str(c) for c in vector_of(i, p)) for i in range(p ** 3)]


@dataclass(frozen=True)
class HeytingParams:
    """Finite Heyting algebra of down-sets of a random poset, read as a structure.

    Terms and stacks are the down-sets, the pole is inclusion, push is the
    Heyting implication and application is meet. ``perturbation`` is the
    probability of adding each extra pole pair before saturation.
    """

    max_points: int = 3
    max_size: int = 6
    perturbation: Fraction | float = Fraction(0)
    rng_seed: int = 0

    def __post_init__(self):
        if not 1 <= self.max_points <= 5:
            raise ValueError(f"max_points must lie in [1, 5], got {self.max_points}")
        if self.max_size < 2:
            raise ValueError(f"max_size must be at least 2, got {self.max_size}")
        if not 0 <= self.perturbation <= 1:
            raise ValueError(f"perturbation must lie in [0, 1], got {self.perturbation}")
        if not 0 <= self.rng_seed < 1 << 64:
            raise ValueError("rng_seed must be a 64-bit unsigned integer")


def _down_sets(n: int, below: list[int]) -> list[int]:
    return [m for m in range(1 << n) if all(below[i] & ~m == 0 for i in range(n) if m >> i & 1)]


def gen_heyting_aks(params: HeytingParams) -> AbstractKrivineStructure:
    """Seeded structure over a Heyting algebra of down-sets, saturated.

    Posets are redrawn until the algebra has at most ``max_size`` elements
    (a one-point poset always qualifies). ``K`` and ``S`` are random
    elements and the quasi-proofs are generated by the top and one random
    element.
    """
    rng = np.random.default_rng(params.rng_seed)
    while True:
        n = int(rng.integers(1, params.max_points + 1))
        rel = np.triu(rng.random((n, n)) < 0.5, 1)
        for m in range(n):
            rel |= rel[:, [m]] & rel[[m], :]
        below = [int(sum(1 << j for j in range(n) if rel[j, i])) for i in range(n)]
        ds = _down_sets(n, below)
        if len(ds) <= params.max_size:
            break
    N = len(ds)
    index = {d: i for i, d in enumerate(ds)}
    arr = np.asarray(ds, dtype=np.int64)
    leq = (arr[:, None] & ~arr[None, :]) == 0
    meet = np.vectorize(index.__getitem__)(arr[:, None] & arr[None, :])
    # Heyting implication: the largest down-set c with c & a inside b
    imp = np.empty((N, N), dtype=np.int64)
    for i, a in enumerate(ds):
        for j, b in enumerate(ds):
            imp[i, j] = max((index[c] for c in ds if c & a & ~b == 0), key=lambda c: bin(ds[c]).count("1"))
    K, S, extra = (int(x) for x in rng.integers(0, N, size=3))
    pole = leq | (rng.random((N, N)) < float(params.perturbation))
    labels = tuple(format(d, "b").zfill(n)[::-1] for d in ds)
    rl = RealizabilityLattice(Carrier("terms", N, labels), Carrier("stacks", N, labels), pole, imp)
    qp = (1 << index[ds[-1]]) | (1 << extra)
    return saturate(AbstractKrivineStructure(rl, meet, qp, K, S))


def gen_random_rl(params: GeneratorParams) -> RealizabilityLattice:
    """Random pole at ``pole_density`` and random push table, no saturation."""
    rng = np.random.default_rng(params.rng_seed)
    nt, ns = params.n_terms, params.n_stacks
    push = rng.integers(0, ns, size=(nt, ns))
    pole = rng.random((nt, ns)) < float(params.pole_density)
    return RealizabilityLattice(Carrier("terms", nt), Carrier("stacks", ns), pole, push)
