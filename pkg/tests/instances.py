"""Seeded instance families shared by the unit and acceptance tests."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from aksoca.polarity import RealizabilityLattice
from aksoca.generators import (GeneratorParams, HeytingParams, VectorPolarityParams, gen_heyting_aks, gen_random_aks,
                               gen_random_rl, gen_vector_polarity)

from oracles import BruteAKS

DENSITIES = (Fraction(1, 8), Fraction(1, 4), Fraction(1, 2))
PERTURBATIONS = (Fraction(0), Fraction(1, 20), Fraction(1, 10))


def structure(i: int):
    """Instance ``i`` of the 100-structure family: even seeds Heyting-based, odd seeds random tables."""
    j = i // 2
    if i % 2 == 0:
        return gen_heyting_aks(HeytingParams(perturbation=PERTURBATIONS[j % 3], rng_seed=i))
    return gen_random_aks(GeneratorParams(1 + j % 6, 1 + (j // 6) % 6, DENSITIES[j % 3], 1, i))


def structures(n: int = 100):
    return [structure(i) for i in range(n)]


def random_rl(i: int, max_size: int = 6):
    j = i // 3
    return gen_random_rl(GeneratorParams(1 + j % max_size, 1 + (j // max_size) % max_size, DENSITIES[i % 3], 0, i))


def f2(shift=None):
    return gen_vector_polarity(VectorPolarityParams(2, shift))


def brute_of(k) -> BruteAKS:
    """Oracle copy of a package structure built from its raw tables."""
    rl = k.rl
    pairs = {(int(t), int(p)) for t, p in zip(*rl.pole.nonzero())}
    return BruteAKS(rl.terms.size, rl.stacks.size, pairs, rl.push.tolist(), k.app.tolist(),
                    [i for i in range(rl.terms.size) if k.qp >> i & 1], k.K, k.S)


@st.composite
def small_rls(draw, max_terms: int = 4, max_stacks: int = 4):
    """Arbitrary lattices with random pole and push tables."""
    nt = draw(st.integers(1, max_terms))
    ns = draw(st.integers(1, max_stacks))
    pole = draw(st.lists(st.booleans(), min_size=nt * ns, max_size=nt * ns))
    push = draw(st.lists(st.integers(0, ns - 1), min_size=nt * ns, max_size=nt * ns))
    return RealizabilityLattice.from_tables(np.array(pole).reshape(nt, ns), np.array(push).reshape(nt, ns))
