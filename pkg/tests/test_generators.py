from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from aksoca.aks import validate_aks
from aksoca.generators import (GeneratorParams, HeytingParams, VectorPolarityParams, gen_heyting_aks, gen_random_aks,
                               gen_random_rl, gen_vector_polarity, vector_index, vector_labels, vector_of)
from aksoca.instance_io import serialize_instance

from oracles import f2_rl, label, vec_f2


@pytest.mark.parametrize("seed", range(50))
def test_generators_are_deterministic(seed):
    p = GeneratorParams(1 + seed % 5, 1 + seed % 4, Fraction(1, 3), 1, seed)
    h = HeytingParams(perturbation=Fraction(1, 10), rng_seed=seed)
    assert serialize_instance(gen_random_aks(p)) == serialize_instance(gen_random_aks(p))
    assert serialize_instance(gen_heyting_aks(h)) == serialize_instance(gen_heyting_aks(h))
    assert serialize_instance(gen_random_rl(p)) == serialize_instance(gen_random_rl(p))


def test_different_seeds_differ_somewhere():
    texts = {serialize_instance(gen_random_aks(GeneratorParams(4, 4, Fraction(1, 4), 1, s))) for s in range(10)}
    assert len(texts) > 1


def test_density_zero_leaves_only_forced_pairs():
    k = gen_random_aks(GeneratorParams(4, 4, 0, 1, 3))
    assert not k.rl.pole.any()
    assert not gen_random_rl(GeneratorParams(4, 4, 0, 0, 3)).pole.any()


def test_density_one_fills_the_pole():
    k = gen_random_aks(GeneratorParams(3, 5, 1, 1, 3))
    assert k.rl.pole.all()


def test_generated_structures_are_valid():
    for s in range(20):
        assert validate_aks(gen_random_aks(GeneratorParams(4, 3, Fraction(1, 2), 2, s))).passed
        assert validate_aks(gen_heyting_aks(HeytingParams(perturbation=Fraction(1, 20), rng_seed=s))).passed


def test_heyting_structure_without_perturbation_contains_the_order():
    k = gen_heyting_aks(HeytingParams(rng_seed=4))
    n = k.terms.size
    assert n <= 6
    # the empty down-set is below everything, so its row is full
    assert k.rl.pole[0].all()


@pytest.mark.parametrize("kwargs", [dict(n_terms=0, n_stacks=1), dict(n_terms=1, n_stacks=1, pole_density=2),
                                    dict(n_terms=2, n_stacks=1, qp_seed_size=3),
                                    dict(n_terms=1, n_stacks=1, rng_seed=-1)])
def test_bad_parameters(kwargs):
    with pytest.raises(ValueError):
        GeneratorParams(**kwargs)


@pytest.mark.parametrize("kwargs", [dict(max_points=0), dict(max_size=1), dict(perturbation=Fraction(3, 2))])
def test_bad_heyting_parameters(kwargs):
    with pytest.raises(ValueError):
        HeytingParams(**kwargs)


@pytest.mark.parametrize("kwargs", [dict(p=5), dict(p=2, shift=(0, 2, 0)), dict(p=3, shift=(0, 1))])
def test_bad_vector_parameters(kwargs):
    with pytest.raises(ValueError):
        VectorPolarityParams(**kwargs)


def test_vector_indexing_roundtrip():
    for p in (2, 3):
        for i in range(p ** 3):
            assert vector_index(vector_of(i, p), p) == i
    assert vector_labels(2)[1] == "100" and vector_labels(2)[2] == "010"


@pytest.mark.parametrize("shift", [None, (0, 1, 0), (1, 1, 1)])
def test_vector_polarity_matches_oracle(shift):
    rl = gen_vector_polarity(VectorPolarityParams(2, shift))
    b = f2_rl(shift)
    idx = {label(v): i for i, v in enumerate(vector_of(i, 2) for i in range(8))}
    for v in vec_f2():
        for w in vec_f2():
            t, p = idx[label(v)], idx[label(w)]
            assert rl.pole[t, p] == b.pole(v, w)
            assert rl.push[t, p] == idx[label(b.push(v, w))]


def test_f3_polarity_shape():
    rl = gen_vector_polarity(VectorPolarityParams(3))
    assert rl.pole.shape == (27, 27)
    assert rl.pole[0].all()
    assert np.array_equal(rl.pole, rl.pole.T)
