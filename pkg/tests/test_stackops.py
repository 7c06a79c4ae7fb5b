from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given

from aksoca.errors import CarrierMismatchError
from aksoca.generators import VectorPolarityParams, gen_vector_polarity
from aksoca.polarity import (Carrier, ClosureKind, RealizabilityLattice, Subset, closure_hat, enumerate_closed,
                             enumerate_closed_terms, perp_of_stacks)
from aksoca.stackops import VARIANTS, app_pi, check_adjunction, check_stackops_laws, conduct, imp_pi, push_set

from instances import f2, random_rl, small_rls
from oracles import f2_rl, f3_rl, perp_adjunction_witnesses, powerset, subspaces, vec_f3

F2 = f2()
F2_SHIFTED = f2((0, 1, 0))


def S(rl, *labels, terms=False):
    return Subset.of(rl.terms if terms else rl.stacks, labels)


def labels(sub):
    return set(sub.labels())


def empty_pole(nt=2, ns=3):
    return RealizabilityLattice.from_tables(np.zeros((nt, ns), dtype=bool), np.zeros((nt, ns), dtype=int))


# -- push and conductor ------------------------------------------------------------------

@pytest.mark.parametrize("variant", ["plain"])
def test_push_of_empty_sides_is_empty(variant):
    assert push_set(F2, Subset.empty(F2.terms), Subset.full(F2.stacks), variant) == Subset.empty(F2.stacks)
    assert push_set(F2, Subset.full(F2.terms), Subset.empty(F2.stacks), variant) == Subset.empty(F2.stacks)


def test_bullet_push_is_hat_closed():
    for i in range(20):
        rl = random_rl(i)
        for lm in range(1 << rl.terms.size):
            for pm in range(1 << rl.stacks.size):
                out = push_set(rl, Subset(rl.terms, lm), Subset(rl.stacks, pm), "bullet")
                assert closure_hat(rl, out) == out


def test_push_of_two_orthogonal_basis_vectors_is_zero():
    # <e1, e2> = 0 kills the cross product: the image is the zero vector
    assert labels(push_set(F2, S(F2, "100", terms=True), S(F2, "010"))) == {"000"}


@pytest.mark.parametrize("variant", VARIANTS)
def test_conductor_of_empty_term_set_is_everything(variant):
    for m in (0, 5, 255):
        assert conduct(F2, Subset(F2.stacks, m), Subset.empty(F2.terms), variant) == Subset.full(F2.stacks)


def test_conductor_into_everything_is_everything():
    for lm in (0, 3, 255):
        assert conduct(F2, Subset.full(F2.stacks), Subset(F2.terms, lm)) == Subset.full(F2.stacks)


def test_conductor_of_two_lines_in_f2():
    # oracle values for P = span{e1}, L = span{e2}
    P, L = S(F2, "000", "100"), S(F2, "000", "010", terms=True)
    expected = {"000", "001", "010", "011", "100", "101"}
    assert labels(conduct(F2, P, L, "plain")) == expected
    assert labels(conduct(F2, P, L, "bullet")) == expected
    perp = conduct(F2, P, L, "perp")
    assert perp == Subset.full(F2.stacks)
    assert conduct(F2, P, L, "plain") <= perp and conduct(F2, P, L, "plain") != perp


def test_conductor_mismatch():
    with pytest.raises(CarrierMismatchError):
        conduct(F2, Subset.empty(F2.terms), Subset.empty(F2.terms))


def _strict_conductor_pairs(rl, stack_masks, term_masks):
    return sum(conduct(rl, Subset(rl.stacks, P), Subset(rl.terms, L), "bullet")
               != conduct(rl, Subset(rl.stacks, P), Subset(rl.terms, L), "plain")
               for P in stack_masks for L in term_masks)


def test_shifted_push_separates_bullet_and_plain_conductors_over_f2():
    # frozen from the oracle over all 256 x 256 pairs (P, L)
    assert _strict_conductor_pairs(F2_SHIFTED, range(256), range(256)) == 1888


def test_bar_closed_pairs_never_separate_conductors_over_f2():
    # every bar({pi}) is {0, pi} over F2, so closed pairs agree
    closed = enumerate_closed(F2_SHIFTED, ClosureKind.PERP).masks
    assert _strict_conductor_pairs(F2_SHIFTED, closed, enumerate_closed_terms(F2_SHIFTED)) == 0


def test_shifted_push_separates_conductors_on_closed_pairs_over_f3():
    rl = gen_vector_polarity(VectorPolarityParams(3, (0, 1, 0)))
    closed = enumerate_closed(rl, ClosureKind.PERP, cap=27).masks
    terms_closed = enumerate_closed_terms(rl, cap=27)
    assert len(closed) == len(terms_closed) == 28  # the subspaces of F3^3
    # frozen from oracles.f3_rl with w0 = e2 over its 28 x 28 subspace pairs
    assert _strict_conductor_pairs(rl, closed, terms_closed) == 584


def test_f3_closed_sets_are_the_oracle_subspaces():
    rl = gen_vector_polarity(VectorPolarityParams(3, (0, 1, 0)))
    index = {v: v[0] + 3 * v[1] + 9 * v[2] for v in vec_f3()}
    want = sorted(sum(1 << index[v] for v in S) for S in subspaces(vec_f3(), 3))
    assert sorted(enumerate_closed(rl, ClosureKind.PERP, cap=27).masks) == want
    b = f3_rl((0, 1, 0))
    P, L = subspaces(vec_f3(), 3)[3], subspaces(vec_f3(), 3)[20]
    got = conduct(rl, Subset(rl.stacks, sum(1 << index[v] for v in P)),
                  Subset(rl.terms, sum(1 << index[v] for v in L)), "bullet")
    assert got.mask == sum(1 << index[v] for v in b.conduct_bullet(P, L))


# -- implication and application ---------------------------------------------------------

def test_implication_from_unrealized_set_is_empty():
    rl = empty_pole()
    P = Subset.full(rl.stacks)
    assert perp_of_stacks(rl, P) == Subset.empty(rl.terms)
    for v in VARIANTS:
        assert imp_pi(rl, P, Subset.full(rl.stacks), v) == Subset.empty(rl.stacks)


def test_realizers_of_implication_ignore_variant():
    for i in range(20):
        rl = random_rl(i, 4)
        for pm in range(1 << rl.stacks.size):
            for qm in range(1 << rl.stacks.size):
                P, Q = Subset(rl.stacks, pm), Subset(rl.stacks, qm)
                polars = {perp_of_stacks(rl, imp_pi(rl, P, Q, v)) for v in VARIANTS}
                assert len(polars) == 1


def test_implication_line_to_basis_vector_in_f2():
    # oracle: push of span{e2, e3} against e2
    assert labels(imp_pi(F2, S(F2, "000", "100"), S(F2, "010"))) == {"000", "100"}


def test_application_with_unrealized_argument_is_everything():
    rl = empty_pole()
    for v in VARIANTS:
        assert app_pi(rl, Subset.empty(rl.stacks), Subset.full(rl.stacks), v) == Subset.full(rl.stacks)


@given(small_rls())
def test_application_variants_are_nested(rl):
    for pm in range(1 << rl.stacks.size):
        for qm in range(1 << rl.stacks.size):
            P, Q = Subset(rl.stacks, pm), Subset(rl.stacks, qm)
            b, p, c = (app_pi(rl, P, Q, v) for v in ("bullet", "plain", "perp"))
            assert b <= p <= c


def test_application_line_with_basis_vector_in_f2():
    assert labels(app_pi(F2, S(F2, "000", "100"), S(F2, "010"))) == {"000", "010"}


# -- adjunctions --------------------------------------------------------------------------

@given(small_rls())
def test_plain_and_bullet_adjunctions_hold(rl):
    for v in ("plain", "bullet"):
        rep = check_adjunction(rl, v)
        assert rep.passed and rep.mode == "exhaustive", rep.witnesses


@given(small_rls())
def test_perp_adjunction_first_direction_holds(rl):
    assert check_adjunction(rl, "perp").passed


def test_perp_converse_failures_match_oracle_on_shifted_push():
    rep = check_adjunction(F2_SHIFTED, "perp")
    assert rep.passed
    # frozen from oracles.perp_adjunction_witnesses with w0 = e2
    assert rep.notes["converse_failures"] == 16256
    # mask-minimal witness: P = {000}, L = {100}, R = {000, 110}
    assert rep.notes["converse_witness"] == {"P": 1, "L": 2, "R": 9}


def test_perp_converse_failures_match_oracle_on_standard_push():
    rep = check_adjunction(F2, "perp")
    assert rep.notes["converse_failures"] == 8884


def test_oracle_reproduces_frozen_witness_counts():
    assert len(perp_adjunction_witnesses(f2_rl())) == 8884
    assert len(perp_adjunction_witnesses(f2_rl((0, 1, 0)))) == 16256


def test_conductor_against_oracle_on_shifted_push():
    b = f2_rl((0, 1, 0))
    index = {v: v[0] + 2 * v[1] + 4 * v[2] for v in b.stacks}
    closed = [P for P in powerset(b.stacks) if b.bar(P) == P]
    for P in closed:
        for L in powerset(b.terms)[::7]:
            pm = sum(1 << index[v] for v in P)
            lm = sum(1 << index[v] for v in L)
            want = sum(1 << index[v] for v in b.conduct_bullet(P, L))
            assert conduct(F2_SHIFTED, Subset(F2.stacks, pm), Subset(F2.terms, lm), "bullet").mask == want


# -- law suite ------------------------------------------------------------------------------

@given(small_rls())
def test_stackops_law_suite(rl):
    reports = check_stackops_laws(rl)
    assert all(r.passed for r in reports), [(r.name, r.witnesses) for r in reports if not r.passed]


def test_stackops_laws_on_shifted_f2():
    reports = check_stackops_laws(F2_SHIFTED)
    assert all(r.passed for r in reports)


def test_sampled_mode_records_seed():
    rl = F2_SHIFTED
    reports = check_stackops_laws(rl, budget=1000, samples=256, seed=7)
    assert any(r.mode == "sampled" and r.seed == 7 for r in reports)
    assert all(r.passed for r in reports)


def test_bullet_family_adjunction_uses_hat_closed_sets():
    fam = enumerate_closed(F2, ClosureKind.BULLET)
    rep = check_adjunction(F2, "bullet", budget=1 << 23)
    assert rep.passed and rep.mode == "exhaustive"
    assert rep.checked == len(fam) ** 2 * 256
