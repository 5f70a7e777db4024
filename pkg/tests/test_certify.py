import itertools
import random

import pytest

from torcert import catalog
from torcert import linalg as la
from torcert.certify import (NO, RULE_2S5T, RULE_DIMENSION, RULE_QUADRATIC, UNKNOWN, YES,
                             certify_torus, character_decompositions, faithful_quotient_order,
                             is_permutation_lattice, is_stably_permutation,
                             local_rationality_report, permutation_character)
from torcert.cohomology import class_representatives
from torcert.conic import picard_lattice
from torcert.groups import all_subgroups, conjugacy_class_of_subgroup, cyclic_subgroups
from torcert.lattice import direct_sum, permutation_sum, sign_lattice

from conftest import change_basis, random_lattice, random_unimodular, small_groups


def brute_decompositions(G, chi):
    reps = class_representatives(G)
    chars = [permutation_character(G, H) for H in reps]
    out = set()
    ranges = [range(chi[G.identity] // H.index + 1) for H in reps]
    for coeffs in itertools.product(*ranges):
        total = [sum(a * c[g] for a, c in zip(coeffs, chars)) for g in range(G.order)]
        if total == list(chi):
            out.add(coeffs)
    return out


def test_permutation_character_counts_fixed_cosets():
    for G in small_groups():
        for H in all_subgroups(G):
            chi = permutation_character(G, H)
            assert chi[G.identity] == H.index
            # Frobenius reciprocity: <chi, 1> = 1
            assert sum(chi) == G.order


def test_character_decompositions_against_enumeration():
    r = random.Random(17)
    for G in small_groups()[:6]:
        reps = class_representatives(G)
        for _ in range(4):
            chosen = [r.choice(reps) for _ in range(r.randint(1, 2))]
            chi = permutation_sum(G, chosen).traces()
            sols, exhausted = character_decompositions(G, chi)
            assert exhausted
            assert set(sols) == brute_decompositions(G, chi)


def test_scrambled_permutation_lattice_is_recognised():
    r = random.Random(23)
    for G in small_groups()[:8]:
        reps = class_representatives(G)
        S = permutation_sum(G, [r.choice(reps), r.choice(reps)])
        X = change_basis(S, random_unimodular(S.rank, r))
        X.permutation_type = None
        res = is_permutation_lattice(X, seed=1)
        assert res.status == YES
        res.witness.check()
        assert res.witness.is_isomorphism() and res.witness.target is X


def test_sign_lattice_is_not_permutation():
    res = is_permutation_lattice(catalog.sign_c2())
    assert res.status == NO and res.invariant
    assert is_stably_permutation(catalog.sign_c2()).status == NO


def test_biquadratic_norm_lattice_is_not_permutation():
    J = catalog.regular_norm_lattice(2)
    res = is_permutation_lattice(J)
    assert res.status == NO
    assert "H^1" in res.invariant or "H^-1" in res.invariant or "character" in res.invariant


def test_verdicts_are_monotone():
    r = random.Random(31)
    for G in small_groups()[:6]:
        for _ in range(3):
            M = random_lattice(G, r, max_rank=4)
            p = is_permutation_lattice(M, seed=0)
            s = is_stably_permutation(M, rank_budget=4, seed=0)
            if p.status == YES:
                assert s.status == YES
            if s.status == NO:
                assert p.status == NO
            assert p.status in (YES, NO, UNKNOWN)


def test_picard_lattice_of_s3_surface_is_stably_permutation():
    P = picard_lattice(catalog.s3_surface_action())
    res = is_stably_permutation(P, seed=0)
    assert res.status == YES
    phi = res.witness.check()
    assert phi.is_isomorphism()
    # the witness maps S2 onto P + S1, whose leading block is P itself
    X = phi.target
    assert all(la.mat_equal(X.action[g][:P.rank, :P.rank], P.action[g])
               for g in range(P.group.order))


def test_certify_sign_torus():
    cert = certify_torus(catalog.sign_c2())
    assert cert.br_trivial is True
    assert cert.unramified_brauer.is_trivial
    cert.verify()


def test_certify_biquadratic_norm_torus():
    cert = certify_torus(catalog.regular_norm_lattice(2))
    assert cert.br_trivial is False
    assert str(cert.unramified_brauer) == "Z/2"
    assert cert.flags["stably_permutation"].status == NO
    assert cert.flags["invertible"].status == NO
    d = cert.to_dict(include_resolution=False)
    assert "resolution" not in d and d["flags"]["br_trivial"] is False


def test_local_rules():
    assert {e.rule for e in local_rationality_report(catalog.sign_c2()).entries} == {RULE_DIMENSION}
    rep = local_rationality_report(catalog.regular_norm_lattice(2))
    assert {e.rule for e in rep.entries} == {RULE_QUADRATIC} and rep.all_rational
    rep = local_rationality_report(catalog.f20_norm_lattice())
    assert {e.rule for e in rep.entries} == {RULE_2S5T}
    assert sorted(e.subgroup.order for e in rep.entries) == [1, 2, 4, 5]


def test_local_verdicts_are_conjugation_invariant():
    for M in (catalog.f20_norm_lattice(), catalog.augmentation_ideal_twisted()):
        G = M.group
        reps = class_representatives(G)
        rep = {e.subgroup.members: e for e in local_rationality_report(M).entries}
        for C in cyclic_subgroups(G):
            R = reps[conjugacy_class_of_subgroup(G, C, reps)]
            assert faithful_quotient_order(M, C) == rep[R.members].quotient_order


def test_local_report_unknown_for_large_cyclic_order():
    # rank 6 faithful C7 lattice: no rule covers a cyclic group of order 7
    from torcert.groups import close_generators
    from torcert.lattice import augmentation_quotient, permutation_lattice
    G = close_generators(7, [[1, 2, 3, 4, 5, 6, 0]], name="C7")
    J = augmentation_quotient(permutation_lattice(G, G.trivial()))
    rep = local_rationality_report(J)
    assert not rep.all_rational
    assert any(e.verdict == "UNKNOWN" for e in rep.entries)
