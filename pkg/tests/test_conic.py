import random

import pytest

from torcert import catalog
from torcert.cohomology import class_representatives, h1
from torcert.conic import (RULE_NOT_RATIONAL, RULE_RATIONAL, XI_MEETS_BAR, XI_MEETS_ELL,
                           NoConsistentExtension, build_fibre_action, check_extension_invariance,
                           conic_report, fibre_action_from_dict, minimal_model,
                           minimality_cross_check, picard_fixed_rank, picard_lattice,
                           points_to_signed, signed_name, signed_to_points)
from torcert.groups import GroupOrderError, all_subgroups


def trace_fixed_rank(P, H):
    """rank of P^H as the average trace over H."""
    total = sum(int(sum(P.action[h][i, i] for i in range(P.rank))) for h in H.members)
    assert total % H.order == 0
    return total // H.order


def orbit_fixed_rank(A, H):
    """2 + (orbits on components) - (orbits on fibres): f and xi, plus one class
    l_i - lbar_i per fibre orbit whose stabilizer never swaps the components."""
    G = A.group
    points = {frozenset(G.elements[h][p] for h in H.members) for p in range(2 * A.fibres)}
    fibres = {frozenset(q // 2 for q in orb) for orb in points}
    return 2 + len(points) - len(fibres)


def element(A, name):
    return A.group.element_names.index(name)


def test_s3_action_has_order_six():
    A = catalog.s3_surface_action()
    assert A.group.order == 6
    names = set(A.group.element_names)
    assert {"(123)c2c3", "(12)c3c4"} <= names


def test_flip_convention_round_trip():
    r = random.Random(3)
    for _ in range(200):
        n = r.randint(1, 5)
        perm = list(range(n))
        r.shuffle(perm)
        flips = [r.randint(0, 1) for _ in range(n)]
        pts = signed_to_points(perm, flips)
        assert sorted(pts) == list(range(2 * n))
        assert points_to_signed(pts) == (tuple(perm), tuple(flips))
    assert signed_name([1, 2, 0, 3], [0, 1, 1, 0]) == "(123)c2c3"
    assert signed_name([0, 1], [0, 0]) == "1"


def test_s3_minimal_models():
    A = catalog.s3_surface_action()
    G = A.group
    full = minimal_model(A, G.whole())
    assert full.relatively_minimal and full.residual_fibres == 4
    assert full.verdict == "NOT_RATIONAL" and full.rule == RULE_NOT_RATIONAL
    order2 = minimal_model(A, G.subgroup([element(A, "(12)c3c4")]))
    assert not order2.relatively_minimal
    assert order2.residual_fibres == 2 and order2.verdict == "RATIONAL"
    assert order2.rule == RULE_RATIONAL
    order3 = minimal_model(A, G.subgroup([element(A, "(123)c2c3")]))
    # {l1, lbar2, l3} is an orbit of disjoint components, and so is {l4}
    assert order3.residual_fibres == 0 and order3.verdict == "RATIONAL"
    contracted = sorted(i for orb in order3.contraction_sequence for i, _ in orb)
    assert contracted == [0, 1, 2, 3]
    assert sorted(len(orb) for orb in order3.contraction_sequence) == [1, 3]


def test_s3_fixed_ranks_match_trace_and_orbit_oracles():
    A = catalog.s3_surface_action()
    P = picard_lattice(A)
    G = A.group
    expected = {G.whole().members: 2,
                G.subgroup([element(A, "(123)c2c3")]).members: 4,
                G.subgroup([element(A, "(12)c3c4")]).members: 3}
    for H in all_subgroups(G):
        k = picard_fixed_rank(P, H)
        assert k == trace_fixed_rank(P, H) == orbit_fixed_rank(A, H)
        if H.members in expected:
            assert k == expected[H.members]


def test_s3_picard_cohomology_vanishes():
    A = catalog.s3_surface_action()
    P = picard_lattice(A)
    assert P.rank == 6
    for H in all_subgroups(A.group):
        assert h1(H, P).is_trivial


def test_tsfasman_surface():
    A = catalog.tsfasman_action()
    G = A.group
    assert G.order == 4
    P = picard_lattice(A)
    assert str(h1(G.whole(), P)) == "Z/2"
    mm = minimal_model(A, G.whole())
    assert mm.relatively_minimal and mm.residual_fibres == 4
    # every nontrivial element fixes a place where the surface is locally rational
    for H in class_representatives(G):
        if H.order == 2:
            assert minimal_model(A, H).verdict == "RATIONAL"


@pytest.mark.parametrize("A", [catalog.s3_surface_action(), catalog.tsfasman_action()],
                         ids=["s3", "tsfasman"])
def test_cohomology_independent_of_section_convention(A):
    reps = class_representatives(A.group)
    values = check_extension_invariance(A, reps)
    assert len(values) == len(reps)
    base = picard_lattice(A, XI_MEETS_ELL, 1)
    assert base.convention["xi_meets"] == XI_MEETS_ELL


def random_even_action(r, rng):
    gens = []
    for _ in range(rng.randint(1, 2)):
        perm = list(range(1, r + 1))
        rng.shuffle(perm)
        flips = [rng.randint(0, 1) for _ in range(r)]
        if sum(flips) % 2:
            flips[rng.randrange(r)] ^= 1
        gens.append((perm, flips))
    try:
        return build_fibre_action(r, gens, max_order=64)
    except GroupOrderError:
        return random_even_action(r, rng)


def test_random_actions_cross_checks():
    rng = random.Random(41)
    for _ in range(30):
        A = random_even_action(rng.choice([2, 3, 3, 4]), rng)
        reps = class_representatives(A.group)
        P = picard_lattice(A).check()
        for H in reps:
            assert picard_fixed_rank(P, H) == trace_fixed_rank(P, H) == orbit_fixed_rank(A, H)
        assert minimality_cross_check(A, reps) == []
        check_extension_invariance(A, reps[:4])


def test_odd_flip_count_has_no_picard_lattice():
    A = build_fibre_action(2, [([1, 2], [1, 0])])
    with pytest.raises(NoConsistentExtension):
        picard_lattice(A)


def test_trivial_group():
    A = build_fibre_action(3, [])
    assert A.group.order == 1
    mm = minimal_model(A, A.group.whole())
    assert mm.residual_fibres == 0 and mm.verdict == "RATIONAL"
    assert picard_fixed_rank(picard_lattice(A), A.group.whole()) == 5


def test_input_validation():
    with pytest.raises(ValueError):
        build_fibre_action(2, [([1, 1], [0, 0])])
    with pytest.raises(ValueError):
        build_fibre_action(2, [([2, 1], [0, 2])])
    with pytest.raises(ValueError):
        fibre_action_from_dict({"generators": []})
    with pytest.raises(ValueError):
        fibre_action_from_dict({"fibres": 2, "generators": [{"flips": [0, 0]}]})


def test_conic_report_rows():
    A = catalog.s3_surface_action()
    out = conic_report(A, class_representatives(A.group))
    assert out["picard_convention"]["xi_meets"] == XI_MEETS_BAR
    assert all(row["fixed_rank_consistent"] for row in out["subgroups"])
