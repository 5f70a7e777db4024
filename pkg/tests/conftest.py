import random

import pytest

from torcert import linalg as la
from torcert.groups import all_subgroups, close_generators
from torcert.lattice import (GLattice, augmentation_kernel, augmentation_quotient, direct_sum,
                             permutation_lattice, sign_lattice)

ACCEPTANCE_LINES = []


def small_groups():
    """Permutation groups of order <= 12, one of each shape we care about."""
    return [
        close_generators(2, [[1, 0]], name="C2"),
        close_generators(3, [[1, 2, 0]], name="C3"),
        close_generators(4, [[1, 2, 3, 0]], name="C4"),
        close_generators(4, [[1, 0, 3, 2], [2, 3, 0, 1]], name="C2^2"),
        close_generators(3, [[1, 2, 0], [1, 0, 2]], name="S3"),
        close_generators(6, [[1, 2, 3, 4, 5, 0]], name="C6"),
        close_generators(4, [[1, 2, 3, 0], [3, 2, 1, 0]], name="D4"),
        close_generators(8, [[i ^ 1 for i in range(8)], [i ^ 2 for i in range(8)],
                             [i ^ 4 for i in range(8)]], name="C2^3"),
        # quaternion group as left multiplication on itself
        close_generators(8, [[1, 2, 3, 0, 7, 4, 5, 6], [4, 5, 6, 7, 2, 3, 0, 1]], name="Q8"),
        close_generators(4, [[1, 2, 0, 3], [1, 0, 3, 2]], name="A4"),
        close_generators(6, [[1, 2, 3, 4, 5, 0], [5, 4, 3, 2, 1, 0]], name="D6"),
    ]


def random_unimodular(n, rng, steps=6):
    U = la.identity(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            U[:, i] = -U[:, i]
            continue
        U[:, i] = U[:, i] + rng.choice([-1, 1]) * U[:, j]
    return U


def change_basis(M, U):
    Ui = la.unimodular_inverse(U)
    return GLattice(M.group, [la.matmul(Ui, la.matmul(A, U)) for A in M.action], name=M.name)


def random_piece(G, rng):
    subs = all_subgroups(G)
    H = rng.choice(subs)
    kind = rng.choice(["perm", "quot", "kern", "sign"])
    if kind == "sign":
        index2 = [K for K in subs if K.index == 2]
        if index2:
            return sign_lattice(G, rng.choice(index2))
        kind = "perm"
    P = permutation_lattice(G, H)
    if kind == "quot" and P.rank > 1:
        return augmentation_quotient(P)
    if kind == "kern" and P.rank > 1:
        return augmentation_kernel(P)
    return P


def random_lattice(G, rng, max_rank=6):
    parts, rank = [], 0
    for _ in range(4):
        piece = random_piece(G, rng)
        if rank + piece.rank > max_rank:
            continue
        parts.append(piece)
        rank += piece.rank
    if not parts:
        parts = [permutation_lattice(G, G.whole())]
    M = direct_sum(*parts) if len(parts) > 1 else parts[0]
    return change_basis(M, random_unimodular(M.rank, rng))


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

