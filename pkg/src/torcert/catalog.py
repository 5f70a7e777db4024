"""Builders for the groups, lattices and fibre actions used in the worked examples.

The JSON fixtures shipped under ``fixtures/v1`` are frozen outputs of these
builders; the test suite checks that the two stay in sync.
"""

import numpy as np

from . import linalg as la
from .conic import build_fibre_action
from .groups import close_generators
from .lattice import (EquivariantMap, augmentation_kernel, augmentation_quotient,
                      from_generator_action, permutation_lattice, permutation_sum,
                      quotient, sign_lattice)
from .resolutions import ExactSequence


def _xor_gens(bits):
    n = 2 ** bits
    return [[i ^ (1 << k) for i in range(n)] for k in range(bits)]


def cyclic2():
    return close_generators(2, [[1, 0]], name="C2")


def elementary_abelian(bits):
    """(Z/2)^bits in its regular representation, generators i -> i xor 2^k."""
    names = {1: "C2", 2: "C2^2", 3: "C2^3"}
    return close_generators(2 ** bits, _xor_gens(bits), name=names.get(bits, f"C2^{bits}"))


def frobenius20():
    """x -> x + 1 and x -> 2x on Z/5."""
    return close_generators(5, [[1, 2, 3, 4, 0], [0, 2, 4, 1, 3]], name="F20")


GROUPS = {
    "C2": cyclic2,
    "C2^2": lambda: elementary_abelian(2),
    "C2^3": lambda: elementary_abelian(3),
    "F20": frobenius20,
}


def sign_c2():
    G = cyclic2()
    M = sign_lattice(G, G.trivial())
    M.name = "Z- over C2"
    return M


def f20_norm_lattice():
    """Z[F20/sigma]/Z with sigma the order-4 point stabilizer."""
    G = frobenius20()
    sigma = G.subgroup([G.generators[1]])
    M = augmentation_quotient(permutation_lattice(G, sigma))
    M.name = "Z[F20/C4]/Z"
    return M


def regular_norm_lattice(bits):
    """J = Z[G]/Z for G = (Z/2)^bits."""
    G = elementary_abelian(bits)
    M = augmentation_quotient(permutation_lattice(G, G.trivial()))
    M.name = f"Z[{G.name}]/Z"
    return M


def augmentation_ideal_twisted():
    """Rank 3: alpha, beta act on the augmentation ideal of Z[<alpha, beta>], gamma by -1."""
    G0 = elementary_abelian(2)
    I = augmentation_kernel(permutation_lattice(G0, G0.trivial()))
    G = elementary_abelian(3)
    mats = [I.action[G0.generators[0]], I.action[G0.generators[1]], -la.identity(3)]
    M = from_generator_action(G, mats, name="I x <-1>")
    return M


def explicit_j_resolution():
    """0 -> J -> Z[G]^7 -> N0 -> 0 for G = (Z/2)^3, via u -> ((1 - g) u) over g != 1."""
    J = regular_norm_lattice(3)
    G = J.group
    P = permutation_lattice(G, G.trivial())
    S = permutation_sum(G, [G.trivial()] * 7)
    big = la.vstack([la.identity(8) - P.action[g] for g in range(G.order) if g != G.identity], 8)
    lifts = []
    for j in range(J.rank):
        e = la.ivec([1 if i == j else 0 for i in range(J.rank)])
        lifts.append(la.ivec(la.solve_integer(J.projection, e)))
    f = la.matmul(big, np.array(lifts, dtype=object).T.copy())
    N0 = quotient(S, f, name="N0")
    seq = ExactSequence(J, S, N0, EquivariantMap(J, S, f), EquivariantMap(S, N0, N0.projection),
                        kind="FLASQUE", permutation_blocks=[G.trivial()] * 7)
    return seq.verify()


LATTICES = {
    "sign": sign_c2,
    "f20_norm": f20_norm_lattice,
    "j_c2x2": lambda: regular_norm_lattice(2),
    "j_c2x3": lambda: regular_norm_lattice(3),
    "twisted_augmentation": augmentation_ideal_twisted,
}


# conic bundles ---------------------------------------------------------------

S3_SURFACE = {"fibres": 4, "generators": [{"perm": [2, 3, 1, 4], "flips": [0, 1, 1, 0]},
                                          {"perm": [2, 1, 3, 4], "flips": [0, 0, 1, 1]}]}

# y^2 - 221 z^2 = (x^2 - 13)(x^2 - 17).  Fibres 1, 2, 3, 4 sit over
# x = sqrt13, -sqrt13, sqrt17, -sqrt17 and the components of each are
# y = +sqrt221 z (l) and y = -sqrt221 z (lbar) with sqrt221 = sqrt13 sqrt17.
# sqrt13 -> -sqrt13 swaps fibres 1, 2 and negates sqrt221; likewise for 17.
TSFASMAN_SURFACE = {
    "fibres": 4,
    "generators": [{"perm": [2, 1, 3, 4], "flips": [1, 1, 1, 1]},
                   {"perm": [1, 2, 4, 3], "flips": [1, 1, 1, 1]}],
    "derivation": ("fibres over x = sqrt13, -sqrt13, sqrt17, -sqrt17; l_i: y = sqrt221 z; "
                   "sqrt13 -> -sqrt13 swaps fibres 1,2 and negates sqrt221 = sqrt13 sqrt17, "
                   "so it swaps the components of every fibre; same for sqrt17 and fibres 3,4"),
}

CONIC_ACTIONS = {"s3_surface": S3_SURFACE, "tsfasman": TSFASMAN_SURFACE}


def s3_surface_action():
    return build_fibre_action(4, [(g["perm"], g["flips"]) for g in S3_SURFACE["generators"]])


def tsfasman_action():
    return build_fibre_action(4, [(g["perm"], g["flips"]) for g in TSFASMAN_SURFACE["generators"]])
