"""Flasque and coflasque resolutions, and coflasque-ification by extensions.

Every certificate produced here is re-verified exactly before it is
returned: equivariance, zero composite, injectivity with saturated image,
surjectivity and rank additivity.
"""

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .cohomology import class_representatives, h1_cocycles, is_coflasque, is_flasque
from .lattice import (EquivariantMap, GLattice, VerificationError, dual,
                      extension_from_cocycle, permutation_sum, sublattice)

MAX_PASSES = 10


@dataclass(eq=False)
class ExactSequence:
    """0 -> left --first--> middle --second--> right -> 0."""

    left: GLattice
    middle: GLattice
    right: GLattice
    first: EquivariantMap
    second: EquivariantMap
    kind: str = ""  # FLASQUE | COFLASQUE | EXTENSION
    # subgroups H (block order) when the permutation term is a sum of Z[G/H]
    permutation_blocks: list = field(default_factory=list)

    def verify_exact(self):
        f, g = self.first, self.second
        if f.source is not self.left or f.target is not self.middle:
            raise VerificationError("first map has the wrong endpoints")
        if g.source is not self.middle or g.target is not self.right:
            raise VerificationError("second map has the wrong endpoints")
        f.check()
        g.check()
        if self.left.rank + self.right.rank != self.middle.rank:
            raise VerificationError("ranks do not add up")
        comp = la.matmul(g.matrix, f.matrix)
        if np.any(comp != 0):
            raise VerificationError("maps do not compose to zero")
        if not la.is_saturated_basis(f.matrix):
            raise VerificationError("first map is not injective with saturated image")
        divs = la.elementary_divisors(g.matrix)
        if len([d for d in divs if d == 1]) != self.right.rank:
            raise VerificationError("second map is not surjective")
        return self

    def verify(self):
        self.verify_exact()
        if self.kind == "FLASQUE":
            _require_permutation_term(self.middle)
            if not is_flasque(self.right):
                raise VerificationError("right term of a flasque resolution is not flasque")
        elif self.kind == "COFLASQUE":
            _require_permutation_term(self.middle)
            if not is_coflasque(self.left):
                raise VerificationError("left term of a coflasque resolution is not coflasque")
        elif self.kind == "EXTENSION":
            _require_permutation_term(self.right)
        return self

    def to_dict(self):
        def lat(L):
            G = L.group
            return {"name": L.name, "rank": L.rank,
                    "generator_action": [_mat(L.action[g]) for g in G.generators]}
        return {
            "kind": self.kind,
            "group": self.middle.group.name,
            "left": lat(self.left),
            "middle": lat(self.middle),
            "right": lat(self.right),
            "first": _mat(self.first.matrix),
            "second": _mat(self.second.matrix),
            "permutation_blocks": [list(H.members) for H in self.permutation_blocks],
        }


def _mat(A):
    return [[int(x) for x in row] for row in A]


def _require_permutation_term(P):
    if not all(la.is_permutation_matrix(A) for A in P.action):
        raise VerificationError("expected a permutation lattice")


ResolutionCertificate = ExactSequence


def coflasque_resolution(M, subgroups=None):
    """0 -> C -> S -> M -> 0 with S permutation and C coflasque.

    S is the sum over subgroup class representatives H (or the given list,
    which must meet every conjugacy class) of one copy of Z[G/H] per basis
    vector v of M^H, mapping the coset gH to g v.
    """
    G = M.group
    blocks, cols = [], []
    for H in (class_representatives(G) if subgroups is None else subgroups):
        F = M.fixed_basis(H)
        reps, _ = H.cosets()
        for j in range(F.shape[1]):
            v = F[:, j].reshape(-1, 1)
            blocks.append(H)
            for c in reps:
                cols.append(la.matmul(M.action[c], v).ravel())
    S = permutation_sum(G, blocks)
    E = la.imat(np.array(cols, dtype=object).T) if cols else la.zeros(M.rank, 0)
    second = EquivariantMap(S, M, E)
    K = la.kernel_basis(E)
    C = sublattice(S, K, name=f"C({M.name})")
    first = EquivariantMap(C, S, K)
    seq = ExactSequence(C, S, M, first, second, kind="COFLASQUE", permutation_blocks=blocks)
    return seq.verify()


def flasque_resolution(M, subgroups=None):
    """0 -> M -> S -> F -> 0 with S permutation and F flasque.

    Obtained by dualizing a coflasque resolution of the dual lattice.
    """
    co = coflasque_resolution(dual(M), subgroups)
    S = co.middle  # permutation matrices are orthogonal: S is its own dual
    F = dual(co.left)
    F.name = f"F({M.name})"
    first = EquivariantMap(M, S, co.second.matrix.T.copy())
    second = EquivariantMap(S, F, co.first.matrix.T.copy())
    seq = ExactSequence(M, S, F, first, second, kind="FLASQUE",
                        permutation_blocks=co.permutation_blocks)
    return seq.verify()


def dual_sequence(seq):
    """Dual of 0 -> A -> B -> C -> 0 is 0 -> C' -> B' -> A' -> 0."""
    A, B, C = dual(seq.left), dual(seq.middle), dual(seq.right)
    kind = {"COFLASQUE": "FLASQUE", "FLASQUE": "COFLASQUE"}.get(seq.kind, "")
    out = ExactSequence(C, B, A,
                        EquivariantMap(C, B, seq.second.matrix.T.copy()),
                        EquivariantMap(B, A, seq.first.matrix.T.copy()),
                        kind=kind, permutation_blocks=seq.permutation_blocks)
    return out


@dataclass
class StableEquivalenceChain:
    steps: list  # ExactSequence of kind EXTENSION
    total: ExactSequence = None  # 0 -> M -> M' -> S -> 0 when S is permutation

    def verify(self):
        for s in self.steps:
            s.verify()
        for a, b in zip(self.steps, self.steps[1:]):
            if a.middle is not b.left:
                raise VerificationError("chain steps do not connect")
        if self.total is not None:
            self.total.verify()
        return self

    def to_dict(self):
        return {
            "steps": [{"subgroup": [list(H.members) for H in s.permutation_blocks],
                       "rank_before": s.left.rank, "rank_after": s.middle.rank}
                      for s in self.steps],
            "total": self.total.to_dict() if self.total is not None else None,
        }


def _extension_step(M, H, cocycle):
    Mp = extension_from_cocycle(M, H, cocycle)
    n = M.rank
    m = Mp.rank - n
    P = permutation_sum(M.group, [H])
    inc = la.vstack([la.identity(n), la.zeros(m, n)], n)
    proj = la.hstack([la.zeros(m, n), la.identity(m)], m)
    seq = ExactSequence(M, Mp, P, EquivariantMap(M, Mp, inc), EquivariantMap(Mp, P, proj),
                        kind="EXTENSION", permutation_blocks=[H])
    return seq.verify()


def coflasquify(M, max_passes=MAX_PASSES):
    """Embed M in a coflasque M' with permutation cokernel(s).

    Each pass computes generating cocycles of H^1(H, current) for every
    subgroup class H (in increasing order) and extends by one Z[G/H] per
    generator.  Passes repeat until a full pass finds nothing to kill.
    """
    current = M
    steps = []
    for _ in range(max_passes):
        todo = []
        for H in class_representatives(M.group):
            group, gens = h1_cocycles(H, current)
            for _, phi in gens:
                todo.append((H, phi))
        if not todo:
            break
        r0 = current.rank
        for H, phi in todo:
            # cocycles were computed in the pass-start lattice, which is the
            # leading block of every later extension
            pad = {h: np.concatenate([v, la.zeros(1, current.rank - r0).ravel()])
                   for h, v in phi.items()}
            step = _extension_step(current, H, pad)
            steps.append(step)
            current = step.middle
    else:
        if not is_coflasque(current):
            raise RuntimeError(f"coflasquify did not terminate within {max_passes} passes")
    if not is_coflasque(current):
        raise VerificationError("coflasquify result is not coflasque")
    current.name = f"coflasquify({M.name})"
    chain = StableEquivalenceChain(steps, _total_sequence(M, current, steps))
    return current, chain.verify()


def _total_sequence(M, Mp, steps):
    """0 -> M -> M' -> M'/M -> 0, kept only if the cokernel is permutation."""
    if not steps:
        return None
    n, N = M.rank, Mp.rank
    for g in range(M.group.order):
        if np.any(Mp.action[g][n:, :n] != 0):
            return None
    blocks = [H for s in steps for H in s.permutation_blocks]
    P = permutation_sum(M.group, blocks)
    for g in range(M.group.order):
        if not la.mat_equal(Mp.action[g][n:, n:], P.action[g]):
            return None
    inc = la.vstack([la.identity(n), la.zeros(N - n, n)], n)
    proj = la.hstack([la.zeros(N - n, n), la.identity(N - n)], N - n)
    return ExactSequence(M, Mp, P, EquivariantMap(M, Mp, inc), EquivariantMap(Mp, P, proj),
                         kind="EXTENSION", permutation_blocks=blocks)
