"""Tate cohomology of subgroups acting on lattices.

Three independent routes to H^1:

* duality: H^1(H, M) is dual to H^-1(H, M'), M' = Hom(M, Z)  (primary);
* divided coboundaries: every class is killed by n = |H|, so it is
  represented by h -> (h - 1) m / n for some m with (h - 1) m in nM; this
  route also produces explicit cocycles;
* bar cocycles: solve the cocycle equations for all pairs of elements and
  divide by coboundaries (small instances only, used as an oracle).
"""

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .groups import subgroups_up_to_conjugacy
from .lattice import VerificationError, dual

DEGREES = ("-1", "0", "1")


@dataclass(frozen=True)
class CohomologyGroup:
    """Finite abelian group by invariant factors (empty tuple = trivial)."""

    invariant_factors: tuple = ()

    def __post_init__(self):
        fs = self.invariant_factors
        if any(d < 2 for d in fs):
            raise ValueError("invariant factors must be >= 2")
        if any(fs[i + 1] % fs[i] for i in range(len(fs) - 1)):
            raise ValueError("invariant factors must form a divisibility chain")

    @property
    def order(self):
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def is_trivial(self):
        return not self.invariant_factors

    def __str__(self):
        if self.is_trivial:
            return "0"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)

    def to_list(self):
        return list(self.invariant_factors)


def class_representatives(G):
    cache = getattr(G, "_class_reps", None)
    if cache is None:
        cache = subgroups_up_to_conjugacy(G)
        G._class_reps = cache
    return cache


def _check_subgroup(H, M):
    if H.parent is not M.group:
        raise ValueError("subgroup does not belong to the lattice's group")


def tate_minus1(H, M):
    """ker(N_H) / I_H M."""
    _check_subgroup(H, M)
    n = H.order
    K = la.kernel_basis(M.norm(H))
    if K.shape[1] == 0:
        return CohomologyGroup()
    X = la.coordinates(K, M.relation_matrix(H))
    factors, _ = la.cokernel_mod(X, n)
    return CohomologyGroup(factors)


def tate_0(H, M):
    """M^H / N_H M."""
    _check_subgroup(H, M)
    n = H.order
    F = M.fixed_basis(H)
    if F.shape[1] == 0:
        return CohomologyGroup()
    X = la.coordinates(F, M.norm(H))
    factors, _ = la.cokernel_mod(X, n)
    return CohomologyGroup(factors)


def h1(H, M):
    """H^1(H, M) by duality with H^-1 of the dual lattice."""
    _check_subgroup(H, M)
    return tate_minus1(H, _dual_cached(M))


def _dual_cached(M):
    D = getattr(M, "_dual", None)
    if D is None:
        D = dual(M)
        M._dual = D
    return D


def h1_cocycles(H, M):
    """H^1(H, M) with explicit generating cocycles.

    Returns (group, [(order, cocycle)]) where each cocycle maps element
    indices of H to integer vectors.  Generators come in pivot order.
    """
    _check_subgroup(H, M)
    n = H.order
    r = M.rank
    gens = H.generators()
    if not gens or r == 0:
        return CohomologyGroup(), []
    A = la.vstack([M.action[s] - la.identity(r) for s in gens], r)
    L = la.hstack([la.kernel_mod(A, n), n * la.identity(r)], r)
    Lb = la.image_basis(L)
    F = M.fixed_basis(H)
    sub = la.hstack([F, n * la.identity(r)], r)
    X = la.coordinates(Lb, sub)
    factors, parts = la.cokernel_mod(X, n, generators=True)
    out = []
    for order, coords in parts:
        m = la.matmul(Lb, coords.reshape(-1, 1)).ravel()
        phi = {}
        for h in H.members:
            v = la.matmul(M.action[h] - la.identity(r), m.reshape(-1, 1)).ravel()
            if np.any(v % n != 0):
                raise VerificationError("divided coboundary is not integral")
            phi[h] = v // n
        out.append((order, phi))
    return CohomologyGroup(factors), out


def h1_bar(H, M):
    """H^1 from the full bar-resolution cocycle equations (oracle route)."""
    _check_subgroup(H, M)
    G = M.group
    r = M.rank
    members = list(H.members)
    pos = {h: i for i, h in enumerate(members)}
    N = len(members) * r
    if N == 0:
        return CohomologyGroup()
    rows = []
    for g in members:
        for h in members:
            gh = G.mult[g][h]
            block = la.zeros(r, N)
            block[:, pos[gh] * r:(pos[gh] + 1) * r] += la.identity(r)
            block[:, pos[g] * r:(pos[g] + 1) * r] -= la.identity(r)
            block[:, pos[h] * r:(pos[h] + 1) * r] -= M.action[g]
            rows.append(block)
    Z = la.kernel_basis(la.vstack(rows, N))
    if Z.shape[1] == 0:
        return CohomologyGroup()
    B = la.vstack([M.action[h] - la.identity(r) for h in members], r)
    X = la.coordinates(Z, B)
    divs = la.elementary_divisors(X)
    if len(divs) != Z.shape[1] or any(d == 0 for d in divs):
        raise VerificationError("cocycles modulo coboundaries is not finite")
    return CohomologyGroup(tuple(d for d in divs if d > 1))


_COMPUTE = {"-1": tate_minus1, "0": tate_0, "1": h1}


def subgroup_invariants(M, degrees=DEGREES, subgroups=None):
    subgroups = class_representatives(M.group) if subgroups is None else subgroups
    return [(H, {d: _COMPUTE[d](H, M) for d in degrees}) for H in subgroups]


@dataclass
class SubgroupCohomologyReport:
    lattice: object
    entries: list  # (Subgroup, {degree: CohomologyGroup})

    def _all_trivial(self, degree):
        return all(e[degree].is_trivial for _, e in self.entries)

    @property
    def coflasque(self):
        return self._all_trivial("1")

    @property
    def flasque(self):
        return self._all_trivial("-1")

    @property
    def h_trivial(self):
        return self.coflasque and self.flasque

    def to_dict(self):
        rows = []
        for H, groups in self.entries:
            row = {"order": H.order, "members": list(H.members)}
            for d, C in sorted(groups.items()):
                row[f"H^{d}"] = C.to_list()
            rows.append(row)
        return {
            "lattice": self.lattice.name,
            "rank": self.lattice.rank,
            "subgroups": rows,
            "flasque": self.flasque,
            "coflasque": self.coflasque,
            "h_trivial": self.h_trivial,
        }


def cohomology_report(M, degrees=DEGREES):
    return SubgroupCohomologyReport(M, subgroup_invariants(M, degrees))


def is_coflasque(M):
    return all(h1(H, M).is_trivial for H in class_representatives(M.group))


def is_flasque(M):
    return all(tate_minus1(H, M).is_trivial for H in class_representatives(M.group))


def is_h_trivial(M):
    return is_flasque(M) and is_coflasque(M)
