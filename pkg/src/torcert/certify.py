"""Rationality-obstruction verdicts for tori computed from their character lattices.

Searches give tri-state answers.  A NO always comes with an invariant
that separates M from every lattice with the property, and a YES always
comes with an exact witness that has been re-checked.
"""

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .cohomology import (class_representatives, cohomology_report, h1,
                         tate_minus1)
from .groups import Subgroup, is_cyclic
from .lattice import (EquivariantMap, VerificationError, direct_sum,
                      find_permutation_basis, permutation_sum)
from .resolutions import flasque_resolution

YES, NO, UNKNOWN = "YES", "NO", "UNKNOWN"

DEFAULT_ISO_BOUND = 2
# beyond this rank the basis search is hopeless, so we answer UNKNOWN at once
MAX_SEARCH_RANK = 40
MAX_DECOMPOSITIONS = 50
MAX_CHARACTER_NODES = 200_000


@dataclass
class TriState:
    status: str
    witness: EquivariantMap = None
    invariant: str = ""
    detail: str = ""

    def __bool__(self):
        return self.status == YES

    def to_dict(self):
        out = {"status": self.status}
        if self.invariant:
            out["invariant"] = self.invariant
        if self.detail:
            out["detail"] = self.detail
        if self.witness is not None:
            out["witness"] = [[int(x) for x in row] for row in self.witness.matrix]
        return out


# permutation characters ----------------------------------------------------


def permutation_character(G, H):
    """Number of fixed cosets of every element on G/H."""
    reps, which = H.cosets()
    return [sum(1 for c in reps if which[G.mult[g][c]] == which[c]) for g in range(G.order)]


def character_decompositions(G, chi, limit=MAX_DECOMPOSITIONS, max_nodes=MAX_CHARACTER_NODES):
    """Nonnegative integer solutions of chi = sum a_H * chi_{G/H}.

    Returns (solutions, exhausted): each solution is a tuple of coefficients
    over class_representatives(G); exhausted is False if a cap was hit.
    """
    reps = class_representatives(G)
    # large subgroups first: their characters are supported everywhere
    order = sorted(range(len(reps)), key=lambda i: (reps[i].index, i))
    chars = [permutation_character(G, reps[i]) for i in order]
    # after position k, an element g can no longer be covered if no later
    # character is positive on it
    last = [max((k for k, c in enumerate(chars) if c[g] > 0), default=-1)
            for g in range(G.order)]
    chi = list(chi)
    if any(x < 0 for x in chi) or any(chi[g] and last[g] < 0 for g in range(G.order)):
        return [], True
    solutions = []
    nodes = [0]
    coeffs = [0] * len(order)
    capped = [False]

    def go(k, resid):
        if len(solutions) >= limit or nodes[0] >= max_nodes:
            capped[0] = True
            return
        nodes[0] += 1
        if k == len(order):
            if all(x == 0 for x in resid):
                out = [0] * len(reps)
                for pos, i in enumerate(order):
                    out[i] = coeffs[pos]
                solutions.append(tuple(out))
            return
        c = chars[k]
        top = min(resid[g] // c[g] for g in range(G.order) if c[g] > 0)
        for a in range(top, -1, -1):
            new = [r - a * x for r, x in zip(resid, c)]
            if any(new[g] != 0 for g in range(G.order) if last[g] == k):
                continue
            coeffs[k] = a
            go(k + 1, new)
        coeffs[k] = 0

    go(0, chi)
    ordered = sorted(solutions, key=lambda s: (sum(s), s))
    return ordered, not capped[0]


def subgroups_of(G, coeffs):
    reps = class_representatives(G)
    return [H for H, a in zip(reps, coeffs) for _ in range(a)]


def _h_obstruction(M):
    """A nonzero H^1 or H^-1 on some subgroup, described as a string, or ''."""
    for H in class_representatives(M.group):
        for name, fn in (("H^1", h1), ("H^-1", tate_minus1)):
            C = fn(H, M)
            if not C.is_trivial:
                return f"{name}(subgroup of order {H.order} {list(H.members)}) = {C}"
    return ""


def _orbit_witness(M):
    """Witness for a lattice whose action matrices already permute the basis."""
    G = M.group
    seen = set()
    blocks, cols = [], []
    for i in range(M.rank):
        if i in seen:
            continue
        stab = tuple(g for g in range(G.order) if M.action[g][i, i] == 1)
        H = Subgroup(G, stab)
        reps, _ = H.cosets()
        blocks.append(H)
        for c in reps:
            j = int(np.flatnonzero(M.action[c][:, i])[0])
            seen.add(j)
            col = la.zeros(M.rank, 1).ravel()
            col[j] = 1
            cols.append(col)
    S = permutation_sum(G, blocks)
    phi = EquivariantMap(S, M, la.imat(np.array(cols, dtype=object).T)).check()
    if not phi.is_isomorphism():
        raise VerificationError("orbit witness is not unimodular")
    return phi


def is_permutation_lattice(M, bound=DEFAULT_ISO_BOUND, seed=0, _obstruction=None):
    """Does M have a Z-basis permuted by the group?"""
    G = M.group
    if all(la.is_permutation_matrix(A) for A in M.action):
        return TriState(YES, _orbit_witness(M), detail="standard basis is permuted")
    chi = M.traces()
    sols, exhausted = character_decompositions(G, chi)
    if not sols and exhausted:
        return TriState(NO, invariant="character is not a sum of transitive permutation characters")
    obstruction = _h_obstruction(M) if _obstruction is None else _obstruction
    if obstruction:
        return TriState(NO, invariant=obstruction)
    if M.rank > MAX_SEARCH_RANK:
        return TriState(UNKNOWN, detail=f"rank {M.rank} exceeds the search limit")
    for coeffs in sols:
        phi = find_permutation_basis(M, subgroups_of(G, coeffs), bound=bound, seed=seed)
        if phi is not None:
            return TriState(YES, phi, detail=f"permutation type {list(coeffs)}")
    return TriState(UNKNOWN, detail=f"no permutation basis found (bound {bound})")


def _summand_multisets(G, budget):
    """Multisets of transitive permutation lattices of total rank <= budget.

    Canonical order: by total rank, then lexicographically by class index.
    """
    reps = class_representatives(G)
    out = []

    def go(start, left, chosen):
        out.append(tuple(chosen))
        for i in range(start, len(reps)):
            if reps[i].index <= left:
                go(i, left - reps[i].index, chosen + [i])

    go(0, budget, [])
    return sorted(out, key=lambda s: (sum(reps[i].index for i in s), s))


def default_rank_budget(M):
    return 2 * M.rank + M.group.order


def is_stably_permutation(M, rank_budget=None, bound=DEFAULT_ISO_BOUND, seed=0,
                          max_attempts=200, _obstruction=None):
    """Search for M + S1 = S2 with S1, S2 permutation lattices."""
    G = M.group
    obstruction = _h_obstruction(M) if _obstruction is None else _obstruction
    if obstruction:
        return TriState(NO, invariant=obstruction)
    direct = is_permutation_lattice(M, bound=bound, seed=seed, _obstruction="")
    if direct.status == YES:
        return TriState(YES, direct.witness, detail="already permutation (S1 = 0)")
    if rank_budget is None:
        rank_budget = default_rank_budget(M)
    reps = class_representatives(G)
    budget = min(rank_budget, MAX_SEARCH_RANK - M.rank)
    if budget < 1:
        return TriState(UNKNOWN, detail=f"rank {M.rank} leaves no room under the search limit")
    attempts = 0
    for s1 in _summand_multisets(G, budget):
        if not s1:
            continue
        P1 = permutation_sum(G, [reps[i] for i in s1])
        X = direct_sum(M, P1)
        sols, _ = character_decompositions(G, X.traces())
        for coeffs in sols:
            attempts += 1
            if attempts > max_attempts:
                return TriState(UNKNOWN, detail=f"gave up after {max_attempts} attempts")
            phi = find_permutation_basis(X, subgroups_of(G, coeffs), bound=bound, seed=seed)
            if phi is not None:
                s1_orders = [reps[i].order for i in s1]
                return TriState(YES, phi, detail=(
                    f"M + S1 = S2 with S1 over subgroups of orders {s1_orders}, "
                    f"S2 of type {list(coeffs)}"))
    return TriState(UNKNOWN, detail=f"no witness within rank budget {rank_budget}")


# torus certificates ----------------------------------------------------------


@dataclass
class TorusCertificate:
    character_lattice: object
    resolution: object
    flags: dict
    report: object  # SubgroupCohomologyReport of the flasque kernel
    unramified_brauer: object  # H^1(G, F)
    citations: list = field(default_factory=list)

    @property
    def br_trivial(self):
        return self.flags["br_trivial"]

    def verify(self):
        self.resolution.verify()
        for key in ("stably_permutation", "invertible"):
            v = self.flags[key]
            if v.status == YES and v.witness is not None:
                v.witness.check()
                if not v.witness.is_isomorphism():
                    raise VerificationError(f"{key} witness is not unimodular")
        return self

    def to_dict(self, include_resolution=True):
        flags = {}
        for k, v in sorted(self.flags.items()):
            flags[k] = v.to_dict() if isinstance(v, TriState) else v
        out = {
            "lattice": self.character_lattice.name,
            "rank": self.character_lattice.rank,
            "group_order": self.character_lattice.group.order,
            "flasque_kernel_rank": self.resolution.right.rank,
            "flags": flags,
            "unramified_brauer_group": str(self.unramified_brauer),
            "flasque_kernel_cohomology": self.report.to_dict(),
            "citations": list(self.citations),
        }
        if include_resolution:
            out["resolution"] = self.resolution.to_dict()
        return out


def certify_torus(M, iso_bound=DEFAULT_ISO_BOUND, rank_budget=None, seed=0, citations=()):
    """Flasque resolution of M plus every verdict that can be read off from it."""
    R = flasque_resolution(M)
    F = R.right
    report = cohomology_report(F, degrees=("-1", "1"))
    h_trivial = report.h_trivial
    obstruction = ""
    for H, groups in report.entries:
        for d in ("1", "-1"):
            if not obstruction and not groups[d].is_trivial:
                obstruction = f"H^{d}(subgroup of order {H.order} {list(H.members)}) = {groups[d]}"
    if rank_budget is None:
        rank_budget = default_rank_budget(F)
    stably = is_stably_permutation(F, rank_budget=rank_budget, bound=iso_bound, seed=seed,
                                   _obstruction=obstruction)
    if not h_trivial:
        invertible = TriState(NO, invariant=stably.invariant or "flasque kernel is not H-trivial")
    elif stably.status == YES:
        invertible = TriState(YES, stably.witness, detail="stably permutation modules are invertible")
    else:
        invertible = TriState(UNKNOWN, detail="no direct-summand witness found")
    flags = {
        "flasque_kernel_h_trivial": h_trivial,
        "br_trivial": h_trivial,
        "stably_permutation": stably,
        "invertible": invertible,
    }
    cert = TorusCertificate(M, R, flags, report, h1(M.group.whole(), F),
                            citations=[dict(c, cited_only=True) for c in citations])
    return cert.verify()


# local rationality -------------------------------------------------------------

RULE_DIMENSION = "dimension<=2"
RULE_QUADRATIC = "quadratic-splitting"
RULE_2S5T = "cyclic-2^s5^t"
RULE_CITATIONS = {
    RULE_DIMENSION: "Voskresenskii: all tori of dimension 1 or 2 are rational",
    RULE_QUADRATIC: ("split by a quadratic extension, hence a product of tori of "
                     "dimension 1 and 2, hence rational (Voskresenskii)"),
    RULE_2S5T: "tori split by a cyclic extension of degree 2^s 5^t are rational (cited result)",
}


def _is_2s5t(n):
    for p in (2, 5):
        while n % p == 0:
            n //= p
    return n == 1


def _rule_applies(rule, rank, n):
    if rule == RULE_DIMENSION:
        return rank <= 2
    if rule == RULE_QUADRATIC:
        return n <= 2
    return _is_2s5t(n)


RULE_ORDER = (RULE_DIMENSION, RULE_QUADRATIC, RULE_2S5T)


@dataclass(frozen=True)
class LocalEntry:
    subgroup: Subgroup
    quotient_order: int
    rule: str
    verdict: str

    def to_dict(self):
        return {"subgroup": list(self.subgroup.members), "order": self.subgroup.order,
                "faithful_quotient_order": self.quotient_order, "rule": self.rule,
                "citation": RULE_CITATIONS.get(self.rule, ""), "verdict": self.verdict}


@dataclass
class LocalRationalityReport:
    lattice: object
    entries: list

    @property
    def all_rational(self):
        return all(e.verdict == "RATIONAL" for e in self.entries)

    def to_dict(self):
        return {"lattice": self.lattice.name, "all_rational": self.all_rational,
                "entries": [e.to_dict() for e in self.entries]}


def faithful_quotient_order(M, C):
    I = la.identity(M.rank)
    kernel = [h for h in C.members if la.mat_equal(M.action[h], I)]
    return C.order // len(kernel)


def local_rationality_report(M):
    """Rationality of M restricted to each cyclic subgroup class.

    One rule is used for the whole report when a single rule covers every
    class (tried in RULE_ORDER); otherwise each entry takes the first rule
    that applies to it.
    """
    cyclic = [C for C in class_representatives(M.group) if is_cyclic(C)[0]]
    data = [(C, faithful_quotient_order(M, C)) for C in cyclic]
    uniform = next((r for r in RULE_ORDER
                    if all(_rule_applies(r, M.rank, n) for _, n in data)), None)
    entries = []
    for C, n in data:
        rule = uniform or next((r for r in RULE_ORDER if _rule_applies(r, M.rank, n)), "")
        entries.append(LocalEntry(C, n, rule, "RATIONAL" if rule else "UNKNOWN"))
    return LocalRationalityReport(M, entries)
