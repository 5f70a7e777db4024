"""Conic bundles over the projective line through the Galois action on the
components of their degenerate fibres.

Fibre i (0-based internally) has components l_i and lbar_i, stored as the
points 2i and 2i + 1 of a set of 2r points.  A generator written (pi, c)
first moves fibre i to fibre pi(i) and then swaps the two components of
every fibre j with c_j = 1, so "(123)c2c3" reads left to right.  In the
Picard lattice lbar_i = f - l_i.
"""

from dataclasses import dataclass

from . import linalg as la
from .groups import DEFAULT_MAX_ORDER, close_generators
from .lattice import GLattice, VerificationError


RULE_RATIONAL = "Is1 Thm 4.1"
RULE_NOT_RATIONAL = "Is2 Thm 2"
RATIONAL_HYPOTHESIS = "conic bundle with a rational point and at most 3 degenerate fibres"
NOT_RATIONAL_HYPOTHESIS = "relatively minimal conic bundle with at least 4 degenerate fibres"

XI_MEETS_BAR = "bar"  # the section meets lbar_i, so xi.l_i = 0
XI_MEETS_ELL = "ell"  # the section meets l_i, so xi.l_i = 1


def signed_to_points(perm, flips):
    """Point permutation of (pi, c); c is indexed by the destination fibre."""
    r = len(perm)
    out = [0] * (2 * r)
    for i in range(r):
        for s in (0, 1):
            out[2 * i + s] = 2 * perm[i] + (s ^ flips[perm[i]])
    return out


def points_to_signed(p):
    r = len(p) // 2
    perm, flips = [], [0] * r
    for i in range(r):
        a, b = p[2 * i], p[2 * i + 1]
        if a // 2 != b // 2 or a == b:
            raise ValueError("permutation does not respect the fibres")
        perm.append(a // 2)
        flips[a // 2] = a % 2
    return tuple(perm), tuple(flips)


def signed_name(perm, flips):
    """Cycle notation on fibres (1-based) followed by the component swaps."""
    seen, cycles = set(), []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            seen.add(i)
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = perm[j]
        cycles.append("(" + "".join(map(str, cyc)) + ")")
    swaps = "".join(f"c{i + 1}" for i, c in enumerate(flips) if c)
    return ("".join(cycles) + swaps) or "1"


@dataclass(eq=False)
class FibreAction:
    fibres: int
    group: object  # FiniteGroup on the 2r component points
    signed: list  # (perm, flips) per group element

    def component_orbit(self, H, point):
        G = self.group
        return frozenset(G.elements[h][point] for h in H.members)

    def generator_subgroup(self, k):
        return self.group.subgroup([self.group.generators[k]])

    def to_dict(self):
        G = self.group
        return {
            "fibres": self.fibres,
            "group_order": G.order,
            "generators": [{"perm": [x + 1 for x in self.signed[g][0]],
                            "flips": list(self.signed[g][1]),
                            "name": G.element_names[g]} for g in G.generators],
        }


def build_fibre_action(r, generators, max_order=DEFAULT_MAX_ORDER):
    """Close signed permutations given as (1-based perm images, flips)."""
    if r < 0:
        raise ValueError("fibre count must be nonnegative")
    pts = []
    for perm, flips in generators:
        perm0 = [int(x) - 1 for x in perm]
        if sorted(perm0) != list(range(r)):
            raise ValueError(f"{list(perm)} is not a permutation of 1..{r}")
        flips = [int(x) for x in flips]
        if len(flips) != r or any(x not in (0, 1) for x in flips):
            raise ValueError(f"flips must be {r} entries in {{0, 1}}")
        pts.append(signed_to_points(perm0, flips))
    G = close_generators(2 * r, pts, max_order=max_order, name="fibre action")
    signed = [points_to_signed(p) for p in G.elements]
    G.element_names = [signed_name(*s) for s in signed]
    return FibreAction(r, G, signed)


def fibre_action_from_dict(data, max_order=DEFAULT_MAX_ORDER):
    """Parse {"fibres": r, "generators": [{"perm": [...], "flips": [...]}, ...]}."""
    if not isinstance(data, dict) or "fibres" not in data:
        raise ValueError("fixture needs a 'fibres' field")
    r = data["fibres"]
    if not isinstance(r, int):
        raise ValueError("'fibres' must be an integer")
    gens = []
    for k, g in enumerate(data.get("generators", [])):
        if not isinstance(g, dict) or "perm" not in g:
            raise ValueError(f"generators[{k}] needs a 'perm' field")
        gens.append((g["perm"], g.get("flips", [0] * r)))
    return build_fibre_action(r, gens, max_order=max_order)


# minimal models -------------------------------------------------------------


@dataclass
class MinimalModelReport:
    subgroup: object
    fibres: int
    contraction_sequence: list  # list of orbits, each a sorted list of (fibre, component)
    residual_fibres: int
    relatively_minimal: bool
    terminal_residuals: list
    verdict: str
    rule: str = ""
    hypothesis: str = ""

    def to_dict(self):
        G = self.subgroup.parent
        return {
            "subgroup": [G.element_names[h] if G.element_names else h for h in self.subgroup.members],
            "subgroup_order": self.subgroup.order,
            "fibres": self.fibres,
            "contraction_sequence": [[_component_label(i, s) for i, s in orb]
                                     for orb in self.contraction_sequence],
            "residual_fibres": self.residual_fibres,
            "terminal_residuals": self.terminal_residuals,
            "relatively_minimal": self.relatively_minimal,
            "verdict": self.verdict,
            "rule": self.rule,
            "hypothesis": self.hypothesis,
        }


def _component_label(i, s):
    return f"{'lbar' if s else 'l'}{i + 1}"


def contractible_orbits(A, H, remaining):
    """H-orbits of components with at most one component per remaining fibre."""
    out = []
    seen = set()
    for i in sorted(remaining):
        for s in (0, 1):
            p = 2 * i + s
            if p in seen:
                continue
            orb = A.component_orbit(H, p)
            seen |= orb
            fibres = [q // 2 for q in orb]
            if len(set(fibres)) == len(fibres) and set(fibres) <= remaining:
                out.append(orb)
    return out


def minimal_model(A, H):
    """Exhaustive search over contraction sequences; reports the least residual count."""
    if H.parent is not A.group:
        raise ValueError("subgroup does not belong to the fibre action")
    start = frozenset(range(A.fibres))
    best = {}  # remaining fibres -> (residual, sequence)
    terminals = set()

    def explore(remaining):
        if remaining in best:
            return best[remaining]
        options = contractible_orbits(A, H, remaining)
        if not options:
            terminals.add(len(remaining))
            best[remaining] = (len(remaining), [])
            return best[remaining]
        result = None
        for orb in options:
            rest = remaining - {q // 2 for q in orb}
            r, seq = explore(rest)
            if result is None or r < result[0]:
                result = (r, [orb] + seq)
        best[remaining] = result
        return result

    residual, seq = explore(start)
    relatively_minimal = not contractible_orbits(A, H, start)
    if residual <= 3:
        verdict, rule, hyp = "RATIONAL", RULE_RATIONAL, RATIONAL_HYPOTHESIS
    elif relatively_minimal and A.fibres >= 4:
        verdict, rule, hyp = "NOT_RATIONAL", RULE_NOT_RATIONAL, NOT_RATIONAL_HYPOTHESIS
    else:
        verdict, rule, hyp = "UNKNOWN", "", ""
    sequence = [sorted((q // 2, q % 2) for q in orb) for orb in seq]
    return MinimalModelReport(H, A.fibres, sequence, residual, relatively_minimal,
                              sorted(terminals), verdict, rule, hyp)


# Picard lattice ---------------------------------------------------------------


def intersection_form(r, xi_meets=XI_MEETS_BAR, xi_square=0):
    """Gram matrix on the basis (f, xi, l_1, ..., l_r)."""
    Q = la.zeros(r + 2, r + 2)
    Q[0, 1] = Q[1, 0] = 1
    Q[1, 1] = xi_square
    t = 0 if xi_meets == XI_MEETS_BAR else 1
    for i in range(r):
        Q[2 + i, 2 + i] = -1
        Q[1, 2 + i] = Q[2 + i, 1] = t
    return Q


def _element_matrix(perm, flips, Q):
    """Matrix of one signed permutation on (f, xi, l_1..l_r) preserving Q.

    The images of f and l_i are forced.  The image of xi is pinned down by
    the linear conditions (g xi).(g v) = xi.v for v in f, l_1..l_r (a line
    through one solution in the direction of f) and then by (g xi)^2 = xi^2.
    """
    r = len(perm)
    n = r + 2
    X = la.zeros(n, n)
    X[0, 0] = 1
    for i in range(r):
        j = perm[i]
        if flips[j]:
            X[0, 2 + i] = 1
            X[2 + j, 2 + i] = -1
        else:
            X[2 + j, 2 + i] = 1
    images = [X[:, 0]] + [X[:, 2 + i] for i in range(r)]
    targets = [Q[1, 0]] + [Q[1, 2 + i] for i in range(r)]
    # unknown image x of xi: rows (Q g v)^T x = xi.v
    rows = la.imat([[int(y) for y in la.matmul(Q, v.reshape(-1, 1)).ravel()] for v in images])
    x0 = la.solve_integer(rows, la.ivec(targets))
    if x0 is None:
        return None
    # x = x0 + t f with x.x = xi.xi, and (x0 + t f)^2 = x0^2 + 2 t (x0 . f)
    x0 = la.ivec(x0)
    q0 = int(la.matmul(x0.reshape(1, -1), la.matmul(Q, x0.reshape(-1, 1)))[0, 0])
    xf = int(la.matmul(x0.reshape(1, -1), Q[:, 0].reshape(-1, 1))[0, 0])
    diff = int(Q[1, 1]) - q0
    if xf == 0 or diff % (2 * xf):
        return None
    x = x0.copy()
    x[0] += diff // (2 * xf)
    X[:, 1] = x
    return X


class NoConsistentExtension(ValueError):
    pass


def picard_lattice(A, xi_meets=XI_MEETS_BAR, xi_square=0):
    """Pic of the conic bundle as a G-lattice with its intersection form."""
    r = A.fibres
    Q = intersection_form(r, xi_meets, xi_square)
    action = []
    for g, (perm, flips) in enumerate(A.signed):
        X = _element_matrix(perm, flips, Q)
        if X is None:
            raise NoConsistentExtension(
                f"no image of the section class for {A.group.element_names[g]}: "
                f"flip count {sum(flips)} is odd or the convention is inconsistent")
        action.append(X)
    P = GLattice(A.group, action, name="Pic", form=Q)
    P.convention = {"basis": ["f", "xi"] + [f"l{i + 1}" for i in range(r)],
                    "xi_meets": xi_meets, "xi_square": xi_square}
    try:
        P.check()
    except VerificationError as exc:
        raise NoConsistentExtension(str(exc)) from exc
    return P


def picard_extensions(A, xi_squares=(-1, 0, 1)):
    """Every section convention the artifact supports, as (label, lattice)."""
    out = []
    for meets in (XI_MEETS_BAR, XI_MEETS_ELL):
        for s in xi_squares:
            out.append((f"xi meets {meets}, xi^2 = {s}", picard_lattice(A, meets, s)))
    return out


def picard_fixed_rank(P, H):
    return int(P.fixed_basis(H).shape[1])


def check_extension_invariance(A, subgroups):
    """H^1 of every subgroup across all conventions; raises on disagreement."""
    from .cohomology import h1
    table = {}
    for label, P in picard_extensions(A):
        row = tuple(h1(H, P) for H in subgroups)
        table[label] = row
    values = set(table.values())
    if len(values) != 1:
        raise VerificationError(f"H^1 depends on the section convention: {table}")
    return next(iter(values))


def conic_report(A, subgroups):
    """Minimal models, fixed ranks and H^1 of Pic for each subgroup."""
    from .cohomology import h1
    P = picard_lattice(A)
    rows = []
    for H in subgroups:
        mm = minimal_model(A, H)
        rank = picard_fixed_rank(P, H)
        rows.append({**mm.to_dict(), "picard_fixed_rank": rank,
                     "h1_pic": str(h1(H, P)),
                     "fixed_rank_consistent": (rank == 2) == mm.relatively_minimal})
    return {"action": A.to_dict(), "picard_convention": P.convention, "subgroups": rows}


@dataclass
class ConsistencyFailure:
    subgroup: tuple
    relatively_minimal: bool
    fixed_rank: int


def minimality_cross_check(A, subgroups):
    """Subgroups where relative minimality and fixed rank 2 disagree."""
    P = picard_lattice(A)
    out = []
    for H in subgroups:
        mm = minimal_model(A, H)
        k = picard_fixed_rank(P, H)
        if (k == 2) != mm.relatively_minimal:
            out.append(ConsistencyFailure(H.members, mm.relatively_minimal, k))
    return out
