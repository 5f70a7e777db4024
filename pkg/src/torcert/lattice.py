"""G-lattices: free Z-modules of finite rank with a finite group acting by
unimodular matrices, plus the constructors needed to build character
modules of tori and their resolutions.

The action is stored for every group element (not just generators).
"""

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .groups import Subgroup


class VerificationError(RuntimeError):
    """An internally constructed object failed its own exact re-check."""


@dataclass(eq=False)
class GLattice:
    group: object
    action: list
    name: str = ""
    # for lattices built as a sum of coset lattices: the subgroups, in block order
    permutation_type: list = None
    # optional invariant bilinear form (Picard lattices)
    form: object = None
    _fixed_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(self.action) != self.group.order:
            raise ValueError("need one action matrix per group element")
        n = self.action[0].shape[0] if self.action else 0
        for A in self.action:
            if A.shape != (n, n):
                raise ValueError("action matrices must be square of equal size")

    @property
    def rank(self):
        return self.action[0].shape[0]

    def __repr__(self):
        return f"GLattice({self.name or '?'}, rank={self.rank}, group={self.group!r})"

    def __call__(self, g):
        return self.action[g]

    def check(self):
        """Exhaustive homomorphism check; raises VerificationError."""
        G = self.group
        if not la.mat_equal(self.action[G.identity], la.identity(self.rank)):
            raise VerificationError(f"{self.name}: identity does not act trivially")
        for a in range(G.order):
            for b in range(G.order):
                lhs = la.matmul(self.action[a], self.action[b])
                if not la.mat_equal(lhs, self.action[G.mult[a][b]]):
                    raise VerificationError(f"{self.name}: action is not a homomorphism")
        if self.form is not None:
            for A in self.action:
                if not la.mat_equal(la.matmul(la.matmul(A.T, self.form), A), self.form):
                    raise VerificationError(f"{self.name}: action does not preserve the form")
        return self

    def traces(self):
        return tuple(int(sum(A[i, i] for i in range(self.rank))) for A in self.action)

    def norm(self, H):
        out = la.zeros(self.rank, self.rank)
        for h in H.members:
            out = out + self.action[h]
        return out

    def relation_matrix(self, H):
        """Columns spanning I_H * M: (s - 1) for generators s of H."""
        n = self.rank
        blocks = [self.action[s] - la.identity(n) for s in H.generators()]
        return la.hstack(blocks, n)

    def fixed_basis(self, H):
        key = H.members
        if key not in self._fixed_cache:
            n = self.rank
            gens = H.generators()
            if not gens:
                B = la.identity(n)
            else:
                stack = la.vstack([self.action[s] - la.identity(n) for s in gens], n)
                B = la.kernel_basis(stack)
            self._fixed_cache[key] = B
        return self._fixed_cache[key]

    def to_dict(self):
        G = self.group
        return {
            "name": self.name,
            "rank": self.rank,
            "group": G.name,
            "group_order": G.order,
            "generator_action": [_mat_list(self.action[g]) for g in G.generators],
        }


def _mat_list(A):
    return [[int(x) for x in row] for row in A]


@dataclass(eq=False)
class EquivariantMap:
    source: GLattice
    target: GLattice
    matrix: np.ndarray

    def check(self):
        if self.matrix.shape != (self.target.rank, self.source.rank):
            raise VerificationError("map has the wrong shape")
        for g in range(self.source.group.order):
            lhs = la.matmul(self.matrix, self.source.action[g])
            rhs = la.matmul(self.target.action[g], self.matrix)
            if not la.mat_equal(lhs, rhs):
                raise VerificationError("map is not equivariant")
        return self

    def is_isomorphism(self):
        return self.matrix.shape[0] == self.matrix.shape[1] and la.is_unimodular(self.matrix)


# constructors -------------------------------------------------------------


def from_generator_action(group, generator_matrices, name="", check=True):
    """Close matrices given on ``group.generators`` to the whole group."""
    mats = [la.imat(m) for m in generator_matrices]
    if len(mats) != len(group.generators):
        raise ValueError(f"expected {len(group.generators)} generator matrices, got {len(mats)}")
    n = mats[0].shape[0] if mats else 0
    action = [None] * group.order
    action[group.identity] = la.identity(n)
    for i, w in enumerate(group.words):
        if w is None:
            continue
        s, j = w
        action[i] = la.matmul(mats[s], action[j])
    M = GLattice(group, action, name=name)
    if check:
        M.check()
        for s, g in enumerate(group.generators):
            if not la.mat_equal(M.action[g], mats[s]):
                raise VerificationError("generator matrices are inconsistent with the group")
    return M


def trivial_lattice(G, rank=1):
    return GLattice(G, [la.identity(rank) for _ in range(G.order)], name="Z" if rank == 1 else f"Z^{rank}")


def sign_lattice(G, kernel):
    """Rank-1 lattice on which elements outside the index-2 subgroup act by -1."""
    if kernel.index != 2:
        raise ValueError("sign lattice needs an index-2 subgroup")
    action = [la.imat([[1 if g in kernel else -1]]) for g in range(G.order)]
    return GLattice(G, action, name="Z-")


def permutation_lattice(G, H):
    """Z[G/H] with basis the left cosets in representative order."""
    reps, which = H.cosets()
    m = len(reps)
    action = []
    for g in range(G.order):
        A = la.zeros(m, m)
        for i, c in enumerate(reps):
            A[which[G.mult[g][c]], i] = 1
        action.append(A)
    name = "Z" if m == 1 else (f"Z[G]" if H.order == 1 else f"Z[G/H{H.order}]")
    return GLattice(G, action, name=name, permutation_type=[H])


def permutation_sum(G, subgroups):
    """Direct sum of Z[G/H] over the given list (repetitions allowed)."""
    if not subgroups:
        return GLattice(G, [la.zeros(0, 0) for _ in range(G.order)], name="0", permutation_type=[])
    parts = [permutation_lattice(G, H) for H in subgroups]
    S = direct_sum(*parts)
    S.permutation_type = list(subgroups)
    S.name = " + ".join(p.name for p in parts)
    return S


def _require_permutation(P):
    if not all(la.is_permutation_matrix(A) for A in P.action):
        raise ValueError("input is not a permutation lattice")


def augmentation_quotient(P):
    """P / Z(sum of basis vectors), on the basis images of e_1..e_{n-1}."""
    _require_permutation(P)
    n = P.rank
    ones = la.imat([[1] for _ in range(n)])
    return quotient(P, ones, name=f"{P.name}/Z")


def augmentation_kernel(P):
    """ker(P -> Z), the augmentation sublattice."""
    _require_permutation(P)
    n = P.rank
    K = la.kernel_basis(la.imat([[1] * n]))
    return sublattice(P, K, name=f"I({P.name})")


def sublattice(M, B, name=""):
    """Restricted action on a G-stable saturated sublattice with basis columns B."""
    B = la.imat(B)
    P = la.left_inverse(B)
    action = []
    for A in M.action:
        image = la.matmul(A, B)
        X = la.matmul(P, image)
        if not la.mat_equal(la.matmul(B, X), image):
            raise VerificationError("sublattice is not stable under the group")
        action.append(X)
    return GLattice(M.group, action, name=name or f"sub({M.name})")


def quotient(M, B, name=""):
    """M / span(B) for a G-stable saturated sublattice, on a complement basis."""
    B = la.imat(B)
    k = B.shape[1]
    Q, Qi = la.complement(B)
    proj, sect = Qi[k:], Q[:, k:]
    action = []
    for A in M.action:
        image = la.matmul(A, B)
        coords = la.matmul(Qi, image)
        if np.any(coords[k:] != 0):
            raise VerificationError("killed sublattice is not stable under the group")
        action.append(la.matmul(la.matmul(proj, A), sect))
    out = GLattice(M.group, action, name=name or f"{M.name}/sub")
    out.projection = proj
    return out


def dual(M):
    """Hom(M, Z): g acts by the inverse transpose."""
    G = M.group
    action = [M.action[G.inverse[g]].T.copy() for g in range(G.order)]
    name = M.name[:-1] if M.name.endswith("'") else M.name + "'"
    ptype = M.permutation_type if M.permutation_type is not None else None
    return GLattice(G, action, name=name, permutation_type=ptype, form=None)


def direct_sum(*lattices):
    if not lattices:
        raise ValueError("empty direct sum")
    G = lattices[0].group
    if any(L.group is not G for L in lattices):
        raise ValueError("direct sum of lattices over different groups")
    action = [la.block_diag(*[L.action[g] for L in lattices]) for g in range(G.order)]
    ptype = None
    if all(L.permutation_type is not None for L in lattices):
        ptype = [H for L in lattices for H in L.permutation_type]
    return GLattice(G, action, name=" + ".join(L.name for L in lattices), permutation_type=ptype)


def restrict(M, H):
    """M viewed as a lattice over H (H turned into a group of its own)."""
    sub, members = H.as_group()
    return GLattice(sub, [M.action[g] for g in members], name=f"{M.name}|H{H.order}")


def fixed_sublattice(M, H):
    """M^H as a lattice over H (on which H acts trivially)."""
    B = M.fixed_basis(H)
    sub, _ = H.as_group()
    k = B.shape[1]
    return GLattice(sub, [la.identity(k) for _ in range(sub.order)], name=f"{M.name}^H{H.order}")


# equivariant maps ----------------------------------------------------------


def equivariant_hom_basis(A, B):
    """Z-basis of Hom_G(A, B) as EquivariantMaps (kernel of commutation constraints)."""
    if A.group is not B.group:
        raise ValueError("lattices over different groups")
    a, b = A.rank, B.rank
    if a == 0 or b == 0:
        return []
    rows = []
    for g in A.group.generators:
        Ag, Bg = A.action[g], B.action[g]
        # (X A_g - B_g X)_{ij} as a linear form in vec(X), X_{kl} -> index k*a + l
        for i in range(b):
            for j in range(a):
                row = [0] * (a * b)
                for k in range(a):
                    if Ag[k, j]:
                        row[i * a + k] += Ag[k, j]
                for k in range(b):
                    if Bg[i, k]:
                        row[k * a + j] -= Bg[i, k]
                rows.append(row)
    if not rows:
        K = la.identity(a * b)
    else:
        K = la.kernel_basis(la.imat(rows))
    maps = []
    for c in range(K.shape[1]):
        X = K[:, c].reshape(b, a).copy()
        maps.append(EquivariantMap(A, B, la.imat(X)).check())
    return maps


@dataclass
class IsoResult:
    status: str  # ISOMORPHIC | NOT_ISOMORPHIC | UNKNOWN
    witness: EquivariantMap = None
    reason: str = ""

    def to_dict(self):
        out = {"status": self.status, "reason": self.reason}
        if self.witness is not None:
            out["witness"] = _mat_list(self.witness.matrix)
        return out


def separating_invariant(A, B, degrees=("-1", "0", "1")):
    """A computable invariant on which A and B differ, or None."""
    if A.rank != B.rank:
        return f"rank {A.rank} != {B.rank}"
    ta, tb = A.traces(), B.traces()
    for g, (x, y) in enumerate(zip(ta, tb)):
        if x != y:
            return f"trace of element {g}: {x} != {y}"
    from .cohomology import subgroup_invariants
    ia = subgroup_invariants(A, degrees)
    ib = subgroup_invariants(B, degrees)
    for (H, da), (_, db) in zip(ia, ib):
        for deg in degrees:
            if da[deg] != db[deg]:
                return (f"H^{deg} over subgroup {list(H.members)}: "
                        f"{da[deg]} != {db[deg]}")
    return None


def equivariant_isomorphism_search(A, B, bound=3, seed=0, trials=2000, max_enumerate=20000):
    """Bounded search for a unimodular equivariant map A -> B.

    NOT_ISOMORPHIC only when a computable invariant separates A and B.
    When B carries a permutation type the search runs over permutation bases.
    """
    if A.group is not B.group:
        raise ValueError("lattices over different groups")
    if A.rank == B.rank and all(la.mat_equal(x, y) for x, y in zip(A.action, B.action)):
        return IsoResult("ISOMORPHIC", EquivariantMap(A, B, la.identity(A.rank)).check(), "identical")
    reason = separating_invariant(A, B)
    if reason is not None:
        return IsoResult("NOT_ISOMORPHIC", reason=reason)
    if B.permutation_type is not None:
        phi = find_permutation_basis(A, B.permutation_type, bound=bound, seed=seed, trials=trials)
        if phi is not None:
            inv = la.unimodular_inverse(phi.matrix)
            return IsoResult("ISOMORPHIC", EquivariantMap(A, B, inv).check(), "permutation basis")
    if A.permutation_type is not None:
        phi = find_permutation_basis(B, A.permutation_type, bound=bound, seed=seed, trials=trials)
        if phi is not None:
            return IsoResult("ISOMORPHIC", EquivariantMap(A, B, phi.matrix).check(), "permutation basis")
    basis = equivariant_hom_basis(A, B)
    mats = [f.matrix for f in basis]
    if not mats:
        return IsoResult("UNKNOWN", reason="no equivariant maps")
    for coeffs in _small_coefficients(len(mats), bound, max_enumerate):
        X = _combine(mats, coeffs)
        if la.is_unimodular(X):
            return IsoResult("ISOMORPHIC", EquivariantMap(A, B, X).check(), "enumeration")
    rng = random.Random(seed)
    for _ in range(trials):
        coeffs = [rng.randint(-bound, bound) for _ in mats]
        X = _combine(mats, coeffs)
        if la.is_unimodular(X):
            return IsoResult("ISOMORPHIC", EquivariantMap(A, B, X).check(), "random trial")
    return IsoResult("UNKNOWN", reason=f"no unimodular map found (bound {bound}, {trials} trials)")


def _combine(mats, coeffs):
    X = la.zeros(*mats[0].shape)
    for c, m in zip(coeffs, mats):
        if c:
            X = X + c * m
    return X


def _small_coefficients(k, bound, limit):
    """Coefficient vectors by growing support, then growing magnitude."""
    count = 0
    for mag in range(1, bound + 1):
        values = [v for v in range(-mag, mag + 1) if v != 0]
        for support in range(1, k + 1):
            for pos in itertools.combinations(range(k), support):
                for vals in itertools.product(values, repeat=support):
                    if max(abs(v) for v in vals) != mag:
                        continue
                    coeffs = [0] * k
                    for p, v in zip(pos, vals):
                        coeffs[p] = v
                    yield coeffs
                    count += 1
                    if count >= limit:
                        return


def _candidate_vectors(F, bound, limit):
    """Integer combinations of the columns of F, small ones first."""
    f = F.shape[1]
    out = []
    for coeffs in _small_coefficients(f, bound, limit):
        out.append(la.matmul(F, la.ivec(coeffs).reshape(f, 1)).ravel())
    return out


def orbit_columns(X, H, v):
    """Columns g*v over the coset representatives of G/H."""
    reps, _ = H.cosets()
    return [la.matmul(X.action[c], v.reshape(-1, 1)).ravel() for c in reps]


def find_permutation_basis(X, subgroups, bound=3, seed=0, trials=2000,
                           max_candidates=400, max_nodes=200000):
    """Look for an isomorphism from the sum of Z[G/H] (over ``subgroups``) onto X.

    Hom_G(Z[G/H], X) = X^H, so the map is determined by one H-fixed vector per
    block.  Backtracking keeps the chosen columns primitive, which is exactly
    the condition for extending to a basis.
    Returns the EquivariantMap (permutation lattice -> X) or None.
    """
    G = X.group
    total = sum(H.index for H in subgroups)
    if total != X.rank:
        return None
    S = permutation_sum(G, list(subgroups))
    if X.rank == 0:
        return EquivariantMap(S, X, la.zeros(0, 0))
    order = sorted(range(len(subgroups)), key=lambda i: -subgroups[i].index)
    cands = {}
    for i in order:
        H = subgroups[i]
        if H.members not in cands:
            F = X.fixed_basis(H)
            if F.shape[1] == 0:
                return None
            cands[H.members] = [orbit_columns(X, H, v)
                                for v in _candidate_vectors(F, bound, max_candidates)]
    chosen = [None] * len(subgroups)
    nodes = [0]

    def extend(depth, cols):
        if depth == len(order):
            return True
        i = order[depth]
        for orbit in cands[subgroups[i].members]:
            nodes[0] += 1
            if nodes[0] > max_nodes:
                return False
            trial = cols + orbit
            M = np.array(trial, dtype=object).T
            if not la.is_saturated_basis(M):
                continue
            chosen[i] = orbit
            if extend(depth + 1, trial):
                return True
        return False

    found = extend(0, [])
    if not found:
        rng = random.Random(seed)
        fixed = {key: X.fixed_basis(H) for H in subgroups for key in [H.members]}
        for _ in range(trials):
            cols = []
            for i in range(len(subgroups)):
                H = subgroups[i]
                F = fixed[H.members]
                v = la.matmul(F, la.ivec([rng.randint(-bound, bound) for _ in range(F.shape[1])]).reshape(-1, 1)).ravel()
                chosen[i] = orbit_columns(X, H, v)
            M = np.array([c for orb in chosen for c in orb], dtype=object).T
            if la.is_unimodular(M):
                found = True
                break
    if not found:
        return None
    M = la.imat(np.array([c for orb in chosen for c in orb], dtype=object).T)
    phi = EquivariantMap(S, X, M).check()
    if not phi.is_isomorphism():
        raise VerificationError("permutation basis search returned a non-unimodular map")
    return phi


# extensions ---------------------------------------------------------------


def check_cocycle(M, H, cocycle):
    G = M.group
    for a in H.members:
        for b in H.members:
            lhs = cocycle[G.mult[a][b]]
            rhs = cocycle[a] + la.matmul(M.action[a], cocycle[b].reshape(-1, 1)).ravel()
            if np.any(lhs != rhs):
                return False
    return True


def extension_from_cocycle(M, H, cocycle):
    """M' = M + Z[G/H] with g.(0, e_i) = (c_j phi(h), e_j) where g c_i = c_j h.

    Fits in 0 -> M -> M' -> Z[G/H] -> 0; the connecting map sends the coset
    H itself to the class of ``cocycle`` in H^1(H, M).
    """
    G = M.group
    n = M.rank
    cocycle = {h: la.ivec(v) for h, v in cocycle.items()}
    if set(cocycle) != set(H.members):
        raise ValueError("cocycle must be given on every element of H")
    if any(v.shape != (n,) for v in cocycle.values()):
        raise ValueError("cocycle values must have the lattice rank")
    if not check_cocycle(M, H, cocycle):
        raise ValueError("cocycle condition violated")
    reps, which = H.cosets()
    m = len(reps)
    action = []
    for g in range(G.order):
        A = la.zeros(n + m, n + m)
        A[:n, :n] = M.action[g]
        for i, c in enumerate(reps):
            gc = G.mult[g][c]
            j = which[gc]
            h = G.mult[G.inverse[reps[j]]][gc]
            A[:n, n + i] = la.matmul(M.action[reps[j]], cocycle[h].reshape(-1, 1)).ravel()
            A[n + j, n + i] = 1
        action.append(A)
    out = GLattice(G, action, name=f"{M.name}~H{H.order}")
    try:
        out.check()
    except VerificationError as exc:
        raise VerificationError(f"extension is not a G-lattice: {exc}") from exc
    return out
