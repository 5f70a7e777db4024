"""Finite groups as explicit element tables.

Every group is realized concretely as a permutation group.  Elements are
enumerated breadth-first from the identity, so closing the same generators
twice gives identical tables.  Composition is right-to-left:
``(p * q)(i) = p[q[i]]``.
"""

from collections import deque
from dataclasses import dataclass, field

DEFAULT_MAX_ORDER = 10_000


class GroupOrderError(ValueError):
    pass


def compose(p, q):
    return tuple(p[i] for i in q)


def check_perm(p, degree):
    if sorted(p) != list(range(degree)):
        raise ValueError(f"not a permutation of 0..{degree - 1}: {list(p)}")


@dataclass(eq=False)
class FiniteGroup:
    """Element table of a finite group.

    ``words[i]`` is ``(s, j)`` meaning element ``i`` equals
    ``generators[s] * element j`` (``None`` for the identity); lattices given
    by generator matrices are closed along these words.
    """

    elements: list
    mult: list
    inverse: list
    identity: int
    generators: list
    words: list
    name: str = ""
    element_names: list = None

    @property
    def order(self):
        return len(self.elements)

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def element_order(self, g):
        k, x = 1, g
        while x != self.identity:
            x = self.mult[g][x]
            k += 1
        return k

    def conjugate(self, g, members):
        gi = self.inverse[g]
        return tuple(sorted(self.mult[self.mult[g][h]][gi] for h in members))

    def generate(self, gens):
        """Indices of the subgroup generated by ``gens``, sorted."""
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for s in gens:
                y = self.mult[s][x]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return tuple(sorted(seen))

    def whole(self):
        return Subgroup(self, tuple(range(self.order)))

    def trivial(self):
        return Subgroup(self, (self.identity,))

    def subgroup(self, gens):
        return Subgroup(self, self.generate(list(gens)))

    def check_axioms(self):
        n = self.order
        e = self.identity
        for a in range(n):
            if self.mult[e][a] != a or self.mult[a][e] != a:
                raise ValueError("identity table inconsistent")
            if self.mult[a][self.inverse[a]] != e:
                raise ValueError("inverse table inconsistent")
            for b in range(n):
                ab = self.mult[a][b]
                for c in range(n):
                    if self.mult[ab][c] != self.mult[a][self.mult[b][c]]:
                        raise ValueError("multiplication is not associative")
        if len(self.generate(self.generators)) != n:
            raise ValueError("generators do not generate the group")


def close_generators(degree, perm_generators, max_order=DEFAULT_MAX_ORDER, name=""):
    """The permutation group on ``range(degree)`` generated by the given images."""
    gens = [tuple(int(x) for x in p) for p in perm_generators]
    for p in gens:
        if len(p) != degree:
            raise ValueError(f"permutation {list(p)} does not have degree {degree}")
        check_perm(p, degree)
    ident = tuple(range(degree))
    elements = [ident]
    index = {ident: 0}
    words = [None]
    queue = deque([0])
    while queue:
        j = queue.popleft()
        x = elements[j]
        for s, p in enumerate(gens):
            y = compose(p, x)
            if y not in index:
                if len(elements) >= max_order:
                    raise GroupOrderError(
                        f"group order exceeds the bound {max_order}")
                index[y] = len(elements)
                elements.append(y)
                words.append((s, j))
                queue.append(index[y])
    n = len(elements)
    mult = [[index[compose(a, b)] for b in elements] for a in elements]
    inverse = [row.index(0) for row in mult]
    gen_idx = [index[p] for p in gens]
    return FiniteGroup(elements, mult, inverse, 0, gen_idx, words, name=name)


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup = field(compare=False, hash=False, repr=False)
    members: tuple

    def __post_init__(self):
        G = self.parent
        ms = set(self.members)
        if G.identity not in ms:
            raise ValueError("subgroup must contain the identity")
        for a in self.members:
            if G.inverse[a] not in ms:
                raise ValueError("subgroup not closed under inverses")
            for b in self.members:
                if G.mult[a][b] not in ms:
                    raise ValueError("subgroup not closed under multiplication")

    @property
    def order(self):
        return len(self.members)

    @property
    def index(self):
        return self.parent.order // self.order

    def __contains__(self, g):
        return g in self.members

    def generators(self):
        """A small generating set, picked greedily in element order."""
        G = self.parent
        gens, span = [], {G.identity}
        for h in self.members:
            if h not in span:
                gens.append(h)
                span = set(G.generate(gens))
        return gens

    def conjugate(self, g):
        return Subgroup(self.parent, self.parent.conjugate(g, self.members))

    def is_normal(self):
        return all(self.parent.conjugate(g, self.members) == self.members
                   for g in range(self.parent.order))

    def cosets(self):
        """Left cosets gH as (representatives, coset index of every element).

        The first representative is the identity.
        """
        G = self.parent
        which = [None] * G.order
        reps = []
        for g in range(G.order):
            if which[g] is None:
                k = len(reps)
                reps.append(g)
                for h in self.members:
                    which[G.mult[g][h]] = k
        return reps, which

    def as_group(self):
        """The subgroup as a FiniteGroup in its own right, plus the embedding."""
        G = self.parent
        members = list(self.members)
        pos = {g: i for i, g in enumerate(members)}
        mult = [[pos[G.mult[a][b]] for b in members] for a in members]
        inverse = [pos[G.inverse[a]] for a in members]
        gens = [pos[g] for g in self.generators()]
        words = _words_for(mult, pos[G.identity], gens)
        sub = FiniteGroup([G.elements[g] for g in members], mult, inverse,
                          pos[G.identity], gens, words,
                          name=f"{G.name}>{self.order}" if G.name else "")
        return sub, members


def _words_for(mult, identity, gens):
    n = len(mult)
    words = [None] * n
    seen = {identity}
    queue = deque([identity])
    while queue:
        j = queue.popleft()
        for s, g in enumerate(gens):
            y = mult[g][j]
            if y not in seen:
                seen.add(y)
                words[y] = (s, j)
                queue.append(y)
    return words


def cyclic_subgroups(G):
    found = {}
    for g in range(G.order):
        members = G.generate([g])
        found.setdefault(members, Subgroup(G, members))
    return sorted(found.values(), key=lambda H: (H.order, H.members))


def all_subgroups(G):
    """Every subgroup, built by joining cyclic subgroups until nothing new appears."""
    cyclic = cyclic_subgroups(G)
    found = {H.members: H for H in cyclic}
    frontier = list(cyclic)
    while frontier:
        new = []
        for A in frontier:
            for C in cyclic:
                if set(C.members) <= set(A.members):
                    continue
                J = G.generate(list(A.members) + list(C.members))
                if J not in found:
                    found[J] = Subgroup(G, J)
                    new.append(found[J])
        frontier = new
    return sorted(found.values(), key=lambda H: (H.order, H.members))


def subgroups_up_to_conjugacy(G):
    """One representative per conjugacy class, ordered by (order, members)."""
    reps = []
    seen = set()
    for H in all_subgroups(G):
        if H.members in seen:
            continue
        reps.append(H)
        for g in range(G.order):
            seen.add(G.conjugate(g, H.members))
    return reps


def conjugacy_class_of_subgroup(G, H, reps):
    """Index into ``reps`` of the class containing H."""
    conj = {G.conjugate(g, H.members) for g in range(G.order)}
    for k, R in enumerate(reps):
        if R.members in conj:
            return k
    raise ValueError("subgroup not found among class representatives")


def is_cyclic(H):
    """(True, generator) when H is cyclic, else (False, None)."""
    G = H.parent
    for h in H.members:
        if G.element_order(h) == H.order:
            return True, h
    return False, None


def elements_by_order(G):
    return {g: G.element_order(g) for g in range(G.order)}
