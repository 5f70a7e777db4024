"""Decomposition groups of multiquadratic fields Q(sqrt a_1, ..., sqrt a_n).

The local Galois group at a place v is (Z/2)^d where d is the F_2-rank of
the classes of the a_i in Q_v^* / (Q_v^*)^2.  It is cyclic iff d <= 1.
"""

from dataclasses import dataclass

INFINITY = "inf"


def jacobi_symbol(a, n):
    """Jacobi symbol (a/n) for odd positive n."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("Jacobi symbol needs an odd positive modulus")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def factorize(n):
    """Prime factorization of |n| by trial division, as {p: e}."""
    n = abs(n)
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_squarefree(n):
    return n != 0 and all(e == 1 for e in factorize(n).values())


def _split(a, p):
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v, a


def local_square_class(a, place):
    """Coordinates of a in Q_v^*/(Q_v^*)^2 as a tuple over F_2."""
    if a == 0:
        raise ValueError("zero has no square class")
    if place == INFINITY:
        return (int(a < 0),)
    p = int(place)
    v, u = _split(a, p)
    if p == 2:
        u %= 8
        # basis -1, 5 of the unit classes {1, 3, 5, 7}
        return (v % 2, int(u % 4 == 3), int(u in (3, 5)))
    return (v % 2, int(jacobi_symbol(u, p) == -1))


def is_local_square(a, place):
    return not any(local_square_class(a, place))


def f2_rank(rows):
    """Rank over F_2 of a list of 0/1 vectors."""
    rows = [int("".join(map(str, r)) or "0", 2) for r in rows]
    rank = 0
    while rows:
        pivot = max(rows)
        if pivot == 0:
            break
        rows.remove(pivot)
        rank += 1
        top = pivot.bit_length() - 1
        rows = [r ^ pivot if (r >> top) & 1 else r for r in rows]
    return rank


def _exponent_vector(a, primes):
    fac = factorize(a)
    return [int(a < 0)] + [fac.get(p, 0) % 2 for p in primes]


def validate_radicands(radicands):
    """Raise ValueError unless the list is square-free and independent mod squares."""
    rs = [int(a) for a in radicands]
    if not rs:
        raise ValueError("need at least one radicand")
    for a in rs:
        if a in (0, 1):
            raise ValueError(f"radicand {a} is not allowed")
        if not is_squarefree(a):
            raise ValueError(f"radicand {a} is not square-free")
    primes = sorted({p for a in rs for p in factorize(a)})
    if f2_rank([_exponent_vector(a, primes) for a in rs]) != len(rs):
        raise ValueError("radicands are dependent modulo squares")
    return rs


@dataclass(frozen=True)
class PlaceReport:
    place: object  # prime or "inf"
    square_class_dim: int

    @property
    def decomposition_order(self):
        return 2 ** self.square_class_dim

    @property
    def cyclic(self):
        return self.square_class_dim <= 1

    def to_dict(self):
        return {"place": self.place, "square_class_dim": self.square_class_dim,
                "decomposition_order": self.decomposition_order, "cyclic": self.cyclic}


@dataclass(frozen=True)
class DecompositionReport:
    radicands: tuple
    places: tuple

    @property
    def all_cyclic(self):
        return all(p.cyclic for p in self.places)

    def to_dict(self):
        return {"radicands": list(self.radicands), "all_cyclic": self.all_cyclic,
                "places": [p.to_dict() for p in self.places]}


def place_report(radicands, place):
    rows = [local_square_class(a, place) for a in radicands]
    return PlaceReport(place, f2_rank(rows))


def places_to_check(radicands):
    odd = sorted({p for a in radicands for p in factorize(a) if p != 2})
    return [INFINITY, 2] + odd


def decomposition_report(radicands):
    """Decomposition-group sizes at infinity, 2 and every odd ramified prime.

    At an odd prime dividing no radicand all a_i are units, whose square
    classes span at most one nontrivial class, so d <= 1 there.
    """
    rs = tuple(validate_radicands(radicands))
    return DecompositionReport(rs, tuple(place_report(rs, v) for v in places_to_check(rs)))
