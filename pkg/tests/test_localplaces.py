import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torcert.localplaces import (INFINITY, decomposition_report, f2_rank, factorize,
                                 is_local_square, jacobi_symbol, place_report, validate_radicands)

PRIMES = [p for p in range(3, 400) if all(p % q for q in range(2, int(p ** 0.5) + 1))]


def brute_is_square(a, place):
    """Square in Q_v by direct search: v(a) even and the unit part a square mod p (mod 8 at 2)."""
    if place == INFINITY:
        return a > 0
    v = 0
    while a % place == 0:
        a //= place
        v += 1
    m = 8 if place == 2 else place
    return v % 2 == 0 and any(x * x % m == a % m for x in range(m))


def brute_dimension(radicands, place):
    """d with 2^(n - d) subset products being local squares."""
    n = len(radicands)
    squares = 0
    for mask in itertools.product((0, 1), repeat=n):
        prod = 1
        for a, b in zip(radicands, mask):
            if b:
                prod *= a
        squares += brute_is_square(prod, place)
    return n - (squares.bit_length() - 1)


def test_euler_criterion():
    for p in PRIMES[:40]:
        for a in range(1, p):
            e = pow(a, (p - 1) // 2, p)
            assert jacobi_symbol(a, p) == (1 if e == 1 else -1)


@given(st.integers(-500, 500), st.integers(-500, 500), st.integers(0, 200))
@settings(max_examples=300, deadline=None)
def test_jacobi_multiplicative(a, b, k):
    n = 2 * k + 1
    assert jacobi_symbol(a * b, n) == jacobi_symbol(a, n) * jacobi_symbol(b, n)


def test_jacobi_rejects_even_modulus():
    with pytest.raises(ValueError):
        jacobi_symbol(3, 8)
    with pytest.raises(ValueError):
        jacobi_symbol(3, -5)


def test_local_squares_against_search():
    r = random.Random(5)
    for _ in range(2000):
        a = r.choice([-1, 1]) * r.randint(1, 10 ** 4)
        place = r.choice([INFINITY, 2] + PRIMES[:15])
        assert is_local_square(a, place) == brute_is_square(a, place)


def test_place_dimension_against_subset_products():
    r = random.Random(9)
    for _ in range(300):
        n = r.randint(1, 4)
        pool = [a for a in range(-60, 61) if a not in (0, 1) and
                all(e == 1 for e in factorize(a).values())]
        try:
            rs = validate_radicands(r.sample(pool, n))
        except ValueError:
            continue
        for place in [INFINITY, 2] + sorted({p for a in rs for p in factorize(a)} - {2}):
            assert place_report(rs, place).square_class_dim == brute_dimension(rs, place)


def test_unramified_odd_primes_are_cyclic():
    r = random.Random(13)
    for _ in range(200):
        rs = [r.choice([-1, 1]) * q for q in r.sample(PRIMES[:20], 3)]
        for p in PRIMES[20:40]:
            assert place_report(rs, p).square_class_dim <= 1


def test_examples():
    rep = decomposition_report([13, 17])
    assert rep.all_cyclic
    rep = decomposition_report([13, 17, 89])
    dims = {p.place: p.square_class_dim for p in rep.places}
    # 13 is a non-residue mod 89 and 89 is a non-residue mod 13
    assert dims[13] == 2 and dims[89] == 2
    assert not rep.all_cyclic
    assert decomposition_report([13, 17, 53]).all_cyclic
    assert not decomposition_report([3, 5]).all_cyclic
    assert decomposition_report([-1]).all_cyclic


def test_single_radicand_is_always_cyclic():
    for a in [-7, -1, 2, 3, 5, 6, 10, 15, 221, -221]:
        assert decomposition_report([a]).all_cyclic


def test_validation():
    for bad in ([], [0], [1], [4], [12], [2, 3, 6], [5, 5]):
        with pytest.raises(ValueError):
            validate_radicands(bad)


def test_f2_rank_against_enumeration():
    r = random.Random(2)
    for _ in range(200):
        n, k = r.randint(1, 5), r.randint(1, 5)
        rows = [[r.randint(0, 1) for _ in range(k)] for _ in range(n)]
        span = {tuple((sum(c * row[j] for c, row in zip(coeffs, rows))) % 2 for j in range(k))
                for coeffs in itertools.product((0, 1), repeat=n)}
        assert 2 ** f2_rank(rows) == len(span)
