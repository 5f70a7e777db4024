"""Exact integer linear algebra.

Matrices are 2-d numpy arrays of dtype ``object`` holding Python ints, so
arithmetic never overflows and never touches floating point.  Products are
routed through int64 when a cheap magnitude bound proves that safe.
"""

from dataclasses import dataclass
from math import gcd

import numpy as np

_INT64_SAFE = 2**62


class NotSaturatedError(ValueError):
    """A sublattice basis was expected to be primitive but is not."""


def imat(rows, shape=None):
    """Build an exact integer matrix from nested sequences."""
    if isinstance(rows, np.ndarray):
        if rows.dtype == object:
            out = rows.copy()
        else:
            out = rows.astype(object)
        if out.ndim != 2:
            raise ValueError("expected a 2-d matrix")
        return _normalize(out)
    rows = [list(r) for r in rows]
    if not rows:
        if shape is None:
            shape = (0, 0)
        return np.empty(shape, dtype=object)
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged matrix")
    out = np.empty((len(rows), ncols), dtype=object)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            if int(x) != x:
                raise ValueError(f"non-integer entry {x!r}")
            out[i, j] = int(x)
    return out


def _normalize(A):
    # np.int64 scalars creep in through astype; keep everything a Python int
    flat = A.ravel()
    for k, x in enumerate(flat):
        if type(x) is not int:
            flat[k] = int(x)
    return A


def ivec(values):
    out = np.empty(len(values), dtype=object)
    for i, x in enumerate(values):
        out[i] = int(x)
    return out


def identity(n):
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def zeros(m, n):
    out = np.empty((m, n), dtype=object)
    out.fill(0)
    return out


def max_abs(A):
    if A.size == 0:
        return 0
    try:
        return int(np.abs(A.astype(np.int64)).max())
    except OverflowError:
        return max(abs(int(x)) for x in A.ravel())


def matmul(A, B):
    """Exact product of two integer matrices (or matrix and vector)."""
    if A.shape[-1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if A.size == 0 or B.size == 0:
        shape = A.shape[:-1] + B.shape[1:]
        out = np.empty(shape, dtype=object)
        out.fill(0)
        return out
    bound = max_abs(A) * max_abs(B) * A.shape[-1]
    if bound < _INT64_SAFE:
        prod = A.astype(np.int64) @ B.astype(np.int64)
        return prod.astype(object)
    return _normalize(np.dot(A, B))


def mat_equal(A, B):
    return A.shape == B.shape and bool(np.all(A == B))


def hstack(blocks, nrows):
    blocks = [b for b in blocks if b.shape[1] > 0]
    if not blocks:
        return zeros(nrows, 0)
    return np.hstack(blocks)


def vstack(blocks, ncols):
    blocks = [b for b in blocks if b.shape[0] > 0]
    if not blocks:
        return zeros(0, ncols)
    return np.vstack(blocks)


def block_diag(*blocks):
    m = sum(b.shape[0] for b in blocks)
    n = sum(b.shape[1] for b in blocks)
    out = zeros(m, n)
    i = j = 0
    for b in blocks:
        out[i:i + b.shape[0], j:j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


def is_permutation_matrix(A):
    if A.shape[0] != A.shape[1]:
        return False
    for row in A:
        if sum(1 for x in row if x != 0) != 1 or sum(row) != 1:
            return False
    return all(sum(1 for x in A[:, j] if x != 0) == 1 for j in range(A.shape[1]))


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with U, V unimodular; inverses carried along."""

    U: np.ndarray
    D: np.ndarray
    V: np.ndarray
    U_inv: np.ndarray
    V_inv: np.ndarray
    divisors: tuple

    @property
    def rank(self):
        return sum(1 for d in self.divisors if d != 0)


def _snf_core(A, transforms):
    A = imat(A)
    m, n = A.shape
    if transforms:
        U, Ui, V, Vi = identity(m), identity(m), identity(n), identity(n)
    t = 0
    while t < min(m, n):
        sub = A[t:, t:]
        nz = np.argwhere(sub != 0)
        if len(nz) == 0:
            break
        k = min(range(len(nz)), key=lambda r: abs(sub[nz[r][0], nz[r][1]]))
        i, j = int(nz[k][0]) + t, int(nz[k][1]) + t
        while True:
            if i != t:
                A[[t, i]] = A[[i, t]]
                if transforms:
                    U[[t, i]] = U[[i, t]]
                    Ui[:, [t, i]] = Ui[:, [i, t]]
            if j != t:
                A[:, [t, j]] = A[:, [j, t]]
                if transforms:
                    V[:, [t, j]] = V[:, [j, t]]
                    Vi[[t, j]] = Vi[[j, t]]
            p = A[t, t]
            col = A[t + 1:, t]
            if col.size and np.any(col != 0):
                q = col // p
                if np.any(q != 0):
                    A[t + 1:, :] -= np.outer(q, A[t, :])
                    if transforms:
                        U[t + 1:, :] -= np.outer(q, U[t, :])
                        Ui[:, t] += np.dot(Ui[:, t + 1:], q)
            row = A[t, t + 1:]
            if row.size and np.any(row != 0):
                q = row // p
                if np.any(q != 0):
                    A[:, t + 1:] -= np.outer(A[:, t], q)
                    if transforms:
                        V[:, t + 1:] -= np.outer(V[:, t], q)
                        Vi[t, :] += np.dot(q, Vi[t + 1:, :])
            col_nz = [r for r in range(t + 1, m) if A[r, t] != 0]
            row_nz = [c for c in range(t + 1, n) if A[t, c] != 0]
            if col_nz or row_nz:
                # remainders are strictly smaller than the pivot: move one in
                cands = [(abs(A[r, t]), r, t) for r in col_nz]
                cands += [(abs(A[t, c]), t, c) for c in row_nz]
                _, i, j = min(cands)
                continue
            rest = A[t + 1:, t + 1:]
            if rest.size:
                bad = np.argwhere(rest % p != 0)
                if len(bad):
                    r = int(bad[0][0]) + t + 1
                    A[t, :] += A[r, :]
                    if transforms:
                        U[t, :] += U[r, :]
                        Ui[:, r] -= Ui[:, t]
                    i, j = t, t
                    continue
            break
        if A[t, t] < 0:
            A[t, :] = -A[t, :]
            if transforms:
                U[t, :] = -U[t, :]
                Ui[:, t] = -Ui[:, t]
        t += 1
    divisors = tuple(int(A[k, k]) for k in range(min(m, n)))
    if not transforms:
        return divisors
    return SmithDecomposition(U, A, V, Ui, Vi, divisors)


def smith_normal_form(A):
    """Smith decomposition of an integer matrix.

    Pivots are always chosen of minimal absolute value, which keeps the
    coefficient growth modest on the sparse structured matrices used here.
    """
    return _snf_core(A, transforms=True)


def elementary_divisors(A):
    """Diagonal of the Smith form (length ``min(rows, cols)``), no transforms."""
    A = imat(A)
    if A.size == 0:
        return tuple(0 for _ in range(min(A.shape)))
    # zero rows and columns do not affect the divisors, only the trailing zeros
    keep_r = [i for i in range(A.shape[0]) if np.any(A[i] != 0)]
    keep_c = [j for j in range(A.shape[1]) if np.any(A[:, j] != 0)]
    core = _snf_core(A[np.ix_(keep_r, keep_c)], transforms=False) if keep_r else ()
    nonzero = [d for d in core if d != 0]
    return tuple(nonzero) + (0,) * (min(A.shape) - len(nonzero))


def invariant_factors(A):
    """Nontrivial torsion factors (divisors other than 0 and 1)."""
    return tuple(d for d in elementary_divisors(A) if d not in (0, 1))


def _echelon(M):
    """Row echelon form ``T @ M == E`` with T unimodular.  Returns (E, T, rank)."""
    E = imat(M)
    m, n = E.shape
    T = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if E[i, c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(E[i, c]))
            if piv != r:
                E[[r, piv]] = E[[piv, r]]
                T[[r, piv]] = T[[piv, r]]
            others = [i for i in range(r + 1, m) if E[i, c] != 0]
            if not others:
                break
            q = E[others, c] // E[r, c]
            E[others, :] -= np.outer(q, E[r, :])
            T[others, :] -= np.outer(q, T[r, :])
        if E[r, c] != 0:
            r += 1
    return E, T, r


def rank(A):
    A = imat(A)
    if A.size == 0:
        return 0
    return _echelon(A)[2]


def hermite_normal_form(M):
    """Row-style HNF of the row span of ``M`` (zero rows dropped)."""
    E, _, r = _echelon(M)
    E = E[:r]
    for i in range(r):
        c = next(j for j in range(E.shape[1]) if E[i, j] != 0)
        if E[i, c] < 0:
            E[i, :] = -E[i, :]
        for k in range(i):
            q = E[k, c] // E[i, c]
            if q:
                E[k, :] -= q * E[i, :]
    return E


def kernel_basis(A):
    """Columns spanning the (automatically saturated) integer kernel of A."""
    A = imat(A)
    m, n = A.shape
    if n == 0:
        return zeros(0, 0)
    if m == 0:
        return identity(n)
    _, T, r = _echelon(A.T)
    K = T[r:]
    if K.shape[0] == 0:
        return zeros(n, 0)
    return hermite_normal_form(K).T.copy()


def image_basis(A):
    """Columns forming a basis of the column span of A (not saturated)."""
    A = imat(A)
    if A.shape[1] == 0:
        return zeros(A.shape[0], 0)
    return hermite_normal_form(A.T).T.copy()


def saturation(B):
    """Basis of (span B tensor Q) intersected with Z^n, as columns."""
    B = imat(B)
    n = B.shape[0]
    if B.shape[1] == 0:
        return zeros(n, 0)
    # the saturation is the kernel of the kernel of the transpose
    orth = kernel_basis(B.T)
    if orth.shape[1] == 0:
        return identity(n)
    return kernel_basis(orth.T)


def is_saturated_basis(B):
    """True when the columns of B are independent and span a primitive sublattice."""
    B = imat(B)
    if B.shape[1] == 0:
        return True
    if B.shape[1] > B.shape[0]:
        return False
    divs = elementary_divisors(B)
    return all(d == 1 for d in divs)


def solve_integer(A, b):
    """Some integer x with A @ x == b, or None when no integer solution exists."""
    A = imat(A)
    b = ivec(b)
    m, n = A.shape
    if b.shape[0] != m:
        raise ValueError(f"dimension mismatch: {A.shape} vs {b.shape[0]}")
    if n == 0:
        return ivec([]) if all(x == 0 for x in b) else None
    snf = smith_normal_form(A)
    c = matmul(snf.U, b.reshape(m, 1)).ravel()
    y = [0] * n
    for i in range(m):
        d = snf.divisors[i] if i < len(snf.divisors) else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    x = matmul(snf.V, ivec(y).reshape(n, 1)).ravel()
    assert all(matmul(A, x.reshape(n, 1)).ravel() == b)
    return _normalize(x.reshape(n, 1)).ravel()


def complement(B):
    """Unimodular Q (and its inverse) whose first columns are the basis B.

    Raises NotSaturatedError unless B is a basis of a primitive sublattice.
    """
    B = imat(B)
    n, k = B.shape
    if k == 0:
        return identity(n), identity(n)
    snf = smith_normal_form(B)
    if k > n or any(d != 1 for d in snf.divisors):
        raise NotSaturatedError("sublattice basis is not primitive")
    Q = matmul(snf.U_inv, block_diag(snf.V_inv, identity(n - k)))
    Qi = matmul(block_diag(snf.V, identity(n - k)), snf.U)
    assert mat_equal(Q[:, :k], B)
    return Q, Qi


def left_inverse(B):
    """Integer P with P @ B == identity, for a saturated basis B."""
    B = imat(B)
    k = B.shape[1]
    _, Qi = complement(B)
    return Qi[:k].copy()


def determinant(A):
    """Bareiss fraction-free determinant."""
    A = imat(A)
    n = A.shape[0]
    if A.shape[1] != n:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    M = [[int(x) for x in row] for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def is_unimodular(A):
    A = imat(A)
    if A.shape[0] != A.shape[1]:
        return False
    return abs(determinant(A)) == 1


def unimodular_inverse(A):
    """Exact inverse of a unimodular matrix."""
    A = imat(A)
    snf = smith_normal_form(A)
    if any(d != 1 for d in snf.divisors) or A.shape[0] != A.shape[1]:
        raise ValueError("matrix is not unimodular")
    # U A V = I  =>  A^-1 = V U
    return matmul(snf.V, snf.U)


def _pivot_columns(B):
    """Leading-entry row of each column if B is in column echelon form, else None."""
    piv = []
    for j in range(B.shape[1]):
        nz = [i for i in range(B.shape[0]) if B[i, j] != 0]
        if not nz:
            return None
        piv.append(nz[0])
    if any(piv[j + 1] <= piv[j] for j in range(len(piv) - 1)):
        return None
    return piv


def coordinates(B, Y):
    """Integer X with B @ X == Y, for columns of Y in the column span of B.

    Uses substitution when B is in column echelon form (as returned by
    kernel_basis and image_basis); otherwise needs B saturated.
    Raises ValueError when some column is not an integral combination.
    """
    B, Y = imat(B), imat(Y)
    k = B.shape[1]
    if k == 0:
        if np.any(Y != 0):
            raise ValueError("vector not in the span")
        return zeros(0, Y.shape[1])
    piv = _pivot_columns(B)
    if piv is None:
        X = matmul(left_inverse(B), Y)
        if not mat_equal(matmul(B, X), Y):
            raise ValueError("vector not in the span")
        return X
    R = Y.copy()
    X = zeros(k, Y.shape[1])
    for j, r in enumerate(piv):
        p = B[r, j]
        row = R[r]
        if np.any(row % p != 0):
            raise ValueError("vector not in the integral span")
        coef = row // p
        X[j] = coef
        R -= np.outer(B[:, j], coef)
    if np.any(R != 0):
        raise ValueError("vector not in the span")
    return X


def _snf_mod(A, n, left=False, right=False):
    """Diagonalize A over Z/n.

    Returns (diag, Ui, V): ``diag[t]`` is the pivot in position (t, t) (a
    representative in [0, n)), Ui the inverse row transform and V the column
    transform, both as integer lifts.
    """
    # entries stay in [0, n), so int64 is exact for any realistic n
    if n >= 2 ** 31:
        raise ValueError("modulus too large for the word-size elimination")
    A = (imat(A) % n).astype(np.int64)
    m, c = A.shape
    Ui = np.eye(m, dtype=np.int64) if left else None
    V = np.eye(c, dtype=np.int64) if right else None
    diag = []
    t = 0
    while t < min(m, c):
        sub = A[t:, t:]
        masked = np.where(sub != 0, sub, n)
        k = int(np.argmin(masked))
        i, j = divmod(k, sub.shape[1])
        if masked[i, j] == n:
            break
        i, j = i + t, j + t
        while True:
            if i != t:
                A[[t, i]] = A[[i, t]]
                if left:
                    Ui[:, [t, i]] = Ui[:, [i, t]]
            if j != t:
                A[:, [t, j]] = A[:, [j, t]]
                if right:
                    V[:, [t, j]] = V[:, [j, t]]
            p = A[t, t]
            q = A[t + 1:, t] // p
            if np.any(q != 0):
                A[t + 1:, :] = (A[t + 1:, :] - np.outer(q, A[t, :])) % n
                if left:
                    Ui[:, t] = (Ui[:, t] + np.dot(Ui[:, t + 1:], q)) % n
            q = A[t, t + 1:] // p
            if np.any(q != 0):
                A[:, t + 1:] = (A[:, t + 1:] - np.outer(A[:, t], q)) % n
                if right:
                    V[:, t + 1:] = (V[:, t + 1:] - np.outer(V[:, t], q)) % n
            col = np.flatnonzero(A[t + 1:, t])
            row = np.flatnonzero(A[t, t + 1:])
            if len(col) == 0 and len(row) == 0:
                break
            best = None
            if len(col):
                r = col[np.argmin(A[t + 1 + col, t])]
                best = (A[t + 1 + r, t], t + 1 + r, t)
            if len(row):
                s_ = row[np.argmin(A[t, t + 1 + row])]
                if best is None or A[t, t + 1 + s_] < best[0]:
                    best = (A[t, t + 1 + s_], t, t + 1 + s_)
            _, i, j = best
        diag.append(int(A[t, t]))
        t += 1
    to_obj = lambda X: None if X is None else X.astype(object)
    return diag, to_obj(Ui), to_obj(V)


def _factor_small(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors_from_orders(orders):
    """Invariant factors of a direct sum of cyclic groups of the given orders."""
    by_prime = {}
    for d in orders:
        for p, e in _factor_small(d).items():
            by_prime.setdefault(p, []).append(p ** e)
    if not by_prime:
        return ()
    width = max(len(v) for v in by_prime.values())
    factors = [1] * width
    for p, powers in by_prime.items():
        powers.sort(reverse=True)
        for i, q in enumerate(powers):
            factors[width - 1 - i] *= q
    return tuple(f for f in factors if f > 1)


def cokernel_mod(X, n, generators=False):
    """Structure of Z^k / span(X), assuming n * Z^k lies in span(X).

    Returns (invariant_factors, gens) where ``gens`` is a list of
    (order, vector) pairs generating the cyclic summands of a primary-free
    decomposition, in pivot order (empty unless requested).
    """
    X = imat(X)
    k = X.shape[0]
    if k == 0:
        return (), []
    diag, Ui, _ = _snf_mod(X, n, left=generators)
    orders = [gcd(d, n) for d in diag] + [n] * (k - len(diag))
    factors = invariant_factors_from_orders([d for d in orders if d > 1])
    gens = []
    if generators:
        for t, d in enumerate(orders):
            if d > 1:
                gens.append((d, Ui[:, t].copy()))
    return factors, gens


def kernel_mod(A, n):
    """Integer vectors which, together with n * Z^c, span {x : A x = 0 mod n}."""
    A = imat(A)
    c = A.shape[1]
    diag, _, V = _snf_mod(A, n, right=True)
    cols = []
    for t in range(c):
        d = diag[t] if t < len(diag) else 0
        step = n // gcd(d, n) if d else 1
        cols.append(V[:, t] * step)
    if not cols:
        return zeros(c, 0)
    return np.array(cols, dtype=object).T.copy()
