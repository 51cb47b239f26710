"""Small exact linear algebra over a field object exposing zero()/one().

Matrices are lists of lists (rows); vectors are lists.  Used for kernels,
ranks and subspace comparisons over F_{p^2}; matrix products are also applied
to truncated-series entries, which support + and * but not /.
"""

from .errors import HypothesisError


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return [
        [sum((A[i][t] * B[t][j] for t in range(1, k)), A[i][0] * B[0][j]) for j in range(m)]
        for i in range(n)
    ]


def mat_vec(A, v):
    n, k = len(A), len(v)
    return [sum((A[i][t] * v[t] for t in range(1, k)), A[i][0] * v[0]) for i in range(n)]


def transpose(A):
    return [[A[j][i] for j in range(len(A))] for i in range(len(A[0]))]


def scale(A, c):
    return [[x * c for x in row] for row in A]


def mat_add(A, B):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_eq(A, B):
    return all(x == y for ra, rb in zip(A, B) for x, y in zip(ra, rb))


def _rref(M, field):
    """Reduced row echelon form; returns (rows, pivot column list)."""
    rows = [list(r) for r in M]
    n = len(rows)
    m = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(m):
        pivot = next((i for i in range(r, n) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = field.one() / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return rows, pivots


def rank(M, field) -> int:
    if not M:
        return 0
    return len(_rref(M, field)[1])


def kernel_basis(M, field):
    """Basis of the right kernel of M."""
    if not M:
        return []
    m = len(M[0])
    rows, pivots = _rref(M, field)
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free:
        vec = [field.zero()] * m
        vec[fc] = field.one()
        for r, pc in enumerate(pivots):
            vec[pc] = -rows[r][fc]
        basis.append(vec)
    return basis


def span_contains(basis, v, field) -> bool:
    """Whether v lies in the span of the given vectors."""
    if not basis:
        return not any(v)
    M = [list(b) for b in basis]
    r0 = rank(M, field)
    return rank(M + [list(v)], field) == r0


def span_equal(basis_a, basis_b, field) -> bool:
    return all(span_contains(basis_b, v, field) for v in basis_a) and all(
        span_contains(basis_a, w, field) for w in basis_b
    )


def intersect_spans(basis_a, basis_b, field):
    """Basis of the intersection of two spans inside the ambient space."""
    if not basis_a or not basis_b:
        return []
    m = len(basis_a[0])
    # solve sum x_i a_i = sum y_j b_j: kernel of [A^t | -B^t]
    cols = [list(a) for a in basis_a] + [[-x for x in b] for b in basis_b]
    M = [[cols[c][r] for c in range(len(cols))] for r in range(m)]
    out = []
    for k in kernel_basis(M, field):
        vec = [field.zero()] * m
        for i, a in enumerate(basis_a):
            vec = [x + k[i] * y for x, y in zip(vec, a)]
        if any(vec):
            out.append(vec)
    if not out:
        return []
    rows, pivots = _rref(out, field)
    return [rows[i] for i in range(len(pivots))]


def invert(M, field):
    """Inverse of a square matrix by Gauss-Jordan elimination."""
    n = len(M)
    aug = [list(M[i]) + [field.one() if i == j else field.zero() for j in range(n)] for i in range(n)]
    rows, pivots = _rref(aug, field)
    if pivots[:n] != list(range(n)):
        raise HypothesisError("matrix is not invertible")
    return [row[n:] for row in rows[:n]]
