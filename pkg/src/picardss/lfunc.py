"""Special values of L(s, (D/.)) and the derived surface invariants.

The exact route goes through generalized Bernoulli numbers:
B_{n,chi} = f^(n-1) * sum_{a=1..f} chi(a) B_n(a/f) with f = |D|, giving
L(1-n, chi) = -B_{n,chi}/n as an exact rational.  The analytic route is a
plain truncated Dirichlet series, used only as a floating cross-check of the
functional equation.  On top of these sit the Euler-characteristic formula,
the component count of the supersingular locus, the superspecial count and
the arithmetic genus, plus the arithmetic-index helper with its brute-force
special-unitary-group oracle.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, pi

from .arith import (
    is_fundamental_discriminant,
    is_prime,
    is_squarefree,
    kronecker_symbol,
    prime_factors,
)
from .errors import GuardError, HypothesisError, IdentityCheckError
from .ffield import Fp2


class KroneckerCharacter:
    """The quadratic character (D/.) of a negative fundamental discriminant."""

    def __init__(self, D: int):
        if D >= 0:
            raise HypothesisError(f"discriminant must be negative, got {D}")
        if not is_fundamental_discriminant(D):
            raise HypothesisError(f"{D} is not a fundamental discriminant")
        self.D = D
        self.modulus = abs(D)
        self.values = tuple(kronecker_symbol(D, a) for a in range(self.modulus))

    def __call__(self, a: int) -> int:
        return self.values[a % self.modulus]

    def __repr__(self):
        return f"KroneckerCharacter(D={self.D})"


@lru_cache(maxsize=None)
def bernoulli_number(m: int) -> Fraction:
    """Exact Bernoulli number B_m (B_1 = -1/2)."""
    if m == 0:
        return Fraction(1)
    acc = Fraction(0)
    for j in range(m):
        acc += comb(m + 1, j) * bernoulli_number(j)
    return -acc / (m + 1)


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    """Bernoulli polynomial B_n(x) by the binomial convolution."""
    x = Fraction(x)
    acc = Fraction(0)
    for k in range(n + 1):
        acc += comb(n, k) * bernoulli_number(k) * x ** (n - k)
    return acc


def gen_bernoulli(n: int, chi: KroneckerCharacter) -> Fraction:
    """Generalized Bernoulli number B_{n,chi}, exact."""
    if n < 1:
        raise HypothesisError("n must be at least 1")
    f = chi.modulus
    acc = Fraction(0)
    for a in range(1, f + 1):
        c = chi(a)
        if c:
            acc += c * bernoulli_poly(n, Fraction(a, f))
    return f ** (n - 1) * acc


def l_value_neg(n: int, chi: KroneckerCharacter) -> Fraction:
    """L(1-n, chi) = -B_{n,chi}/n, exact."""
    return -gen_bernoulli(n, chi) / n


def l_value_neg2(chi: KroneckerCharacter) -> Fraction:
    """L(-2, chi), exact; the ground truth for the Euler characteristic."""
    return l_value_neg(3, chi)


def l_value_series(s: float, chi: KroneckerCharacter, terms: int = 10**5) -> float:
    """Truncated Dirichlet series sum chi(k) k^(-s), floating point.

    The tail is bounded by the first omitted block: partial character sums
    vanish over each period, so the error is O(f * terms^(-s)).
    """
    if terms < 10**4:
        raise HypothesisError("series path requires at least 10^4 terms")
    if s < 2:
        raise HypothesisError("series path requires s >= 2")
    values = chi.values
    f = chi.modulus
    acc = 0.0
    for k in range(1, terms + 1):
        c = values[k % f]
        if c:
            acc += c * k ** (-s)
    return acc


def chern_c2(D: int, index) -> Fraction:
    """Euler characteristic of the compactified surface: -index * (3/16) * L(-2, chi)."""
    chi = KroneckerCharacter(D)
    index = Fraction(index)
    if index < 0:
        raise HypothesisError("index must be nonnegative")
    return -index * Fraction(3, 16) * l_value_neg2(chi)


def chern_c2_analytic(D: int, index, terms: int = 10**5) -> float:
    """Floating cross-check: index * 3|D|^(5/2) / (32 pi^3) * L(3, chi)."""
    chi = KroneckerCharacter(D)
    return float(index) * 3 * abs(D) ** 2.5 / (32 * pi**3) * l_value_series(3, chi, terms)


@dataclass(frozen=True)
class SurfaceInvariants:
    """Exact invariants of one (D, p, level) configuration."""

    D: int
    p: int
    level: int | None
    index: Fraction
    c2: Fraction
    n: Fraction
    n_ssp: Fraction
    g_a: Fraction


def component_count(D: int, index, p: int, level: int | None = None) -> SurfaceInvariants:
    """Component count n = c2/3 and the derived superspecial count and genus.

    Hypotheses: p an odd prime, inert for D, and coprime to 2*level when a
    level is supplied.  index = 0 is accepted as the degenerate empty surface
    (with a warning).
    """
    if not is_prime(p):
        raise HypothesisError(f"p = {p} is not prime")
    if p == 2:
        raise HypothesisError("hypothesis violated: p must be odd (p coprime to 2N)")
    kron = kronecker_symbol(D, p)
    if kron == 0:
        raise HypothesisError(f"hypothesis violated: p = {p} is ramified for D = {D}")
    if kron == 1:
        raise HypothesisError(f"hypothesis violated: p = {p} splits for D = {D}")
    if level is not None and gcd(p, 2 * level) != 1:
        raise HypothesisError(f"hypothesis violated: p = {p} is not coprime to 2N = {2 * level}")
    index = Fraction(index)
    if index == 0:
        warnings.warn("index = 0: degenerate empty surface", stacklevel=2)
        return SurfaceInvariants(D, p, level, index, Fraction(0), Fraction(0), Fraction(0), Fraction(1))
    c2 = chern_c2(D, index)
    n = c2 / 3
    n_ssp = n * (p * p - p + 1)
    g_a = n * (p**4 + p**2 - 2) / 2 + 1
    if 3 * n != c2:
        raise IdentityCheckError("3n = c2 failed")
    if n_ssp * (p + 1) != n * (p**3 + 1):
        raise IdentityCheckError("incidence count n_ssp (p+1) = n (p^3+1) failed")
    return SurfaceInvariants(D, p, level, index, c2, n, n_ssp, g_a)


# --- arithmetic index: local orders and the enumeration oracle ----------------


def su3_local_order(ell: int) -> int:
    """|SU_3(F_{ell^2} / F_ell)| = ell^3 (ell^2 - 1)(ell^3 + 1)/(ell + 1)."""
    return ell**3 * (ell**2 - 1) * (ell**3 + 1) // (ell + 1)


def sl3_local_order(ell: int) -> int:
    """|SL_3(F_ell)| = ell^3 (ell^2 - 1)(ell^3 - 1)."""
    return ell**3 * (ell**2 - 1) * (ell**3 - 1)


def index_gamma(N: int, D: int) -> int:
    """Order of the level quotient for squarefree N coprime to 2D.

    N = 1 gives the trivial quotient.  The identification of the quotient with
    the product of local special unitary groups rests on strong approximation;
    ramified and non-squarefree levels are rejected rather than guessed.
    """
    if N == 1:
        return 1
    if N < 3:
        raise HypothesisError("level must be 1 or at least 3")
    if gcd(N, 2 * D) != 1:
        raise HypothesisError(f"level N = {N} must be coprime to 2D = {2 * D}")
    if not is_squarefree(N):
        raise HypothesisError(f"level N = {N} must be squarefree")
    total = 1
    for ell in prime_factors(N):
        if kronecker_symbol(D, ell) == -1:
            total *= su3_local_order(ell)
        else:
            total *= sl3_local_order(ell)
    return total


def brute_force_su3_order(ell: int, D: int) -> int:
    """Count special unitary 3x3 matrices over O_K/ell by direct enumeration.

    Builds columns one at a time: an isotropic first column, a norm-one second
    column orthogonal to it, then the line of solutions of the two linear
    pairing constraints for the third, filtered by isotropy and det = 1.
    Only rings with at most 9 elements are allowed.
    """
    if kronecker_symbol(D, ell) != -1:
        raise HypothesisError(f"oracle requires an inert prime, D = {D}, ell = {ell}")
    if ell * ell > 9:
        raise GuardError(f"residue ring with {ell * ell} elements exceeds the enumeration guard")
    field = Fp2.from_discriminant(ell, D)
    one = field.one()
    zero = field.zero()
    dinv = field.delta().inverse()
    # hermitian form conj(u)^t J v with J = antidiag(dinv, 1, -dinv)
    def herm(u, w):
        return u[0].conj() * dinv * w[2] + u[1].conj() * w[1] - u[2].conj() * dinv * w[0]

    def pairing_row(u):
        # row r with herm(u, x) = r . x
        return (-(u[2].conj() * dinv), u[1].conj(), u[0].conj() * dinv)

    vectors = [
        (x, y, z) for x in field.elements() for y in field.elements() for z in field.elements()
    ]
    norms = {v: herm(v, v) for v in vectors}

    def det(c1, c2, c3):
        return (
            c1[0] * (c2[1] * c3[2] - c2[2] * c3[1])
            - c2[0] * (c1[1] * c3[2] - c1[2] * c3[1])
            + c3[0] * (c1[1] * c2[2] - c1[2] * c2[1])
        )

    count = 0
    gram = ((zero, zero, dinv), (zero, one, zero), (-dinv, zero, zero))
    for c1 in vectors:
        if norms[c1] != gram[0][0] or not any(c1):
            continue
        r1 = pairing_row(c1)
        for c2 in vectors:
            if norms[c2] != gram[1][1]:
                continue
            if r1[0] * c2[0] + r1[1] * c2[1] + r1[2] * c2[2] != gram[0][1]:
                continue
            r2 = pairing_row(c2)
            # third column: two linear constraints, then isotropy and det
            for c3 in _affine_line_solutions(field, r1, r2, gram[0][2], gram[1][2]):
                if norms.get(c3, herm(c3, c3)) != gram[2][2]:
                    continue
                if det(c1, c2, c3) == one:
                    count += 1
    return count


def _affine_line_solutions(field, r1, r2, b1, b2):
    """Solutions x of r1.x = b1, r2.x = b2 over F_{p^2}^3 (rank-2 system)."""
    from .linalg import kernel_basis, _rref

    M = [list(r1) + [b1], list(r2) + [b2]]
    rows, pivots = _rref(M, field)
    if 3 in pivots:
        return []
    x0 = [field.zero()] * 3
    for r, pc in enumerate(pivots):
        x0[pc] = rows[r][3]
    kern = kernel_basis([list(r1), list(r2)], field)
    if len(kern) != 1:
        raise IdentityCheckError("pairing constraints did not cut out a line")
    w = kern[0]
    out = []
    for t in field.elements():
        out.append((x0[0] + t * w[0], x0[1] + t * w[1], x0[2] + t * w[2]))
    return out
