"""Elementary integer arithmetic helpers: primality, squarefreeness, Kronecker symbol."""

from math import gcd, isqrt


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    f = 2
    while f * f <= n:
        if n % (f * f) == 0:
            return False
        while n % f == 0:
            n //= f
        f += 1
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of |n|, ascending."""
    n = abs(n)
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a|n), fully multiplicative extension of Jacobi."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # factors of 2 in n: (a|2) = 0, 1, -1 for a even, a = +-1 (8), a = +-3 (8)
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t % 2 == 1 and a % 8 in (3, 5):
        result = -result
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_fundamental_discriminant(D: int) -> bool:
    """Fundamental discriminant test (here always used with D < 0)."""
    if D == 0 or D == 1:
        return False
    if D % 4 == 1:
        return is_squarefree(D)
    if D % 4 == 0:
        q = D // 4
        return q % 4 in (2, 3) and is_squarefree(q)
    return False


def squarefree_part_check(d: int) -> None:
    """Validate a field generator d: negative, squarefree, not 0 or 1."""
    from .errors import HypothesisError

    if d >= 0:
        raise HypothesisError(f"d must be negative, got {d}")
    if not is_squarefree(d):
        raise HypothesisError(f"d must be squarefree, got {d}")


__all__ = [
    "gcd",
    "isqrt",
    "is_prime",
    "is_squarefree",
    "prime_factors",
    "kronecker_symbol",
    "is_fundamental_discriminant",
    "squarefree_part_check",
]
