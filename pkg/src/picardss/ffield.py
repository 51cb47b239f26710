"""Arithmetic in F_{p^2} and truncated bivariate power series over it.

F_{p^2} is presented on the basis (1, g) with g = image of delta = sqrt(D)
for odd p (so g^2 = D mod p), matching the field K of the same discriminant;
for p = 2 (inert means D = 5 mod 8) the basis element is the image of omega,
with g^2 = g + 1.  Series are sparse coefficient tables on monomials u^i v^j
of total degree < T, with ideal reduction by graded-lex leading terms.

Everything here is immutable; operations return fresh values.
"""

from __future__ import annotations

from .arith import is_prime, kronecker_symbol
from .errors import GuardError, HypothesisError


class Fp2:
    """The field with p^2 elements, basis (1, g), g^2 = gsq_const + gsq_lin * g."""

    def __init__(self, p: int, gsq_const: int, gsq_lin: int, d: int | None = None):
        if not is_prime(p):
            raise HypothesisError(f"p = {p} is not prime")
        self.p = p
        self.gsq_const = gsq_const % p
        self.gsq_lin = gsq_lin % p
        self.d = d

    @classmethod
    def from_discriminant(cls, p: int, D: int) -> "Fp2":
        """F_{p^2} = O_K/p for the field of fundamental discriminant D; p must be inert."""
        kron = kronecker_symbol(D, p)
        if kron == 0:
            raise HypothesisError(f"p = {p} is ramified for discriminant {D}")
        if kron == 1:
            raise HypothesisError(f"p = {p} splits for discriminant {D}")
        d = D if D % 4 != 0 else D // 4
        if p == 2:
            # x^2 - D is never irreducible mod 2; use the minimal polynomial of
            # omega instead: omega^2 = omega - (1-d)/4, and (1-d)/4 is odd here.
            return cls(2, 1, 1, d=d)
        return cls(p, D % p, 0, d=d)

    @classmethod
    def generic(cls, p: int) -> "Fp2":
        """F_{p^2} with no attached discriminant (least non-residue generator)."""
        if p == 2:
            return cls(2, 1, 1)
        r = next(r for r in range(2, p) if kronecker_symbol(r, p) == -1)
        return cls(p, r, 0)

    def element(self, a: int, b: int = 0) -> "Fp2Element":
        return Fp2Element(self, a % self.p, b % self.p)

    def from_int(self, n: int) -> "Fp2Element":
        return self.element(n, 0)

    def zero(self) -> "Fp2Element":
        return self.element(0)

    def one(self) -> "Fp2Element":
        return self.element(1)

    def gen(self) -> "Fp2Element":
        return self.element(0, 1)

    def delta(self) -> "Fp2Element":
        """Image of delta = sqrt(D).  For p = 2 this is 2*omega - 1 = 1."""
        if self.d is None:
            raise HypothesisError("field constructed without a discriminant")
        if self.p == 2:
            return self.one()
        return self.gen()

    def elements(self):
        for a in range(self.p):
            for b in range(self.p):
                yield self.element(a, b)

    def size(self) -> int:
        return self.p * self.p

    def __eq__(self, other):
        return (
            isinstance(other, Fp2)
            and other.p == self.p
            and other.gsq_const == self.gsq_const
            and other.gsq_lin == self.gsq_lin
        )

    def __hash__(self):
        return hash(("Fp2", self.p, self.gsq_const, self.gsq_lin))

    def __repr__(self):
        return f"Fp2(p={self.p})"


class Fp2Element:
    __slots__ = ("field", "a", "b")

    def __init__(self, field: Fp2, a: int, b: int):
        self.field = field
        self.a = a
        self.b = b

    def _coerce(self, other):
        if isinstance(other, Fp2Element):
            if other.field != self.field:
                raise HypothesisError("mixed-field arithmetic in F_{p^2}")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.field.p
        return Fp2Element(self.field, (self.a + o.a) % p, (self.b + o.b) % p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.field.p
        return Fp2Element(self.field, (self.a - o.a) % p, (self.b - o.b) % p)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        p = self.field.p
        return Fp2Element(self.field, -self.a % p, -self.b % p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        f = self.field
        p = f.p
        bb = self.b * o.b
        a = (self.a * o.a + f.gsq_const * bb) % p
        b = (self.a * o.b + self.b * o.a + f.gsq_lin * bb) % p
        return Fp2Element(f, a, b)

    __rmul__ = __mul__

    def conj(self) -> "Fp2Element":
        """The nontrivial automorphism; equals x -> x^p."""
        f = self.field
        return Fp2Element(f, (self.a + f.gsq_lin * self.b) % f.p, -self.b % f.p)

    def frobenius(self, e: int = 1) -> "Fp2Element":
        """x^(p^e); order two, so only the parity of e matters."""
        return self.conj() if e % 2 else self

    def norm(self) -> int:
        """x * conj(x), an element of the prime field returned as an int."""
        f = self.field
        return (self.a * self.a + f.gsq_lin * self.a * self.b - f.gsq_const * self.b * self.b) % f.p

    def inverse(self) -> "Fp2Element":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in F_{p^2}")
        ninv = pow(n, self.field.p - 2, self.field.p)
        c = self.conj()
        return Fp2Element(self.field, c.a * ninv % self.field.p, c.b * ninv % self.field.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.field.p, self.a, self.b))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return "g" if self.b == 1 else f"{self.b}*g"
        gpart = "g" if self.b == 1 else f"{self.b}*g"
        return f"({self.a}+{gpart})"


def roots_of_minus_one(p: int, D: int) -> list[Fp2Element]:
    """All zeta in F_{p^2} with zeta^(p+1) = -1; exactly p+1 of them."""
    field = Fp2.from_discriminant(p, D)
    minus_one = -field.one()
    roots = [z for z in field.elements() if z ** (p + 1) == minus_one]
    if len(roots) != p + 1:  # norm surjectivity makes this impossible
        raise HypothesisError(f"expected {p + 1} roots of -1, found {len(roots)}")
    return roots


# --- truncated bivariate power series ----------------------------------------


class SeriesRing:
    """F_{p^2}[u, v] truncated at total degree < trunc."""

    def __init__(self, field: Fp2, trunc: int):
        if trunc < 1:
            raise GuardError("truncation order must be at least 1")
        self.field = field
        self.trunc = trunc

    def zero(self) -> "TruncatedSeries":
        return TruncatedSeries(self, {})

    def one(self) -> "TruncatedSeries":
        return self.constant(self.field.one())

    def constant(self, c) -> "TruncatedSeries":
        if isinstance(c, int):
            c = self.field.from_int(c)
        if not c:
            return self.zero()
        return TruncatedSeries(self, {(0, 0): c})

    def monomial(self, i: int, j: int, c=1) -> "TruncatedSeries":
        if i + j >= self.trunc:
            raise GuardError(
                f"monomial u^{i} v^{j} exceeds truncation order {self.trunc}"
            )
        if isinstance(c, int):
            c = self.field.from_int(c)
        if not c:
            return self.zero()
        return TruncatedSeries(self, {(i, j): c})

    def u(self) -> "TruncatedSeries":
        return self.monomial(1, 0)

    def v(self) -> "TruncatedSeries":
        return self.monomial(0, 1)

    def series(self, coeffs: dict) -> "TruncatedSeries":
        clean = {}
        for (i, j), c in coeffs.items():
            if isinstance(c, int):
                c = self.field.from_int(c)
            if c and i + j < self.trunc:
                clean[(i, j)] = c
        return TruncatedSeries(self, clean)

    def __eq__(self, other):
        return (
            isinstance(other, SeriesRing)
            and other.field == self.field
            and other.trunc == self.trunc
        )

    def __hash__(self):
        return hash(("SeriesRing", self.field, self.trunc))

    def __repr__(self):
        return f"SeriesRing({self.field!r}, T={self.trunc})"


def _grlex_key(mono):
    i, j = mono
    return (i + j, i)


class TruncatedSeries:
    """Sparse element of F_{p^2}[u, v] / (total degree >= T)."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: SeriesRing, coeffs: dict):
        self.ring = ring
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            if other.ring != self.ring:
                raise HypothesisError("truncation mismatch")
            return other
        if isinstance(other, int):
            return self.ring.constant(other)
        if isinstance(other, Fp2Element):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out = dict(self.coeffs)
        for m, c in o.coeffs.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s:
                out[m] = s
            elif m in out:
                del out[m]
        return TruncatedSeries(self.ring, out)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return TruncatedSeries(self.ring, {m: -c for m, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fp2Element)):
            c = self.ring.field.from_int(other) if isinstance(other, int) else other
            if not c:
                return self.ring.zero()
            return TruncatedSeries(self.ring, {m: x * c for m, x in self.coeffs.items()})
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        T = self.ring.trunc
        out = {}
        for (i1, j1), c1 in self.coeffs.items():
            for (i2, j2), c2 in o.coeffs.items():
                i, j = i1 + i2, j1 + j2
                if i + j >= T:
                    continue
                m = (i, j)
                s = out.get(m)
                prod = c1 * c2
                s = prod if s is None else s + prod
                if s:
                    out[m] = s
                elif m in out:
                    del out[m]
        return TruncatedSeries(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise HypothesisError("negative powers of series are not defined")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def frobenius_twist(self, e: int = 1) -> "TruncatedSeries":
        """The ring Frobenius to the p^e: coefficients and exponents both scale.

        Monomials pushed past the truncation order drop out, which matches
        the quotient-ring semantics (u^(p^e) = 0 whenever p^e >= T).
        """
        q = self.ring.field.p ** e
        T = self.ring.trunc
        out = {}
        for (i, j), c in self.coeffs.items():
            if (i + j) * q >= T:
                continue
            out[(i * q, j * q)] = c ** q
        return TruncatedSeries(self.ring, out)

    def order(self) -> int | None:
        """Minimal total degree of a nonzero monomial, or None for the zero series."""
        if not self.coeffs:
            return None
        return min(i + j for (i, j) in self.coeffs)

    def constant_term(self) -> Fp2Element:
        return self.coeffs.get((0, 0), self.ring.field.zero())

    def is_unit(self) -> bool:
        return bool(self.constant_term())

    def leading_monomial(self):
        """Graded-lex largest monomial (u > v), or None."""
        if not self.coeffs:
            return None
        return max(self.coeffs, key=_grlex_key)

    def subst_u(self, c: Fp2Element) -> "TruncatedSeries":
        """Substitute u = c * v (the branch restriction)."""
        out = self.ring.zero()
        for (i, j), coeff in self.coeffs.items():
            out = out + self.ring.monomial(0, i + j, coeff * c**i)
        return out

    def subst_v(self, c: Fp2Element) -> "TruncatedSeries":
        """Substitute v = c * u."""
        out = self.ring.zero()
        for (i, j), coeff in self.coeffs.items():
            out = out + self.ring.monomial(i + j, 0, coeff * c**j)
        return out

    def evaluate(self, u0: Fp2Element, v0: Fp2Element) -> Fp2Element:
        acc = self.ring.field.zero()
        for (i, j), c in self.coeffs.items():
            acc = acc + c * u0**i * v0**j
        return acc

    def divide_monomial(self, i0: int, j0: int) -> "TruncatedSeries":
        """Exact division by u^i0 v^j0; raises if any term is not divisible."""
        out = {}
        for (i, j), c in self.coeffs.items():
            if i < i0 or j < j0:
                raise HypothesisError("series not divisible by the requested monomial")
            out[(i - i0, j - j0)] = c
        return TruncatedSeries(self.ring, out)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.ring, tuple(sorted(self.coeffs.items(), key=lambda t: t[0]))))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return self.text()

    def text(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for (i, j) in sorted(self.coeffs, key=_grlex_key, reverse=True):
            c = self.coeffs[(i, j)]
            mono = []
            if i:
                mono.append("u" if i == 1 else f"u^{i}")
            if j:
                mono.append("v" if j == 1 else f"v^{j}")
            cs = repr(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append("*".join(mono))
            else:
                parts.append(cs + "*" + "*".join(mono))
        return " + ".join(parts)


def frobenius_twist(obj, e: int = 1):
    """Entrywise p^e-power twist of a series, field element, or matrix of either."""
    if isinstance(obj, TruncatedSeries):
        return obj.frobenius_twist(e)
    if isinstance(obj, Fp2Element):
        return obj.frobenius(e)
    if isinstance(obj, (list, tuple)):
        return [
            [frobenius_twist(x, e) for x in row] if isinstance(row, (list, tuple)) else frobenius_twist(row, e)
            for row in obj
        ]
    raise HypothesisError(f"cannot twist object of type {type(obj).__name__}")


# --- ideal reduction ----------------------------------------------------------


def _divides(m1, m2) -> bool:
    return m1[0] <= m2[0] and m1[1] <= m2[1]


def normal_form(f: TruncatedSeries, gens) -> TruncatedSeries:
    """Reduce f by the generator list (in order) with graded-lex leading terms.

    Each step rewrites the largest reducible monomial, which strictly drops in
    the monomial order, so the loop terminates below the truncation bound.
    """
    gens = [g for g in gens if g]
    if not gens:
        return f
    lead = [(g.leading_monomial(), g) for g in gens]
    ring = f.ring
    work = f
    while True:
        reducible = None
        for m in sorted(work.coeffs, key=_grlex_key, reverse=True):
            hit = next(((lm, g) for lm, g in lead if _divides(lm, m)), None)
            if hit is not None:
                reducible = (m, hit[0], hit[1])
                break
        if reducible is None:
            return work
        m, lm, g = reducible
        quot_mono = (m[0] - lm[0], m[1] - lm[1])
        coeff = work.coeffs[m] / g.coeffs[lm]
        work = work - ring.monomial(quot_mono[0], quot_mono[1], coeff) * g


def order_at_origin(f: TruncatedSeries, gens=()):
    """Vanishing order of the ideal-normal form at the origin.

    Returns "unit" when the normal form has a nonzero constant term,
    "zero-to-truncation" when it vanishes up to the truncation order, and
    the minimal total degree otherwise.
    """
    nf = normal_form(f, gens)
    if nf.is_unit():
        return "unit"
    ord_ = nf.order()
    if ord_ is None:
        return "zero-to-truncation"
    return ord_


def quotient_dimension(gens) -> int:
    """Dimension over F_{p^2} of the series ring modulo the ideal.

    Counts the standard monomials left by exhaustive normal-form reduction of
    all monomials below the truncation order; guards that the top degree
    stratum is empty so the count cannot change under larger truncations.
    """
    gens = [g for g in gens if g]
    if not gens:
        raise HypothesisError("quotient by the zero ideal is not finite-dimensional")
    ring = gens[0].ring
    T = ring.trunc
    leads = [g.leading_monomial() for g in gens]
    standard = []
    for d in range(T):
        for i in range(d + 1):
            m = (i, d - i)
            if not any(_divides(lm, m) for lm in leads):
                standard.append(m)
    if any(i + j >= T - 1 for (i, j) in standard):
        raise GuardError(
            "quotient dimension not stabilized below the truncation order"
        )
    # consistency pass: the normal form of every monomial is supported on
    # standard monomials, and every standard monomial is its own normal form
    support = set()
    for d in range(T):
        for i in range(d + 1):
            nf = normal_form(ring.monomial(i, d - i), gens)
            support.update(nf.coeffs)
    if not support == set(standard):
        raise GuardError("normal-form support does not match the standard monomials")
    return len(standard)


def local_model_ideal(ring: SeriesRing) -> list[TruncatedSeries]:
    """The ideal (u^(p+1) + v^(p+1)) cutting out the supersingular local model."""
    p = ring.field.p
    return [ring.monomial(p + 1, 0) + ring.monomial(0, p + 1)]


def vanishing_scheme_ideal(ring: SeriesRing) -> list[TruncatedSeries]:
    """The ideal (u^(p+1) + v^(p+1), u^(p^2-1), v^(p^2-1))."""
    p = ring.field.p
    return local_model_ideal(ring) + [
        ring.monomial(p * p - 1, 0),
        ring.monomial(0, p * p - 1),
    ]


class BranchMap:
    """Substitution u = zeta * v for a (p+1)-st root zeta of -1."""

    def __init__(self, ring: SeriesRing, zeta: Fp2Element):
        p = ring.field.p
        if zeta ** (p + 1) != -ring.field.one():
            raise HypothesisError("zeta is not a (p+1)-st root of -1")
        self.ring = ring
        self.zeta = zeta

    def __call__(self, obj):
        if isinstance(obj, TruncatedSeries):
            return obj.subst_u(self.zeta)
        if isinstance(obj, (list, tuple)):
            return [[self(x) for x in row] for row in obj]
        raise HypothesisError(f"cannot restrict object of type {type(obj).__name__}")
