"""Exact arithmetic in an imaginary quadratic field K = Q(sqrt(d)).

Elements live on the integral basis {1, omega} with Fraction coordinates, so
every formula evaluates without square-root approximation.  omega is
(1+sqrt(d))/2 when d = 1 mod 4 and sqrt(d) otherwise; the different generator
delta = sqrt(D) is the derived element 2*omega - 1 or 2*omega.  On this basis
im_delta(a + b*omega) = b in both cases.

The module also fixes the rank-3 hermitian space with Gram matrix
antidiag(delta^-1, 1, -delta^-1), the integer-valued polarization form, the
self-duality test for rank-3 O_K-lattices, and the type-decomposition
idempotents over F_{p^2}.

All values are immutable and all operations are pure functions.
"""

from __future__ import annotations

from fractions import Fraction

from .arith import kronecker_symbol, squarefree_part_check
from .errors import HypothesisError
from .ffield import Fp2, Fp2Element


class QuadField:
    """The field Q(sqrt(d)) for a negative squarefree d, with its ring of integers."""

    def __init__(self, d: int):
        squarefree_part_check(d)
        self.d = d
        if d % 4 == 1:
            self.D = d
            self.omega_trace = 1
            self.omega_norm = (1 - d) // 4
            self.delta_coeffs = (-1, 2)  # delta = 2*omega - 1
        else:
            self.D = 4 * d
            self.omega_trace = 0
            self.omega_norm = -d
            self.delta_coeffs = (0, 2)  # delta = 2*omega

    def element(self, a, b=0) -> "QuadElement":
        return QuadElement(self, Fraction(a), Fraction(b))

    def zero(self) -> "QuadElement":
        return self.element(0)

    def one(self) -> "QuadElement":
        return self.element(1)

    def omega(self) -> "QuadElement":
        return self.element(0, 1)

    def delta(self) -> "QuadElement":
        c0, c1 = self.delta_coeffs
        return self.element(c0, c1)

    def vector(self, entries) -> tuple:
        """Coerce a length-3 sequence of elements/rationals into a K^3 vector."""
        out = []
        for x in entries:
            if isinstance(x, QuadElement):
                if x.field is not self and x.field != self:
                    raise HypothesisError("vector entries from a different field")
                out.append(x)
            else:
                out.append(self.element(x))
        return tuple(out)

    def __eq__(self, other):
        return isinstance(other, QuadField) and other.d == self.d

    def __hash__(self):
        return hash(("QuadField", self.d))

    def __repr__(self):
        return f"QuadField(d={self.d})"


class QuadElement:
    """Element a + b*omega of K, with exact rational coordinates."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: QuadField, a: Fraction, b: Fraction):
        self.field = field
        self.a = a
        self.b = b

    def _coerce(self, other):
        if isinstance(other, QuadElement):
            if other.field != self.field:
                raise HypothesisError("mixed-field arithmetic")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElement(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElement(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return QuadElement(self.field, -self.a, -self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        t, n = self.field.omega_trace, self.field.omega_norm
        # omega^2 = t*omega - n
        bb = self.b * o.b
        return QuadElement(
            self.field,
            self.a * o.a - n * bb,
            self.a * o.b + self.b * o.a + t * bb,
        )

    __rmul__ = __mul__

    def conj(self) -> "QuadElement":
        t = self.field.omega_trace
        return QuadElement(self.field, self.a + t * self.b, -self.b)

    def norm(self) -> Fraction:
        t, n = self.field.omega_trace, self.field.omega_norm
        return self.a * self.a + t * self.a * self.b + n * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a + self.field.omega_trace * self.b

    def im_delta(self) -> Fraction:
        """(x - conj(x)) / delta; equals b on the {1, omega} basis."""
        return self.b

    def inverse(self) -> "QuadElement":
        nm = self.norm()
        if nm == 0:
            raise ZeroDivisionError("inverse of zero in K")
        c = self.conj()
        return QuadElement(self.field, c.a / nm, c.b / nm)

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

    def is_rational(self) -> bool:
        return self.b == 0

    def is_integral(self) -> bool:
        """Membership in O_K = Z + Z*omega."""
        return self.a.denominator == 1 and self.b.denominator == 1

    def is_unit(self) -> bool:
        return self.is_integral() and self.norm() == 1

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return (
            isinstance(other, QuadElement)
            and other.field == self.field
            and other.a == self.a
            and other.b == self.b
        )

    def __hash__(self):
        return hash((self.field.d, self.a, self.b))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __repr__(self):
        return f"({self.a}+{self.b}w)"


def im_delta(x: QuadElement) -> Fraction:
    return x.im_delta()


# --- the hermitian space (V, ( , )) and the polarization form ---------------


def hermitian_gram(field: QuadField) -> tuple:
    """The fixed Gram matrix antidiag(delta^-1, 1, -delta^-1)."""
    dinv = field.delta().inverse()
    z, one = field.zero(), field.one()
    return (
        (z, z, dinv),
        (z, one, z),
        (-dinv, z, z),
    )


def _field_of(vectors):
    for v in vectors:
        for x in v:
            if isinstance(x, QuadElement):
                return x.field
    raise HypothesisError("no field element found in input vectors")


def hermitian_pair(u, v) -> QuadElement:
    """(u, v) = conj(u)^t J v, conjugate-linear in the first argument."""
    if len(u) != 3 or len(v) != 3:
        raise HypothesisError("hermitian pairing needs length-3 vectors")
    field = _field_of([u, v])
    u = field.vector(u)
    v = field.vector(v)
    J = hermitian_gram(field)
    acc = field.zero()
    for i in range(3):
        for j in range(3):
            acc = acc + u[i].conj() * J[i][j] * v[j]
    return acc


def polarization_pair(u, v) -> Fraction:
    """<u, v> = im_delta((u, v)), a rational number."""
    return hermitian_pair(u, v).im_delta()


def polarization_identity_holds(u, v) -> bool:
    """Check 2(u,v) = <u, delta*v> + delta*<u,v> exactly."""
    field = _field_of([u, v])
    u = field.vector(u)
    v = field.vector(v)
    delta = field.delta()
    lhs = 2 * hermitian_pair(u, v)
    dv = tuple(delta * x for x in v)
    rhs = field.element(polarization_pair(u, dv)) + delta * polarization_pair(u, v)
    return lhs == rhs


class HermitianSpace:
    """K^3 with the fixed Gram matrix; carries the signature check."""

    def __init__(self, field: QuadField):
        self.field = field
        self.gram = hermitian_gram(field)

    def pair(self, u, v) -> QuadElement:
        return hermitian_pair(self.field.vector(u), self.field.vector(v))

    def polarization(self, u, v) -> Fraction:
        return polarization_pair(self.field.vector(u), self.field.vector(v))

    def gram_is_hermitian(self) -> bool:
        J = self.gram
        return all(J[j][i].conj() == J[i][j] for i in range(3) for j in range(3))

    def signature(self) -> tuple[int, int]:
        """Exact signature of the hermitian form, by conjugate-congruent diagonalization."""
        H = [list(row) for row in self.gram]
        n = 3
        active = list(range(n))
        pos = neg = 0
        while active:
            pivot = None
            for i in active:
                if H[i][i]:
                    pivot = i
                    break
            if pivot is None:
                # all diagonal zero: mix a nonzero off-diagonal pair into the diagonal
                found = None
                for i in active:
                    for j in active:
                        if i != j and H[i][j]:
                            found = (i, j)
                            break
                    if found:
                        break
                if found is None:
                    raise HypothesisError("degenerate hermitian form")
                i, j = found
                t = H[i][j].conj()
                # b_i <- b_i + t b_j ; update row/column i
                for k in active:
                    H[i][k] = H[i][k] + t.conj() * H[j][k]
                for k in active:
                    H[k][i] = H[k][i] + H[k][j] * t
                pivot = i
            d = H[pivot][pivot]
            if not d.is_rational():
                raise HypothesisError("hermitian diagonal value not rational")
            val = d.a
            if val > 0:
                pos += 1
            else:
                neg += 1
            rest = [i for i in active if i != pivot]
            alphas = {j: H[pivot][j] / d for j in rest}
            for j in rest:
                for k in rest:
                    H[j][k] = (
                        H[j][k]
                        - alphas[j].conj() * H[pivot][k]
                        - H[j][pivot] * alphas[k]
                        + alphas[j].conj() * alphas[k] * d
                    )
            active = rest
        return (pos, neg)


# --- lattices and self-duality ----------------------------------------------


class LatticeBasis:
    """An ordered O_K-basis of a rank-3 lattice in K^3."""

    def __init__(self, field: QuadField, vectors):
        if len(vectors) != 3:
            raise HypothesisError("lattice basis needs exactly 3 vectors")
        self.field = field
        self.vectors = tuple(field.vector(v) for v in vectors)

    def __repr__(self):
        return f"LatticeBasis({self.vectors!r})"


def default_lattice_basis(field: QuadField) -> LatticeBasis:
    """The standard self-dual lattice basis {delta*e1, e2, e3}."""
    d = field.delta()
    z, one = field.zero(), field.one()
    return LatticeBasis(field, [(d, z, z), (z, one, z), (z, z, one)])


def _mat_mul3(A, B, field):
    return tuple(
        tuple(sum((A[i][k] * B[k][j] for k in range(3)), field.zero()) for j in range(3))
        for i in range(3)
    )


def _conj_transpose3(A):
    return tuple(tuple(A[j][i].conj() for j in range(3)) for i in range(3))


def _det3(A):
    return (
        A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
        - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
        + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0])
    )


def _inverse3(A, field):
    det = _det3(A)
    if not det:
        raise HypothesisError("degenerate basis")
    cof = [[None] * 3 for _ in range(3)]
    idx = ((1, 2), (0, 2), (0, 1))
    for i in range(3):
        for j in range(3):
            r = idx[i]
            c = idx[j]
            minor = A[r[0]][c[0]] * A[r[1]][c[1]] - A[r[0]][c[1]] * A[r[1]][c[0]]
            sign = -1 if (i + j) % 2 else 1
            cof[i][j] = sign * minor
    inv_det = det.inverse()
    return tuple(tuple(cof[j][i] * inv_det for j in range(3)) for i in range(3))


def is_self_dual(basis: LatticeBasis) -> bool:
    """Whether the lattice equals its dual {u : <u, v> in Z for all v in L}.

    Equivalent to O_K-self-duality under the hermitian pairing: the dual basis
    matrix is computed exactly and tested for O_K-integrality both ways.
    """
    field = basis.field
    B = tuple(tuple(basis.vectors[j][i] for j in range(3)) for i in range(3))  # columns
    J = hermitian_gram(field)
    BstarJ = _mat_mul3(_conj_transpose3(B), J, field)
    Dmat = _inverse3(BstarJ, field)  # columns are the dual basis vectors
    X = _mat_mul3(_inverse3(B, field), Dmat, field)
    if not all(X[i][j].is_integral() for i in range(3) for j in range(3)):
        return False
    Xinv = _inverse3(X, field)
    return all(Xinv[i][j].is_integral() for i in range(3) for j in range(3))


# --- type decomposition over F_{p^2} ----------------------------------------


class OkFp2Ring:
    """O_K tensor F_{p^2}, as F_{p^2}[w]/(w^2 - t*w + n) with t, n from omega."""

    def __init__(self, p: int, D: int):
        self.fp2 = Fp2.from_discriminant(p, D)
        field = QuadField(D if D % 4 != 0 else D // 4)
        self.kfield = field
        self.p = p
        self.t = self.fp2.from_int(field.omega_trace)
        self.n = self.fp2.from_int(field.omega_norm)

    def element(self, x: Fp2Element, y: Fp2Element) -> "OkFp2Element":
        return OkFp2Element(self, x, y)

    def from_quad_integer(self, q: QuadElement) -> "OkFp2Element":
        if not q.is_integral():
            raise HypothesisError("only O_K elements reduce into O_K tensor F_{p^2}")
        return self.element(self.fp2.from_int(int(q.a)), self.fp2.from_int(int(q.b)))

    def one(self):
        return self.element(self.fp2.one(), self.fp2.zero())

    def zero(self):
        return self.element(self.fp2.zero(), self.fp2.zero())

    def __eq__(self, other):
        return (
            isinstance(other, OkFp2Ring)
            and other.p == self.p
            and other.fp2 == self.fp2
        )

    def __hash__(self):
        return hash(("OkFp2Ring", self.p, self.kfield.d))


class OkFp2Element:
    """Element x + y*(omega tensor 1) with x, y in F_{p^2}."""

    __slots__ = ("ring", "x", "y")

    def __init__(self, ring, x, y):
        self.ring = ring
        self.x = x
        self.y = y

    def _coerce(self, other):
        if isinstance(other, OkFp2Element):
            if other.ring != self.ring:
                raise HypothesisError("mixed-ring arithmetic")
            return other
        if isinstance(other, Fp2Element):
            return OkFp2Element(self.ring, other, self.ring.fp2.zero())
        if isinstance(other, int):
            return OkFp2Element(self.ring, self.ring.fp2.from_int(other), self.ring.fp2.zero())
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return OkFp2Element(self.ring, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return OkFp2Element(self.ring, self.x - o.x, self.y - o.y)

    def __neg__(self):
        return OkFp2Element(self.ring, -self.x, -self.y)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        t, n = self.ring.t, self.ring.n
        yy = self.y * o.y
        return OkFp2Element(
            self.ring,
            self.x * o.x - n * yy,
            self.x * o.y + self.y * o.x + t * yy,
        )

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.x == o.x and self.y == o.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        return f"({self.x!r}+{self.y!r}*w)"


class TypeIdempotents:
    """The pair e_sigma, e_sigma_bar in O_K tensor F_{p^2}."""

    def __init__(self, ring: OkFp2Ring):
        self.ring = ring
        fp2 = ring.fp2
        half = fp2.from_int(pow(2, ring.p - 2, ring.p))
        c0, c1 = ring.kfield.delta_coeffs
        dinv = fp2.delta().inverse()
        # e_sigma = (1 tensor 1)/2 + (delta tensor delta^-1)/2
        self.e_sigma = ring.element(
            half + half * fp2.from_int(c0) * dinv,
            half * fp2.from_int(c1) * dinv,
        )
        self.e_sigma_bar = ring.one() - self.e_sigma

    def delta_image(self) -> Fp2Element:
        """The image of delta in F_{p^2} under the sigma embedding."""
        return self.ring.fp2.delta()


def type_idempotents(p: int, D: int) -> TypeIdempotents:
    """Construct e_sigma, e_sigma_bar; p must be an odd prime, inert and unramified."""
    if p == 2:
        raise HypothesisError("p must be odd: 2 is not invertible in the coefficient ring")
    if D % p == 0:
        raise HypothesisError(f"p = {p} is ramified (p divides D = {D})")
    if kronecker_symbol(D, p) == 1:
        raise HypothesisError(f"p = {p} splits in the field of discriminant {D}")
    return TypeIdempotents(OkFp2Ring(p, D))


def type_decompose(idem: TypeIdempotents, vectors):
    """Split module vectors over O_K tensor F_{p^2} into sigma and sigma-bar parts."""
    sigma = [tuple(idem.e_sigma * x for x in v) for v in vectors]
    sigma_bar = [tuple(idem.e_sigma_bar * x for x in v) for v in vectors]
    return sigma, sigma_bar
