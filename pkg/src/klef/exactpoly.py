"""Exact sparse polynomial arithmetic over Z, Q, and odd prime fields.

This is the computational kernel for everything built on the symmetric
algebra of the affine weight lattice: sparse multivariate polynomials with
a doubled grading (each variable sits in Z-degree 2), Laurent polynomials
in v for Hecke-side bookkeeping, fraction-free determinants and adjugates,
exact linear solving inside the polynomial ring, the graded Smith normal
form for monomial matrices, and the specialization sending every variable
to a scalar multiple of a single degree-2 variable t.

No floats anywhere; every operation either is exact or raises.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import (
    IntegrityError,
    NotDivisible,
    NotInSpan,
    PreconditionError,
    SingularMatrixError,
)

Exponents = tuple[int, ...]


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin for 64-bit range, ample for prime scans
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class CoefficientRing:
    """One of Z, Q, or F_p with p an odd prime.

    Coefficients are plain Python values: int for Z and F_p (F_p values are
    kept reduced to [0, p)), Fraction for Q. The ring object only supplies
    the arithmetic, so polynomials stay lightweight.
    """

    name: str
    char: int
    is_field: bool
    two_invertible: bool

    def coerce(self, value):  # from int or Fraction
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def exact_div(self, a, b):
        """a / b when the quotient exists in the ring, else NotDivisible."""
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == 0

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def __repr__(self) -> str:
        return self.name


class _IntegerRing(CoefficientRing):
    name = "Z"
    char = 0
    is_field = False
    two_invertible = False

    def coerce(self, value):
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise NotDivisible(f"{value} is not an integer")
            return value.numerator
        return int(value)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a in (1, -1):
            return a
        raise NotDivisible(f"{a} is not a unit in Z")

    def exact_div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in Z")
        q, r = divmod(a, b)
        if r != 0:
            raise NotDivisible(f"{a} is not divisible by {b} in Z")
        return q


class _RationalRing(CoefficientRing):
    name = "Q"
    char = 0
    is_field = True
    two_invertible = True

    def coerce(self, value):
        return Fraction(value)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in Q")
        return 1 / Fraction(a)

    def exact_div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in Q")
        return Fraction(a) / b


class PrimeField(CoefficientRing):
    """F_p for an odd prime p; p = 2 is rejected everywhere in the pipeline."""

    is_field = True
    two_invertible = True

    def __init__(self, p: int):
        if p == 2:
            raise PreconditionError("p = 2 is not an admissible coefficient field")
        if not _is_probable_prime(p):
            raise PreconditionError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.name = f"F{p}"

    def coerce(self, value):
        if isinstance(value, Fraction):
            den = value.denominator % self.p
            if den == 0:
                raise NotDivisible(f"denominator of {value} vanishes mod {self.p}")
            return value.numerator * pow(den, -1, self.p) % self.p
        return int(value) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"inverse of zero in F{self.p}")
        return pow(a, -1, self.p)

    def exact_div(self, a, b):
        return a * self.inv(b) % self.p

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))


ZZ = _IntegerRing()
QQ = _RationalRing()

_prime_field_cache: dict[int, PrimeField] = {}


def prime_field(p: int) -> PrimeField:
    field = _prime_field_cache.get(p)
    if field is None:
        field = _prime_field_cache.setdefault(p, PrimeField(p))
    return field


def _grlex_key(exponents: Exponents) -> tuple[int, Exponents]:
    return (sum(exponents), exponents)


class MultiPoly:
    """Sparse polynomial in nvars variables over a CoefficientRing.

    The term map sends exponent tuples to nonzero coefficients. A monomial
    with total exponent k has Z-degree 2k. Leading terms are taken in
    graded lexicographic order, which makes single-divisor exact division
    definitive: over an integral domain, f = q*g forces the leading term of
    f to be the product of the leading terms of q and g, so the division
    loop below strips q one term at a time and can only fail when no
    quotient exists.
    """

    __slots__ = ("ring", "nvars", "terms")

    def __init__(self, ring: CoefficientRing, nvars: int, terms: dict[Exponents, object]):
        self.ring = ring
        self.nvars = nvars
        self.terms = terms

    # construction ---------------------------------------------------------

    @staticmethod
    def zero(ring: CoefficientRing, nvars: int) -> "MultiPoly":
        return MultiPoly(ring, nvars, {})

    @staticmethod
    def constant(ring: CoefficientRing, nvars: int, value) -> "MultiPoly":
        c = ring.coerce(value)
        if ring.is_zero(c):
            return MultiPoly.zero(ring, nvars)
        return MultiPoly(ring, nvars, {(0,) * nvars: c})

    @staticmethod
    def variable(ring: CoefficientRing, nvars: int, index: int) -> "MultiPoly":
        exp = tuple(1 if i == index else 0 for i in range(nvars))
        return MultiPoly(ring, nvars, {exp: ring.one})

    @staticmethod
    def linear_form(ring: CoefficientRing, coeffs: Sequence) -> "MultiPoly":
        nvars = len(coeffs)
        terms: dict[Exponents, object] = {}
        for i, c in enumerate(coeffs):
            c = ring.coerce(c)
            if not ring.is_zero(c):
                exp = tuple(1 if j == i else 0 for j in range(nvars))
                terms[exp] = c
        return MultiPoly(ring, nvars, terms)

    def _check_compatible(self, other: "MultiPoly") -> None:
        if self.ring is not other.ring and self.ring != other.ring:
            raise PreconditionError("mixed coefficient rings")
        if self.nvars != other.nvars:
            raise PreconditionError("mixed variable counts")

    # arithmetic -----------------------------------------------------------

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_compatible(other)
        ring = self.ring
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = ring.add(terms.get(exp, 0), c) if exp in terms else c
            if exp in terms and ring.is_zero(s):
                del terms[exp]
            else:
                terms[exp] = s
        return MultiPoly(ring, self.nvars, terms)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __neg__(self) -> "MultiPoly":
        ring = self.ring
        return MultiPoly(ring, self.nvars, {e: ring.neg(c) for e, c in self.terms.items()})

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_compatible(other)
        ring = self.ring
        add, mul, is_zero = ring.add, ring.mul, ring.is_zero
        terms: dict[Exponents, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                prod = mul(c1, c2)
                if exp in terms:
                    s = add(terms[exp], prod)
                    if is_zero(s):
                        del terms[exp]
                    else:
                        terms[exp] = s
                elif not is_zero(prod):
                    terms[exp] = prod
        return MultiPoly(ring, self.nvars, terms)

    def scale(self, value) -> "MultiPoly":
        ring = self.ring
        c = ring.coerce(value)
        if ring.is_zero(c):
            return MultiPoly.zero(ring, self.nvars)
        return MultiPoly(ring, self.nvars, {e: ring.mul(v, c) for e, v in self.terms.items()})

    # predicates and views -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.nvars == other.nvars
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def leading(self) -> tuple[Exponents, object]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def total_degree(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degrees = {sum(e) for e in self.terms}
        return len(degrees) <= 1

    def z_degree(self) -> int | None:
        """Z-degree (2 * total exponent) of a homogeneous polynomial.

        Returns None for the zero polynomial; raises for inhomogeneous input.
        """
        if not self.terms:
            return None
        degrees = {sum(e) for e in self.terms}
        if len(degrees) != 1:
            raise PreconditionError("polynomial is not homogeneous")
        return 2 * degrees.pop()

    def map_coefficients(self, target: CoefficientRing) -> "MultiPoly":
        """Base change by coercing every coefficient into the target ring."""
        terms: dict[Exponents, object] = {}
        for e, c in self.terms.items():
            v = target.coerce(c)
            if not target.is_zero(v):
                terms[e] = v
        return MultiPoly(target, self.nvars, terms)

    def evaluate(self, point: Sequence):
        """Evaluate at a point with coordinates in the coefficient ring."""
        ring = self.ring
        values = [ring.coerce(x) for x in point]
        total = ring.zero
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                for _ in range(k):
                    term = ring.mul(term, values[i])
            total = ring.add(total, term)
        return total

    def render(self, var_names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[exp]
            factors = [
                var_names[i] if k == 1 else f"{var_names[i]}^{k}"
                for i, k in enumerate(exp)
                if k
            ]
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self) -> str:
        return f"MultiPoly({self.ring}, {self.render([f'x{i}' for i in range(self.nvars)])})"


def exact_divide(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Return q with f = q * g, or raise NotDivisible.

    Definitive over Z, Q, and F_p: the grlex leading-term loop succeeds
    whenever the quotient exists (see MultiPoly docstring), so NotDivisible
    proves non-membership of f in (g).
    """
    f._check_compatible(g)
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    ring = f.ring
    g_exp, g_coeff = g.leading()
    remainder = dict(f.terms)
    quotient: dict[Exponents, object] = {}
    while remainder:
        exp = max(remainder, key=_grlex_key)
        coeff = remainder[exp]
        q_exp = tuple(a - b for a, b in zip(exp, g_exp))
        if any(k < 0 for k in q_exp):
            raise NotDivisible("leading monomial not divisible")
        q_coeff = ring.exact_div(coeff, g_coeff)
        quotient[q_exp] = q_coeff
        # subtract (q_coeff * x^q_exp) * g from the remainder
        for e, c in g.terms.items():
            tgt = tuple(a + b for a, b in zip(q_exp, e))
            val = ring.sub(remainder.get(tgt, ring.zero), ring.mul(q_coeff, c))
            if ring.is_zero(val):
                remainder.pop(tgt, None)
            else:
                remainder[tgt] = val
    return MultiPoly(ring, f.nvars, quotient)


def divides(g: MultiPoly, f: MultiPoly) -> bool:
    try:
        exact_divide(f, g)
        return True
    except NotDivisible:
        return False


# ---------------------------------------------------------------------------
# matrices of polynomials


PolyMatrix = list[list[MultiPoly]]


def _matrix_shape(matrix: PolyMatrix) -> tuple[int, int]:
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if any(len(row) != cols for row in matrix):
        raise PreconditionError("ragged matrix")
    return rows, cols


def bareiss_det(matrix: PolyMatrix) -> MultiPoly:
    """Fraction-free determinant.

    Every division in the Bareiss recurrence is exact by the Sylvester
    identity; exact_divide doubles as an integrity assertion.
    """
    n, m = _matrix_shape(matrix)
    if n != m:
        raise PreconditionError("determinant of a non-square matrix")
    if n == 0:
        raise PreconditionError("determinant of an empty matrix")
    ring = matrix[0][0].ring
    nvars = matrix[0][0].nvars
    work = [list(row) for row in matrix]
    sign = 1
    prev = MultiPoly.constant(ring, nvars, 1)
    for k in range(n - 1):
        if work[k][k].is_zero():
            for r in range(k + 1, n):
                if not work[r][k].is_zero():
                    work[k], work[r] = work[r], work[k]
                    sign = -sign
                    break
            else:
                return MultiPoly.zero(ring, nvars)
        pivot = work[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pivot * work[i][j] - work[i][k] * work[k][j]
                work[i][j] = exact_divide(num, prev)
            work[i][k] = MultiPoly.zero(ring, nvars)
        prev = pivot
    det = work[n - 1][n - 1]
    return det if sign == 1 else -det


def adjugate(matrix: PolyMatrix) -> PolyMatrix:
    """Adjugate via signed cofactors; satisfies M @ adj = det * I."""
    n, m = _matrix_shape(matrix)
    if n != m:
        raise PreconditionError("adjugate of a non-square matrix")
    if n == 0:
        raise PreconditionError("adjugate of an empty matrix")
    ring = matrix[0][0].ring
    nvars = matrix[0][0].nvars
    if n == 1:
        return [[MultiPoly.constant(ring, nvars, 1)]]
    adj = [[MultiPoly.zero(ring, nvars) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [matrix[r][c] for c in range(n) if c != j]
                for r in range(n)
                if r != i
            ]
            cof = bareiss_det(minor)
            adj[j][i] = cof if (i + j) % 2 == 0 else -cof
    return adj


def matmul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    n, k = _matrix_shape(a)
    k2, m = _matrix_shape(b)
    if k != k2:
        raise PreconditionError("matmul shape mismatch")
    ring = a[0][0].ring
    nvars = a[0][0].nvars
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = MultiPoly.zero(ring, nvars)
            for t in range(k):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def solve_in_ring(
    matrix: PolyMatrix,
    rhs: Sequence[MultiPoly],
    *,
    det: MultiPoly | None = None,
    adj: PolyMatrix | None = None,
) -> list[MultiPoly]:
    """Solve E^T c = u with every c_i inside the polynomial ring.

    Cramer through the adjugate: c = adj(E)^T u / det(E), each entry divided
    exactly. NotInSpan signals that u is outside the row span over the ring;
    SingularMatrixError signals det(E) = 0. Precomputed det/adj may be passed
    in when solving many right-hand sides against one matrix.
    """
    n, m = _matrix_shape(matrix)
    if n != m or n != len(rhs):
        raise PreconditionError("solve_in_ring shape mismatch")
    if det is None:
        det = bareiss_det(matrix)
    if det.is_zero():
        raise SingularMatrixError("coefficient matrix is singular")
    if adj is None:
        adj = adjugate(matrix)
    solution = []
    for i in range(n):
        acc = MultiPoly.zero(det.ring, det.nvars)
        for j in range(n):
            acc = acc + adj[j][i] * rhs[j]
        try:
            solution.append(exact_divide(acc, det))
        except NotDivisible as exc:
            raise NotInSpan(f"component {i} not divisible by det") from exc
    return solution


# ---------------------------------------------------------------------------
# Laurent polynomials in v


class LaurentPoly:
    """Laurent polynomial in one variable v with integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[int, int] | None = None):
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v != 0}

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly()

    @staticmethod
    def one() -> "LaurentPoly":
        return LaurentPoly({0: 1})

    @staticmethod
    def v(power: int = 1, coeff: int = 1) -> "LaurentPoly":
        return LaurentPoly({power: coeff})

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly(out)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) - c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -c for k, c in self.coeffs.items()})

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict[int, int] = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                k = k1 + k2
                out[k] = out.get(k, 0) + c1 * c2
        return LaurentPoly(out)

    def scale(self, c: int) -> "LaurentPoly":
        return LaurentPoly({k: v * c for k, v in self.coeffs.items()})

    def bar(self) -> "LaurentPoly":
        """The involution v -> v^{-1}."""
        return LaurentPoly({-k: c for k, c in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def coefficient(self, power: int) -> int:
        return self.coeffs.get(power, 0)

    def evaluate_at_one(self) -> int:
        return sum(self.coeffs.values())

    def derivative_at_one(self) -> int:
        """Formal derivative evaluated at v = 1, i.e. the exponent sum."""
        return sum(k * c for k, c in self.coeffs.items())

    def in_v_times_z_of_v(self) -> bool:
        """True when every exponent is >= 1."""
        return all(k >= 1 for k in self.coeffs)

    def min_exponent(self) -> int:
        if not self.coeffs:
            raise ValueError("zero Laurent polynomial")
        return min(self.coeffs)

    def max_exponent(self) -> int:
        if not self.coeffs:
            raise ValueError("zero Laurent polynomial")
        return max(self.coeffs)

    def items_sorted(self) -> list[tuple[int, int]]:
        return sorted(self.coeffs.items())

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            c = self.coeffs[k]
            if k == 0:
                parts.append(str(c))
                continue
            base = "v" if k == 1 else f"v^{k}"
            if c == 1:
                parts.append(base)
            elif c == -1:
                parts.append(f"-{base}")
            else:
                parts.append(f"{c}*{base}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly({self.render()})"


# ---------------------------------------------------------------------------
# univariate t-polynomials and graded torsion data


class UniPoly:
    """Polynomial in the degree-2 variable t over a coefficient ring."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: CoefficientRing, coeffs: dict[int, object] | None = None):
        self.ring = ring
        self.coeffs = {}
        for k, c in (coeffs or {}).items():
            if k < 0:
                raise PreconditionError("negative t-power")
            if not ring.is_zero(c):
                self.coeffs[k] = c

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def degree(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no degree")
        return max(self.coeffs)

    def monomial(self) -> tuple[object, int]:
        """(coefficient, power) of a monomial; raises otherwise."""
        if len(self.coeffs) != 1:
            raise PreconditionError("not a monomial")
        ((k, c),) = self.coeffs.items()
        return c, k

    def __add__(self, other: "UniPoly") -> "UniPoly":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = self.ring.add(out.get(k, self.ring.zero), c)
        return UniPoly(self.ring, out)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        out: dict[int, object] = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                k = k1 + k2
                prod = self.ring.mul(c1, c2)
                out[k] = self.ring.add(out.get(k, self.ring.zero), prod)
        return UniPoly(self.ring, out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, UniPoly)
            and self.ring == other.ring
            and self.coeffs == other.coeffs
        )

    def __repr__(self) -> str:
        if not self.coeffs:
            return "UniPoly(0)"
        body = "+".join(
            f"{self.coeffs[k]}*t^{k}" for k in sorted(self.coeffs, reverse=True)
        )
        return f"UniPoly({body})"


@dataclass(frozen=True, order=True)
class TorsionSummand:
    """One summand K[t]/(t^a) shifted by b; a >= 1.

    The b stored here is minus the Z-degree of the summand's generator, so
    the summand occupies Z-degrees -b, -b+2, ..., -b+2(a-1).
    """

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a < 1:
            raise PreconditionError("torsion exponent must be positive")

    def degrees(self) -> range:
        return range(-self.b, -self.b + 2 * self.a, 2)


def specialize_tau(poly: MultiPoly, images: Sequence, target: CoefficientRing) -> UniPoly:
    """Substitute variable i -> images[i] * t.

    The caller supplies the per-variable scalars (for the root-lattice
    specialization these come from the Cartan matrix, and the admissibility
    of the characteristic is checked there). A homogeneous input yields a
    monomial in t.
    """
    scalars = [target.coerce(x) for x in images]
    out: dict[int, object] = {}
    for e, c in poly.terms.items():
        value = target.coerce(c)
        for i, k in enumerate(e):
            for _ in range(k):
                value = target.mul(value, scalars[i])
        power = sum(e)
        out[power] = target.add(out.get(power, target.zero), value)
    return UniPoly(target, out)


def graded_snf(
    matrix: Sequence[Sequence[object]],
    row_degrees: Sequence[int],
    col_degrees: Sequence[int],
    ring: CoefficientRing,
) -> tuple[TorsionSummand, ...]:
    """Torsion data of the cokernel of a monomial matrix over K[t].

    The input is the scalar coefficient matrix of a matrix whose (i, j)
    entry is matrix[i][j] * t^((row_degrees[i] - col_degrees[j]) / 2): rows
    span the relation submodule of a graded free module with generator
    Z-degrees col_degrees. Requires a field, a square nonsingular matrix,
    and degree consistency (nonzero entries only where the implied power is
    a nonnegative integer).

    Elimination uses a minimal-power pivot with (power, row, col) tie
    breaking. Row operations change the relation basis; column operations
    change the module basis homogeneously, so column degrees are preserved
    and each pivot of power a >= 1 contributes K[t]/(t^a) on a generator of
    the pivot column's degree, recorded as (a, b = -column degree). The
    resulting multiset is pivot-order independent (tested against a
    dimension-profile oracle).
    """
    if not ring.is_field:
        raise PreconditionError("graded_snf needs a field")
    n = len(matrix)
    if n == 0:
        return ()
    if len(row_degrees) != n or any(len(row) != len(col_degrees) for row in matrix):
        raise PreconditionError("degree lists do not match matrix shape")
    if len(col_degrees) != n:
        raise SingularMatrixError("non-square matrix cannot be nonsingular")

    work = [[ring.coerce(c) for c in row] for row in matrix]
    rdeg = list(row_degrees)
    cdeg = list(col_degrees)

    def power(i: int, j: int) -> int:
        diff = rdeg[i] - cdeg[j]
        if diff % 2 != 0 or diff < 0:
            raise PreconditionError(
                f"entry ({i},{j}) degree inconsistency: row {rdeg[i]}, col {cdeg[j]}"
            )
        return diff // 2

    live_rows = list(range(n))
    live_cols = list(range(n))
    summands: list[TorsionSummand] = []

    while live_rows:
        pivot = None
        for i in live_rows:
            for j in live_cols:
                if not ring.is_zero(work[i][j]):
                    key = (power(i, j), i, j)
                    if pivot is None or key < pivot:
                        pivot = key
        if pivot is None:
            raise SingularMatrixError("matrix is singular over K[t]")
        k, pi, pj = pivot
        pval = work[pi][pj]
        # clear the pivot column with row operations
        for i in live_rows:
            if i != pi and not ring.is_zero(work[i][pj]):
                f = ring.exact_div(work[i][pj], pval)
                for j in live_cols:
                    work[i][j] = ring.sub(work[i][j], ring.mul(f, work[pi][j]))
        # clear the pivot row with homogeneous column operations
        for j in live_cols:
            if j != pj and not ring.is_zero(work[pi][j]):
                f = ring.exact_div(work[pi][j], pval)
                for i in live_rows:
                    work[i][j] = ring.sub(work[i][j], ring.mul(f, work[i][pj]))
        if k >= 1:
            summands.append(TorsionSummand(a=k, b=-cdeg[pj]))
        live_rows.remove(pi)
        live_cols.remove(pj)

    return tuple(sorted(summands))


def datum_dimension(summands: Iterable[TorsionSummand], z_degree: int) -> int:
    """Dimension of the torsion module in one Z-degree."""
    return sum(1 for s in summands if z_degree in s.degrees())
