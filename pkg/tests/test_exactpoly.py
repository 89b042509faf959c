"""Kernel tests: polynomial arithmetic, determinants, solving, graded SNF.

Reference values come from sympy, cofactor expansion, and per-degree
linear algebra (tests/oracles.py), never from the code under test.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from klef.errors import (
    NotDivisible,
    NotInSpan,
    PreconditionError,
    SingularMatrixError,
)
from klef.exactpoly import (
    QQ,
    ZZ,
    LaurentPoly,
    MultiPoly,
    TorsionSummand,
    UniPoly,
    adjugate,
    bareiss_det,
    datum_dimension,
    exact_divide,
    graded_snf,
    matmul,
    prime_field,
    solve_in_ring,
    specialize_tau,
)
from oracles import cofactor_det, datum_from_profile, to_sympy

X, Y = sympy.symbols("x y")


def small_polys(ring, nvars=2, max_exp=3, max_terms=4, coeff_range=(-5, 5)):
    exponents = st.tuples(*([st.integers(0, max_exp)] * nvars))
    coeffs = st.integers(*coeff_range)
    return st.dictionaries(exponents, coeffs, max_size=max_terms).map(
        lambda d: MultiPoly(
            ring,
            nvars,
            {e: ring.coerce(c) for e, c in d.items() if ring.coerce(c) != 0},
        )
    )


class TestRings:
    def test_integer_exact_div(self):
        assert ZZ.exact_div(6, 3) == 2
        with pytest.raises(NotDivisible):
            ZZ.exact_div(7, 3)

    def test_prime_field_rejects_two(self):
        with pytest.raises(PreconditionError):
            prime_field(2)

    def test_prime_field_rejects_composite(self):
        with pytest.raises(PreconditionError):
            prime_field(9)

    def test_prime_field_arithmetic(self):
        F5 = prime_field(5)
        assert F5.coerce(Fraction(1, 2)) == 3
        assert F5.mul(3, 4) == 2
        assert F5.inv(3) == 2

    def test_fraction_denominator_vanishes(self):
        F5 = prime_field(5)
        with pytest.raises(NotDivisible):
            F5.coerce(Fraction(1, 5))


class TestMultiPoly:
    @given(small_polys(ZZ), small_polys(ZZ))
    @settings(max_examples=60, deadline=None)
    def test_mul_matches_sympy(self, f, g):
        assert to_sympy(f * g, (X, Y)) == sympy.expand(to_sympy(f, (X, Y)) * to_sympy(g, (X, Y)))

    @given(small_polys(ZZ), small_polys(ZZ), small_polys(ZZ))
    @settings(max_examples=40, deadline=None)
    def test_ring_axioms(self, f, g, h):
        assert (f + g) * h == f * h + g * h
        assert f + g == g + f
        assert f - f == MultiPoly.zero(ZZ, 2)

    @given(small_polys(ZZ), small_polys(ZZ))
    @settings(max_examples=60, deadline=None)
    def test_exact_divide_roundtrip(self, f, g):
        if g.is_zero():
            return
        assert exact_divide(f * g, g) == f

    @given(small_polys(ZZ), small_polys(ZZ))
    @settings(max_examples=60, deadline=None)
    def test_not_divisible_is_definitive(self, f, g):
        # when exact_divide refuses, sympy must confirm no quotient exists in Z[x,y]
        if g.is_zero() or f.is_zero():
            return
        try:
            exact_divide(f, g)
        except NotDivisible:
            q, r = sympy.div(to_sympy(f, (X, Y)), to_sympy(g, (X, Y)), X, Y, domain="QQ")
            in_ring = r == 0 and all(
                sympy.Rational(c).q == 1 for c in sympy.Poly(q, X, Y).coeffs()
            )
            assert not in_ring

    def test_divide_over_field_with_rational_quotient(self):
        f = MultiPoly.linear_form(QQ, [2, 0])
        g = MultiPoly.constant(QQ, 2, 4)
        assert exact_divide(f, g) == MultiPoly.linear_form(QQ, [Fraction(1, 2), 0])

    @given(small_polys(ZZ), small_polys(ZZ))
    @settings(max_examples=40, deadline=None)
    def test_base_change_is_functorial(self, f, g):
        F7 = prime_field(7)
        for target in (QQ, F7):
            assert (f + g).map_coefficients(target) == f.map_coefficients(target) + g.map_coefficients(target)
            assert (f * g).map_coefficients(target) == f.map_coefficients(target) * g.map_coefficients(target)

    def test_homogeneity(self):
        f = MultiPoly(ZZ, 2, {(1, 0): 1, (0, 1): -2})
        assert f.is_homogeneous() and f.z_degree() == 2
        g = f + MultiPoly.constant(ZZ, 2, 1)
        assert not g.is_homogeneous()
        with pytest.raises(PreconditionError):
            g.z_degree()
        assert MultiPoly.zero(ZZ, 2).z_degree() is None


def random_int_matrix(rng, n, lo=-6, hi=6):
    return [
        [MultiPoly.constant(ZZ, 1, rng.randint(lo, hi)) for _ in range(n)]
        for _ in range(n)
    ]


class TestDeterminants:
    def test_bareiss_matches_cofactor_on_integers(self):
        rng = random.Random(7)
        for n in (1, 2, 3, 4, 5):
            for _ in range(8):
                m = random_int_matrix(rng, n)
                assert bareiss_det(m) == cofactor_det(m)

    def test_bareiss_on_polynomial_matrix_matches_sympy(self):
        x = MultiPoly.variable(ZZ, 2, 0)
        y = MultiPoly.variable(ZZ, 2, 1)
        one = MultiPoly.constant(ZZ, 2, 1)
        m = [
            [x + y, y, one],
            [y, x, x + y],
            [one, x * y, x],
        ]
        sym = sympy.Matrix(3, 3, lambda i, j: to_sympy(m[i][j], (X, Y)))
        assert to_sympy(bareiss_det(m), (X, Y)) == sympy.expand(sym.det())

    def test_bareiss_zero_pivot_needs_row_swap(self):
        z = MultiPoly.zero(ZZ, 1)
        a = MultiPoly.constant(ZZ, 1, 3)
        b = MultiPoly.variable(ZZ, 1, 0)
        m = [[z, a], [b, z]]
        assert bareiss_det(m) == -(a * b)

    def test_singular_matrix(self):
        x = MultiPoly.variable(ZZ, 1, 0)
        m = [[x, x], [x, x]]
        assert bareiss_det(m).is_zero()

    def test_bareiss_commutes_with_reduction_mod_p(self):
        rng = random.Random(21)
        F5 = prime_field(5)
        for _ in range(15):
            m = random_int_matrix(rng, 4)
            reduced = [[e.map_coefficients(F5) for e in row] for row in m]
            assert bareiss_det(m).map_coefficients(F5) == bareiss_det(reduced)

    def test_adjugate_identity(self):
        rng = random.Random(3)
        x = MultiPoly.variable(ZZ, 1, 0)
        for n in (1, 2, 3, 4):
            for trial in range(6):
                m = random_int_matrix(rng, n)
                if trial % 2:
                    m[0][0] = m[0][0] + x  # mix in a variable entry
                det = bareiss_det(m)
                adj = adjugate(m)
                prod = matmul(m, adj)
                for i in range(n):
                    for j in range(n):
                        expected = det if i == j else MultiPoly.zero(ZZ, 1)
                        assert prod[i][j] == expected


class TestSolveInRing:
    def test_recovers_known_solution(self):
        x = MultiPoly.variable(ZZ, 2, 0)
        y = MultiPoly.variable(ZZ, 2, 1)
        one = MultiPoly.constant(ZZ, 2, 1)
        e = [[one, x], [y, one + x * y]]
        c = [x + y, one]
        # u = E^T c
        u = [
            e[0][0] * c[0] + e[1][0] * c[1],
            e[0][1] * c[0] + e[1][1] * c[1],
        ]
        assert solve_in_ring(e, u) == c

    def test_not_in_span(self):
        x = MultiPoly.variable(ZZ, 1, 0)
        one = MultiPoly.constant(ZZ, 1, 1)
        with pytest.raises(NotInSpan):
            solve_in_ring([[x]], [one])

    def test_singular(self):
        x = MultiPoly.variable(ZZ, 1, 0)
        with pytest.raises(SingularMatrixError):
            solve_in_ring([[x, x], [x, x]], [x, x])


class TestGradedSnf:
    def test_single_entry(self):
        # relation t^a on a degree-0 generator
        for a in (1, 2, 5):
            out = graded_snf([[Fraction(3)]], [2 * a], [0], QQ)
            assert out == (TorsionSummand(a=a, b=0),)

    def test_unit_pivot_contributes_nothing(self):
        out = graded_snf([[Fraction(2)]], [0], [0], QQ)
        assert out == ()

    def test_diagonal_t_and_t_cubed(self):
        out = graded_snf(
            [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]],
            [2, 6],
            [0, 0],
            QQ,
        )
        assert out == (TorsionSummand(1, 0), TorsionSummand(3, 0))

    def test_degree_inconsistency_rejected(self):
        with pytest.raises(PreconditionError):
            graded_snf([[Fraction(1)]], [1], [0], QQ)  # odd difference
        with pytest.raises(PreconditionError):
            graded_snf([[Fraction(1)]], [0], [2], QQ)  # negative power

    def test_singular_rejected(self):
        m = [[Fraction(1), Fraction(1)], [Fraction(1), Fraction(1)]]
        with pytest.raises(SingularMatrixError):
            graded_snf(m, [2, 2], [0, 0], QQ)

    def test_needs_field(self):
        with pytest.raises(PreconditionError):
            graded_snf([[1]], [2], [0], ZZ)

    @given(st.integers(0, 10**6))
    @settings(max_examples=60, deadline=None)
    def test_matches_dimension_profile_oracle(self, seed):
        rng = random.Random(seed)
        n = rng.randint(1, 4)
        cdeg = sorted(rng.choice((0, 0, 2, 4)) for _ in range(n))
        rdeg = [cd + 2 * rng.randint(0, 3) for cd in cdeg]
        rng.shuffle(rdeg)
        while True:
            m = [
                [
                    Fraction(rng.randint(-4, 4))
                    if rdeg[i] >= cdeg[j] and (rdeg[i] - cdeg[j]) % 2 == 0
                    else Fraction(0)
                    for j in range(n)
                ]
                for i in range(n)
            ]
            det = cofactor_det(
                [[MultiPoly.constant(QQ, 1, e) for e in row] for row in m]
            )
            if not det.is_zero():
                break
        got = graded_snf(m, rdeg, cdeg, QQ)
        assert got == datum_from_profile(m, rdeg, cdeg, QQ)

    @given(st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_matches_oracle_over_prime_field(self, seed):
        rng = random.Random(seed)
        F7 = prime_field(7)
        n = rng.randint(1, 3)
        cdeg = [rng.choice((0, 2)) for _ in range(n)]
        rdeg = [cd + 2 * rng.randint(0, 2) for cd in cdeg]
        m = [
            [
                rng.randint(0, 6)
                if rdeg[i] >= cdeg[j] and (rdeg[i] - cdeg[j]) % 2 == 0
                else 0
                for j in range(n)
            ]
            for i in range(n)
        ]
        try:
            got = graded_snf(m, rdeg, cdeg, F7)
        except SingularMatrixError:
            return
        assert got == datum_from_profile(m, rdeg, cdeg, F7)

    def test_sum_of_exponents_is_det_degree(self):
        # det of the monomial matrix [[t^2, t], [t^3, 2t^2]] has t-degree 4
        m = [[Fraction(1), Fraction(1)], [Fraction(1), Fraction(2)]]
        rdeg = [4, 6]
        cdeg = [0, 2]
        out = graded_snf(m, rdeg, cdeg, QQ)
        t = sympy.Symbol("t")
        det = sympy.expand(
            sympy.Matrix(
                [
                    [t ** ((rdeg[i] - cdeg[j]) // 2) * m[i][j] for j in range(2)]
                    for i in range(2)
                ]
            ).det()
        )
        assert sum(s.a for s in out) == sympy.degree(det, t)


class TestSpecializeTau:
    def test_homogeneous_gives_monomial(self):
        f = MultiPoly(ZZ, 2, {(2, 0): 1, (1, 1): 3})
        out = specialize_tau(f, [Fraction(1, 2), Fraction(3)], QQ)
        assert out.is_monomial()
        coeff, power = out.monomial()
        assert power == 2 and coeff == Fraction(1, 4) + Fraction(9, 2)

    @given(small_polys(ZZ), small_polys(ZZ))
    @settings(max_examples=40, deadline=None)
    def test_multiplicative(self, f, g):
        images = [Fraction(2), Fraction(-1, 3)]
        fq = f.map_coefficients(QQ)
        gq = g.map_coefficients(QQ)
        assert specialize_tau(fq * gq, images, QQ) == specialize_tau(fq, images, QQ) * specialize_tau(gq, images, QQ)

    def test_cancellation_to_zero(self):
        f = MultiPoly(ZZ, 2, {(1, 0): 1, (0, 1): -1})
        out = specialize_tau(f, [1, 1], QQ)
        assert out.is_zero()


class TestLaurent:
    def test_bar_is_involutive(self):
        f = LaurentPoly({-2: 3, 0: 1, 5: -4})
        assert f.bar().bar() == f

    def test_arithmetic(self):
        v = LaurentPoly.v()
        vinv = LaurentPoly.v(-1)
        assert (v + vinv) * (v + vinv) == LaurentPoly({2: 1, 0: 2, -2: 1})

    def test_derivative_at_one(self):
        f = LaurentPoly({2: 1, -1: 3})  # v^2 + 3v^{-1}
        assert f.derivative_at_one() == 2 - 3
        assert f.evaluate_at_one() == 4

    def test_positivity_predicate(self):
        assert LaurentPoly({1: 1, 3: 2}).in_v_times_z_of_v()
        assert not LaurentPoly({0: 1}).in_v_times_z_of_v()


class TestTorsionSummand:
    def test_validation_and_order(self):
        with pytest.raises(PreconditionError):
            TorsionSummand(a=0, b=1)
        assert TorsionSummand(1, 5) < TorsionSummand(2, -9)
        assert list(TorsionSummand(a=3, b=-2).degrees()) == [2, 4, 6]

    def test_datum_dimension(self):
        datum = (TorsionSummand(2, 0), TorsionSummand(1, -2))
        # degrees occupied: {0, 2} and {2}
        assert datum_dimension(datum, 0) == 1
        assert datum_dimension(datum, 2) == 2
        assert datum_dimension(datum, 4) == 0


class TestUniPoly:
    def test_monomial_access(self):
        u = UniPoly(QQ, {3: Fraction(5)})
        assert u.monomial() == (Fraction(5), 3)
        with pytest.raises(PreconditionError):
            UniPoly(QQ, {0: Fraction(1), 1: Fraction(1)}).monomial()

    def test_negative_power_rejected(self):
        with pytest.raises(PreconditionError):
            UniPoly(QQ, {-1: Fraction(1)})
