"""Independent reference implementations used only by the test suite.

Each oracle recomputes a quantity by a different method than the package
(sympy arithmetic, cofactor expansion, per-degree linear algebra) so that
agreement is evidence rather than tautology.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from klef.exactpoly import CoefficientRing, MultiPoly, TorsionSummand


def to_sympy(poly: MultiPoly, symbols) -> sympy.Expr:
    expr = sympy.Integer(0)
    for exp, c in poly.terms.items():
        term = sympy.Rational(c) if isinstance(c, Fraction) else sympy.Integer(c)
        for s, k in zip(symbols, exp):
            term *= s**k
        expr += term
    return sympy.expand(expr)


def cofactor_det(matrix):
    """Determinant by first-row cofactor expansion; works on MultiPoly."""
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    acc = None
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
        term = matrix[0][j] * cofactor_det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def rank_over_field(rows: list[list], ring: CoefficientRing) -> int:
    """Row rank by Gaussian elimination with exact field arithmetic."""
    work = [[ring.coerce(x) for x in row] for row in rows]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for c in range(ncols):
        pivot = next(
            (i for i in range(rank, len(work)) if not ring.is_zero(work[i][c])), None
        )
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = ring.inv(work[rank][c])
        work[rank] = [ring.mul(inv, x) for x in work[rank]]
        for i in range(len(work)):
            if i != rank and not ring.is_zero(work[i][c]):
                f = work[i][c]
                work[i] = [
                    ring.sub(x, ring.mul(f, y)) for x, y in zip(work[i], work[rank])
                ]
        rank += 1
        if rank == len(work):
            break
    return rank


def coker_dimension(
    matrix,
    row_degrees,
    col_degrees,
    ring: CoefficientRing,
    z_degree: int,
) -> int:
    """Dimension of one graded piece of the cokernel, by slice linear algebra.

    The degree-D slice of the free module has one basis vector per column j
    with col_degrees[j] <= D of matching parity; the relations available in
    that slice are the t-multiples of rows i with row_degrees[i] <= D of
    matching parity, whose coordinates are exactly the scalar entries.
    """
    cols = [
        j
        for j, cd in enumerate(col_degrees)
        if cd <= z_degree and (z_degree - cd) % 2 == 0
    ]
    rows = [
        i
        for i, rd in enumerate(row_degrees)
        if rd <= z_degree and (z_degree - rd) % 2 == 0
    ]
    if not cols:
        return 0
    sub = [[matrix[i][j] for j in cols] for i in rows]
    return len(cols) - rank_over_field(sub, ring)


def _persistent_rank(
    matrix, row_degrees, col_degrees, ring: CoefficientRing, d: int, e: int
) -> int:
    """Rank of t^((e-d)/2): coker_d -> coker_e (e >= d, same parity).

    A summand surviving from degree d to degree e contributes 1. Computed
    as rank(t-image stacked over relations) - rank(relations) in the
    degree-e slice.
    """
    cols_d = [
        j for j, cd in enumerate(col_degrees) if cd <= d and (d - cd) % 2 == 0
    ]
    cols_e = [
        j for j, cd in enumerate(col_degrees) if cd <= e and (e - cd) % 2 == 0
    ]
    rows_e = [
        i for i, rd in enumerate(row_degrees) if rd <= e and (e - rd) % 2 == 0
    ]
    rel = [[matrix[i][j] for j in cols_e] for i in rows_e]
    if d == e:
        return len(cols_e) - rank_over_field(rel, ring)
    image = []
    for j in cols_d:
        row = [ring.one if j2 == j else ring.zero for j2 in cols_e]
        image.append(row)
    return rank_over_field(image + rel, ring) - rank_over_field(rel, ring)


def datum_from_profile(
    matrix, row_degrees, col_degrees, ring: CoefficientRing
) -> tuple[TorsionSummand, ...]:
    """Reconstruct the torsion datum from t^n-multiplication ranks.

    Persistence counting: with N(d, e) the rank of t^((e-d)/2) on the
    cokernel, the number of summands spanning exactly degrees [d, e] is
    N(d,e) - N(d-2,e) - N(d,e+2) + N(d-2,e+2). This determines the interval
    multiset uniquely and shares no code with graded_snf.
    """
    if not col_degrees:
        return ()
    lo = min(col_degrees)
    hi = max(list(row_degrees) + list(col_degrees)) + 2

    def n_rank(d: int, e: int) -> int:
        if e < d:
            return 0
        return _persistent_rank(matrix, row_degrees, col_degrees, ring, d, e)

    found: list[TorsionSummand] = []
    for start in range(lo, hi + 1):
        for end in range(start, hi + 1, 2):
            count = (
                n_rank(start, end)
                - n_rank(start - 2, end)
                - n_rank(start, end + 2)
                + n_rank(start - 2, end + 2)
            )
            assert count >= 0, "inconsistent persistence ranks"
            for _ in range(count):
                found.append(TorsionSummand(a=(end - start) // 2 + 1, b=-start))
    return tuple(sorted(found))
