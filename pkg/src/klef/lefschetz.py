"""Graded torsion data of costalk-to-stalk maps and module decompositions.

For each vertex x in the support of a word's module, the inclusion of the
sections supported at x into the stalk at x becomes, after specializing the
multigraded coordinates onto a single degree-2 variable t, a square matrix
over K[t]. Its graded Smith normal form is a multiset of pairs (a, b), one
summand K[t]/(t^a) on a generator of Z-degree -b per pair. These data detect
the indecomposable summands of the module, compare specializations across
coefficient fields, and bound the primes at which the integral and rational
answers can disagree.

Everything here is exact. Stalk bases are selected degree by degree against
the graded rank prescribed by the Hecke-algebra character, then certified:
independence is witnessed by a specialized determinant, spanning by solving
the membership equations degreewise over the field. Failures of either
certificate raise IntegrityError rather than degrading to a heuristic.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .bsmod import GGModule, build_x, p_diagonal, stalk_project
from .errors import IntegrityError, PreconditionError, ResourceLimitError, SingularMatrixError
from .exactpoly import (
    QQ,
    ZZ,
    CoefficientRing,
    LaurentPoly,
    MultiPoly,
    NotDivisible,
    TorsionSummand,
    adjugate,
    bareiss_det,
    exact_divide,
    graded_snf,
    prime_field,
    specialize_tau,
)
from .hecke import HeckeElement, bott_samelson_element, bound_stats, kl_element, unit
from .rootsys import RootSystem
from .weyl import (
    WeylElement,
    bruhat_leq,
    canonical_word,
    evaluate_word,
    identity,
    is_reduced,
    length,
    n_value,
    sort_key,
    subword_evaluations,
    validate_word,
)

Datum = tuple[TorsionSummand, ...]
Summand = tuple[WeylElement, int]


# --- preconditions and shared caches ---------------------------------------


def _require_admissible_field(rs: RootSystem, word, ring: CoefficientRing) -> None:
    if not ring.is_field:
        raise PreconditionError("graded torsion data are computed over fields")
    if ring.char:
        bound = n_value(rs, word)
        if ring.char <= bound:
            raise PreconditionError(
                f"characteristic {ring.char} does not exceed the label-height bound {bound}"
            )


@lru_cache(maxsize=None)
def _module(rs: RootSystem, word: tuple[int, ...], ring: CoefficientRing) -> GGModule:
    return build_x(rs, word, ring)


def _vertices(rs: RootSystem, word) -> tuple[WeylElement, ...]:
    seen: list[WeylElement] = []
    have = set()
    for _sigma, elem in subword_evaluations(rs, word):
        if elem not in have:
            have.add(elem)
            seen.append(elem)
    seen.sort(key=lambda e: sort_key(rs, e))
    return tuple(seen)


def _stalk_degree_targets(rs: RootSystem, word, x: WeylElement) -> tuple[int, ...]:
    """Halved stalk generator degrees at x, read from the word's character."""
    a = bott_samelson_element(rs, word).coefficient(x)
    if a.is_zero():
        raise PreconditionError("vertex lies outside the subword support")
    shift = len(word) - length(rs, x)
    doubled = []
    for power, mult in a.items_sorted():
        if mult <= 0:
            raise IntegrityError("character coefficient is not a positive count")
        doubled.extend([shift - power] * mult)
    doubled.sort()
    if any(d < 0 or d % 2 for d in doubled):
        raise IntegrityError(f"stalk degrees are not even and nonnegative: {doubled}")
    return tuple(d // 2 for d in doubled)


# --- scalar linear algebra over a field -------------------------------------


class _ScalarEchelon:
    """Incremental echelon over a field, tracking independence only."""

    def __init__(self, ring: CoefficientRing):
        self.ring = ring
        self.rows: list[tuple[int, list]] = []

    def reduce(self, vec) -> tuple[list, int | None]:
        ring = self.ring
        vec = list(vec)
        for pos, row in self.rows:
            c = vec[pos]
            if ring.is_zero(c):
                continue
            f = ring.exact_div(c, row[pos])
            for j in range(pos, len(vec)):
                vec[j] = ring.sub(vec[j], ring.mul(f, row[j]))
        for pos, value in enumerate(vec):
            if not ring.is_zero(value):
                return vec, pos
        return vec, None

    def insert(self, reduced: list, pos: int) -> None:
        self.rows.append((pos, reduced))


def _field_inverse(ring: CoefficientRing, matrix) -> tuple[list[list], object]:
    """Inverse and determinant of a square scalar matrix over a field."""
    n = len(matrix)
    work = [
        list(row) + [ring.one if i == j else ring.zero for j in range(n)]
        for i, row in enumerate(matrix)
    ]
    det = ring.one
    for k in range(n):
        pivot = next((i for i in range(k, n) if not ring.is_zero(work[i][k])), None)
        if pivot is None:
            raise SingularMatrixError("specialized stalk basis is singular")
        if pivot != k:
            work[k], work[pivot] = work[pivot], work[k]
            det = ring.neg(det)
        pval = work[k][k]
        det = ring.mul(det, pval)
        inv_p = ring.inv(pval)
        work[k] = [ring.mul(inv_p, c) for c in work[k]]
        for i in range(n):
            if i != k and not ring.is_zero(work[i][k]):
                f = work[i][k]
                work[i] = [ring.sub(a, ring.mul(f, b)) for a, b in zip(work[i], work[k])]
    return [row[n:] for row in work], det


@lru_cache(maxsize=None)
def _monomials_of_degree(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    if nvars == 1:
        return ((degree,),)
    out = []
    for first in range(degree, -1, -1):
        for rest in _monomials_of_degree(nvars - 1, degree - first):
            out.append((first,) + rest)
    return tuple(out)


class _GradedSpanChecker:
    """Membership in the graded span of homogeneous rows over a field.

    A homogeneous vector lies in the span with polynomial coefficients iff
    the coefficient-matching system in its total degree is solvable; the
    column space of that system is echelonized once per degree and reused.
    """

    def __init__(self, ring: CoefficientRing, nvars: int, rows, degrees) -> None:
        self.ring = ring
        self.nvars = nvars
        self.rows = rows
        self.degrees = degrees
        self.width = len(rows[0]) if rows else 0
        self._cache: dict[int, tuple[_ScalarEchelon, dict, int]] = {}

    def _space(self, degree: int) -> tuple[_ScalarEchelon, dict, int]:
        cached = self._cache.get(degree)
        if cached is not None:
            return cached
        monos = _monomials_of_degree(self.nvars, degree)
        slots = {m: i for i, m in enumerate(monos)}
        echelon = _ScalarEchelon(self.ring)
        for row, d in zip(self.rows, self.degrees):
            gap = degree - d
            if gap < 0:
                continue
            for mu in _monomials_of_degree(self.nvars, gap):
                vec = [self.ring.zero] * (self.width * len(monos))
                for c, poly in enumerate(row):
                    for exps, value in poly.terms.items():
                        shifted = tuple(e + m for e, m in zip(exps, mu))
                        vec[c * len(monos) + slots[shifted]] = value
                reduced, pos = echelon.reduce(vec)
                if pos is not None:
                    echelon.insert(reduced, pos)
        self._cache[degree] = (echelon, slots, len(monos))
        return self._cache[degree]

    def contains(self, vector, degree: int) -> bool:
        echelon, slots, width = self._space(degree)
        vec = [self.ring.zero] * (self.width * width)
        for c, poly in enumerate(vector):
            for exps, value in poly.terms.items():
                vec[c * width + slots[exps]] = value
        _, pos = echelon.reduce(vec)
        return pos is None


# --- stalk basis selection ---------------------------------------------------


@dataclass(frozen=True)
class StalkBasisSelection:
    """A degree-matched basis of a stalk, certified over every listed field.

    Rows are images of the selected basis elements in the coordinates of the
    subwords evaluating to the vertex, listed in increasing (degree, address)
    order; the diagonal holds the full root product at each such subword.
    """

    rs: RootSystem
    word: tuple[int, ...]
    vertex: WeylElement
    fields: tuple[CoefficientRing, ...]
    subwords: tuple[tuple[int, ...], ...]
    indices: tuple[int, ...]
    addresses: tuple[tuple[int, ...], ...]
    degrees: tuple[int, ...]
    rows_by_field: dict
    diagonal_by_field: dict

    @property
    def rank(self) -> int:
        return len(self.indices)


def _tau_scalar_row(ring: CoefficientRing, images, vector, degree: int) -> list:
    row = []
    for poly in vector:
        if poly.is_zero():
            row.append(ring.zero)
            continue
        spec = specialize_tau(poly, images, ring)
        if spec.is_zero():
            row.append(ring.zero)
            continue
        coeff, power = spec.monomial()
        if power != degree:
            raise IntegrityError("specialized stalk coordinate has the wrong degree")
        row.append(coeff)
    return row


def select_stalk_basis(
    rs: RootSystem, word, x: WeylElement, fields=(QQ,)
) -> StalkBasisSelection:
    """Choose stalk generators matching the prescribed degree multiset.

    Candidates are scanned in (degree, address) order; one is accepted when
    its degree fills the next open slot and its specialization extends the
    row rank over every requested field. Afterwards every unselected image
    is certified to lie in the polynomial span of the selection. Both a
    failed selection and a failed certificate raise IntegrityError: they
    contradict the graded rank prescribed by the character.
    """
    word = validate_word(rs, word)
    fields = tuple(dict.fromkeys(fields))
    if not fields:
        raise PreconditionError("at least one field is required")
    for ring in fields:
        _require_admissible_field(rs, word, ring)
    targets = _stalk_degree_targets(rs, word, x)
    rank = len(targets)

    modules = {ring.name: _module(rs, word, ring) for ring in fields}
    stalks = {ring.name: stalk_project(modules[ring.name], x) for ring in fields}
    base = stalks[fields[0].name]
    for ring in fields[1:]:
        if stalks[ring.name].subwords != base.subwords:
            raise IntegrityError("stalk coordinates disagree between fields")
    if base.rank != rank:
        raise IntegrityError(
            f"stalk has {base.rank} coordinates but the graded rank is {rank}"
        )

    basis = modules[fields[0].name].basis
    order = sorted(range(len(basis)), key=lambda k: (len(basis[k].address), k))
    images = {ring.name: rs.tau_images(ring) for ring in fields}
    echelons = {ring.name: _ScalarEchelon(ring) for ring in fields}
    chosen: list[int] = []

    for k in order:
        if len(chosen) == rank:
            break
        degree = len(basis[k].address)
        need = targets[len(chosen)]
        if degree < need:
            continue
        if degree > need:
            break  # every remaining candidate is too deep; fail below
        accepted = {}
        for ring in fields:
            name = ring.name
            row = _tau_scalar_row(ring, images[name], stalks[name].vectors[k], degree)
            reduced, pos = echelons[name].reduce(row)
            if pos is None:
                accepted = {}
                break
            accepted[name] = (reduced, pos)
        if not accepted:
            continue
        for name, (reduced, pos) in accepted.items():
            echelons[name].insert(reduced, pos)
        chosen.append(k)

    if len(chosen) != rank:
        raise IntegrityError(
            f"no independent stalk basis with degrees {targets} at vertex "
            f"{canonical_word(rs, x)} of word {word}; selected {len(chosen)} of {rank}"
        )

    chosen_set = set(chosen)
    rows_by_field = {}
    diagonal_by_field = {}
    for ring in fields:
        name = ring.name
        stalk = stalks[name]
        rows = tuple(stalk.vectors[k] for k in chosen)
        checker = _GradedSpanChecker(ring, rs.nvars, rows, targets)
        for k in order:
            if k in chosen_set:
                continue
            if not checker.contains(stalk.vectors[k], len(basis[k].address)):
                raise IntegrityError(
                    f"stalk image of {basis[k].address} escapes the selected span "
                    f"over {name} at vertex {canonical_word(rs, x)} of word {word}"
                )
        rows_by_field[name] = rows
        diag = p_diagonal(modules[name])
        diagonal_by_field[name] = tuple(diag[s] for s in stalk.subwords)

    return StalkBasisSelection(
        rs=rs,
        word=word,
        vertex=x,
        fields=fields,
        subwords=base.subwords,
        indices=tuple(chosen),
        addresses=tuple(basis[k].address for k in chosen),
        degrees=targets,
        rows_by_field=rows_by_field,
        diagonal_by_field=diagonal_by_field,
    )


@lru_cache(maxsize=None)
def _cached_selection(
    rs: RootSystem, word: tuple[int, ...], x: WeylElement, ring: CoefficientRing
) -> StalkBasisSelection:
    return select_stalk_basis(rs, word, x, (ring,))


# --- the costalk pairing matrix ---------------------------------------------


def costalk_matrix(selection: StalkBasisSelection, ring: CoefficientRing):
    """Gram matrix of the costalk inclusion against the selected stalk basis.

    With E the selected rows and P the diagonal of full root products, this
    is adj(E)^T P adj(E) / det(E)^2, computed fraction-free; every entry must
    land back in the polynomial ring, homogeneously and in the predicted
    degree, or the selection was not a basis.
    """
    name = ring.name
    if name not in selection.rows_by_field:
        raise PreconditionError(f"selection was not certified over {name}")
    rows = selection.rows_by_field[name]
    diag = selection.diagonal_by_field[name]
    r = selection.rank
    matrix = [list(row) for row in rows]
    det = bareiss_det(matrix)
    if det.is_zero():
        raise SingularMatrixError("selected stalk basis is singular")
    adj = adjugate(matrix)
    det_sq = det * det
    word_length = len(selection.word)
    out = []
    for i in range(r):
        row_out = []
        for j in range(r):
            acc = MultiPoly.zero(ring, selection.rs.nvars)
            for s in range(r):
                acc = acc + adj[s][i] * diag[s] * adj[s][j]
            try:
                entry = exact_divide(acc, det_sq)
            except NotDivisible as exc:
                raise IntegrityError(
                    "costalk pairing entry leaves the polynomial ring"
                ) from exc
            if not entry.is_zero():
                expected = word_length - selection.degrees[i] - selection.degrees[j]
                if not entry.is_homogeneous() or entry.total_degree() != expected:
                    raise IntegrityError(
                        f"costalk pairing entry ({i},{j}) is not homogeneous "
                        f"of degree {expected}"
                    )
            row_out.append(entry)
        out.append(tuple(row_out))
    return tuple(out)


# --- the specialized datum ---------------------------------------------------


def _specialized_scalars(selection: StalkBasisSelection, ring: CoefficientRing):
    """Specialized stalk rows and diagonal as field scalars.

    Row i of the basis matrix carries the uniform power t^{d_i} and each
    diagonal entry the power t^l, so the scalars determine both matrices.
    """
    name = ring.name
    if name not in selection.rows_by_field:
        raise PreconditionError(f"selection was not certified over {name}")
    images = selection.rs.tau_images(ring)
    word_length = len(selection.word)
    e_scalar = [
        _tau_scalar_row(ring, images, row, degree)
        for row, degree in zip(selection.rows_by_field[name], selection.degrees)
    ]
    p_scalar = []
    for poly in selection.diagonal_by_field[name]:
        spec = specialize_tau(poly, images, ring)
        if spec.is_zero():
            raise SingularMatrixError("diagonal root product vanishes after specialization")
        coeff, power = spec.monomial()
        if power != word_length:
            raise IntegrityError("diagonal root product has the wrong specialized degree")
        p_scalar.append(coeff)
    return e_scalar, p_scalar


def _scalar_pairing(ring: CoefficientRing, e_scalar, p_scalar):
    inv, det = _field_inverse(ring, e_scalar)
    r = len(e_scalar)
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            acc = ring.zero
            for s in range(r):
                acc = ring.add(acc, ring.mul(inv[s][i], ring.mul(p_scalar[s], inv[s][j])))
            row.append(acc)
        out.append(row)
    return out, det


def _datum_from_scalars(selection: StalkBasisSelection, ring: CoefficientRing, pairing) -> Datum:
    word_length = len(selection.word)
    row_degrees = [2 * word_length - 2 * d for d in selection.degrees]
    col_degrees = [2 * d for d in selection.degrees]
    summands = graded_snf(pairing, row_degrees, col_degrees, ring)
    expected = word_length * selection.rank - 2 * sum(selection.degrees)
    if sum(s.a for s in summands) != expected:
        raise IntegrityError(
            f"torsion exponents sum to {sum(s.a for s in summands)}, "
            f"expected {expected} from the determinant degree"
        )
    return summands


def lefschetz_datum(rs: RootSystem, word, x: WeylElement, ring: CoefficientRing) -> Datum:
    """The multiset of (a, b): torsion exponents and generator degrees at x.

    The costalk pairing is specialized onto the degree-2 variable t and fed
    to the graded Smith normal form; the sum of the exponents must equal the
    t-degree of the pairing determinant, which depends only on the graded
    ranks. A singular specialization signals an inadmissible characteristic.
    """
    word = validate_word(rs, word)
    _require_admissible_field(rs, word, ring)
    selection = _cached_selection(rs, word, x, ring)
    e_scalar, p_scalar = _specialized_scalars(selection, ring)
    pairing, _det = _scalar_pairing(ring, e_scalar, p_scalar)
    return _datum_from_scalars(selection, ring, pairing)


def check_hard_lefschetz(datum: Datum, center: int) -> bool:
    """Whether every summand satisfies b = a - center."""
    return all(s.b == s.a - center for s in datum)


def symmetric_center(datum: Datum) -> int | None:
    """The common value of a - b if one exists, else None; None when empty."""
    centers = {s.a - s.b for s in datum}
    if not centers:
        return None
    if len(centers) == 1:
        return centers.pop()
    return None


# --- decomposition and characters --------------------------------------------


def _decompose_raw(rs: RootSystem, word, ring: CoefficientRing) -> tuple[Summand, ...]:
    if not word:
        return ((identity(rs), 0),)
    out: list[Summand] = []
    word_length = len(word)
    for x in _vertices(rs, word):
        lx = length(rs, x)
        for s in lefschetz_datum(rs, word, x, ring):
            if s.a == lx:
                out.append((x, s.b + word_length - lx))
    out.sort(key=lambda pair: (sort_key(rs, pair[0]), pair[1]))
    return tuple(out)


def decompose(rs: RootSystem, word, ring: CoefficientRing) -> tuple[Summand, ...]:
    """Indecomposable summands (x, shift) of the word's module over ring.

    A summand attached to x is witnessed by a datum pair at x with torsion
    exponent exactly the length of x. The resulting multiset is verified
    against the Hecke character of the word: the shifted characters of the
    summands must add up to the product of self-dual generators.
    """
    word = validate_word(rs, word)
    _require_admissible_field(rs, word, ring)
    summands = _decompose_raw(rs, word, ring)
    total = HeckeElement({})
    for x, shift in summands:
        total = total + character(rs, x, ring).scale(LaurentPoly.v(shift))
    if total != bott_samelson_element(rs, word):
        raise IntegrityError(
            f"decomposition of {word} does not reproduce its Hecke character"
        )
    return summands


def _character_from_word(
    rs: RootSystem, w: WeylElement, word: tuple[int, ...], ring: CoefficientRing
) -> HeckeElement:
    if length(rs, w) == 0:
        return unit(rs)
    summands = _decompose_raw(rs, word, ring)
    top = sum(1 for x, m in summands if x == w and m == 0)
    if top != 1:
        raise IntegrityError(
            f"reduced word {word} contains its own element {top} times, expected once"
        )
    acc = bott_samelson_element(rs, word)
    for x, m in summands:
        if x == w and m == 0:
            continue
        if length(rs, x) >= length(rs, w):
            raise IntegrityError("proper summand is not shorter than the word's element")
        acc = acc - character(rs, x, ring).scale(LaurentPoly.v(m))
    return acc


@lru_cache(maxsize=None)
def _character_canonical(rs: RootSystem, w: WeylElement, ring: CoefficientRing) -> HeckeElement:
    return _character_from_word(rs, w, canonical_word(rs, w), ring)


def character(
    rs: RootSystem, w: WeylElement, ring: CoefficientRing, word=None
) -> HeckeElement:
    """Hecke character of the indecomposable summand attached to w over ring.

    Computed by peeling proper summands from a reduced word's module; the
    default reduced word is the canonical one and the result is cached. A
    caller-supplied reduced word must evaluate to w and exists to witness
    that the character does not depend on the choice.
    """
    if word is None:
        return _character_canonical(rs, w, ring)
    word = validate_word(rs, word)
    if not is_reduced(rs, word) or evaluate_word(rs, word) != w:
        raise PreconditionError("word must be a reduced expression for the element")
    return _character_from_word(rs, w, word, ring)


def verify_kl(rs: RootSystem, w: WeylElement, ring: CoefficientRing) -> bool:
    """Whether the summand character over ring equals the self-dual basis element."""
    return character(rs, w, ring) == kl_element(rs, w)


@lru_cache(maxsize=None)
def datum_indecomposable(
    rs: RootSystem, w: WeylElement, x: WeylElement, ring: CoefficientRing
) -> Datum:
    """Datum of the indecomposable summand attached to w, at the vertex x.

    Obtained from the canonical word's datum by subtracting the shifted data
    of all proper summands; a summand (y, m) inside a word for w displaces
    generator degrees by m + length(y) - length(w). Undersubtraction means
    the decomposition and the datum contradict each other.
    """
    word = canonical_word(rs, w)
    counts = Counter(lefschetz_datum(rs, word, x, ring))
    top_seen = 0
    for y, m in _decompose_raw(rs, word, ring):
        if y == w and m == 0:
            top_seen += 1
            continue
        if not bruhat_leq(rs, x, y):
            continue
        displacement = m + length(rs, y) - length(rs, w)
        for s in datum_indecomposable(rs, y, x, ring):
            shifted = TorsionSummand(s.a, s.b + displacement)
            counts[shifted] -= 1
            if counts[shifted] < 0:
                raise IntegrityError(
                    f"datum subtraction at vertex {canonical_word(rs, x)} of "
                    f"{word} went negative on {shifted}"
                )
    if top_seen != 1:
        raise IntegrityError("canonical word does not contain its element exactly once")
    out: list[TorsionSummand] = []
    for s in sorted(counts):
        out.extend([s] * counts[s])
    return tuple(out)


# --- field comparison and prime scans ----------------------------------------


@dataclass(frozen=True)
class FieldComparison:
    """Vertexwise comparison of data over the rationals and one prime field."""

    word: tuple[int, ...]
    prime: int
    equal: bool
    differences: tuple  # (vertex canonical word, rational datum, modular datum)


def compare_fields(rs: RootSystem, word, p: int) -> FieldComparison:
    """Compare the datum at every vertex over the rationals and modulo p."""
    word = validate_word(rs, word)
    field = prime_field(p)
    _require_admissible_field(rs, word, field)
    differences = []
    for x in _vertices(rs, word):
        rational = lefschetz_datum(rs, word, x, QQ)
        modular = lefschetz_datum(rs, word, x, field)
        if rational != modular:
            differences.append((canonical_word(rs, x), rational, modular))
    return FieldComparison(
        word=word, prime=p, equal=not differences, differences=tuple(differences)
    )


def _odd_primes_up_to(n: int) -> list[int]:
    if n < 3:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p in range(3, n + 1, 2) if sieve[p]]


@dataclass(frozen=True)
class _ScanVertex:
    vertex: WeylElement
    datum: Datum
    det: object  # rational determinant of the specialized basis
    pairing: tuple  # rational specialized pairing matrix
    row_degrees: tuple[int, ...]
    col_degrees: tuple[int, ...]


def _scan_vertex(rs: RootSystem, word, x: WeylElement) -> _ScanVertex:
    selection = _cached_selection(rs, word, x, QQ)
    e_scalar, p_scalar = _specialized_scalars(selection, QQ)
    pairing, det = _scalar_pairing(QQ, e_scalar, p_scalar)
    word_length = len(selection.word)
    return _ScanVertex(
        vertex=x,
        datum=_datum_from_scalars(selection, QQ, pairing),
        det=det,
        pairing=tuple(tuple(row) for row in pairing),
        row_degrees=tuple(2 * word_length - 2 * d for d in selection.degrees),
        col_degrees=tuple(2 * d for d in selection.degrees),
    )


def _vertex_matches_mod(rs: RootSystem, word, ref: _ScanVertex, p: int) -> bool:
    field = prime_field(p)
    try:
        det_p = field.coerce(ref.det)
        if not field.is_zero(det_p):
            # The rational basis stays a certified basis mod p: independence
            # reduces, and span coefficients have denominators dividing the
            # content of the basis determinant, which p does not divide.
            reduced = [[field.coerce(c) for c in row] for row in ref.pairing]
            modular = graded_snf(reduced, ref.row_degrees, ref.col_degrees, field)
            return modular == ref.datum
    except (NotDivisible, PreconditionError, SingularMatrixError):
        pass  # a denominator or pivot met p; fall through to the native pipeline
    try:
        return lefschetz_datum(rs, word, ref.vertex, field) == ref.datum
    except (IntegrityError, SingularMatrixError):
        return False


def bad_primes(rs: RootSystem, word, p_max: int) -> tuple[int, ...]:
    """Odd primes up to p_max where some vertex datum differs from the
    rational one.

    Primes not exceeding the label-height bound and primes dividing the
    Cartan determinant are outside the specialization's domain and are not
    scanned. A prime where the modular pipeline fails outright also counts
    as bad: the data certainly do not agree there.
    """
    word = validate_word(rs, word)
    bound = n_value(rs, word)
    refs = None
    out = []
    for p in _odd_primes_up_to(p_max):
        if p <= bound or rs.cartan_det % p == 0:
            continue
        if refs is None:
            refs = [_scan_vertex(rs, word, x) for x in _vertices(rs, word)]
        if any(not _vertex_matches_mod(rs, word, ref, p) for ref in refs):
            out.append(p)
    return tuple(out)


# --- integral minors of the pairing ------------------------------------------


@dataclass(frozen=True)
class MinorBoundReport:
    """Outcome of checking all pairing minors against the coefficient bound."""

    word: tuple[int, ...]
    vertex: tuple[int, ...]
    rank: int
    degree_sum: int
    bound: int
    minors_checked: int
    zero_minors: int
    largest_coefficient: int


def minor_bound_check(rs: RootSystem, word, x: WeylElement, max_size: int) -> MinorBoundReport:
    """Specialize every minor of the integral pairing and bound its coefficient.

    The integral pairing adj(E)^T P adj(E) is det(E)^2 times the costalk
    pairing, so each s x s minor specializes to a single monomial whose
    t-power is s(2d + l) - d_J - d_J' for row set J and column set J', with
    d the sum of all selected degrees. The scalar must be an integer of
    absolute value at most the word's u-statistic. Violations of either the
    degree or the bound raise IntegrityError.
    """
    word = validate_word(rs, word)
    selection = _cached_selection(rs, word, x, QQ)
    r = selection.rank
    if r > max_size:
        raise ResourceLimitError(f"stalk rank {r} exceeds the requested cap {max_size}")
    module = _module(rs, word, ZZ)
    stalk = stalk_project(module, x)
    rows = [list(stalk.vectors[k]) for k in selection.indices]
    diag_all = p_diagonal(module)
    diag = [diag_all[s] for s in stalk.subwords]
    det = bareiss_det(rows)
    if det.is_zero():
        raise SingularMatrixError("selected stalk basis is singular over the integers")
    adj = adjugate(rows)
    pairing = []
    for i in range(r):
        row_out = []
        for j in range(r):
            acc = MultiPoly.zero(ZZ, rs.nvars)
            for s in range(r):
                acc = acc + adj[s][i] * diag[s] * adj[s][j]
            row_out.append(acc)
        pairing.append(row_out)

    images = rs.tau_images(QQ)
    u = bound_stats(rs, word).u
    degree_sum = sum(selection.degrees)
    word_length = len(word)
    checked = zeros = largest = 0
    for size in range(1, r + 1):
        for rows_j in combinations(range(r), size):
            for cols_j in combinations(range(r), size):
                sub = [[pairing[i][j] for j in cols_j] for i in rows_j]
                minor = bareiss_det(sub)
                if minor.is_zero():
                    zeros += 1
                    continue
                checked += 1
                spec = specialize_tau(minor.map_coefficients(QQ), images, QQ)
                if spec.is_zero():
                    continue  # scalar cancellation; nothing to bound
                coeff, power = spec.monomial()
                expected = (
                    size * (2 * degree_sum + word_length)
                    - sum(selection.degrees[i] for i in rows_j)
                    - sum(selection.degrees[j] for j in cols_j)
                )
                if power != expected:
                    raise IntegrityError(
                        f"minor {rows_j}x{cols_j} specializes to power {power}, "
                        f"expected {expected}"
                    )
                if coeff.denominator != 1:
                    raise IntegrityError("specialized integral minor is not an integer")
                value = abs(int(coeff))
                largest = max(largest, value)
                if value > u:
                    raise IntegrityError(
                        f"minor coefficient {value} exceeds the bound {u}"
                    )
    return MinorBoundReport(
        word=word,
        vertex=canonical_word(rs, x),
        rank=r,
        degree_sum=degree_sum,
        bound=u,
        minors_checked=checked,
        zero_minors=zeros,
        largest_coefficient=largest,
    )
