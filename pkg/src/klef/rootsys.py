"""Finite root systems and their affinizations.

Finite roots are stored in simple-root coordinates (integer tuples), which
makes positivity a sign check. The ambient affine weight lattice has the
integral basis (fundamental weights, delta), and an affine root alpha + n*delta
is the pair (finite alpha, level n). The distinguished extra generator of the
affine Weyl group is frozen as the reflection in the wall {<gamma, .> = -1}
(gamma the highest root), whose simple affine root is alpha_0 = -gamma + delta;
with that choice every wall label realizes the minimal positive height.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import PreconditionError
from .exactpoly import CoefficientRing, MultiPoly

Coords = tuple[int, ...]

MAX_RANK = 8


@dataclass(frozen=True)
class AffineRoot:
    """A real affine root: finite part (simple-root coordinates) plus level."""

    finite: Coords
    level: int

    def is_positive(self) -> bool:
        if self.level != 0:
            return self.level > 0
        return any(c > 0 for c in self.finite)

    def __neg__(self) -> "AffineRoot":
        return AffineRoot(tuple(-c for c in self.finite), -self.level)

    def positive_representative(self) -> "AffineRoot":
        return self if self.is_positive() else -self


def _cartan_matrix(type_letter: str, rank: int) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix with rows indexed by simple coroots: C[i][j] = <a_j, a_i^v>."""

    def chain(n: int) -> list[list[int]]:
        m = [[0] * n for _ in range(n)]
        for i in range(n):
            m[i][i] = 2
            if i + 1 < n:
                m[i][i + 1] = -1
                m[i + 1][i] = -1
        return m

    if type_letter == "A" and rank >= 1:
        return tuple(tuple(r) for r in chain(rank))
    if type_letter == "B" and rank >= 2:
        m = chain(rank)
        m[rank - 1][rank - 2] = -2  # last simple root is short
        return tuple(tuple(r) for r in m)
    if type_letter == "C" and rank >= 2:
        m = chain(rank)
        m[rank - 2][rank - 1] = -2
        return tuple(tuple(r) for r in m)
    if type_letter == "D" and rank >= 3:
        m = chain(rank - 1)
        for row in m:
            row.append(0)
        m.append([0] * rank)
        m[rank - 1][rank - 1] = 2
        m[rank - 1][rank - 3] = -1
        m[rank - 3][rank - 1] = -1
        m[rank - 1][rank - 2] = 0
        m[rank - 2][rank - 1] = 0
        return tuple(tuple(r) for r in m)
    if type_letter == "E" and rank in (6, 7, 8):
        # Bourbaki numbering: node 2 hangs off node 4 of the chain 1-3-4-5-...
        edges = [(1, 3), (3, 4), (2, 4), (4, 5), (5, 6)]
        if rank >= 7:
            edges.append((6, 7))
        if rank == 8:
            edges.append((7, 8))
        m = [[0] * rank for _ in range(rank)]
        for i in range(rank):
            m[i][i] = 2
        for a, b in edges:
            m[a - 1][b - 1] = -1
            m[b - 1][a - 1] = -1
        return tuple(tuple(r) for r in m)
    if type_letter == "F" and rank == 4:
        return (
            (2, -1, 0, 0),
            (-1, 2, -1, 0),
            (0, -2, 2, -1),
            (0, 0, -1, 2),
        )
    if type_letter == "G" and rank == 2:
        return ((2, -3), (-1, 2))
    raise PreconditionError(f"no root system of type {type_letter}{rank}")


def _int_det(matrix: tuple[tuple[int, ...], ...]) -> int:
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = 0
    for j in range(n):
        minor = tuple(row[:j] + row[j + 1 :] for row in matrix[1:])
        term = matrix[0][j] * _int_det(minor)
        total += -term if j % 2 else term
    return total


class RootSystem:
    """An irreducible finite root system with its affine bookkeeping.

    Attributes follow one fixed convention throughout the package:
      - cartan[i][j] = <alpha_j, alpha_i^v> (rows are coroots);
      - roots carry simple-root coordinates; coroots carry simple-coroot
        coordinates;
      - a weight in the fundamental-weight basis pairs with a coroot by a
        plain dot product.
    """

    def __init__(self, type_letter: str, rank: int):
        if not 1 <= rank <= MAX_RANK:
            raise PreconditionError(f"rank {rank} outside 1..{MAX_RANK}")
        self.type_letter = type_letter
        self.rank = rank
        self.cartan = _cartan_matrix(type_letter, rank)
        self.cartan_det = _int_det(self.cartan)
        self._enumerate_roots()
        self.nvars = rank + 1  # fundamental weights plus delta

    def _enumerate_roots(self) -> None:
        # reflection closure from the simple roots, tracking coroots alongside
        rank = self.rank
        cartan = self.cartan
        simples = [
            (
                tuple(1 if j == i else 0 for j in range(rank)),
                tuple(1 if j == i else 0 for j in range(rank)),
            )
            for i in range(rank)
        ]
        seen: dict[Coords, Coords] = {root: coroot for root, coroot in simples}
        frontier = list(seen)
        while frontier:
            new_frontier = []
            for root in frontier:
                coroot = seen[root]
                for i in range(rank):
                    pairing = sum(cartan[i][j] * root[j] for j in range(rank))
                    image = tuple(
                        c - pairing if j == i else c for j, c in enumerate(root)
                    )
                    if image in seen:
                        continue
                    dual_pairing = sum(
                        cartan[j][i] * coroot[j] for j in range(rank)
                    )
                    image_coroot = tuple(
                        c - dual_pairing if j == i else c
                        for j, c in enumerate(coroot)
                    )
                    seen[image] = image_coroot
                    new_frontier.append(image)
            frontier = new_frontier

        self._coroot_of = seen
        positive = sorted(
            (r for r in seen if any(c > 0 for c in r)),
            key=lambda r: (sum(r), r),
        )
        self.positive_roots: tuple[Coords, ...] = tuple(positive)
        assert 2 * len(positive) == len(seen)
        top_height = sum(positive[-1])
        tops = [r for r in positive if sum(r) == top_height]
        if len(tops) != 1:
            raise PreconditionError(
                f"{self.type_letter}{self.rank} has no unique highest root"
            )
        self.highest_root: Coords = tops[0]

    # --- basic data -------------------------------------------------------

    @property
    def simple_roots(self) -> tuple[Coords, ...]:
        return tuple(
            tuple(1 if j == i else 0 for j in range(self.rank))
            for i in range(self.rank)
        )

    def coroot(self, root: Coords) -> Coords:
        """Simple-coroot coordinates of the coroot of a root."""
        return self._coroot_of[root]

    def is_root(self, coords: Coords) -> bool:
        return coords in self._coroot_of

    @property
    def weight_lattice_basis(self) -> tuple[tuple[Fraction, ...], ...]:
        """Fundamental weights written in the simple-root basis (columns of C^-1)."""
        n = self.rank
        aug = [
            [Fraction(self.cartan[i][j]) for j in range(n)]
            + [Fraction(1 if j == i else 0) for j in range(n)]
            for i in range(n)
        ]
        for col in range(n):
            pivot = next(r for r in range(col, n) if aug[r][col] != 0)
            aug[col], aug[pivot] = aug[pivot], aug[col]
            inv = 1 / aug[col][col]
            aug[col] = [x * inv for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col] != 0:
                    f = aug[r][col]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
        inverse_rows = [row[n:] for row in aug]
        # [w_i]_alpha = column i of C^-1
        return tuple(
            tuple(inverse_rows[j][i] for j in range(n)) for i in range(n)
        )

    def root_to_weight_coords(self, root: Coords) -> Coords:
        """Fundamental-weight coordinates of a root-lattice element."""
        return tuple(
            sum(self.cartan[i][j] * root[j] for j in range(self.rank))
            for i in range(self.rank)
        )

    # --- affine roots -----------------------------------------------------

    def affine_root(self, finite: Coords, level: int) -> AffineRoot:
        finite = tuple(finite)
        if not self.is_root(finite):
            raise PreconditionError(f"{finite} is not a root")
        return AffineRoot(finite, level)

    def simple_affine_root(self, letter: int) -> AffineRoot:
        """The simple affine root attached to a word letter.

        Letters 1..rank name the finite simple reflections; letter 0 names
        the extra generator, whose simple affine root is -gamma + delta.
        """
        if letter == 0:
            return AffineRoot(tuple(-c for c in self.highest_root), 1)
        if 1 <= letter <= self.rank:
            return AffineRoot(self.simple_roots[letter - 1], 0)
        raise PreconditionError(f"letter {letter} outside 0..{self.rank}")

    def reflection_data(self, letter: int) -> tuple[Coords, int]:
        """(root, n) with s_letter the reflection s_{root, n}."""
        if letter == 0:
            return self.highest_root, -1
        if 1 <= letter <= self.rank:
            return self.simple_roots[letter - 1], 0
        raise PreconditionError(f"letter {letter} outside 0..{self.rank}")

    def pi_hat_coordinates(self, beta: AffineRoot) -> Coords:
        """Coordinates of an affine root in the simple affine root basis.

        delta = alpha_0 + gamma, so alpha + n*delta has finite block
        alpha + n*gamma and alpha_0-coordinate n.
        """
        finite = tuple(
            a + beta.level * g for a, g in zip(beta.finite, self.highest_root)
        )
        return finite + (beta.level,)

    def height(self, beta: AffineRoot) -> int:
        return sum(self.pi_hat_coordinates(beta))

    def affine_root_poly(self, ring: CoefficientRing, beta: AffineRoot) -> MultiPoly:
        """The affine root as a linear form in (weights..., delta)."""
        coeffs = list(self.root_to_weight_coords(beta.finite)) + [beta.level]
        return MultiPoly.linear_form(ring, [ring.coerce(c) for c in coeffs])

    def tau_images(self, ring: CoefficientRing) -> list:
        """Per-variable scalars c_i with tau(x_i) = c_i * t.

        tau sends every simple affine root to t, which determines the
        fundamental-weight images only after inverting det(Cartan); the
        characteristic must not divide it.
        """
        if ring.char != 0 and self.cartan_det % ring.char == 0:
            raise PreconditionError(
                f"characteristic {ring.char} divides det(Cartan) = {self.cartan_det}"
            )
        n = self.rank
        # solve C^T x = (1, ..., 1): tau(alpha_j) = sum_i C[i][j] tau(w_i) = 1
        basis = self.weight_lattice_basis
        # tau(w_i) = sum_j [w_i]_alpha[j] * tau(alpha_j) = sum_j [w_i]_alpha[j]
        weight_images = [sum(basis[i]) for i in range(n)]
        delta_image = Fraction(1 + sum(self.highest_root))
        return [ring.coerce(x) for x in weight_images] + [ring.coerce(delta_image)]


@lru_cache(maxsize=None)
def build_root_system(type_letter: str, rank: int) -> RootSystem:
    """Construct (and cache) an irreducible root system.

    Supported: A (rank 1..8), B/C (2..8), D (3..8), E (6..8), F (4), G (2).
    """
    if not isinstance(type_letter, str) or len(type_letter) != 1:
        raise PreconditionError(f"bad type letter {type_letter!r}")
    return RootSystem(type_letter, rank)
