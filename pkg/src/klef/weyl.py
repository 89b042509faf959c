"""The affine Weyl group: elements, words, Bruhat order, moment graphs.

Elements are stored as pairs of lattice actions plus a translation: b acts on
the root lattice (simple-root coordinates), m on the coroot lattice
(simple-coroot coordinates), and t is the translation part in coroot
coordinates, so that w = (translation by t) o (finite part). Inverse matrices
ride along to keep inversion and conjugation cheap. Two elements are equal iff
their (m, t) pairs agree; the finite Weyl group acts faithfully on coroots, so
b carries no extra information.

Words are tuples over the alphabet 0..rank, letter 0 being the reflection in
the wall {<mu, gamma^v> = -1} for the highest root gamma.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .errors import PreconditionError, ResourceLimitError
from .exactpoly import _is_probable_prime
from .rootsys import AffineRoot, Coords, RootSystem

Matrix = tuple[tuple[int, ...], ...]

SUBWORD_CAP = 16
REDUCED_WORDS_CAP = 100_000


def _identity_matrix(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _matvec(a: Matrix, v: Coords) -> Coords:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in a)


def _add(u: Coords, v: Coords) -> Coords:
    return tuple(x + y for x, y in zip(u, v))


@dataclass(frozen=True, eq=False, slots=True)
class WeylElement:
    b: Matrix
    m: Matrix
    binv: Matrix
    minv: Matrix
    t: Coords

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(
            _matmul(self.b, other.b),
            _matmul(self.m, other.m),
            _matmul(other.binv, self.binv),
            _matmul(other.minv, self.minv),
            _add(self.t, _matvec(self.m, other.t)),
        )

    def inverse(self) -> "WeylElement":
        return WeylElement(
            self.binv,
            self.minv,
            self.b,
            self.m,
            tuple(-c for c in _matvec(self.minv, self.t)),
        )

    def is_identity(self) -> bool:
        n = len(self.t)
        return self.m == _identity_matrix(n) and self.t == (0,) * n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.m == other.m and self.t == other.t

    def __hash__(self) -> int:
        return hash((self.m, self.t))


@lru_cache(maxsize=None)
def identity(rs: RootSystem) -> WeylElement:
    eye = _identity_matrix(rs.rank)
    return WeylElement(eye, eye, eye, eye, (0,) * rs.rank)


def reflection(rs: RootSystem, root: Coords, n: int) -> WeylElement:
    """The affine reflection in the wall {<mu, root^v> = n}."""
    root = tuple(root)
    if not rs.is_root(root):
        raise PreconditionError(f"{root} is not a root")
    rank = rs.rank
    cr = rs.coroot(root)
    cartan = rs.cartan
    # <alpha_j, root^v> as a row vector, and root in weight coordinates
    pair_row = tuple(
        sum(cartan[k][j] * cr[k] for k in range(rank)) for j in range(rank)
    )
    weight_row = tuple(
        sum(cartan[i][j] * root[j] for j in range(rank)) for i in range(rank)
    )
    b = tuple(
        tuple((1 if i == j else 0) - root[i] * pair_row[j] for j in range(rank))
        for i in range(rank)
    )
    m = tuple(
        tuple((1 if i == j else 0) - cr[i] * weight_row[j] for j in range(rank))
        for i in range(rank)
    )
    t = tuple(n * c for c in cr)
    return WeylElement(b, m, b, m, t)


@lru_cache(maxsize=None)
def generator(rs: RootSystem, letter: int) -> WeylElement:
    root, n = rs.reflection_data(letter)
    return reflection(rs, root, n)


def validate_word(rs: RootSystem, word) -> tuple[int, ...]:
    word = tuple(word)
    for letter in word:
        if not isinstance(letter, int) or not 0 <= letter <= rs.rank:
            raise PreconditionError(f"letter {letter!r} outside 0..{rs.rank}")
    return word


def evaluate_word(rs: RootSystem, word) -> WeylElement:
    w = identity(rs)
    for letter in validate_word(rs, word):
        w = w * generator(rs, letter)
    return w


def act_on_affine_root(rs: RootSystem, w: WeylElement, beta: AffineRoot) -> AffineRoot:
    finite = _matvec(w.b, beta.finite)
    weight = rs.root_to_weight_coords(finite)
    level = beta.level + sum(a * b for a, b in zip(weight, w.t))
    return AffineRoot(finite, level)


def act_on_weight(rs: RootSystem, w: WeylElement, coeffs) -> tuple[int, ...]:
    """Action on the affine weight lattice in (weights..., delta) coordinates.

    The weight-basis matrix of the finite part is the inverse transpose of m,
    since the pairing with coroots is invariant.
    """
    rank = rs.rank
    mu = coeffs[:rank]
    image = tuple(
        sum(w.minv[i][r] * mu[i] for i in range(rank)) for r in range(rank)
    )
    level = coeffs[rank] + sum(image[r] * w.t[r] for r in range(rank))
    return image + (level,)


@lru_cache(maxsize=None)
def length(rs: RootSystem, w: WeylElement) -> int:
    """Coxeter length: the number of positive affine roots sent negative.

    For each finite root alpha the inverted levels form an initial segment,
    which gives a closed count from c = <w(alpha), t-part> alone.
    """
    total = 0
    cartan = rs.cartan
    rank = rs.rank
    for positive in rs.positive_roots:
        for alpha in (positive, tuple(-c for c in positive)):
            fa = _matvec(w.b, alpha)
            weight = tuple(
                sum(cartan[i][j] * fa[j] for j in range(rank)) for i in range(rank)
            )
            c = sum(a * b for a, b in zip(weight, w.t))
            n0 = 0 if alpha == positive else 1
            total += max(0, -c - n0)
            if -c >= n0 and any(x < 0 for x in fa):
                total += 1
    return total


def right_descents(rs: RootSystem, w: WeylElement) -> tuple[int, ...]:
    out = []
    for letter in range(rs.rank + 1):
        beta = rs.simple_affine_root(letter)
        if not act_on_affine_root(rs, w, beta).is_positive():
            out.append(letter)
    return tuple(out)


def left_descents(rs: RootSystem, w: WeylElement) -> tuple[int, ...]:
    return right_descents(rs, w.inverse())


def is_reduced(rs: RootSystem, word) -> bool:
    word = validate_word(rs, word)
    return length(rs, evaluate_word(rs, word)) == len(word)


@lru_cache(maxsize=None)
def canonical_word(rs: RootSystem, w: WeylElement) -> tuple[int, ...]:
    """The lexicographically smallest reduced word."""
    letters = []
    cur = w
    while not cur.is_identity():
        i = min(left_descents(rs, cur))
        letters.append(i)
        cur = generator(rs, i) * cur
    return tuple(letters)


def sort_key(rs: RootSystem, w: WeylElement):
    word = canonical_word(rs, w)
    return (len(word), word)


def reduced_words(rs: RootSystem, w: WeylElement, cap: int = REDUCED_WORDS_CAP):
    """All reduced words in lexicographic order, truncated at cap.

    Returns (words, truncated).
    """
    results: list[tuple[int, ...]] = []
    truncated = False

    def dfs(cur: WeylElement, acc: list[int]) -> bool:
        nonlocal truncated
        if cur.is_identity():
            if len(results) >= cap:
                truncated = True
                return False
            results.append(tuple(acc))
            return True
        for i in left_descents(rs, cur):
            acc.append(i)
            ok = dfs(generator(rs, i) * cur, acc)
            acc.pop()
            if not ok:
                return False
        return True

    dfs(w, [])
    return results, truncated


@lru_cache(maxsize=None)
def lower_interval(rs: RootSystem, w: WeylElement) -> tuple[WeylElement, ...]:
    """All elements below w in Bruhat order, sorted by (length, word)."""
    current = {identity(rs)}
    for letter in canonical_word(rs, w):
        s = generator(rs, letter)
        current = current | {u * s for u in current}
    return tuple(sorted(current, key=lambda u: sort_key(rs, u)))


def bruhat_leq(rs: RootSystem, x: WeylElement, w: WeylElement) -> bool:
    return x in set(lower_interval(rs, w))


def subword_evaluations(rs: RootSystem, word):
    """Every subset of word positions with its product, in lexicographic order."""
    word = validate_word(rs, word)
    if len(word) > SUBWORD_CAP:
        raise ResourceLimitError(
            f"word length {len(word)} exceeds subword cap {SUBWORD_CAP}"
        )
    gens = [generator(rs, letter) for letter in word]
    out: list[tuple[tuple[int, ...], WeylElement]] = []

    def dfs(start: int, positions: list[int], elem: WeylElement) -> None:
        out.append((tuple(positions), elem))
        for j in range(start, len(word)):
            positions.append(j)
            dfs(j + 1, positions, elem * gens[j])
            positions.pop()

    dfs(0, [], identity(rs))
    return out


def elements_up_to_length(rs: RootSystem, bound: int) -> list[list[WeylElement]]:
    """Level sets of the length function, each sorted by canonical word."""
    levels = [[identity(rs)]]
    for k in range(bound):
        prev = set(levels[k - 1]) if k > 0 else set()
        nxt = set()
        for w in levels[k]:
            for letter in range(rs.rank + 1):
                ws = w * generator(rs, letter)
                if ws not in prev:
                    nxt.add(ws)
        levels.append(sorted(nxt, key=lambda u: sort_key(rs, u)))
    return levels


# --- moment graph ---------------------------------------------------------


@lru_cache(maxsize=None)
def _reflection_table(rs: RootSystem) -> dict:
    return {
        reflection(rs, root, 0).b: root for root in rs.positive_roots
    }


def reflection_params(rs: RootSystem, w: WeylElement):
    """(root, n) with w = s_{root, n} and root positive, or None."""
    root = _reflection_table(rs).get(w.b)
    if root is None:
        return None
    cr = rs.coroot(root)
    i = next(k for k, c in enumerate(cr) if c != 0)
    n, rem = divmod(w.t[i], cr[i])
    if rem != 0 or w.t != tuple(n * c for c in cr):
        return None
    return root, n


@dataclass(frozen=True)
class Edge:
    lower: WeylElement
    upper: WeylElement
    label: AffineRoot


@dataclass(frozen=True)
class MomentGraph:
    vertices: tuple[WeylElement, ...]
    edges: tuple[Edge, ...]

    def edges_at(self, x: WeylElement) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.lower == x or e.upper == x)

    def edges_into(self, x: WeylElement) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.upper == x)


@lru_cache(maxsize=None)
def moment_graph(rs: RootSystem, w: WeylElement) -> MomentGraph:
    """The Bruhat interval [e, w] with an edge wherever y x^{-1} reflects.

    The label of an edge is the positive affine root of the reflecting wall.
    """
    vertices = lower_interval(rs, w)
    edges = []
    for i, x in enumerate(vertices):
        for y in vertices[i + 1 :]:
            params = reflection_params(rs, y * x.inverse())
            if params is None:
                continue
            root, n = params
            label = AffineRoot(root, n).positive_representative()
            lower, upper = x, y
            if length(rs, lower) > length(rs, upper):
                lower, upper = upper, lower
            edges.append(Edge(lower, upper, label))
    edges.sort(key=lambda e: (sort_key(rs, e.upper), sort_key(rs, e.lower)))
    return MomentGraph(vertices, tuple(edges))


def n_value_elem(rs: RootSystem, w: WeylElement) -> int:
    """Largest label height in the moment graph below w (0 for the identity)."""
    graph = moment_graph(rs, w)
    if not graph.edges:
        return 0
    return max(rs.height(e.label) for e in graph.edges)


def demazure_product(rs: RootSystem, word) -> WeylElement:
    """Fold the word through the 0-Hecke monoid: letters never shorten.

    The result dominates every subword evaluation in Bruhat order, so it is
    the right element at which to measure word-level wall data.
    """
    w = identity(rs)
    for letter in validate_word(rs, word):
        ws = w * generator(rs, letter)
        if length(rs, ws) > length(rs, w):
            w = ws
    return w


def n_value(rs: RootSystem, word) -> int:
    return n_value_elem(rs, demazure_product(rs, word))


# --- GKM conditions -------------------------------------------------------


def _validate_gkm_char(p: int) -> None:
    if p == 0:
        return
    if p == 2:
        raise PreconditionError("characteristic 2 is excluded")
    if p < 0 or not _is_probable_prime(p):
        raise PreconditionError(f"{p} is not 0 or an odd prime")


def _pairwise_minors(u: Coords, v: Coords) -> list[int]:
    n = len(u)
    return [
        u[i] * v[j] - u[j] * v[i] for i in range(n) for j in range(i + 1, n)
    ]


def gkm_violations(rs: RootSystem, graph: MomentGraph, p: int):
    """Vertices whose incident labels become proportional in characteristic p.

    p = 0 means the rational field. Returns (vertex, label, label) triples.
    """
    _validate_gkm_char(p)
    out = []
    for x in graph.vertices:
        labels = [e.label for e in graph.edges_at(x)]
        for i, b1 in enumerate(labels):
            for b2 in labels[i + 1 :]:
                minors = _pairwise_minors(
                    rs.pi_hat_coordinates(b1), rs.pi_hat_coordinates(b2)
                )
                if p == 0:
                    bad = all(m == 0 for m in minors)
                else:
                    bad = all(m % p == 0 for m in minors)
                if bad:
                    out.append((x, b1, b2))
    return out


def _odd_prime_factors(n: int) -> set[int]:
    n = abs(n)
    out = set()
    while n % 2 == 0:
        n //= 2
    d = 3
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 2
    if n > 1:
        out.add(n)
    return out


def gkm_bad_primes(rs: RootSystem, graph: MomentGraph) -> tuple[int, ...]:
    """All odd primes where some vertex fails the label-independence condition."""
    primes: set[int] = set()
    for x in graph.vertices:
        labels = [e.label for e in graph.edges_at(x)]
        for i, b1 in enumerate(labels):
            for b2 in labels[i + 1 :]:
                minors = _pairwise_minors(
                    rs.pi_hat_coordinates(b1), rs.pi_hat_coordinates(b2)
                )
                g = gcd(*minors)
                assert g != 0, "proportional labels at a vertex"
                primes |= _odd_prime_factors(g)
    return tuple(sorted(primes))
