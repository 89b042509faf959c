"""Bott-Samelson modules: distinguished bases, duality, stalks, base change.

The module attached to a word lives inside a direct sum of polynomial rings,
one coordinate per subword. It is built by induction on the word: each step
doubles every element across the new position (which preserves values) and
adjoins the doubled elements multiplied by the evaluated simple affine root of
the new letter. The resulting basis is indexed by position subsets; its
element at B has, at coordinate sigma, the product over j in B of the root of
letter j pushed through the evaluation of sigma's prefix through j.

The dual basis inverts those root products coordinatewise and exists over
coefficient rings with 2 invertible, since pairing the two bases costs a
factor of 2 per word position.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IntegrityError, NotDivisible, PreconditionError, ResourceLimitError
from .exactpoly import (
    ZZ,
    CoefficientRing,
    LaurentPoly,
    MultiPoly,
    exact_divide,
)
from .hecke import bott_samelson_element
from .rootsys import AffineRoot, RootSystem
from .weyl import (
    WeylElement,
    act_on_affine_root,
    act_on_weight,
    generator,
    identity,
    length,
    validate_word,
)

Subword = tuple[int, ...]

WORD_CAP = 12


@dataclass(frozen=True)
class GGBasisElement:
    """A basis element of the module, indexed by a set of word positions."""

    address: Subword
    coords: dict
    degree: int


@dataclass(frozen=True)
class FBasisElement:
    """A dual basis element: each coordinate is a sign over a root product."""

    address: Subword
    coords: dict  # sigma -> (sign, tuple of positive AffineRoots)


@dataclass(frozen=True)
class GGModule:
    rs: RootSystem
    word: tuple[int, ...]
    ring: CoefficientRing
    basis: tuple[GGBasisElement, ...]
    subwords: tuple[tuple[Subword, WeylElement], ...]

    def evaluation(self, sigma: Subword) -> WeylElement:
        for s, elem in self.subwords:
            if s == sigma:
                return elem
        raise PreconditionError(f"{sigma} is not a subword index")


def build_x(rs: RootSystem, word, ring: CoefficientRing, cap: int = WORD_CAP) -> GGModule:
    """Construct the module with its distinguished basis over ring."""
    word = validate_word(rs, word)
    if len(word) > cap:
        raise ResourceLimitError(f"word length {len(word)} exceeds cap {cap}")

    one = MultiPoly.constant(ring, rs.nvars, 1)
    basis = [GGBasisElement(address=(), coords={(): one}, degree=0)]
    evals: dict[Subword, WeylElement] = {(): identity(rs)}

    for j, letter in enumerate(word):
        beta = rs.simple_affine_root(letter)
        s = generator(rs, letter)
        new_evals: dict[Subword, WeylElement] = {}
        for sigma, elem in evals.items():
            new_evals[sigma] = elem
            new_evals[sigma + (j,)] = elem * s
        # evaluated root of the new letter; flips sign across position j
        multipliers = {
            sigma: rs.affine_root_poly(ring, act_on_affine_root(rs, elem, beta))
            for sigma, elem in new_evals.items()
        }
        for sigma in evals:
            assert multipliers[sigma + (j,)] == multipliers[sigma].scale(-1)
        doubled = []
        multiplied = []
        for x in basis:
            spread = {}
            for sigma, value in x.coords.items():
                spread[sigma] = value
                spread[sigma + (j,)] = value
            doubled.append(
                GGBasisElement(address=x.address, coords=spread, degree=x.degree)
            )
            multiplied.append(
                GGBasisElement(
                    address=x.address + (j,),
                    coords={
                        sigma: value * multipliers[sigma]
                        for sigma, value in spread.items()
                    },
                    degree=x.degree + 2,
                )
            )
        basis = doubled + multiplied
        evals = new_evals

    basis.sort(key=lambda x: x.address)
    subwords = tuple(sorted(evals.items()))
    for k, x in enumerate(basis):
        assert x.address == subwords[k][0]
    return GGModule(rs=rs, word=word, ring=ring, basis=tuple(basis), subwords=subwords)


def basis_coords(module: GGModule, address) -> dict:
    address = tuple(address)
    for x in module.basis:
        if x.address == address:
            return dict(x.coords)
    raise PreconditionError(f"no basis element at {address}")


def p_diagonal(module: GGModule) -> dict:
    """The diagonal of the intertwiner: sigma -> the full root product there."""
    if not module.word:
        return {(): MultiPoly.constant(module.ring, module.rs.nvars, 1)}
    return basis_coords(module, range(len(module.word)))


def build_f(rs: RootSystem, word, ring: CoefficientRing, cap: int = WORD_CAP) -> list[FBasisElement]:
    """The dual basis; needs 2 invertible, so the integers are rejected."""
    word = validate_word(rs, word)
    if len(word) > cap:
        raise ResourceLimitError(f"word length {len(word)} exceeds cap {cap}")
    if not ring.two_invertible:
        raise PreconditionError(f"2 is not invertible in {ring.name}")

    elements = [FBasisElement(address=(), coords={(): (1, ())})]
    evals: dict[Subword, WeylElement] = {(): identity(rs)}
    for j, letter in enumerate(word):
        beta = rs.simple_affine_root(letter)
        s = generator(rs, letter)
        new_evals = {}
        for sigma, elem in evals.items():
            new_evals[sigma] = elem
            new_evals[sigma + (j,)] = elem * s
        images = {
            sigma: act_on_affine_root(rs, elem, beta)
            for sigma, elem in new_evals.items()
        }
        doubled = []
        divided = []
        for f in elements:
            spread = {}
            for sigma, value in f.coords.items():
                spread[sigma] = value
                spread[sigma + (j,)] = value
            doubled.append(FBasisElement(address=f.address, coords=spread))
            divided_coords = {}
            for sigma, (sign, dens) in spread.items():
                gamma = images[sigma]
                factor_sign = 1 if gamma.is_positive() else -1
                divided_coords[sigma] = (
                    sign * factor_sign,
                    tuple(
                        sorted(
                            dens + (gamma.positive_representative(),),
                            key=lambda r: (r.level, r.finite),
                        )
                    ),
                )
            divided.append(
                FBasisElement(address=f.address + (j,), coords=divided_coords)
            )
        elements = doubled + divided
        evals = new_evals
    elements.sort(key=lambda f: f.address)
    return elements


# --- exact fractions with tracked root denominators ------------------------


class _RootFraction:
    """num / prod(roots^power), reduced greedily by exact division."""

    __slots__ = ("ring", "rs", "num", "den")

    def __init__(self, ring, rs, num: MultiPoly, den: dict):
        self.ring = ring
        self.rs = rs
        self.num = num
        self.den = {r: p for r, p in den.items() if p > 0}
        self._reduce()

    def _root_poly(self, root: AffineRoot) -> MultiPoly:
        return self.rs.affine_root_poly(self.ring, root)

    def _reduce(self) -> None:
        if self.num.is_zero():
            self.den = {}
            return
        for root in list(self.den):
            poly = self._root_poly(root)
            while self.den.get(root, 0) > 0:
                try:
                    self.num = exact_divide(self.num, poly)
                except NotDivisible:
                    break
                self.den[root] -= 1
            if self.den.get(root) == 0:
                del self.den[root]

    def __add__(self, other: "_RootFraction") -> "_RootFraction":
        merged = dict(self.den)
        for r, p in other.den.items():
            merged[r] = max(merged.get(r, 0), p)
        num1 = self.num
        for r, p in merged.items():
            for _ in range(p - self.den.get(r, 0)):
                num1 = num1 * self._root_poly(r)
        num2 = other.num
        for r, p in merged.items():
            for _ in range(p - other.den.get(r, 0)):
                num2 = num2 * self._root_poly(r)
        return _RootFraction(self.ring, self.rs, num1 + num2, merged)

    def is_polynomial(self) -> bool:
        return not self.den

    def polynomial(self) -> MultiPoly:
        if self.den:
            raise NotDivisible("denominator does not clear")
        return self.num


def pair_with_dual(module: GGModule, coords: dict, f: FBasisElement) -> _RootFraction:
    """The pairing sum over subword coordinates, as an exact fraction."""
    ring, rs = module.ring, module.rs
    total = _RootFraction(ring, rs, MultiPoly.zero(ring, rs.nvars), {})
    for sigma, (sign, dens) in f.coords.items():
        value = coords.get(sigma)
        if value is None or value.is_zero():
            continue
        den: dict[AffineRoot, int] = {}
        for r in dens:
            den[r] = den.get(r, 0) + 1
        total = total + _RootFraction(ring, rs, value.scale(sign), den)
    return total


def expand_in_basis(module: GGModule, duals: list, coords: dict) -> dict:
    """Coefficients of a coordinate vector against the basis, via the pairing.

    Needs 2 invertible. The expansion is validated by re-summing; a nonzero
    residual means the vector is outside the module and raises.
    """
    ring, rs = module.ring, module.rs
    if not ring.two_invertible:
        raise PreconditionError(f"2 is not invertible in {ring.name}")
    scale = ring.inv(ring.coerce(2 ** len(module.word)))
    out = {}
    for x, f in zip(module.basis, duals):
        assert x.address == f.address
        pairing = pair_with_dual(module, coords, f)
        if not pairing.is_polynomial():
            raise IntegrityError(
                f"pairing with dual element {f.address} is not polynomial"
            )
        out[x.address] = pairing.polynomial().scale(scale)
    residual = dict(coords)
    for x in module.basis:
        c = out[x.address]
        if c.is_zero():
            continue
        for sigma, value in x.coords.items():
            prev = residual.get(sigma, MultiPoly.zero(ring, rs.nvars))
            residual[sigma] = prev - c * value
    for sigma, value in residual.items():
        if not value.is_zero():
            raise IntegrityError(f"expansion leaves a residual at {sigma}")
    return out


# --- structure algebra action ----------------------------------------------


def czeta_action(module: GGModule, lam, coords: dict) -> dict:
    """Coordinatewise multiplication by the evaluations of the weight lam.

    lam is given in (weights..., delta) coordinates.
    """
    ring, rs = module.ring, module.rs
    lam = tuple(lam)
    if len(lam) != rs.nvars:
        raise PreconditionError(f"weight needs {rs.nvars} coordinates")
    out = {}
    for sigma, elem in module.subwords:
        value = coords.get(sigma)
        if value is None or value.is_zero():
            continue
        image = act_on_weight(rs, elem, lam)
        out[sigma] = value * MultiPoly.linear_form(ring, image)
    return out


# --- stalks ----------------------------------------------------------------


@dataclass(frozen=True)
class Stalk:
    vertex: WeylElement
    subwords: tuple[Subword, ...]
    vectors: tuple[tuple[MultiPoly, ...], ...]  # one per basis element

    @property
    def rank(self) -> int:
        return len(self.subwords)


def stalk_project(module: GGModule, x: WeylElement) -> Stalk:
    """Images of all basis elements in the coordinates evaluating to x."""
    ring, rs = module.ring, module.rs
    chosen = tuple(sigma for sigma, elem in module.subwords if elem == x)
    zero = MultiPoly.zero(ring, rs.nvars)
    vectors = tuple(
        tuple(b.coords.get(sigma, zero) for sigma in chosen) for b in module.basis
    )
    return Stalk(vertex=x, subwords=chosen, vectors=vectors)


@dataclass(frozen=True)
class CostalkDescription:
    vertex: WeylElement
    rank: int
    degrees: tuple[int, ...]


def costalk(module: GGModule, x: WeylElement) -> CostalkDescription:
    """Graded shape of the sections supported only at x.

    The rank matches the stalk; the degrees are the stalk generator degrees
    reflected through twice the word length. Both are read off the standard
    resolution's coefficient at x, whose graded ranks do not depend on the
    base field.
    """
    if not module.ring.is_field:
        raise PreconditionError("costalk description is computed over fields")
    rs = module.rs
    l = len(module.word)
    c = bott_samelson_element(rs, module.word).coefficient(x)
    if c.is_zero():
        return CostalkDescription(vertex=x, rank=0, degrees=())
    shift = l - length(rs, x)
    stalk_degrees = sorted(
        shift - k for k, mult in c.coeffs.items() for _ in range(mult)
    )
    degrees = tuple(sorted(2 * l - d for d in stalk_degrees))
    return CostalkDescription(vertex=x, rank=c.evaluate_at_one(), degrees=degrees)


# --- base change ------------------------------------------------------------


def base_change(module: GGModule, target: CoefficientRing) -> GGModule:
    """Reduce an integral module coordinatewise; matches the native build."""
    if module.ring is not ZZ:
        raise PreconditionError("base change starts from the integers")
    if not target.two_invertible and target is not ZZ:
        raise PreconditionError(f"{target.name} is not an admissible target")
    basis = tuple(
        GGBasisElement(
            address=x.address,
            coords={s: v.map_coefficients(target) for s, v in x.coords.items()},
            degree=x.degree,
        )
        for x in module.basis
    )
    return GGModule(
        rs=module.rs,
        word=module.word,
        ring=target,
        basis=basis,
        subwords=module.subwords,
    )


# --- duality report ---------------------------------------------------------


@dataclass(frozen=True)
class DualityReport:
    word: tuple[int, ...]
    ring_name: str
    size: int
    pairing_scale: int
    checks: tuple[str, ...]


def verify_duality(rs: RootSystem, word, ring: CoefficientRing) -> DualityReport:
    """Pairing integrality, orthogonality, and the intertwiner identity.

    Raises an integrity error naming the witness pair on any failure.
    """
    word = validate_word(rs, word)
    if not ring.two_invertible:
        raise PreconditionError(f"2 is not invertible in {ring.name}")
    module = build_x(rs, word, ring)
    duals = build_f(rs, word, ring)
    l = len(word)
    expected = MultiPoly.constant(ring, rs.nvars, 2**l)
    zero = MultiPoly.zero(ring, rs.nvars)

    for x in module.basis:
        for f in duals:
            pairing = pair_with_dual(module, x.coords, f)
            if not pairing.is_polynomial():
                raise IntegrityError(
                    f"pairing of {x.address} with dual {f.address} not integral"
                )
            value = pairing.polynomial()
            want = expected if x.address == f.address else zero
            if value != want:
                raise IntegrityError(
                    f"pairing of {x.address} with dual {f.address} is off-target"
                )

    diag = p_diagonal(module)
    for f in duals:
        comp = tuple(j for j in range(l) if j not in f.address)
        target = basis_coords(module, comp)
        for sigma, (sign, dens) in f.coords.items():
            num = diag[sigma]
            try:
                for r in dens:
                    num = exact_divide(num, rs.affine_root_poly(ring, r))
            except NotDivisible as exc:
                raise IntegrityError(
                    f"intertwiner does not clear dual {f.address} at {sigma}"
                ) from exc
            if num.scale(sign) != target[sigma]:
                raise IntegrityError(
                    f"intertwined dual {f.address} misses basis {comp} at {sigma}"
                )

    return DualityReport(
        word=word,
        ring_name=ring.name,
        size=2**l,
        pairing_scale=2**l,
        checks=("pairing-integral", "pairing-orthogonal", "intertwiner-matches"),
    )


# --- inspection helpers ------------------------------------------------------


def iota_last(module: GGModule, coords: dict) -> dict:
    """The involution swapping the last position in or out of each subword."""
    if not module.word:
        return dict(coords)
    j = len(module.word) - 1
    out = {}
    for sigma, value in coords.items():
        if j in sigma:
            out[tuple(p for p in sigma if p != j)] = value
        else:
            out[sigma + (j,)] = value
    return out


def degree_generating_function(module: GGModule) -> LaurentPoly:
    out = LaurentPoly.zero()
    for x in module.basis:
        out = out + LaurentPoly.v(x.degree)
    return out


def dump(module: GGModule) -> str:
    """One line per basis element listing (sigma, coordinate) pairs."""
    names = [f"w{i + 1}" for i in range(module.rs.rank)] + ["d"]
    lines = []
    for x in module.basis:
        pairs = ", ".join(
            f"{sigma}: {value.render(names)}" for sigma, value in sorted(x.coords.items())
        )
        lines.append(f"{x.address}: {pairs}")
    return "\n".join(lines)
