"""The Hecke algebra of the affine Weyl group over Z[v, v^-1].

Basis elements H_x satisfy H_s^2 = H_e + (v^-1 - v) H_s for generators and
H_x H_y = H_xy whenever lengths add. The bar involution inverts v and each
H_s; the self-dual basis element attached to w (computed inductively) is the
one congruent to H_w modulo strictly positive powers of v.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .errors import IntegrityError, PreconditionError, ResourceLimitError
from .exactpoly import LaurentPoly
from .rootsys import RootSystem
from .weyl import (
    WeylElement,
    act_on_affine_root,
    canonical_word,
    evaluate_word,
    generator,
    identity,
    length,
    lower_interval,
    n_value,
    reduced_words,
    sort_key,
    validate_word,
)


class HeckeElement:
    """A finitely supported Z[v, v^-1]-combination of basis elements H_x."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[WeylElement, LaurentPoly] | None = None):
        self.terms = {
            x: c for x, c in (terms or {}).items() if not c.is_zero()
        }

    def coefficient(self, x: WeylElement) -> LaurentPoly:
        return self.terms.get(x, LaurentPoly.zero())

    def support(self) -> tuple[WeylElement, ...]:
        return tuple(self.terms)

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        out = dict(self.terms)
        for x, c in other.terms.items():
            out[x] = out.get(x, LaurentPoly.zero()) + c
        return HeckeElement(out)

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        out = dict(self.terms)
        for x, c in other.terms.items():
            out[x] = out.get(x, LaurentPoly.zero()) - c
        return HeckeElement(out)

    def scale(self, c: LaurentPoly) -> "HeckeElement":
        return HeckeElement({x: coeff * c for x, coeff in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, HeckeElement) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset((x, c) for x, c in self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms


def unit(rs: RootSystem) -> HeckeElement:
    return HeckeElement({identity(rs): LaurentPoly.one()})


def basis_element(x: WeylElement) -> HeckeElement:
    return HeckeElement({x: LaurentPoly.one()})


def _has_right_descent(rs: RootSystem, x: WeylElement, letter: int) -> bool:
    beta = rs.simple_affine_root(letter)
    return not act_on_affine_root(rs, x, beta).is_positive()


_V = LaurentPoly.v(1)
_VINV = LaurentPoly.v(-1)


def multiply_by_generator(rs: RootSystem, elem: HeckeElement, letter: int) -> HeckeElement:
    out: dict[WeylElement, LaurentPoly] = {}
    s = generator(rs, letter)

    def add(x, c):
        if x in out:
            out[x] = out[x] + c
        else:
            out[x] = c

    for x, c in elem.terms.items():
        xs = x * s
        add(xs, c)
        if _has_right_descent(rs, x, letter):
            add(x, c * (_VINV - _V))
    return HeckeElement(out)


def multiply(rs: RootSystem, a: HeckeElement, b: HeckeElement) -> HeckeElement:
    out = HeckeElement()
    for x, c in b.terms.items():
        part = a
        for letter in canonical_word(rs, x):
            part = multiply_by_generator(rs, part, letter)
        out = out + part.scale(c)
    return out


_BAR_CACHE: dict[tuple[RootSystem, WeylElement], HeckeElement] = {}


def _bar_of_basis(rs: RootSystem, x: WeylElement) -> HeckeElement:
    key = (rs, x)
    if key not in _BAR_CACHE:
        word = canonical_word(rs, x)
        if not word:
            out = unit(rs)
        else:
            prefix = _bar_of_basis(rs, evaluate_word(rs, word[:-1]))
            # bar(H_s) = H_s + (v - v^-1) H_e
            letter = word[-1]
            out = multiply_by_generator(rs, prefix, letter) + prefix.scale(_V - _VINV)
        _BAR_CACHE[key] = out
    return _BAR_CACHE[key]


def bar_dual(rs: RootSystem, elem: HeckeElement) -> HeckeElement:
    out = HeckeElement()
    for x, c in elem.terms.items():
        out = out + _bar_of_basis(rs, x).scale(c.bar())
    return out


_KL_CACHE: dict[tuple[RootSystem, WeylElement], HeckeElement] = {}

KL_LENGTH_CAP = 24


def kl_element(rs: RootSystem, w: WeylElement, cap: int = KL_LENGTH_CAP) -> HeckeElement:
    """The self-dual basis element attached to w.

    Computed by the standard induction: multiply the element for a shorter
    prefix by H_s + v H_e, then correct offending terms by previously
    computed elements. The defining properties are asserted on the result.
    """
    if length(rs, w) > cap:
        raise ResourceLimitError(f"length {length(rs, w)} exceeds cap {cap}")
    key = (rs, w)
    if key in _KL_CACHE:
        return _KL_CACHE[key]
    word = canonical_word(rs, w)
    if not word:
        result = unit(rs)
    else:
        prefix = kl_element(rs, evaluate_word(rs, word[:-1]), cap)
        letter = word[-1]
        p = multiply_by_generator(rs, prefix, letter) + prefix.scale(_V)
        while True:
            offending = [
                x
                for x, c in p.terms.items()
                if x != w and not c.in_v_times_z_of_v()
            ]
            if not offending:
                break
            x = max(offending, key=lambda u: length(rs, u))
            c = p.terms[x]
            m = LaurentPoly({0: c.coefficient(0)})
            for k in range(1, -c.min_exponent() + 1):
                m = m + LaurentPoly({-k: c.coefficient(-k), k: c.coefficient(-k)})
            p = p - kl_element(rs, x, cap).scale(m)
        result = p

    lead = result.coefficient(w)
    if lead != LaurentPoly.one():
        raise IntegrityError(f"leading coefficient {lead.render()} is not 1")
    for x, c in result.terms.items():
        if x != w and not c.in_v_times_z_of_v():
            raise IntegrityError("lower coefficient not in v Z[v]")
    if bar_dual(rs, result) != result:
        raise IntegrityError("self-duality failed")

    _KL_CACHE[key] = result
    return result


def kl_generator(rs: RootSystem, letter: int) -> HeckeElement:
    """H_s + v H_e, the self-dual element of a generator."""
    return basis_element(generator(rs, letter)) + unit(rs).scale(_V)


def bott_samelson_element(rs: RootSystem, word) -> HeckeElement:
    """The product of the generators' self-dual elements along the word."""
    word = validate_word(rs, word)
    out = unit(rs)
    for letter in word:
        out = multiply_by_generator(rs, out, letter) + out.scale(_V)
    return out


# --- size statistics ------------------------------------------------------


@dataclass(frozen=True)
class BoundStats:
    """Size statistics of a word's standard resolution.

    a maps each support element x to its coefficient a_x in the product of
    self-dual generators; r_x = a_x(1) counts subwords evaluating to x and
    d_x = a_x'(1) is the sum of the exponents of a_x. n is the largest wall
    label height below any support element, measured at the word's Demazure
    product so nonreduced words are covered too.
    """

    word: tuple[int, ...]
    l: int
    a: dict
    r_x: dict
    d_x: dict
    r: int
    d: int
    n: int
    u: int


def u_from_stats(r: int, d: int, n: int, l: int) -> int:
    if r < 1:
        raise PreconditionError("rank must be at least 1")
    return factorial(r) * (factorial(r) * factorial(r - 1) * n ** (l + 2 * d)) ** r


def bound_stats(rs: RootSystem, word) -> BoundStats:
    word = validate_word(rs, word)
    if not word:
        raise PreconditionError("bound statistics need a nonempty word")
    element = bott_samelson_element(rs, word)
    a = dict(element.terms)
    r_x = {x: c.evaluate_at_one() for x, c in a.items()}
    d_x = {x: c.derivative_at_one() for x, c in a.items()}
    r = max(r_x.values())
    d = max(d_x.values())
    n = n_value(rs, word)
    l = len(word)
    return BoundStats(
        word=word,
        l=l,
        a=a,
        r_x=r_x,
        d_x=d_x,
        r=r,
        d=d,
        n=n,
        u=u_from_stats(r, d, n, l),
    )


def u_bound(rs: RootSystem, w: WeylElement, word_budget: int = 100_000):
    """The smallest u-value over enumerated reduced words; (value, truncated)."""
    words, truncated = reduced_words(rs, w, word_budget)
    if not words:
        raise PreconditionError("no reduced words")
    best = min(bound_stats(rs, word).u for word in words)
    return best, truncated
