"""Exact moment-graph Lefschetz data and KL characters for affine Weyl groups."""

from __future__ import annotations

from .errors import (
    IntegrityError,
    KlefError,
    NotDivisible,
    NotInSpan,
    PreconditionError,
    ResourceLimitError,
    SingularMatrixError,
)
from .exactpoly import (
    QQ,
    ZZ,
    LaurentPoly,
    MultiPoly,
    TorsionSummand,
    prime_field,
)
from .rootsys import AffineRoot, RootSystem, build_root_system
from .weyl import (
    WeylElement,
    bruhat_leq,
    canonical_word,
    demazure_product,
    evaluate_word,
    gkm_bad_primes,
    length,
    lower_interval,
    moment_graph,
    n_value,
    reduced_words,
)
from .hecke import (
    HeckeElement,
    bott_samelson_element,
    bound_stats,
    kl_element,
    u_bound,
    u_from_stats,
)
from .bsmod import GGModule, base_change, build_x, verify_duality
from .lefschetz import (
    bad_primes,
    character,
    check_hard_lefschetz,
    compare_fields,
    costalk_matrix,
    datum_indecomposable,
    decompose,
    lefschetz_datum,
    minor_bound_check,
    select_stalk_basis,
    symmetric_center,
    verify_kl,
)

__version__ = "0.1.0"
