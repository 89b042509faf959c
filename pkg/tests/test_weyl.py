"""Affine Weyl group tests against brute-force oracles and hand values."""

import itertools

import pytest

from klef.errors import PreconditionError, ResourceLimitError
from klef.rootsys import AffineRoot, build_root_system
from klef import weyl
from klef.weyl import (
    act_on_affine_root,
    bruhat_leq,
    canonical_word,
    demazure_product,
    elements_up_to_length,
    evaluate_word,
    generator,
    gkm_bad_primes,
    gkm_violations,
    identity,
    is_reduced,
    left_descents,
    length,
    lower_interval,
    moment_graph,
    n_value,
    n_value_elem,
    reduced_words,
    reflection,
    reflection_params,
    right_descents,
    subword_evaluations,
)


A1 = build_root_system("A", 1)
A2 = build_root_system("A", 2)
B2 = build_root_system("B", 2)


def all_words(rs, max_len):
    letters = range(rs.rank + 1)
    for n in range(max_len + 1):
        yield from itertools.product(letters, repeat=n)


def length_by_descent_steps(rs, w):
    """Independent length oracle: strip right descents until the identity."""
    steps = 0
    cur = w
    while not cur.is_identity():
        assert steps < 1000
        letter = next(
            i
            for i in range(rs.rank + 1)
            if not act_on_affine_root(rs, cur, rs.simple_affine_root(i)).is_positive()
        )
        cur = cur * generator(rs, letter)
        steps += 1
    return steps


def inversions_up_to_level(rs, w, max_level):
    """Positive affine roots with level <= max_level sent negative by w."""
    count = 0
    for root in rs.positive_roots:
        neg = tuple(-c for c in root)
        for n in range(0, max_level + 1):
            if act_on_affine_root(rs, w, rs.affine_root(root, n)) and not act_on_affine_root(rs, w, rs.affine_root(root, n)).is_positive():
                count += 1
        for n in range(1, max_level + 1):
            if not act_on_affine_root(rs, w, rs.affine_root(neg, n)).is_positive():
                count += 1
    return count


class TestGroupStructure:
    def test_generators_are_involutions(self):
        for rs in (A1, A2, B2):
            for i in range(rs.rank + 1):
                s = generator(rs, i)
                assert (s * s).is_identity()
                assert s.inverse() == s

    def test_product_inverse(self):
        w = evaluate_word(A2, (0, 1, 2, 0, 1))
        assert (w * w.inverse()).is_identity()
        assert (w.inverse() * w).is_identity()

    def test_affine_braid_relation_a2(self):
        # adjacent generators of affine A2 satisfy the order-3 braid relation
        for i, j in [(0, 1), (1, 2), (0, 2)]:
            lhs = evaluate_word(A2, (i, j, i))
            rhs = evaluate_word(A2, (j, i, j))
            assert lhs == rhs

    def test_a1_affine_is_infinite_dihedral(self):
        # (s1 s0)^k are pairwise distinct
        seen = set()
        w = identity(A1)
        step = evaluate_word(A1, (1, 0))
        for _ in range(10):
            assert w not in seen
            seen.add(w)
            w = w * step

    def test_reflection_squares_to_identity(self):
        for rs in (A2, B2):
            for root in rs.positive_roots:
                for n in (-2, 0, 3):
                    s = reflection(rs, root, n)
                    assert (s * s).is_identity()

    def test_reflection_negates_its_root(self):
        for rs in (A1, B2):
            for root in rs.positive_roots:
                for n in (-1, 0, 2):
                    beta = rs.affine_root(root, n)
                    image = act_on_affine_root(rs, reflection(rs, root, n), beta)
                    assert image == -beta

    def test_reflection_params_roundtrip(self):
        for rs in (A1, A2, B2):
            for root in rs.positive_roots:
                for n in (-2, -1, 0, 1, 3):
                    assert reflection_params(rs, reflection(rs, root, n)) == (root, n)
        # non-reflections give None
        assert reflection_params(A1, identity(A1)) is None
        assert reflection_params(A1, evaluate_word(A1, (1, 0))) is None

    def test_translation_conjugation(self):
        # (s1 s0) in affine A1 is the translation by alpha^v
        w = evaluate_word(A1, (1, 0))
        conj = w * generator(A1, 1) * w.inverse()
        assert reflection_params(A1, conj) == ((1,), 2)


class TestLength:
    @pytest.mark.parametrize("rs,max_len", [(A1, 7), (A2, 4), (B2, 3)])
    def test_length_matches_descent_oracle(self, rs, max_len):
        for word in all_words(rs, max_len):
            w = evaluate_word(rs, word)
            assert length(rs, w) == length_by_descent_steps(rs, w)

    def test_length_matches_inversion_count(self):
        for word in all_words(A1, 6):
            w = evaluate_word(A1, word)
            assert length(rs=A1, w=w) == inversions_up_to_level(A1, w, 8)
            assert inversions_up_to_level(A1, w, 8) == inversions_up_to_level(A1, w, 11)
        for word in all_words(A2, 4):
            w = evaluate_word(A2, word)
            assert length(A2, w) == inversions_up_to_level(A2, w, 6)

    def test_length_of_inverse(self):
        for word in all_words(B2, 3):
            w = evaluate_word(B2, word)
            assert length(B2, w) == length(B2, w.inverse())

    def test_length_changes_by_one(self):
        for word in all_words(A2, 3):
            w = evaluate_word(A2, word)
            for i in range(3):
                assert abs(length(A2, w * generator(A2, i)) - length(A2, w)) == 1

    def test_is_reduced(self):
        assert is_reduced(A1, ())
        assert is_reduced(A1, (1, 0, 1))
        assert not is_reduced(A1, (1, 1))
        assert not is_reduced(A2, (0, 1, 0, 1))  # braid shortens
        assert is_reduced(A2, (0, 1, 2, 0))

    def test_validate_word(self):
        with pytest.raises(PreconditionError):
            evaluate_word(A1, (2,))
        with pytest.raises(PreconditionError):
            evaluate_word(A2, (-1,))


class TestDescentsAndWords:
    def test_descents_match_length_drop(self):
        for word in all_words(A2, 4):
            w = evaluate_word(A2, word)
            lw = length(A2, w)
            rd = set(right_descents(A2, w))
            ld = set(left_descents(A2, w))
            for i in range(3):
                assert (length(A2, w * generator(A2, i)) < lw) == (i in rd)
                assert (length(A2, generator(A2, i) * w) < lw) == (i in ld)

    def test_canonical_word_is_reduced_and_lex_smallest(self):
        for word in all_words(A2, 4):
            w = evaluate_word(A2, word)
            cw = canonical_word(A2, w)
            assert evaluate_word(A2, cw) == w
            assert len(cw) == length(A2, w)
            words, truncated = reduced_words(A2, w)
            assert not truncated
            assert cw == min(words)
            assert cw in words

    def test_reduced_words_dihedral_unique(self):
        for word in all_words(A1, 5):
            w = evaluate_word(A1, word)
            words, truncated = reduced_words(A1, w)
            assert not truncated
            assert len(words) == 1

    def test_reduced_words_braid_pair(self):
        w = evaluate_word(A2, (1, 2, 1))
        words, _ = reduced_words(A2, w)
        assert words == [(1, 2, 1), (2, 1, 2)]

    def test_reduced_words_cap(self):
        w = evaluate_word(A2, (1, 2, 1))
        words, truncated = reduced_words(A2, w, cap=1)
        assert truncated
        assert words == [(1, 2, 1)]


class TestBruhat:
    def test_frozen_interval(self):
        w = evaluate_word(A1, (1, 0))
        interval = lower_interval(A1, w)
        assert [canonical_word(A1, u) for u in interval] == [(), (0,), (1,), (1, 0)]

    def test_interval_sizes_a1(self):
        # [e, w] in affine A1 has l(w) + 1 elements... no: all shorter
        # alternating words of both parities are below, giving 2 l(w) elements
        # apart from the identity being counted once: check directly instead
        for word in [(1,), (1, 0), (1, 0, 1), (1, 0, 1, 0)]:
            w = evaluate_word(A1, word)
            interval = lower_interval(A1, w)
            assert len(interval) == 2 * len(word)

    def test_bruhat_leq_properties(self):
        elems = [evaluate_word(A2, word) for word in all_words(A2, 3)]
        for w in elems:
            assert bruhat_leq(A2, identity(A2), w)
            assert bruhat_leq(A2, w, w)
        w = evaluate_word(A2, (1, 2, 1))
        x = evaluate_word(A2, (2,))
        assert bruhat_leq(A2, x, w)
        assert not bruhat_leq(A2, evaluate_word(A2, (0,)), w)

    def test_interval_membership_matches_subword_evaluations(self):
        for word in [(1, 0, 1), (0, 1, 2), (1, 2, 1, 0)]:
            rs = A1 if max(word) <= 1 else A2
            w = evaluate_word(rs, word)
            cw = canonical_word(rs, w)
            from_subwords = {elem for _, elem in subword_evaluations(rs, cw)}
            assert from_subwords == set(lower_interval(rs, w))

    def test_subword_evaluations_order_and_count(self):
        evs = subword_evaluations(A1, (1, 0, 1))
        assert len(evs) == 8
        subsets = [s for s, _ in evs]
        assert subsets == sorted(subsets)
        assert subsets[0] == ()
        assert evs[0][1].is_identity()

    def test_subword_cap(self):
        with pytest.raises(ResourceLimitError):
            subword_evaluations(A1, (1, 0) * 9)

    def test_elements_up_to_length(self):
        levels = elements_up_to_length(A1, 5)
        assert [len(level) for level in levels] == [1, 2, 2, 2, 2, 2]
        for k, level in enumerate(levels):
            for w in level:
                assert length(A1, w) == k
        levels2 = elements_up_to_length(A2, 4)
        assert [len(level) for level in levels2] == [1, 3, 6, 9, 12]


class TestMomentGraph:
    def test_word_10_graph(self):
        w = evaluate_word(A1, (1, 0))
        graph = moment_graph(A1, w)
        assert len(graph.vertices) == 4
        assert len(graph.edges) == 4
        assert len(graph.edges_into(w)) == 2

    def test_edges_into_count_is_length(self):
        for rs, word in [(A1, (1, 0, 1, 0)), (A2, (1, 2, 0, 1)), (B2, (0, 1, 2))]:
            w = evaluate_word(rs, word)
            if not is_reduced(rs, word):
                continue
            graph = moment_graph(rs, w)
            for x in graph.vertices:
                assert len(graph.edges_into(x)) == length(rs, x)

    def test_top_edge_count(self):
        w = evaluate_word(A2, (0, 1, 2, 0))
        graph = moment_graph(A2, w)
        assert len(graph.edges_into(w)) == 4

    def test_labels_are_positive(self):
        graph = moment_graph(A1, evaluate_word(A1, (1, 0, 1)))
        for e in graph.edges:
            assert e.label.is_positive()
            assert length(A1, e.lower) < length(A1, e.upper)

    def test_edge_reflects_endpoints(self):
        graph = moment_graph(A2, evaluate_word(A2, (1, 2, 1)))
        for e in graph.edges:
            s = reflection(A2, e.label.finite, e.label.level)
            assert s * e.lower == e.upper

    def test_frozen_n_values(self):
        assert n_value(A1, ()) == 0
        assert n_value(A1, (1,)) == 1
        assert n_value(A1, (1, 0)) == 3
        assert n_value(A1, (1, 0, 1)) == 5

    def test_n_value_word_independent(self):
        w = evaluate_word(A2, (1, 2, 1))
        assert n_value(A2, (1, 2, 1)) == n_value(A2, (2, 1, 2)) == n_value_elem(A2, w)

    def test_demazure_product_absorbs_repeats(self):
        s1 = evaluate_word(A1, (1,))
        assert demazure_product(A1, (1, 1)) == s1
        assert demazure_product(A1, (1, 0, 0, 1)) == evaluate_word(A1, (1, 0, 1))
        assert demazure_product(A2, (1, 2, 1, 2, 1)) == evaluate_word(A2, (1, 2, 1))

    def test_demazure_product_matches_reduced_evaluation(self):
        for rs, word in [(A1, (1, 0, 1, 0)), (A2, (1, 2, 0)), (B2, (0, 1, 2, 1))]:
            assert demazure_product(rs, word) == evaluate_word(rs, word)

    def test_n_value_of_nonreduced_word_uses_closure(self):
        assert n_value(A1, (1, 1)) == 1
        assert n_value(A1, (1, 0, 0, 1)) == 5


class TestGkm:
    def test_char_validation(self):
        graph = moment_graph(A1, evaluate_word(A1, (1, 0)))
        with pytest.raises(PreconditionError):
            gkm_violations(A1, graph, 2)
        with pytest.raises(PreconditionError):
            gkm_violations(A1, graph, 9)

    def test_no_rational_violations(self):
        for rs, word in [(A1, (1, 0, 1, 0)), (A2, (0, 1, 2, 0))]:
            graph = moment_graph(rs, evaluate_word(rs, word))
            assert gkm_violations(rs, graph, 0) == []

    def test_large_primes_are_good(self):
        for rs, word in [(A1, (1, 0, 1)), (A2, (1, 2, 1))]:
            w = evaluate_word(rs, word)
            graph = moment_graph(rs, w)
            n = n_value_elem(rs, w)
            for p in (101, 103):
                assert p > n
                assert gkm_violations(rs, graph, p) == []

    def test_bad_primes_below_n_value(self):
        for rs, word in [(A1, (1, 0, 1, 0, 1)), (A2, (0, 1, 2, 0)), (B2, (0, 1, 2))]:
            w = evaluate_word(rs, word)
            graph = moment_graph(rs, w)
            n = n_value_elem(rs, w)
            bad = gkm_bad_primes(rs, graph)
            assert all(3 <= p <= n for p in bad)
            for p in bad:
                assert gkm_violations(rs, graph, p) != []

    def test_bad_primes_match_violation_scan(self):
        w = evaluate_word(A1, (1, 0, 1, 0))
        graph = moment_graph(A1, w)
        bad = set(gkm_bad_primes(A1, graph))
        for p in (3, 5, 7, 11, 13):
            assert (gkm_violations(A1, graph, p) != []) == (p in bad)
