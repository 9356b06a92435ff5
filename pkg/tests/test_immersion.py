"""Tests for strong immersion verification, search and the codeword pipeline."""

from __future__ import annotations

import itertools
import logging

import numpy as np
import pytest

from semiwqo.codec import Embedding, dominates, encode_layout, tag_modulus
from semiwqo.config import Limits
from semiwqo.digraph import (
    SemiCompleteDigraph,
    SimpleDigraph,
    gen_alternating_cycle,
    gen_random_bounded_ctw,
    gen_random_tournament,
    gen_transitive_tournament,
    partition_arcs,
)
from semiwqo.errors import LimitExceededError, ModelFormatError, NotSemiCompleteError, ReconstructionError, WidthError
from semiwqo.immersion import (
    ReconstructionTrace,
    StrongImmersionModel,
    extend_immersion_symmetric,
    find_immersion_bruteforce,
    immerse_layouts,
    immerse_via_codewords,
    immerse_with_trace,
    parse_model,
    reconstruct_tournament_immersion,
    serialize_model,
    serialize_trace,
    verify_feedback_contract,
    verify_strong_immersion,
    wqo_scan,
)
from semiwqo.ordering import OrderedCutSequence, VertexOrdering, build_layout
from tests.builders import layout_of, pivot_instance, plant_block, relabelled_layout

THREE_CYCLE = SemiCompleteDigraph(3, [(0, 1), (1, 2), (2, 0)])
# feedback arcs (2,0) and (3,1) share cut 2 under the identity ordering
TWO_FEEDBACK = SemiCompleteDigraph(4, [(0, 1), (0, 3), (1, 2), (2, 3), (2, 0), (3, 1)])


def _assert_pivot_invariants(trace: ReconstructionTrace) -> None:
    c, modulus = trace.c, tag_modulus(trace.c)
    for rec in trace.pivots:
        assert rec.gap >= rec.h - rec.j + modulus
        assert (rec.gap - (rec.h - rec.j)) % modulus == 0
        assert rec.unmapped >= modulus
        assert rec.candidates >= 2 * c + 1
        assert rec.excluded_tail <= c and rec.excluded_head <= c
        assert rec.excluded_used <= 2 * c
        assert rec.remaining >= 1
        assert rec.fj < rec.pivot < rec.fh


class TestVerify:
    def test_identity_model(self) -> None:
        d = gen_random_tournament(5, seed=1)
        assert verify_strong_immersion(d, d, StrongImmersionModel.identity(d))

    def test_clause_one(self) -> None:
        result = verify_strong_immersion(SimpleDigraph(2), SimpleDigraph(3), StrongImmersionModel({0: 0, 1: 0}, {}))
        assert not result and result.clause == 1

    def test_clause_two(self) -> None:
        h = SimpleDigraph(2, [(0, 1)])
        model = StrongImmersionModel({0: 0, 1: 1}, {(0, 1): (0, 1)})
        result = verify_strong_immersion(h, SimpleDigraph(2), model)
        assert not result and result.clause == 2 and "non-arc" in result.message

        wrong_end = StrongImmersionModel({0: 0, 1: 1}, {(0, 1): (1, 0)})
        assert verify_strong_immersion(h, SimpleDigraph(2, [(1, 0)]), wrong_end).clause == 2

        missing = StrongImmersionModel({0: 0, 1: 1}, {})
        assert verify_strong_immersion(h, SimpleDigraph(2, [(0, 1)]), missing).clause == 2

    @pytest.mark.parametrize("outside", [7, -1])
    def test_interior_vertex_outside_the_host(self, outside: int) -> None:
        h = SimpleDigraph(2, [(0, 1)])
        model = StrongImmersionModel({0: 0, 1: 1}, {(0, 1): (0, outside, 1)})
        result = verify_strong_immersion(h, SimpleDigraph(2, [(0, 1)]), model)
        assert not result and result.clause == 2
        assert result.witness == (0, 1)
        assert f"leaves V(D) at {outside}" in result.message

    def test_clause_three(self) -> None:
        h = SimpleDigraph(3, [(0, 1), (2, 1)])
        d = SimpleDigraph(4, [(0, 3), (3, 1), (2, 3)])
        model = StrongImmersionModel({0: 0, 1: 1, 2: 2}, {(0, 1): (0, 3, 1), (2, 1): (2, 3, 1)})
        result = verify_strong_immersion(h, d, model)
        assert not result and result.clause == 3
        assert result.witness == (3, 1)

    def test_clause_four(self) -> None:
        h = SimpleDigraph(3, [(0, 1)])
        d = SimpleDigraph(3, [(0, 2), (2, 1)])
        model = StrongImmersionModel({0: 0, 1: 1, 2: 2}, {(0, 1): (0, 2, 1)})
        result = verify_strong_immersion(h, d, model)
        assert not result and result.clause == 4


class TestBruteForce:
    def test_alternating_cycles_form_an_antichain(self) -> None:
        cycles = [gen_alternating_cycle(k) for k in (2, 3, 4)]
        for h, d in itertools.permutations(cycles, 2):
            assert find_immersion_bruteforce(h, d) is None

    def test_finds_a_cycle_in_a_tournament(self) -> None:
        host = SemiCompleteDigraph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)])
        model = find_immersion_bruteforce(THREE_CYCLE, host)
        assert model is not None
        assert verify_strong_immersion(THREE_CYCLE, host, model)

    def test_transitive_host_has_no_cycle(self) -> None:
        assert find_immersion_bruteforce(THREE_CYCLE, gen_transitive_tournament(5)) is None

    def test_size_precheck_comes_before_limits(self) -> None:
        big = gen_transitive_tournament(8)
        assert find_immersion_bruteforce(big, THREE_CYCLE, Limits(immersion_pattern_n=1)) is None

    def test_limits(self) -> None:
        with pytest.raises(LimitExceededError):
            find_immersion_bruteforce(THREE_CYCLE, gen_transitive_tournament(5), Limits(immersion_host_n=4))
        with pytest.raises(LimitExceededError):
            find_immersion_bruteforce(THREE_CYCLE, gen_transitive_tournament(5), Limits(immersion_pattern_n=2))


class TestTournamentStitching:
    def test_feedback_arc_crosses_a_planted_block(self) -> None:
        layout = layout_of(THREE_CYCLE, (0, 1, 2))
        host = plant_block(layout, 2, 1)
        model, trace = immerse_layouts(layout, host, 1)
        assert trace.embedding == Embedding((1, 2, 8))
        assert model == StrongImmersionModel.identity(THREE_CYCLE)
        assert not trace.fallback
        assert [rec.path for rec in trace.stitches] == [(2, 0)]
        assert verify_feedback_contract(THREE_CYCLE, layout.ordering, host.digraph, host.ordering, model,
                                        trace.embedding)

    def test_contract_search_takes_over_when_stitching_fails(self, caplog) -> None:
        ordering = VertexOrdering.identity(4)
        ordered = OrderedCutSequence(((), ((2, 0),), ((2, 0), (3, 1)), ((3, 1),), ()))
        scrambled = OrderedCutSequence(((), ((2, 0),), ((3, 1), (2, 0)), ((3, 1),), ()))
        trace = ReconstructionTrace(1)
        with caplog.at_level(logging.WARNING):
            model = reconstruct_tournament_immersion(TWO_FEEDBACK, ordering, ordered, TWO_FEEDBACK, ordering,
                                                     scrambled, Embedding.identity(4), trace=trace)
        assert trace.fallback
        assert "contract search" in caplog.text
        assert model == StrongImmersionModel.identity(TWO_FEEDBACK)

    def test_contract_rejects_long_images_of_forward_arcs(self) -> None:
        t = SemiCompleteDigraph(2, [(0, 1)])
        host = SemiCompleteDigraph(3, [(0, 2), (2, 1), (0, 1)])
        model = StrongImmersionModel({0: 0, 1: 1}, {(0, 1): (0, 2, 1)})
        result = verify_feedback_contract(t, VertexOrdering((0, 1)), host, VertexOrdering((0, 2, 1)), model)
        assert not result and result.witness == (0, 1)


class TestSymmetricArcs:
    def test_free_pivot_routes_the_surplus_arc(self) -> None:
        pattern, host = pivot_instance()
        model, trace = immerse_layouts(pattern, host, 1)
        assert trace.embedding == Embedding((1, 7))
        assert model.vmap == {0: 0, 1: 1}
        assert model.pmap == {(1, 0): (1, 0), (0, 1): (0, 2, 1)}
        (rec,) = trace.pivots
        assert (rec.gap, rec.unmapped, rec.candidates, rec.remaining) == (6, 5, 5, 5)
        assert (rec.excluded_tail, rec.excluded_head, rec.excluded_used) == (0, 0, 0)
        assert rec.pivot == 2
        _assert_pivot_invariants(trace)

    def test_consecutive_arc_takes_the_direct_host_arc(self) -> None:
        two_cycle = SemiCompleteDigraph(2, [(0, 1), (1, 0)])
        layout = layout_of(two_cycle, (0, 1))
        model, trace = immerse_layouts(layout, layout, 1)
        assert trace.direct == [(0, 1)]
        assert trace.pivots == []
        assert model == StrongImmersionModel.identity(two_cycle)

    def test_direct_arc_requires_matching_intervals(self) -> None:
        two_cycle = SemiCompleteDigraph(2, [(0, 1), (1, 0)])
        three_cycle = layout_of(THREE_CYCLE, (0, 1, 2))
        pattern = layout_of(two_cycle, (0, 1))
        # (0,1) exists in the host, but positions 1..2 there carry no (1,0)
        base = StrongImmersionModel({0: 0, 1: 1}, {(1, 0): (1, 2, 0)})
        with pytest.raises(ReconstructionError, match="induced sub-digraphs differ"):
            extend_immersion_symmetric(two_cycle, pattern.ordering, pattern.ordered_cuts,
                                       THREE_CYCLE, three_cycle.ordering, three_cycle.ordered_cuts,
                                       Embedding((1, 2)), base, partition_arcs(two_cycle, pattern.ordering), 1)

    def test_trace_text(self) -> None:
        pattern, host = pivot_instance()
        _, trace = immerse_layouts(pattern, host, 1)
        text = serialize_trace(trace)
        assert text.splitlines()[0] == "trace c=1 fallback=0"
        assert "embedding: 1 7" in text
        assert "pivot (0,1) j=1 h=2 fj=1 fh=7 gap=6" in text

    @pytest.mark.slow
    def test_planted_blocks_respect_pivot_bounds(self) -> None:
        surplus = 0
        for seed in range(60):
            c = 1 + seed % 2
            n = 1 + seed % (12 - tag_modulus(c))
            s = gen_random_bounded_ctw(n, c, seed, sym_prob=0.8)
            layout = build_layout(s)
            host = plant_block(layout, seed % (n + 1), c)
            model, trace = immerse_layouts(layout, host, c)
            assert model is not None
            assert verify_strong_immersion(s, host.digraph, model)
            _assert_pivot_invariants(trace)
            surplus += len(trace.pivots)
        assert surplus > 0


class TestPipeline:
    def test_not_semi_complete_is_rejected(self) -> None:
        with pytest.raises(NotSemiCompleteError):
            immerse_via_codewords(SimpleDigraph(2), THREE_CYCLE, 1)

    def test_width_above_bound_is_rejected(self) -> None:
        with pytest.raises(WidthError):
            immerse_via_codewords(THREE_CYCLE, THREE_CYCLE, 0)

    def test_c_defaults_to_the_larger_cutwidth(self) -> None:
        model, trace, c = immerse_with_trace(gen_transitive_tournament(2), THREE_CYCLE)
        assert c == 1

    def test_codewords_miss_some_immersions(self) -> None:
        # domination is sufficient, not necessary
        for seed in range(40):
            s = gen_random_bounded_ctw(3, 1, seed)
            s2 = gen_random_bounded_ctw(6, 1, seed)
            brute = find_immersion_bruteforce(s, s2)
            if brute is not None and immerse_via_codewords(s, s2, 1) is None:
                assert verify_strong_immersion(s, s2, brute)
                return
        pytest.fail("every brute-force immersion among the seeds was also found through codewords")

    @pytest.mark.slow
    def test_duplicates_immerse_through_the_identity(self) -> None:
        for seed in range(50):
            s = gen_random_bounded_ctw(2 + seed % 7, 1 + seed % 2, seed)
            model, trace, _ = immerse_with_trace(s, s)
            assert model == StrongImmersionModel.identity(s)
            assert trace.embedding == Embedding.identity(s.n)

    @pytest.mark.slow
    def test_relabelled_copies_share_codewords(self) -> None:
        for seed in range(25):
            c = 1 + seed % 2
            s = gen_random_bounded_ctw(3 + seed % 6, c, seed)
            perm = np.random.default_rng(seed).permutation(s.n).tolist()
            layout = build_layout(s)
            copy = relabelled_layout(layout, perm)
            assert encode_layout(layout, c) == encode_layout(copy, c)
            model, trace = immerse_layouts(layout, copy, c)
            assert trace.embedding == Embedding.identity(s.n)
            assert model.vmap == {v: perm[v] for v in range(s.n)}
            assert verify_strong_immersion(s, copy.digraph, model)

    @pytest.mark.slow
    def test_every_success_is_verified(self) -> None:
        successes = 0
        for seed in range(400):
            rng = np.random.default_rng(seed)
            # the second half draws patterns beyond brute-force scale
            pattern_n = int(rng.integers(1, 6)) if seed < 200 else int(rng.integers(1, 13))
            s = gen_random_bounded_ctw(pattern_n, 2, seed)
            s2 = gen_random_bounded_ctw(int(rng.integers(1, 13)), 2, seed + 1000)
            model, trace, _ = immerse_with_trace(s, s2, 2)
            if model is None:
                continue
            successes += 1
            assert verify_strong_immersion(s, s2, model)
            _assert_pivot_invariants(trace)
            if s.n <= 5 and s2.n <= 9:
                assert find_immersion_bruteforce(s, s2) is not None
        assert successes > 0


class TestScan:
    def test_duplicate_pair_is_found(self) -> None:
        hit = wqo_scan([THREE_CYCLE, gen_transitive_tournament(3), THREE_CYCLE], 1)
        assert hit is not None
        assert (hit.i, hit.j) == (0, 2)
        assert verify_strong_immersion(THREE_CYCLE, THREE_CYCLE, hit.model)

    def test_member_index_on_width_error(self) -> None:
        with pytest.raises(WidthError) as excinfo:
            wqo_scan([gen_transitive_tournament(2), THREE_CYCLE], 0)
        assert excinfo.value.index == 1

    @pytest.mark.slow
    def test_matches_all_pairs_reference(self) -> None:
        for seed in range(20):
            rng = np.random.default_rng(seed)
            stream = [gen_random_bounded_ctw(int(rng.integers(1, 5)), 1, 100 * seed + k) for k in range(10)]
            encoded = [encode_layout(build_layout(d), 1) for d in stream]
            expected = next(((i, j) for i, j in itertools.combinations(range(10), 2)
                             if dominates(encoded[i], encoded[j]) is not None), None)
            hit = wqo_scan(stream, 1)
            assert (None if hit is None else (hit.i, hit.j)) == expected
            if hit is not None:
                assert verify_strong_immersion(stream[hit.i], stream[hit.j], hit.model)


class TestModelText:
    def test_round_trip(self) -> None:
        model = StrongImmersionModel({0: 0, 1: 1}, {(1, 0): (1, 0), (0, 1): (0, 2, 1)})
        text = serialize_model(model)
        assert text == "vmap:\n0 -> 0\n1 -> 1\npmap:\n(0,1): 0 2 1\n(1,0): 1 0\n"
        assert parse_model(text) == model

    @pytest.mark.parametrize("text, line", [
        ("0 -> 1\n", 1),
        ("vmap:\n0 => 1\n", 2),
        ("vmap:\n0 -> 1\n0 -> 2\n", 3),
        ("vmap:\n0 -> 0\npmap:\n(0,1) 0 1\n", 4),
        ("vmap:\npmap:\n(0,1): 0 1\n(0,1): 0 1\n", 4),
    ])
    def test_format_errors(self, text: str, line: int) -> None:
        with pytest.raises(ModelFormatError) as excinfo:
            parse_model(text)
        assert excinfo.value.line == line
