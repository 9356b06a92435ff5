"""Tests for labels, codewords, domination and interval isomorphism."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from semiwqo.codec import (
    Codeword,
    Embedding,
    Label,
    ProfileClass,
    compose_embeddings,
    dominates,
    dominates_bruteforce,
    encode,
    encode_layout,
    enumerate_labels,
    interval_isomorphism,
    is_embedding_of,
    label_in_universe,
    parse_codeword,
    serialize_codeword,
    tag_modulus,
)
from semiwqo.config import Limits
from semiwqo.digraph import SemiCompleteDigraph, SimpleDigraph, gen_random_bounded_ctw
from semiwqo.errors import CodewordFormatError, CodewordMismatchError, LimitExceededError, ReconstructionError, WidthError
from semiwqo.ordering import OrderedCutSequence, VertexOrdering, build_layout, build_linked_ordered_cuts
from tests.builders import plant_block, planted_embedding
from tests.strategies import PROPERTY_SETTINGS, codewords, label_pools, label_universe

THREE_CYCLE = SemiCompleteDigraph(3, [(0, 1), (1, 2), (2, 0)])


def _three_cycle_codeword(c: int = 1) -> Codeword:
    ordering = VertexOrdering.identity(3)
    return encode(THREE_CYCLE, ordering, build_linked_ordered_cuts(THREE_CYCLE, ordering), c)


def _label(s1: int, s2: int, matches=(), tag: int = 0) -> Label:
    return Label(ProfileClass(s1, s2, matches), (False,) * s1, (False,) * s2, tag)


def _random_codeword_pair(seed: int) -> tuple[Codeword, Codeword]:
    rng = np.random.default_rng(seed)
    c = int(rng.integers(1, 4))
    universe = label_universe(c)
    pool = [universe[i] for i in rng.choice(len(universe), size=int(rng.integers(1, 4)), replace=False)]

    def draw(n: int) -> Codeword:
        labels = tuple(pool[i] for i in rng.integers(0, len(pool), size=n))
        zeta = tuple(int(z) for z in rng.integers(0, c + 1, size=n - 1))
        return Codeword(n, labels, zeta, c)

    n = int(rng.integers(1, 7))
    return draw(n), draw(int(rng.integers(n, 13)))


def is_quasi_order_on(sample, relation) -> bool:
    reflexive = all(relation(a, a) for a in sample)
    transitive = all(relation(a, z) for a in sample for b in sample for z in sample
                     if relation(a, b) and relation(b, z))
    return reflexive and transitive


class TestLabels:
    def test_tag_modulus(self) -> None:
        assert tag_modulus(0) == 1
        assert tag_modulus(3) == 13

    def test_profile_validation(self) -> None:
        assert str(ProfileClass(2, 1, ((2, 1),))) == "(2,1;[2-1])"
        with pytest.raises(ValueError):
            ProfileClass(2, 2, ((1, 1), (2, 1)))
        with pytest.raises(ValueError):
            ProfileClass(1, 1, ((1, 2),))

    def test_matches_are_normalised(self) -> None:
        assert ProfileClass(2, 2, ((2, 1), (1, 2))) == ProfileClass(2, 2, ((1, 2), (2, 1)))

    def test_label_validation(self) -> None:
        with pytest.raises(ValueError):
            Label(ProfileClass(1, 1), (), (False,), 0)
        with pytest.raises(ValueError):
            Label(ProfileClass(1, 1, ((1, 1),)), (True,), (False,), 0)

    def test_universe_for_width_one(self) -> None:
        labels = list(enumerate_labels(1))
        assert len(labels) == 55
        assert len(set(labels)) == 55
        assert all(label_in_universe(lbl, 1) for lbl in labels)

    def test_out_of_universe(self) -> None:
        assert not label_in_universe(_label(0, 0, tag=5), 1)
        assert not label_in_universe(_label(2, 0), 1)
        assert label_in_universe(ProfileClass(1, 1), 1)


class TestEncode:
    def test_three_cycle(self) -> None:
        cw = _three_cycle_codeword()
        assert cw.n == 3
        assert cw.zeta == (1, 1)
        assert cw.label(1) == Label(ProfileClass(0, 1), (), (False,), 1)
        assert cw.label(2) == Label(ProfileClass(1, 1, ((1, 1),)), (False,), (False,), 2)
        assert cw.label(3) == Label(ProfileClass(1, 0), (False,), (), 3)

    def test_symmetric_arcs_are_flagged(self) -> None:
        s = SemiCompleteDigraph(2, [(0, 1), (1, 0)])
        ordering = VertexOrdering((0, 1))
        cw = encode(s, ordering, OrderedCutSequence(((), ((1, 0),), ())), 1)
        assert cw.label(1).sym_next == (True,)
        assert cw.label(2).sym_prev == (True,)

    def test_width_above_bound(self) -> None:
        ordering = VertexOrdering.identity(3)
        with pytest.raises(WidthError):
            encode(THREE_CYCLE, ordering, build_linked_ordered_cuts(THREE_CYCLE, ordering), 0)

    def test_ordered_cuts_must_match(self) -> None:
        with pytest.raises(ValueError):
            encode(THREE_CYCLE, VertexOrdering.identity(3), OrderedCutSequence(((), (), (), ())), 1)

    def test_tags_follow_positions(self) -> None:
        s = gen_random_bounded_ctw(9, 1, seed=2)
        cw = encode_layout(build_layout(s), 1)
        assert [cw.label(i).tag for i in range(1, 10)] == [i % 5 for i in range(1, 10)]

    def test_codeword_validation(self) -> None:
        with pytest.raises(ValueError):
            Codeword(2, (_label(0, 0), _label(0, 0)), (2,), 1)
        with pytest.raises(ValueError):
            Codeword(2, (_label(0, 0),), (0,), 1)
        with pytest.raises(ValueError):
            Codeword(0, (), (), 1)
        with pytest.raises(ValueError, match="label 2"):
            Codeword(2, (_label(0, 0), _label(0, 0, tag=5)), (0,), 1)
        with pytest.raises(ValueError, match="label 1"):
            Codeword(1, (_label(2, 0),), (), 1)


class TestCodewordText:
    def test_round_trip(self) -> None:
        cw = _three_cycle_codeword()
        text = serialize_codeword(cw)
        assert text.splitlines()[0] == "codeword n=3 c=1"
        assert text.splitlines()[-1] == "zeta: 1 1"
        assert "2: profile=(1,1;[1-1]) sym_prev=0 sym_next=0 tag=2" in text
        assert parse_codeword(text) == cw

    def test_profile_projection_round_trip(self) -> None:
        projected = _three_cycle_codeword().profile_projection()
        assert projected.labels[1] == ProfileClass(1, 1, ((1, 1),))
        assert parse_codeword(serialize_codeword(projected)) == projected

    @pytest.mark.parametrize("text, line", [
        ("", 1),
        ("codeword n=1\n", 1),
        ("codeword n=1 c=1\n1: profile=(0,0;[]) sym_prev= sym_next= tag=1\n", 2),
        ("codeword n=1 c=1\n2: profile=(0,0;[]) sym_prev= sym_next= tag=1\nzeta:\n", 2),
        ("codeword n=1 c=1\n1: profile=(0,0;[]\nzeta:\n", 2),
        ("codeword n=2 c=1\n1: profile=(0,0;[])\n2: profile=(0,0;[])\nzeta: 3\n", 4),
        ("codeword n=1 c=1\n1: profile=(3,3;[]) sym_prev=000 sym_next=000 tag=9\nzeta:\n", 2),
        ("codeword n=2 c=1\n1: profile=(0,0;[]) sym_prev= sym_next= tag=0\n"
         "2: profile=(0,0;[]) sym_prev= sym_next= tag=5\nzeta: 0\n", 3),
        ("codeword n=1 c=1\n1: profile=(2,0;[])\nzeta:\n", 2),
    ])
    def test_format_errors(self, text: str, line: int) -> None:
        with pytest.raises(CodewordFormatError) as excinfo:
            parse_codeword(text)
        assert excinfo.value.line == line


class TestEmbeddings:
    def test_validation(self) -> None:
        with pytest.raises(ValueError):
            Embedding((2, 2))
        with pytest.raises(ValueError):
            Embedding((0, 1))
        assert Embedding.identity(3).f == (1, 2, 3)
        assert Embedding((2, 5))(2) == 5

    def test_composition(self) -> None:
        f, g = Embedding((1, 3)), Embedding((2, 4, 5, 9))
        assert compose_embeddings(f, g) == Embedding((2, 5))

    def test_gap_condition(self) -> None:
        a = _label(0, 0, tag=1)
        cw = Codeword(2, (a, a), (1,), 1)
        assert is_embedding_of(cw, Codeword(3, (a, a, a), (1, 1), 1), Embedding((1, 3)))
        assert not is_embedding_of(cw, Codeword(3, (a, a, a), (1, 0), 1), Embedding((1, 3)))
        assert is_embedding_of(cw, Codeword(3, (a, a, a), (1, 0), 1), Embedding((1, 2)))


class TestDominates:
    def test_lexicographically_smallest_embedding(self) -> None:
        a, b = _label(0, 0, tag=1), _label(0, 0, tag=2)
        cw = Codeword(2, (a, b), (0,), 1)
        cw2 = Codeword(5, (b, a, a, b, b), (0, 0, 0, 0), 1)
        assert dominates(cw, cw2) == Embedding((2, 4))

    def test_gap_blocks_every_embedding(self) -> None:
        a = _label(0, 0, tag=1)
        cw = Codeword(2, (a, a), (1,), 1)
        assert dominates(cw, Codeword(3, (a, a, a), (0, 0), 1)) is None

    def test_longer_codeword_is_never_dominated(self) -> None:
        a = _label(0, 0)
        assert dominates(Codeword(2, (a, a), (0,), 1), Codeword(1, (a,), (), 1)) is None

    def test_different_bounds_are_incomparable(self) -> None:
        a = _label(0, 0)
        with pytest.raises(CodewordMismatchError):
            dominates(Codeword(1, (a,), (), 1), Codeword(1, (a,), (), 2))

    def test_bruteforce_limit(self) -> None:
        a = _label(0, 0)
        cw = Codeword(1, (a,), (), 1)
        with pytest.raises(LimitExceededError):
            dominates_bruteforce(cw, Codeword(5, (a,) * 5, (0,) * 4, 1), Limits(dominates_bruteforce_n=4))

    @PROPERTY_SETTINGS
    @given(data=st.data(), c=st.integers(min_value=1, max_value=2))
    def test_matches_bruteforce(self, data: st.DataObject, c: int) -> None:
        pool = data.draw(label_pools(c))
        cw = data.draw(codewords(c, pool, max_n=4))
        cw2 = data.draw(codewords(c, pool, max_n=9))
        f = dominates(cw, cw2)
        assert f == dominates_bruteforce(cw, cw2)
        if f is not None:
            assert is_embedding_of(cw, cw2, f)

    @PROPERTY_SETTINGS
    @given(data=st.data(), c=st.integers(min_value=1, max_value=2))
    def test_domination_is_a_quasi_order(self, data: st.DataObject, c: int) -> None:
        pool = data.draw(label_pools(c, max_size=2))
        sample = data.draw(st.lists(codewords(c, pool, max_n=5), min_size=1, max_size=4))
        assert is_quasi_order_on(sample, lambda a, b: dominates(a, b) is not None)
        for cw in sample:
            assert dominates(cw, cw) == Embedding.identity(cw.n)

    @PROPERTY_SETTINGS
    @given(data=st.data())
    def test_composed_embeddings_embed(self, data: st.DataObject) -> None:
        pool = data.draw(label_pools(1, max_size=2))
        a = data.draw(codewords(1, pool, max_n=3))
        b = data.draw(codewords(1, pool, max_n=6))
        z = data.draw(codewords(1, pool, max_n=9))
        f, g = dominates(a, b), dominates(b, z)
        if f is not None and g is not None:
            assert is_embedding_of(a, z, compose_embeddings(f, g))

    @pytest.mark.slow
    def test_agrees_with_bruteforce_on_random_pairs(self) -> None:
        mismatches = []
        for seed in range(500):
            cw, cw2 = _random_codeword_pair(seed)
            f = dominates(cw, cw2)
            if f != dominates_bruteforce(cw, cw2) or (f is not None and not is_embedding_of(cw, cw2, f)):
                mismatches.append(seed)
        assert mismatches == []


class TestIntervalIsomorphism:
    def test_rejects_bad_arguments(self) -> None:
        ordering = VertexOrdering.identity(3)
        with pytest.raises(ValueError):
            interval_isomorphism(THREE_CYCLE, ordering, THREE_CYCLE, ordering, 2, 4, Embedding.identity(3))
        with pytest.raises(ValueError):
            interval_isomorphism(THREE_CYCLE, ordering, THREE_CYCLE, ordering, 1, 2, Embedding((1, 3)))

    def test_differing_intervals_raise(self) -> None:
        s, s2 = SimpleDigraph(2, [(0, 1)]), SimpleDigraph(2, [(1, 0)])
        ordering = VertexOrdering.identity(2)
        with pytest.raises(ReconstructionError):
            interval_isomorphism(s, ordering, s2, ordering, 1, 2, Embedding.identity(2))

    def test_identity_on_duplicates(self) -> None:
        ordering = VertexOrdering((2, 0, 1))
        mapping = interval_isomorphism(THREE_CYCLE, ordering, THREE_CYCLE, ordering, 1, 3, Embedding.identity(3))
        assert mapping == {0: 0, 1: 1, 2: 2}

    @pytest.mark.slow
    def test_planted_intervals(self) -> None:
        failures = []
        for seed in range(100):
            c = 1 + seed % 2
            s = gen_random_bounded_ctw(1 + seed % 6, c, seed)
            layout = build_layout(s)
            after = seed % (s.n + 1)
            host = plant_block(layout, after, c)
            f = planted_embedding(s.n, after, c)
            cw, cw2 = encode_layout(layout, c), encode_layout(host, c)
            if not is_embedding_of(cw, cw2, f) or dominates(cw, cw2) is None:
                failures.append(seed)
                continue
            for j, h in ((1, after), (after + 1, s.n)):
                if j > h:
                    continue
                assert all(cw.label(p) == cw2.label(f(p)) for p in range(j, h + 1))
                mapping = interval_isomorphism(s, layout.ordering, host.digraph, host.ordering, j, h, f)
                left = [layout.ordering.vertex_at(p) for p in range(j, h + 1)]
                if mapping != {v: v for v in left}:
                    failures.append(seed)
        assert failures == []
