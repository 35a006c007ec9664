import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from findyn import graphs
from findyn.chain import (
    EXACT,
    SURROGATE,
    basic_sets,
    build_chain_graph,
    chain_graph_to_dot,
    chain_recurrent,
    cyclic_decomposition,
    decompose,
    is_mixing,
    is_transitive,
    nonwandering_exact,
)
from findyn.errors import ParameterError, PreconditionError
from findyn.gallery import escaping_chains, square_map
from findyn.space import FiniteMetricSpace, FiniteSystem, conjugate, periodic_points
from oracles import brute_basic_sets, brute_chain_recurrent, line_systems


def grid(N):
    return square_map(N).system


def two_cycle_and_loop():
    # p0 <-> p1 is a 2-cycle, p2 a fixed point at distance 1 from p1
    space = FiniteMetricSpace(("p0", "p1", "p2"), ((0, 2, 3), (2, 0, 1), (3, 1, 0)))
    return FiniteSystem(space, (1, 0, 2))


class TestChainGraph:
    def test_s3_zero(self, s3):
        assert sorted(build_chain_graph(s3, 0).edges()) == [(0, 1), (1, 2), (2, 0)]

    def test_s3_one_complete(self, s3):
        g = build_chain_graph(s3, 1)
        assert all(g.has_edge(x, y) for x in range(3) for y in range(3))

    def test_s2_zero(self, s2):
        assert sorted(build_chain_graph(s2, 0).edges()) == [(0, 1), (1, 1)]

    def test_negative_epsilon(self, s2):
        with pytest.raises(ParameterError):
            build_chain_graph(s2, -1)


class TestChainRecurrent:
    def test_examples(self, s2, s3):
        assert chain_recurrent(s3, 0) == {0, 1, 2}
        assert chain_recurrent(s2, 0) == {1}
        assert chain_recurrent(s2, 1) == {0, 1}

    def test_nonwandering(self, s2, s3):
        assert nonwandering_exact(s2) == {1}
        assert nonwandering_exact(s3) == {0, 1, 2}
        assert nonwandering_exact(grid(4)) == {0, 4}


class TestBasicSets:
    def test_s3(self, s3):
        assert basic_sets(s3, 0) == [frozenset({0, 1, 2})]

    def test_grid(self):
        assert basic_sets(grid(4), 0) == [frozenset({0}), frozenset({4})]
        assert basic_sets(grid(4), 1) == [frozenset(range(5))]


class TestTransitiveMixing:
    def test_transitive(self, s3, ident2):
        v = is_transitive(s3, {0, 1, 2}, 0)
        assert v.holds and v.semantics == EXACT
        assert not is_transitive(ident2, {0, 1}, 0)

    def test_surrogate_label(self):
        sys = escaping_chains(6, 4).system
        cr = chain_recurrent(sys, Fraction(1, 8))
        v = is_transitive(sys, cr, Fraction(1, 8))
        assert v.semantics == SURROGATE
        comps = graphs.strongly_connected_components(
            build_chain_graph(sys, Fraction(1, 8)).successors, cr)
        assert v.holds == (len(comps) == 1)

    def test_empty(self, s3):
        with pytest.raises(PreconditionError):
            is_transitive(s3, set())

    def test_cyclic_examples(self, s2, s3):
        assert cyclic_decomposition(s3, {0, 1, 2}) == \
            (3, (frozenset({0}), frozenset({1}), frozenset({2})))
        assert cyclic_decomposition(s2, {1}) == (1, (frozenset({1}),))

    def test_two_cycle_merged_with_loop(self):
        sys = two_cycle_and_loop()
        assert basic_sets(sys, 0) == [frozenset({0, 1}), frozenset({2})]
        # at eps=1, f(p0)=p1 -> p2 and f(p2)=p2 -> p1 join both cycles
        m, classes = cyclic_decomposition(sys, {0, 1, 2}, 1)
        assert m == 1 and classes == (frozenset({0, 1, 2}),)
        assert is_mixing(sys, {0, 1, 2}, 1).holds

    def test_mixing_examples(self, s3):
        assert is_mixing(s3, {0}, 0, period=3).holds
        cyc2 = FiniteSystem(FiniteMetricSpace.uniform(("a", "b")), (1, 0))
        assert not is_mixing(cyc2, {0, 1}, 0, period=1).holds
        full = FiniteSystem(FiniteMetricSpace.uniform(tuple("abcd")), (1, 2, 3, 0))
        assert is_mixing(full, range(4), 1).holds

    def test_not_connected(self, ident2):
        with pytest.raises(PreconditionError):
            cyclic_decomposition(ident2, {0, 1})


class TestDecompose:
    def test_s3(self, s3):
        d = decompose(s3, 0).to_dict()
        assert d["basic_sets"] == [{"points": [0, 1, 2], "period": 3,
                                    "components": [[0], [1], [2]], "transitive": True,
                                    "mixing": [True, True, True], "semantics": EXACT}]

    def test_s2(self, s2):
        [b] = decompose(s2, 0).basic_sets
        assert b.points == {1} and b.period == 1 and b.mixing[0].holds

    def test_grid_8(self):
        dec = decompose(grid(8), 0)
        assert [sorted(b.points) for b in dec.basic_sets] == [[0], [8]]
        assert dec.chain_recurrent == {0, 8}

    def test_labels(self, s3):
        d = decompose(s3, 0).to_dict(s3.labels)
        assert d["chain_recurrent"] == ["a", "b", "c"]
        assert json.loads(json.dumps(d)) == d

    def test_dot(self, s2):
        dot = chain_graph_to_dot(s2, build_chain_graph(s2, 0))
        assert dot.startswith("digraph chain {")
        assert "n0 -> n1;" in dot and "n1 -> n1;" in dot
        assert dot.count("subgraph cluster_") == 2


# -- properties ----------------------------------------------------------------------

def thresholds(sys):
    return [Fraction(0), *sys.space.distance_values()]


@given(line_systems())
def test_oracle_equivalence(sys):
    for eps in thresholds(sys):
        assert chain_recurrent(sys, eps) == brute_chain_recurrent(sys, eps)
        assert basic_sets(sys, eps) == brute_basic_sets(sys, eps)


@given(line_systems())
def test_monotone_and_refining(sys):
    eps = thresholds(sys)
    for lo, hi in zip(eps, eps[1:]):
        assert set(build_chain_graph(sys, lo).edges()) <= set(build_chain_graph(sys, hi).edges())
        assert chain_recurrent(sys, lo) <= chain_recurrent(sys, hi)
        coarse = basic_sets(sys, hi)
        for b in basic_sets(sys, lo):
            assert any(b <= c for c in coarse)


@given(line_systems())
def test_finite_count(sys):
    for eps in thresholds(sys):
        assert len(basic_sets(sys, eps)) <= len(sys)
    per = periodic_points(sys)
    orbits = {frozenset(sys.iterate(x, k) for k in range(p)) for x, p in per.items()}
    assert len(basic_sets(sys, 0)) == len(orbits)


@given(line_systems())
def test_zero_threshold_is_nonwandering(sys):
    assert chain_recurrent(sys, 0) == nonwandering_exact(sys) == set(periodic_points(sys))


@given(line_systems())
def test_cyclic_structure(sys):
    for eps in thresholds(sys):
        dec = decompose(sys, eps)
        union = set()
        for b in dec.basic_sets:
            assert not (union & b.points)
            union |= b.points
            assert set().union(*b.components) == b.points
            assert sum(len(c) for c in b.components) == len(b.points)
            m = b.period
            assert m == len(b.components)
            if eps == 0:
                assert sys.image(b.points) == b.points
                for i, comp in enumerate(b.components):
                    assert sys.image(comp) == b.components[(i + 1) % m]
                    assert {sys.iterate(x, m) for x in comp} == comp
                    assert b.mixing[i].holds
        assert union == dec.chain_recurrent


@given(line_systems(), st.randoms())
def test_conjugation_invariance(sys, rnd):
    h = list(range(len(sys)))
    rnd.shuffle(h)
    c = conjugate(sys, h)
    for eps in thresholds(sys):
        a, b = decompose(sys, eps), decompose(c, eps)
        mapped = sorted((sorted(h[x] for x in bs.points), bs.period) for bs in a.basic_sets)
        assert mapped == sorted((sorted(bs.points), bs.period) for bs in b.basic_sets)
