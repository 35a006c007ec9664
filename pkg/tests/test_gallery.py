import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from findyn import gallery
from findyn.chain import decompose
from findyn.errors import ParameterError
from findyn.gallery import (
    REGISTRY,
    build,
    escaping_chains,
    example_3_1_horizon,
    example_3_1_profile,
    functional_adjacency,
    ladder_point,
    n_expansive_family,
    run_expectations,
    sft_decompose,
    shift_distance,
)
from findyn.space import validate_metric
from oracles import line_systems


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_default_expectations_pass(name):
    item = build(name)
    results = run_expectations(item)
    assert results
    for r in results:
        assert r.passed, (r.expectation, r.actual)
        assert r.expectation.provenance in (gallery.CLAIMED, gallery.DERIVED, gallery.TRIVIAL)


@pytest.mark.parametrize("params", [
    {"N": 2}, {"N": 8}, {"N": 16},
])
def test_square_map_variants(params):
    assert all(r.passed for r in run_expectations(build("example_4_5", **params)))


@pytest.mark.parametrize("I,M", [(3, 1), (6, 4), (7, 5), (8, 5)])
def test_escaping_chain_variants(I, M):
    item = escaping_chains(I, M)
    assert len(item.system) == 2 * I + 1 + M * (I - 1)
    assert all(r.passed for r in run_expectations(item))


@pytest.mark.parametrize("K", [2, 3, 4])
@pytest.mark.parametrize("N", [2, 3, 4])
def test_n_expansive_metric_and_expectations(K, N):
    item = n_expansive_family(K, N)
    assert validate_metric(item.system.space) == []
    assert all(r.passed for r in run_expectations(item))


def test_n_expansive_constant_distance():
    sys = n_expansive_family(3, 3).system
    i = sys.space.index
    for k in (2, 3, 4):
        a, b = i(f"q(1,{k},0)"), i(f"q(2,{k},0)")
        for _ in range(12):
            assert sys.d(a, b) == Fraction(1, k)
            a, b = sys.fmap[a], sys.fmap[b]


def test_shift_distance_examples():
    # p_2 = ...0101..., shifted by one differs at coordinate 0
    assert shift_distance(2, 0, 2, 1) == 1
    assert shift_distance(2, 0, 2, 2) == 0
    # (01)^∞ and (001)^∞ agree at 0 (both 0) and differ at +-1
    assert shift_distance(2, 0, 3, 0) == Fraction(1, 2)


def test_unknown_item_and_params():
    with pytest.raises(ParameterError):
        build("nope")
    with pytest.raises(ParameterError):
        build("s3", N=3)
    with pytest.raises(ParameterError):
        escaping_chains(2, 1)


class TestLadderProfile:
    def test_converges(self):
        prof = example_3_1_profile(2, 3, 5, 40)
        # strictly decreasing in exact terms; floats saturate near the limit
        assert all(a >= b - 1e-15 for a, b in zip(prof, prof[1:]))
        assert prof[0] > prof[10]
        assert abs(prof[-1] - 1 / 6) < 1e-3

    def test_first_term(self):
        (_, a), (_, b) = ladder_point(2, 6), ladder_point(3, 6)
        assert example_3_1_profile(2, 3, 5, 0) == [abs(a - b)]
        assert ladder_point(2, 1)[1] == pytest.approx(math.exp(-1 + 0.5) + 0.5)

    def test_rejects_equal_rungs(self):
        with pytest.raises(ParameterError):
            example_3_1_profile(3, 3, 1, 5)

    def test_horizon_keeps_orbits_close(self):
        for eps in (0.5, 0.2, 0.05):
            k = math.ceil(6 / eps)
            p = k + 1
            M = example_3_1_horizon(k, p, eps)
            prof = example_3_1_profile(k, p, M, 60)
            assert max(prof) < eps
            assert prof[-1] == pytest.approx(1 / k - 1 / p, abs=1e-12)


class TestShiftDecompose:
    def test_full_shift(self):
        d = sft_decompose([[1, 1], [1, 1]])
        assert [(c.vertices, c.period, c.mixing) for c in d.components] == [((0, 1), 1, True)]

    def test_four_cycle(self):
        A = np.roll(np.eye(4, dtype=int), 1, axis=1)
        [c] = sft_decompose(A).components
        assert c.period == 4 and not c.mixing

    def test_block_diagonal(self):
        A = np.zeros((6, 6), dtype=int)
        A[:2, :2] = 1
        A[2:, 2:] = np.roll(np.eye(4, dtype=int), 1, axis=1)
        assert [c.period for c in sft_decompose(A).components] == [1, 4]

    def test_zero_column_warns(self):
        A = [[0, 1], [0, 1]]
        with pytest.warns(UserWarning, match="not surjective"):
            d = sft_decompose(A)
        assert d.core == (1,)
        assert [c.vertices for c in d.components] == [(1,)]

    def test_bad_input(self):
        with pytest.raises(ParameterError):
            sft_decompose([[0, 2], [1, 0]])
        with pytest.raises(ParameterError):
            sft_decompose([[1, 1]])


@given(line_systems())
def test_sft_matches_decompose_on_functional_graphs(sys):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        sd = sft_decompose(functional_adjacency(sys))
    dec = decompose(sys, 0)
    assert [(frozenset(c.vertices), c.period, c.mixing) for c in sd.components] == \
        [(b.points, b.period, b.period == 1 or len(b.points) == 1) for b in dec.basic_sets]
    # a cycle is primitive only when it is a single fixed point
    assert all(c.mixing == (len(c.vertices) == 1) for c in sd.components)


def test_expectation_serialization():
    item = build("example_4_6")
    docs = [e.to_dict() for e in item.expectations]
    assert all(set(d) == {"operation", "params", "expected", "provenance"} for d in docs)
