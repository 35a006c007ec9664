from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from findyn.chain import chain_recurrent
from findyn.errors import ParameterError, PreconditionError, ResourceError
from findyn.gallery import random_system
from findyn.shadow import (
    PseudoOrbit,
    check_finite_tracing,
    check_forward_shadowing_exact,
    check_periodic_biinfinite_tracing,
    count_pseudo_orbits,
    enumerate_pseudo_orbits,
    is_pseudo_orbit,
    shadowing_sweep,
)
from findyn.space import OrbitSegment
from oracles import line_systems

H = Fraction(1, 2)


class TestPseudoOrbit:
    def test_true_orbit(self, s3):
        assert is_pseudo_orbit(s3, (0, 1, 2, 0), 0).ok

    def test_violation_index(self, s3):
        assert is_pseudo_orbit(s3, (0, 0), 0) == (False, 0)
        assert is_pseudo_orbit(s3, (0, 1, 1), 0) == (False, 1)
        assert is_pseudo_orbit(s3, (0, 0), 1).ok

    def test_periodic_wrap(self, s3):
        assert is_pseudo_orbit(s3, (0, 1, 2), 0, periodic=True).ok
        assert is_pseudo_orbit(s3, (0, 1), 0, periodic=True) == (False, 1)

    def test_negative_delta(self, s3):
        with pytest.raises(ParameterError):
            is_pseudo_orbit(s3, (0,), -1)


class TestFiniteTracing:
    def test_true_orbit(self, s3):
        assert check_finite_tracing(s3, (1, 2, 0), 0) == {1}

    def test_constant(self, s3):
        assert check_finite_tracing(s3, PseudoOrbit((0, 0, 0), 1), 1) == {0, 1, 2}
        assert check_finite_tracing(s3, PseudoOrbit((0, 0, 0), 1), H) == frozenset()

    def test_periodic_rejected(self, s3):
        with pytest.raises(PreconditionError):
            check_finite_tracing(s3, PseudoOrbit((0,), 0, periodic=True), 0)


class TestForwardShadowing:
    def test_identity_small_delta(self, ident2):
        assert check_forward_shadowing_exact(ident2, H, H).holds

    def test_identity_jump(self, ident2):
        res = check_forward_shadowing_exact(ident2, 1, H)
        assert not res.holds and res.counterexample == (0, 1)

    def test_s3_uniform(self, s3):
        assert check_forward_shadowing_exact(s3, 1, 1).holds

    def test_report(self, ident2):
        d = check_forward_shadowing_exact(ident2, 1, H).to_dict(1, H)
        assert d == {"delta": 1, "epsilon": "1/2", "forward_shadowing": False,
                     "counterexample": [0, 1]}

    def test_state_budget(self):
        sys = random_system(8, 0)
        with pytest.raises(ResourceError):
            check_forward_shadowing_exact(sys, 1, Fraction(1, 10), max_states=3)

    def test_sweep_order(self, ident2):
        rows = shadowing_sweep(ident2, [1, H], [1, H])
        assert [(d, e) for d, e, _ in rows] == [(H, H), (H, 1), (1, H), (1, 1)]
        assert [v for *_, v in rows] == [True, True, False, True]


class TestPeriodicTracing:
    def test_true_cycle(self, s3):
        assert check_periodic_biinfinite_tracing(s3, PseudoOrbit((0, 1, 2), 0, True), 0)

    def test_s2(self, s2):
        assert not check_periodic_biinfinite_tracing(s2, PseudoOrbit((0, 1), 1, True), 0)

    def test_s3_constant(self, s3):
        assert check_periodic_biinfinite_tracing(s3, PseudoOrbit((0, 0, 0), 1, True), 1)
        assert not check_periodic_biinfinite_tracing(s3, PseudoOrbit((0,), 1, True), H)

    def test_needs_periodic(self, s3):
        with pytest.raises(PreconditionError):
            check_periodic_biinfinite_tracing(s3, PseudoOrbit((0,), 0), 0)


class TestEnumeration:
    def test_zero_delta(self, s3):
        assert list(enumerate_pseudo_orbits(s3, 0, 4)) == \
            [OrbitSegment.forward(s3, x, 4).points for x in range(3)]

    def test_counts(self, s2, s3):
        assert len(list(enumerate_pseudo_orbits(s3, 1, 2))) == 9
        assert list(enumerate_pseudo_orbits(s2, H, 3)) == [(0, 1, 1), (1, 1, 1)]
        assert count_pseudo_orbits(s3, 1, 5) == 3 ** 5

    def test_budget(self, s3):
        with pytest.raises(ResourceError):
            enumerate_pseudo_orbits(s3, 1, 10, budget=100)


# -- properties ----------------------------------------------------------------------

def grid(sys):
    return [Fraction(0), *sys.space.distance_values()]


def brute_untraceable(sys, delta, epsilon, L):
    for seq in enumerate_pseudo_orbits(sys, delta, L):
        if not check_finite_tracing(sys, seq, epsilon):
            return seq
    return None


@given(line_systems(max_n=5), st.data())
def test_oracle_equivalence(sys, data):
    vals = grid(sys)
    delta = data.draw(st.sampled_from(vals))
    epsilon = data.draw(st.sampled_from(vals))
    res = check_forward_shadowing_exact(sys, delta, epsilon)
    bad = brute_untraceable(sys, delta, epsilon, 6)
    if res.holds:
        assert bad is None
    else:
        cx = res.counterexample
        assert is_pseudo_orbit(sys, cx, delta).ok
        assert check_finite_tracing(sys, cx, epsilon) == frozenset()
        # BFS gives a shortest witness, so the brute search finds one iff it fits
        assert (bad is not None) == (len(cx) <= 6)


@given(line_systems(max_n=5))
def test_monotone(sys):
    vals = grid(sys)
    table = {(d, e): check_forward_shadowing_exact(sys, d, e).holds for d in vals for e in vals}
    for (d, e), v in table.items():
        if v:
            for (d2, e2), v2 in table.items():
                if d2 <= d and e2 >= e:
                    assert v2


@given(line_systems(max_n=6))
def test_chain_recurrent_invariant_under_shadowing(sys):
    vals = grid(sys)
    for delta in vals:
        if all(check_forward_shadowing_exact(sys, delta, e).holds for e in vals):
            cr = chain_recurrent(sys, 0)
            assert sys.image(cr) == cr


@given(line_systems(max_n=6))
def test_periodic_tracing_of_true_cycles(sys):
    x = 0
    for _ in range(len(sys)):
        x = sys.fmap[x]
    cycle = [x]
    while sys.fmap[cycle[-1]] != x:
        cycle.append(sys.fmap[cycle[-1]])
    assert check_periodic_biinfinite_tracing(sys, PseudoOrbit(cycle, 0, True), 0)
