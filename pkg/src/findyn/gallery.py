"""Concrete systems with machine-checkable expectations.

Each builder returns a :class:`GalleryItem` whose expectations name an
operation from :data:`OPERATIONS`, its parameters, the expected value and a
provenance tag: ``"claimed"`` (a verdict asserted for the continuous
original), ``"derived"`` (computed independently for the finite version) or
``"trivial"``.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from . import graphs
from .chain import basic_sets
from .errors import ParameterError
from .invlimit import (
    bi_asymptotically_c_expansive,
    c_expansive,
    check_N_expansive,
    eventual_image,
    gamma_set,
    window_invariant_pairs,
)
from .space import (
    FiniteMetricSpace,
    FiniteSystem,
    discretize_function,
    fixed_points,
    validate_metric,
)

CLAIMED = "claimed"
DERIVED = "derived"
TRIVIAL = "trivial"


@dataclass(frozen=True)
class Expectation:
    operation: str
    params: dict
    expected: Any
    provenance: str

    def to_dict(self) -> dict:
        return {"operation": self.operation, "params": self.params,
                "expected": self.expected, "provenance": self.provenance}


@dataclass(frozen=True)
class GalleryItem:
    name: str
    system: FiniteSystem
    params: dict
    expectations: tuple[Expectation, ...]
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ExpectationResult:
    expectation: Expectation
    actual: Any

    @property
    def passed(self) -> bool:
        return self.actual == self.expectation.expected


def _labels(sys, pts):
    return sorted(sys.labels[i] for i in pts)


def _op_fixed_points(sys):
    return _labels(sys, fixed_points(sys))


def _op_fmap(sys):
    return list(sys.fmap)


def _op_point_count(sys):
    return len(sys)


def _op_basic_sets(sys, epsilon):
    return sorted(_labels(sys, b) for b in basic_sets(sys, Fraction(epsilon)))


def _op_eventual_image(sys):
    return _labels(sys, eventual_image(sys).points)


def _op_metric_valid(sys):
    return not validate_metric(sys.space)


def _op_bi_asymptotic(sys, c):
    return bi_asymptotically_c_expansive(sys, Fraction(c))[0]


def _op_c_expansive(sys, c):
    return c_expansive(sys, Fraction(c))[0]


def _op_windowed_pair(sys, c, L, x, y):
    pairs = window_invariant_pairs(sys, Fraction(c), L).pairs
    return (sys.space.index(x), sys.space.index(y)) in pairs


def _op_N_expansive(sys, c, N):
    return check_N_expansive(sys, Fraction(c), N)


def _op_gamma_size(sys, x, c):
    return len(gamma_set(sys, sys.space.index(x), Fraction(c)))


def _op_constant_pair_distance(sys, x, y, steps):
    a, b = sys.space.index(x), sys.space.index(y)
    values = set()
    for _ in range(steps):
        values.add(sys.d(a, b))
        a, b = sys.fmap[a], sys.fmap[b]
    return str(values.pop()) if len(values) == 1 else None


OPERATIONS: dict[str, Callable] = {
    "fixed_points": _op_fixed_points,
    "fmap": _op_fmap,
    "point_count": _op_point_count,
    "basic_sets": _op_basic_sets,
    "eventual_image": _op_eventual_image,
    "metric_valid": _op_metric_valid,
    "bi_asymptotically_c_expansive": _op_bi_asymptotic,
    "c_expansive": _op_c_expansive,
    "windowed_pair": _op_windowed_pair,
    "N_expansive": _op_N_expansive,
    "gamma_size": _op_gamma_size,
    "constant_pair_distance": _op_constant_pair_distance,
}


def run_expectations(item: GalleryItem) -> list[ExpectationResult]:
    out = []
    for exp in item.expectations:
        actual = OPERATIONS[exp.operation](item.system, **exp.params)
        out.append(ExpectationResult(exp, actual))
    return out


# -- small named systems ----------------------------------------------------------

def merge_system() -> GalleryItem:
    """Two points, ``a -> b -> b``."""
    sys = FiniteSystem(FiniteMetricSpace.uniform(("a", "b")), (1, 1))
    return GalleryItem("s2", sys, {}, (
        Expectation("fixed_points", {}, ["b"], TRIVIAL),
        Expectation("basic_sets", {"epsilon": "0"}, [["b"]], TRIVIAL),
    ))


def three_cycle() -> GalleryItem:
    sys = FiniteSystem(FiniteMetricSpace.uniform(("a", "b", "c")), (1, 2, 0))
    return GalleryItem("s3", sys, {}, (
        Expectation("basic_sets", {"epsilon": "0"}, [["a", "b", "c"]], TRIVIAL),
        Expectation("c_expansive", {"c": "1/2"}, True, TRIVIAL),
        Expectation("c_expansive", {"c": "1"}, False, DERIVED),
    ))


def identity_pair() -> GalleryItem:
    sys = FiniteSystem(FiniteMetricSpace.uniform(("a", "b")), (0, 1))
    return GalleryItem("identity2", sys, {}, (
        Expectation("fixed_points", {}, ["a", "b"], TRIVIAL),
    ))


# -- squaring map on a grid -------------------------------------------------------

def square_map(N: int = 4) -> GalleryItem:
    """``x -> x**2`` on the grid ``{0, 1/N, ..., 1}`` with nearest-point rounding."""
    if N < 2:
        raise ParameterError("square map grid needs N >= 2")
    sys = discretize_function(lambda x: x * x, N)
    exps = [
        Expectation("fixed_points", {}, ["0", "1"], CLAIMED),
        Expectation("basic_sets", {"epsilon": "0"}, [["0"], ["1"]], DERIVED),
        Expectation("bi_asymptotically_c_expansive", {"c": "2/5"}, True, CLAIMED),
    ]
    if N == 4:
        exps.insert(0, Expectation("fmap", {}, [0, 0, 1, 2, 4], DERIVED))
    return GalleryItem("example_4_5", sys, {"N": N}, tuple(exps),
                       {"rounding": "nearest grid point, ties to lower index"})


# -- two-sided escaping chains ----------------------------------------------------

def strip_point(m: int, i: int) -> Fraction:
    """The ``i``-th point of strip ``m >= 1``: sits just right of ``-i/(i+1)``."""
    return -Fraction(i, i + 1) + Fraction(1, 2 ** m * i * (i + 1))


def escaping_chains(I: int = 6, M: int = 4) -> GalleryItem:
    """Truncated two-sided chain system accumulating at ``-1`` and ``1``.

    Base chain ``-(I-1)/I -> ... -> -1/2 -> 0 -> 1/2 -> ... -> (I-1)/I -> 1``
    with ``±1`` fixed; strips ``m = 1..M`` of ``I-1`` points each feed into
    ``0``.  The last base point ``(I-1)/I`` is sent to ``1`` to keep the map
    total; the deepest points of each chain have no preimage.
    """
    if I < 3 or M < 1:
        raise ParameterError("need I >= 3 and M >= 1")
    values: list[Fraction] = [Fraction(-1)]
    values += [-Fraction(i - 1, i) for i in range(I, 1, -1)]
    values += [Fraction(0)]
    values += [Fraction(i - 1, i) for i in range(2, I + 1)]
    values += [Fraction(1)]
    for m in range(1, M + 1):
        values += [strip_point(m, i) for i in range(1, I)]
    pos = {v: k for k, v in enumerate(values)}
    fmap = []
    for k, v in enumerate(values):
        if v in (1, -1):
            fmap.append(k)
        elif k < 2 * I + 1:  # base chain
            if v < 0:
                i = (v.denominator)  # v = -(i-1)/i
                fmap.append(pos[-Fraction(i - 2, i - 1)])
            else:
                i = v.denominator if v else 1  # v = (i-1)/i
                nxt = Fraction(i, i + 1) if i < I else Fraction(1)
                fmap.append(pos[nxt])
        else:
            j = k - (2 * I + 1)
            m, i = j // (I - 1) + 1, j % (I - 1) + 1
            fmap.append(pos[Fraction(0)] if i == 1 else pos[strip_point(m, i - 1)])
    labels = tuple(str(v) for v in values)
    space = FiniteMetricSpace(labels, tuple(tuple(abs(a - b) for b in values) for a in values))
    sys = FiniteSystem(space, tuple(fmap))

    exps = [
        Expectation("point_count", {}, 2 * I + 1 + M * (I - 1), DERIVED),
        Expectation("eventual_image", {}, ["-1", "1"], DERIVED),
        Expectation("bi_asymptotically_c_expansive", {"c": "1/5"}, True, CLAIMED),
    ]
    for k in range(1, M + 1):
        c = Fraction(1, 2 ** (k + 1))
        y0 = str(Fraction(-1, 2) + c)
        exps.append(Expectation("windowed_pair",
                                {"c": str(c), "L": I - 2, "x": "-1/2", "y": y0},
                                True, CLAIMED))
        exps.append(Expectation("windowed_pair",
                                {"c": str(c), "L": I - 1, "x": "-1/2", "y": y0},
                                False, DERIVED))
    return GalleryItem("example_4_6", sys, {"I": I, "M": M}, tuple(exps),
                       {"truncation": f"(I-1)/I mapped to 1; chains cut at depth {I}"})


# -- N-expansive extension of periodic orbits of the 2-shift -------------------------

def _block_sequence(k: int, shift: int) -> Callable[[int], int]:
    """Coordinates of ``sigma^shift((0^{k-1} 1)^∞)``."""
    return lambda i: 1 if (i + shift) % k == k - 1 else 0


def shift_distance(k1: int, j1: int, k2: int, j2: int) -> Fraction:
    """``2^{-min{|i| : s_i != t_i}}`` for two shifted periodic block sequences."""
    if (k1, j1 % k1) == (k2, j2 % k2):
        return Fraction(0)
    s, t = _block_sequence(k1, j1), _block_sequence(k2, j2)
    horizon = k1 * k2 // math.gcd(k1, k2) + 1
    for r in range(horizon + 1):
        if s(r) != t(r) or s(-r) != t(-r):
            return Fraction(1, 2 ** r)
    raise AssertionError("distinct periodic sequences must differ within one period")


def n_expansive_family(K: int = 3, N: int = 3) -> GalleryItem:
    """Periodic orbits ``(0^{k-1}1)^∞``, ``k = 2..K+1``, each with ``N-1`` copies.

    The copy ``q(i, k, j)`` rides along ``sigma^j(p_k)`` at constant distance
    ``1/k``, so at ``c = 1/2`` every point of the ``k = 2`` and ``k = 3``
    orbits has exactly ``N`` companions in its dynamical ball.
    """
    if K < 2 or N < 2:
        raise ParameterError("need K >= 2 and N >= 2")
    base = [(k, j) for k in range(2, K + 2) for j in range(k)]
    copies = [(i, k, j) for i in range(1, N) for k in range(2, K + 2) for j in range(k)]
    labels = [f"g^{j}p_{k}" for k, j in base] + [f"q({i},{k},{j})" for i, k, j in copies]
    nb = len(base)

    def d(a, b):
        if a == b:
            return Fraction(0)
        if a < nb and b < nb:
            return shift_distance(*base[a], *base[b])
        if a >= nb and b < nb:
            _, k, j = copies[a - nb]
            return Fraction(1, k) + shift_distance(k, j, *base[b])
        if a < nb:
            return d(b, a)
        i, k, j = copies[a - nb]
        l, m, r = copies[b - nb]
        if (k, j) == (m, r):
            return Fraction(1, k)
        # covers i != l as well, which the case list leaves open
        return Fraction(1, k) + Fraction(1, m) + shift_distance(k, j, m, r)

    n = len(labels)
    space = FiniteMetricSpace(tuple(labels), tuple(tuple(d(a, b) for b in range(n)) for a in range(n)))
    index = {lab: t for t, lab in enumerate(labels)}
    fmap = [index[f"g^{(j + 1) % k}p_{k}"] for k, j in base]
    fmap += [index[f"q({i},{k},{(j + 1) % k})"] for i, k, j in copies]
    sys = FiniteSystem(space, tuple(fmap))

    exps = [Expectation("metric_valid", {}, True, DERIVED)]
    if N >= 3:
        for k in range(2, K + 2):
            exps.append(Expectation("constant_pair_distance",
                                    {"x": f"q(1,{k},0)", "y": f"q(2,{k},0)", "steps": 2 * k},
                                    str(Fraction(1, k)), CLAIMED))
    exps += [
        Expectation("gamma_size", {"x": "q(1,2,0)", "c": "1/2"}, N, CLAIMED),
        Expectation("N_expansive", {"c": "1/2", "N": N}, True, CLAIMED),
        Expectation("N_expansive", {"c": "1/2", "N": N - 1}, False, CLAIMED),
        Expectation("bi_asymptotically_c_expansive", {"c": "1/2"}, False, CLAIMED),
    ]
    meta = {"base_orbits": "p_k = (0^(k-1) 1)^inf in the full 2-shift, k = 2..K+1",
            "metric_gap": "q(i,k,j) vs q(l,m,r) with i != l and (k,j) != (m,r) uses 1/k + 1/m + d0"}
    return GalleryItem("example_4_9", sys, {"K": K, "N": N}, tuple(exps), meta)


# -- exact orbit profile on the planar ladder ------------------------------------

def ladder_point(i: int, m: int) -> tuple[int, float]:
    """Point ``m`` of rung ``i``: ``(m, e^{-m+1/i} + 1/i)``, rung 0 is ``(m, e^{-m})``."""
    if i == 0:
        return m, math.exp(-m)
    return m, math.exp(-m + 1 / i) + 1 / i


def example_3_1_profile(k: int, p: int, M: int, n_max: int) -> list[float]:
    """``d(g^n(x), g^n(y))`` for ``n = 0..n_max``, where ``x, y`` are the
    rung-``k`` and rung-``p`` points at column ``1 + M``.

    The shift ``g`` only increments the column, so both orbits are evaluated
    in closed form.
    """
    if not 1 <= k < p:
        raise ParameterError(f"need 1 <= k < p, got k={k}, p={p}")
    if M < 0 or n_max < 0:
        raise ParameterError("M and n_max must be nonnegative")
    out = []
    for n in range(n_max + 1):
        col = 1 + M + n
        (_, a), (_, b) = ladder_point(k, col), ladder_point(p, col)
        out.append(abs(a - b))
    return out


def example_3_1_horizon(k: int, p: int, epsilon: float) -> int:
    """Smallest ``M >= 1`` after which the two orbits stay closer than ``epsilon``.

    Requires ``1/k - 1/p < epsilon/3`` and picks ``M`` with both exponential
    offsets ``e^{-(1+M)+1/k}``, ``e^{-(1+M)+1/p}`` below ``epsilon/3``.
    """
    if not 1 <= k < p:
        raise ParameterError(f"need 1 <= k < p, got k={k}, p={p}")
    if not 1 / k - 1 / p < epsilon / 3:
        raise ParameterError("rungs too far apart for this epsilon")
    M = 1
    while max(math.exp(-(1 + M) + 1 / k), math.exp(-(1 + M) + 1 / p)) >= epsilon / 3:
        M += 1
    return M


# -- vertex shifts ------------------------------------------------------------------

@dataclass(frozen=True)
class ShiftComponent:
    vertices: tuple[int, ...]
    period: int
    mixing: bool


@dataclass(frozen=True)
class ShiftDecomposition:
    core: tuple[int, ...]
    components: tuple[ShiftComponent, ...]


def _is_primitive(block: np.ndarray) -> bool:
    """Some boolean power is entrywise positive (Wielandt: power <= (s-1)^2 + 1)."""
    s = block.shape[0]
    A = block.astype(bool)
    P = A.copy()
    for _ in range((s - 1) ** 2 + 1):
        if P.all():
            return True
        P = (P.astype(np.int64) @ A.astype(np.int64)) > 0
    return bool(P.all())


def sft_decompose(adjacency) -> ShiftDecomposition:
    """Irreducible pieces of a vertex shift with their periods and mixing verdicts.

    Vertices with no incoming or no outgoing edge carry no bi-infinite path;
    they are pruned (with a warning) before the analysis.
    """
    A = np.asarray(adjacency, dtype=np.int64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ParameterError("adjacency must be a square matrix")
    if not np.isin(A, (0, 1)).all():
        raise ParameterError("adjacency must be 0/1")
    alive = np.ones(A.shape[0], dtype=bool)
    if (A.sum(axis=1) == 0).any() or (A.sum(axis=0) == 0).any():
        warnings.warn("zero row or column: shift is not surjective; "
                      "analysing the essential core", stacklevel=2)
    while True:
        sub = A[np.ix_(alive, alive)]
        keep = (sub.sum(axis=1) > 0) & (sub.sum(axis=0) > 0)
        if keep.all():
            break
        idx = np.flatnonzero(alive)
        alive[idx[~keep]] = False
    core = tuple(int(v) for v in np.flatnonzero(alive))
    succ = [[int(w) for w in np.flatnonzero(A[v]) if alive[w]] if alive[v] else []
            for v in range(A.shape[0])]
    comps = []
    for comp in graphs.strongly_connected_components(succ, core):
        if not graphs.has_cycle_through(succ, comp):
            continue
        per = graphs.period(succ, comp)
        block = A[np.ix_(comp, comp)]
        comps.append(ShiftComponent(tuple(comp), per, _is_primitive(block)))
    comps.sort(key=lambda c: c.vertices[0])
    return ShiftDecomposition(core, tuple(comps))


def functional_adjacency(sys: FiniteSystem) -> np.ndarray:
    A = np.zeros((len(sys), len(sys)), dtype=np.int64)
    for x, y in enumerate(sys.fmap):
        A[x, y] = 1
    return A


# -- random inputs ------------------------------------------------------------------

def _random_space(n: int, rng: random.Random) -> FiniteMetricSpace:
    coords = [(rng.random(), rng.random()) for _ in range(n)]
    return FiniteMetricSpace.from_coords([f"x{i}" for i in range(n)], coords)


def random_system(n: int, seed: int) -> FiniteSystem:
    if n < 1:
        raise ParameterError("n must be positive")
    rng = random.Random(seed)
    space = _random_space(n, rng)
    return FiniteSystem(space, tuple(rng.randrange(n) for _ in range(n)))


def random_bijection(n: int, seed: int) -> FiniteSystem:
    if n < 1:
        raise ParameterError("n must be positive")
    rng = random.Random(seed)
    space = _random_space(n, rng)
    perm = list(range(n))
    rng.shuffle(perm)
    return FiniteSystem(space, tuple(perm))


def _random_item(n: int = 6, seed: int = 0) -> GalleryItem:
    sys = random_system(n, seed)
    return GalleryItem("random", sys, {"n": n, "seed": seed},
                       (Expectation("metric_valid", {}, True, TRIVIAL),))


def _random_bijection_item(n: int = 6, seed: int = 0) -> GalleryItem:
    sys = random_bijection(n, seed)
    return GalleryItem("random_bijection", sys, {"n": n, "seed": seed},
                       (Expectation("metric_valid", {}, True, TRIVIAL),))


@dataclass(frozen=True)
class GalleryEntry:
    builder: Callable[..., GalleryItem]
    defaults: dict
    description: str


REGISTRY: dict[str, GalleryEntry] = {
    "s2": GalleryEntry(merge_system, {}, "two points, a -> b -> b"),
    "s3": GalleryEntry(three_cycle, {}, "3-cycle under the uniform metric"),
    "identity2": GalleryEntry(identity_pair, {}, "identity on two points at distance 1"),
    "example_4_5": GalleryEntry(square_map, {"N": 4}, "x^2 on the grid {k/N}"),
    "example_4_6": GalleryEntry(escaping_chains, {"I": 6, "M": 4},
                                "two-sided chains accumulating at -1 and 1"),
    "example_4_9": GalleryEntry(n_expansive_family, {"K": 3, "N": 3},
                                "N-expansive extension of 2-shift periodic orbits"),
    "random": GalleryEntry(_random_item, {"n": 6, "seed": 0}, "seeded random map"),
    "random_bijection": GalleryEntry(_random_bijection_item, {"n": 6, "seed": 0},
                                     "seeded random permutation"),
}


def build(name: str, **params) -> GalleryItem:
    try:
        entry = REGISTRY[name]
    except KeyError:
        raise ParameterError(f"unknown gallery item {name!r}") from None
    unknown = set(params) - set(entry.defaults)
    if unknown:
        raise ParameterError(f"{name} does not take parameters {sorted(unknown)}")
    kwargs = {**entry.defaults, **params}
    return entry.builder(**kwargs)
