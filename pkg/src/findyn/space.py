"""Finite metric spaces, finite dynamical systems and the constructions on them.

Distances are stored exactly as :class:`fractions.Fraction` whenever they are
constructible that way; floats are accepted for user data.  Every threshold
comparison elsewhere in the package is a closed ``<=`` comparison, which is
exact for fractions (Python compares ``Fraction`` against ``float`` exactly too).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Callable, Iterable, NamedTuple, Sequence

from .errors import InputFormatError, InvarianceError, ParameterError

Number = Fraction | float


def as_number(value) -> Number:
    """Coerce ints, fractions and ``"p/q"`` strings to Fraction, keep floats."""
    if isinstance(value, bool):
        raise InputFormatError(f"boolean is not a distance: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InputFormatError(f"non-finite distance {value!r}")
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputFormatError(f"cannot parse number {value!r}") from exc
    if isinstance(value, Real):
        return float(value)
    raise InputFormatError(f"unsupported number type {type(value).__name__}")


def exact_sqrt(value: Fraction) -> Number:
    """Square root of a nonnegative fraction, exact when it is a rational square."""
    if value < 0:
        raise ParameterError(f"negative square {value}")
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return math.sqrt(num / den)


@dataclass(frozen=True)
class FiniteMetricSpace:
    """Labeled points with a full pairwise distance table.

    The constructor checks shape only; use :func:`validate_metric` for the
    metric axioms.
    """

    labels: tuple[str, ...]
    dist: tuple[tuple[Number, ...], ...]

    def __post_init__(self):
        labels = tuple(str(lab) for lab in self.labels)
        n = len(labels)
        if len(set(labels)) != n:
            raise InputFormatError("point labels must be unique")
        rows = tuple(self.dist)
        if len(rows) != n:
            raise InputFormatError(
                f"distance table has {len(rows)} rows for {n} labels")
        table = []
        for i, row in enumerate(rows):
            row = tuple(row)
            if len(row) != n:
                raise InputFormatError(
                    f"distance row {i} has {len(row)} entries, expected {n}")
            table.append(tuple(as_number(v) for v in row))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dist", tuple(table))

    def __len__(self):
        return len(self.labels)

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Fraction) for row in self.dist for v in row)

    def d(self, i: int, j: int) -> Number:
        return self.dist[i][j]

    def diameter(self) -> Number:
        return max((v for row in self.dist for v in row), default=Fraction(0))

    def distance_values(self) -> list[Number]:
        """Sorted distinct values occurring in the table (0 included)."""
        return sorted({v for row in self.dist for v in row})

    def ball(self, i: int, radius) -> frozenset[int]:
        """Open ball ``{j : d(i, j) < radius}``."""
        return frozenset(j for j, v in enumerate(self.dist[i]) if v < radius)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    @classmethod
    def from_coords(cls, labels: Sequence[str],
                    coords: Sequence[Sequence]) -> "FiniteMetricSpace":
        """Euclidean distances between points given by coordinates.

        Rational coordinates give exact distances whenever the squared
        distance is a rational square, floats otherwise.
        """
        pts = [tuple(as_number(c) for c in p) for p in coords]
        if len(pts) != len(labels):
            raise InputFormatError(
                f"{len(pts)} coordinate rows for {len(labels)} labels")
        if pts and len({len(p) for p in pts}) != 1:
            raise InputFormatError("coordinate rows differ in dimension")
        n = len(pts)
        table = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                sq = sum((a - b) ** 2 for a, b in zip(pts[i], pts[j]))
                if isinstance(sq, Fraction):
                    v = exact_sqrt(sq)
                else:
                    v = math.sqrt(sq)
                table[i][j] = table[j][i] = v
        return cls(tuple(labels), tuple(tuple(r) for r in table))

    @classmethod
    def uniform(cls, labels: Sequence[str], value=1) -> "FiniteMetricSpace":
        """Discrete metric with every off-diagonal distance equal to ``value``."""
        v = as_number(value)
        n = len(labels)
        return cls(tuple(labels), tuple(
            tuple(Fraction(0) if i == j else v for j in range(n))
            for i in range(n)))


class Violation(NamedTuple):
    axiom: str
    indices: tuple[int, ...]


def validate_metric(space: FiniteMetricSpace, tol: float | None = None) -> list[Violation]:
    """Check the metric axioms by brute force over all pairs and triples.

    Returns an empty list iff every axiom holds.  ``tol`` only affects float
    entries; by default it is 0 for exact tables and ``1e-12 * diameter`` when
    floats are present.
    """
    n = len(space)
    dist = space.dist
    if tol is None:
        tol = 0 if space.exact else 1e-12 * float(space.diameter() or 1)
    if not tol:
        tol = Fraction(0)  # keep exact comparisons exact
    out = []
    for i in range(n):
        for j in range(n):
            v = dist[i][j]
            if v < 0:
                out.append(Violation("nonnegativity", (i, j)))
            if i == j and v != 0:
                out.append(Violation("identity", (i, j)))
            if i != j and v == 0:
                out.append(Violation("separation", (i, j)))
            if i < j and dist[j][i] != v:
                out.append(Violation("symmetry", (i, j)))
    for i in range(n):
        di = dist[i]
        for j in range(n):
            dij = di[j]
            dj = dist[j]
            for k in range(n):
                if di[k] > dij + dj[k] + tol:
                    out.append(Violation("triangle", (i, j, k)))
    return out


@dataclass(frozen=True)
class FiniteSystem:
    """A finite metric space with a total self-map given as an index table."""

    space: FiniteMetricSpace
    fmap: tuple[int, ...]
    bijective: bool = field(init=False, compare=False)

    def __post_init__(self):
        n = len(self.space)
        fmap = tuple(self.fmap)
        if len(fmap) != n:
            raise InputFormatError(f"map has {len(fmap)} entries for {n} points")
        for i, y in enumerate(fmap):
            if isinstance(y, bool) or not isinstance(y, int) or not 0 <= y < n:
                raise InputFormatError(f"map image of point {i} is out of range: {y!r}")
        object.__setattr__(self, "fmap", fmap)
        object.__setattr__(self, "bijective", len(set(fmap)) == n)

    def __len__(self):
        return len(self.fmap)

    @property
    def labels(self):
        return self.space.labels

    def d(self, i: int, j: int) -> Number:
        return self.space.dist[i][j]

    def iterate(self, x: int, k: int) -> int:
        for _ in range(k):
            x = self.fmap[x]
        return x

    def image(self, points: Iterable[int]) -> frozenset[int]:
        return frozenset(self.fmap[x] for x in points)

    def inverse(self) -> tuple[int, ...]:
        """Inverse permutation; only meaningful for bijective systems."""
        inv = [0] * len(self.fmap)
        for x, y in enumerate(self.fmap):
            inv[y] = x
        return tuple(inv)

    def preimages(self) -> list[list[int]]:
        pre: list[list[int]] = [[] for _ in self.fmap]
        for x, y in enumerate(self.fmap):
            pre[y].append(x)
        return pre


@dataclass(frozen=True)
class OrbitSegment:
    """A finite window of a true orbit; ``points[origin_offset]`` is time 0."""

    points: tuple[int, ...]
    origin_offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not 0 <= self.origin_offset < max(len(self.points), 1):
            raise InputFormatError("origin_offset outside the segment")

    def at(self, t: int) -> int:
        return self.points[self.origin_offset + t]

    @property
    def first_time(self) -> int:
        return -self.origin_offset

    @property
    def last_time(self) -> int:
        return len(self.points) - 1 - self.origin_offset

    def is_consistent(self, sys: FiniteSystem) -> bool:
        return all(sys.fmap[a] == b for a, b in zip(self.points, self.points[1:]))

    @classmethod
    def forward(cls, sys: FiniteSystem, x: int, length: int) -> "OrbitSegment":
        pts = [x]
        for _ in range(length - 1):
            pts.append(sys.fmap[pts[-1]])
        return cls(tuple(pts), 0)


def build_system(space: FiniteMetricSpace, fmap: Sequence[int]) -> FiniteSystem:
    return FiniteSystem(space, tuple(fmap))


def grid_space(n_intervals: int) -> FiniteMetricSpace:
    """The uniform grid ``{0, 1/N, ..., 1}`` with exact Euclidean distances."""
    if n_intervals < 1:
        raise ParameterError("grid needs N >= 1")
    pts = [Fraction(k, n_intervals) for k in range(n_intervals + 1)]
    labels = tuple(str(p) for p in pts)
    return FiniteMetricSpace(labels, tuple(tuple(abs(a - b) for b in pts) for a in pts))


def discretize_interval_map(samples: Sequence) -> FiniteSystem:
    """Round sampled values of an interval map to the nearest grid point.

    ``samples[k]`` is the map's value at ``k/N`` where ``N = len(samples) - 1``.
    Ties go to the lower grid index.
    """
    n_int = len(samples) - 1
    if n_int < 1:
        raise ParameterError("need at least two samples (N >= 1)")
    fmap = []
    for k, raw in enumerate(samples):
        v = as_number(raw)
        if not 0 <= v <= 1:
            raise ParameterError(f"sample {k} = {v} lies outside [0, 1]")
        scaled = v * n_int
        lo = math.floor(scaled)
        # tie (frac == 1/2) rounds down
        fmap.append(lo + 1 if scaled - lo > Fraction(1, 2) else lo)
    return FiniteSystem(grid_space(n_int), tuple(fmap))


def discretize_function(func: Callable, n_intervals: int) -> FiniteSystem:
    """Sample ``func`` at the exact grid points ``k/N`` and discretize."""
    return discretize_interval_map(
        [func(Fraction(k, n_intervals)) for k in range(n_intervals + 1)])


def restrict(sys: FiniteSystem, subset: Iterable[int], strict: bool = True) -> FiniteSystem:
    """Subsystem on an invariant subset with the induced metric.

    New index ``i`` corresponds to ``sorted(subset)[i]``.  With ``strict`` the
    subset must satisfy ``f(B) = B``; otherwise ``f(B) ⊆ B`` suffices.
    """
    members = sorted(set(subset))
    pos = {x: i for i, x in enumerate(members)}
    for x in members:
        if not 0 <= x < len(sys):
            raise InputFormatError(f"index {x} out of range")
        if sys.fmap[x] not in pos:
            raise InvarianceError(
                f"point {sys.labels[x]!r} escapes: f maps it to "
                f"{sys.labels[sys.fmap[x]]!r} outside the subset")
    if strict:
        hit = sys.image(members)
        for x in members:
            if x not in hit:
                raise InvarianceError(
                    f"point {sys.labels[x]!r} has no preimage inside the subset")
    space = FiniteMetricSpace(
        tuple(sys.labels[x] for x in members),
        tuple(tuple(sys.d(x, y) for y in members) for x in members))
    return FiniteSystem(space, tuple(pos[sys.fmap[x]] for x in members))


def power(sys: FiniteSystem, k: int) -> FiniteSystem:
    if k < 1:
        raise ParameterError(f"power needs k >= 1, got {k}")
    return FiniteSystem(sys.space, tuple(sys.iterate(x, k) for x in range(len(sys))))


def product(a: FiniteSystem, b: FiniteSystem) -> FiniteSystem:
    """Product system under the max metric; pair ``(i, j)`` has index ``i*|b| + j``."""
    na, nb = len(a), len(b)
    labels = tuple(f"({la},{lb})" for la in a.labels for lb in b.labels)
    dist = tuple(
        tuple(max(a.d(i1, i2), b.d(j1, j2)) for i2 in range(na) for j2 in range(nb))
        for i1 in range(na) for j1 in range(nb))
    fmap = tuple(a.fmap[i] * nb + b.fmap[j] for i in range(na) for j in range(nb))
    return FiniteSystem(FiniteMetricSpace(labels, dist), fmap)


def conjugate(sys: FiniteSystem, h: Sequence[int],
              target: FiniteMetricSpace | None = None) -> FiniteSystem:
    """Transport ``sys`` along the bijection ``h`` (source index -> target index).

    Without ``target`` the metric is carried along, so ``h`` acts as an
    isometric relabeling.
    """
    n = len(sys)
    h = tuple(h)
    if len(h) != n or sorted(h) != list(range(n)):
        raise ParameterError("h must be a bijection of the index range")
    hinv = [0] * n
    for i, j in enumerate(h):
        hinv[j] = i
    if target is None:
        target = FiniteMetricSpace(
            tuple(sys.labels[hinv[j]] for j in range(n)),
            tuple(tuple(sys.d(hinv[a], hinv[b]) for b in range(n)) for a in range(n)))
    elif len(target) != n:
        raise ParameterError("target space has a different number of points")
    return FiniteSystem(target, tuple(h[sys.fmap[hinv[j]]] for j in range(n)))


def periodic_points(sys: FiniteSystem) -> dict[int, int]:
    """Map each periodic point to its least period."""
    n = len(sys)
    state = [0] * n  # 0 unseen, 1 on current path, 2 done
    periods: dict[int, int] = {}
    for start in range(n):
        path = []
        x = start
        while state[x] == 0:
            state[x] = 1
            path.append(x)
            x = sys.fmap[x]
        if state[x] == 1:
            cycle = path[path.index(x):]
            for y in cycle:
                periods[y] = len(cycle)
        for y in path:
            state[y] = 2
    return dict(sorted(periods.items()))


def fixed_points(sys: FiniteSystem) -> frozenset[int]:
    return frozenset(x for x, y in enumerate(sys.fmap) if x == y)


def omega_limit(sys: FiniteSystem, x: int) -> frozenset[int]:
    """The cycle the forward orbit of ``x`` eventually enters."""
    seen = {}
    t = 0
    while x not in seen:
        seen[x] = t
        x = sys.fmap[x]
        t += 1
    cycle = {x}
    y = sys.fmap[x]
    while y != x:
        cycle.add(y)
        y = sys.fmap[y]
    return frozenset(cycle)
