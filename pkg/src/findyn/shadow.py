"""Pseudo-orbits and shadowing decisions at a fixed pair ``(delta, epsilon)``.

Forward shadowing over *all* infinite delta-pseudo-orbits is decided by a
subset construction: a state is the current pseudo-orbit point together with
the set of current positions of every candidate tracer.  Shadowing fails
exactly when some reachable state has no tracer left; the path to it is an
explicit counterexample.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence

from .chain import build_chain_graph
from .errors import ParameterError, PreconditionError, ResourceError
from .invlimit import eventual_image
from .space import FiniteSystem, Number, as_number


@dataclass(frozen=True)
class PseudoOrbit:
    points: tuple[int, ...]
    delta: Number
    periodic: bool = False

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "delta", as_number(self.delta))


class PseudoOrbitCheck(NamedTuple):
    ok: bool
    violation: int | None


class ShadowingResult(NamedTuple):
    holds: bool
    counterexample: tuple[int, ...] | None
    states: int

    def to_dict(self, delta, epsilon) -> dict:
        def num(v):
            return str(v) if isinstance(v, Fraction) else v
        return {
            "delta": num(delta),
            "epsilon": num(epsilon),
            "forward_shadowing": self.holds,
            "counterexample": list(self.counterexample) if self.counterexample else None,
        }


def _nonneg(name, value) -> Number:
    v = as_number(value)
    if v < 0:
        raise ParameterError(f"{name} must be nonnegative, got {v}")
    return v


def is_pseudo_orbit(sys: FiniteSystem, seq: Sequence[int], delta,
                    periodic: bool = False) -> PseudoOrbitCheck:
    """Check ``d(f(x_t), x_{t+1}) <= delta``; reports the first bad ``t``."""
    delta = _nonneg("delta", delta)
    seq = list(seq)
    steps = len(seq) if periodic else len(seq) - 1
    for t in range(max(steps, 0)):
        if sys.d(sys.fmap[seq[t]], seq[(t + 1) % len(seq)]) > delta:
            return PseudoOrbitCheck(False, t)
    return PseudoOrbitCheck(True, None)


def check_finite_tracing(sys: FiniteSystem, pseudo, epsilon) -> frozenset[int]:
    """All ``y`` with ``d(f^t(y), x_t) <= epsilon`` along the whole finite sequence."""
    epsilon = _nonneg("epsilon", epsilon)
    points = pseudo.points if isinstance(pseudo, PseudoOrbit) else tuple(pseudo)
    if isinstance(pseudo, PseudoOrbit) and pseudo.periodic:
        raise PreconditionError("finite tracing expects a non-periodic sequence")
    out = set()
    for y in range(len(sys)):
        z = y
        for x in points:
            if sys.d(z, x) > epsilon:
                break
            z = sys.fmap[z]
        else:
            out.add(y)
    return frozenset(out)


def check_forward_shadowing_exact(sys: FiniteSystem, delta, epsilon,
                                  max_states: int = 2_000_000) -> ShadowingResult:
    """Does every infinite delta-pseudo-orbit admit an epsilon-tracing point?

    Breadth-first over states ``(v, T)``; the first empty ``T`` found gives a
    shortest counterexample.  ``max_states`` bounds the explored state space.
    """
    delta = _nonneg("delta", delta)
    epsilon = _nonneg("epsilon", epsilon)
    n = len(sys)
    dist = sys.space.dist
    f = sys.fmap
    succ = build_chain_graph(sys, delta).successors
    near = [frozenset(y for y in range(n) if dist[y][v] <= epsilon) for v in range(n)]

    parent: dict[tuple[int, frozenset], tuple[int, frozenset] | None] = {}
    queue: deque = deque()
    for v in range(n):
        st = (v, near[v])
        if st not in parent:
            parent[st] = None
            queue.append(st)
    while queue:
        st = queue.popleft()
        v, T = st
        if not T:
            path = []
            cur = st
            while cur is not None:
                path.append(cur[0])
                cur = parent[cur]
            return ShadowingResult(False, tuple(reversed(path)), len(parent))
        images = {f[y] for y in T}
        for w in succ[v]:
            nxt = (w, frozenset(images & near[w]))
            if nxt not in parent:
                parent[nxt] = st
                if len(parent) > max_states:
                    raise ResourceError(
                        f"subset construction exceeded {max_states} states")
                queue.append(nxt)
    return ShadowingResult(True, None, len(parent))


def check_periodic_biinfinite_tracing(sys: FiniteSystem, pseudo: PseudoOrbit, epsilon) -> bool:
    """Is there a full orbit within ``epsilon`` of the periodic sequence at every time?

    Works on the product of the cyclic phase counter with the map on the
    eventual image, keeping states that have both a successor and a
    predecessor inside the surviving set.
    """
    if not pseudo.periodic:
        raise PreconditionError("bi-infinite tracing here needs a periodic pseudo-orbit")
    epsilon = _nonneg("epsilon", epsilon)
    pts = pseudo.points
    if not pts:
        raise PreconditionError("empty pseudo-orbit")
    period = len(pts)
    E = eventual_image(sys).points
    alive = {(t, y) for t in range(period) for y in E if sys.d(pts[t], y) <= epsilon}
    while True:
        nxt = {(t, y) for (t, y) in alive
               if ((t + 1) % period, sys.fmap[y]) in alive}
        has_pred = {((t + 1) % period, sys.fmap[y]) for (t, y) in nxt}
        nxt &= has_pred
        if nxt == alive:
            return bool(alive)
        alive = nxt


def count_pseudo_orbits(sys: FiniteSystem, delta, L: int) -> int:
    succ = build_chain_graph(sys, delta).successors
    if L <= 0:
        return 0
    ways = [1] * len(sys)
    for _ in range(L - 1):
        ways = [sum(ways[w] for w in succ[v]) for v in range(len(sys))]
    return sum(ways)


def enumerate_pseudo_orbits(sys: FiniteSystem, delta, L: int,
                            budget: int = 1_000_000) -> Iterator[tuple[int, ...]]:
    """Every delta-pseudo-orbit of length ``L`` in lexicographic order."""
    delta = _nonneg("delta", delta)
    total = count_pseudo_orbits(sys, delta, L)
    if total > budget:
        raise ResourceError(f"{total} pseudo-orbits of length {L} exceed budget {budget}")
    return _enumerate(build_chain_graph(sys, delta).successors, len(sys), L)


def _enumerate(succ, n, L):
    if L <= 0:
        return
    stack = [(v,) for v in reversed(range(n))]
    while stack:
        seq = stack.pop()
        if len(seq) == L:
            yield seq
            continue
        for w in reversed(succ[seq[-1]]):
            stack.append(seq + (w,))


def shadowing_sweep(sys: FiniteSystem, deltas, epsilons) -> list[tuple[Number, Number, bool]]:
    """Verdict grid, rows sorted by ``(delta, epsilon)``."""
    rows = []
    for d in sorted({as_number(x) for x in deltas}):
        for e in sorted({as_number(x) for x in epsilons}):
            rows.append((d, e, check_forward_shadowing_exact(sys, d, e).holds))
    return rows
