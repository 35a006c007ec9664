"""Inverse-limit semantics and expansivity decisions on finite systems.

Full orbits of a finite map are the bi-infinite walks of its functional graph
inside the eventual image ``E = ∩ f^n(X)``.  Every expansivity notion reduces
to invariant sets of the pair map ``F(x, y) = (f(x), f(y))`` restricted to the
pairs at distance ``<= c``.

Distances take finitely many values, so ``lim d = 0`` is the same as
"eventually equal"; every checker here uses that reading.

Why periodic pairs decide the bi-asymptotic property
----------------------------------------------------
Suppose two full orbits stay within ``c`` for all ``n >= 0``.  Their pair orbit
is eventually periodic, so it ends in an ``F``-cycle within ``c``; the
distance tends to 0 iff that cycle lies on the diagonal.  Backwards, an
infinite backward pair path within ``c`` visits some pair twice, and any pair
visited twice is ``F``-periodic with its whole cycle within ``c``; past the
last visit to the finitely-visited pairs the path only meets such periodic
pairs.  Conversely an off-diagonal periodic pair within ``c`` is itself a
violating pair of full orbits in both time directions.  Hence both clauses
hold iff every ``F``-periodic pair whose orbit stays within ``c`` is
diagonal.  :func:`bi_asymptotic_direct` recomputes the two clauses
separately as a cross-check.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from . import graphs
from .errors import CapabilityError, ParameterError, PreconditionError
from .space import FiniteSystem, Number, OrbitSegment, as_number, periodic_points

TWO_SIDED = "two_sided"
FORWARD = "forward"
PERIODIC = "periodic"
WINDOWED = "windowed"


@dataclass(frozen=True)
class EventualImage:
    points: frozenset[int]


@dataclass(frozen=True)
class PairInvariantSet:
    threshold: Number
    kind: str
    pairs: frozenset[tuple[int, int]]
    window: int | None = None

    def off_diagonal(self) -> list[tuple[int, int]]:
        return sorted((x, y) for x, y in self.pairs if x != y)

    def is_diagonal(self) -> bool:
        return all(x == y for x, y in self.pairs)

    def row(self, x: int) -> frozenset[int]:
        return frozenset(b for a, b in self.pairs if a == x)


def eventual_image(sys: FiniteSystem) -> EventualImage:
    current = frozenset(range(len(sys)))
    while True:
        nxt = sys.image(current)
        if nxt == current:
            return EventualImage(current)
        current = nxt


def _threshold(c) -> Number:
    c = as_number(c)
    if c < 0:
        raise ParameterError(f"threshold must be nonnegative, got {c}")
    return c


def _pair_map(sys: FiniteSystem):
    n = len(sys)
    f = sys.fmap
    return [f[p // n] * n + f[p % n] for p in range(n * n)]


def _allowed(sys: FiniteSystem, c) -> list[bool]:
    n = len(sys)
    dist = sys.space.dist
    return [dist[p // n][p % n] <= c for p in range(n * n)]


def _forward_pairs(sys: FiniteSystem, c, allowed=None, pmap=None) -> set[int]:
    """Pairs whose whole forward ``F``-orbit stays in the allowed set."""
    n = len(sys)
    allowed = allowed if allowed is not None else _allowed(sys, c)
    pmap = pmap if pmap is not None else _pair_map(sys)
    status = [0] * (n * n)  # 0 unknown, 1 good, 2 bad, 3 on current path
    for start in range(n * n):
        if status[start]:
            continue
        path = []
        p = start
        while status[p] == 0:
            if not allowed[p]:
                status[p] = 2
                break
            status[p] = 3
            path.append(p)
            p = pmap[p]
        # reached a pair already resolved, a disallowed pair, or our own path
        verdict = 1 if status[p] in (1, 3) else 2
        for q in path:
            status[q] = verdict
    return {p for p in range(n * n) if status[p] == 1}


def _periodic_pairs(sys: FiniteSystem, c) -> set[int]:
    """``F``-periodic pairs whose entire cycle is within ``c``."""
    n = len(sys)
    per = periodic_points(sys)
    dist = sys.space.dist
    pmap = _pair_map(sys)
    out: set[int] = set()
    seen: set[int] = set()
    for x in per:
        for y in per:
            p = x * n + y
            if p in seen:
                continue
            cycle = [p]
            q = pmap[p]
            while q != p:
                cycle.append(q)
                q = pmap[q]
            seen.update(cycle)
            if all(dist[r // n][r % n] <= c for r in cycle):
                out.update(cycle)
    return out


def _two_sided_pairs(sys: FiniteSystem, c) -> set[int]:
    """Pairs in E×E within ``c`` lying on a bi-infinite ``F``-path within ``c``.

    Iterated pruning: drop pairs whose image left the set or that lost their
    last predecessor inside the set.
    """
    n = len(sys)
    E = eventual_image(sys).points
    allowed = _allowed(sys, c)
    pmap = _pair_map(sys)
    alive = {x * n + y for x in E for y in E if allowed[x * n + y]}
    npred = dict.fromkeys(alive, 0)
    preds: dict[int, list[int]] = {p: [] for p in alive}
    for p in alive:
        q = pmap[p]
        if q in alive:
            npred[q] += 1
            preds[q].append(p)
    queue = deque(p for p in alive if pmap[p] not in alive or npred[p] == 0)
    dead: set[int] = set()
    while queue:
        p = queue.popleft()
        if p in dead:
            continue
        dead.add(p)
        q = pmap[p]
        if q in alive and q not in dead:
            npred[q] -= 1
            if npred[q] == 0:
                queue.append(q)
        for r in preds[p]:
            if r not in dead:
                queue.append(r)
    return alive - dead


def _windowed_pairs(sys: FiniteSystem, c, window: int) -> set[int]:
    """Time-0 pairs of orbit windows ``-L..L`` staying within ``c``.

    Forward half is deterministic; the backward half is a layered search over
    ``F``-preimages (all branches, depth ``L``).
    """
    n = len(sys)
    allowed = _allowed(sys, c)
    pmap = _pair_map(sys)
    layer = {p for p in range(n * n) if allowed[p]}
    for _ in range(window):
        layer = {pmap[q] for q in layer if allowed[pmap[q]]}
    out = set()
    for p in layer:
        q = p
        ok = True
        for _ in range(window):
            q = pmap[q]
            if not allowed[q]:
                ok = False
                break
        if ok:
            out.add(p)
    return out


def pair_invariant_set(sys: FiniteSystem, c, kind: str = TWO_SIDED,
                       window: int | None = None) -> PairInvariantSet:
    c = _threshold(c)
    n = len(sys)
    if kind == FORWARD:
        raw = _forward_pairs(sys, c)
    elif kind == TWO_SIDED:
        raw = _two_sided_pairs(sys, c)
    elif kind == PERIODIC:
        raw = _periodic_pairs(sys, c)
    elif kind == WINDOWED:
        if window is None or window < 0:
            raise ParameterError("windowed pair sets need a window L >= 0")
        raw = _windowed_pairs(sys, c, window)
    else:
        raise ParameterError(f"unknown pair-set kind {kind!r}")
    return PairInvariantSet(c, kind, frozenset((p // n, p % n) for p in raw),
                            window if kind == WINDOWED else None)


def window_invariant_pairs(sys: FiniteSystem, c, L: int) -> PairInvariantSet:
    return pair_invariant_set(sys, c, WINDOWED, L)


def _eventual_cycle(pmap, p) -> list[int]:
    seen = {}
    while p not in seen:
        seen[p] = len(seen)
        p = pmap[p]
    cyc = [p]
    q = pmap[p]
    while q != p:
        cyc.append(q)
        q = pmap[q]
    return cyc


def _decode(n, cycle):
    return [(p // n, p % n) for p in cycle]


# -- individual verdicts; each returns (holds, witness-or-None) ---------------

def positively_expansive(sys: FiniteSystem, c):
    fwd = pair_invariant_set(sys, c, FORWARD)
    bad = fwd.off_diagonal()
    return (not bad, None if not bad else {"pair": list(bad[0])})


def c_expansive(sys: FiniteSystem, c):
    two = pair_invariant_set(sys, c, TWO_SIDED)
    bad = two.off_diagonal()
    if not bad:
        return True, None
    n = len(sys)
    cyc = _eventual_cycle(_pair_map(sys), bad[0][0] * n + bad[0][1])
    return False, {"pair": list(bad[0]), "cycle": [list(p) for p in _decode(n, cyc)]}


def asymptotically_expansive(sys: FiniteSystem, c):
    c = _threshold(c)
    n = len(sys)
    pmap = _pair_map(sys)
    for p in sorted(_forward_pairs(sys, c, pmap=pmap)):
        cyc = _eventual_cycle(pmap, p)
        if any(q // n != q % n for q in cyc):
            return False, {"pair": [p // n, p % n],
                           "cycle": [list(q) for q in _decode(n, cyc)]}
    return True, None


def bi_asymptotically_c_expansive(sys: FiniteSystem, c):
    per = pair_invariant_set(sys, c, PERIODIC)
    bad = per.off_diagonal()
    if not bad:
        return True, None
    n = len(sys)
    cyc = _eventual_cycle(_pair_map(sys), bad[0][0] * n + bad[0][1])
    return False, {"pair": list(bad[0]), "cycle": [list(p) for p in _decode(n, cyc)]}


def bi_asymptotic_direct(sys: FiniteSystem, c) -> tuple[bool, bool]:
    """Forward and backward clauses evaluated separately, without the reduction.

    Forward: every pair of E×E whose forward orbit stays within ``c`` has a
    diagonal eventual cycle.  Backward: among pairs of E×E admitting an
    infinite backward path within ``c``, no off-diagonal pair sits on a cycle
    of that backward-path graph (otherwise the path could loop there forever).
    """
    c = _threshold(c)
    n = len(sys)
    E = eventual_image(sys).points
    pmap = _pair_map(sys)
    allowed = _allowed(sys, c)
    fwd_ok = True
    for p in _forward_pairs(sys, c, allowed, pmap):
        if p // n in E and p % n in E:
            if any(q // n != q % n for q in _eventual_cycle(pmap, p)):
                fwd_ok = False
                break
    # pairs with an infinite backward path: greatest set where each has a predecessor
    alive = {x * n + y for x in E for y in E if allowed[x * n + y]}
    changed = True
    while changed:
        has_pred = {pmap[p] for p in alive}
        nxt = alive & has_pred
        changed = nxt != alive
        alive = nxt
    succ = [[] for _ in range(n * n)]
    for p in alive:
        if pmap[p] in alive:
            succ[p].append(pmap[p])
    bwd_ok = True
    for comp in graphs.strongly_connected_components(succ, alive):
        if graphs.has_cycle_through(succ, comp) and any(q // n != q % n for q in comp):
            bwd_ok = False
            break
    return fwd_ok, bwd_ok


def expansive(sys: FiniteSystem, c):
    """Two-sided expansivity of a homeomorphism; equals c-expansivity there."""
    if not sys.bijective:
        raise CapabilityError("expansivity is defined for bijective systems only")
    return c_expansive(sys, c)


def weak_bi_asymptotic(sys: FiniteSystem, c):
    if not sys.bijective:
        raise CapabilityError("weak bi-asymptotic expansivity needs a bijective system")
    two = pair_invariant_set(sys, c, TWO_SIDED)
    f, g = sys.fmap, sys.inverse()
    for x, y in sorted(two.pairs):
        for step in (f, g):
            # deterministic tail in one time direction; eventual cycle decides
            seen = set()
            a, b = x, y
            while (a, b) not in seen:
                seen.add((a, b))
                a, b = step[a], step[b]
            start = (a, b)
            while True:
                if a != b:
                    return False, {"pair": [x, y]}
                a, b = step[a], step[b]
                if (a, b) == start:
                    break
    return True, None


def bi_asymptotically_expansive(sys: FiniteSystem, c) -> bool:
    """Homeomorphism case: both ``f`` and ``f^{-1}`` asymptotically expansive."""
    if not sys.bijective:
        raise CapabilityError("bi-asymptotic expansivity needs a bijective system")
    back = FiniteSystem(sys.space, sys.inverse())
    return asymptotically_expansive(sys, c)[0] and asymptotically_expansive(back, c)[0]


def gamma_set(sys: FiniteSystem, x: int, c) -> frozenset[int]:
    """Points whose full orbit stays within ``c`` of the orbit of ``x``."""
    if not sys.bijective:
        raise CapabilityError("Γ_c is defined for bijective systems only")
    return pair_invariant_set(sys, c, TWO_SIDED).row(x)


def max_gamma_size(sys: FiniteSystem, c) -> int:
    if not sys.bijective:
        raise CapabilityError("Γ_c is defined for bijective systems only")
    two = pair_invariant_set(sys, c, TWO_SIDED)
    sizes = [0] * len(sys)
    for x, _ in two.pairs:
        sizes[x] += 1
    return max(sizes, default=0)


def check_N_expansive(sys: FiniteSystem, c, N: int) -> bool:
    return max_gamma_size(sys, c) <= N


@dataclass(frozen=True)
class ExpansivityReport:
    c: Number
    positively_expansive: bool
    c_expansive: bool
    asymptotically_expansive: bool
    bi_asymptotically_c_expansive: bool
    expansive: bool | None
    weak_bi_asymptotic: bool | None
    N_expansive_min_N: int | None
    witnesses: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "c": str(self.c) if isinstance(self.c, Fraction) else self.c,
            "positively_expansive": self.positively_expansive,
            "c_expansive": self.c_expansive,
            "asymptotically_expansive": self.asymptotically_expansive,
            "bi_asymptotically_c_expansive": self.bi_asymptotically_c_expansive,
            "expansive": self.expansive,
            "weak_bi_asymptotic": self.weak_bi_asymptotic,
            "N_expansive_min_N": self.N_expansive_min_N,
            "witnesses": self.witnesses,
        }


def classify_expansivity(sys: FiniteSystem, c) -> ExpansivityReport:
    """All expansivity verdicts at threshold ``c``; false verdicts carry witnesses."""
    c = _threshold(c)
    if c == 0:
        raise ParameterError("expansivity constants must be positive")
    witnesses = {}
    results = {}
    checks = [("positively_expansive", positively_expansive),
              ("c_expansive", c_expansive),
              ("asymptotically_expansive", asymptotically_expansive),
              ("bi_asymptotically_c_expansive", bi_asymptotically_c_expansive)]
    if sys.bijective:
        checks += [("expansive", expansive), ("weak_bi_asymptotic", weak_bi_asymptotic)]
    for name, fn in checks:
        ok, wit = fn(sys, c)
        results[name] = ok
        if not ok:
            witnesses[name] = wit
    return ExpansivityReport(
        c=c,
        positively_expansive=results["positively_expansive"],
        c_expansive=results["c_expansive"],
        asymptotically_expansive=results["asymptotically_expansive"],
        bi_asymptotically_c_expansive=results["bi_asymptotically_c_expansive"],
        expansive=results.get("expansive"),
        weak_bi_asymptotic=results.get("weak_bi_asymptotic"),
        N_expansive_min_N=max_gamma_size(sys, c) if sys.bijective else None,
        witnesses=witnesses,
    )


# -- stable and unstable sets ---------------------------------------------------

def stable_set(sys: FiniteSystem, x: int) -> frozenset[int]:
    """Points whose forward orbit eventually coincides with that of ``x``."""
    n = len(sys)
    # orbits that merge do so within n steps
    orbits = list(range(n))
    target = x
    merged = {x}
    for _ in range(n):
        target = sys.fmap[target]
        orbits = [sys.fmap[z] for z in orbits]
        merged.update(y for y in range(n) if orbits[y] == target)
    return frozenset(merged)


def local_stable_set(sys: FiniteSystem, x: int, alpha) -> frozenset[int]:
    return pair_invariant_set(sys, alpha, FORWARD).row(x)


def _check_backward_orbit(sys: FiniteSystem, seg: OrbitSegment):
    if not seg.points:
        raise PreconditionError("empty backward orbit")
    if seg.last_time != 0:
        raise PreconditionError("backward orbit must end at time 0")
    if not seg.is_consistent(sys):
        raise PreconditionError("backward orbit is not a true orbit segment")
    E = eventual_image(sys).points
    if not set(seg.points) <= E:
        raise PreconditionError("backward orbit leaves the eventual image")


def local_unstable_set(sys: FiniteSystem, backward_orbit: OrbitSegment, alpha) -> frozenset[int]:
    """``y_0`` of full orbits staying within ``alpha`` of the segment at times ``-L..0``."""
    alpha = _threshold(alpha)
    _check_backward_orbit(sys, backward_orbit)
    E = eventual_image(sys).points
    pts = backward_orbit.points
    cur = {y for y in E if sys.d(pts[0], y) <= alpha}
    for x in pts[1:]:
        cur = {sys.fmap[y] for y in cur if sys.d(x, sys.fmap[y]) <= alpha}
    return frozenset(cur)


def unstable_set(sys: FiniteSystem, backward_orbit: OrbitSegment) -> frozenset[int]:
    """Always ``{x_0}``: backward eventual equality plus a deterministic forward map."""
    _check_backward_orbit(sys, backward_orbit)
    return frozenset({backward_orbit.at(0)})


@dataclass(frozen=True)
class HeteroclinicWitness:
    z: int
    backward_merge_depth: int
    forward_merge_depth: int


def heteroclinic_check(sys: FiniteSystem, p: int, backward_orbit: OrbitSegment,
                       y: int, delta) -> HeteroclinicWitness | None:
    """Search ``z`` in ``W^u((p_n)) ∩ W^s(y)``.

    The unstable set of a full orbit is ``{p}``, so the only candidate is
    ``z = p`` and the question is whether the forward orbits of ``p`` and
    ``y`` merge.
    """
    delta = _threshold(delta)
    if sys.d(p, y) > delta:
        raise PreconditionError(f"d(p, y) = {sys.d(p, y)} exceeds delta = {delta}")
    if not backward_orbit.is_consistent(sys) or backward_orbit.at(0) != p:
        raise PreconditionError("backward orbit must be a true orbit ending at p")
    a, b = p, y
    for k in range(len(sys) + 1):
        if a == b:
            return HeteroclinicWitness(p, 0, k)
        a, b = sys.fmap[a], sys.fmap[b]
    return None


def windowed_sequence_metric(sys: FiniteSystem, seg_a: OrbitSegment, seg_b: OrbitSegment,
                             W: int) -> tuple[Number, Number]:
    """Truncated weighted sum over ``|n| <= W`` and a bound on the omitted tail.

    The full weighted distance lies in ``[value, value + tail_bound]``.
    """
    if W < 0:
        raise ParameterError("window radius must be nonnegative")
    for seg in (seg_a, seg_b):
        if seg.first_time > -W or seg.last_time < W:
            raise PreconditionError(f"segment does not cover times {-W}..{W}")
    value = Fraction(0)
    for t in range(-W, W + 1):
        value += sys.d(seg_a.at(t), seg_b.at(t)) / Fraction(2) ** abs(t)
    tail = sys.space.diameter() * Fraction(2) ** (1 - W)
    return value, tail
