"""Chain graphs, chain recurrence and the basic-set / cyclic-class decomposition.

For a threshold ``epsilon`` the chain graph has an edge ``x -> y`` iff
``d(f(x), y) <= epsilon``.  Its cycles are the closed epsilon-chains, its
strongly connected pieces are the basic sets, and the graph period of each
piece gives the cyclic classes on which the appropriate power of the map mixes.

With ``epsilon = 0`` the chain graph is the functional graph itself and every
statement below is exact.  For ``epsilon > 0`` transitivity and mixing are
reported as graph surrogates (strong connectivity, primitivity); the returned
:class:`Verdict` says which reading applies.  Choosing ``epsilon`` below the
smallest positive ``d(f(x), y)`` reproduces the vanishing-threshold limit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from . import graphs
from .errors import ParameterError, PreconditionError
from .space import FiniteSystem, Number, as_number, periodic_points, power

EXACT = "exact"
SURROGATE = "chain-graph surrogate"


@dataclass(frozen=True)
class Verdict:
    holds: bool
    semantics: str

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class ChainGraph:
    epsilon: Number
    successors: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.successors)

    def has_edge(self, x: int, y: int) -> bool:
        return y in self.successors[x]

    def edges(self):
        for x, ys in enumerate(self.successors):
            for y in ys:
                yield x, y


def _check_epsilon(epsilon) -> Number:
    eps = as_number(epsilon)
    if eps < 0:
        raise ParameterError(f"epsilon must be nonnegative, got {eps}")
    return eps


def build_chain_graph(sys: FiniteSystem, epsilon) -> ChainGraph:
    eps = _check_epsilon(epsilon)
    dist = sys.space.dist
    succ = tuple(
        tuple(y for y, v in enumerate(dist[fx]) if v <= eps) for fx in sys.fmap)
    return ChainGraph(eps, succ)


def _recurrent_components(graph: ChainGraph) -> list[list[int]]:
    comps = graphs.strongly_connected_components(graph.successors)
    comps = [c for c in comps if graphs.has_cycle_through(graph.successors, c)]
    comps.sort(key=min)
    return comps


def chain_recurrent(sys: FiniteSystem, epsilon) -> frozenset[int]:
    """Points lying on a directed cycle of the epsilon-chain graph."""
    graph = build_chain_graph(sys, epsilon)
    return frozenset(x for c in _recurrent_components(graph) for x in c)


def nonwandering_exact(sys: FiniteSystem) -> frozenset[int]:
    """Non-wandering set of a finite discrete system, i.e. its periodic points.

    The returned set is cross-checked against the zero-threshold chain
    recurrent set; a mismatch means a bug, not a property of the input.
    """
    per = frozenset(periodic_points(sys))
    cr = chain_recurrent(sys, 0)
    if per != cr:
        raise AssertionError(f"Per(f) {sorted(per)} != CR_0(f) {sorted(cr)}")
    return per


def basic_sets(sys: FiniteSystem, epsilon) -> list[frozenset[int]]:
    """Chain-recurrent SCCs, ordered by their lowest index."""
    graph = build_chain_graph(sys, epsilon)
    return [frozenset(c) for c in _recurrent_components(graph)]


def _is_single_cycle(sys: FiniteSystem, subset: frozenset[int]) -> bool:
    start = min(subset)
    orbit = {start}
    x = sys.fmap[start]
    while x != start:
        if x not in subset or x in orbit:
            return False
        orbit.add(x)
        x = sys.fmap[x]
    return orbit == subset


def is_transitive(sys: FiniteSystem, subset: Iterable[int], epsilon=0) -> Verdict:
    """Transitivity of the map on ``subset``.

    At ``epsilon = 0`` this is exact: on a finite discrete space the
    restriction is transitive iff the subset is one periodic orbit.  Above
    zero it reports strong connectivity (with a cycle) of the chain graph
    induced on the subset.
    """
    subset = frozenset(subset)
    if not subset:
        raise PreconditionError("transitivity of an empty set is undefined")
    eps = _check_epsilon(epsilon)
    if eps == 0:
        return Verdict(_is_single_cycle(sys, subset), EXACT)
    graph = build_chain_graph(sys, eps)
    comps = graphs.strongly_connected_components(graph.successors, subset)
    ok = len(comps) == 1 and graphs.has_cycle_through(graph.successors, comps[0])
    return Verdict(ok, SURROGATE)


def cyclic_decomposition(sys: FiniteSystem, basic_set: Iterable[int],
                         epsilon=0) -> tuple[int, tuple[frozenset[int], ...]]:
    """Graph period ``m`` and cyclic classes ``C_0..C_{m-1}`` of a basic set.

    ``C_0`` holds the lowest index; ``C_i`` are the vertices at path length
    ``i`` mod ``m`` from it, so chain edges (and ``f`` itself) move ``C_i``
    into ``C_{i+1 mod m}``.
    """
    members = frozenset(basic_set)
    if not members:
        raise PreconditionError("empty basic set")
    graph = build_chain_graph(sys, epsilon)
    comps = graphs.strongly_connected_components(graph.successors, members)
    if len(comps) != 1 or not graphs.has_cycle_through(graph.successors, comps[0]):
        raise PreconditionError(
            "set is not a strongly connected recurrent piece of the chain graph")
    m, classes = graphs.cyclic_classes(graph.successors, members)
    return m, tuple(classes)


def is_mixing(sys: FiniteSystem, component: Iterable[int], epsilon=0,
              period: int = 1) -> Verdict:
    """Primitivity of the chain graph of ``f**period`` on ``component``.

    At ``epsilon = 0`` this holds iff the component is a single fixed point
    of ``f**period``.
    """
    component = frozenset(component)
    if not component:
        raise PreconditionError("mixing of an empty set is undefined")
    eps = _check_epsilon(epsilon)
    graph = build_chain_graph(power(sys, period), eps)
    comps = graphs.strongly_connected_components(graph.successors, component)
    ok = (len(comps) == 1
          and graphs.has_cycle_through(graph.successors, comps[0])
          and graphs.period(graph.successors, component) == 1)
    return Verdict(ok, EXACT if eps == 0 else SURROGATE)


@dataclass(frozen=True)
class BasicSet:
    points: frozenset[int]
    period: int
    components: tuple[frozenset[int], ...]
    transitive: Verdict
    mixing: tuple[Verdict, ...]


@dataclass(frozen=True)
class Decomposition:
    epsilon: Number
    chain_recurrent: frozenset[int]
    basic_sets: tuple[BasicSet, ...]

    def to_dict(self, labels=None) -> dict:
        def pts(s):
            s = sorted(s)
            return [labels[i] for i in s] if labels else s

        return {
            "epsilon": _num_json(self.epsilon),
            "chain_recurrent": pts(self.chain_recurrent),
            "basic_sets": [
                {
                    "points": pts(b.points),
                    "period": b.period,
                    "components": [pts(c) for c in b.components],
                    "transitive": b.transitive.holds,
                    "mixing": [v.holds for v in b.mixing],
                    "semantics": b.transitive.semantics,
                }
                for b in self.basic_sets
            ],
        }


def _num_json(v):
    return str(v) if isinstance(v, Fraction) else v


def decompose(sys: FiniteSystem, epsilon=0) -> Decomposition:
    """Chain-recurrent set, basic sets, periods, cyclic classes and verdicts."""
    eps = _check_epsilon(epsilon)
    graph = build_chain_graph(sys, eps)
    comps = _recurrent_components(graph)
    out = []
    for comp in comps:
        members = frozenset(comp)
        m, classes = graphs.cyclic_classes(graph.successors, members)
        transitive = is_transitive(sys, members, eps)
        mixing = tuple(is_mixing(sys, c, eps, m) for c in classes)
        out.append(BasicSet(members, m, tuple(classes), transitive, mixing))
    cr = frozenset(x for c in comps for x in c)
    return Decomposition(eps, cr, tuple(out))


def chain_graph_to_dot(sys: FiniteSystem, graph: ChainGraph) -> str:
    """Graphviz source with one cluster per strongly connected component."""
    def q(s):
        return '"' + str(s).replace('"', r'\"') + '"'

    lines = ["digraph chain {", f'  label={q(f"epsilon = {graph.epsilon}")};']
    comps = graphs.strongly_connected_components(graph.successors)
    comps.sort(key=min)
    for k, comp in enumerate(comps):
        lines.append(f"  subgraph cluster_{k} {{")
        for x in comp:
            lines.append(f"    n{x} [label={q(sys.labels[x])}];")
        lines.append("  }")
    for x, y in graph.edges():
        lines.append(f"  n{x} -> n{y};")
    lines.append("}")
    return "\n".join(lines) + "\n"
