"""Brute-force reference computations, kept independent of the library paths."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from findyn.space import FiniteMetricSpace, FiniteSystem


def chain_reach(sys, eps):
    """``reach[x]`` = endpoints of eps-chains from ``x`` with 1..n steps."""
    n = len(sys)
    step = [{y for y in range(n) if sys.d(sys.fmap[x], y) <= eps} for x in range(n)]
    reach = []
    for x in range(n):
        frontier = set(step[x])
        seen = set(frontier)
        for _ in range(n - 1):
            frontier = {z for y in frontier for z in step[y]}
            seen |= frontier
        reach.append(seen)
    return reach


def brute_chain_recurrent(sys, eps):
    reach = chain_reach(sys, eps)
    return frozenset(x for x in range(len(sys)) if x in reach[x])


def brute_basic_sets(sys, eps):
    reach = chain_reach(sys, eps)
    cr = [x for x in range(len(sys)) if x in reach[x]]
    classes = []
    for x in cr:
        cls = frozenset(y for y in cr if y in reach[x] and x in reach[y])
        if cls not in classes:
            classes.append(cls)
    return sorted(classes, key=min)


def brute_periodic(sys):
    n = len(sys)
    out = {}
    for x in range(n):
        y = x
        for k in range(1, n + 1):
            y = sys.fmap[y]
            if y == x:
                out[x] = k
                break
    return out


def brute_two_sided_pairs(sys, c):
    """Pairs of full orbits staying within ``c``, found as backward lassos.

    A pair belongs iff its forward pair orbit stays within ``c`` and some
    backward path of pairs within ``c`` closes a loop (pre-period and period
    both at most ``n**2``).
    """
    n = len(sys)
    f = sys.fmap
    within = {(x, y) for x in range(n) for y in range(n) if sys.d(x, y) <= c}
    preimages = {p: [(a, b) for a in range(n) for b in range(n)
                     if (f[a], f[b]) == p and (a, b) in within] for p in within}
    limit = n * n

    def forward_ok(p):
        for _ in range(2 * limit + 1):
            if p not in within:
                return False
            p = (f[p[0]], f[p[1]])
        return True

    def lasso(p):
        dead = set()
        stack = [(p, [p])]
        while stack:
            q, path = stack.pop()
            for r in preimages[q]:
                if r in path:
                    return True
                if r in dead or len(path) > 2 * limit:
                    continue
                stack.append((r, path + [r]))
            dead.add(q)
        return False

    return frozenset(p for p in within if forward_ok(p) and lasso(p))


# -- hypothesis strategies ---------------------------------------------------------

@st.composite
def line_systems(draw, min_n=1, max_n=7, bijective=False):
    """Systems on distinct integer points of a line (exact, tie-rich metrics)."""
    n = draw(st.integers(min_n, max_n))
    pts = draw(st.lists(st.integers(0, 12), min_size=n, max_size=n, unique=True))
    if bijective:
        fmap = draw(st.permutations(range(n)))
    else:
        fmap = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    labels = [f"p{i}" for i in range(n)]
    space = FiniteMetricSpace(tuple(labels), tuple(
        tuple(Fraction(abs(a - b)) for b in pts) for a in pts))
    return FiniteSystem(space, tuple(fmap))
