"""Template-synthesis solvers for safety, Büchi, co-Büchi, and parity
objectives, plus the classical region solvers they build on.

Every solver returns both winning regions and a strategy template whose
compliant player-0 strategies all win from the winning region.  The
parity solver follows the Zielonka divide-and-conquer scheme, peeling
the attractor of the highest priority present and recursing on the
rest; template edges are collected along the way.

Subgames are handled with universe masks (see transformers), never by
copying the graph, so reported edges and vertices are always in the
input graph's ids.
"""
from __future__ import annotations

import numpy as np

from .graph import GameGraph, PLAYER0, PLAYER1, PriorityFunction
from .template import LiveGroup, StrategyTemplate
from .transformers import attr_mask, cpre_mask, uattr_mask


class SolveResult:
    """Winning regions of both players plus the player-0 template.

    The two regions partition the vertex set; the template's region is
    always the player-0 region.
    """

    __slots__ = ("w0_mask", "w1_mask", "template")

    def __init__(self, w0_mask: np.ndarray, w1_mask: np.ndarray,
                 template: StrategyTemplate):
        self.w0_mask = w0_mask
        self.w1_mask = w1_mask
        self.template = template

    @property
    def winning_region0(self) -> frozenset[int]:
        return frozenset(int(v) for v in np.flatnonzero(self.w0_mask))

    @property
    def winning_region1(self) -> frozenset[int]:
        return frozenset(int(v) for v in np.flatnonzero(self.w1_mask))

    def __repr__(self) -> str:
        return "SolveResult(|W0|=%d, |W1|=%d, %r)" % (
            int(self.w0_mask.sum()), int(self.w1_mask.sum()), self.template)


def _crossing_edges(g: GameGraph, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Edge ids from xs into ys, player-0-sourced.

    On every solver path the source region is a trap for player 1, so
    dropping player-1 sources changes nothing; the assert documents
    that.
    """
    src = g.edge_sources()
    ids = np.flatnonzero(xs[src] & ys[g.edge_targets])
    p0 = g.owners[src[ids]] == PLAYER0
    assert bool(np.all(p0)), "player-1 edge escapes a region that should trap it"
    return ids[p0]


def _full(g: GameGraph) -> np.ndarray:
    return np.ones(g.vertex_count, dtype=np.bool_)


def _empty(g: GameGraph) -> np.ndarray:
    return np.zeros(g.vertex_count, dtype=np.bool_)


# -- classical region solvers ------------------------------------------


def _safety_region(g: GameGraph, stay: np.ndarray, player: int,
                   universe: np.ndarray) -> np.ndarray:
    """Vertices from which the player keeps the play inside stay forever."""
    bad = universe & ~stay
    return universe & ~attr_mask(g, bad, 1 - player, universe)


def _buchi_region(g: GameGraph, goal: np.ndarray, player: int,
                  universe: np.ndarray) -> np.ndarray:
    """Vertices from which the player forces infinitely many goal visits.

    Standard repeated-attractor loop: shrink the candidate set by
    removing what the opponent can steer away from the goal's attractor.
    """
    u = universe.copy()
    while True:
        r = attr_mask(g, goal & u, player, u)
        trapped = u & ~r
        if not trapped.any():
            return u
        u &= ~attr_mask(g, trapped, 1 - player, u)


def safety_win(g: GameGraph, safe) -> np.ndarray:
    """Player-0 region for: stay in the safe set forever."""
    return _safety_region(g, g.mask_of(safe), PLAYER0, _full(g))


def buchi_win(g: GameGraph, goal) -> np.ndarray:
    """Player-0 region for: visit the goal set infinitely often."""
    return _buchi_region(g, g.mask_of(goal), PLAYER0, _full(g))


def cobuchi_win(g: GameGraph, goal) -> np.ndarray:
    """Player-0 region for: eventually remain inside the goal set."""
    w1 = _buchi_region(g, ~g.mask_of(goal), PLAYER1, _full(g))
    return ~w1


# -- template synthesis --------------------------------------------------


def reach_template(g: GameGraph, goal,
                   universe: np.ndarray | None = None) -> list[LiveGroup]:
    """Live-groups forcing progress toward the goal set.

    Alternates two closures: vertices that cannot help reaching the
    goal in every continuation (both players dragged in), then the
    player-0 frontier that can step into the closed set.  Each frontier
    contributes one live-group: its edges into the closed set.

    Requires that player 0 can attract the whole (restricted) graph to
    the goal; raises ValueError when the iteration stalls short of that.
    """
    if universe is None:
        universe = _full(g)
    goal_mask = g.mask_of(goal) & universe
    total = int(universe.sum())
    src = g.edge_sources()
    dst = g.edge_targets
    owners = g.owners
    groups: list[LiveGroup] = []
    a = uattr_mask(g, goal_mask, universe)
    while int(a.sum()) != total:
        b = cpre_mask(g, a, PLAYER0, universe) & ~a
        if not b.any():
            raise ValueError(
                "reach_template: goal is not player-0 attractable from the "
                "whole graph; restrict to the attractor first")
        ids = np.flatnonzero(b[src] & a[dst])
        ids = ids[owners[src[ids]] == PLAYER0]
        if ids.size:
            groups.append(LiveGroup(g, ids))
        a = uattr_mask(g, a | b, universe)
    return groups


def safety_template(g: GameGraph, safe) -> SolveResult:
    """Template for staying in the safe set: forbid the region-leaving
    edges.  The unsafe set is exact, every winning positional strategy
    avoids exactly these edges."""
    w0 = safety_win(g, safe)
    w1 = ~w0
    unsafe = np.zeros(g.edge_count, dtype=np.bool_)
    unsafe[_crossing_edges(g, w0, w1)] = True
    colive = np.zeros(g.edge_count, dtype=np.bool_)
    tpl = StrategyTemplate(g, unsafe, colive, (), w0)
    return SolveResult(w0, w1, tpl)


def buchi_template(g: GameGraph, goal) -> SolveResult:
    """Template for visiting the goal infinitely often: stay in the
    winning region, plus one live-group per distance layer."""
    goal_mask = g.mask_of(goal)
    w0 = buchi_win(g, goal_mask)
    w1 = ~w0
    unsafe = np.zeros(g.edge_count, dtype=np.bool_)
    unsafe[_crossing_edges(g, w0, w1)] = True
    groups = reach_template(g, goal_mask & w0, universe=w0) if w0.any() else []
    colive = np.zeros(g.edge_count, dtype=np.bool_)
    tpl = StrategyTemplate(g, unsafe, colive, groups, w0)
    return SolveResult(w0, w1, tpl)


def cobuchi_template(g: GameGraph, goal) -> SolveResult:
    """Template for eventually staying in the goal set.

    Within the winning region, repeatedly take the sub-region where
    player 0 can stay in the goal forever, mark every edge leaving it
    co-live, then walk the attractor layers toward it: layer edges that
    do not make progress (sideways or outward) are co-live too.  Peel
    the attractor and repeat on the rest.
    """
    goal_mask = g.mask_of(goal)
    w0 = cobuchi_win(g, goal_mask)
    w1 = ~w0
    unsafe = np.zeros(g.edge_count, dtype=np.bool_)
    unsafe[_crossing_edges(g, w0, w1)] = True
    colive = np.zeros(g.edge_count, dtype=np.bool_)
    src = g.edge_sources()
    dst = g.edge_targets
    owners = g.owners

    def mark(xs: np.ndarray, ys: np.ndarray) -> None:
        ids = np.flatnonzero(xs[src] & ys[dst])
        ids = ids[owners[src[ids]] == PLAYER0]
        colive[ids] = True

    remaining = w0.copy()
    while remaining.any():
        core = _safety_region(g, goal_mask & remaining, PLAYER0, remaining)
        assert core.any(), "co-Büchi region without a safety core"
        mark(core, remaining & ~core)
        cur = core.copy()
        while True:
            layer = cpre_mask(g, cur, PLAYER0, remaining) & ~cur
            if not layer.any():
                break
            mark(layer, remaining & ~(cur | layer))
            mark(layer, layer)
            cur |= layer
        remaining &= ~cur

    tpl = StrategyTemplate(g, unsafe, colive, (), w0)
    return SolveResult(w0, w1, tpl)


def _parity_solve(g: GameGraph, vals: np.ndarray, universe: np.ndarray):
    """One recursion step of the parity solver, written as a generator.

    Yields the universe of a needed sub-solve and receives its result;
    returns (w0, w1, live_groups, colive_id_arrays) for the given
    universe.  Run via _trampoline so recursion depth stays flat.
    """
    nothing = np.zeros(len(universe), dtype=np.bool_)
    if not universe.any():
        return nothing, nothing, [], []
    d = int(vals[universe].max())
    p_d = universe & (vals == d)

    if d % 2 == 1:
        a = attr_mask(g, p_d, PLAYER1, universe)
        rest = universe & ~a
        if not rest.any():
            return nothing, universe.copy(), [], []
        w0, w1, groups, colive = yield rest
        if not w0.any():
            return nothing, universe.copy(), [], []
        b = attr_mask(g, w0, PLAYER0, universe)
        colive.append(_crossing_edges(g, w0, universe & ~w0))
        groups.extend(reach_template(g, w0, universe=b))
        w0p, w1p, groups2, colive2 = yield (universe & ~b)
        return w0p | b, w1p, groups + groups2, colive + colive2

    a = attr_mask(g, p_d, PLAYER0, universe)
    rest = universe & ~a
    if not rest.any():
        return universe.copy(), nothing, reach_template(g, p_d, universe=universe), []
    w0, w1, groups, colive = yield rest
    if not w1.any():
        groups.extend(reach_template(g, p_d, universe=a))
        return universe.copy(), nothing, groups, colive
    b = attr_mask(g, w1, PLAYER1, universe)
    # templates from the first sub-solve cover vertices that player 1
    # can now drag into b; drop them and re-solve the remainder
    w0p, w1p, groups2, colive2 = yield (universe & ~b)
    return w0p, w1p | b, groups2, colive2


def _trampoline(step, root_universe: np.ndarray):
    stack = [step(root_universe)]
    result = None
    while stack:
        try:
            requested = stack[-1].send(result)
        except StopIteration as stop:
            result = stop.value
            stack.pop()
            continue
        stack.append(step(requested))
        result = None
    return result


def parity_parts(g: GameGraph, vals: np.ndarray, universe: np.ndarray):
    """Solve a parity objective on the universe-restricted subgame.

    Returns (w0, w1, live_groups, colive_id_arrays) without deriving
    unsafe edges; composition combines parts from several objectives
    before the boundary is known.
    """
    return _trampoline(lambda u: _parity_solve(g, vals, u), universe)


def parity_template(g: GameGraph, priorities: PriorityFunction) -> SolveResult:
    """Zielonka-style parity solve returning regions and a template.

    Max priority seen infinitely often must be even for player 0 to
    win.  Unsafe edges are exactly the player-0 edges from the winning
    region into the losing one; co-live edges and live-groups come from
    the recursion.
    """
    if len(priorities) != g.vertex_count:
        raise ValueError("priority function does not cover the vertex set")
    w0, w1, groups, colive_ids = parity_parts(g, priorities.values, _full(g))
    unsafe = np.zeros(g.edge_count, dtype=np.bool_)
    unsafe[_crossing_edges(g, w0, w1)] = True
    colive = np.zeros(g.edge_count, dtype=np.bool_)
    for ids in colive_ids:
        colive[ids] = True
    tpl = StrategyTemplate(g, unsafe, colive, groups, w0)
    return SolveResult(w0, w1, tpl)
