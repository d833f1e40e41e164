"""Reference implementations used only by the test-suite.

Everything here trades speed for obviousness and stays independent of
the solvers module, so agreement between the two is meaningful.  Only
the graph model and the set transformers are shared.

The brute-force generalized-parity region enumerates player-1
positional strategies.  That is sufficient because player 1's
objective is a disjunction of parity complements, for which positional
strategies suffice.  With player 1 fixed, player 0 wins from v iff it
can reach a vertex subset it can cycle through forever whose maxima
are even for every objective; any strongly connected subgraph can be
traversed so that all its vertices recur.
"""
from __future__ import annotations

import itertools
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .graph import GameGraph, PLAYER0, PLAYER1, PriorityFunction
from .transformers import attr_mask


class OracleSizeError(ValueError):
    """The instance is too large for brute-force checking."""


class OracleRegions(NamedTuple):
    w0_mask: np.ndarray
    w1_mask: np.ndarray


def zielonka_regions(g: GameGraph, priorities: PriorityFunction) -> OracleRegions:
    """Classical recursive Zielonka winning regions, no template bookkeeping."""
    if len(priorities) != g.vertex_count:
        raise ValueError("priority function does not cover the vertex set")
    vals = priorities.values

    def solve(universe: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        nothing = np.zeros(len(universe), dtype=np.bool_)
        if not universe.any():
            return nothing, nothing
        d = int(vals[universe].max())
        player = d % 2
        top = universe & (vals == d)
        a = attr_mask(g, top, player, universe)
        sub = solve(universe & ~a)
        opponent_part = sub[1 - player]
        if not opponent_part.any():
            mine = universe.copy()
            return (mine, nothing) if player == PLAYER0 else (nothing, mine)
        b = attr_mask(g, opponent_part, 1 - player, universe)
        r0, r1 = solve(universe & ~b)
        if player == PLAYER0:
            return r0, r1 | b
        return r0 | b, r1

    w0, w1 = solve(np.ones(g.vertex_count, dtype=np.bool_))
    return OracleRegions(w0, w1)


def _player1_strategies(g: GameGraph) -> Iterable[dict[int, int]]:
    p1 = [v for v in g.vertices() if g.owner_of(v) == PLAYER1]
    pools = [[int(t) for t in g.successors(v)] for v in p1]
    for picks in itertools.product(*pools):
        yield dict(zip(p1, picks))


def _even_max_subsets(
        n: int, objectives: Sequence[PriorityFunction]) -> list[tuple[int, list[int]]]:
    """Bitmask subsets whose max priority is even for every objective,
    paired with their member lists."""
    good = []
    for bits in range(1, 1 << n):
        members = [v for v in range(n) if bits >> v & 1]
        if all(max(pf.of(v) for v in members) % 2 == 0 for pf in objectives):
            good.append((bits, members))
    return good


def brute_force_gen_parity_region(
        g: GameGraph, objectives: Sequence[PriorityFunction]) -> np.ndarray:
    """Player-0 region for a conjunction of parity objectives, by brute
    force; see the module docstring for the construction."""
    n = g.vertex_count
    if n > 12:
        raise OracleSizeError("brute-force oracle capped at 12 vertices, got %d" % n)
    if isinstance(objectives, PriorityFunction):
        objectives = [objectives]
    objectives = list(objectives)
    if not objectives:
        raise ValueError("need at least one objective")
    for pf in objectives:
        if len(pf) != n:
            raise ValueError("priority function does not cover the vertex set")

    candidate_subsets = _even_max_subsets(n, objectives)
    region = np.ones(n, dtype=np.bool_)
    for tau in _player1_strategies(g):
        succ_bits = [0] * n
        for v in g.vertices():
            if g.owner_of(v) == PLAYER1:
                succ_bits[v] = 1 << tau[v]
            else:
                for t in g.successors(v):
                    succ_bits[v] |= 1 << int(t)
        good_vertices = 0
        for bits, members in candidate_subsets:
            if bits & good_vertices == bits:
                continue  # members all marked already; nothing to gain
            if any(succ_bits[v] & bits == 0 for v in members):
                continue
            # strong connectivity of the induced subgraph: everything
            # reachable from one member, forwards and backwards
            start = members[0]
            fwd = 1 << start
            while True:
                grown = fwd
                for v in members:
                    if fwd >> v & 1:
                        grown |= succ_bits[v] & bits
                if grown == fwd:
                    break
                fwd = grown
            bwd = 1 << start
            while True:
                grown = bwd
                for v in members:
                    if succ_bits[v] & bwd and bits >> v & 1:
                        grown |= 1 << v
                if grown == bwd:
                    break
                bwd = grown
            if fwd == bits and bwd == bits:
                good_vertices |= bits
        # player 0 wins from v iff some good subset is reachable in the
        # fixed graph (every path is realizable: only player 0 branches)
        win = good_vertices
        while True:
            grown = win
            for v in range(n):
                if succ_bits[v] & win:
                    grown |= 1 << v
            if grown == win:
                break
            win = grown
        region &= np.array([bool(win >> v & 1) for v in range(n)])
        if not region.any():
            break
    return region


def _plays_all_satisfy(g: GameGraph, sigma: dict[int, int],
                       objective) -> np.ndarray:
    """Vertices from which every play under the fixed player-0 strategy
    satisfies the objective (a PriorityFunction, or a safe vertex mask)."""
    n = g.vertex_count
    owners = [PLAYER1] * n
    succs = []
    for v in g.vertices():
        if g.owner_of(v) == PLAYER0:
            succs.append([sigma[v]])
        else:
            succs.append([int(t) for t in g.successors(v)])
    fixed = GameGraph.from_lists(owners, succs)
    if isinstance(objective, PriorityFunction):
        return zielonka_regions(fixed, objective).w0_mask
    safe = g.mask_of(objective)
    bad = ~safe
    reach_bad = bad.copy()
    changed = True
    while changed:
        changed = False
        for v in range(n):
            if not reach_bad[v] and any(reach_bad[t] for t in succs[v]):
                reach_bad[v] = True
                changed = True
    return ~reach_bad


def enumerate_winning_positional(
        g: GameGraph, objective) -> tuple[np.ndarray, frozenset]:
    """All winning player-0 positional strategies, by enumeration.

    objective: a PriorityFunction (parity) or a vertex set (safety).
    Returns (w0_mask, strategies) where each strategy is the frozenset
    of its (vertex, successor) choices restricted to W0; choices outside
    the winning region never matter for plays that start inside it.
    """
    n = g.vertex_count
    if n > 7:
        raise OracleSizeError("strategy enumeration capped at 7 vertices, got %d" % n)
    p0 = [v for v in g.vertices() if g.owner_of(v) == PLAYER0]
    pools = [[int(t) for t in g.successors(v)] for v in p0]
    results: list[tuple[dict[int, int], np.ndarray]] = []
    w0 = np.zeros(n, dtype=np.bool_)
    for picks in itertools.product(*pools):
        sigma = dict(zip(p0, picks))
        wins = _plays_all_satisfy(g, sigma, objective)
        results.append((sigma, wins))
        w0 |= wins
    winning = set()
    for sigma, wins in results:
        if np.all(wins[w0]):
            winning.add(frozenset((v, sigma[v]) for v in p0 if w0[v]))
    return w0, frozenset(winning)
