"""Composition of several parity objectives into one conflict-free
template, incrementally if desired.

Each objective is solved on its own, restricted to the running
intersection of winning regions, and the templates are conjoined.  A
conjunction can over-constrain a vertex (all its usable edges co-live,
or a live-group starved); such conflict vertices are then forced to be
visited only finitely often by raising their priority to the top odd
value in every objective, and everything is re-solved on the shrunken
region.  The loop terminates because (region size, region vertices not
yet top-odd, summed over the objectives) decreases lexicographically
between re-solve rounds; that is asserted at runtime.

The procedure is sound but deliberately not complete: re-solving after
a conflict may give up vertices a cleverer coordination could keep.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .graph import GameGraph, PriorityFunction
from .solvers import _crossing_edges, parity_parts
from .template import LiveGroup, StrategyTemplate, find_conflicts

# a conjunction of parity objectives, one priority function each
GeneralizedParityObjective = Sequence[PriorityFunction]


def pad_to_odd(pf: PriorityFunction) -> PriorityFunction:
    """Extend the declared range to an odd bound; values are unchanged,
    so the objective is unchanged.  Relabeling targets this bound."""
    if pf.max_priority % 2 == 1:
        return pf
    return PriorityFunction(pf.values, pf.max_priority + 1)


def relabel(pf: PriorityFunction, u) -> PriorityFunction:
    """Priorities with the vertices of u raised to the top odd value.

    The resulting objective is the original conjoined with "eventually
    avoid u forever": any play visiting u infinitely often now has an
    odd maximum.
    """
    top = pf.odd_ceiling()
    vals = np.asarray(pf.values).copy()
    if isinstance(u, np.ndarray) and u.dtype == np.bool_:
        mask = u
    else:
        mask = np.zeros(len(vals), dtype=np.bool_)
        for v in u:
            mask[int(v)] = True
    vals[mask] = top
    return PriorityFunction(vals, top)


class ComposeState:
    """Carry-over between incremental composition calls: the current
    region, accumulated template parts, and the (possibly relabeled)
    objectives handled so far."""

    __slots__ = ("graph", "w0_mask", "live_groups", "colive_mask", "objectives")

    def __init__(self, graph: GameGraph, w0_mask: np.ndarray,
                 live_groups: tuple[LiveGroup, ...], colive_mask: np.ndarray,
                 objectives: tuple[PriorityFunction, ...]):
        self.graph = graph
        self.w0_mask = w0_mask
        self.live_groups = live_groups
        self.colive_mask = colive_mask
        self.objectives = objectives

    @classmethod
    def initial(cls, g: GameGraph) -> "ComposeState":
        return cls(g, np.ones(g.vertex_count, dtype=np.bool_), (),
                   np.zeros(g.edge_count, dtype=np.bool_), ())

    @property
    def winning_region(self) -> frozenset[int]:
        return frozenset(int(v) for v in np.flatnonzero(self.w0_mask))

    def __repr__(self) -> str:
        return "ComposeState(|W0|=%d, objectives=%d)" % (
            int(self.w0_mask.sum()), len(self.objectives))


def _measure(w0: np.ndarray, objs: Sequence[PriorityFunction]) -> tuple[int, int]:
    below = sum(int((w0 & (pf.values != pf.odd_ceiling())).sum()) for pf in objs)
    return int(w0.sum()), below


def compose_templates(
        g: GameGraph, state: ComposeState,
        new_objectives: GeneralizedParityObjective,
) -> tuple[ComposeState, StrategyTemplate]:
    """Extend the composition with further parity objectives.

    Objectives are folded in one at a time, each solved within the
    region the earlier ones left, so a batch call and a chain of
    add_objective calls produce identical results.  Returns the new
    carry-over state and the combined template, whose unsafe set is
    the player-0 boundary of the final region.  Start from
    ComposeState.initial(g) for a one-shot solve.
    """
    if state.graph is not g and state.graph != g:
        raise ValueError("state was built for a different graph")
    new_objectives = list(new_objectives)
    for pf in new_objectives:
        if len(pf) != g.vertex_count:
            raise ValueError("priority function does not cover the vertex set")
    for pf in new_objectives:
        state = _fold_objective(g, state, pad_to_odd(pf))

    unsafe = np.zeros(g.edge_count, dtype=np.bool_)
    unsafe[_crossing_edges(g, state.w0_mask, ~state.w0_mask)] = True
    template = StrategyTemplate(g, unsafe, state.colive_mask,
                                list(state.live_groups), state.w0_mask)
    assert find_conflicts(g, template).is_conflict_free, \
        "composition returned a conflicted template"
    return state, template


def _fold_objective(g: GameGraph, state: ComposeState,
                    new_pf: PriorityFunction) -> ComposeState:
    objs = list(state.objectives) + [new_pf]
    w0 = state.w0_mask.copy()
    groups = list(state.live_groups)
    colive = state.colive_mask.copy()
    solve_from = len(state.objectives)
    no_unsafe = np.zeros(g.edge_count, dtype=np.bool_)
    # baseline for the termination check is the first re-solve round;
    # the entry round reuses the carried template parts and is not
    # comparable to a full solve
    prev = None

    while True:
        new_w0 = w0.copy()
        for i in range(solve_from, len(objs)):
            wi, _, gi, ci = parity_parts(g, objs[i].values, w0)
            new_w0 &= wi
            groups.extend(gi)
            for ids in ci:
                colive[ids] = True
        interim = StrategyTemplate(g, no_unsafe, colive, groups, new_w0)
        report = find_conflicts(g, interim)
        if report.is_conflict_free:
            return ComposeState(g, new_w0, tuple(groups), colive, tuple(objs))
        conflict = g.mask_of(report.all_vertices)
        objs = [relabel(pf, conflict) for pf in objs]
        measure = _measure(new_w0, objs)
        assert prev is None or measure < prev, \
            "composition measure failed to decrease: %s -> %s" % (prev, measure)
        prev = measure
        w0 = new_w0
        groups = []
        colive = np.zeros(g.edge_count, dtype=np.bool_)
        solve_from = 0


def add_objective(g: GameGraph, state: ComposeState,
                  pf: PriorityFunction) -> tuple[ComposeState, StrategyTemplate]:
    """Incremental variant: fold one more parity objective into an
    existing composition."""
    return compose_templates(g, state, [pf])
