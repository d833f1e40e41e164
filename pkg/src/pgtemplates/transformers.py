"""One-step and fixpoint set transformers over game graphs.

All operators take and return boolean vertex masks (see
:meth:`GameGraph.mask_of`).  The public functions work on the whole
graph; the ``*_mask`` kernels additionally accept a ``universe`` mask
and then behave as if the graph were restricted to that universe,
ignoring every edge with an endpoint outside it.  Solvers use the
kernels to work on subgames without copying the graph.

Inside a universe some vertices may have no remaining successors.  The
kernels use worklist semantics for such vertices: a vertex with no
(restricted) successors is never pulled in by closure, only by being in
the seed set.  Full graphs are total, so the public operators match the
textbook definitions exactly.
"""
from __future__ import annotations

import numpy as np

from .graph import GameGraph, PLAYER0, PLAYER1


def _check_player(player: int) -> None:
    if player not in (PLAYER0, PLAYER1):
        raise ValueError("player must be 0 or 1, got %r" % (player,))


def _gather_ranges(off: np.ndarray, flat: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """Concatenate flat[off[i]:off[i+1]] for each i in idx, in order."""
    lens = off[idx + 1] - off[idx]
    total = int(lens.sum())
    if total == 0:
        return np.empty(0, dtype=flat.dtype)
    ends = np.cumsum(lens)
    pos = np.arange(total, dtype=np.int64)
    shift = np.repeat(off[idx] - (ends - lens), lens)
    return flat[pos + shift]


def _restricted_degrees(g: GameGraph, universe: np.ndarray | None) -> np.ndarray:
    if universe is None:
        return np.diff(g.succ_offsets())
    src = g.edge_sources()
    ok = universe[src] & universe[g.edge_targets]
    return np.bincount(src[ok], minlength=g.vertex_count)


def upre_mask(g: GameGraph, u: np.ndarray,
              universe: np.ndarray | None = None) -> np.ndarray:
    """Vertices whose every (restricted) successor lies in u.

    Requires at least one restricted successor; see the module note on
    worklist semantics for universe-internal dead ends.
    """
    src = g.edge_sources()
    dst = g.edge_targets
    if universe is None:
        deg = np.diff(g.succ_offsets())
        cnt = np.bincount(src[u[dst]], minlength=g.vertex_count)
        return cnt == deg
    ok = universe[src] & universe[dst]
    deg = np.bincount(src[ok], minlength=g.vertex_count)
    cnt = np.bincount(src[ok & u[dst]], minlength=g.vertex_count)
    return (deg > 0) & (cnt == deg) & universe


def cpre_mask(g: GameGraph, u: np.ndarray, player: int,
              universe: np.ndarray | None = None) -> np.ndarray:
    """Vertices from which the player forces a visit to u in one step."""
    src = g.edge_sources()
    dst = g.edge_targets
    if universe is None:
        hit = u[dst]
    else:
        hit = universe[src] & universe[dst] & u[dst]
    exists = np.zeros(g.vertex_count, dtype=np.bool_)
    exists[src[hit]] = True
    forall = upre_mask(g, u, universe)
    mine = g.owners == player
    out = np.where(mine, exists, forall)
    if universe is not None:
        out &= universe
    return out


def attr_mask(g: GameGraph, target: np.ndarray, player: int,
              universe: np.ndarray | None = None) -> np.ndarray:
    """Least fixpoint of cpre for the player, seeded with target.

    Counter-based worklist: each edge is inspected a constant number of
    times, so a call costs O(n + m).
    """
    owners = g.owners
    in_a = target.copy() if universe is None else (target & universe)
    counter = _restricted_degrees(g, universe).copy()
    poff, psrc = g.pred_csr()
    frontier = np.flatnonzero(in_a)
    while frontier.size:
        preds = _gather_ranges(poff, psrc, frontier)
        if universe is not None:
            preds = preds[universe[preds]]
        preds = preds[~in_a[preds]]
        if preds.size == 0:
            break
        newly = np.unique(preds[owners[preds] == player])
        opp = preds[owners[preds] != player]
        if opp.size:
            # decrement only the touched counters so a round costs
            # O(frontier edges), not O(n)
            cand, cnts = np.unique(opp, return_counts=True)
            counter[cand] -= cnts
            hit = cand[counter[cand] == 0]
            if hit.size:
                newly = np.union1d(newly, hit)
        in_a[newly] = True
        frontier = newly
    return in_a


def uattr_mask(g: GameGraph, target: np.ndarray,
               universe: np.ndarray | None = None) -> np.ndarray:
    """Least fixpoint of upre seeded with target: both players are
    dragged into the set regardless of choices."""
    in_a = target.copy() if universe is None else (target & universe)
    counter = _restricted_degrees(g, universe).copy()
    poff, psrc = g.pred_csr()
    frontier = np.flatnonzero(in_a)
    while frontier.size:
        preds = _gather_ranges(poff, psrc, frontier)
        if universe is not None:
            preds = preds[universe[preds]]
        preds = preds[~in_a[preds]]
        if preds.size == 0:
            break
        cand, cnts = np.unique(preds, return_counts=True)
        counter[cand] -= cnts
        newly = cand[counter[cand] == 0]
        in_a[newly] = True
        frontier = newly
    return in_a


# -- public, whole-graph operators --------------------------------------


def upre(g: GameGraph, u) -> np.ndarray:
    """{v | every successor of v is in u}."""
    return upre_mask(g, g.mask_of(u))


def cpre(g: GameGraph, u, player: int) -> np.ndarray:
    """Controllable predecessors: the player can force u in one step."""
    _check_player(player)
    return cpre_mask(g, g.mask_of(u), player)


def attr(g: GameGraph, u, player: int) -> np.ndarray:
    """Vertices from which the player can force at least one visit to u."""
    _check_player(player)
    return attr_mask(g, g.mask_of(u), player)


def uattr(g: GameGraph, u) -> np.ndarray:
    """Vertices from which every play reaches u, whoever moves."""
    return uattr_mask(g, g.mask_of(u))
