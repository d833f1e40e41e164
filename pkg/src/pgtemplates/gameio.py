"""Text formats: game files, template text, strategy text.

Game files follow the pgsolver layout, extended with an objective
count so one file can carry a conjunction of parity objectives:

    genparity <maxId> <k>;        (or: parity <maxId>;  meaning k=1)
    <id> <p1>,...,<pk> <owner> <t1>,<t2>,...[ "<name>"];

Owner 0 is the protagonist.  Lines whose first non-blank character is
'#' are comments.  Input must be ASCII.  Parsing normalizes: vertices
are renumbered densely in ascending id order and emit always writes
that normal form, so emit(parse(text)) is a fixpoint after one round.

Errors carry 1-based line and column positions.
"""
from __future__ import annotations

import re

import numpy as np

from .graph import Edge, GameGraph, GraphBuilder, PLAYER0, PriorityFunction
from .strategy import Strategy
from .template import StrategyTemplate


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__("line %d, column %d: %s" % (line, column, message))


class _Scanner:
    """Cursor over one line; failures report the cursor column."""

    def __init__(self, text: str, lineno: int):
        self.text = text
        self.lineno = lineno
        self.pos = 0

    def error(self, message: str):
        raise ParseError(message, self.lineno, self.pos + 1)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def take(self, pattern: str, what: str) -> re.Match:
        m = re.compile(pattern).match(self.text, self.pos)
        if m is None:
            self.error("expected %s" % what)
        self.pos = m.end()
        return m

    def expect_end(self) -> None:
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("unexpected trailing text")


def _int_list(token: str) -> list[int]:
    return [int(x) for x in token.split(",")]


def _check_ascii(line: str, lineno: int) -> None:
    for i, ch in enumerate(line):
        if ord(ch) > 127:
            raise ParseError("non-ASCII character", lineno, i + 1)


def _content_lines(text: str):
    for lineno, raw in enumerate(text.split("\n"), 1):
        _check_ascii(raw, lineno)
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield lineno, raw


def parse_game(text: str) -> tuple[GameGraph, list[PriorityFunction]]:
    """Parse a parity/genparity file into a graph and its objectives."""
    header = None  # (max_id, k)
    records: dict[int, tuple] = {}  # id -> (prios, owner, succs, name, line, scol)
    for lineno, raw in _content_lines(text):
        s = _Scanner(raw, lineno)
        s.skip_ws()
        if header is None:
            kw = s.take(r"[A-Za-z]+", "header keyword 'parity' or 'genparity'")
            if kw.group(0) == "parity":
                s.skip_ws()
                max_id = int(s.take(r"\d+", "maximal vertex id").group(0))
                k = 1
            elif kw.group(0) == "genparity":
                s.skip_ws()
                max_id = int(s.take(r"\d+", "maximal vertex id").group(0))
                s.skip_ws()
                k = int(s.take(r"\d+", "objective count").group(0))
                if k < 1:
                    s.error("objective count must be at least 1")
            else:
                s.pos -= len(kw.group(0))
                s.error("header keyword 'parity' or 'genparity'")
            s.skip_ws()
            s.take(r";", "';'")
            s.expect_end()
            header = (max_id, k)
            continue

        max_id, k = header
        vid = int(s.take(r"\d+", "vertex id").group(0))
        if vid > max_id:
            s.pos -= len(str(vid))
            s.error("vertex id %d exceeds declared maximum %d" % (vid, max_id))
        if vid in records:
            s.pos -= len(str(vid))
            s.error("duplicate record for vertex %d" % vid)
        s.skip_ws()
        pcol = s.pos + 1
        prios = _int_list(s.take(r"\d+(?:,\d+)*", "priority list").group(0))
        if len(prios) != k:
            raise ParseError(
                "expected %d comma-separated priorities, got %d" % (k, len(prios)),
                lineno, pcol)
        s.skip_ws()
        owner = int(s.take(r"[01]", "owner (0 or 1)").group(0))
        s.skip_ws()
        scol = s.pos + 1
        succs = _int_list(s.take(r"\d+(?:,\d+)*", "successor list").group(0))
        s.skip_ws()
        name = None
        if s.pos < len(s.text) and s.text[s.pos] == '"':
            name = s.take(r'"([^"]*)"', "closing quote").group(1)
            s.skip_ws()
        s.take(r";", "';'")
        s.expect_end()
        records[vid] = (prios, owner, succs, name, lineno, scol)

    if header is None:
        raise ParseError("missing header", 1, 1)
    if not records:
        raise ParseError("no vertex records", 1, 1)

    ids = sorted(records)
    dense = {vid: i for i, vid in enumerate(ids)}
    named = any(records[vid][3] is not None for vid in ids)
    builder = GraphBuilder()
    for vid in ids:
        prios, owner, succs, name, lineno, scol = records[vid]
        label = None
        if named:
            label = name if name is not None else str(vid)
        builder.add_vertex(owner, label)
    for vid in ids:
        prios, owner, succs, name, lineno, scol = records[vid]
        for t in succs:
            if t not in dense:
                raise ParseError("successor %d has no record" % t, lineno, scol)
            try:
                builder.add_edge(dense[vid], dense[t])
            except ValueError as exc:
                raise ParseError(str(exc), lineno, scol) from exc
    g = builder.build()

    objectives = []
    for i in range(header[1]):
        vals = np.array([records[vid][0][i] for vid in ids], dtype=np.int64)
        objectives.append(PriorityFunction(vals))
    return g, objectives


def emit_game(g: GameGraph, objectives) -> str:
    """Serialize a graph with its objectives in the normal form."""
    objectives = list(objectives)
    if not objectives:
        raise ValueError("need at least one objective")
    for pf in objectives:
        if len(pf) != g.vertex_count:
            raise ValueError("priority function does not cover the vertex set")
    k = len(objectives)
    if k == 1:
        lines = ["parity %d;" % (g.vertex_count - 1)]
    else:
        lines = ["genparity %d %d;" % (g.vertex_count - 1, k)]
    for v in g.vertices():
        prios = ",".join(str(pf.of(v)) for pf in objectives)
        succs = ",".join(str(int(t)) for t in g.successors(v))
        name = ""
        if g.names is not None:
            label = g.names[v]
            if '"' in label or any(ord(c) > 127 for c in label):
                raise ValueError("vertex name %r not serializable" % label)
            name = ' "%s"' % label
        lines.append("%d %s %d %s%s;" % (v, prios, g.owner_of(v), succs, name))
    return "\n".join(lines) + "\n"


# -- template and strategy text -------------------------------------------


def _vertex_token(g: GameGraph, v: int) -> str:
    return g.name_of(v)


def _edge_token(g: GameGraph, e: Edge) -> str:
    return "(%s,%s)" % (_vertex_token(g, e[0]), _vertex_token(g, e[1]))


def _resolve_vertex(g: GameGraph, token: str, lineno: int, col: int) -> int:
    if g.names is not None:
        try:
            return g.id_of(token)
        except KeyError:
            pass
    if token.isdigit():
        v = int(token)
        if v < g.vertex_count:
            return v
    raise ParseError("unknown vertex %r" % token, lineno, col)


_EDGE_RE = re.compile(r"\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)")


def _parse_edge_list(g: GameGraph, s: _Scanner) -> list[Edge]:
    edges = []
    while True:
        s.skip_ws()
        if s.pos == len(s.text):
            return edges
        col = s.pos + 1
        m = _EDGE_RE.match(s.text, s.pos)
        if m is None:
            s.error("edge of the form (u,v)")
        s.pos = m.end()
        u = _resolve_vertex(g, m.group(1), s.lineno, col)
        v = _resolve_vertex(g, m.group(2), s.lineno, col)
        if not g.has_edge(u, v):
            raise ParseError("no such edge (%s,%s)" % (m.group(1), m.group(2)),
                             s.lineno, col)
        edges.append((u, v))


def template_text(t: StrategyTemplate) -> str:
    """Render a template: region vertices, unsafe and co-live edge lists,
    one live-group line per group."""
    g = t.graph

    def edge_list(edges) -> str:
        return " ".join(_edge_token(g, e) for e in sorted(edges))

    lines = ["region:" + "".join(" " + _vertex_token(g, v)
                                 for v in sorted(t.winning_region))]
    lines.append(("unsafe: " + edge_list(t.unsafe_edges)).rstrip())
    lines.append(("colive: " + edge_list(t.colive_edges)).rstrip())
    for lg in t.live_groups:
        lines.append("live-group: " + edge_list(lg.edges))
    return "\n".join(lines) + "\n"


def parse_template(text: str, g: GameGraph) -> StrategyTemplate:
    region = None
    unsafe: list[Edge] = []
    colive: list[Edge] = []
    groups: list[list[Edge]] = []
    for lineno, raw in _content_lines(text):
        s = _Scanner(raw, lineno)
        s.skip_ws()
        head = s.take(r"[a-z-]+:", "section label")
        label = head.group(0)[:-1]
        if label == "region":
            if region is not None:
                s.error("duplicate region section")
            region = []
            while True:
                s.skip_ws()
                if s.pos == len(s.text):
                    break
                col = s.pos + 1
                tok = s.take(r"[^\s()]+", "vertex").group(0)
                region.append(_resolve_vertex(g, tok, lineno, col))
        elif label == "unsafe":
            unsafe.extend(_parse_edge_list(g, s))
        elif label == "colive":
            colive.extend(_parse_edge_list(g, s))
        elif label == "live-group":
            groups.append(_parse_edge_list(g, s))
        else:
            s.pos -= len(head.group(0))
            s.error("unknown section %r" % label)
    if region is None:
        raise ParseError("missing region section", 1, 1)
    return StrategyTemplate.from_edges(g, unsafe=unsafe, colive=colive,
                                       live_groups=groups, region=region)


def strategy_text(s: Strategy) -> str:
    """One line per vertex with moves, edges in rotation order."""
    g = s.graph
    lines = []
    for v in s.domain_vertices():
        edges = " ".join(_edge_token(g, e) for e in s.allowed(int(v)))
        lines.append("%s: %s" % (_vertex_token(g, int(v)), edges))
    return "\n".join(lines) + "\n"


def parse_strategy(text: str, g: GameGraph) -> Strategy:
    per_vertex: dict[int, list[int]] = {}
    for lineno, raw in _content_lines(text):
        s = _Scanner(raw, lineno)
        s.skip_ws()
        col = s.pos + 1
        tok = s.take(r"[^\s:]+", "vertex").group(0)
        v = _resolve_vertex(g, tok, lineno, col)
        if g.owner_of(v) != PLAYER0:
            raise ParseError("vertex %r is not player-0" % tok, lineno, col)
        if v in per_vertex:
            raise ParseError("duplicate line for vertex %r" % tok, lineno, col)
        s.skip_ws()
        s.take(r":", "':'")
        edges = _parse_edge_list(g, s)
        if not edges:
            s.error("empty move list")
        for (u, w) in edges:
            if u != v:
                raise ParseError("edge (%s,%s) does not start at %s"
                                 % (g.name_of(u), g.name_of(w), tok), lineno, col)
        per_vertex[v] = [g.edge_id(u, w) for (u, w) in edges]

    n = g.vertex_count
    counts = np.zeros(n, dtype=np.int64)
    for v, ids in per_vertex.items():
        counts[v] = len(ids)
    off = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=off[1:])
    order = np.zeros(int(off[-1]), dtype=np.int64)
    for v, ids in per_vertex.items():
        order[off[v]:off[v + 1]] = ids
    live = np.zeros(len(order), dtype=np.bool_)
    region = np.zeros(n, dtype=np.bool_)
    for v in per_vertex:
        region[v] = True
    return Strategy(g, off, order, live, region)
