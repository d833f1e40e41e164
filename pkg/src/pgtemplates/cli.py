"""Command line front end.

Exit codes: 0 success, 2 parse or usage error, 3 template conflict,
4 verification failed, 5 size guard tripped.
"""
from __future__ import annotations

import argparse
import sys
import time

from .compose import ComposeState, add_objective, compose_templates
from .fault import (CSV_HEADER, fault_correction, gaf_tolerant,
                    simulate_fault_conflicts)
from .gameio import (ParseError, _EDGE_RE, emit_game, parse_game,
                     parse_strategy, parse_template, strategy_text,
                     template_text)
from .generator import GeneratorConfig, generate
from .graph import GameGraph, GraphBuildError
from .oracle import OracleSizeError, brute_force_gen_parity_region, zielonka_regions
from .solvers import parity_template
from .strategy import extract_strategy, verify_strategy
from .template import ConflictError


def _read(path: str) -> str:
    with open(path, "r", encoding="ascii") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)


def _load_game(path: str):
    return parse_game(_read(path))


def _vertex_arg(g: GameGraph, token: str) -> int:
    token = token.strip()
    if g.names is not None:
        try:
            return g.id_of(token)
        except KeyError:
            pass
    if token.isdigit() and int(token) < g.vertex_count:
        return int(token)
    raise ValueError("unknown vertex %r" % token)


def _vertex_list(g, vs) -> str:
    return " ".join(g.name_of(int(v)) for v in sorted(vs))


def _edge_list_arg(g: GameGraph, text: str) -> list[tuple[int, int]]:
    edges = []
    pos = 0
    while pos < len(text):
        if text[pos] in " ,\t":
            pos += 1
            continue
        m = _EDGE_RE.match(text, pos)
        if m is None:
            raise ValueError("expected an edge of the form (u,v) at %r"
                             % text[pos:])
        u = _vertex_arg(g, m.group(1))
        v = _vertex_arg(g, m.group(2))
        if not g.has_edge(u, v):
            raise ValueError("no such edge (%s,%s)" % (m.group(1), m.group(2)))
        edges.append((u, v))
        pos = m.end()
    return edges


def _pick_objective(objectives, index: int):
    if not 0 <= index < len(objectives):
        raise ValueError("objective index %d out of range (file has %d)"
                         % (index, len(objectives)))
    return objectives[index]


def _emit_template(t, output: str | None) -> None:
    text = template_text(t)
    sys.stdout.write(text)
    if output:
        _write(output, text)


def _cmd_solve(args) -> int:
    g, objectives = _load_game(args.file)
    pf = _pick_objective(objectives, args.objective)
    result = parity_template(g, pf)
    print("W0: " + _vertex_list(g, result.winning_region0))
    _emit_template(result.template, args.output)
    return 0


GAP_NOTE = ("note: composition is sound but not complete; an empty region "
            "may still be winnable (see README, 'Incompleteness of "
            "composition').")


def _cmd_compose(args) -> int:
    g, objectives = _load_game(args.file)
    state = ComposeState.initial(g)
    if args.incremental:
        t0 = time.perf_counter()
        template = None
        for step, pf in enumerate(objectives, 1):
            state, template = add_objective(g, state, pf)
            elapsed = time.perf_counter() - t0
            print("step %d: W0 = %s (cumulative %.3fs)"
                  % (step, _vertex_list(g, state.winning_region) or "(empty)",
                     elapsed))
    else:
        state, template = compose_templates(g, state, objectives)
        print("W0: " + (_vertex_list(g, state.winning_region) or "(empty)"))
    if not state.winning_region:
        print(GAP_NOTE)
    _emit_template(template, args.output)
    return 0


def _cmd_extract(args) -> int:
    g, _ = _load_game(args.file)
    t = parse_template(_read(args.template), g)
    s = extract_strategy(g, t)
    text = strategy_text(s)
    sys.stdout.write(text)
    if args.output:
        _write(args.output, text)
    return 0


def _cmd_verify(args) -> int:
    g, objectives = _load_game(args.file)
    if args.template:
        t = parse_template(_read(args.template), g)
        s = extract_strategy(g, t)
    else:
        s = parse_strategy(_read(args.strategy), g)
    start = None
    if args.start:
        start = [_vertex_arg(g, tok) for tok in args.start.split(",")]
    verdict = verify_strategy(g, s, objectives, start=start)
    if verdict.is_winning:
        print("winning from: " + _vertex_list(g, verdict.queried))
        return 0
    print("not winning from: " + _vertex_list(g, verdict.losing_from))
    lasso = verdict.counterexample
    if lasso is not None:
        print("counterexample prefix: " + " ".join(g.name_of(v) for v in lasso.prefix))
        print("counterexample cycle: " + " ".join(g.name_of(v) for v in lasso.cycle))
    return 4


def _cmd_fault(args) -> int:
    g, objectives = _load_game(args.file)
    t = parse_template(_read(args.template), g)
    faulty = _edge_list_arg(g, args.faulty)
    if args.gaf:
        ok, offenders = gaf_tolerant(g, t, faulty)
        if ok:
            print("tolerant: every region vertex keeps a usable edge")
            return 0
        print("vulnerable at: " + _vertex_list(g, offenders))
        return 4
    pf = _pick_objective(objectives, args.objective)
    adapted = fault_correction(g, pf, t, faulty)
    if adapted.graph is g:
        print("adapted by marking the faulty edges unsafe")
    else:
        print("conflict; re-solved on the graph without the faulty edges")
    sys.stdout.write(template_text(adapted))
    if args.output:
        _write(args.output, template_text(adapted))
    return 0


def _cmd_gen(args) -> int:
    config = GeneratorConfig(objective_count=args.objectives,
                             max_priority=args.max_priority, seed=args.seed,
                             vertex_count=args.vertices, edge_count=args.edges)
    g, objectives = generate(config)
    text = emit_game(g, objectives)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_oracle(args) -> int:
    g, objectives = _load_game(args.file)
    if len(objectives) == 1:
        regions = zielonka_regions(g, objectives[0])
        w0 = g.set_of(regions.w0_mask)
    else:
        w0 = g.set_of(brute_force_gen_parity_region(g, objectives))
    print("W0: " + (_vertex_list(g, w0) or "(empty)"))
    print("W1: " + (_vertex_list(g, set(g.vertices()) - w0) or "(empty)"))
    return 0


def _cmd_bench_fault(args) -> int:
    fractions = [float(tok) for tok in args.fraction.split(",")]
    for f in fractions:
        if not 0.0 <= f <= 1.0:
            raise ValueError("fault fraction %g outside [0, 1]" % f)
    per_fraction = {f: [0, 0, 0.0] for f in fractions}  # conflicts, trials, vf sum
    for i in range(args.games):
        config = GeneratorConfig(objective_count=1,
                                 max_priority=args.max_priority,
                                 seed=args.seed + i,
                                 vertex_count=args.vertices,
                                 edge_count=args.edges)
        g, objectives = generate(config)
        template = parity_template(g, objectives[0]).template
        for f in fractions:
            stats = simulate_fault_conflicts(g, objectives[0], f, args.trials,
                                             seed=args.seed + i,
                                             template=template)
            acc = per_fraction[f]
            acc[0] += round(stats.conflict_rate * stats.trials)
            acc[1] += stats.trials
            acc[2] += stats.mean_conflict_vertex_fraction * stats.trials
    print(CSV_HEADER)
    for f in fractions:
        conflicts, trials, vf_sum = per_fraction[f]
        print("%g,%d,%g,%g" % (f, trials, conflicts / max(trials, 1),
                               vf_sum / max(trials, 1)))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pgt",
        description="Permissive strategy templates for games on graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one parity objective")
    p.add_argument("file")
    p.add_argument("--objective", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("compose", help="combine all objectives of the file")
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--one-shot", dest="incremental", action="store_false")
    mode.add_argument("--incremental", dest="incremental", action="store_true")
    p.set_defaults(incremental=False)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_compose)

    p = sub.add_parser("extract", help="turn a template into a strategy")
    p.add_argument("file")
    p.add_argument("--template", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("verify", help="check a template or strategy")
    p.add_argument("file")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--template")
    src.add_argument("--strategy")
    p.add_argument("--from", dest="start",
                   help="comma-separated start vertices (default: whole domain)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("fault", help="adapt a template to faulty edges")
    p.add_argument("file")
    p.add_argument("--template", required=True)
    p.add_argument("--faulty", required=True,
                   help="edge list such as \"(u,v),(u,w)\"")
    p.add_argument("--gaf", action="store_true",
                   help="only check tolerance against intermittent faults")
    p.add_argument("--objective", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_fault)

    p = sub.add_parser("gen", help="generate a random game file")
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--objectives", type=int, default=1)
    p.add_argument("--max-priority", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("oracle", help="reference regions (small games only)")
    p.add_argument("file")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("bench", help="benchmarks")
    bench_sub = p.add_subparsers(dest="benchmark", required=True)
    b = bench_sub.add_parser("fault", help="fault conflict statistics as CSV")
    b.add_argument("--fraction", default="0.05,0.1,0.2,0.3",
                   help="comma-separated fault fractions")
    b.add_argument("--trials", type=int, default=20)
    b.add_argument("--games", type=int, default=50)
    b.add_argument("--vertices", type=int, default=30)
    b.add_argument("--edges", type=int, default=90)
    b.add_argument("--max-priority", type=int, default=3)
    b.add_argument("--seed", type=int, default=1)
    b.set_defaults(func=_cmd_bench_fault)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print("parse error: %s" % exc, file=sys.stderr)
        return 2
    except ConflictError as exc:
        print("conflict: %s" % exc, file=sys.stderr)
        return 3
    except OracleSizeError as exc:
        print("size guard: %s" % exc, file=sys.stderr)
        return 5
    except (OSError, GraphBuildError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
