"""Command-line front end: ``dgmatch {gen,run,seq,opt,experiment}``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .experiment import ExperimentConfig, parse_weights, run_experiment, run_one
from .graph import GraphError, format_weight, generate, read_graph, serialize_graph
from .reference import DEFAULT_ORACLE_LIMIT, OracleLimitError, optimal_matching, sequential_greedy
from .sim import POLICIES, ProtocolViolation, Scheduler, check_trace, simulate

SCHEDULER_CHOICES = ("random", "fifo", "lifo", "adversarial", "adversarial_heavy_last")


def _seed_list(text: str) -> List[int]:
    """``"0:50"`` (half-open range) or ``"1,4,9"``."""
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi)))
    return [int(t) for t in text.split(",") if t.strip()]


def _fmt_pairs(m) -> str:
    return " ".join(f"({u},{v})" for u, v in m.pairs) or "-"


def cmd_gen(args) -> int:
    parts = tuple(int(x) for x in args.parts.split("x")) if args.parts else None
    g = generate(args.kind, args.n, args.seed, parse_weights(args.weights),
                 p=args.p, parts=parts, base=args.base)
    text = serialize_graph(g)
    if args.output:
        with open(args.output, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_run(args) -> int:
    g = read_graph(args.graph)
    sched = Scheduler(args.scheduler, args.seed)
    m, trace, stats = simulate(g, sched, continuous=args.continuous)
    if args.trace:
        with open(args.trace, "w") as f:
            trace.dump(f)
    ok = True
    verdicts = []
    seq = opt = None
    if args.check:
        verdicts = check_trace(g, trace)
        seq = sequential_greedy(g)
        ok = all(v.passed for v in verdicts) and seq == m
        if g.vertex_count <= args.oracle_limit:
            opt = optimal_matching(g, args.oracle_limit)
            ok = ok and 2 * m.total_weight >= opt.total_weight

    if args.format == "text":
        print(f"matching: {_fmt_pairs(m)}")
        print(f"weight: {format_weight(m.total_weight)}")
        print(f"messages: {stats.messages_total} (req {stats.messages_req}, drop {stats.messages_drop}, "
              f"absorbed {stats.absorbed}); 2|E| = {2 * g.edge_count}")
        print(f"steps: {stats.steps}")
        if args.check:
            for v in verdicts:
                print(f"check {v}")
            print(f"sequential: {format_weight(seq.total_weight)} "
                  f"({'same matching' if seq == m else 'DIFFERENT matching ' + _fmt_pairs(seq)})")
            if opt is None:
                print("optimal: not verified (above oracle limit)")
            else:
                print(f"optimal: {format_weight(opt.total_weight)}")
        print("result: ok" if ok else "result: FAIL")
    else:
        row = run_one(args.graph, g, sched, check=args.check, oracle_limit=args.oracle_limit)
        d = row.as_dict()
        d["pairs"] = " ".join(f"{u}-{v}" for u, v in m.pairs)
        if args.format == "jsonl":
            print(json.dumps(d, sort_keys=True))
        else:
            print(",".join(d))
            print(",".join(str(x) for x in d.values()))
    return 0 if ok else 1


def cmd_seq(args) -> int:
    m = sequential_greedy(read_graph(args.graph))
    print(f"matching: {_fmt_pairs(m)}")
    print(f"weight: {format_weight(m.total_weight)}")
    return 0


def cmd_opt(args) -> int:
    m = optimal_matching(read_graph(args.graph), args.oracle_limit)
    print(f"matching: {_fmt_pairs(m)}")
    print(f"weight: {format_weight(m.total_weight)}")
    return 0


def cmd_experiment(args) -> int:
    corpus = (args.corpus, args.max_n, args.corpus_seed) if args.corpus else None
    config = ExperimentConfig(
        graph_files=args.graph or (), generators=args.gen or (), corpus=corpus,
        schedulers=args.schedulers.split(","), seeds=_seed_list(args.seeds),
        repetitions=args.repeat, check=args.check, oracle_limit=args.oracle_limit,
    )
    report = run_experiment(config)
    sys.stdout.write(report.render(args.format))
    if args.format == "csv":
        for k, v in report.summary().items():
            print(f"{k}: {v}", file=sys.stderr)
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dgmatch", description="Distributed greedy weighted matching.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph file")
    p.add_argument("kind")
    p.add_argument("n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weights", default="distinct",
                   help="distinct|uniform|equal|adversarial or a list like 2,3,2")
    p.add_argument("--p", type=float, default=0.5, help="edge probability")
    p.add_argument("--parts", help="bipartition sizes AxB")
    p.add_argument("--base", type=int, default=1000, help="w of the (w, w+1, w) pattern")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="simulate the distributed protocol on a graph file")
    p.add_argument("graph")
    p.add_argument("--scheduler", choices=SCHEDULER_CHOICES, default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--check", action="store_true", help="check the trace and compare with references")
    p.add_argument("--continuous", action="store_true", help="snapshot live sets after every delivery")
    p.add_argument("--oracle-limit", type=int, default=DEFAULT_ORACLE_LIMIT)
    p.add_argument("--format", choices=("text", "csv", "jsonl"), default="text")
    p.add_argument("--trace", help="write the event trace as JSON lines")
    p.set_defaults(func=cmd_run)

    for name, func, helptext in (("seq", cmd_seq, "sequential greedy matching"),
                                 ("opt", cmd_opt, "exact maximum-weight matching")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("graph")
        p.add_argument("--oracle-limit", type=int, default=DEFAULT_ORACLE_LIMIT)
        p.set_defaults(func=func)

    p = sub.add_parser("experiment", help="batch runs with reference comparison")
    p.add_argument("--graph", action="append", help="graph file (repeatable)")
    p.add_argument("--gen", action="append", help="generator spec kind:n[:key=val...] (repeatable)")
    p.add_argument("--corpus", type=int, default=0, help="number of mixed random graphs")
    p.add_argument("--max-n", type=int, default=12)
    p.add_argument("--corpus-seed", type=int, default=0)
    p.add_argument("--schedulers", default="random", help=f"comma list of {','.join(POLICIES)}")
    p.add_argument("--seeds", default="0", help="'a:b' range or comma list")
    p.add_argument("--repeat", type=int, default=1, help="graph instances per generator spec")
    p.add_argument("--check", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--oracle-limit", type=int, default=DEFAULT_ORACLE_LIMIT)
    p.add_argument("--format", choices=("text", "csv", "jsonl"), default="text")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, OracleLimitError, ValueError, OSError) as exc:
        print(f"dgmatch: error: {exc}", file=sys.stderr)
        return 2
    except ProtocolViolation as exc:
        print(f"dgmatch: protocol violation: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
