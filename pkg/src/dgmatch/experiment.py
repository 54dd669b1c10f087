"""Batch experiments: distributed runs compared with the sequential greedy
matcher and, on small graphs, the exact optimum."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .graph import GraphError, WeightedGraph, format_weight, generate, random_corpus, read_graph
from .reference import DEFAULT_ORACLE_LIMIT, optimal_matching, sequential_greedy
from .sim import Scheduler, all_passed, check_trace, simulate

WEIGHT_ALIASES = {
    "distinct": "distinct_random",
    "uniform": "uniform_random",
    "equal": "all_equal",
    "adversarial": "adversarial_half_ratio",
}

NOT_VERIFIED = "not verified"


def parse_weights(text: str):
    """A policy name (or short alias) or a comma-separated list of exact weights."""
    text = text.strip()
    if text in WEIGHT_ALIASES:
        return WEIGHT_ALIASES[text]
    if text[:1].isalpha():
        return text
    if "." in text:
        raise GraphError("weights must be integers or p/q rationals")
    try:
        ws = [Fraction(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise GraphError(f"bad weight list {text!r}") from None
    return [w.numerator if w.denominator == 1 else w for w in ws]


def parse_gen_spec(spec: str, rep: int = 0) -> WeightedGraph:
    """Build a graph from ``kind:n[:key=value...]``.

    Keys: ``seed``, ``weights``, ``p``, ``parts`` (``AxB``), ``base``.  The
    repetition number ``rep`` is added to the seed.
    """
    head, *opts = spec.split(":")
    if not opts:
        raise GraphError(f"generator spec {spec!r} needs at least 'kind:n'")
    kind, n_text, opts = head, opts[0], opts[1:]
    try:
        n = int(n_text)
        kw = dict(o.split("=", 1) for o in opts)
        seed = int(kw.pop("seed", 0)) + rep
        weights = parse_weights(kw.pop("weights", "distinct"))
        p = float(kw.pop("p", 0.5))
        parts = tuple(int(x) for x in kw.pop("parts").split("x")) if "parts" in kw else None
        base = int(kw.pop("base", 1000))
    except ValueError as exc:
        raise GraphError(f"bad generator spec {spec!r}: {exc}") from None
    if kw:
        raise GraphError(f"unknown generator options {sorted(kw)} in {spec!r}")
    return generate(kind, n, seed, weights, p=p, parts=parts, base=base)


@dataclass
class ExperimentConfig:
    graph_files: Sequence[str] = ()
    generators: Sequence[str] = ()
    corpus: Optional[Tuple[int, int, int]] = None  # (count, max_n, seed)
    schedulers: Sequence[str] = ("random",)
    seeds: Sequence[int] = (0,)
    repetitions: int = 1
    check: bool = True
    oracle_limit: int = DEFAULT_ORACLE_LIMIT

    def __post_init__(self):
        if not (self.graph_files or self.generators or self.corpus):
            raise ValueError("an experiment needs at least one graph source")
        if len(set(self.seeds)) != len(self.seeds) or not self.seeds:
            raise ValueError("seeds must be a non-empty list of distinct integers")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        self.schedulers = tuple(Scheduler(p).policy for p in self.schedulers)

    def graphs(self) -> List[Tuple[str, WeightedGraph]]:
        out = []
        for path in self.graph_files:
            out.append((Path(path).name, read_graph(path)))
        for spec in self.generators:
            for r in range(self.repetitions):
                gid = spec if self.repetitions == 1 else f"{spec}#{r}"
                out.append((gid, parse_gen_spec(spec, r)))
        if self.corpus:
            count, max_n, seed = self.corpus
            for i, g in enumerate(random_corpus(count, max_n, seed)):
                out.append((f"corpus-{i:05d}", g))
        return out


@dataclass(frozen=True)
class ReportRow:
    graph_id: str
    n: int
    m: int
    scheduler: str
    seed: int
    distributed: object
    sequential: object
    optimal: object  # weight, or None when above the oracle limit
    messages_total: int
    same_as_sequential: bool
    checks: str
    checks_ok: bool
    pairs: Tuple[Tuple[int, int], ...]

    @property
    def ratio(self) -> Optional[Fraction]:
        if self.optimal is None:
            return None
        return Fraction(1) if self.optimal == 0 else Fraction(self.distributed) / Fraction(self.optimal)

    @property
    def ok(self) -> bool:
        ratio = self.ratio
        return self.checks_ok and self.same_as_sequential and (ratio is None or Fraction(1, 2) <= ratio <= 1)

    def as_dict(self) -> Dict[str, object]:
        ratio = self.ratio
        return {
            "graph": self.graph_id,
            "n": self.n,
            "m": self.m,
            "scheduler": self.scheduler,
            "seed": self.seed,
            "distributed": format_weight(self.distributed),
            "sequential": format_weight(self.sequential),
            "optimal": NOT_VERIFIED if self.optimal is None else format_weight(self.optimal),
            "ratio": NOT_VERIFIED if ratio is None else format_weight(ratio),
            "ratio_float": "" if ratio is None else f"{float(ratio):.6f}",
            "messages": self.messages_total,
            "msg_per_2m": f"{self.messages_total / (2 * self.m):.6f}" if self.m else "0.000000",
            "same_as_seq": self.same_as_sequential,
            "checks": self.checks,
            "ok": self.ok,
        }


@dataclass
class ExperimentReport:
    rows: List[ReportRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def summary(self) -> Dict[str, object]:
        ratios = [r.ratio for r in self.rows if r.ratio is not None]
        per_graph: Dict[str, set] = {}
        for r in self.rows:
            per_graph.setdefault(r.graph_id, set()).add(r.pairs)
        load = [r.messages_total / (2 * r.m) for r in self.rows if r.m]
        return {
            "runs": len(self.rows),
            "graphs": len(per_graph),
            "verified_runs": len(ratios),
            "min_ratio": format_weight(min(ratios)) if ratios else NOT_VERIFIED,
            "mean_ratio": f"{float(sum(ratios) / len(ratios)):.6f}" if ratios else NOT_VERIFIED,
            "max_msg_per_2m": f"{max(load):.6f}" if load else "0.000000",
            "graphs_with_multiple_matchings": sum(len(s) > 1 for s in per_graph.values()),
            "failed_runs": sum(not r.ok for r in self.rows),
            "ok": self.ok,
        }

    def render(self, fmt: str = "text") -> str:
        dicts = [r.as_dict() for r in self.rows]
        if fmt == "jsonl":
            lines = [json.dumps(d, sort_keys=True) for d in dicts]
            lines.append(json.dumps({"summary": self.summary()}, sort_keys=True))
            return "\n".join(lines) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            cols = list(dicts[0]) if dicts else list(ReportRow.__dataclass_fields__)
            w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
            w.writeheader()
            w.writerows(dicts)
            return buf.getvalue()
        if fmt == "text":
            lines = []
            for d in dicts:
                lines.append(
                    f"{d['graph']:<28} n={d['n']:<3} m={d['m']:<4} {d['scheduler']:<22} seed={d['seed']:<4} "
                    f"dist={d['distributed']:<8} seq={d['sequential']:<8} opt={d['optimal']:<12} "
                    f"ratio={d['ratio']:<12} msgs={d['messages']:<4} {'ok' if d['ok'] else 'FAIL'}")
            lines += [f"{k}: {v}" for k, v in self.summary().items()]
            return "\n".join(lines) + "\n"
        raise ValueError(f"unknown format {fmt!r}")


def run_one(graph_id: str, g: WeightedGraph, scheduler: Scheduler, *, check: bool = True,
            oracle_limit: int = DEFAULT_ORACLE_LIMIT, seq=None, opt=None) -> ReportRow:
    """Simulate once and compare against the reference matchers."""
    m, trace, stats = simulate(g, scheduler)
    seq = seq if seq is not None else sequential_greedy(g)
    if opt is None and g.vertex_count <= oracle_limit:
        opt = optimal_matching(g, oracle_limit)
    if check:
        verdicts = check_trace(g, trace)
        checks, checks_ok = " ".join(f"{v.name}={'pass' if v.passed else 'FAIL'}" for v in verdicts), all_passed(verdicts)
    else:
        checks, checks_ok = "skipped", True
    return ReportRow(
        graph_id=graph_id, n=g.vertex_count, m=g.edge_count,
        scheduler=scheduler.policy, seed=scheduler.seed,
        distributed=m.total_weight, sequential=seq.total_weight,
        optimal=None if opt is None else opt.total_weight,
        messages_total=stats.messages_total, same_as_sequential=(m == seq),
        checks=checks, checks_ok=checks_ok, pairs=tuple(m.pairs),
    )


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run every graph under every scheduler policy and seed.

    ``fifo``, ``lifo`` and ``adversarial_heavy_last`` ignore the seed, so they
    run once per graph (recorded with the first seed).  Rows come out sorted
    by graph order, then policy, then seed.
    """
    report = ExperimentReport()
    for gid, g in config.graphs():
        seq = sequential_greedy(g)
        opt = optimal_matching(g, config.oracle_limit) if g.vertex_count <= config.oracle_limit else None
        for policy in config.schedulers:
            seeds = config.seeds if policy == "random" else config.seeds[:1]
            for seed in seeds:
                report.rows.append(run_one(gid, g, Scheduler(policy, seed), check=config.check,
                                           oracle_limit=config.oracle_limit, seq=seq, opt=opt))
    return report
