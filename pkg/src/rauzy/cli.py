"""Command line entry point: ``rauzy <command> --source ...``.

Exit codes: 0 on success, 2 when a verdict is undecided or a horizon was
hit, 1 on errors and failed checks.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import analysis
from .corpus import CORPUS
from .errors import ConfigError, HorizonExceeded, RauzyError
from .evolution import detect_period, run_protocol
from .rauzy_graph import build_rauzy_graph, graph_report, path_of_word, word_of_path
from .scheme import FAIL, PASS, UNVERIFIED, build_scheme_from_rauzy, find_clean_order, validate_scheme
from .words import FactorOracle, PurelyMorphic, load_source
from .words.oracle import DEFAULT_HORIZON

OK, ERROR, UNDECIDED = 0, 1, 2
FORMATS = ("json", "csv", "dot", "text")
COMMANDS = ("word", "analyze", "graph", "scheme", "protocol", "verify")


@dataclass(frozen=True)
class RunConfig:
    command: str
    source: str | None = None
    k0: int = 1
    steps: int = 20
    length: int = 30
    horizon: int = DEFAULT_HORIZON
    bound_paths: int = 6
    bound_factors: int = 20
    path_cap: int = 64
    format: str = "text"
    out: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}; expected one of {', '.join(FORMATS)}")
        for name in ("k0", "steps", "length", "horizon", "bound_paths", "bound_factors", "path_cap"):
            if getattr(self, name) < 1:
                raise ConfigError(f"--{name.replace('_', '-')} must be positive")
        if self.command != "verify" and not self.source:
            raise ConfigError(f"{self.command} needs --source")


@dataclass
class Result:
    text: str
    code: int = OK


def resolve_source(spec: str):
    path = Path(spec)
    if path.is_file():
        return load_source(path)[0]
    if spec in CORPUS:
        return CORPUS[spec]()
    raise ConfigError(f"{spec!r} is neither a file nor a corpus name ({', '.join(sorted(CORPUS))})")


def _oracle(cfg: RunConfig) -> FactorOracle:
    return FactorOracle(resolve_source(cfg.source), horizon=cfg.horizon)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _notice(msg: str) -> None:
    print(f"notice: {msg}", file=sys.stderr)


def _verdict_dict(v) -> dict:
    return {"verdict": type(v).__name__, **asdict(v)}


def cmd_word(cfg: RunConfig) -> Result:
    oracle = _oracle(cfg)
    prefix = oracle.prefix(cfg.length)
    if cfg.format == "json":
        return Result(_dump({"schema": "rauzy.word/1", "source": oracle.source.describe(), "prefix": prefix}))
    return Result(prefix + "\n")


def cmd_analyze(cfg: RunConfig) -> Result:
    oracle = _oracle(cfg)
    n = cfg.length
    comp = analysis.complexity_profile(oracle, n)
    rec = analysis.recurrence_exponent(oracle, n)
    period = analysis.periodicity_probe(oracle, n)
    probes = {"periodicity": _verdict_dict(period),
              "balance": _verdict_dict(analysis.balance_check(oracle, min(n, 20)))}
    base = getattr(oracle.source, "base", oracle.source)
    if isinstance(base, PurelyMorphic):
        probes["uniform_recurrence"] = _verdict_dict(analysis.uniform_recurrence_probe(base))
    code = UNDECIDED if any(p["verdict"] == "Undecided" for p in probes.values()) else OK
    if cfg.format == "csv":
        return Result(comp.to_csv(), code)
    if cfg.format == "json":
        d = {"schema": analysis.SCHEMA, "complexity": comp.to_dict(), "recurrence": rec.to_dict(), "probes": probes}
        return Result(_dump(d), code)
    lines = [f"P(1..{n}) = {list(comp.values)}",
             f"max P(N+1)-P(N) = {analysis.first_difference_bound(comp)}" if n > 1 else "",
             f"P2 defined at {len(rec.defined())} of {n} lengths (window {rec.window})"]
    lines += [f"{name}: {v}" for name, v in probes.items()]
    return Result("\n".join(x for x in lines if x) + "\n", code)


def cmd_graph(cfg: RunConfig) -> Result:
    oracle = _oracle(cfg)
    g = build_rauzy_graph(oracle, cfg.k0)
    if cfg.format == "dot":
        return Result(g.to_dot())
    rep = graph_report(g)
    d = {"schema": "rauzy.graph/1", "k": g.k, "vertices": list(g.vertices), "edges": list(g.edges),
         "collecting": list(rep.collecting), "distributing": list(rep.distributing),
         "strongly_connected": rep.strongly_connected, "cycle": rep.cycle}
    if cfg.format == "json":
        return Result(_dump(d))
    return Result(f"G_{g.k}: {len(g.vertices)} vertices, {len(g.edges)} edges, "
                  f"bispecial {list(rep.bispecial)}, strongly connected {rep.strongly_connected}\n")


def _clean_order(oracle: FactorOracle, k0: int) -> int:
    k = find_clean_order(oracle, k0)
    if k != k0:
        _notice(f"order {k0} is not clean; using the first clean order {k}")
    return k


def cmd_scheme(cfg: RunConfig) -> Result:
    oracle = _oracle(cfg)
    s = build_scheme_from_rauzy(oracle, _clean_order(oracle, cfg.k0))
    rep = validate_scheme(s, oracle, L=cfg.bound_paths, M=cfg.bound_factors)
    statuses = {v.status for v in rep.verdicts.values()}
    code = ERROR if FAIL in statuses else UNDECIDED if UNVERIFIED in statuses else OK
    if cfg.format == "dot":
        return Result(s.to_dot(), code)
    if cfg.format == "json":
        report = {k: {"status": v.status, "detail": v.detail} for k, v in rep.verdicts.items()}
        return Result(_dump({"schema": "rauzy.scheme-report/1", "scheme": s.to_dict(),
                             "bounds": {"paths": cfg.bound_paths, "factors": cfg.bound_factors},
                             "report": report}), code)
    return Result(f"order {s.order}: {s.num_vertices} vertices, {len(s.edges)} edges\n{rep}\n", code)


def cmd_protocol(cfg: RunConfig) -> Result:
    oracle = _oracle(cfg)
    k = _clean_order(oracle, cfg.k0)
    proto = run_protocol(oracle, k, cfg.steps, keep_schemes=cfg.format == "dot")
    period = detect_period(proto)
    code = OK
    if proto.error:
        code = UNDECIDED if proto.error.startswith(HorizonExceeded.__name__) else ERROR
        _notice(f"run stopped after {len(proto)} steps: {proto.error}")
    if cfg.format == "dot":
        return Result("".join(sch.to_dot(f"step{i}") for i, sch in enumerate(proto.schemes)), code)
    if cfg.format == "json":
        d = proto.to_dict(period)
        d["period_verdict"] = None if period is None else [period.preperiod, period.period]
        return Result(_dump(d), code)
    found = "none" if period is None else f"preperiod {period.preperiod}, period {period.period}"
    return Result(f"order {proto.order}, {len(proto)} steps, scales {proto.scales[:1]}..{proto.scales[-1:]}\n"
                  f"period: {found}\n", code)


def _verify_source(name: str, cfg: RunConfig, rng: random.Random) -> dict:
    """Invariant checks for one corpus word; values are PASS, FAIL or UNVERIFIED."""
    oracle = FactorOracle(CORPUS[name](), horizon=cfg.horizon)
    out: dict[str, str] = {}
    try:
        comp = analysis.complexity_profile(oracle, cfg.length)
        out["complexity nondecreasing"] = PASS if min(comp.differences) >= 0 else FAIL
        buf = oracle.prefix(4096)
        sample = [buf[i:i + rng.randint(1, 12)] for i in (rng.randrange(4000) for _ in range(50))]
        out["oracle agrees with scan"] = PASS if all(oracle.contains(u) for u in sample) else FAIL
        k = find_clean_order(oracle, 1)
        g = build_rauzy_graph(oracle, k)
        out["word/path round trip"] = PASS if all(
            word_of_path(g, path_of_word(g, u)) == u for u in sample if len(u) >= k) else FAIL
        proto = run_protocol(oracle, k, cfg.steps, keep_schemes=True)
        worst = PASS
        for s in proto.schemes:
            rep = validate_scheme(s, oracle, L=cfg.bound_paths, M=cfg.bound_factors)
            if not rep.ok:
                worst = FAIL
                break
        out[f"schemes valid along {len(proto)} steps"] = worst
        if proto.error:
            out["protocol complete"] = UNVERIFIED
    except HorizonExceeded:
        out["horizon"] = UNVERIFIED
    return out


def cmd_verify(cfg: RunConfig) -> Result:
    rng = random.Random(cfg.seed)
    names = [cfg.source] if cfg.source else sorted(CORPUS)
    for name in names:
        if name not in CORPUS:
            raise ConfigError(f"verify runs on corpus names, not {name!r}")
    results = {name: _verify_source(name, cfg, rng) for name in names}
    statuses = {v for r in results.values() for v in r.values()}
    code = ERROR if FAIL in statuses else UNDECIDED if UNVERIFIED in statuses else OK
    if cfg.format == "json":
        return Result(_dump({"schema": "rauzy.verify/1", "seed": cfg.seed, "results": results}), code)
    lines = [f"{name:24s} {check:36s} {status}" for name, r in results.items() for check, status in r.items()]
    return Result("\n".join(lines) + "\n", code)


HANDLERS = {"word": cmd_word, "analyze": cmd_analyze, "graph": cmd_graph, "scheme": cmd_scheme,
            "protocol": cmd_protocol, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rauzy", description="Rauzy graphs, Rauzy schemes and evolution protocols.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--source", help="source file (morphism or key=value config) or corpus name")
    p.add_argument("--k0", type=int, default=1, help="starting order (bumped to the first clean order)")
    p.add_argument("--steps", type=int, default=20, help="protocol steps")
    p.add_argument("--length", type=int, default=30, help="prefix length / analysis bound N")
    p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON, help="largest prefix the oracle may generate")
    p.add_argument("--bound-paths", type=int, default=6, help="validator path bound L (edges)")
    p.add_argument("--bound-factors", type=int, default=20, help="validator factor bound M (letters)")
    p.add_argument("--format", default="text", help="json | csv | dot | text")
    p.add_argument("--out", help="write the output here instead of stdout")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.command, args.source, args.k0, args.steps, args.length, args.horizon,
                        args.bound_paths, args.bound_factors, format=args.format, out=args.out, seed=args.seed)
        result = HANDLERS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR
    except HorizonExceeded as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return UNDECIDED
    except RauzyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return ERROR
    if cfg.out:
        Path(cfg.out).write_text(result.text)
    else:
        sys.stdout.write(result.text)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
