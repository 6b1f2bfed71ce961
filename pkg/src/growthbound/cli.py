"""``growthbound`` command line: bound, series, jump, count, check."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import re
import sys
from dataclasses import dataclass
from typing import Optional

from growthbound import fixtures, suite
from growthbound._accel import backend
from growthbound.cache import GraphCache
from growthbound.counting import EnumerationGuardError, brute_count, fekete_check, graph_count
from growthbound.estimation import GrowthRecord, compute_bound, jump_interval, run_series
from growthbound.exponent import ExponentParseError, RationalExponent, TaskSpec, parse_exponent
from growthbound.graph import ResourceError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

log = logging.getLogger("growthbound")


@dataclass(frozen=True)
class RunConfig:
    command: str
    k: Optional[int]
    exponent: Optional[RationalExponent]
    m_from: Optional[int]
    m_to: Optional[int]
    precision: float = 1e-9
    symmetry: bool = False
    state_cap: int = 2**27
    cache: Optional[str] = None
    fmt: str = "json"
    paper_rounding: bool = False
    length: int = 14
    jobs: int = 1


def _m_range(text: str) -> tuple[int, int]:
    mt = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*", text)
    if not mt:
        raise argparse.ArgumentTypeError(f"expected INT or A..B, got {text!r}")
    a = int(mt.group(1))
    b = int(mt.group(2)) if mt.group(2) else a
    if a < 1 or b < a:
        raise argparse.ArgumentTypeError(f"bad period cap range {text!r}")
    return a, b


def _exponent(text: str) -> RationalExponent:
    try:
        return parse_exponent(text)
    except ExponentParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="growthbound", description=__doc__)
    p.add_argument("command", choices=["bound", "series", "jump", "count", "check"])
    p.add_argument("-k", type=int, help="alphabet size")
    p.add_argument("-e", "--exponent", type=_exponent, help="exponent a[/b][+], e.g. 7/3+")
    p.add_argument("-m", type=_m_range, help="period cap INT or range A..B")
    p.add_argument("-n", "--length", type=int, default=14, help="max word length for count")
    p.add_argument("--precision", type=float, default=1e-9)
    sym = p.add_mutually_exclusive_group()
    sym.add_argument("--no-symmetry", dest="symmetry", action="store_false", default=None)
    sym.add_argument("--symmetry", dest="symmetry", action="store_true")
    p.add_argument("--state-cap", type=int, default=2**27)
    p.add_argument("--cache", default=None, help="cache directory (GROWTHBOUND_CACHE overrides)")
    p.add_argument("--format", dest="fmt", choices=["json", "csv", "table"], default=None)
    p.add_argument("--paper-rounding", action="store_true", help="round to nearest like the published tables")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def parse_config(argv) -> RunConfig:
    parser = build_parser()
    a = parser.parse_args(argv)
    needs_task = a.command in ("bound", "series", "jump", "count")
    if needs_task and (a.k is None or a.exponent is None):
        parser.error(f"{a.command} needs -k and -e")
    if a.k is not None and a.k < 2:
        parser.error("-k must be at least 2")
    if a.command in ("bound", "jump", "series") and a.m is None:
        parser.error(f"{a.command} needs -m")
    if a.command in ("bound", "jump") and a.m[0] != a.m[1]:
        parser.error(f"{a.command} takes a single -m")
    if a.precision <= 0 or a.state_cap < 1 or a.length < 0 or a.jobs < 1:
        parser.error("precision, state cap and jobs must be positive")
    symmetry = a.symmetry if a.symmetry is not None else (a.k is not None and a.k >= 3)
    fmt = a.fmt or ("table" if a.command == "check" else "csv" if a.command == "count" else "json")
    m_from, m_to = a.m if a.m else (None, None)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return RunConfig(
        command=a.command,
        k=a.k,
        exponent=a.exponent,
        m_from=m_from,
        m_to=m_to,
        precision=a.precision,
        symmetry=symmetry,
        state_cap=a.state_cap,
        cache=a.cache,
        fmt=fmt,
        paper_rounding=a.paper_rounding,
        length=a.length,
        jobs=a.jobs,
    )


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2)


def _spec(cfg: RunConfig, m: int, exponent=None) -> TaskSpec:
    return TaskSpec(
        k=cfg.k,
        exponent=exponent or cfg.exponent,
        m=m,
        symmetry=cfg.symmetry,
        precision=cfg.precision,
        state_cap=cfg.state_cap,
    )


def _record_rows(records: list[GrowthRecord]) -> list[dict]:
    return [
        {
            "m": r.spec.m,
            "states": r.n_states,
            "edges": r.n_edges,
            "lo": repr(r.lo),
            "hi": repr(r.hi),
            "display_lo": r.display_lo,
            "display_hi": r.display_hi,
            "estimate": "" if r.estimate is None else repr(r.estimate),
        }
        for r in records
    ]


def _csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _table(records: list[GrowthRecord], estimate) -> str:
    lines = [f"{'m':>4}  {'states':>10}  {'upper bound':>12}"]
    for r in records:
        lines.append(f"{r.spec.m:>4}  {r.n_states:>10}  {r.display_hi:>12}")
    if estimate is not None:
        lines.append(f"{'est':>4}  {'':>10}  {estimate:>12.7f}")
    return "\n".join(lines) + "\n"


def cmd_bound(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    cache = GraphCache(cfg.cache)
    spec = _spec(cfg, cfg.m_from)
    try:
        rec = compute_bound(spec, cache, paper_rounding=cfg.paper_rounding)
    except ResourceError as exc:
        payload = {
            "spec": {"k": cfg.k, "exponent": str(cfg.exponent), "m": cfg.m_from, "symmetry": cfg.symmetry},
            "graph": {"states": exc.partial_count, "edges": None},
            "bound": None,
            "estimate": None,
            "finite": None,
            "truncated": True,
            "error": str(exc),
        }
        out.write(_dumps(payload) + "\n")
        return EXIT_RESOURCE
    if cfg.fmt == "json":
        out.write(_dumps(rec.to_dict()) + "\n")
    elif cfg.fmt == "csv":
        out.write(_csv(_record_rows([rec])))
    else:
        out.write(_table([rec], None))
    return EXIT_OK if rec.enclosure.converged else EXIT_FAIL


def cmd_series(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    cache = GraphCache(cfg.cache)
    series = run_series(
        cfg.k,
        cfg.exponent,
        cfg.m_from,
        cfg.m_to,
        precision=cfg.precision,
        state_cap=cfg.state_cap,
        symmetry=cfg.symmetry,
        loader=cache,
        jobs=cfg.jobs,
        paper_rounding=cfg.paper_rounding,
    )
    if cfg.fmt == "json":
        payload = {
            "spec": {"k": cfg.k, "exponent": str(cfg.exponent), "m": [cfg.m_from, cfg.m_to], "symmetry": cfg.symmetry},
            "records": [r.to_dict() for r in series],
            "estimate": series.estimate,
            "finite": bool(series and series[0].finite),
            "truncated": series.truncated,
        }
        out.write(_dumps(payload) + "\n")
    elif cfg.fmt == "csv":
        out.write(_csv(_record_rows(series)))
    else:
        out.write(_table(series, series.estimate))
    return EXIT_RESOURCE if series.truncated else EXIT_OK


def cmd_jump(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    cache = GraphCache(cfg.cache)
    base = cfg.exponent.with_strict(False)
    plus = cfg.exponent.with_strict(True)
    try:
        r0 = compute_bound(_spec(cfg, cfg.m_from, base), cache)
        r1 = compute_bound(_spec(cfg, cfg.m_from, plus), cache)
    except ResourceError as exc:
        out.write(_dumps({"error": str(exc), "truncated": True}) + "\n")
        return EXIT_RESOURCE
    lo, hi = jump_interval(r0, r1)
    payload = {
        "k": cfg.k,
        "beta": str(base),
        "m": cfg.m_from,
        "approximation_jump": {"lo": lo, "hi": hi},
        "beta_bound": r0.to_dict()["bound"],
        "beta_plus_bound": r1.to_dict()["bound"],
    }
    cells0 = [c for c in fixtures.lookup(cfg.k, base) if c.table == "1"]
    cells1 = [c for c in fixtures.lookup(cfg.k, plus) if c.table == "1"]
    if cells0 and cells1:
        plo, phi = jump_interval(cells0[0], cells1[0])
        payload["published_jump"] = {"lo": plo, "hi": phi, "table_value": cells1[0].jump_text}
    if cfg.fmt == "json":
        out.write(_dumps(payload) + "\n")
    else:
        out.write(f"jump at {base} (k={cfg.k}, m={cfg.m_from}): [{lo:.7f}, {hi:.7f}]\n")
        if "published_jump" in payload:
            pj = payload["published_jump"]
            out.write(f"published cells: [{pj['lo']:.7f}, {pj['hi']:.7f}]  table: {pj['table_value']}\n")
    return EXIT_OK


def cmd_count(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    m = cfg.m_from
    try:
        series = brute_count(cfg.k, cfg.exponent, m, cfg.length)
    except EnumerationGuardError as exc:
        out.write(f"error: {exc}\n")
        return EXIT_RESOURCE
    graph_counts = None
    if m is not None:
        g = GraphCache(cfg.cache).get(_spec(cfg, m))
        graph_counts = [graph_count(g, n) if n >= g.order else None for n in range(cfg.length + 1)]
    if cfg.fmt == "csv":
        out.write(series.to_csv())
    elif cfg.fmt == "json":
        payload = {
            "k": cfg.k,
            "exponent": str(cfg.exponent),
            "m": m,
            "counts": list(series.counts),
            "graph_counts": graph_counts,
            "fekete": fekete_check(series),
        }
        out.write(_dumps(payload) + "\n")
    else:
        for n, c in enumerate(series.counts):
            out.write(f"{n:>4}  {c}\n")
    if graph_counts is not None:
        mismatch = [n for n, c in enumerate(graph_counts) if c is not None and c != series[n]]
        if mismatch:
            log.error("graph and brute-force counts disagree at n=%s", mismatch)
            return EXIT_FAIL
    return EXIT_OK


def cmd_check(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    cache = GraphCache(cfg.cache)
    failures = 0

    def section(title, results):
        nonlocal failures
        results = list(results)
        bad = [r for r in results if not r.ok]
        failures += len(bad)
        out.write(f"{title}: {len(results) - len(bad)}/{len(results)} specs OK\n")
        for r in bad:
            out.write(f"  FAIL {r.name} {r.detail}\n")

    out.write(f"backend: {backend()}\n")
    if cache.directory is not None:
        section("cache integrity", suite.cache_suite(cache))
    section("oracle equivalence", suite.oracle_suite(loader=cache))
    section("finiteness classification", suite.finiteness_suite())
    section("fixture bracketing", suite.bracketing_suite(precision=cfg.precision, loader=cache))
    for ev in cache.events:
        out.write(f"cache: {ev}\n")
    return EXIT_OK if failures == 0 else EXIT_FAIL


COMMANDS = {"bound": cmd_bound, "series": cmd_series, "jump": cmd_jump, "count": cmd_count, "check": cmd_check}


def main(argv=None) -> int:
    cfg = parse_config(sys.argv[1:] if argv is None else argv)
    return COMMANDS[cfg.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
