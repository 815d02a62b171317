"""Command-line entry point: generate, verify, analyze, catalog, power, export.

Graph files use the DIMACS-like format of ``girthforge.dimacs``; every
generated graph gets a sidecar ``<name>.meta.json`` holding the
construction, its metadata and the expectations ``verify`` checks.
Exit codes: 0 ok, 1 validation or failed expectation, 2 resource,
3 I/O, 4 parse.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import networkx as nx

from . import bounds
from .analysis import analyze, select_roots
from .catalog import (
    ROWS,
    Expectations,
    check_expectations,
    circular_expectations,
    entry_by_key,
    listing,
    write_specs,
)
from .circular import (
    CircularSpec,
    attach_dualities,
    circular_construct,
    debruijn_circular,
    debruijn_graph,
    hamming_spec,
)
from .conduit import verify_conduit
from .config import Budgets, RunConfig
from .dimacs import read_graph, write_graph
from .errors import BadParameters, GirthforgeError, ParseError, StorageError
from .geometry import Kind, conduit, metadata as conduit_metadata
from .graph import BipartiteGraph, Graph, girth, is_bipartite, max_degree, power

log = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"
EXPORT_FORMATS = ("graphml", "edgelist", "adjlist")


def sidecar_path(path: Path) -> Path:
    return path.with_suffix(".meta.json")


def _dump(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="ascii")
    except OSError as exc:
        raise StorageError(f"cannot write {path}: {exc}") from exc


def _emit(payload: dict, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(_dump(payload))
    else:
        _write_text(output, _dump(payload))


def _load_sidecar(path: Path) -> Optional[dict]:
    if not path.is_file():
        return None
    try:
        return json.loads(path.read_text(encoding="ascii"))
    except ValueError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    except OSError as exc:
        raise StorageError(f"cannot read {path}: {exc}") from exc


# --- generate ---

def _generate_graph(config: RunConfig):
    """Return (graph, construction dict, metadata, expectations, extra sidecar fields)."""
    p = config.params
    budgets = config.budgets
    if p.get("catalog"):
        entry = entry_by_key(p["catalog"], _require(p, "q"), p.get("t"), p.get("q_h"))
        built = entry.build(budgets)
        construction = {"catalog": entry.row.key, "t": entry.t, "q": entry.q}
        if entry.q_h:
            construction["q_h"] = entry.q_h
        extra = {"spec": built.spec.to_dict()} if built.spec is not None else {}
        return built.graph, construction, built.metadata, built.expected, extra
    if p.get("hamming_circular") or p.get("debruijn_circular"):
        t, d = _require(p, "t"), _require(p, "d")
        k = d // 2
        if p.get("hamming_circular"):
            build = circular_construct(hamming_spec(t, d), budgets)
            g, exp, name = build.graph, circular_expectations(build, t), "hamming_circular"
        else:
            g = debruijn_circular(t, d)
            exp = Expectations(n=t * k**t, max_degree=d, bipartite=True if t % 2 == 0 else None,
                               clique_t=t, clique_parts=(0,), part_size=k**t, clique_size=k**t)
            name = "debruijn_circular"
        meta = {"construction": name, "t": str(t), "d": str(d), "parts": str(t), "part_size": str(k**t)}
        return g, {name: True, "t": t, "d": d}, meta, exp, {}
    if p.get("debruijn"):
        t, k = _require(p, "t"), _require(p, "k")
        g = debruijn_graph(t, k)
        exp = Expectations(n=k**t, max_degree=2 * k, clique_t=t, clique_parts=(0,), part_size=k**t,
                           clique_size=k**t)
        return g, {"debruijn": True, "t": t, "k": k}, {"construction": "debruijn", "t": str(t), "k": str(k)}, exp, {}
    if p.get("conduit"):
        kind, q = Kind.parse(p["conduit"]), _require(p, "q")
        h = conduit(kind, q)
        n = len(h.a)
        exp = Expectations(n=2 * n, regular=kind.degree(q), bipartite=True,
                           girth_exactly=kind.girth if kind.degree(q) > 1 else None)
        extra = {"conduit": {"tau": kind.tau, "claimed_girth": exp.girth_exactly, "part_size": n}}
        meta = {"construction": h.name, **conduit_metadata(kind, q, h)}
        return h.graph, {"conduit": kind.value, "q": q}, meta, exp, extra
    if config.input is not None:
        spec = CircularSpec.from_json(_read_text(config.input))
        spec = attach_dualities(spec, budgets)
        build = circular_construct(spec, budgets)
        meta = {"construction": spec.notation(), "t": str(spec.t), "parts": str(build.plan.parts),
                "part_size": str(build.part_size)}
        return build.graph, {"spec": str(config.input)}, meta, circular_expectations(build), {"spec": spec.to_dict()}
    raise BadParameters("generate needs one of --catalog, --hamming-circular, --debruijn-circular, "
                        "--debruijn, --conduit or --spec")


def _require(params: Dict, name: str) -> int:
    if params.get(name) is None:
        raise BadParameters(f"--{name.replace('_', '-')} is required here")
    return int(params[name])


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="ascii")
    except OSError as exc:
        raise StorageError(f"cannot read {path}: {exc}") from exc


def cmd_generate(config: RunConfig) -> int:
    g, construction, meta, exp, extra = _generate_graph(config)
    out = config.output
    write_graph(out, g, meta)
    sidecar = {"construction": construction, "metadata": meta, "expected": exp.to_dict(), **extra}
    _write_text(sidecar_path(out), _dump(sidecar))
    print(f"wrote {out} ({g.n} vertices, {g.m} edges)")
    return 0


# --- verify ---

def _parse_expect(items: Sequence[str]) -> Dict[str, object]:
    parsed: Dict[str, object] = {}
    for item in items:
        key, eq, value = item.partition("=")
        if not eq:
            raise BadParameters(f"--expect wants key=value, got {item!r}")
        if value.lower() in ("true", "false"):
            parsed[key] = value.lower() == "true"
        elif key == "clique_parts":
            parsed[key] = [int(v) for v in value.split(",") if v]
        else:
            try:
                parsed[key] = int(value)
            except ValueError:
                raise BadParameters(f"--expect {key} needs an integer, got {value!r}") from None
    return parsed


def _graph_summary(g: Graph, budgets: Budgets) -> dict:
    degrees = g.degrees()
    summary = {
        "vertices": g.n,
        "edges": g.m,
        "min_degree": int(degrees.min(initial=0)),
        "max_degree": max_degree(g),
        "bipartite": is_bipartite(g).bipartite,
    }
    if g.n <= budgets.cycle_search_vertices:
        summary["girth"] = str(girth(g))
    return summary


def cmd_verify(config: RunConfig) -> int:
    path = config.input
    g, meta = read_graph(path)
    sidecar = _load_sidecar(Path(config.params["meta"]) if config.params.get("meta") else sidecar_path(path)) or {}
    expected = dict(sidecar.get("expected", {}))
    expected.update(_parse_expect(config.params.get("expect") or ()))
    exp = Expectations.from_dict(expected)
    checks = check_expectations(g, exp, config.budgets)
    report = {"graph": _graph_summary(g, config.budgets), "expectations": checks.to_dict()}
    passed = checks.passed
    if "metadata" in sidecar:
        same = sidecar["metadata"] == meta
        report["metadata_match"] = same
        passed = passed and same
    if "conduit" in sidecar:
        c = sidecar["conduit"]
        n = int(c["part_size"])
        h = BipartiteGraph(g, range(n), range(n, 2 * n))
        conduit_report = verify_conduit(h, int(c["tau"]), c.get("claimed_girth"), config.budgets)
        report["conduit"] = conduit_report.to_dict()
        passed = passed and conduit_report.passed
    if exp.clique_size is not None and exp.clique_t is not None and g.n:
        d = max(max_degree(g), 1)
        report["chi_lower_ratio"] = bounds.fmt(bounds.chi_lower_ratio(exp.clique_size, d, exp.clique_t))
    report["passed"] = passed
    _emit(report, config.output)
    return 0 if passed else 1


# --- analyze ---

def _render_table(report: dict) -> str:
    lines = [f"t={report['t']} d={report['d']} hypothesis_holds={report['hypothesis_holds']} "
             f"passed={report['passed']}",
             f"{'root':>6} {'layers':<28} {'b1':>5} {'b2':>5} {'b3':>5} {'pairs':>8} six-paths"]
    for r in report["roots"]:
        b1, b2, b3 = r["bottlenecks"]
        found = ",".join(k for k, v in r["six_paths"].items() if v) or "-"
        lines.append(f"{r['root']:>6} {str(r['layer_sizes']):<28} {b1:>5} {b2:>5} {b3:>5} "
                     f"{r['close_pairs']:>8} {found}")
    return "\n".join(lines) + "\n"


def cmd_analyze(config: RunConfig) -> int:
    g, _ = read_graph(config.input)
    p = config.params
    t = _require(p, "t")
    roots = select_roots(g, p.get("roots") or "all", seed=p.get("seed") or 0)
    lengths = None
    if p.get("forbidden_lengths"):
        lengths = [int(v) for v in str(p["forbidden_lengths"]).split(",") if v]
    report = analyze(g, t, roots, lengths, config.budgets).to_dict()
    if config.toggles.get("table"):
        sys.stdout.write(_render_table(report))
    if config.output is not None or not config.toggles.get("table"):
        _emit(report, config.output)
    return 0 if report["passed"] else 1


# --- catalog, power, export ---

def cmd_catalog(config: RunConfig) -> int:
    d = config.params.get("d")
    rows = listing(d)
    if config.params.get("write_specs"):
        directory = Path(config.params["write_specs"])
        if not directory.is_dir():
            raise StorageError(f"not a directory: {directory}")
        for path in write_specs(directory, config.budgets):
            print(f"wrote {path}")
        return 0
    if config.toggles.get("json"):
        _emit({"rows": rows}, config.output)
        return 0
    print(f"{len(ROWS)} constructions")
    for row in rows:
        suggestion = f"  suggested q for d={d}: {row['suggested_q']}" if d is not None else ""
        print(f"{row['key']:<9} t={row['t']:<12} girth {row['girth']}  bound {row['bound']:<12} "
              f"q: {row['q']}{suggestion}")
        print(f"          {row['construction']}; vertices {row['vertices']}")
    return 0


def cmd_power(config: RunConfig) -> int:
    g, meta = read_graph(config.input)
    t = _require(config.params, "t")
    gt = power(g, t, config.budgets)
    write_graph(config.output, gt, {**meta, "power": str(t)})
    print(f"wrote {config.output} ({gt.n} vertices, {gt.m} edges)")
    return 0


def cmd_export(config: RunConfig) -> int:
    g, _ = read_graph(config.input)
    fmt = config.params.get("format") or "graphml"
    writers: Dict[str, Callable] = {
        "graphml": nx.write_graphml,
        "edgelist": lambda graph, path: nx.write_edgelist(graph, path, data=False),
        "adjlist": nx.write_adjlist,
    }
    try:
        writers[fmt](g.to_networkx(), str(config.output))
    except OSError as exc:
        raise StorageError(f"cannot write {config.output}: {exc}") from exc
    print(f"wrote {config.output} ({fmt})")
    return 0


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "generate": cmd_generate,
    "verify": cmd_verify,
    "analyze": cmd_analyze,
    "catalog": cmd_catalog,
    "power": cmd_power,
    "export": cmd_export,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="girthforge", description="Graphs whose powers need many colours.")
    parser.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="build a graph and its sidecar")
    source = gen.add_mutually_exclusive_group(required=True)
    source.add_argument("--catalog", metavar="KEY", help="catalog row, e.g. t3-g4")
    source.add_argument("--hamming-circular", action="store_true")
    source.add_argument("--debruijn-circular", action="store_true")
    source.add_argument("--debruijn", action="store_true")
    source.add_argument("--conduit", metavar="KIND", help="K, P, Q or H")
    source.add_argument("--spec", type=Path, help="circular spec JSON")
    gen.add_argument("--q", type=int)
    gen.add_argument("--q-h", type=int, help="order of the hexagon coordinates in mixed rows")
    gen.add_argument("--t", type=int)
    gen.add_argument("--d", type=int)
    gen.add_argument("--k", type=int)
    gen.add_argument("--output", "-o", type=Path, required=True)

    ver = sub.add_parser("verify", help="check a graph file against its expectations")
    ver.add_argument("input", type=Path)
    ver.add_argument("--meta", help="sidecar path (default <name>.meta.json)")
    ver.add_argument("--expect", action="append", default=[], metavar="KEY=VALUE")
    ver.add_argument("--output", "-o", type=Path)

    ana = sub.add_parser("analyze", help="layer, bottleneck and six-path analysis")
    ana.add_argument("input", type=Path)
    ana.add_argument("--t", type=int, required=True)
    ana.add_argument("--roots", default="all", help="all or sample:N")
    ana.add_argument("--seed", type=int, default=0)
    ana.add_argument("--forbidden-lengths", help="comma-separated cycle lengths")
    ana.add_argument("--table", action="store_true")
    ana.add_argument("--output", "-o", type=Path)

    cat = sub.add_parser("catalog", help="list the constructions")
    cat.add_argument("--d", type=int, help="show the largest admissible q for this degree")
    cat.add_argument("--json", action="store_true")
    cat.add_argument("--write-specs", metavar="DIR")
    cat.add_argument("--output", "-o", type=Path)

    pw = sub.add_parser("power", help="write G^t")
    pw.add_argument("input", type=Path)
    pw.add_argument("--t", type=int, required=True)
    pw.add_argument("--output", "-o", type=Path, required=True)

    exp = sub.add_parser("export", help="convert to graphml, edgelist or adjlist")
    exp.add_argument("input", type=Path)
    exp.add_argument("--format", choices=EXPORT_FORMATS, default="graphml")
    exp.add_argument("--output", "-o", type=Path, required=True)
    return parser


TOGGLES = ("table", "json", "hamming_circular", "debruijn_circular", "debruijn")


def to_config(args: argparse.Namespace) -> RunConfig:
    values = vars(args).copy()
    command = values.pop("command")
    values.pop("log_level")
    threads = values.pop("threads")
    output = values.pop("output", None)
    source = values.pop("input", None)
    spec = values.pop("spec", None)
    source = source if source is not None else spec
    toggles = {k: bool(values.pop(k)) for k in TOGGLES if k in values}
    params = {k: v for k, v in values.items() if v is not None}
    params.update({k: True for k, v in toggles.items() if v and k not in ("table", "json")})
    budgets = Budgets.from_env(**({"threads": threads} if threads else {}))
    return RunConfig(command, source, output, params, toggles, budgets).validate()


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT, stream=sys.stderr)
    try:
        config = to_config(args)
        return COMMANDS[config.command](config)
    except GirthforgeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
