"""Command line interface.

Subcommands cover the pipeline end to end: ``preprocess`` writes
annotated letters in vertical form, ``network`` builds and exports
graphs, ``eval`` scores the pair heuristic against gold triples,
``stats`` prints a graph summary and ``run`` chains preprocess and
network.  Settings come from defaults, then an optional JSON config
file (flag ``--config`` or the LETTERNET_CONFIG environment variable),
then command line flags, in that order of precedence.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

from letternet.corpus import (
    CleaningConfig,
    LetterLoadError,
    ManifestError,
    load_manifest,
)
from letternet.export import (
    ExportError,
    GexfValidationError,
    GraphFormatError,
    StyleError,
    StyleSpec,
    export_csv_edges,
    export_dot,
    export_gexf,
    export_json,
    export_stats,
    stats_report,
)
from letternet.extraction import (
    AnaphoraError,
    AnaphoraMap,
    GoldFormatError,
    apply_anaphora,
    evaluate_pairs,
    extract_cooccurrences,
    extract_window_pairs,
    load_gold,
)
from letternet.network import (
    GraphBuildError,
    LexicalGraph,
    Threshold,
    build_graph,
    merge_graphs,
    parse_prune_rule,
    prune,
    token_frequencies,
)
from letternet.pipeline import (
    AnnotatedDoc,
    LexiconFormatError,
    VerticalFormatError,
    default_annotator,
    ingest_pretagged,
    write_vertical,
)

log = logging.getLogger(__name__)

CONFIG_ENV_VAR = "LETTERNET_CONFIG"

FORMATS = ("gexf", "dot", "json", "csv")
MODES = ("cooccur", "pairs")
SCOPES = ("merged", "per-letter")

_USER_ERRORS = (
    ManifestError,
    LetterLoadError,
    LexiconFormatError,
    VerticalFormatError,
    GoldFormatError,
    AnaphoraError,
    GraphBuildError,
    StyleError,
    ExportError,
    GexfValidationError,
    GraphFormatError,
)


class ConfigError(ValueError):
    """Raised for unusable configuration files or option values."""


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings for one invocation."""

    manifest: str | None = None
    out: str = "out"
    mode: str = "cooccur"
    context: str = "sentence"
    max_dist: int = 4
    verb_blocker: bool = True
    colon_boundary: bool = False
    prune_nodes: str | None = None
    prune_edges: str | None = None
    keep_isolated: bool = False
    formats: tuple[str, ...] = ("gexf",)
    scope: str = "merged"
    gold: str | None = None
    anaphora: str | None = None
    pretagged_dir: str | None = None
    variant_lexicon: str | None = None
    abbreviations: str | None = None
    top: int = 10


_PATH_KEYS = (
    "manifest",
    "gold",
    "anaphora",
    "pretagged_dir",
    "variant_lexicon",
    "abbreviations",
)
_CONFIG_KEYS = {f.name for f in fields(RunConfig)}


def load_config_file(path: str | Path) -> dict:
    """Read a JSON config file.

    Unknown keys are rejected by name.  Relative input paths are
    resolved against the config file's directory so a config can ship
    next to its corpus; the ``out`` directory stays relative to the
    working directory.
    """
    p = Path(path)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{p}: config must be a JSON object")
    unknown = sorted(set(data) - _CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"{p}: unknown config keys: {', '.join(unknown)}")
    for key in _PATH_KEYS:
        value = data.get(key)
        if isinstance(value, str) and value and not Path(value).is_absolute():
            data[key] = str(p.parent / value)
    if "formats" in data and isinstance(data["formats"], list):
        data["formats"] = tuple(data["formats"])
    return data


def _parse_context(text: str) -> int | None:
    """"sentence" -> None, "window:K" -> K."""
    if text == "sentence":
        return None
    if text.startswith("window:"):
        try:
            k = int(text.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad context {text!r}") from None
        if k < 1:
            raise ConfigError(f"window size must be >= 1, got {k}")
        return k
    raise ConfigError(f"bad context {text!r}; expected sentence or window:K")


def validate_config(cfg: RunConfig, need_manifest: bool = True) -> None:
    if cfg.mode not in MODES:
        raise ConfigError(f"bad mode {cfg.mode!r}; expected one of {MODES}")
    if cfg.scope not in SCOPES:
        raise ConfigError(f"bad scope {cfg.scope!r}; expected one of {SCOPES}")
    for fmt in cfg.formats:
        if fmt not in FORMATS:
            raise ConfigError(f"bad format {fmt!r}; expected subset of {FORMATS}")
    _parse_context(cfg.context)
    if cfg.max_dist < 0:
        raise ConfigError(f"max_dist must be >= 0, got {cfg.max_dist}")
    for rule in (cfg.prune_nodes, cfg.prune_edges):
        if rule is not None:
            try:
                parse_prune_rule(rule)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
    if need_manifest and not cfg.pretagged_dir:
        if not cfg.manifest:
            raise ConfigError("no manifest configured (use --manifest or a config file)")
        if not Path(cfg.manifest).is_file():
            raise ConfigError(f"manifest not found: {cfg.manifest}")
    for key in ("gold", "anaphora", "variant_lexicon", "abbreviations"):
        value = getattr(cfg, key)
        if value is not None and not Path(value).is_file():
            raise ConfigError(f"{key.replace('_', ' ')} file not found: {value}")
    if cfg.pretagged_dir is not None and not Path(cfg.pretagged_dir).is_dir():
        raise ConfigError(f"pretagged directory not found: {cfg.pretagged_dir}")


# ---------------------------------------------------------------------------
# shared pipeline steps


def _annotator(cfg: RunConfig):
    return default_annotator(
        colon_boundary=cfg.colon_boundary,
        variant_lexicon=cfg.variant_lexicon,
        abbreviations=cfg.abbreviations,
    )


def _load_docs(cfg: RunConfig) -> list[AnnotatedDoc]:
    if cfg.pretagged_dir:
        paths = sorted(Path(cfg.pretagged_dir).glob("*.tsv"))
        if not paths:
            log.warning("no vertical files in %s", cfg.pretagged_dir)
        docs = [ingest_pretagged(p) for p in paths]
    else:
        annotator = _annotator(cfg)
        corpus = load_manifest(cfg.manifest, CleaningConfig())
        docs = [annotator.annotate(letter) for letter in corpus]
    if cfg.anaphora:
        amap = AnaphoraMap.from_file(cfg.anaphora)
        docs = [apply_anaphora(doc, amap) for doc in docs]
    return docs


def _extract(cfg: RunConfig, doc: AnnotatedDoc):
    if cfg.mode == "pairs":
        return extract_window_pairs(
            doc, max_dist=cfg.max_dist, verb_blocker=cfg.verb_blocker
        )
    return extract_cooccurrences(doc, window=_parse_context(cfg.context))


def _build_graphs(cfg: RunConfig, docs: list[AnnotatedDoc]) -> list[tuple[str, LexicalGraph]]:
    per_letter = [
        (doc.letter_id, build_graph(_extract(cfg, doc), token_frequencies([doc])))
        for doc in docs
    ]
    if cfg.scope == "per-letter":
        graphs = per_letter
    else:
        graphs = [("network", merge_graphs([g for _, g in per_letter]))]
    if cfg.prune_nodes or cfg.prune_edges:
        node_rule = parse_prune_rule(cfg.prune_nodes) if cfg.prune_nodes else Threshold(0)
        edge_rule = parse_prune_rule(cfg.prune_edges) if cfg.prune_edges else Threshold(0)
        graphs = [
            (name, prune(g, node_rule, edge_rule, drop_isolated=not cfg.keep_isolated))
            for name, g in graphs
        ]
    return graphs


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_preprocess(cfg: RunConfig) -> int:
    validate_config(cfg)
    out = _out_dir(cfg)
    docs = _load_docs(cfg)
    for doc in docs:
        write_vertical(doc, out / f"{doc.letter_id}.tsv")
    print(f"preprocessed {len(docs)} letters -> {out}")
    return 0


def cmd_network(cfg: RunConfig) -> int:
    validate_config(cfg)
    out = _out_dir(cfg)
    style = StyleSpec()
    docs = _load_docs(cfg)
    for name, graph in _build_graphs(cfg, docs):
        written = []
        if "gexf" in cfg.formats:
            path = out / f"{name}.gexf"
            export_gexf(graph, path, style)
            written.append(path.name)
        if "dot" in cfg.formats:
            path = out / f"{name}.dot"
            export_dot(graph, path, style)
            written.append(path.name)
        if "json" in cfg.formats:
            path = out / f"{name}.json"
            export_json(graph, path)
            written.append(path.name)
        if "csv" in cfg.formats:
            path = out / f"{name}_edges.csv"
            export_csv_edges(graph, path)
            written.append(path.name)
        stats_path = out / f"{name}_stats.txt"
        export_stats(graph, stats_path, cfg.top)
        written.append(stats_path.name)
        print(
            f"{name}: {graph.n_nodes} nodes, {graph.n_edges} edges "
            f"(total weight {graph.total_weight}) -> {', '.join(written)}"
        )
    return 0


def cmd_eval(cfg: RunConfig) -> int:
    validate_config(cfg)
    if not cfg.gold:
        raise ConfigError("eval needs a gold file (--gold or the gold config key)")
    gold = load_gold(cfg.gold)
    gold_letters = {t.letter_id for t in gold}
    docs = [d for d in _load_docs(cfg) if d.letter_id in gold_letters]
    if not docs:
        raise ConfigError(
            f"gold file covers letters {sorted(gold_letters)} but none were loaded"
        )
    records = []
    for doc in docs:
        records.extend(
            extract_window_pairs(doc, max_dist=cfg.max_dist, verb_blocker=cfg.verb_blocker)
        )
    report = evaluate_pairs(records, gold)
    text = report.format()
    print(text)
    out = _out_dir(cfg)
    (out / "eval_report.txt").write_text(text + "\n", encoding="utf-8")
    return 0


def cmd_stats(cfg: RunConfig) -> int:
    validate_config(cfg)
    docs = _load_docs(cfg)
    for name, graph in _build_graphs(cfg, docs):
        if cfg.scope == "per-letter":
            print(f"== {name} ==")
        print(stats_report(graph, cfg.top), end="")
    return 0


def cmd_run(cfg: RunConfig) -> int:
    code = cmd_preprocess(cfg)
    if code:
        return code
    return cmd_network(cfg)


# ---------------------------------------------------------------------------
# argument parsing


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="JSON config file")
    parser.add_argument("--manifest", metavar="PATH", help="corpus manifest (TSV)")
    parser.add_argument("--out", metavar="DIR", help="output directory")
    parser.add_argument("--mode", choices=MODES, help="extraction mode")
    parser.add_argument(
        "--context",
        metavar="CTX",
        help="co-occurrence context: sentence or window:K",
    )
    parser.add_argument(
        "--max-dist",
        type=int,
        metavar="N",
        help="pair heuristic: max intervening tokens between noun and verb",
    )
    parser.add_argument(
        "--no-blocker",
        action="store_true",
        default=None,
        help="pair heuristic: do not let an intervening verb cancel a side",
    )
    parser.add_argument(
        "--colon-boundary",
        action="store_true",
        default=None,
        help="treat colons as sentence boundaries",
    )
    parser.add_argument("--prune-nodes", metavar="RULE", help="node rule: gtN or meanK")
    parser.add_argument("--prune-edges", metavar="RULE", help="edge rule: gtN or meanK")
    parser.add_argument(
        "--keep-isolated",
        action="store_true",
        default=None,
        help="keep nodes left without edges after pruning",
    )
    parser.add_argument(
        "--format",
        metavar="LIST",
        help="comma-separated output formats: " + ",".join(FORMATS),
    )
    parser.add_argument("--scope", choices=SCOPES, help="one merged graph or one per letter")
    parser.add_argument("--gold", metavar="PATH", help="gold triples for eval")
    parser.add_argument("--anaphora", metavar="PATH", help="manual pronoun resolutions")
    parser.add_argument(
        "--pretagged-dir",
        metavar="DIR",
        help="read vertical files from here instead of tagging",
    )
    parser.add_argument(
        "--variant-lexicon", metavar="PATH", help="replacement spelling variant lexicon"
    )
    parser.add_argument("--abbreviations", metavar="PATH", help="abbreviation list")
    parser.add_argument("--top", type=int, metavar="N", help="list length in reports")


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    config_path = args.config or os.environ.get(CONFIG_ENV_VAR)
    if config_path:
        cfg = replace(cfg, **load_config_file(config_path))
    overrides: dict = {}
    for key in (
        "manifest",
        "out",
        "mode",
        "context",
        "max_dist",
        "prune_nodes",
        "prune_edges",
        "scope",
        "gold",
        "anaphora",
        "pretagged_dir",
        "variant_lexicon",
        "abbreviations",
        "top",
    ):
        value = getattr(args, key)
        if value is not None:
            overrides[key] = value
    if args.no_blocker:
        overrides["verb_blocker"] = False
    if args.colon_boundary:
        overrides["colon_boundary"] = True
    if args.keep_isolated:
        overrides["keep_isolated"] = True
    if args.format is not None:
        overrides["formats"] = tuple(
            fmt.strip() for fmt in args.format.split(",") if fmt.strip()
        )
    try:
        return replace(cfg, **overrides)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="letternet",
        description="Build lexical networks from corpora of historical letters.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "preprocess": ("annotate letters and write vertical files", cmd_preprocess),
        "network": ("build, prune and export graphs", cmd_network),
        "eval": ("score the pair heuristic against gold triples", cmd_eval),
        "stats": ("print a graph summary", cmd_stats),
        "run": ("preprocess then network", cmd_run),
    }
    for name, (help_text, handler) in commands.items():
        sp = sub.add_parser(name, help=help_text)
        _add_common_options(sp)
        sp.set_defaults(handler=handler)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(name)s: %(message)s"
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        return args.handler(cfg)
    except (ConfigError, *_USER_ERRORS) as exc:
        print(f"letternet: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
