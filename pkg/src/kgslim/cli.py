"""Command-line entry point.

Subcommands: `ingest` validates and filters a dataset, `build-corpus`
precomputes corpus assets, `run` executes the search over a dataset and writes
trajectory files plus a report, `evaluate` recomputes reports from trajectory
files, and `verify` replays a trajectory file and re-checks every accepted
step. Exit codes: 0 success, 1 runtime or verification failure, 2 bad usage
or manifest.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import re
import sys
import tempfile
from typing import Iterable, Sequence

from . import evaluate as evaluate_mod
from .adapter import AdapterClient, AdapterError, open_adapter
from .corpus import (
    CorpusStatistics,
    NGramLanguageModel,
    SimplificationLexicon,
    build_corpus_stats,
    build_language_model,
    load_lexicon,
)
from .graph import (
    CandidateState,
    GraphError,
    KnowledgeGraph,
    Triple,
    dump_graphs,
    load_graphs,
    validate,
)
from .realize import AdapterGenerator, TemplateGenerator
from .reduction import OperationWeights
from .scoring import ScoreBreakdown, Scorer, ScoringConfig, SurfaceMatchExtractor
from .search import BatchItem, SearchConfig, run_batch

TRAJECTORY_SUFFIX = ".trajectory.jsonl"
TRAJECTORY_SCHEMA = 1

MANIFEST_KEYS = {
    "dataset",
    "corpus",
    "lexicon",
    "out",
    "generator",
    "adapter",
    "threshold",
    "condition",
    "iterations",
    "max_retries",
    "seed",
    "t0",
    "alpha",
    "weights",
    "lambda_fre",
    "r_op",
    "fluency_mode",
    "fluency_backend",
    "salience_backend",
    "entity_backend",
    "sa_sign",
    "parallelism",
    "system",
}


class UsageError(Exception):
    """Bad manifest or flags; exits with code 2 and names the field."""


def atomic_write_text(path: str, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see halves."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    descriptor, temp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(descriptor, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise


def read_manifest(path: str) -> dict[str, str]:
    """Flat key = value lines; '#' starts a comment; unknown keys are errors."""
    if not os.path.exists(path):
        raise UsageError(f"manifest not found: {path}")
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise UsageError(f"manifest line {line_number}: expected key = value")
            key, _, value = stripped.partition("=")
            key = key.strip()
            if key not in MANIFEST_KEYS:
                raise UsageError(f"manifest line {line_number}: unknown key {key!r}")
            values[key] = value.strip()
    return values


def parse_weights(raw: str) -> OperationWeights:
    parts = raw.split(",")
    if len(parts) != 3:
        raise UsageError(f"weights must be three comma-separated numbers, got {raw!r}")
    try:
        delete, replace, merge = (float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"weights must be numbers, got {raw!r}") from exc
    return OperationWeights(delete, replace, merge)


def _looks_like_assets(path: str) -> bool:
    with open(path, "r", encoding="utf-8") as handle:
        head = handle.read(64).lstrip()
    return head.startswith("{")


def load_corpus_assets(path: str) -> tuple[CorpusStatistics, NGramLanguageModel]:
    """Accept either a raw one-document-per-line corpus or prebuilt assets JSON."""
    if not os.path.exists(path):
        raise UsageError(f"corpus not found: {path}")
    if _looks_like_assets(path):
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
        return (
            CorpusStatistics.from_dict(raw["stats"]),
            NGramLanguageModel.from_dict(raw["lm"]),
        )
    with open(path, "r", encoding="utf-8") as handle:
        documents = [line.rstrip("\n") for line in handle if line.strip()]
    return build_corpus_stats(documents), build_language_model(documents)


def render_corpus_assets(stats: CorpusStatistics, lm: NGramLanguageModel) -> str:
    payload = {"schema": 1, "stats": stats.to_dict(), "lm": lm.to_dict()}
    return json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n"


def _sanitize_id(graph_id: str, used: set[str]) -> str:
    base = re.sub(r"[^A-Za-z0-9._-]+", "_", graph_id) or "graph"
    name = base
    counter = 1
    while name in used:
        counter += 1
        name = f"{base}-{counter}"
    used.add(name)
    return name


def write_trajectory(
    path: str,
    item: BatchItem,
    graph: KnowledgeGraph,
    known_entities: Sequence[str],
    search_config: SearchConfig,
    scoring_config: ScoringConfig,
    generator_spec: str,
) -> None:
    result = item.result
    assert result is not None
    lines = [
        json.dumps(
            {
                "record": "header",
                "schema": TRAJECTORY_SCHEMA,
                "graph_id": graph.graph_id,
                "triples": [t.to_list() for t in graph.triples],
                "known_entities": list(known_entities),
                "search": search_config.to_dict(),
                "scoring": dataclasses.asdict(scoring_config),
                "generator": generator_spec,
            },
            ensure_ascii=False,
        ),
        json.dumps(
            {"record": "initial", "text": result.initial.text, "score": result.initial.score.to_dict()},
            ensure_ascii=False,
        ),
    ]
    for record in result.trajectory:
        lines.append(json.dumps({"record": "attempt", **record.to_dict()}, ensure_ascii=False))
    lines.append(
        json.dumps(
            {
                "record": "summary",
                "last": result.last_accepted.to_dict(),
                "best": result.best_accepted.to_dict(),
                "acceptance_counts": result.acceptance_counts,
            },
            ensure_ascii=False,
        )
    )
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_trajectory(path: str) -> dict:
    """Load a trajectory file into header/initial/attempts/summary parts."""
    header = initial = summary = None
    attempts: list[dict] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise UsageError(f"{path}:{line_number}: invalid JSON ({exc.msg})") from exc
            kind = record.get("record")
            if kind == "header":
                header = record
            elif kind == "initial":
                initial = record
            elif kind == "attempt":
                attempts.append(record)
            elif kind == "summary":
                summary = record
            else:
                raise UsageError(f"{path}:{line_number}: unknown record kind {kind!r}")
    if header is None or initial is None or summary is None:
        raise UsageError(f"{path}: missing header, initial, or summary record")
    if header.get("schema") != TRAJECTORY_SCHEMA:
        raise UsageError(f"{path}: unsupported trajectory schema {header.get('schema')!r}")
    return {"header": header, "initial": initial, "attempts": attempts, "summary": summary}


def _build_generator(spec: str, handshake_timeout: float | None = None):
    if spec == "template":
        return TemplateGenerator()
    if spec.startswith(("cmd:", "http://", "https://")):
        return AdapterGenerator(open_adapter(spec, handshake_timeout))
    raise UsageError(f"generator must be 'template', 'cmd:...', or an http(s) URL, got {spec!r}")


def _scoring_config_from_options(options: dict[str, str]) -> ScoringConfig:
    kwargs = {}
    if "lambda_fre" in options:
        kwargs["lambda_fre"] = float(options["lambda_fre"])
    if "r_op" in options:
        kwargs["r_op"] = float(options["r_op"])
    for key in ("fluency_mode", "fluency_backend", "salience_backend", "entity_backend"):
        if key in options:
            kwargs[key] = options[key]
    return ScoringConfig(**kwargs)


def _search_config_from_options(options: dict[str, str]) -> SearchConfig:
    kwargs = {}
    if "condition" in options:
        kwargs["condition"] = options["condition"]
    if "iterations" in options:
        kwargs["iterations"] = int(options["iterations"])
    if "max_retries" in options:
        kwargs["max_retries_per_iteration"] = int(options["max_retries"])
    if "weights" in options:
        kwargs["weights"] = parse_weights(options["weights"])
    if "t0" in options:
        kwargs["t0"] = float(options["t0"])
    if "alpha" in options:
        kwargs["cooling_alpha"] = float(options["alpha"])
    if "seed" in options:
        kwargs["seed"] = int(options["seed"])
    if "sa_sign" in options:
        kwargs["sa_sign"] = options["sa_sign"]
    return SearchConfig(**kwargs)


def _merge_options(manifest: dict[str, str], args: argparse.Namespace) -> dict[str, str]:
    """Manifest values first, explicit flags override."""
    merged = dict(manifest)
    for key in MANIFEST_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = str(value)
    return merged


def _ingest(dataset_path: str, threshold: int) -> tuple[list[KnowledgeGraph], list[str]]:
    if not os.path.exists(dataset_path):
        raise UsageError(f"dataset not found: {dataset_path}")
    graphs = load_graphs(dataset_path)
    kept: list[KnowledgeGraph] = []
    reports: list[str] = []
    for index, graph in enumerate(graphs):
        violations = validate(graph)
        if violations:
            reports.append(f"record {index} ({graph.graph_id!r}): " + "; ".join(violations))
            continue
        if len(graph) <= threshold:
            reports.append(
                f"record {index} ({graph.graph_id!r}): below complexity threshold "
                f"({len(graph)} <= {threshold})"
            )
            continue
        kept.append(graph)
    return kept, reports


def cmd_ingest(args: argparse.Namespace) -> int:
    kept, reports = _ingest(args.dataset, args.threshold)
    for line in reports:
        print(f"dropped: {line}")
    print(f"kept {len(kept)} graph(s), dropped {len(reports)}")
    if args.out:
        atomic_write_text(args.out, dump_graphs(kept))
        print(f"wrote {args.out}")
    return 0


def cmd_build_corpus(args: argparse.Namespace) -> int:
    if not os.path.exists(args.corpus):
        raise UsageError(f"corpus not found: {args.corpus}")
    with open(args.corpus, "r", encoding="utf-8") as handle:
        documents = [line.rstrip("\n") for line in handle if line.strip()]
    stats = build_corpus_stats(documents)
    lm = build_language_model(documents, order=args.order, k=args.k)
    atomic_write_text(args.out, render_corpus_assets(stats, lm))
    print(
        f"wrote {args.out}: {stats.document_count} documents, "
        f"{stats.vocabulary_size} token types, order-{lm.order} model"
    )
    return 0


def _sample_report(
    item: BatchItem,
    stats: CorpusStatistics,
    extractor: SurfaceMatchExtractor,
    use: str = "last",
    acceptability: float | None = None,
    parse_height: float | None = None,
    parse_diameter: float | None = None,
) -> evaluate_mod.SampleReport:
    result = item.result
    assert result is not None
    final = result.best_accepted if use == "best" else result.last_accepted
    return evaluate_mod.SampleReport(
        graph_id=result.graph_id,
        text=evaluate_mod.text_metrics(result.initial.text, final.text, stats, acceptability),
        graph=evaluate_mod.graph_metrics(result.initial.graph, final.graph),
        entity=evaluate_mod.entity_metrics(result.initial.text, final.text, extractor),
        parse_height=parse_height,
        parse_diameter=parse_diameter,
    )


def cmd_run(args: argparse.Namespace) -> int:
    manifest = read_manifest(args.manifest) if args.manifest else {}
    options = _merge_options(manifest, args)
    for required in ("dataset", "corpus", "out"):
        if required not in options:
            raise UsageError(f"missing required option: {required}")

    threshold = int(options.get("threshold", "3"))
    graphs, dropped = _ingest(options["dataset"], threshold)
    for line in dropped:
        print(f"dropped: {line}", file=sys.stderr)
    if not graphs:
        raise UsageError("dataset left no graphs after ingestion")

    stats, lm = load_corpus_assets(options["corpus"])
    lexicon = (
        load_lexicon(options["lexicon"])
        if "lexicon" in options
        else SimplificationLexicon({})
    )
    scoring_config = _scoring_config_from_options(options)
    search_config = _search_config_from_options(options)
    known_entities = tuple(
        dict.fromkeys(surface for graph in graphs for surface in graph.entities())
    )
    extractor = SurfaceMatchExtractor(known_entities)

    generator_spec = options.get("generator", "template")
    generator = _build_generator(generator_spec)
    scoring_adapter: AdapterClient | None = None
    needs_adapter = "adapter" in (
        scoring_config.fluency_backend,
        scoring_config.salience_backend,
        scoring_config.entity_backend,
    )
    owns_scoring_adapter = False
    try:
        if needs_adapter:
            if "adapter" in options:
                scoring_adapter = open_adapter(options["adapter"])
                owns_scoring_adapter = True
            elif isinstance(generator, AdapterGenerator):
                scoring_adapter = generator.client
            else:
                raise UsageError("adapter-backed scoring needs an 'adapter' endpoint")
        scorer = Scorer(stats, lm, extractor, scoring_config, scoring_adapter)
        parallelism = int(options["parallelism"]) if "parallelism" in options else None
        items = run_batch(graphs, generator, scorer, lexicon, search_config, parallelism)
    finally:
        generator.close()
        if owns_scoring_adapter and scoring_adapter is not None:
            scoring_adapter.close()

    out_dir = options["out"]
    os.makedirs(out_dir, exist_ok=True)
    used_names: set[str] = set()
    samples = []
    failures = 0
    graph_by_id = {graph.graph_id: graph for graph in graphs}
    for item in items:
        if item.error is not None:
            failures += 1
            print(f"failed: {item.graph_id}: {item.error}", file=sys.stderr)
            continue
        name = _sanitize_id(item.graph_id, used_names)
        write_trajectory(
            os.path.join(out_dir, name + TRAJECTORY_SUFFIX),
            item,
            graph_by_id[item.graph_id],
            known_entities,
            search_config,
            scoring_config,
            generator_spec,
        )
        samples.append(_sample_report(item, stats, extractor))
    if samples:
        operations = evaluate_mod.operation_stats(
            [item.result for item in items if item.result is not None]
        )
        system = options.get("system", search_config.condition)
        report = evaluate_mod.build_report(system, samples, operations)
        atomic_write_text(
            os.path.join(out_dir, "report.json"), evaluate_mod.render_report_json(report)
        )
        atomic_write_text(
            os.path.join(out_dir, "report.csv"), evaluate_mod.render_report_csv([report])
        )
    print(f"completed {len(samples)}/{len(items)} graph(s); output in {out_dir}")
    return 1 if failures else 0


def _state_from_dict(raw: dict) -> tuple[KnowledgeGraph, str, ScoreBreakdown]:
    graph = KnowledgeGraph.from_dict(raw["graph"])
    return graph, raw["text"], ScoreBreakdown.from_dict(raw["score"])


def cmd_evaluate(args: argparse.Namespace) -> int:
    paths = sorted(
        os.path.join(args.run_dir, name)
        for name in os.listdir(args.run_dir)
        if name.endswith(TRAJECTORY_SUFFIX)
    )
    if not paths:
        raise UsageError(f"no *{TRAJECTORY_SUFFIX} files in {args.run_dir}")
    stats, _lm = load_corpus_assets(args.corpus)
    adapter = open_adapter(args.adapter) if args.adapter else None
    samples = []
    system = args.system
    try:
        for path in paths:
            parts = read_trajectory(path)
            header = parts["header"]
            system = system or header["search"]["condition"]
            initial_graph = KnowledgeGraph(
                tuple(Triple.from_list(t) for t in header["triples"]), header["graph_id"]
            )
            extractor = SurfaceMatchExtractor(tuple(header["known_entities"]))
            final_raw = parts["summary"]["best" if args.use == "best" else "last"]
            final_graph, final_text, _score = _state_from_dict(final_raw)
            initial_text = parts["initial"]["text"]
            acceptability = parse_height = parse_diameter = None
            if adapter is not None and "score_acceptability" in adapter.capabilities:
                response = adapter.request("score_acceptability", {"text": final_text})
                if isinstance(response.get("score"), (int, float)):
                    acceptability = float(response["score"])
            if adapter is not None and "parse_stats" in adapter.capabilities:
                response = adapter.request("parse_stats", {"text": final_text})
                if isinstance(response.get("height"), (int, float)):
                    parse_height = float(response["height"])
                if isinstance(response.get("diameter"), (int, float)):
                    parse_diameter = float(response["diameter"])
            samples.append(
                evaluate_mod.SampleReport(
                    graph_id=header["graph_id"],
                    text=evaluate_mod.text_metrics(initial_text, final_text, stats, acceptability),
                    graph=evaluate_mod.graph_metrics(initial_graph, final_graph),
                    entity=evaluate_mod.entity_metrics(initial_text, final_text, extractor),
                    parse_height=parse_height,
                    parse_diameter=parse_diameter,
                )
            )
    finally:
        if adapter is not None:
            adapter.close()
    report = evaluate_mod.build_report(system or "run", samples)
    out_dir = args.out or args.run_dir
    atomic_write_text(os.path.join(out_dir, "report.json"), evaluate_mod.render_report_json(report))
    atomic_write_text(os.path.join(out_dir, "report.csv"), evaluate_mod.render_report_csv([report]))
    print(f"evaluated {len(samples)} trajectory file(s); report in {out_dir}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    parts = read_trajectory(args.trajectory)
    header = parts["header"]
    stats, lm = load_corpus_assets(args.corpus)
    scoring_raw = dict(header["scoring"])
    rescore = "adapter" not in (
        scoring_raw.get("fluency_backend"),
        scoring_raw.get("salience_backend"),
        scoring_raw.get("entity_backend"),
    )
    if not rescore:
        print("note: adapter-backed factors cannot be replayed offline; score checks skipped")
        scoring_raw.update(
            fluency_backend="bundled", salience_backend="lexical", entity_backend="surface-match"
        )
    scoring_config = ScoringConfig(**scoring_raw)
    search_config = SearchConfig.from_dict(header["search"])
    extractor = SurfaceMatchExtractor(tuple(header["known_entities"]))
    scorer = Scorer(stats, lm, extractor, scoring_config)
    failures: list[str] = []

    def check(label: str, ok: bool, detail: str = "") -> None:
        status = "ok" if ok else "FAIL"
        suffix = f" ({detail})" if detail and not ok else ""
        print(f"{status}: {label}{suffix}")
        if not ok:
            failures.append(label)

    initial_graph = KnowledgeGraph(
        tuple(Triple.from_list(t) for t in header["triples"]), header["graph_id"]
    )
    check("initial graph is valid", not validate(initial_graph))
    initial_text = parts["initial"]["text"]
    recorded_initial = ScoreBreakdown.from_dict(parts["initial"]["score"])
    if rescore:
        recomputed_initial = scorer.initial(initial_text, initial_graph)
        check(
            "initial score matches",
            abs(recomputed_initial.total - recorded_initial.total) <= 1e-9,
            f"recorded {recorded_initial.total}, recomputed {recomputed_initial.total}",
        )

    previous_graph = initial_graph
    previous_total = recorded_initial.total
    deleted: frozenset[str] = frozenset()
    accepted = [a for a in parts["attempts"] if a["accepted"]]
    last_text = initial_text
    for index, attempt in enumerate(accepted):
        label = f"accepted step {index + 1} ({attempt['kind']})"
        graph = KnowledgeGraph(
            tuple(Triple.from_list(t) for t in attempt["triples"]), header["graph_id"]
        )
        deleted = deleted | frozenset(attempt.get("newly_deleted", []))
        recorded = ScoreBreakdown.from_dict(attempt["score"])
        check(f"{label}: graph is valid", not validate(graph))
        check(
            f"{label}: triple count does not grow",
            len(graph) <= len(previous_graph),
        )
        if rescore:
            recomputed = scorer.breakdown(
                initial_text, attempt["text"], previous_graph, graph, deleted
            )
            check(
                f"{label}: score matches",
                abs(recomputed.total - recorded.total) <= 1e-9,
                f"recorded {recorded.total}, recomputed {recomputed.total}",
            )
        if search_config.condition == "zero":
            check(f"{label}: total is positive", recorded.total > 0.0)
        if search_config.condition == "prev":
            check(f"{label}: total improves", recorded.total > previous_total)
        previous_graph = graph
        previous_total = recorded.total
        last_text = attempt["text"]

    summary_last_graph, summary_last_text, summary_last_score = _state_from_dict(
        parts["summary"]["last"]
    )
    check("summary matches final accepted text", summary_last_text == last_text)
    check(
        "summary matches final accepted graph",
        [t.to_list() for t in summary_last_graph.triples]
        == [t.to_list() for t in previous_graph.triples],
    )
    check(
        "no deleted entity survives in the final graph",
        not (deleted & summary_last_graph.entity_set()),
    )
    print(f"verified {len(accepted)} accepted step(s): {len(failures)} failure(s)")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kgslim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="validate and filter a graph dataset")
    p_ingest.add_argument("--dataset", required=True)
    p_ingest.add_argument("--threshold", type=int, default=3, help="keep graphs with more triples than this")
    p_ingest.add_argument("--out", default=None, help="write kept records here")
    p_ingest.set_defaults(func=cmd_ingest)

    p_build = sub.add_parser("build-corpus", help="precompute corpus statistics and the language model")
    p_build.add_argument("--corpus", required=True)
    p_build.add_argument("--out", required=True)
    p_build.add_argument("--order", type=int, default=3)
    p_build.add_argument("--k", type=float, default=0.01)
    p_build.set_defaults(func=cmd_build_corpus)

    p_run = sub.add_parser("run", help="search a dataset and write trajectories plus a report")
    p_run.add_argument("--manifest", default=None, help="key = value config file")
    p_run.add_argument("--dataset")
    p_run.add_argument("--corpus", help="raw corpus or prebuilt assets JSON")
    p_run.add_argument("--lexicon")
    p_run.add_argument("--out")
    p_run.add_argument("--generator", help="template | cmd:<argv> | http(s)://...")
    p_run.add_argument("--adapter", help="scoring adapter endpoint when backends need one")
    p_run.add_argument("--threshold", type=int)
    p_run.add_argument("--condition", choices=["zero", "prev", "sa"])
    p_run.add_argument("--iterations", type=int)
    p_run.add_argument("--max-retries", dest="max_retries", type=int)
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--t0", type=float)
    p_run.add_argument("--alpha", type=float)
    p_run.add_argument("--weights", help="delete,replace,merge")
    p_run.add_argument("--lambda-fre", dest="lambda_fre", type=float)
    p_run.add_argument("--r-op", dest="r_op", type=float)
    p_run.add_argument("--fluency-mode", dest="fluency_mode", choices=["raw", "per-token"])
    p_run.add_argument("--fluency-backend", dest="fluency_backend", choices=["bundled", "adapter"])
    p_run.add_argument(
        "--salience-backend", dest="salience_backend", choices=["lexical", "adapter"]
    )
    p_run.add_argument(
        "--entity-backend", dest="entity_backend", choices=["surface-match", "adapter"]
    )
    p_run.add_argument("--sa-sign", dest="sa_sign", choices=["standard", "inverted"])
    p_run.add_argument("--parallelism", type=int)
    p_run.add_argument("--system", help="row label in the report")
    p_run.set_defaults(func=cmd_run)

    p_eval = sub.add_parser("evaluate", help="recompute a report from trajectory files")
    p_eval.add_argument("--run-dir", dest="run_dir", required=True)
    p_eval.add_argument("--corpus", required=True)
    p_eval.add_argument("--out", default=None)
    p_eval.add_argument("--use", choices=["last", "best"], default="last")
    p_eval.add_argument("--adapter", default=None, help="optional acceptability/parse adapter")
    p_eval.add_argument("--system", default=None)
    p_eval.set_defaults(func=cmd_evaluate)

    p_verify = sub.add_parser("verify", help="replay a trajectory file and re-check it")
    p_verify.add_argument("--trajectory", required=True)
    p_verify.add_argument("--corpus", required=True)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (GraphError, AdapterError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
