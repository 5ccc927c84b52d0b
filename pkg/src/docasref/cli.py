"""Command-line front end.

stdout carries machine-parseable JSON only; human diagnostics go to
stderr. Exit codes: 0 success, 1 backend or metric failure, 2 usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .data import ScoreTriple, load_dataset
from .embeddings import BackendError, FixtureBackend, ModelConfig, compute_idf, load_fixture
from .harness import (
    BenchmarkError,
    MetricSetting,
    coverage_warnings,
    ingest_external_scores,
    render_report,
    run_benchmark,
    score_pair,
)
from .sentence_metrics import SIM_KINDS, WEIGHTINGS

FIXTURE_TOLERANCE = 1e-4


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _read_side(value: str | None, file_value: str | None, side: str) -> str:
    if (value is None) == (file_value is None):
        raise SystemExit(_fail(f"provide exactly one of --{side} / --{side}-file", 2))
    if value is not None:
        return value
    return Path(file_value).read_text(encoding="utf-8")


def _build_backend(args: argparse.Namespace):
    if args.backend == "fixture":
        if not args.fixture:
            raise SystemExit(_fail("--backend fixture requires --fixture PATH", 2))
        return FixtureBackend(args.fixture, nli_path=args.nli_fixture)
    if not args.model:
        raise SystemExit(_fail("--backend onnx requires --model PATH", 2))
    from .onnx_backend import OnnxBackend

    return OnnxBackend(
        ModelConfig.from_manifest(args.model, role="encoder"),
        nli_cfg=_nli_config_if_present(args.model),
    )


def _nli_config_if_present(model_path: str) -> ModelConfig | None:
    manifest_path = Path(model_path)
    if manifest_path.is_dir():
        manifest_path = manifest_path / "manifest.json"
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    if not manifest.get("nli_file"):
        return None
    return ModelConfig.from_manifest(model_path, role="nli")


def cmd_score(args: argparse.Namespace) -> int:
    summary = _read_side(args.summary, args.summary_file, "summary")
    document = _read_side(args.document, args.document_file, "document")
    try:
        setting = MetricSetting(
            name=args.metric,
            component=args.component,
            variant=args.variant,
            use_idf=args.idf == "on",
            sim_kind=args.sim_kind,
            weighting=args.weighting,
            leadword_k=args.leadword,
        )
    except BenchmarkError as exc:
        return _fail(str(exc), 2)
    backend = None
    if setting.name in ("bertscore", "moverscore", "sentence_bertscore"):
        backend = _build_backend(args)
    idf_table = None
    if setting.use_idf:
        if not args.idf_corpus:
            return _fail("--idf on requires --idf-corpus FILE (one document per line)", 2)
        lines = [
            line for line in Path(args.idf_corpus).read_text(encoding="utf-8").splitlines() if line
        ]
        idf_table = compute_idf([backend.tokenize(line) for line in lines])
    try:
        result = score_pair(summary, document, setting, backend=backend, idf_table=idf_table)
    except (BenchmarkError, BackendError, ValueError) as exc:
        return _fail(str(exc), 1)
    payload: dict = {"metric": setting.display_name}
    if isinstance(result, ScoreTriple):
        payload.update(precision=result.precision, recall=result.recall, f1=result.f1)
    else:
        payload["score"] = result
    print(json.dumps(payload))
    return 0


def cmd_benchmark(args: argparse.Namespace) -> int:
    suite_path = Path(args.suite)
    if not suite_path.exists():
        return _fail(f"suite config not found: {suite_path}", 2)
    try:
        config = json.loads(suite_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        return _fail(f"suite config is not valid JSON: {exc}", 2)
    base = suite_path.parent

    def resolve(p: str) -> str:
        path = Path(p)
        return str(path if path.is_absolute() else base / path)

    try:
        dataset = load_dataset(resolve(config["dataset"]))
        backend_cfg = config.get("backend", {})
        backend = None
        if backend_cfg:
            if backend_cfg.get("kind") == "fixture":
                backend = FixtureBackend(
                    resolve(backend_cfg["embeddings"]),
                    nli_path=resolve(backend_cfg["nli"]) if backend_cfg.get("nli") else None,
                )
            elif backend_cfg.get("kind") == "onnx":
                from .onnx_backend import OnnxBackend

                model_path = resolve(backend_cfg["model"])
                backend = OnnxBackend(
                    ModelConfig.from_manifest(model_path),
                    nli_cfg=_nli_config_if_present(model_path),
                )
            else:
                return _fail(f"unknown backend kind {backend_cfg.get('kind')!r}", 2)
        suite = []
        for entry in config["metrics"]:
            if entry.get("name") == "external" and "path" in entry:
                entry = {**entry, "path": resolve(entry["path"])}
            suite.append(MetricSetting(**entry))
    except BenchmarkError as exc:
        return _fail(str(exc), 2)
    except (KeyError, TypeError) as exc:
        return _fail(f"bad suite config: {exc}", 2)
    try:
        report = run_benchmark(
            dataset, suite, pooling=config.get("pooling", "per_doc_mean"), backend=backend
        )
        for setting in suite:
            if setting.name == "external":
                for warning in coverage_warnings(dataset, ingest_external_scores(setting.path)):
                    print(f"warning: {setting.path}: {warning}", file=sys.stderr)
    except (BenchmarkError, BackendError) as exc:
        return _fail(str(exc), 1)
    output = config.get("output", {})
    fmt = output.get("format", "csv")
    rendered = render_report(report, fmt)
    out_path = output.get("path")
    if out_path:
        out_path = resolve(out_path)
        Path(out_path).write_text(rendered, encoding="utf-8")
    else:
        sys.stderr.write(rendered)
    print(json.dumps({"rows": len(report.rows), "output": out_path, "format": fmt}))
    return 0


def cmd_fixtures_verify(args: argparse.Namespace) -> int:
    fixture_path = Path(args.fixture)
    model_path = Path(args.model)
    if not fixture_path.exists():
        return _fail(f"fixture file not found: {fixture_path}", 2)
    if not model_path.exists():
        return _fail(f"model path not found: {model_path}", 2)
    from .onnx_backend import OnnxBackend, fixture_deviations

    try:
        items = load_fixture(fixture_path)
        backend = OnnxBackend(ModelConfig.from_manifest(model_path, role="encoder"))
        deviations = fixture_deviations(backend, items)
    except (BackendError, ValueError) as exc:
        return _fail(str(exc), 1)
    failures = sorted(i for i, d in deviations.items() if d > FIXTURE_TOLERANCE)
    max_dev = max(deviations.values()) if deviations else 0.0
    print(
        json.dumps(
            {
                "items": len(deviations),
                "max_deviation": max_dev,
                "tolerance": FIXTURE_TOLERANCE,
                "failures": failures,
            }
        )
    )
    if failures:
        print(f"error: {len(failures)} fixture item(s) deviate beyond "
              f"{FIXTURE_TOLERANCE}: {', '.join(failures)}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="docasref",
        description="Reference-free summary scoring: the source document stands in "
        "for the reference.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    score = sub.add_parser("score", help="score one summary against one document")
    score.add_argument("--summary")
    score.add_argument("--summary-file")
    score.add_argument("--document")
    score.add_argument("--document-file")
    score.add_argument("--metric", required=True,
                       choices=["bertscore", "moverscore", "rouge", "sentence_bertscore"])
    score.add_argument("--component", choices=["p", "r", "f", "scalar"], default="f")
    score.add_argument("--variant", choices=["r1", "r2", "rl"], default="r1")
    score.add_argument("--backend", choices=["onnx", "fixture"], default="fixture")
    score.add_argument("--model", help="ONNX model directory (with manifest.json)")
    score.add_argument("--fixture", help="embedding fixture file for --backend fixture")
    score.add_argument("--nli-fixture", help="NLI fixture file for --backend fixture")
    score.add_argument("--idf", choices=["on", "off"], default="off")
    score.add_argument("--idf-corpus", help="text file, one idf document per line")
    score.add_argument("--sim-kind", choices=list(SIM_KINDS), default="cosine")
    score.add_argument("--weighting", choices=list(WEIGHTINGS), default="none")
    score.add_argument("--leadword", type=float, default=1.0,
                       help="keep this leading fraction of document sentences")
    score.set_defaults(func=cmd_score)

    bench = sub.add_parser("benchmark", help="run a metric suite over a dataset")
    bench.add_argument("--suite", required=True, help="suite config JSON")
    bench.set_defaults(func=cmd_benchmark)

    fixtures = sub.add_parser("fixtures", help="fixture maintenance")
    fsub = fixtures.add_subparsers(dest="fixtures_command", required=True)
    verify = fsub.add_parser("verify", help="re-embed fixtures and compare")
    verify.add_argument("--fixture", required=True)
    verify.add_argument("--model", required=True)
    verify.set_defaults(func=cmd_fixtures_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:  # raised by _read_side/_build_backend with code set
        code = exc.code
        return code if isinstance(code, int) else 2
    except BackendError as exc:
        return _fail(str(exc), 1)
    except OSError as exc:
        return _fail(str(exc), 1)


if __name__ == "__main__":
    sys.exit(main())
