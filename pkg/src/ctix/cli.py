"""Command-line interface: each pipeline stage as a subcommand."""

from __future__ import annotations

import dataclasses
import json
import logging
import sys
from pathlib import Path

import click

from .errors import CtixError
from .evaluation import evaluate, format_report
from .model import label_name
from .pipeline import PipelineConfig, read_document, run_pipeline
from .textproc import chunk as chunk_doc, from_conll, to_conll
from . import iocs as ioc_mod

log = logging.getLogger("ctix")


def _load_config(config_path: str | None, **overrides) -> PipelineConfig:
    config = PipelineConfig.from_file(config_path) if config_path else PipelineConfig()
    for key, value in overrides.items():
        if value is not None:
            setattr(config, key, value)
    return config


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log stage details to stderr.")
def main(verbose: bool) -> None:
    """Extract a STIX 2.1 knowledge bundle from CTI report text."""
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if verbose else logging.WARNING,
        format="%(message)s",
    )


@main.command()
@click.argument("inputs", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--window", type=int, default=256, show_default=True)
@click.option("--stride", type=int, default=None, help="Defaults to window/2.")
@click.option("--out", type=click.Path(), default=None, help="CoNLL output path.")
def process(inputs, window, stride, out):
    """Sanitize and chunk documents, emitting unannotated CoNLL."""
    stride = stride or max(1, window // 2)
    chunks = []
    for path in inputs:
        doc = read_document(path)
        chunks.extend(chunk_doc(doc, window, stride))
    _write_or_print(to_conll(chunks), out)


@main.command(name="iocs")
@click.argument("inputs", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default=None)
def iocs_cmd(inputs, out):
    """Extract IOCs as TYPE<TAB>REFANGED_VALUE<TAB>START<TAB>END records."""
    lines = []
    for path in inputs:
        doc = read_document(path)
        for m in ioc_mod.find_iocs(doc.clean_text):
            lines.append(
                f"{label_name(m.span.label)}\t{m.refanged_value}\t{m.span.start}\t{m.span.end}"
            )
    _write_or_print("\n".join(lines) + ("\n" if lines else ""), out)


def _pipeline_options(f):
    options = [
        click.option("--config", "config_path", type=click.Path(exists=True), default=None),
        click.option("--mode", type=click.Choice(["supervised", "zeroshot", "both"]), default=None),
        click.option("--window", type=int, default=None),
        click.option("--stride", type=int, default=None),
        click.option("--ner-threshold", type=float, default=None,
                      help="Sets both supervised and zero-shot thresholds."),
        click.option("--re-threshold", type=float, default=None),
        click.option("--backend-url", type=str, default=None,
                      help="Remote backend base URL (or CTIX_BACKEND_URL)."),
        click.option("--deterministic-ids", is_flag=True, default=None),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _build_config(config_path, mode, window, stride, ner_threshold, re_threshold,
                  backend_url, deterministic_ids) -> PipelineConfig:
    config = _load_config(
        config_path,
        mode=mode,
        window=window,
        stride=stride,
        relation_threshold=re_threshold,
        backend_url=backend_url,
    )
    if ner_threshold is not None:
        config.supervised_threshold = ner_threshold
        config.zeroshot_threshold = ner_threshold
    if deterministic_ids:
        config.deterministic_ids = True
    return config


@main.command()
@click.argument("inputs", nargs=-1, required=True, type=click.Path(exists=True))
@_pipeline_options
@click.option("--out", type=click.Path(), default=None)
def entities(inputs, out, **kwargs):
    """Extract merged entity spans as TEXT<TAB>LABEL<TAB>START<TAB>END<TAB>CONF<TAB>SOURCE."""
    config = _build_config(**kwargs)
    result = run_pipeline(config, list(inputs))
    lines = []
    for doc in result.documents:
        for span in doc.entities:
            lines.append(
                f"{span.text}\t{label_name(span.label)}\t{span.start}\t{span.end}"
                f"\t{span.confidence:.3f}\t{span.source.value}"
            )
    _write_or_print("\n".join(lines) + ("\n" if lines else ""), out)
    sys.exit(0 if result.ok else 1)


@main.command()
@click.argument("inputs", nargs=-1, required=True, type=click.Path(exists=True))
@_pipeline_options
@click.option("--out", type=click.Path(), default=None)
def relations(inputs, out, **kwargs):
    """Extract relations as SOURCE_TEXT<TAB>RELATION<TAB>TARGET_TEXT<TAB>SCORE."""
    config = _build_config(**kwargs)
    result = run_pipeline(config, list(inputs))
    lines = []
    for doc in result.documents:
        for rel in doc.relations:
            lines.append(
                f"{rel.source.text}\t{rel.relation.value}\t{rel.target.text}\t{rel.score:.3f}"
            )
    _write_or_print("\n".join(lines) + ("\n" if lines else ""), out)
    sys.exit(0 if result.ok else 1)


@main.command()
@click.argument("inputs", nargs=-1, required=True, type=click.Path(exists=True))
@_pipeline_options
@click.option("--out", type=click.Path(), default=None, help="Bundle output path.")
@click.option("--conll-out", type=click.Path(), default=None)
@click.option("--manifest-out", type=click.Path(), default=None)
def pipeline(inputs, out, conll_out, manifest_out, **kwargs):
    """Run the full pipeline and emit the STIX bundle."""
    config = _build_config(**kwargs)
    if out:
        config.out = out
    if conll_out:
        config.conll_out = conll_out
    if manifest_out:
        config.manifest_out = manifest_out
    result = run_pipeline(config, list(inputs))
    _write_or_print(result.bundle_json, config.out)
    if config.conll_out:
        Path(config.conll_out).write_text(result.conll_text, encoding="utf-8")
    if config.manifest_out:
        Path(config.manifest_out).write_text(
            json.dumps(result.manifest, indent=2) + "\n", encoding="utf-8"
        )
    sys.exit(0 if result.ok else 1)


@main.command(name="eval")
@click.argument("gold_path", type=click.Path(exists=True))
@click.argument("predicted_path", type=click.Path(exists=True))
def eval_cmd(gold_path, predicted_path):
    """Score predicted CoNLL annotations against gold."""
    gold = from_conll(Path(gold_path).read_text(encoding="utf-8"))
    predicted = from_conll(Path(predicted_path).read_text(encoding="utf-8"))
    report = evaluate(gold, predicted)
    click.echo("# zero-support classes are omitted from the weighted average")
    click.echo(format_report(report))


def run() -> None:  # pragma: no cover - console-script shim
    try:
        main()
    except CtixError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":  # pragma: no cover
    run()
