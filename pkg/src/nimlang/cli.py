"""Command-line entry points.

Exit codes: 2 input errors, 3 provider errors, 4 ontology errors.
"""

from __future__ import annotations

import json
import sys
from importlib import resources
from pathlib import Path

import click

from . import decompose, metrics, ontology as ont, serialize
from .binding_translate import HttpTranslationProvider, IdentityTranslationProvider
from .config import load_config
from .errors import (
    CsvFormatError,
    InputError,
    NimError,
    OntologyError,
    OovWithoutFallbackError,
    ProviderError,
)
from .llm_fallback import HttpCompletionProvider, TranscriptReplayProvider

EXIT_INPUT = 2
EXIT_PROVIDER = 3
EXIT_ONTOLOGY = 4


def seed_ontology_path() -> Path:
    return Path(str(resources.files("nimlang.data").joinpath("seed_ontology.json")))


def _exit_code(e: NimError) -> int:
    if isinstance(e, (ProviderError, OovWithoutFallbackError)):
        return EXIT_PROVIDER
    if isinstance(e, OntologyError):
        return EXIT_ONTOLOGY
    if isinstance(e, InputError):
        return EXIT_INPUT
    return EXIT_INPUT


def _fail(e: NimError):
    click.echo(f"error [{e.stage}]: {e}", err=True)
    sys.exit(_exit_code(e))


@click.group()
def main():
    """Compile short text messages into ideograph + binding-text messages."""


@main.command("compile")
@click.argument("text", required=False)
@click.option("--ontology", "ontology_path", type=click.Path(exists=True),
              default=None, help="Ontology JSON (defaults to the shipped seed).")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "elem", "tty"]), default="json")
@click.option("--binding-lang", default=None)
@click.option("--no-fallback", is_flag=True, help="Fail on OOV words instead of calling a provider.")
@click.option("--transcript", type=click.Path(exists=True), default=None,
              help="Replay transcript file for the fallback provider.")
@click.option("--ablate-text", is_flag=True, help="Strip binding text from the output.")
@click.option("--expand", is_flag=True, help="With --format tty, include explication lines.")
@click.option("--update-ontology", is_flag=True,
              help="Persist admitted OOV concepts back to the ontology file.")
def cmd_compile(text, ontology_path, config_path, fmt, binding_lang, no_fallback,
                transcript, ablate_text, expand, update_ontology):
    """Compile TEXT (or stdin) into a NIM message."""
    if text is None:
        text = sys.stdin.read()
    try:
        cfg = load_config(config_path)
        path = ontology_path or seed_ontology_path()
        o = ont.load_ontology(path)

        fallback = None
        if not no_fallback:
            if transcript:
                fallback = TranscriptReplayProvider.from_file(transcript)
            elif cfg.completion_endpoint:
                fallback = HttpCompletionProvider(cfg.completion_endpoint, cfg.token_env)
        translator = None
        lang = binding_lang or cfg.binding_lang
        if lang != cfg.source_lang:
            if cfg.translation_endpoint:
                translator = HttpTranslationProvider(cfg.translation_endpoint)
            else:
                translator = IdentityTranslationProvider()
        providers = decompose.Providers(fallback=fallback, translator=translator)

        message, updated = decompose.compile_message(
            text, cfg, o, providers, binding_lang=binding_lang)
        if update_ontology and ontology_path and updated.version != o.version:
            ont.save_ontology(updated, ontology_path)
        if ablate_text:
            message = decompose.ablation_strip_text(message)
        if fmt == "json":
            sys.stdout.buffer.write(serialize.to_wire_json(message))
            sys.stdout.buffer.write(b"\n")
        elif fmt == "elem":
            click.echo(serialize.to_elementalization(message))
        else:
            click.echo(serialize.render_terminal(message, expand=expand))
    except NimError as e:
        _fail(e)


@main.group("ontology")
def cmd_ontology():
    """Inspect and maintain the ontology store."""


@cmd_ontology.command("validate")
@click.option("--path", type=click.Path(exists=True), default=None)
def ontology_validate(path):
    try:
        with open(path or seed_ontology_path(), encoding="utf-8") as f:
            o = ont.from_document(json.load(f))
    except (OSError, json.JSONDecodeError) as e:
        click.echo(f"error [ontology]: {e}", err=True)
        sys.exit(EXIT_ONTOLOGY)
    report = ont.validate(o)
    if report.ok:
        click.echo("ok: no violations")
        return
    for v in report:
        click.echo(f"{v.entity_id}: {v.rule}: {v.message}")
    sys.exit(EXIT_ONTOLOGY)


@cmd_ontology.command("stats")
@click.option("--path", type=click.Path(exists=True), default=None)
def ontology_stats(path):
    try:
        o = ont.load_ontology(path or seed_ontology_path())
    except NimError as e:
        _fail(e)
    click.echo(json.dumps(ont.stats(o).as_dict(), indent=2, sort_keys=True))


@cmd_ontology.command("insert")
@click.option("--path", type=click.Path(exists=True), required=True)
@click.option("--concept", "concept_path", type=click.Path(exists=True), required=True,
              help="JSON file with one ConceptEntry record.")
def ontology_insert(path, concept_path):
    try:
        o = ont.load_ontology(path)
        with open(concept_path, encoding="utf-8") as f:
            entry = ont.concept_from_dict(json.load(f))
        updated = ont.insert_concept(o, entry)
        ont.save_ontology(updated, path)
    except NimError as e:
        _fail(e)
    click.echo(f"inserted {entry.lemma!r}; version {o.version} -> {updated.version}")


@cmd_ontology.command("export")
@click.option("--path", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), default=None,
              help="Destination (defaults to rewriting in place).")
def ontology_export(path, out):
    try:
        o = ont.load_ontology(path)
        ont.save_ontology(o, out or path)
    except NimError as e:
        _fail(e)
    click.echo(f"exported canonical form to {out or path}")


@main.group("eval")
def cmd_eval():
    """Scoring utilities for evaluation fixtures."""


@cmd_eval.command("meteor")
@click.argument("candidate")
@click.argument("reference")
def eval_meteor(candidate, reference):
    score = metrics.meteor(candidate, reference, metrics.default_resources())
    click.echo(json.dumps({"meteor": score}))


@cmd_eval.command("comp")
@click.option("--records", type=click.Path(exists=True), required=True)
@click.option("--day", type=int, required=True)
def eval_comp(records, day):
    try:
        recs = metrics.eval_records_from_csv(records)
        score = metrics.comprehensibility(recs, day, metrics.default_resources())
    except NimError as e:
        _fail(e)
    click.echo(json.dumps({"day": day, "comprehensibility": score}))


@cmd_eval.command("lcr")
@click.option("--c1", type=float, required=True)
@click.option("--c5", type=float, required=True)
@click.option("--t", type=float, default=metrics.DEFAULT_LCR_THRESHOLD, show_default=True)
def eval_lcr(c1, c5, t):
    try:
        score = metrics.lcr(c1, c5, t)
    except NimError as e:
        _fail(e)
    click.echo(json.dumps({"lcr": round(score, 4)}))


@cmd_eval.command("mia")
@click.option("--responses", type=click.Path(exists=True), required=True)
def eval_mia(responses):
    try:
        rows = metrics.mia_responses_from_csv(responses)
        scores = metrics.mia(rows)
    except NimError as e:
        _fail(e)
    click.echo(json.dumps(scores.as_dict(), sort_keys=True))


@cmd_eval.command("stats")
@click.option("--csv", "csv_path", type=click.Path(exists=True), required=True)
@click.option("--column", required=True)
def eval_stats(csv_path, column):
    """Mean and standard deviation of one numeric CSV column."""
    import csv as csvmod
    try:
        with open(csv_path, newline="", encoding="utf-8") as f:
            values = [float(row[column]) for row in csvmod.DictReader(f)]
        mean, sd = metrics.column_stats(values)
    except (OSError, KeyError, ValueError) as e:
        click.echo(f"error [input]: {e}", err=True)
        sys.exit(EXIT_INPUT)
    except NimError as e:
        _fail(e)
    click.echo(json.dumps({"column": column, "mean": mean, "sd": sd}))


@main.command("serve")
@click.option("--port", type=int, default=8400, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ontology", "ontology_path", type=click.Path(exists=True), default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def cmd_serve(port, host, ontology_path, config_path):
    """Run the local HTTP service until interrupted."""
    import uvicorn

    from .service import create_app, default_state

    try:
        state = default_state(ontology_path, config_path)
    except NimError as e:
        _fail(e)
    uvicorn.run(create_app(state), host=host, port=port)


if __name__ == "__main__":
    main()
