"""Operator CLI: ingest corpora, import seeds, one-shot recommendations,
metric comparison, and the HTTP service.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import click

from .config import AppConfig, load_config
from .errors import CasebookError
from .ingest import corpus_report, filter_dump
from .pipeline import RawText, load_embeddings, preprocess, tokenize, vectorize
from .service import ServiceState, create_app, recommendation_payload
from .similarity import cosine, jaccard, soft_cosine_texts
from .errors import NoCoverage, ZeroNorm, ZeroVector, EmptySet


def _load_app_config(config_path: str | None) -> AppConfig:
    if config_path is None:
        default = Path("casebook.yaml")
        if default.exists():
            return load_config(default)
        return AppConfig()
    return load_config(config_path)


@click.group()
def main():
    """Case-memory book recommender."""


@main.command()
@click.argument("dump", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
def ingest(dump: str, out_dir: str):
    """Filter a line-delimited JSON tweet dump into a reader corpus."""
    try:
        corpus = filter_dump(dump)
        report = corpus_report(corpus)
    except CasebookError as exc:
        raise click.ClickException(f"{exc.code}: {exc}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "corpus.json").write_text(
        json.dumps({"readers": corpus.readers}, ensure_ascii=False, indent=2, sort_keys=True)
        + "\n",
        encoding="utf-8",
    )
    (out / "corpus_stats.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    click.echo(json.dumps(report, indent=2, sort_keys=True))


@main.command()
@click.option("--text", required=True)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
def recommend(text: str, config_path: str | None):
    """One-shot recommendation for a single text; prints JSON."""
    if not text.strip():
        raise click.UsageError("--text must not be empty")
    try:
        state = ServiceState(_load_app_config(config_path))
        rec, ticket = state.engine.solve(RawText(content=text))
    except CasebookError as exc:
        raise click.ClickException(f"{exc.code}: {exc}")
    payload = recommendation_payload(
        rec, ticket.ticket_id if ticket else None, state.engine.config.metric.value
    )
    click.echo(json.dumps(payload, ensure_ascii=False, sort_keys=True))


@main.command(name="import-seed")
@click.argument("seed_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
def import_seed(seed_file: str, config_path: str | None):
    """Load the seed case base and persist it to the store directory."""
    try:
        state = ServiceState(_load_app_config(config_path))
        count = state.store.import_seed(seed_file)
        state.save()
    except CasebookError as exc:
        raise click.ClickException(f"{exc.code}: {exc}")
    click.echo(f"{count} cases loaded")


@main.command(name="eval")
@click.option("--pairs", "pairs_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
def eval_pairs(pairs_file: str, config_path: str | None):
    """Per-metric similarity and wall-clock time for labeled text pairs.

    The pairs file is a JSON array of {text_a, text_b, label}.
    """
    config = _load_app_config(config_path)
    pipeline = config.pipeline()
    table = (
        load_embeddings(config.embeddings_path)
        if config.embeddings_path is not None
        else None
    )
    try:
        pairs = json.loads(Path(pairs_file).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise click.ClickException(f"unreadable pairs file: {exc}")

    rows = []
    for pair in pairs:
        a = tokenize(preprocess(RawText(content=pair["text_a"]), pipeline))
        b = tokenize(preprocess(RawText(content=pair["text_b"]), pipeline))
        row = {"label": pair.get("label", "")}
        for name in ("jaccard", "cosine", "softcosine"):
            if name != "jaccard" and table is None:
                continue
            start = time.perf_counter()
            try:
                if name == "jaccard":
                    value = jaccard(a, b).value
                elif name == "cosine":
                    value = cosine(vectorize(a, table), vectorize(b, table)).value
                else:
                    value = soft_cosine_texts(a, b, table).value
            except (NoCoverage, ZeroVector, ZeroNorm, EmptySet):
                value = None
            elapsed_ms = (time.perf_counter() - start) * 1000.0
            row[name] = None if value is None else round(value, 8)
            row[f"{name}_ms"] = round(elapsed_ms, 3)
        rows.append(row)
    click.echo(json.dumps(rows, indent=2, sort_keys=True))


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--listen", "listen", default=None, help="host:port override")
def serve(config_path: str | None, listen: str | None):
    """Start the HTTP service."""
    import uvicorn

    config = _load_app_config(config_path)
    host, port = config.listen_host, config.listen_port
    if listen:
        h, _, p = listen.rpartition(":")
        if not h or not p.isdigit():
            raise click.UsageError("--listen must be host:port")
        host, port = h, int(p)
    try:
        app = create_app(config)
    except CasebookError as exc:
        raise click.ClickException(f"{exc.code}: {exc}")
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    sys.exit(main())
