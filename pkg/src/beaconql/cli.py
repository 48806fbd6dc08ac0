"""Command-line interface.

Local commands run the service or the mock endpoint and drive the metrics
engine; the ``client`` group is a thin HTTP client for a running service.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx

from .evalkit import (
    FormatError,
    MissingPrediction,
    emit_report,
    evaluate,
    load_dataset,
    load_predictions,
    rouge1_prf,
)


@click.group()
def main() -> None:
    """Natural-language Beacon querying toolkit."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="Service config JSON file.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8080, show_default=True, type=int)
def serve(config_path: str | None, host: str, port: int) -> None:
    """Run the query service."""
    import uvicorn

    from .service import create_app, load_service_config

    config = load_service_config(config_path) if config_path else None
    uvicorn.run(create_app(config), host=host, port=port)


@main.command("mock-beacon")
@click.option("--fixture", "fixture_path", type=click.Path(exists=True), default=None,
              help="Cohort fixture JSON (defaults to the bundled cohort).")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=9000, show_default=True, type=int)
def mock_beacon(fixture_path: str | None, host: str, port: int) -> None:
    """Run the synthetic Beacon endpoint."""
    import uvicorn

    from .mockbeacon import CohortFixture, create_mock_app

    fixture = None
    if fixture_path:
        fixture = CohortFixture.from_json(Path(fixture_path).read_text(encoding="utf-8"))
    uvicorn.run(create_mock_app(fixture), host=host, port=port)


@main.command()
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--seed", type=int, default=None, help="Override the default seed.")
def fixture(out_path: str, seed: int | None) -> None:
    """Regenerate the synthetic cohort fixture file."""
    from dataclasses import replace

    from .mockbeacon import DEFAULT_FIXTURE_SPEC, generate_fixture

    spec = DEFAULT_FIXTURE_SPEC if seed is None else replace(DEFAULT_FIXTURE_SPEC, seed=seed)
    Path(out_path).write_text(generate_fixture(spec).to_json(), encoding="utf-8")
    click.echo(f"wrote {out_path}")


@main.group("eval")
def eval_group() -> None:
    """Extraction metrics over datasets and prediction files."""


@eval_group.command("run")
@click.option("--dataset", "dataset_dir", type=click.Path(exists=True), required=True)
@click.option("--predictions", "prediction_files", type=click.Path(exists=True),
              multiple=True, required=True)
@click.option("--format", "output_format", type=click.Choice(["table", "json"]),
              default="table", show_default=True)
def eval_run(dataset_dir: str, prediction_files: tuple[str, ...], output_format: str) -> None:
    """Score prediction files against a dataset."""
    try:
        dataset = load_dataset(dataset_dir)
        sets = [load_predictions(path) for path in prediction_files]
        report = evaluate(dataset, sets)
    except (FormatError, MissingPrediction) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    click.echo(emit_report(report, format=output_format))


@eval_group.command("score")
@click.option("--candidate", required=True)
@click.option("--reference", required=True)
def eval_score(candidate: str, reference: str) -> None:
    """Debug one ROUGE-1 comparison."""
    precision, recall, f1 = rouge1_prf(candidate, reference)
    click.echo(json.dumps({"precision": precision, "recall": recall, "f1": f1}))


@main.group()
@click.option("--base-url", default="http://127.0.0.1:8080", show_default=True)
@click.option("--token", envvar="BEACONQL_TOKEN", default="dev-token", show_default=True,
              help="Bearer token forwarded to the Beacon (env BEACONQL_TOKEN).")
@click.pass_context
def client(ctx: click.Context, base_url: str, token: str) -> None:
    """Thin HTTP client for a running service."""
    ctx.obj = {"base_url": base_url.rstrip("/"),
               "headers": {"Authorization": f"Bearer {token}"}}


def _call(ctx: click.Context, method: str, path: str, body: dict | None = None) -> dict:
    obj = ctx.obj
    response = httpx.request(method, obj["base_url"] + path, json=body,
                             headers=obj["headers"], timeout=120)
    if response.status_code >= 400:
        click.echo(response.text, err=True)
        sys.exit(1)
    return response.json()


@client.command("new-session")
@click.pass_context
def new_session(ctx: click.Context) -> None:
    click.echo(json.dumps(_call(ctx, "POST", "/sessions")))


@client.command("open-tab")
@click.argument("session")
@click.pass_context
def open_tab(ctx: click.Context, session: str) -> None:
    click.echo(json.dumps(_call(ctx, "POST", f"/sessions/{session}/tabs")))


@client.command("ask")
@click.argument("session")
@click.argument("tab")
@click.argument("question")
@click.option("--workflow", type=click.Choice(["parallel", "multistep"]), default=None)
@click.pass_context
def ask(ctx: click.Context, session: str, tab: str, question: str, workflow: str | None) -> None:
    body = {"question": question}
    if workflow:
        body["workflow"] = workflow
    result = _call(ctx, "POST", f"/sessions/{session}/tabs/{tab}/question", body)
    click.echo(json.dumps(result, indent=2))


@client.command("confirm")
@click.argument("session")
@click.argument("tab")
@click.option("--card", "card_path", type=click.Path(exists=True), required=True,
              help="JSON file with the edited confirmation fields.")
@click.pass_context
def confirm(ctx: click.Context, session: str, tab: str, card_path: str) -> None:
    body = json.loads(Path(card_path).read_text(encoding="utf-8"))
    result = _call(ctx, "POST", f"/sessions/{session}/tabs/{tab}/confirm", body)
    click.echo(json.dumps(result, indent=2))


@client.command("analyze")
@click.argument("session")
@click.argument("tab")
@click.argument("request")
@click.pass_context
def analyze(ctx: click.Context, session: str, tab: str, request: str) -> None:
    result = _call(ctx, "POST", f"/sessions/{session}/tabs/{tab}/analysis",
                   {"request": request})
    click.echo(json.dumps(result, indent=2))


@client.command("run-analysis")
@click.argument("session")
@click.argument("tab")
@click.option("--code", "code_path", type=click.Path(exists=True), required=True)
@click.pass_context
def run_analysis(ctx: click.Context, session: str, tab: str, code_path: str) -> None:
    code = Path(code_path).read_text(encoding="utf-8")
    result = _call(ctx, "POST", f"/sessions/{session}/tabs/{tab}/analysis/run",
                   {"code": code})
    click.echo(json.dumps(result, indent=2))


@client.command("artifact")
@click.argument("session")
@click.argument("tab")
@click.argument("name")
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.pass_context
def artifact(ctx: click.Context, session: str, tab: str, name: str, out_path: str) -> None:
    obj = ctx.obj
    response = httpx.get(f"{obj['base_url']}/sessions/{session}/tabs/{tab}/artifacts/{name}",
                         headers=obj["headers"], timeout=60)
    if response.status_code >= 400:
        click.echo(response.text, err=True)
        sys.exit(1)
    Path(out_path).write_bytes(response.content)
    click.echo(f"wrote {out_path}")


if __name__ == "__main__":
    main()
