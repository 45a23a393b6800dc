"""meterbench command line: gen | prep | predict | score | explain | pack | serve | report.

Every subcommand is a pure function of (inputs, flags, seed) and drops a
RunManifest next to its output, so any artifact can be replayed
byte-identically from the manifest alone. The only environment variable
read here is METERBENCH_LOG (log level).
"""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path

import click
import numpy as np

from .core.io import load_cohort, parse_predictions, write_cohort, write_predictions
from .datagen import CohortConfig, generate_cohort
from .explain import EXPLAINERS, read_bundles, write_bundles
from .forecast import ForecastSet, PIPELINES, prepare, run_pipeline, run_spec
from .manifest import RunManifest, text_sha256, write_manifest
from .review import (NoResponses, ResponseStore, aggregate, create_app, criterion_means,
                     default_ui_dir, pack_review, read_packet, write_packet)
from .scoring import ScoreReport, final_score, report_from_json, report_to_json, total_rae

DEFAULT_FINALISTS = {
    "wu_ensemble": "fuzzy_baseline",
    "dr_expectile": "dr_rules",
    "kb_pooled_regression": "kb_shapley",
}

_COHORT_FILES = ("readings", "weather", "survey", "ground_truth")


@click.group()
def main():
    level = os.environ.get("METERBENCH_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))


def _add_cohort_inputs(manifest: RunManifest, data_dir: str) -> None:
    for name in _COHORT_FILES:
        path = os.path.join(data_dir, f"{name}.csv")
        if os.path.exists(path):
            manifest.add_input(name, path)


def sample_meters(cohort, seed: int, k: int = 10):
    """Deterministic meter choice shared by explain and pack."""
    ids = sorted(cohort.meters)
    if len(ids) < k:
        raise click.ClickException(f"cohort has {len(ids)} meters, need {k}")
    rng = np.random.default_rng(seed)
    picked = rng.choice(len(ids), size=k, replace=False)
    return [ids[i] for i in sorted(picked)]


@main.command()
@click.option("--seed", type=int, default=None, help="Overrides the config seed.")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--out", "out_dir", type=click.Path(), required=True)
def gen(seed, config_path, out_dir):
    """Generate a synthetic cohort and write its CSV set."""
    if config_path:
        cfg = CohortConfig.from_json(Path(config_path).read_text())
    else:
        cfg = CohortConfig()
    if seed is not None:
        cfg = CohortConfig.from_json(json.dumps({**json.loads(cfg.to_json()), "seed": seed}))
    cohort = generate_cohort(cfg)
    os.makedirs(out_dir, exist_ok=True)
    paths = write_cohort(cohort, out_dir)
    manifest = RunManifest("gen", {"seed": cfg.seed, "config": config_path, "out": out_dir},
                           seed=cfg.seed,
                           config_hashes={"cohort_config": text_sha256(cfg.to_json())})
    if config_path:
        manifest.add_input("config", config_path)
    for name, path in paths.items():
        manifest.add_output(name, path)
    write_manifest(manifest, out_dir)
    click.echo(f"gen: {len(cohort.meters)} meters -> {out_dir}")


@main.command()
@click.option("--data", "data_dir", type=click.Path(exists=True), required=True)
@click.option("--out", "out_dir", type=click.Path(), required=True)
def prep(data_dir, out_dir):
    """Write the cleaned monthly views used by the pipelines."""
    cohort = load_cohort(data_dir)
    view = prepare(cohort)
    os.makedirs(out_dir, exist_ok=True)
    raw_path = os.path.join(out_dir, "raw_monthly.csv")
    filled_path = os.path.join(out_dir, "monthly_filled.csv")
    write_predictions(view.raw_monthly, raw_path)
    write_predictions(view.monthly, filled_path)
    manifest = RunManifest("prep", {"data": data_dir, "out": out_dir})
    _add_cohort_inputs(manifest, data_dir)
    manifest.add_output("raw_monthly", raw_path)
    manifest.add_output("monthly_filled", filled_path)
    write_manifest(manifest, out_dir)
    click.echo(f"prep: {len(view.monthly)} meters -> {out_dir}")


@main.command()
@click.option("--data", "data_dir", type=click.Path(exists=True), required=True)
@click.option("--pipeline", "pipeline_id", type=click.Choice(sorted(PIPELINES)), default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="Pipeline spec JSON; alternative to --pipeline.")
@click.option("--seed", type=int, default=0)
@click.option("--out", "out_path", type=click.Path(), required=True)
def predict(data_dir, pipeline_id, config_path, seed, out_path):
    """Run one forecasting pipeline and write predictions CSV."""
    if (pipeline_id is None) == (config_path is None):
        raise click.UsageError("give exactly one of --pipeline or --config")
    cohort = load_cohort(data_dir)
    if config_path:
        spec = json.loads(Path(config_path).read_text())
        forecast = run_spec(spec, cohort, seed=seed)
    else:
        forecast = run_pipeline(pipeline_id, cohort, seed=seed)
    write_predictions(forecast.predictions, out_path)
    manifest = RunManifest("predict",
                           {"data": data_dir, "pipeline": pipeline_id,
                            "config": config_path, "seed": seed, "out": out_path},
                           seed=seed, pipeline_ids=[forecast.pipeline_id])
    _add_cohort_inputs(manifest, data_dir)
    if config_path:
        manifest.add_input("config", config_path)
    manifest.add_output("predictions", out_path)
    write_manifest(manifest, out_path)
    click.echo(f"predict: {forecast.pipeline_id} -> {out_path}")


@main.command()
@click.argument("predictions_csv", type=click.Path(exists=True))
@click.option("--data", "data_dir", type=click.Path(exists=True), required=True)
@click.option("--pipeline", "pipeline_id", default=None,
              help="Label for the report; defaults to the file stem.")
@click.option("--out", "out_path", type=click.Path(), required=True)
def score(predictions_csv, data_dir, pipeline_id, out_path):
    """Score predictions against the cohort's 2018 ground truth."""
    cohort = load_cohort(data_dir)
    if cohort.ground_truth_2018 is None:
        raise click.ClickException(f"no ground_truth.csv in {data_dir}; cannot score")
    predictions = parse_predictions(predictions_csv)
    label = pipeline_id or Path(predictions_csv).stem
    report = total_rae(predictions, cohort.ground_truth_2018, pipeline_id=label)
    Path(out_path).write_text(json.dumps(report_to_json(report), indent=2, sort_keys=True) + "\n",
                              encoding="utf-8")
    manifest = RunManifest("score",
                           {"_args": [predictions_csv], "data": data_dir,
                            "pipeline": pipeline_id, "out": out_path},
                           pipeline_ids=[label])
    _add_cohort_inputs(manifest, data_dir)
    manifest.add_input("predictions", predictions_csv)
    manifest.add_output("report", out_path)
    write_manifest(manifest, out_path)
    click.echo(f"score: {label} total_rae={report.total_rae:.4f} -> {out_path}")


@main.command()
@click.argument("predictions_csv", type=click.Path(exists=True))
@click.option("--data", "data_dir", type=click.Path(exists=True), required=True)
@click.option("--pipeline", "generator_id", type=click.Choice(sorted(EXPLAINERS)),
              default="kb_shapley", show_default=True,
              help="Explanation generator to run.")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help='JSON {"meters": [...]} to override the seeded sample.')
@click.option("--seed", type=int, default=0)
@click.option("--out", "out_path", type=click.Path(), required=True)
def explain(predictions_csv, data_dir, generator_id, config_path, seed, out_path):
    """Generate explanation bundles for a seeded sample of meters."""
    cohort = load_cohort(data_dir)
    predictions = parse_predictions(predictions_csv)
    forecast = ForecastSet(Path(predictions_csv).stem,
                           {mid: mo.values for mid, mo in predictions.items()})
    if config_path:
        meters = json.loads(Path(config_path).read_text())["meters"]
        missing = [m for m in meters if m not in cohort.meters]
        if missing:
            raise click.ClickException(f"unknown meters: {missing}")
    else:
        meters = sample_meters(cohort, seed)
    bundles = EXPLAINERS[generator_id](cohort, forecast, meter_ids=meters, seed=seed)
    write_bundles(out_path, bundles)
    manifest = RunManifest("explain",
                           {"_args": [predictions_csv], "data": data_dir,
                            "pipeline": generator_id, "config": config_path,
                            "seed": seed, "out": out_path},
                           seed=seed, pipeline_ids=[generator_id])
    _add_cohort_inputs(manifest, data_dir)
    manifest.add_input("predictions", predictions_csv)
    if config_path:
        manifest.add_input("config", config_path)
    manifest.add_output("bundles", out_path)
    write_manifest(manifest, out_path)
    click.echo(f"explain: {generator_id} x {len(bundles)} meters -> {out_path}")


@main.command()
@click.option("--data", "data_dir", type=click.Path(exists=True), required=True)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help='JSON {"finalists": {pipeline: generator}, "meters": [...]}.')
@click.option("--seed", type=int, default=0)
@click.option("--out", "out_dir", type=click.Path(), required=True)
def pack(data_dir, config_path, seed, out_dir):
    """Run the finalists end to end and assemble a blinded review packet."""
    cohort = load_cohort(data_dir)
    cfg = json.loads(Path(config_path).read_text()) if config_path else {}
    finalists = cfg.get("finalists", DEFAULT_FINALISTS)
    unknown = [p for p in finalists if p not in PIPELINES]
    unknown += [g for g in finalists.values() if g not in EXPLAINERS]
    if unknown:
        raise click.ClickException(f"unknown pipeline or generator ids: {unknown}")
    meters = cfg.get("meters") or sample_meters(cohort, seed)

    view = prepare(cohort)
    forecasts, bundles = {}, {}
    for pid, gid in finalists.items():
        forecasts[pid] = run_pipeline(pid, cohort, seed=seed, prep=view)
        bundles[pid] = EXPLAINERS[gid](cohort, forecasts[pid], meter_ids=meters,
                                       prep=view, seed=seed)
    packet, unblinding = pack_review(forecasts, bundles, cohort, meters, seed=seed)

    os.makedirs(out_dir, exist_ok=True)
    packet_path = os.path.join(out_dir, "packet.json")
    unblinding_path = os.path.join(out_dir, "unblinding.json")
    write_packet(packet_path, packet)
    Path(unblinding_path).write_text(json.dumps(unblinding, indent=2, sort_keys=True) + "\n",
                                     encoding="utf-8")
    manifest = RunManifest("pack",
                           {"data": data_dir, "config": config_path,
                            "seed": seed, "out": out_dir},
                           seed=seed, pipeline_ids=sorted(finalists))
    _add_cohort_inputs(manifest, data_dir)
    if config_path:
        manifest.add_input("config", config_path)
    manifest.add_output("packet", packet_path)
    manifest.add_output("unblinding", unblinding_path)
    for pid in sorted(finalists):
        path = os.path.join(out_dir, f"predictions_{pid}.csv")
        write_predictions(forecasts[pid].predictions, path)
        manifest.add_output(f"predictions_{pid}", path)
        bpath = os.path.join(out_dir, f"bundles_{pid}.jsonl")
        write_bundles(bpath, bundles[pid])
        manifest.add_output(f"bundles_{pid}", bpath)
    write_manifest(manifest, out_dir)
    click.echo(f"pack: {packet.packet_id} ({len(packet.entries)} entries) -> {out_dir}")


@main.command()
@click.option("--packet", "packet_path", type=click.Path(exists=True), required=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--out", "store_path", type=click.Path(), default=None,
              help="Response log path; defaults to responses.jsonl next to the packet.")
def serve(packet_path, port, store_path):
    """Serve the review API and, when built, the review UI."""
    import uvicorn

    if store_path is None:
        store_path = str(Path(packet_path).parent / "responses.jsonl")
    app = create_app(packet_path, store_path, ui_dir=default_ui_dir())
    manifest = RunManifest("serve", {"packet": packet_path, "port": port, "out": store_path})
    manifest.add_input("packet", packet_path)
    write_manifest(manifest, store_path)
    click.echo(f"serve: packet {app.state.packet.packet_id} on 127.0.0.1:{port} "
               f"(responses -> {store_path})")
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")


def _leaderboard_rows(reports):
    rows = [{"pipeline_id": r.pipeline_id, "year_rae": r.year_rae,
             "month_rae": r.month_rae, "total_rae": r.total_rae}
            for r in sorted(reports, key=lambda r: (r.total_rae, r.pipeline_id))]
    return rows


def _render_leaderboard(rows) -> str:
    lines = [f"{'Contestants':24s} {'Yearly rAE':>10s} {'Monthly rAE':>11s} {'Total rAE':>9s}"]
    for row in rows:
        lines.append(f"{row['pipeline_id']:24s} {row['year_rae']:>10.4f} "
                     f"{row['month_rae']:>11.4f} {row['total_rae']:>9.4f}")
    return "\n".join(lines)


def _render_criteria(agg) -> str:
    ids = agg["criterion_ids"]
    head = f"{'Contestants':24s} " + " ".join(f"{cid:>5s}" for cid in ids)
    lines = [head]
    for row in agg["finalists"]:
        cells = [row["criteria"][cid]["mean"] for cid in ids]
        text = " ".join("    -" if c is None else f"{c:5.2f}" for c in cells)
        lines.append(f"{row['finalist']:24s} {text}")
    return "\n".join(lines)


def _render_final(rows) -> str:
    lines = [f"{'Contestants':24s} {'Score':>5s}"]
    for row in rows:
        lines.append(f"{row['pipeline_id']:24s} {row['final_score']:>5.2f}")
    return "\n".join(lines)


@main.command()
@click.option("--data", "data_dir", type=click.Path(exists=True), required=True,
              help="Directory holding score reports and optional review artifacts.")
@click.option("--out", "out_path", type=click.Path(), required=True)
def report(data_dir, out_path):
    """Combine score reports (and review aggregates, if any) into one table."""
    reports, inputs = [], {}
    aggregate_table = None
    unblinding = None
    for path in sorted(Path(data_dir).glob("*.json")):
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError):
            continue
        if not isinstance(data, dict):
            continue
        if data.get("schema", "").startswith("meterbench.score/"):
            reports.append(report_from_json(data))
            inputs[f"score:{path.name}"] = path
        elif {"criterion_ids", "finalists", "packet_id"} <= set(data):
            aggregate_table = data
            inputs[f"aggregate:{path.name}"] = path
        elif path.name == "unblinding.json":
            unblinding = data
            inputs["unblinding"] = path
    if not reports:
        raise click.ClickException(f"no score reports found in {data_dir}")

    rows = _leaderboard_rows(reports)
    output = {"leaderboard": rows}
    click.echo(_render_leaderboard(rows))

    if aggregate_table is not None:
        click.echo("")
        click.echo(_render_criteria(aggregate_table))
        if unblinding is not None:
            by_pipeline = {r.pipeline_id: r for r in reports}
            final_rows = []
            for label, pid in sorted(unblinding.items()):
                if pid not in by_pipeline:
                    continue
                try:
                    means = criterion_means(aggregate_table, label)
                except (NoResponses, KeyError):
                    continue
                final_rows.append({
                    "pipeline_id": pid,
                    "finalist": label,
                    "criterion_means": means,
                    "final_score": round(final_score(by_pipeline[pid], means), 2),
                })
            if final_rows:
                final_rows.sort(key=lambda r: -r["final_score"])
                output["final_scores"] = final_rows
                click.echo("")
                click.echo(_render_final(final_rows))

    Path(out_path).write_text(json.dumps(output, indent=2, sort_keys=True) + "\n",
                              encoding="utf-8")
    manifest = RunManifest("report", {"data": data_dir, "out": out_path})
    for name, path in inputs.items():
        manifest.add_input(name, path)
    manifest.add_output("report", out_path)
    write_manifest(manifest, out_path)


if __name__ == "__main__":
    main()
