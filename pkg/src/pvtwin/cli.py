"""Command-line twin of the HTTP service.

Subcommands mirror the service endpoints and produce byte-identical file
artifacts in the same workspace layout. Option names follow the
operational parameter vocabulary (OPERATION, DATE_OF_INTEREST,
AVAILABILITY, PATH_GFS, PATH_JSON, PATH_HISTORICAL, PATH_DAYCAST,
PATH_HOURCAST, PATH_INSTACAST, OPTION).
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from . import ops


@click.group()
@click.option("--workspace", envvar="PVTWIN_WORKSPACE", default="workspace",
              show_default=True, help="Workspace directory (db, downloads, artifacts).")
@click.pass_context
def main(ctx, workspace):
    """PV-plant digital twin and intraday market operations."""
    ctx.obj = ops.Workspace.open(workspace)


def _echo(document: dict) -> None:
    click.echo(json.dumps(document, indent=2, default=str))


@main.command()
@click.argument("path", type=click.Path(exists=True, path_type=Path))
@click.option("--format", "fmt", type=click.Choice(["csv", "xlsx"]),
              default=None, help="Defaults from the file extension.")
@click.pass_obj
def ingest(ws, path, fmt):
    """Upload a measurement file and run quality control."""
    fmt = fmt or ("xlsx" if path.suffix.lower() == ".xlsx" else "csv")
    summary = ops.upload_measurements(ws, path.read_bytes(), fmt)
    _echo(summary.to_document())


@main.command()
@click.option("--operation", type=click.Choice(["offer", "pre_offer"]),
              default="offer", show_default=True)
@click.option("--date-of-interest", type=click.DateTime(["%Y-%m-%d"]),
              default=None, help="Defaults to today+1 (offer) or +2 (pre-offer).")
@click.option("--availability", type=float, required=True,
              help="Plant availability in MW.")
@click.option("--path-gfs", required=True, help="GHI forecast file (timestamp, ghi).")
@click.option("--path-json", default=None,
              help="Plant architecture document; defaults to the bundled plant.")
@click.option("--plant-config-id", default="elpaso", show_default=True)
@click.option("--path-historical", default=None,
              help="Historical measurement file used to complete missing inputs.")
@click.option("--temperature-model", default="sapm", show_default=True,
              type=click.Choice(["sapm", "measured_module", "noct"]))
@click.pass_obj
def offer(ws, operation, date_of_interest, availability, path_gfs, path_json,
          plant_config_id, path_historical, temperature_model):
    """Build and store the hourly offer for the market day."""
    date = date_of_interest.date() if date_of_interest else None
    artifact = ops.run_offer(
        ws, operation=operation, date_of_interest=date,
        availability_mw=availability, plant_config_id=plant_config_id,
        path_json=path_json, path_gfs=path_gfs,
        path_historical=path_historical, temperature_model=temperature_model)
    _echo(artifact.to_document())


@main.command()
@click.option("--date-of-interest", type=click.DateTime(["%Y-%m-%d"]),
              required=True)
@click.option("--margin", type=float, default=0.05, show_default=True)
@click.option("--path-daycast", default=None)
@click.option("--path-hourcast", default=None)
@click.option("--path-instacast", default=None)
@click.option("--path-json", default=None)
@click.option("--plant-config-id", default="elpaso", show_default=True)
@click.option("--path-historical", default=None)
@click.pass_obj
def redispatch(ws, date_of_interest, margin, path_daycast, path_hourcast,
               path_instacast, path_json, plant_config_id, path_historical):
    """Check the committed offer against intraday forecasts."""
    artifact = ops.run_redispatch(
        ws, date=date_of_interest.date(), margin=margin,
        plant_config_id=plant_config_id, path_json=path_json,
        cast_paths={"daycast": path_daycast, "hourcast": path_hourcast,
                    "instacast": path_instacast},
        path_historical=path_historical)
    _echo(artifact.to_document())


@main.command()
@click.option("--option", type=int, required=True,
              help="1 = MAE, 2 = RMSE, 3 = MAPE.")
@click.option("--path-models", required=True)
@click.option("--path-horizons", required=True)
@click.option("--path-irradiance", required=True)
@click.pass_obj
def heatmap(ws, option, path_models, path_horizons, path_irradiance):
    """Best-model heatmap by hour of day and forecast horizon."""
    artifact = ops.run_heatmap(ws, option, path_models, path_horizons,
                               path_irradiance)
    _echo(artifact.to_document())


@main.command()
@click.option("--issue-time", required=True,
              type=click.DateTime(["%Y-%m-%d %H:%M", "%Y-%m-%dT%H:%M"]))
@click.option("--series-id", default=None,
              help="Stored measurement series; defaults to the latest upload.")
@click.option("--plant-config-id", default="elpaso", show_default=True)
@click.pass_obj
def baseline(ws, issue_time, series_id, plant_config_id):
    """Clear-sky persistence forecast from the stored measurements."""
    artifact = ops.run_baseline(ws, issue_time, series_id=series_id,
                                plant_config_id=plant_config_id)
    _echo(artifact.to_document())


@main.command()
@click.option("--plant-config-id", default="elpaso", show_default=True)
@click.option("--path-json", default=None)
@click.option("--series-id", default=None)
@click.option("--temperature-model", default="sapm", show_default=True,
              type=click.Choice(["sapm", "measured_module", "noct"]))
@click.pass_obj
def simulate(ws, plant_config_id, path_json, series_id, temperature_model):
    """Export the full-chain production for the stored measurements."""
    artifact = ops.run_simulate(ws, plant_config_id, path_json, series_id,
                                temperature_model)
    _echo(artifact.to_document())


@main.command("fetch-pi")
@click.option("--start-date", required=True,
              help="Start in YYYY-MM-DDThh:mm:ss.")
@click.option("--end-date", required=True, help="End in YYYY-MM-DDThh:mm:ss.")
@click.option("--freq", type=click.Choice(["minute", "hourly", "daily"]),
              default="minute", show_default=True)
@click.option("--secondary-database", default=None,
              help="SQLite route; defaults to db/pi.db in the workspace.")
@click.option("--mock/--no-mock", default=False,
              help="Use the deterministic offline transport.")
@click.pass_obj
def fetch_pi_cmd(ws, start_date, end_date, freq, secondary_database, mock):
    """Download on-site historian measurements and persist them locally."""
    from . import gateway
    transport = (gateway.MockPiTransport() if mock
                 else gateway.pi_transport_from_env())
    database = secondary_database or str(ws.root / "db" / "pi.db")
    series = gateway.fetch_pi(start_date, end_date, freq, database, transport)
    _echo({"schema_version": ops.SCHEMA_VERSION, "rows": len(series),
           "secondary_database": database})


@main.command("fetch-reuniwatt")
@click.option("--date-start", required=True, help="Start in YYYYMMDD.")
@click.option("--date-stop", required=True, help="End in YYYYMMDD.")
@click.option("--mock/--no-mock", default=False,
              help="Use the deterministic offline transport.")
@click.pass_obj
def fetch_reuniwatt_cmd(ws, date_start, date_stop, mock):
    """Download sky-camera forecasts and images into downloads/."""
    from . import gateway
    transport = (gateway.MockReuniwattTransport() if mock
                 else gateway.reuniwatt_transport_from_env())
    bundle = gateway.fetch_reuniwatt(date_start, date_stop, transport,
                                     ws.root / "downloads")
    _echo({"schema_version": ops.SCHEMA_VERSION,
           "casts": sorted(bundle.records),
           "images": len(bundle.image_manifest),
           "directory": str(bundle.directory)})


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--console", type=click.Path(exists=True, path_type=Path),
              default=None, help="Built console directory to serve at /console.")
@click.pass_obj
def serve(ws, host, port, console):
    """Run the HTTP service for the operator console."""
    import uvicorn

    from .api import create_app
    uvicorn.run(create_app(ws.root, console_dir=console), host=host, port=port)


if __name__ == "__main__":
    main()
