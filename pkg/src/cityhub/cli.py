"""cityhub command line: operator, provider, and developer workflows.

A pure REST client apart from `serve`, which runs the hub in-process.
Exit codes: 0 success, 1 usage error, 2 remote/API error.
"""
from __future__ import annotations

import json
import sys

import click
import requests

from . import adapter as adapter_mod
from .errors import HubError


class ApiError(Exception):
    def __init__(self, status: int, body: str):
        super().__init__(f"HTTP {status}: {body.strip()}")
        self.status = status
        self.body = body


class Client:
    def __init__(self, hub_url: str, key: str, output: str):
        self.hub_url = hub_url.rstrip("/")
        self.key = key
        self.output = output

    def request(self, method: str, path: str, **kwargs) -> requests.Response:
        headers = kwargs.pop("headers", {})
        if self.key:
            headers.setdefault("X-Api-Key", self.key)
        try:
            response = requests.request(
                method, self.hub_url + path, headers=headers, timeout=30,
                **kwargs)
        except requests.RequestException as exc:
            raise ApiError(0, f"hub unreachable: {exc}") from None
        if response.status_code >= 400:
            raise ApiError(response.status_code, response.text)
        return response

    def emit(self, response: requests.Response, table=None):
        if self.output == "json" or table is None:
            click.echo(response.text, nl=not response.text.endswith("\n"))
        else:
            click.echo(table(response))


pass_client = click.make_pass_decorator(Client)


@click.group()
@click.option("--hub-url", envvar="CITYHUB_URL",
              default="http://127.0.0.1:8080", show_default=True)
@click.option("--key", envvar="CITYHUB_KEY", default="",
              help="API key; flag wins over CITYHUB_KEY.")
@click.option("--output", "-o", type=click.Choice(["json", "table"]),
              default="json", show_default=True)
@click.pass_context
def cli(ctx, hub_url, key, output):
    """Client and server for the city data hub."""
    ctx.obj = Client(hub_url, key, output)


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8080, show_default=True)
@click.option("--data-dir", required=True, type=click.Path())
def serve(host, port, data_dir):
    """Run the hub server over a data directory."""
    from .service import serve as run_server
    run_server(host, port, data_dir)


# -- feeds -------------------------------------------------------------------

@cli.group()
def feed():
    """Create and list feeds."""


@feed.command("create")
@click.argument("feed_id")
@click.option("--title", required=True)
@click.option("--lat", required=True, type=float)
@click.option("--lon", required=True, type=float)
@click.option("--tag", "tags", multiple=True)
@pass_client
def feed_create(client, feed_id, title, lat, lon, tags):
    response = client.request("POST", "/v1/feeds", json={
        "id": feed_id, "title": title, "lat": lat, "lon": lon,
        "tags": list(tags)})
    client.emit(response)


@feed.command("list")
@click.option("--tag")
@click.option("--lat", type=float)
@click.option("--lon", type=float)
@click.option("--radius-km", type=float)
@pass_client
def feed_list(client, tag, lat, lon, radius_km):
    params = {}
    if tag is not None:
        params["tag"] = tag
    if radius_km is not None:
        params.update(lat=lat, lon=lon, radius_km=radius_km)
    response = client.request("GET", "/v1/feeds", params=params)

    def table(resp):
        rows = [f"{f['id']}\t{f['title']}\t"
                f"({f['location']['lat']},{f['location']['lon']})\t"
                f"{','.join(f['tags'])}"
                for f in resp.json()]
        return "\n".join(rows) if rows else "(no feeds)"

    client.emit(response, table)


# -- streams -----------------------------------------------------------------

@cli.group()
def stream():
    """Create datastreams."""


@stream.command("create")
@click.argument("feed_id")
@click.argument("stream_id")
@click.option("--unit-label", default="")
@click.option("--unit-symbol", default="")
@click.option("--tag", "tags", multiple=True)
@pass_client
def stream_create(client, feed_id, stream_id, unit_label, unit_symbol, tags):
    response = client.request(
        "POST", f"/v1/feeds/{feed_id}/datastreams",
        json={"id": stream_id, "unit_label": unit_label,
              "unit_symbol": unit_symbol, "tags": list(tags)})
    client.emit(response)


# -- keys --------------------------------------------------------------------

@cli.group()
def key():
    """Issue and revoke API keys (operator only)."""


@key.command("issue")
@click.option("--role", required=True,
              type=click.Choice(["PlatformOperator", "DataProvider",
                                 "AppDeveloper", "EndUser"]))
@click.option("--scope", default=None, help="Feed id; omit for all feeds.")
@click.option("--label", default="")
@pass_client
def key_issue(client, role, scope, label):
    response = client.request("POST", "/v1/keys", json={
        "role": role, "scope": scope, "label": label})
    client.emit(response)


@key.command("revoke")
@click.argument("key_id")
@pass_client
def key_revoke(client, key_id):
    client.emit(client.request("POST", f"/v1/keys/{key_id}/revoke"))


# -- developer flows ---------------------------------------------------------

@cli.command()
@click.argument("feed_id")
@pass_client
def subscribe(client, feed_id):
    """Subscribe the calling developer key to a feed."""
    response = client.request("POST", "/v1/subscriptions",
                              json={"feed_id": feed_id})
    client.emit(response)


@cli.command()
@click.argument("feed_id")
@click.argument("eeml_file", type=click.File("rb"))
@click.option("--lenient", is_flag=True,
              help="Auto-create streams for unknown data element ids.")
@pass_client
def ingest(client, feed_id, eeml_file, lenient):
    """Submit an EEML document to a feed."""
    params = {"strict": "false"} if lenient else {}
    response = client.request(
        "PUT", f"/v1/feeds/{feed_id}", params=params, data=eeml_file.read(),
        headers={"Content-Type": "application/xml"})
    client.emit(response)


# -- adapter -----------------------------------------------------------------

@cli.group("adapter")
def adapter_group():
    """Run the CSV-to-EEML edge adapter."""


@adapter_group.command("run")
@click.option("--mapping", "mapping_path", required=True,
              type=click.Path(exists=True))
@click.option("--source", required=True, type=click.Path())
@click.option("--interval", "interval_s", default=3600.0, show_default=True)
@click.option("--once", is_flag=True)
@pass_client
def adapter_run(client, mapping_path, source, interval_s, once):
    with open(mapping_path, "rb") as fh:
        mapping = adapter_mod.load_mapping(fh.read())
    summary = adapter_mod.run_adapter(
        mapping, source, client.hub_url, client.key,
        interval_s=interval_s, once=once)
    click.echo(json.dumps({
        "submitted": summary.submitted,
        "accepted": summary.accepted,
        "rejected": summary.rejected,
        "errors": summary.errors,
    }))


# -- queries -----------------------------------------------------------------

@cli.group()
def query():
    """Read datapoints and aggregates."""


@query.command("datapoints")
@click.argument("feed_id")
@click.argument("stream_id")
@click.option("--start", required=True)
@click.option("--end", required=True)
@click.option("--limit", default=10000, show_default=True)
@pass_client
def query_datapoints(client, feed_id, stream_id, start, end, limit):
    response = client.request(
        "GET", f"/v1/feeds/{feed_id}/datastreams/{stream_id}/datapoints",
        params={"start": start, "end": end, "limit": limit})

    def table(resp):
        rows = [f"{p['at']}\t{p['value']}" for p in resp.json()]
        return "\n".join(rows) if rows else "(no datapoints)"

    client.emit(response, table)


@query.command("aggregate")
@click.argument("feed_id")
@click.argument("stream_id")
@click.option("--fn", required=True,
              type=click.Choice(["min", "max", "avg", "sum", "count"]))
@click.option("--window-s", required=True, type=int)
@click.option("--start", required=True)
@click.option("--end", required=True)
@pass_client
def query_aggregate(client, feed_id, stream_id, fn, window_s, start, end):
    response = client.request(
        "GET", f"/v1/feeds/{feed_id}/datastreams/{stream_id}/aggregate",
        params={"fn": fn, "window_s": window_s, "start": start, "end": end})
    client.emit(response)


@cli.command()
@click.option("--rel")
@click.option("--val")
@pass_client
def cat(client, rel, val):
    """Fetch the Hypercat catalogue."""
    params = {}
    if rel is not None:
        params["rel"] = rel
    if val is not None:
        params["val"] = val
    client.emit(client.request("GET", "/cat", params=params))


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        exc.show(file=sys.stderr)
        return 1
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return 1
    except click.Abort:
        return 1
    except ApiError as exc:
        click.echo(str(exc), err=True)
        return 2
    except HubError as exc:
        click.echo(f"{exc.code}: {exc.message}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
