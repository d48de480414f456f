"""REST surface: Provider and Developer APIs over one FastAPI app.

Responses are serialized by hand (stable key order, compact JSON) so that
identical state plus identical request yields byte-identical bodies.
"""
from __future__ import annotations

import json
import socket
from typing import Optional

from fastapi import FastAPI, Request, Response

from . import hypercat
from .auth import ApiKey
from .eeml import serialize_eeml
from .errors import (
    BindFailure,
    Forbidden,
    HubError,
    InvalidBody,
    InvalidFilter,
    InvalidRange,
    InvalidWindow,
    Unauthorized,
    status_for,
)
from .hub import Hub
from .model import (
    Datastream,
    GeoPoint,
    StreamRef,
    format_timestamp,
    parse_timestamp,
)

CATALOGUE_DESCRIPTION = "City data hub catalogue"
DEFAULT_LIMIT = 10000


def _json_response(payload, status: int = 200) -> Response:
    body = json.dumps(payload, separators=(",", ":")) + "\n"
    return Response(content=body, status_code=status,
                    media_type="application/json")


def _error_response(code: str, message: str) -> Response:
    return _json_response({"code": code, "message": message},
                          status=status_for(code))


def _key_json(key: ApiKey, with_secret: bool) -> dict:
    out = {"id": key.id, "role": key.role, "scope": key.scope,
           "label": key.label}
    if with_secret:
        out["secret"] = key.secret
    return out


def _feed_json(feed) -> dict:
    return {
        "id": feed.id,
        "title": feed.title,
        "location": {"lat": feed.location.lat, "lon": feed.location.lon},
        "tags": sorted(feed.tags),
        "provider": feed.provider,
        "created_at": format_timestamp(feed.created_at),
        "streams": [
            {
                "id": sid,
                "unit_label": feed.streams[sid].unit_label,
                "unit_symbol": feed.streams[sid].unit_symbol,
                "tags": sorted(feed.streams[sid].tags),
            }
            for sid in sorted(feed.streams)
        ],
    }


async def _read_json(request: Request) -> dict:
    try:
        payload = json.loads(await request.body())
    except ValueError:
        raise InvalidBody("request body is not valid JSON") from None
    if not isinstance(payload, dict):
        raise InvalidBody("request body must be a JSON object")
    return payload


def _field(payload: dict, name: str, kind=str):
    try:
        value = payload[name]
    except KeyError:
        raise InvalidBody(f"missing field {name!r}") from None
    if kind is float and isinstance(value, int):
        value = float(value)
    if not isinstance(value, kind):
        raise InvalidBody(f"field {name!r} has the wrong type")
    return value


def _parse_ts(text: Optional[str], what: str):
    if text is None:
        raise InvalidRange(f"missing {what}")
    try:
        return parse_timestamp(text)
    except ValueError as exc:
        raise InvalidRange(f"bad {what}: {exc}") from None


def _secret(request: Request) -> Optional[str]:
    return request.headers.get("X-Api-Key")


def _require(hub: Hub, request: Request, action: str,
             resource: Optional[str] = None) -> ApiKey:
    secret = _secret(request)
    key = hub.keys.by_secret(secret)
    if key is None:
        raise Unauthorized("missing, unknown, or revoked API key")
    decision = hub.authorize(secret, action, resource)
    if not decision.allow:
        raise Forbidden(decision.reason)
    return key


def create_app(hub: Hub) -> FastAPI:
    app = FastAPI(title="cityhub", docs_url=None, redoc_url=None,
                  openapi_url=None)
    app.state.hub = hub

    @app.exception_handler(HubError)
    async def hub_error_handler(_request, exc: HubError):
        return _error_response(exc.code, exc.message)

    @app.get("/cat")
    async def catalogue(rel: Optional[str] = None, val: Optional[str] = None):
        doc = hypercat.build_catalogue(hub.list_feeds(), CATALOGUE_DESCRIPTION)
        doc = hypercat.filter_catalogue(doc, rel, val)
        return Response(content=hypercat.serialize_catalogue(doc),
                        media_type=hypercat.CATALOGUE_TYPE)

    @app.get("/v1/feeds")
    async def list_feeds(tag: Optional[str] = None,
                         lat: Optional[str] = None,
                         lon: Optional[str] = None,
                         radius_km: Optional[str] = None):
        near = None
        if lat is not None or lon is not None or radius_km is not None:
            if lat is None or lon is None or radius_km is None:
                raise InvalidFilter("geo filter needs lat, lon, and radius_km")
            try:
                near = (GeoPoint(float(lat), float(lon)), float(radius_km))
            except ValueError:
                raise InvalidFilter("lat, lon, radius_km must be numbers") from None
        feeds = hub.list_feeds(tag=tag, near=near)
        return _json_response([_feed_json(f) for f in feeds])

    @app.post("/v1/feeds")
    async def create_feed(request: Request):
        key = _require(hub, request, "create_feed")
        payload = await _read_json(request)
        location = GeoPoint(_field(payload, "lat", float),
                            _field(payload, "lon", float))
        tags = payload.get("tags", [])
        if not isinstance(tags, list):
            raise InvalidBody("tags must be a list")
        feed, feed_key = hub.create_feed(
            _field(payload, "id"), _field(payload, "title"), location,
            tags, provider=key.id)
        return _json_response(
            {"feed": _feed_json(feed), "key": _key_json(feed_key, True)},
            status=201)

    @app.get("/v1/feeds/{fid}")
    async def feed_snapshot(fid: str, request: Request):
        hub.get_feed(fid)
        _require(hub, request, "read_latest", fid)
        doc = hub.feed_snapshot(fid)
        return Response(content=serialize_eeml(doc),
                        media_type="application/xml")

    @app.put("/v1/feeds/{fid}")
    async def ingest(fid: str, request: Request,
                     strict: Optional[str] = None):
        body = await request.body()
        report = hub.ingest_eeml(fid, _secret(request), body,
                                 strict=(strict != "false"))
        return _json_response({
            "feed": report.feed,
            "accepted": report.accepted,
            "rejected": [{"id": i, "reason": r} for i, r in report.rejected],
        })

    @app.post("/v1/feeds/{fid}/datastreams")
    async def create_datastream(fid: str, request: Request):
        key = _require(hub, request, "create_stream", fid)
        payload = await _read_json(request)
        stream = Datastream(
            id=_field(payload, "id"),
            unit_label=payload.get("unit_label", ""),
            unit_symbol=payload.get("unit_symbol", ""),
            tags=payload.get("tags", []))
        created = hub.create_datastream(fid, stream, caller=key.id)
        return _json_response({
            "feed": fid,
            "id": created.id,
            "unit_label": created.unit_label,
            "unit_symbol": created.unit_symbol,
            "tags": sorted(created.tags),
        }, status=201)

    @app.get("/v1/feeds/{fid}/datastreams/{sid}/datapoints")
    async def datapoints(fid: str, sid: str, request: Request,
                         start: Optional[str] = None,
                         end: Optional[str] = None,
                         limit: Optional[str] = None):
        try:
            limit_n = int(limit) if limit is not None else DEFAULT_LIMIT
        except ValueError:
            raise InvalidRange(f"bad limit: {limit!r}") from None
        points = hub.read_datapoints(
            StreamRef(fid, sid), _parse_ts(start, "start"),
            _parse_ts(end, "end"), limit_n, _secret(request))
        return _json_response([
            {"at": format_timestamp(p.at), "value": p.value} for p in points])

    @app.get("/v1/feeds/{fid}/datastreams/{sid}/aggregate")
    async def aggregate(fid: str, sid: str, request: Request,
                        fn: Optional[str] = None,
                        window_s: Optional[str] = None,
                        start: Optional[str] = None,
                        end: Optional[str] = None):
        try:
            window_n = int(window_s) if window_s is not None else None
        except ValueError:
            raise InvalidWindow(f"bad window_s: {window_s!r}") from None
        if window_n is None or fn is None:
            raise InvalidWindow("fn and window_s are required")
        buckets = hub.aggregate(
            StreamRef(fid, sid), fn, window_n, _parse_ts(start, "start"),
            _parse_ts(end, "end"), _secret(request))
        return _json_response([
            {"window_start": format_timestamp(b.window_start),
             "fn": b.fn, "value": b.value}
            for b in buckets])

    @app.post("/v1/subscriptions")
    async def subscribe(request: Request):
        key = _require(hub, request, "subscribe")
        payload = await _read_json(request)
        sub = hub.subscribe(key.id, _field(payload, "feed_id"))
        return _json_response({
            "subscriber": sub.subscriber,
            "feed": sub.feed,
            "created_at": format_timestamp(sub.created_at),
        }, status=201)

    @app.post("/v1/keys")
    async def issue_key(request: Request):
        _require(hub, request, "issue_key")
        payload = await _read_json(request)
        scope = payload.get("scope")
        if scope is not None and not isinstance(scope, str):
            raise InvalidBody("scope must be a feed id or null")
        key = hub.issue_key(_field(payload, "role"), scope,
                            payload.get("label", ""), _secret(request))
        return _json_response(_key_json(key, True), status=201)

    @app.post("/v1/keys/{kid}/revoke")
    async def revoke_key(kid: str, request: Request):
        hub.revoke_key(kid, _secret(request))
        return _json_response({"id": kid, "revoked": True})

    return app


def serve(host: str, port: int, data_dir: str):
    """Replay the log, print the bootstrap key on first start, and serve."""
    import uvicorn

    hub = Hub(data_dir)
    if hub.bootstrap_secret:
        print(f"Bootstrap operator key: {hub.bootstrap_secret}", flush=True)
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        raise BindFailure(f"cannot bind {host}:{port}: {exc}") from None
    finally:
        probe.close()
    uvicorn.run(create_app(hub), host=host, port=port, log_level="warning")
