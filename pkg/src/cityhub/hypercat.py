"""Hypercat (PAS 212) catalogue: build, filter, serialize, validate.

The catalogue lists feeds only; streams are discoverable through the feed
resource itself. Output is world-readable JSON under the Hypercat media
type, with deterministic ordering so equal catalogues serialize to equal
bytes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import InvalidCatalogue

CATALOGUE_TYPE = "application/vnd.hypercat.catalogue+json"

REL_CONTENT_TYPE = "urn:X-hypercat:rels:isContentType"
REL_DESCRIPTION = "urn:X-hypercat:rels:hasDescription:en"
REL_TAG = "urn:X-hypercat:rels:hasTag"
REL_LAT = "http://www.w3.org/2003/01/geo/wgs84_pos#lat"
REL_LONG = "http://www.w3.org/2003/01/geo/wgs84_pos#long"


@dataclass(frozen=True)
class RelVal:
    rel: str
    val: str

    def __post_init__(self):
        if not self.rel or not self.val:
            raise InvalidCatalogue("rel and val must be non-empty")


@dataclass
class CatalogueItem:
    href: str
    item_metadata: list  # of RelVal


@dataclass
class CatalogueDoc:
    catalogue_metadata: list  # of RelVal
    items: list = field(default_factory=list)


def _geo_str(value: float) -> str:
    # up to 6 fractional digits, trailing zeros trimmed
    text = f"{value:.6f}".rstrip("0").rstrip(".")
    return text if text not in ("", "-") else "0"


def build_catalogue(feeds, base_description: str) -> CatalogueDoc:
    """One item per feed at /v1/feeds/{id}, id-sorted."""
    doc = CatalogueDoc(catalogue_metadata=[
        RelVal(REL_CONTENT_TYPE, CATALOGUE_TYPE),
        RelVal(REL_DESCRIPTION, base_description),
    ])
    for feed in sorted(feeds, key=lambda f: f.id):
        metadata = [
            RelVal(REL_DESCRIPTION, feed.title),
            RelVal(REL_CONTENT_TYPE, "application/xml"),
        ]
        for tag in sorted(feed.tags):
            metadata.append(RelVal(REL_TAG, tag))
        metadata.append(RelVal(REL_LAT, _geo_str(feed.location.lat)))
        metadata.append(RelVal(REL_LONG, _geo_str(feed.location.lon)))
        doc.items.append(
            CatalogueItem(href=f"/v1/feeds/{feed.id}", item_metadata=metadata))
    return doc


def filter_catalogue(doc: CatalogueDoc,
                     rel: Optional[str] = None,
                     val: Optional[str] = None) -> CatalogueDoc:
    """Keep items having a pair matching the constraint; metadata unchanged."""
    if rel is None and val is None:
        return doc

    def matches(item):
        for pair in item.item_metadata:
            if rel is not None and pair.rel != rel:
                continue
            if val is not None and pair.val != val:
                continue
            return True
        return False

    return CatalogueDoc(
        catalogue_metadata=list(doc.catalogue_metadata),
        items=[item for item in doc.items if matches(item)],
    )


def _check_invariants(doc: CatalogueDoc):
    meta = doc.catalogue_metadata
    ct = [p for p in meta if p.rel == REL_CONTENT_TYPE]
    if len(ct) != 1 or ct[0].val != CATALOGUE_TYPE:
        raise InvalidCatalogue("catalogue needs exactly one Hypercat content type")
    if not any(p.rel == REL_DESCRIPTION for p in meta):
        raise InvalidCatalogue("catalogue needs an English description")
    hrefs = set()
    for item in doc.items:
        if item.href in hrefs:
            raise InvalidCatalogue(f"duplicate href {item.href!r}")
        hrefs.add(item.href)
        if not any(p.rel == REL_DESCRIPTION for p in item.item_metadata):
            raise InvalidCatalogue(f"item {item.href} lacks a description")
        cts = [p for p in item.item_metadata if p.rel == REL_CONTENT_TYPE]
        if len(cts) != 1:
            raise InvalidCatalogue(f"item {item.href} needs one content type")


def serialize_catalogue(doc: CatalogueDoc) -> bytes:
    _check_invariants(doc)
    payload = {
        "catalogue-metadata": [
            {"rel": p.rel, "val": p.val} for p in doc.catalogue_metadata],
        "items": [
            {
                "href": item.href,
                "item-metadata": [
                    {"rel": p.rel, "val": p.val} for p in item.item_metadata],
            }
            for item in doc.items
        ],
    }
    return json.dumps(payload, indent=2).encode("utf-8")


def parse_catalogue(data: bytes) -> CatalogueDoc:
    try:
        payload = json.loads(data)
        doc = CatalogueDoc(
            catalogue_metadata=[
                RelVal(p["rel"], p["val"])
                for p in payload["catalogue-metadata"]],
            items=[
                CatalogueItem(
                    href=item["href"],
                    item_metadata=[
                        RelVal(p["rel"], p["val"])
                        for p in item["item-metadata"]],
                )
                for item in payload["items"]
            ],
        )
    except (ValueError, KeyError, TypeError) as exc:
        raise InvalidCatalogue(str(exc)) from None
    return doc


def validate_catalogue(data: bytes) -> CatalogueDoc:
    """Standalone conformance check over the serialized form."""
    doc = parse_catalogue(data)
    _check_invariants(doc)
    return doc
