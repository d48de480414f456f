"""EEML 0.5.1 profile codec.

The hub speaks a strict subset of EEML: one <environment> per document,
default namespace only, mandatory @at on current_value. Anything outside
the profile grammar is rejected rather than skipped, so a passing parse
guarantees the document invariants.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional
from xml.etree import ElementTree
from xml.sax.saxutils import escape, quoteattr

from .errors import (
    DuplicateDataId,
    InvalidDocument,
    MalformedXml,
    MissingRequired,
    NonNumericValue,
    WrongNamespace,
)
from .model import (
    GeoPoint,
    STREAM_ID_RE,
    format_timestamp,
    parse_decimal,
    parse_timestamp,
)

NAMESPACE = "http://www.eeml.org/xsd/0.5.1"
VERSION = "0.5.1"

_NS = "{%s}" % NAMESPACE


@dataclass
class DataElement:
    id: str
    current_value: str  # lexical decimal, preserved verbatim
    at: datetime
    tags: list = field(default_factory=list)
    unit_label: Optional[str] = None
    unit_symbol: Optional[str] = None

    def __post_init__(self):
        # a bare symbol implies an empty label; keeps round-trips exact
        if self.unit_symbol is not None and self.unit_label is None:
            self.unit_label = ""


@dataclass
class EnvironmentDocument:
    updated: datetime
    title: str
    data_elements: list  # of DataElement, >= 1
    environment_id: Optional[str] = None
    location: Optional[GeoPoint] = None

    def validate(self):
        if not self.data_elements:
            raise InvalidDocument("document needs at least one data element")
        seen = set()
        for el in self.data_elements:
            if not STREAM_ID_RE.match(el.id or ""):
                raise InvalidDocument(f"bad data element id: {el.id!r}")
            if el.id in seen:
                raise InvalidDocument(f"duplicate data element id: {el.id}")
            seen.add(el.id)
            try:
                parse_decimal(el.current_value)
            except ValueError as exc:
                raise InvalidDocument(str(exc)) from None


def _local(tag: str) -> str:
    return tag.split("}", 1)[1] if tag.startswith("{") else tag


def _require_ns(tag: str, what: str) -> str:
    if not tag.startswith(_NS):
        raise WrongNamespace(f"{what} not in {NAMESPACE}")
    return _local(tag)


def _no_stray_text(elem):
    if (elem.text or "").strip() and len(elem):
        raise MalformedXml(f"mixed content in <{_local(elem.tag)}>")
    for child in elem:
        if (child.tail or "").strip():
            raise MalformedXml(f"stray text after <{_local(child.tag)}>")


def _check_attrs(elem, allowed):
    for name in elem.attrib:
        if name not in allowed:
            raise MalformedXml(
                f"unknown attribute {name!r} on <{_local(elem.tag)}>")


def _parse_location(elem) -> GeoPoint:
    _check_attrs(elem, set())
    _no_stray_text(elem)
    parts = {}
    for child in elem:
        name = _require_ns(child.tag, "location child")
        if name not in ("lat", "lon"):
            raise MalformedXml(f"unknown element <{name}> in <location>")
        if name in parts:
            raise MalformedXml(f"repeated <{name}> in <location>")
        _check_attrs(child, set())
        if len(child):
            raise MalformedXml(f"<{name}> must be a leaf")
        try:
            parts[name] = float((child.text or "").strip())
        except ValueError:
            raise MalformedXml(f"non-numeric <{name}>") from None
    if "lat" not in parts or "lon" not in parts:
        raise MissingRequired("location needs lat and lon")
    return GeoPoint(parts["lat"], parts["lon"])


def _parse_data(elem) -> DataElement:
    _check_attrs(elem, {"id"})
    data_id = elem.get("id")
    if data_id is None:
        raise MissingRequired("data element lacks id")
    if not STREAM_ID_RE.match(data_id):
        raise MalformedXml(f"bad data id: {data_id!r}")
    _no_stray_text(elem)

    tags = []
    current_value = None
    at = None
    unit_label = None
    unit_symbol = None
    seen_value = seen_unit = False
    for child in elem:
        name = _require_ns(child.tag, "data child")
        if name == "tag":
            _check_attrs(child, set())
            if len(child):
                raise MalformedXml("<tag> must be a leaf")
            tags.append(child.text or "")
        elif name == "current_value":
            if seen_value:
                raise MalformedXml("repeated <current_value>")
            seen_value = True
            _check_attrs(child, {"at"})
            at_text = child.get("at")
            if at_text is None:
                raise MissingRequired("current_value lacks at")
            try:
                at = parse_timestamp(at_text)
            except ValueError as exc:
                raise MalformedXml(f"bad at timestamp: {exc}") from None
            if len(child):
                raise MalformedXml("<current_value> must be a leaf")
            current_value = child.text or ""
            try:
                parse_decimal(current_value)
            except ValueError:
                raise NonNumericValue(
                    f"current_value {current_value!r}") from None
        elif name == "unit":
            if seen_unit:
                raise MalformedXml("repeated <unit>")
            seen_unit = True
            _check_attrs(child, {"symbol"})
            if len(child):
                raise MalformedXml("<unit> must be a leaf")
            unit_label = child.text or ""
            unit_symbol = child.get("symbol")
        else:
            raise MalformedXml(f"unknown element <{name}> in <data>")
    if current_value is None:
        raise MissingRequired(f"data {data_id!r} lacks current_value")
    return DataElement(
        id=data_id,
        current_value=current_value,
        at=at,
        tags=tags,
        unit_label=unit_label,
        unit_symbol=unit_symbol,
    )


def parse_eeml(document: bytes) -> EnvironmentDocument:
    try:
        root = ElementTree.fromstring(document)
    except ElementTree.ParseError as exc:
        raise MalformedXml(str(exc)) from None

    if _local(root.tag) != "eeml":
        raise MalformedXml(f"root element is <{_local(root.tag)}>, not <eeml>")
    if root.tag != _NS + "eeml":
        raise WrongNamespace(f"root namespace is not {NAMESPACE}")
    _check_attrs(root, {"version"})
    version = root.get("version")
    if version is None:
        raise MissingRequired("eeml lacks version")
    if version != VERSION:
        raise MalformedXml(f"unsupported EEML version {version!r}")
    _no_stray_text(root)

    envs = list(root)
    if len(envs) != 1 or _require_ns(envs[0].tag, "eeml child") != "environment":
        raise MalformedXml("eeml must hold exactly one <environment>")
    env = envs[0]
    _check_attrs(env, {"updated", "id"})
    updated_text = env.get("updated")
    if updated_text is None:
        raise MissingRequired("environment lacks updated")
    try:
        updated = parse_timestamp(updated_text)
    except ValueError as exc:
        raise MalformedXml(f"bad updated timestamp: {exc}") from None
    _no_stray_text(env)

    title = None
    location = None
    elements = []
    for child in env:
        name = _require_ns(child.tag, "environment child")
        if name == "title":
            if title is not None:
                raise MalformedXml("repeated <title>")
            _check_attrs(child, set())
            if len(child):
                raise MalformedXml("<title> must be a leaf")
            title = child.text or ""
        elif name == "location":
            if location is not None:
                raise MalformedXml("repeated <location>")
            location = _parse_location(child)
        elif name == "data":
            elements.append(_parse_data(child))
        else:
            raise MalformedXml(f"unknown element <{name}> in <environment>")
    if title is None:
        raise MissingRequired("environment lacks title")
    if not elements:
        raise MissingRequired("environment lacks data elements")
    ids = [el.id for el in elements]
    if len(set(ids)) != len(ids):
        dupe = next(i for i in ids if ids.count(i) > 1)
        raise DuplicateDataId(f"data id {dupe!r} repeated")

    return EnvironmentDocument(
        updated=updated,
        title=title,
        data_elements=elements,
        environment_id=env.get("id"),
        location=location,
    )


def _fnum(value: float) -> str:
    # repr round-trips exactly through float(); ints lose the trailing .0
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


def serialize_eeml(doc: EnvironmentDocument) -> bytes:
    doc.validate()
    out = ['<eeml xmlns="%s" version="%s">\n' % (NAMESPACE, VERSION)]
    env_attrs = ' updated="%s"' % format_timestamp(doc.updated)
    if doc.environment_id is not None:
        env_attrs += " id=%s" % quoteattr(doc.environment_id)
    out.append("  <environment%s>\n" % env_attrs)
    out.append("    <title>%s</title>\n" % escape(doc.title))
    if doc.location is not None:
        out.append(
            "    <location><lat>%s</lat><lon>%s</lon></location>\n"
            % (_fnum(doc.location.lat), _fnum(doc.location.lon)))
    for el in doc.data_elements:
        out.append("    <data id=%s>\n" % quoteattr(el.id))
        for tag in el.tags:
            out.append("      <tag>%s</tag>\n" % escape(tag))
        out.append(
            '      <current_value at="%s">%s</current_value>\n'
            % (format_timestamp(el.at), escape(el.current_value)))
        if el.unit_label is not None or el.unit_symbol is not None:
            sym = ""
            if el.unit_symbol is not None:
                sym = " symbol=%s" % quoteattr(el.unit_symbol)
            out.append(
                "      <unit%s>%s</unit>\n" % (sym, escape(el.unit_label or "")))
        out.append("    </data>\n")
    out.append("  </environment>\n")
    out.append("</eeml>\n")
    return "".join(out).encode("utf-8")
