"""Reading and writing the native JSON document formats.

A graph document looks like

    {"primitives": [...],
     "schema": {"<label>": "<type expression>"},
     "elements": {"<id>": {"label": "<label>", "value": <V>}}}

where <V> is exactly one of {"unit": {}}, {"pair": [V, V]}, {"inl": V},
{"inr": V}, {"prim": {"type": "<name>", "value": <literal>}}, {"ref": "<id>"}.
Missing top-level keys mean empty (and the default primitive registry), so
"{}" is the empty graph.  Writing is canonical: sorted keys, two-space
indent, UTF-8 without escapes, trailing newline.

Morphism documents carry {"onLabels", "onElements"} and are interpreted
against explicitly supplied source and target graphs.  Mapping documents
carry two schemas plus {"onLabels", "onTerms"} with type expressions and
terms as text.
"""

from __future__ import annotations

import json

from .adt import (
    DEFAULT_KINDS,
    DEFAULT_REGISTRY,
    Inl,
    Inr,
    Pair,
    PrimRegistry,
    PrimVal,
    Ref,
    Unit,
    Value,
    parse_id,
    parse_type,
    render_id,
    render_type,
)
from .errors import ParseError, ValidationFailure
from .graph import Element, Graph, Schema, validate_graph, validate_schema
from .migrate import SchemaMapping, parse_term, render_term, typecheck_mapping
from .morphism import Morphism, check_morphism


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(
            f"invalid JSON at line {err.lineno} column {err.colno}: {err.msg}",
            err.pos,
        ) from None


def _expect_object(doc, where: str) -> dict:
    if not isinstance(doc, dict):
        raise ParseError(f"{where} must be a JSON object")
    return doc


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# Primitive registry

def registry_to_json(registry: PrimRegistry) -> list:
    out = []
    for name, kind in registry.items():
        if DEFAULT_KINDS.get(name) == kind:
            out.append(name)
        else:
            out.append({"name": name, "kind": kind})
    return out


def registry_from_json(raw, where: str = "primitives") -> PrimRegistry:
    if raw is None:
        return DEFAULT_REGISTRY
    if not isinstance(raw, list):
        raise ParseError(f"{where} must be a list")
    kinds = {}
    for entry in raw:
        if isinstance(entry, str):
            if entry not in DEFAULT_KINDS:
                raise ParseError(f"{where}: {entry!r} is not a stock primitive; "
                                 f"spell it as {{\"name\", \"kind\"}}")
            kinds[entry] = DEFAULT_KINDS[entry]
        elif (
            isinstance(entry, dict)
            and set(entry) == {"name", "kind"}
            and isinstance(entry["name"], str)
            and isinstance(entry["kind"], str)
        ):
            kinds[entry["name"]] = entry["kind"]
        else:
            raise ParseError(f"{where}: entries are names or {{\"name\", \"kind\"}} objects")
    try:
        return PrimRegistry(kinds)
    except ParseError as err:
        raise ParseError(f"{where}: {err}") from None


# ---------------------------------------------------------------------------
# Values

def value_to_json(v: Value):
    if isinstance(v, Unit):
        return {"unit": {}}
    if isinstance(v, Pair):
        return {"pair": [value_to_json(v.first), value_to_json(v.second)]}
    if isinstance(v, Inl):
        return {"inl": value_to_json(v.inner)}
    if isinstance(v, Inr):
        return {"inr": value_to_json(v.inner)}
    if isinstance(v, PrimVal):
        return {"prim": {"type": v.prim, "value": v.literal}}
    return {"ref": render_id(v.element)}


def value_from_json(raw, registry: PrimRegistry, where: str) -> Value:
    if not isinstance(raw, dict) or len(raw) != 1:
        raise ParseError(f"{where}: a value is an object with exactly one of "
                         f"unit/pair/inl/inr/prim/ref")
    (form, body), = raw.items()
    if form == "unit":
        if body != {}:
            raise ParseError(f"{where}: unit carries an empty object")
        return Unit()
    if form == "pair":
        if not isinstance(body, list) or len(body) != 2:
            raise ParseError(f"{where}: pair carries a two-element list")
        return Pair(
            value_from_json(body[0], registry, where + ".fst"),
            value_from_json(body[1], registry, where + ".snd"),
        )
    if form == "inl":
        return Inl(value_from_json(body, registry, where + ".inl"))
    if form == "inr":
        return Inr(value_from_json(body, registry, where + ".inr"))
    if form == "prim":
        if not isinstance(body, dict) or set(body) != {"type", "value"}:
            raise ParseError(f"{where}: prim carries {{\"type\", \"value\"}}")
        name = body["type"]
        if not isinstance(name, str):
            raise ParseError(f"{where}: primitive type name must be a string")
        return PrimVal(name, registry.coerce(name, body["value"]))
    if form == "ref":
        if not isinstance(body, str):
            raise ParseError(f"{where}: ref carries an id string")
        try:
            return Ref(parse_id(body))
        except ParseError as err:
            raise ParseError(f"{where}: {err}") from None
    raise ParseError(f"{where}: unknown value form {form!r}")


# ---------------------------------------------------------------------------
# Schemas and graphs

def schema_to_json(schema: Schema) -> dict:
    return {
        "primitives": registry_to_json(schema.registry),
        "schema": {l: render_type(t) for l, t in schema.labels.items()},
    }


def schema_from_json(doc: dict, where: str = "") -> Schema:
    prefix = where + "." if where else ""
    registry = registry_from_json(doc.get("primitives"), prefix + "primitives")
    raw = doc.get("schema", {})
    if not isinstance(raw, dict):
        raise ParseError(f"{prefix}schema must be an object")
    labels = {}
    names = set(raw)
    for label in sorted(raw):
        text = raw[label]
        if not isinstance(text, str):
            raise ParseError(f"{prefix}schema.{label}: type expressions are strings")
        try:
            labels[label] = parse_type(text, names, registry)
        except ParseError as err:
            raise ParseError(f"{prefix}schema.{label}: {err}") from None
    return Schema(labels, registry)


def graph_to_json(graph: Graph) -> dict:
    doc = schema_to_json(graph.schema)
    doc["elements"] = {
        render_id(e): {
            "label": el.label,
            "value": value_to_json(el.value),
        }
        for e, el in graph.elements.items()
    }
    return doc


def graph_from_json(doc: dict, where: str = "") -> Graph:
    _expect_object(doc, where or "graph document")
    schema = schema_from_json(doc, where)
    prefix = where + "." if where else ""
    raw = doc.get("elements", {})
    if not isinstance(raw, dict):
        raise ParseError(f"{prefix}elements must be an object")
    elements = {}
    for id_text in sorted(raw):
        spot = f"{prefix}elements.{id_text}"
        try:
            e = parse_id(id_text)
        except ParseError as err:
            raise ParseError(f"{spot}: {err}") from None
        entry = _expect_object(raw[id_text], spot)
        if set(entry) != {"label", "value"}:
            raise ParseError(f"{spot}: entries carry exactly label and value")
        if not isinstance(entry["label"], str):
            raise ParseError(f"{spot}: label must be a string")
        value = value_from_json(entry["value"], schema.registry, spot + ".value")
        elements[e] = Element(entry["label"], value)
    return Graph(schema, elements)


def write_graph(graph: Graph) -> str:
    return _dump(graph_to_json(graph))


def read_graph(text: str, validate: bool = True) -> Graph:
    graph = graph_from_json(_load_json(text))
    if validate:
        report = validate_graph(graph)
        if not report.ok:
            raise ValidationFailure(report)
    return graph


# ---------------------------------------------------------------------------
# Morphisms

def morphism_to_json(h: Morphism) -> dict:
    return {
        "onLabels": dict(h.on_labels),
        "onElements": {render_id(e): render_id(h.on_elements[e]) for e in h.on_elements},
    }


def write_morphism(h: Morphism) -> str:
    return _dump(morphism_to_json(h))


def read_morphism(text: str, source: Graph, target: Graph, validate: bool = True) -> Morphism:
    doc = _expect_object(_load_json(text), "morphism document")
    extra = set(doc) - {"onLabels", "onElements"}
    if extra:
        raise ParseError(f"unknown morphism keys: {', '.join(sorted(extra))}")
    raw_labels = doc.get("onLabels", {})
    raw_elements = doc.get("onElements", {})
    if not isinstance(raw_labels, dict) or not isinstance(raw_elements, dict):
        raise ParseError("onLabels and onElements must be objects")
    for k, v in raw_labels.items():
        if not isinstance(v, str):
            raise ParseError(f"onLabels.{k}: labels are strings")
    on_elements = {}
    for k in sorted(raw_elements):
        v = raw_elements[k]
        if not isinstance(v, str):
            raise ParseError(f"onElements.{k}: ids are strings")
        try:
            on_elements[parse_id(k)] = parse_id(v)
        except ParseError as err:
            raise ParseError(f"onElements.{k}: {err}") from None
    h = Morphism(source, target, dict(raw_labels), on_elements)
    if validate:
        report = check_morphism(h)
        if not report.ok:
            raise ValidationFailure(report)
    return h


# ---------------------------------------------------------------------------
# Schema mappings

def mapping_to_json(m: SchemaMapping) -> dict:
    return {
        "source": schema_to_json(m.source),
        "target": schema_to_json(m.target),
        "onLabels": {l: render_type(t) for l, t in m.on_labels.items()},
        "onTerms": {l: render_term(t) for l, t in m.on_terms.items()},
    }


def write_mapping(m: SchemaMapping) -> str:
    return _dump(mapping_to_json(m))


def read_mapping(text: str, validate: bool = True) -> SchemaMapping:
    doc = _expect_object(_load_json(text), "mapping document")
    source = schema_from_json(_expect_object(doc.get("source", {}), "source"), "source")
    target = schema_from_json(_expect_object(doc.get("target", {}), "target"), "target")
    on_labels = {}
    raw_labels = doc.get("onLabels", {})
    if not isinstance(raw_labels, dict):
        raise ParseError("onLabels must be an object")
    for label in sorted(raw_labels):
        text_ = raw_labels[label]
        if not isinstance(text_, str):
            raise ParseError(f"onLabels.{label}: type expressions are strings")
        try:
            on_labels[label] = parse_type(text_, set(target.labels), target.registry)
        except ParseError as err:
            raise ParseError(f"onLabels.{label}: {err}") from None
    on_terms = {}
    raw_terms = doc.get("onTerms", {})
    if not isinstance(raw_terms, dict):
        raise ParseError("onTerms must be an object")
    for label in sorted(raw_terms):
        text_ = raw_terms[label]
        if not isinstance(text_, str):
            raise ParseError(f"onTerms.{label}: terms are text")
        try:
            on_terms[label] = parse_term(text_)
        except ParseError as err:
            raise ParseError(f"onTerms.{label}: {err}") from None
    m = SchemaMapping(source, target, on_labels, on_terms)
    if validate:
        report = validate_schema(m.source)
        for finding in validate_schema(m.target):
            report.findings.append(finding)
        if report.ok:
            report = typecheck_mapping(m)
        if not report.ok:
            raise ValidationFailure(report)
    return m
