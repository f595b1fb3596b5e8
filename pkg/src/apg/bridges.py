"""Views of a graph in other data models.

Three one-way or round-trip bridges:

* N-Triples export: one rdf:type triple per element plus one triple per leaf
  of its stored value, with the access path (fst/snd/inl/inr) spelled into
  the predicate.
* Relational shredding: one table per label, one column per leaf position of
  the declared type, discriminator columns for sums.  Importing the tables
  against the same schema reproduces the graph exactly, ids included.
* Key-value view: (first, second) pairs of a product-typed label, once the
  first components are known to be unique.
"""

from __future__ import annotations

import csv
import io
import json
import urllib.parse
from dataclasses import dataclass, field
from typing import Optional

from .adt import (
    ElementId,
    Inl,
    Inr,
    Lbl,
    One,
    Pair,
    Prim,
    PrimVal,
    Prod,
    Ref,
    Sum,
    TypeExpr,
    Unit,
    Value,
    Zero,
    parse_id,
    render_id,
)
from .errors import ParseError, PreconditionError, ValidationFailure
from .graph import Element, Graph, Schema, check_primary_key, validate_graph

# ---------------------------------------------------------------------------
# RDF

_RDF_TYPE = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>"
_XSD = "http://www.w3.org/2001/XMLSchema#"
_UNIT_IRI = "<apg:unit>"

_KIND_DATATYPE = {
    "nat": _XSD + "nonNegativeInteger",
    "integer": _XSD + "integer",
    "double": _XSD + "double",
    "boolean": _XSD + "boolean",
}


def _quote(text: str) -> str:
    return urllib.parse.quote(text, safe="")


def _element_iri(e: ElementId) -> str:
    return f"<apg:e/{_quote(render_id(e))}>"


def _label_iri(label: str) -> str:
    return f"<apg:l/{_quote(label)}>"


def _predicate_iri(label: str, path: tuple[str, ...]) -> str:
    tail = "/" + "/".join(path) if path else ""
    return f"<apg:p/{_quote(label)}{tail}>"


def _escape_literal(text: str) -> str:
    out = text.replace("\\", "\\\\").replace('"', '\\"')
    out = out.replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
    return out


def _literal_node(v: PrimVal, registry) -> str:
    kind = registry.kind(v.prim) if v.prim in registry else None
    if kind == "string":
        return f'"{_escape_literal(v.literal)}"'
    if kind == "boolean":
        lexical = "true" if v.literal else "false"
    else:
        lexical = repr(v.literal) if isinstance(v.literal, float) else str(v.literal)
    datatype = _KIND_DATATYPE.get(kind, f"apg:prim/{_quote(v.prim)}")
    return f'"{lexical}"^^<{datatype}>'


def export_rdf(graph: Graph) -> str:
    """Serialize to sorted N-Triples.

    Every element contributes 1 + (number of leaves of its value) triples:
    the type triple, then one triple per unit, literal, or reference leaf,
    addressed by access path.  A bare unit value (a vertex) still emits its
    one marker triple, so vertices are visible beyond rdf:type.
    """
    registry = graph.schema.registry
    lines = []
    for e in graph.sorted_ids():
        el = graph.elements[e]
        subject = _element_iri(e)
        lines.append(f"{subject} {_RDF_TYPE} {_label_iri(el.label)} .")

        def emit(v: Value, path: tuple[str, ...]):
            if isinstance(v, Unit):
                lines.append(f"{subject} {_predicate_iri(el.label, path)} {_UNIT_IRI} .")
            elif isinstance(v, PrimVal):
                lines.append(
                    f"{subject} {_predicate_iri(el.label, path)} {_literal_node(v, registry)} ."
                )
            elif isinstance(v, Ref):
                lines.append(
                    f"{subject} {_predicate_iri(el.label, path)} {_element_iri(v.element)} ."
                )
            elif isinstance(v, Pair):
                emit(v.first, path + ("fst",))
                emit(v.second, path + ("snd",))
            elif isinstance(v, Inl):
                emit(v.inner, path + ("inl",))
            else:
                emit(v.inner, path + ("inr",))

        emit(el.value, ())
    return "\n".join(sorted(lines)) + "\n" if lines else ""


# ---------------------------------------------------------------------------
# Relational

@dataclass(frozen=True)
class Column:
    """kind is one of id, prim, fk, disc; target names the primitive type or
    the referenced label where that applies."""

    name: str
    kind: str
    target: Optional[str] = None


@dataclass
class Table:
    label: str
    columns: list[Column]
    rows: list[tuple[ElementId, dict[str, object]]] = field(default_factory=list)


@dataclass
class TableSet:
    tables: dict[str, Table]


def _path_name(path: tuple[str, ...]) -> str:
    return ".".join(path)


def _columns_for(t: TypeExpr, path: tuple[str, ...]) -> list[Column]:
    if isinstance(t, (One, Zero)):
        return []
    if isinstance(t, Prim):
        return [Column(_path_name(path), "prim", t.name)]
    if isinstance(t, Lbl):
        return [Column(_path_name(path), "fk", t.name)]
    if isinstance(t, Prod):
        return _columns_for(t.left, path + ("fst",)) + _columns_for(t.right, path + ("snd",))
    return (
        [Column(_path_name(path) + "#", "disc")]
        + _columns_for(t.left, path + ("inl",))
        + _columns_for(t.right, path + ("inr",))
    )


def _cells_for(v: Value, t: TypeExpr, path: tuple[str, ...], cells: dict[str, object]):
    if isinstance(t, One):
        return
    if isinstance(t, Prim):
        cells[_path_name(path)] = v.literal
    elif isinstance(t, Lbl):
        cells[_path_name(path)] = v.element
    elif isinstance(t, Prod):
        _cells_for(v.first, t.left, path + ("fst",), cells)
        _cells_for(v.second, t.right, path + ("snd",), cells)
    elif isinstance(t, Sum):
        if isinstance(v, Inl):
            cells[_path_name(path) + "#"] = "l"
            _cells_for(v.inner, t.left, path + ("inl",), cells)
        else:
            cells[_path_name(path) + "#"] = "r"
            _cells_for(v.inner, t.right, path + ("inr",), cells)


def export_relational(graph: Graph) -> TableSet:
    """Shred into one table per label.

    Columns follow the leaf positions of the declared type; a sum contributes
    a discriminator column (values "l"/"r") plus the columns of both branches,
    with the inactive branch left empty.
    """
    tables = {}
    for label in graph.schema.sorted_labels():
        t = graph.schema.labels[label]
        table = Table(label, [Column("id", "id")] + _columns_for(t, ()))
        for e in graph.ids_of(label):
            cells: dict[str, object] = {}
            _cells_for(graph.elements[e].value, t, (), cells)
            table.rows.append((e, cells))
        tables[label] = table
    return TableSet(tables)


def import_relational(tables: TableSet, schema: Schema) -> Graph:
    """Rebuild a graph from shredded tables; exact inverse of export.

    Raises ParseError for structural problems (missing discriminators, cells
    in inactive branches, type mismatches) and ValidationFailure when the
    rebuilt graph does not validate (for instance a dangling foreign key).
    """
    elements: dict[ElementId, Element] = {}
    for label in sorted(tables.tables):
        if label not in schema.labels:
            raise ParseError(f"table {label!r} has no declared label")
        t = schema.labels[label]
        table = tables.tables[label]
        for e, cells in table.rows:
            used: set[str] = set()
            value = _rebuild(t, (), cells, used, schema, label)
            extra = sorted(set(cells) - used)
            if extra:
                raise ParseError(f"row {render_id(e)} of {label!r} has cells outside "
                                 f"its active branches: {', '.join(extra)}")
            if e in elements:
                raise ParseError(f"duplicate id {render_id(e)}")
            elements[e] = Element(label, value)
    graph = Graph(schema, elements)
    report = validate_graph(graph)
    if not report.ok:
        raise ValidationFailure(report)
    return graph


def _rebuild(t, path, cells, used, schema, label) -> Value:
    name = _path_name(path)
    if isinstance(t, One):
        return Unit()
    if isinstance(t, Zero):
        raise ParseError(f"{label!r} declares an uninhabited position at {name or 'root'}")
    if isinstance(t, Prim):
        if name not in cells:
            raise ParseError(f"missing {name or 'root'} cell in a {label!r} row")
        used.add(name)
        literal = schema.registry.coerce(t.name, cells[name])
        if not schema.registry.check_literal(t.name, literal):
            raise ParseError(f"cell {name or 'root'} of {label!r} is not a {t.name}")
        return PrimVal(t.name, literal)
    if isinstance(t, Lbl):
        if name not in cells:
            raise ParseError(f"missing {name or 'root'} cell in a {label!r} row")
        used.add(name)
        cell = cells[name]
        return Ref(parse_id(cell) if isinstance(cell, str) else cell)
    if isinstance(t, Prod):
        return Pair(
            _rebuild(t.left, path + ("fst",), cells, used, schema, label),
            _rebuild(t.right, path + ("snd",), cells, used, schema, label),
        )
    disc = name + "#"
    if disc not in cells:
        raise ParseError(f"missing discriminator {disc} in a {label!r} row")
    used.add(disc)
    side = cells[disc]
    if side == "l":
        return Inl(_rebuild(t.left, path + ("inl",), cells, used, schema, label))
    if side == "r":
        return Inr(_rebuild(t.right, path + ("inr",), cells, used, schema, label))
    raise ParseError(f"discriminator {disc} of {label!r} must be 'l' or 'r', not {side!r}")


# ---------------------------------------------------------------------------
# CSV serialization of table sets

def write_tableset(tables: TableSet, directory):
    """One CSV file per table plus a manifest describing the columns.

    Cells are JSON-encoded scalars for primitive columns and rendered ids for
    foreign keys; an empty field is an absent cell (inactive sum branch).
    """
    from pathlib import Path

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {}
    for label in sorted(tables.tables):
        table = tables.tables[label]
        filename = _quote(label) + ".csv" if label else "unlabeled.csv"
        manifest[label] = {
            "file": filename,
            "columns": [
                {"name": c.name, "kind": c.kind}
                | ({"target": c.target} if c.target is not None else {})
                for c in table.columns
            ],
        }
        with open(directory / filename, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow([c.name for c in table.columns])
            for e, cells in table.rows:
                row = []
                for c in table.columns:
                    if c.kind == "id":
                        row.append(render_id(e))
                    elif c.name not in cells:
                        row.append("")
                    elif c.kind == "fk":
                        row.append(render_id(cells[c.name]))
                    elif c.kind == "disc":
                        row.append(cells[c.name])
                    else:
                        row.append(json.dumps(cells[c.name]))
                writer.writerow(row)
    with open(directory / "manifest.json", "w") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")


def read_tableset(directory) -> TableSet:
    from pathlib import Path

    directory = Path(directory)
    manifest_path = directory / "manifest.json"
    if not manifest_path.exists():
        raise ParseError(f"no manifest.json in {directory}")
    with open(manifest_path) as handle:
        try:
            manifest = json.load(handle)
        except ValueError as err:
            raise ParseError(f"bad manifest: {err}") from None
    tables = {}
    for label, spec in manifest.items():
        columns = [
            Column(c["name"], c["kind"], c.get("target")) for c in spec["columns"]
        ]
        table = Table(label, columns)
        with open(directory / spec["file"], newline="") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header != [c.name for c in columns]:
                raise ParseError(f"header of {spec['file']} does not match the manifest")
            for row in reader:
                if len(row) != len(columns):
                    raise ParseError(f"ragged row in {spec['file']}")
                eid = None
                cells: dict[str, object] = {}
                for cell, column in zip(row, columns):
                    if column.kind == "id":
                        eid = parse_id(cell)
                    elif cell == "":
                        continue
                    elif column.kind == "fk":
                        cells[column.name] = parse_id(cell)
                    elif column.kind == "disc":
                        cells[column.name] = cell
                    else:
                        try:
                            cells[column.name] = json.loads(cell)
                        except ValueError:
                            raise ParseError(
                                f"bad cell {cell!r} in {spec['file']}"
                            ) from None
                if eid is None:
                    raise ParseError(f"row without id in {spec['file']}")
                table.rows.append((eid, cells))
        tables[label] = table
    return TableSet(tables)


# ---------------------------------------------------------------------------
# Key-value

def export_kv(graph: Graph, label: str) -> list[tuple[Value, Value]]:
    """(first, second) pairs of a product-typed label, in canonical id order.

    The first components must be unique across the label's elements; the
    violating pairs are reported otherwise.
    """
    violations = check_primary_key(graph, label)
    if violations:
        listed = "; ".join(f"{render_id(a)} vs {render_id(b)}" for a, b in violations)
        raise PreconditionError(f"first components of {label!r} are not unique: {listed}")
    out = []
    for e in graph.ids_of(label):
        value = graph.elements[e].value
        out.append((value.first, value.second))
    return out
