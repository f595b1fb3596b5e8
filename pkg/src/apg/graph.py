"""Schemas, graphs, and conformance checking.

A schema assigns each label a type; a graph assigns each element a label and
a value.  The single law everything else leans on: every element's value must
inhabit the type its label declares, with reference positions landing on
elements of exactly the referenced label.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .adt import (
    DEFAULT_REGISTRY,
    ElementId,
    Lbl,
    One,
    Prim,
    PrimRegistry,
    Prod,
    Sum,
    TypeExpr,
    Value,
    check_value,
    id_sort_key,
    render_id,
)
from .errors import PreconditionError

# The designated label for vertices that carry no label of their own.  It may
# appear as a schema key (with type 1) but never inside a type expression.
UNLABELED = ""


@dataclass(frozen=True)
class Schema:
    labels: dict[str, TypeExpr]
    registry: PrimRegistry = field(default_factory=lambda: DEFAULT_REGISTRY)

    def __contains__(self, label: str) -> bool:
        return label in self.labels

    def type_of(self, label: str) -> TypeExpr:
        return self.labels[label]

    def sorted_labels(self) -> list[str]:
        return sorted(self.labels)


@dataclass(frozen=True)
class Element:
    label: str
    value: Value


@dataclass(frozen=True)
class Graph:
    schema: Schema
    elements: dict[ElementId, Element]

    def label_of(self, e: ElementId) -> Optional[str]:
        el = self.elements.get(e)
        return el.label if el is not None else None

    def value_of(self, e: ElementId) -> Value:
        return self.elements[e].value

    def sorted_ids(self) -> list[ElementId]:
        return sorted(self.elements, key=id_sort_key)

    def ids_of(self, label: str) -> list[ElementId]:
        return [e for e in self.sorted_ids() if self.elements[e].label == label]


@dataclass(frozen=True)
class Finding:
    """One validation problem, localized to a subject and a path within it."""

    subject: str
    path: str
    message: str
    severity: str = "error"

    def __str__(self) -> str:
        where = self.subject + self.path if self.path else self.subject
        return f"{self.severity}: {where}: {self.message}"


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings

    def add(self, subject: str, path: str, message: str, severity: str = "error"):
        self.findings.append(Finding(subject, path, message, severity))

    def __iter__(self) -> Iterator[Finding]:
        return iter(self.findings)

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(str(f) for f in self.findings)


def _walk_type(t: TypeExpr) -> Iterator[TypeExpr]:
    yield t
    if isinstance(t, (Sum, Prod)):
        yield from _walk_type(t.left)
        yield from _walk_type(t.right)


def validate_schema(schema: Schema) -> ValidationReport:
    """Well-formedness of the schema alone: closed label references, known
    primitives, no label shadowing a primitive name, and the reserved
    unlabeled-vertex rules."""
    report = ValidationReport()
    for label in schema.sorted_labels():
        t = schema.labels[label]
        if label in schema.registry:
            report.add(label, "", "label shadows a primitive type name")
        if label == UNLABELED and not isinstance(t, One):
            report.add(label, "", "the reserved unlabeled-vertex label must have type 1")
        for node in _walk_type(t):
            if isinstance(node, Lbl):
                if node.name == UNLABELED:
                    report.add(label, "", "the reserved unlabeled-vertex label cannot be referenced")
                elif node.name not in schema.labels:
                    report.add(label, "", f"type references undeclared label {node.name!r}")
            elif isinstance(node, Prim) and node.name not in schema.registry:
                report.add(label, "", f"type references unregistered primitive {node.name!r}")
    return report


def validate_graph(graph: Graph) -> ValidationReport:
    """Schema well-formedness plus conformance of every element.

    An empty report means the graph is valid: each element's label is
    declared, its value inhabits the declared type, every reference lands on
    an element of the referenced label, and every primitive literal lies in
    its registered domain.
    """
    report = ValidationReport()
    report.findings.extend(validate_schema(graph.schema))
    for e in graph.sorted_ids():
        el = graph.elements[e]
        if el.label not in graph.schema.labels:
            report.add(render_id(e), "", f"element has undeclared label {el.label!r}")
            continue
        expected = graph.schema.labels[el.label]
        mismatch = check_value(el.value, expected, graph.schema, graph.label_of)
        if mismatch is not None:
            report.add(render_id(e), mismatch.path_text(), mismatch.message)
    return report


def check_unique_property(graph: Graph, label: str) -> list[tuple[ElementId, ElementId]]:
    """Pairs of label-elements sharing a value; empty means values are unique."""
    if label not in graph.schema.labels:
        raise PreconditionError(f"unknown label {label!r}")
    by_value: dict[Value, list[ElementId]] = {}
    for e in graph.ids_of(label):
        by_value.setdefault(graph.elements[e].value, []).append(e)
    violations = []
    for group in by_value.values():
        group.sort(key=id_sort_key)
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                violations.append((group[i], group[j]))
    violations.sort(key=lambda p: (id_sort_key(p[0]), id_sort_key(p[1])))
    return violations


def check_primary_key(graph: Graph, label: str) -> list[tuple[ElementId, ElementId]]:
    """Pairs of label-elements sharing a first component.

    The label's type must be a product; the first component acts as the key.
    """
    if label not in graph.schema.labels:
        raise PreconditionError(f"unknown label {label!r}")
    if not isinstance(graph.schema.labels[label], Prod):
        raise PreconditionError(f"the type of {label!r} is not a product")
    by_key: dict[Value, list[ElementId]] = {}
    for e in graph.ids_of(label):
        value = graph.elements[e].value
        if not hasattr(value, "first"):
            raise PreconditionError(f"element {render_id(e)} does not hold a pair")
        by_key.setdefault(value.first, []).append(e)
    violations = []
    for group in by_key.values():
        group.sort(key=id_sort_key)
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                violations.append((group[i], group[j]))
    violations.sort(key=lambda p: (id_sort_key(p[0]), id_sort_key(p[1])))
    return violations
