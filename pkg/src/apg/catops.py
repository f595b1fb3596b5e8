"""Limits and colimits of graphs.

Products and coproducts exist for arbitrary pairs of graphs; equalizers for
arbitrary parallel pairs.  Coequalizers (and pushouts built from them) are
taken with both graphs on one shared schema and identity label maps, which is
the setting data merging needs: the quotient then happens on elements alone
and the schema survives untouched.

Each construction returns the graph together with its legs (projections,
injections, or the universal map onto the quotient).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .adt import (
    Atom,
    Class,
    ElementId,
    Inl,
    Inr,
    Lbl,
    Left,
    One,
    Pair,
    PairId,
    Prod,
    Ref,
    Right,
    Sum,
    Unit,
    id_sort_key,
    render_id,
    transport_type,
    transport_value,
)
from .errors import PreconditionError
from .graph import Element, Graph, Schema
from .morphism import Morphism, compose

TERMINAL_LABEL = "⊤"


@dataclass(frozen=True)
class ConstructionResult:
    graph: Graph
    legs: dict[str, Morphism]


def _require_same_registry(g1: Graph, g2: Graph):
    if g1.schema.registry != g2.schema.registry:
        raise PreconditionError("graphs use different primitive registries")


def initial_graph(registry=None) -> Graph:
    schema = Schema({}, registry) if registry is not None else Schema({})
    return Graph(schema, {})


def terminal_graph(registry=None) -> Graph:
    labels = {TERMINAL_LABEL: One()}
    schema = Schema(labels, registry) if registry is not None else Schema(labels)
    return Graph(schema, {Atom(TERMINAL_LABEL): Element(TERMINAL_LABEL, Unit())})


def unique_morphism(graph: Graph, direction: str) -> Morphism:
    """The unique map out of the empty graph or into the one-point graph."""
    if direction == "from-initial":
        return Morphism(initial_graph(graph.schema.registry), graph, {}, {})
    if direction == "to-terminal":
        terminal = terminal_graph(graph.schema.registry)
        return Morphism(
            graph,
            terminal,
            {l: TERMINAL_LABEL for l in graph.schema.labels},
            {e: Atom(TERMINAL_LABEL) for e in graph.elements},
        )
    raise PreconditionError(f"unknown direction {direction!r}")


# ---------------------------------------------------------------------------
# Product

def _pair_label(l1: str, l2: str) -> str:
    return f"({l1},{l2})"


def product(g1: Graph, g2: Graph) -> ConstructionResult:
    """Labels and elements are pairs; declared types and stored values are
    transported so that each reference pairs up with the fixed other half."""
    _require_same_registry(g1, g2)
    labels: dict[str, object] = {}
    proj1_labels: dict[str, str] = {}
    proj2_labels: dict[str, str] = {}
    for l1 in g1.schema.sorted_labels():
        for l2 in g2.schema.sorted_labels():
            name = _pair_label(l1, l2)
            left_f = {m: Lbl(_pair_label(m, l2)) for m in g1.schema.labels}
            right_f = {m: Lbl(_pair_label(l1, m)) for m in g2.schema.labels}
            labels[name] = Prod(
                transport_type(left_f, g1.schema.labels[l1]),
                transport_type(right_f, g2.schema.labels[l2]),
            )
            proj1_labels[name] = l1
            proj2_labels[name] = l2
    elements: dict[ElementId, Element] = {}
    proj1_elements: dict[ElementId, ElementId] = {}
    proj2_elements: dict[ElementId, ElementId] = {}
    for e1 in g1.sorted_ids():
        el1 = g1.elements[e1]
        for e2 in g2.sorted_ids():
            el2 = g2.elements[e2]
            eid = PairId(e1, e2)
            left_f = {m: Lbl(_pair_label(m, el2.label)) for m in g1.schema.labels}
            right_f = {m: Lbl(_pair_label(el1.label, m)) for m in g2.schema.labels}
            value = Pair(
                transport_value(left_f, lambda e: Ref(PairId(e, e2)), el1.value),
                transport_value(right_f, lambda e: Ref(PairId(e1, e)), el2.value),
            )
            elements[eid] = Element(_pair_label(el1.label, el2.label), value)
            proj1_elements[eid] = e1
            proj2_elements[eid] = e2
    graph = Graph(Schema(labels, g1.schema.registry), elements)
    return ConstructionResult(
        graph,
        {
            "proj1": Morphism(graph, g1, proj1_labels, proj1_elements),
            "proj2": Morphism(graph, g2, proj2_labels, proj2_elements),
        },
    )


def pair(f: Morphism, g: Morphism) -> Morphism:
    """The map into a product induced by two maps out of one graph."""
    if f.source != g.source:
        raise PreconditionError("pairing needs a common source")
    target = product(f.target, g.target)
    return Morphism(
        f.source,
        target.graph,
        {l: _pair_label(f.on_labels[l], g.on_labels[l]) for l in f.source.schema.labels},
        {e: PairId(f.on_elements[e], g.on_elements[e]) for e in f.source.elements},
    )


# ---------------------------------------------------------------------------
# Coproduct

def coproduct(g1: Graph, g2: Graph) -> ConstructionResult:
    """The disjoint union with tagged labels and tagged elements."""
    _require_same_registry(g1, g2)
    left_f = {m: Lbl("L:" + m) for m in g1.schema.labels}
    right_f = {m: Lbl("R:" + m) for m in g2.schema.labels}
    labels: dict[str, object] = {}
    for l in g1.schema.sorted_labels():
        labels["L:" + l] = transport_type(left_f, g1.schema.labels[l])
    for l in g2.schema.sorted_labels():
        labels["R:" + l] = transport_type(right_f, g2.schema.labels[l])
    elements: dict[ElementId, Element] = {}
    inj1_elements: dict[ElementId, ElementId] = {}
    inj2_elements: dict[ElementId, ElementId] = {}
    for e in g1.sorted_ids():
        el = g1.elements[e]
        value = transport_value(left_f, lambda x: Ref(Left(x)), el.value)
        elements[Left(e)] = Element("L:" + el.label, value)
        inj1_elements[e] = Left(e)
    for e in g2.sorted_ids():
        el = g2.elements[e]
        value = transport_value(right_f, lambda x: Ref(Right(x)), el.value)
        elements[Right(e)] = Element("R:" + el.label, value)
        inj2_elements[e] = Right(e)
    graph = Graph(Schema(labels, g1.schema.registry), elements)
    return ConstructionResult(
        graph,
        {
            "inj1": Morphism(g1, graph, {l: "L:" + l for l in g1.schema.labels}, inj1_elements),
            "inj2": Morphism(g2, graph, {l: "R:" + l for l in g2.schema.labels}, inj2_elements),
        },
    )


def case_analysis(f: Morphism, g: Morphism) -> Morphism:
    """The map out of a coproduct induced by two maps into one graph."""
    if f.target != g.target:
        raise PreconditionError("case analysis needs a common target")
    source = coproduct(f.source, g.source)
    on_labels = {"L:" + l: f.on_labels[l] for l in f.source.schema.labels}
    on_labels.update({"R:" + l: g.on_labels[l] for l in g.source.schema.labels})
    on_elements: dict[ElementId, ElementId] = {}
    for e in f.source.elements:
        on_elements[Left(e)] = f.on_elements[e]
    for e in g.source.elements:
        on_elements[Right(e)] = g.on_elements[e]
    return Morphism(source.graph, f.target, on_labels, on_elements)


# ---------------------------------------------------------------------------
# Equalizer

def equalizer(h: Morphism, j: Morphism) -> ConstructionResult:
    """The subgraph of the common source where the parallel pair agrees.

    Label references inside surviving declared types weaken to an option
    (1 + l when l survives, plain 1 otherwise), and stored values wrap or
    collapse their references to match.
    """
    if h.source != j.source or h.target != j.target:
        raise PreconditionError("not a parallel pair")
    g = h.source
    surviving = {l for l in g.schema.labels if h.on_labels.get(l) == j.on_labels.get(l)}
    f = {
        l: Sum(One(), Lbl(l)) if l in surviving else One()
        for l in g.schema.labels
    }

    def move(e: ElementId):
        el = g.elements[e]
        if el.label not in surviving:
            return Unit()
        if h.on_elements.get(e) == j.on_elements.get(e):
            return Inr(Ref(e))
        return Inl(Unit())

    labels = {l: transport_type(f, g.schema.labels[l]) for l in surviving}
    elements = {}
    for e in g.sorted_ids():
        el = g.elements[e]
        if el.label in surviving and h.on_elements.get(e) == j.on_elements.get(e):
            elements[e] = Element(el.label, transport_value(f, move, el.value))
    graph = Graph(Schema(labels, g.schema.registry), elements)
    leg = Morphism(graph, g, {l: l for l in labels}, {e: e for e in elements})
    return ConstructionResult(graph, {"eq": leg})


# ---------------------------------------------------------------------------
# Disjoint union on a shared schema, coequalizer, pushout

def disjoint_union(g1: Graph, g2: Graph) -> ConstructionResult:
    """Element-level disjoint union of two graphs on the same schema.

    This is the coproduct in the fixed-schema setting: labels stay as they
    are and only the elements pick up tags.
    """
    if g1.schema != g2.schema:
        raise PreconditionError("disjoint union needs a shared schema")
    idf = {l: Lbl(l) for l in g1.schema.labels}
    elements: dict[ElementId, Element] = {}
    inj1_elements: dict[ElementId, ElementId] = {}
    inj2_elements: dict[ElementId, ElementId] = {}
    for e in g1.sorted_ids():
        el = g1.elements[e]
        elements[Left(e)] = Element(
            el.label, transport_value(idf, lambda x: Ref(Left(x)), el.value)
        )
        inj1_elements[e] = Left(e)
    for e in g2.sorted_ids():
        el = g2.elements[e]
        elements[Right(e)] = Element(
            el.label, transport_value(idf, lambda x: Ref(Right(x)), el.value)
        )
        inj2_elements[e] = Right(e)
    graph = Graph(g1.schema, elements)
    ids = {l: l for l in g1.schema.labels}
    return ConstructionResult(
        graph,
        {
            "inj1": Morphism(g1, graph, dict(ids), inj1_elements),
            "inj2": Morphism(g2, graph, dict(ids), inj2_elements),
        },
    )


class _UnionFind:
    def __init__(self, items: Iterable[ElementId]):
        self.parent = {x: x for x in items}

    def find(self, x: ElementId) -> ElementId:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: ElementId, b: ElementId):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _quotient(graph: Graph, pairs: Iterable[tuple[ElementId, ElementId]]):
    """Quotient a graph's elements by the equivalence the pairs generate.

    Classes must be label-uniform.  Each class is named by its least member
    under the canonical id ordering, and stored values follow references to
    their classes.
    """
    uf = _UnionFind(graph.elements)
    for a, b in pairs:
        uf.union(a, b)
    members: dict[ElementId, list[ElementId]] = {}
    for e in graph.elements:
        members.setdefault(uf.find(e), []).append(e)
    rep_of: dict[ElementId, ElementId] = {}
    for group in members.values():
        rep = min(group, key=id_sort_key)
        labels_seen = {graph.elements[e].label for e in group}
        if len(labels_seen) > 1:
            names = ", ".join(render_id(e) for e in sorted(group, key=id_sort_key))
            raise PreconditionError(f"class {{{names}}} mixes labels {sorted(labels_seen)}")
        for e in group:
            rep_of[e] = rep

    idf = {l: Lbl(l) for l in graph.schema.labels}

    def move(e: ElementId):
        return Ref(Class(rep_of[e]))

    elements = {}
    for rep in sorted(set(rep_of.values()), key=id_sort_key):
        el = graph.elements[rep]
        elements[Class(rep)] = Element(el.label, transport_value(idf, move, el.value))
    quotient = Graph(graph.schema, elements)
    leg = Morphism(
        graph,
        quotient,
        {l: l for l in graph.schema.labels},
        {e: Class(rep_of[e]) for e in graph.elements},
    )
    return quotient, leg


def coequalizer(h: Morphism, j: Morphism) -> ConstructionResult:
    """Identify h(e) with j(e) in the common target, elementwise.

    Both graphs must share one schema and both label maps must be the
    identity; the quotient leaves the schema alone.
    """
    if h.source != j.source or h.target != j.target:
        raise PreconditionError("not a parallel pair")
    if h.source.schema != h.target.schema:
        raise PreconditionError("coequalizer needs both graphs on one schema")
    for m in (h, j):
        for l, image in m.on_labels.items():
            if image != l:
                raise PreconditionError("coequalizer needs identity label maps")
    pairs = [(h.on_elements[e], j.on_elements[e]) for e in h.source.elements]
    quotient, leg = _quotient(h.target, pairs)
    return ConstructionResult(quotient, {"coeq": leg})


def pushout(f: Morphism, g: Morphism) -> ConstructionResult:
    """Glue the targets of a span along its apex.

    All three graphs must share one schema and both legs must be identity on
    labels.  The result is the disjoint union of the targets with f(e) and
    g(e) identified for every apex element e; its legs are the two composites
    through the union.
    """
    if f.source != g.source:
        raise PreconditionError("pushout needs a span with a common source")
    if f.target.schema != g.target.schema:
        raise PreconditionError("pushout targets must share a schema")
    for m, role in ((f, "left"), (g, "right")):
        if m.source.schema.registry != m.target.schema.registry:
            raise PreconditionError(f"{role} leg mixes primitive registries")
        for l, image in m.on_labels.items():
            if image != l:
                raise PreconditionError(f"{role} leg is not identity on labels")
        for l in m.source.schema.labels:
            if m.source.schema.labels[l] != m.target.schema.labels.get(l):
                raise PreconditionError(f"{role} leg does not preserve the declared type of {l!r}")
    union = disjoint_union(f.target, g.target)
    h = compose(union.legs["inj1"], f)
    j = compose(union.legs["inj2"], g)
    pairs = [(h.on_elements[e], j.on_elements[e]) for e in f.source.elements]
    quotient, leg = _quotient(union.graph, pairs)
    return ConstructionResult(
        quotient,
        {
            "left": compose(leg, union.legs["inj1"]),
            "right": compose(leg, union.legs["inj2"]),
        },
    )
