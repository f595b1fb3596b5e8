import json
import random

import pytest

from apg.adt import (
    Atom,
    DEFAULT_REGISTRY,
    Inl,
    Pair,
    PrimRegistry,
    PrimVal,
    Ref,
    Unit,
)
from apg.errors import ParseError, ValidationFailure
from apg.fixtures import load
from apg.files import (
    graph_to_json,
    read_graph,
    read_mapping,
    read_morphism,
    registry_from_json,
    registry_to_json,
    value_from_json,
    value_to_json,
    write_graph,
    write_mapping,
    write_morphism,
)
from .generators import permutation_morphism, random_graph

FIXTURES = [
    "vertices.apg", "edges.apg", "names.apg", "plates1.apg",
    "plates2.apg", "trips.apg", "mapping_input.apg",
]


def test_write_read_identity_on_fixtures():
    for name in FIXTURES:
        text = load(name)
        g = read_graph(text)
        assert write_graph(g) == text
        assert read_graph(write_graph(g)) == g


def test_write_read_identity_on_random_graphs():
    rng = random.Random(51)
    for _ in range(25):
        g = random_graph(rng)
        assert read_graph(write_graph(g)) == g


def test_empty_document_is_the_empty_graph():
    g = read_graph("{}")
    assert not g.schema.labels and not g.elements
    assert g.schema.registry == DEFAULT_REGISTRY


def test_writing_is_canonical():
    g = read_graph(load("plates1.apg"))
    text = write_graph(g)
    assert text.endswith("\n")
    doc = json.loads(text)
    assert list(doc) == sorted(doc)
    assert json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n" == text


def test_bad_json_reports_line_and_column():
    with pytest.raises(ParseError, match="line 2 column"):
        read_graph('{\n  "schema": }')


def test_top_level_must_be_an_object():
    with pytest.raises(ParseError, match="object"):
        read_graph("[1, 2]")


def test_validation_failure_names_the_dangling_reference():
    doc = {
        "schema": {"User": "1", "name": "User * String"},
        "elements": {
            "n1": {"label": "name", "value": {
                "pair": [{"ref": "ghost"}, {"prim": {"type": "String", "value": "A"}}]
            }},
        },
    }
    with pytest.raises(ValidationFailure) as caught:
        read_graph(json.dumps(doc))
    assert "ghost" in str(caught.value)
    g = read_graph(json.dumps(doc), validate=False)
    assert g.elements[Atom("n1")].value.first == Ref(Atom("ghost"))


def test_registry_round_trips_custom_entries():
    registry = PrimRegistry({"String": "string", "Celsius": "double"})
    raw = registry_to_json(registry)
    assert raw == [{"kind": "double", "name": "Celsius"}, "String"]
    assert registry_from_json(raw) == registry


def test_registry_entry_shapes():
    assert registry_from_json(None) == DEFAULT_REGISTRY
    assert registry_from_json(["Nat"]).kind("Nat") == "nat"
    assert registry_from_json([{"name": "Meters", "kind": "double"}]).kind("Meters") == "double"
    with pytest.raises(ParseError, match="not a stock primitive"):
        registry_from_json(["Furlongs"])
    with pytest.raises(ParseError, match="entries are names"):
        registry_from_json([7])
    with pytest.raises(ParseError, match="must be a list"):
        registry_from_json({"Nat": "nat"})
    with pytest.raises(ParseError, match="unknown primitive kind"):
        registry_from_json([{"name": "X", "kind": "decimal"}])


def test_value_forms_round_trip():
    registry = DEFAULT_REGISTRY
    values = [
        Unit(),
        Pair(Unit(), PrimVal("Nat", 3)),
        Inl(Ref(Atom("e7"))),
        PrimVal("Double", 2.5),
        PrimVal("String", "snow ❄"),
    ]
    for v in values:
        assert value_from_json(value_to_json(v), registry, "value") == v


def test_value_form_errors_name_their_position():
    registry = DEFAULT_REGISTRY
    with pytest.raises(ParseError, match="exactly one"):
        value_from_json({"unit": {}, "inl": {}}, registry, "value")
    with pytest.raises(ParseError, match=r"value\.fst"):
        value_from_json({"pair": [{"bogus": 1}, {"unit": {}}]}, registry, "value")
    with pytest.raises(ParseError, match="two-element list"):
        value_from_json({"pair": [{"unit": {}}]}, registry, "value")
    with pytest.raises(ParseError, match="unknown value form"):
        value_from_json({"maybe": {}}, registry, "value")
    with pytest.raises(ParseError, match="id string"):
        value_from_json({"ref": 9}, registry, "value")


def test_doubles_coerce_from_integer_literals():
    raw = {"prim": {"type": "Double", "value": 3}}
    v = value_from_json(raw, DEFAULT_REGISTRY, "value")
    assert v == PrimVal("Double", 3.0)
    assert isinstance(v.literal, float)


def test_element_entries_are_exact():
    doc = {"schema": {"User": "1"},
           "elements": {"u1": {"label": "User", "value": {"unit": {}}, "note": "?"}}}
    with pytest.raises(ParseError, match="exactly label and value"):
        read_graph(json.dumps(doc))


def test_schema_errors_name_the_label():
    doc = {"schema": {"User": "1 +"}}
    with pytest.raises(ParseError, match=r"schema\.User"):
        read_graph(json.dumps(doc))


def test_morphism_round_trip():
    rng = random.Random(52)
    g = random_graph(rng)
    h = permutation_morphism(rng, g)
    text = write_morphism(h)
    back = read_morphism(text, g, g)
    assert back.on_labels == h.on_labels
    assert back.on_elements == h.on_elements


def test_morphism_reading_checks_the_maps():
    g = read_graph(load("vertices.apg"))
    bad = json.dumps({"onLabels": {"User": "User", "Trip": "Trip"},
                      "onElements": {"u1": "t1", "t1": "t1"}})
    with pytest.raises(ValidationFailure):
        read_morphism(bad, g, g)
    h = read_morphism(bad, g, g, validate=False)
    assert h.on_elements[Atom("u1")] == Atom("t1")
    with pytest.raises(ParseError, match="unknown morphism keys"):
        read_morphism(json.dumps({"extra": {}}), g, g)


def test_mapping_round_trip():
    text = load("mapping.apgm")
    m = read_mapping(text)
    assert write_mapping(m) == text
    assert set(m.source.labels) == {"record"}
    assert set(m.target.labels) == {"summary"}


def test_mapping_reading_typechecks():
    doc = json.loads(load("mapping.apgm"))
    doc["onTerms"]["record"] = "(fst phi x, (snd phi x, Integer 0))"
    with pytest.raises(ValidationFailure):
        read_mapping(json.dumps(doc))
    m = read_mapping(json.dumps(doc), validate=False)
    assert "record" in m.on_terms


def test_mapping_term_errors_name_the_label():
    doc = json.loads(load("mapping.apgm"))
    doc["onTerms"]["record"] = "fst ("
    with pytest.raises(ParseError, match=r"onTerms\.record"):
        read_mapping(json.dumps(doc))


def test_writing_keeps_unicode_literal():
    doc = {"schema": {"m": "String"},
           "elements": {"e": {"label": "m",
                              "value": {"prim": {"type": "String", "value": "snow ❄"}}}}}
    text = write_graph(read_graph(json.dumps(doc)))
    assert "snow ❄" in text
    assert "\\u2744" not in text
    doc = graph_to_json(read_graph(load("names.apg")))
    assert doc["elements"]["n1"]["value"]["pair"][1]["prim"]["value"] == "Arthur Dent"
