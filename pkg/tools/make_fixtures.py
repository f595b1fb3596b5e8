"""Regenerate the fixture files under src/apg/fixtures/ from code.

Run from the repository root: python3 tools/make_fixtures.py
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from apg.adt import Atom, Inl, Inr, Pair, PrimVal, Ref, Unit, parse_type
from apg.files import write_graph, write_mapping
from apg.graph import Element, Graph, Schema
from apg.migrate import SchemaMapping, parse_term

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "apg" / "fixtures"


def schema(registry_free: dict[str, str]) -> Schema:
    names = set(registry_free)
    out = Schema({})
    return Schema({l: parse_type(t, names, out.registry) for l, t in registry_free.items()})


def graph(types: dict[str, str], elements: dict[str, tuple[str, object]]) -> Graph:
    s = schema(types)
    return Graph(s, {Atom(e): Element(label, value) for e, (label, value) in elements.items()})


def ref(name: str) -> Ref:
    return Ref(Atom(name))


def string(text: str) -> PrimVal:
    return PrimVal("String", text)


def plate(country: str, region: str, number: str) -> Pair:
    return Pair(string(country), Pair(string(region), string(number)))


FIXTURES = {
    "vertices.apg": graph(
        {"User": "1", "Trip": "1"},
        {"u1": ("User", Unit()), "t1": ("Trip", Unit())},
    ),
    "edges.apg": graph(
        {"User": "1", "Trip": "1", "driver": "Trip * User", "rider": "Trip * User"},
        {
            "t1": ("Trip", Unit()),
            "u1": ("User", Unit()),
            "u2": ("User", Unit()),
            "d1": ("driver", Pair(ref("t1"), ref("u1"))),
            "r1": ("rider", Pair(ref("t1"), ref("u2"))),
        },
    ),
    "names.apg": graph(
        {"User": "1", "name": "User * String"},
        {
            "u1": ("User", Unit()),
            "n1": ("name", Pair(ref("u1"), string("Arthur Dent"))),
            "n2": ("name", Pair(ref("u1"), string("Arthur P. Dent"))),
        },
    ),
    "plates1.apg": graph(
        {"PlateNumber": "String * String * String"},
        {
            "p1": ("PlateNumber", plate("US", "CA", "6TRJ244")),
            "p2": ("PlateNumber", plate("MX", "BC", "AHD-41-02")),
        },
    ),
    "plates2.apg": graph(
        {"PlateNumber": "String * String * String"},
        {
            "q1": ("PlateNumber", plate("US", "CA", "6TRJ244")),
            "q2": ("PlateNumber", plate("MX", "SON", "VUK-17-75")),
        },
    ),
    "trips.apg": graph(
        {
            "User": "1",
            "Place": "1",
            "UnixTimeSeconds": "Integer",
            "PlaceEvent": "Place * UnixTimeSeconds",
            "Trip": "User * User * (1 + PlaceEvent) * (1 + PlaceEvent)",
        },
        {
            "u1": ("User", Unit()),
            "u2": ("User", Unit()),
            "u3": ("User", Unit()),
            "p1": ("Place", Unit()),
            "p2": ("Place", Unit()),
            "p3": ("Place", Unit()),
            "s1": ("UnixTimeSeconds", PrimVal("Integer", 1564061155)),
            "s2": ("UnixTimeSeconds", PrimVal("Integer", 1564061502)),
            "s3": ("UnixTimeSeconds", PrimVal("Integer", 1564061676)),
            "s4": ("UnixTimeSeconds", PrimVal("Integer", 1564062809)),
            "e1": ("PlaceEvent", Pair(ref("p1"), ref("s1"))),
            "e2": ("PlaceEvent", Pair(ref("p2"), ref("s2"))),
            "e3": ("PlaceEvent", Pair(ref("p2"), ref("s3"))),
            "e4": ("PlaceEvent", Pair(ref("p3"), ref("s4"))),
            "t1": ("Trip", Pair(ref("u1"), Pair(ref("u2"),
                   Pair(Inr(ref("e1")), Inr(ref("e2")))))),
            "t2": ("Trip", Pair(ref("u1"), Pair(ref("u3"),
                   Pair(Inr(ref("e3")), Inl(Unit()))))),
        },
    ),
    "mapping_input.apg": graph(
        {"summary": "Nat * String"},
        {"e1": ("summary", Pair(PrimVal("Nat", 7), string("abc")))},
    ),
}

MAPPING = SchemaMapping(
    source=schema({"record": "String * Nat * Integer"}),
    target=schema({"summary": "Nat * String"}),
    on_labels={"record": parse_type("summary", {"summary"}, Schema({}).registry)},
    on_terms={"record": parse_term("(snd phi x, (fst phi x, Integer 0))")},
)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, g in FIXTURES.items():
        (OUT / name).write_text(write_graph(g), encoding="utf-8")
        print("wrote", name)
    (OUT / "mapping.apgm").write_text(write_mapping(MAPPING), encoding="utf-8")
    print("wrote mapping.apgm")


if __name__ == "__main__":
    main()
