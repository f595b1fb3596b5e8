import random

import pytest
from hypothesis import given, strategies as st

from apg.adt import (
    Atom,
    Class,
    DEFAULT_REGISTRY,
    Enc,
    Inl,
    Inr,
    Lbl,
    Left,
    One,
    Pair,
    PairId,
    Prim,
    PrimRegistry,
    PrimVal,
    Prod,
    Ref,
    Right,
    Sum,
    Unit,
    Zero,
    check_value,
    label_free,
    labels_in,
    parse_id,
    parse_type,
    render_id,
    render_type,
    render_value,
    transport_type,
    transport_value,
)
from apg.errors import ParseError, PreconditionError
from apg.graph import Schema

from .generators import random_graph, random_type

LABELS = {"Person", "User", "Trip", "PlaceEvent", "Org"}


def t(text: str):
    return parse_type(text, LABELS, DEFAULT_REGISTRY)


# ---------------------------------------------------------------------------
# Parsing and printing

def test_parse_basic_forms():
    assert t("1") == One()
    assert t("0") == Zero()
    assert t("Person * Person") == Prod(Lbl("Person"), Lbl("Person"))
    assert t("String") == Prim("String")
    assert t("1 + PlaceEvent") == Sum(One(), Lbl("PlaceEvent"))


def test_parse_right_associativity_and_precedence():
    assert t("User*User*(1+PlaceEvent)*(1+PlaceEvent)") == Prod(
        Lbl("User"),
        Prod(
            Lbl("User"),
            Prod(
                Sum(One(), Lbl("PlaceEvent")),
                Sum(One(), Lbl("PlaceEvent")),
            ),
        ),
    )
    # * binds tighter than +
    assert t("1 + 1 * 0") == Sum(One(), Prod(One(), Zero()))
    assert t("1 + 1 + 1") == Sum(One(), Sum(One(), One()))


def test_parse_resolves_labels_before_primitives():
    shadowing = parse_type("String", {"String"}, DEFAULT_REGISTRY)
    assert shadowing == Lbl("String")


def test_parse_rejects_unknown_identifier():
    with pytest.raises(ParseError):
        t("Widget")


def test_parse_reports_position():
    with pytest.raises(ParseError) as err:
        t("1 + ")
    assert "(at 4)" in str(err.value)


def test_render_minimal_parens():
    assert render_type(t("Person * String")) == "Person * String"
    assert render_type(t("(1 + User) * String")) == "(1 + User) * String"
    assert render_type(t("1 + User * String")) == "1 + User * String"
    assert render_type(Zero()) == "0"


@given(st.integers(0, 2 ** 32))
def test_render_parse_round_trip_random(seed):
    rng = random.Random(seed)
    ty = random_type(rng, sorted(LABELS), depth=4)
    assert parse_type(render_type(ty), LABELS, DEFAULT_REGISTRY) == ty


def test_structured_label_names_parse_as_single_tokens():
    labels = {"(a,b)", "L:a", "R:b", "C:x", "⊤"}
    for name in labels:
        assert parse_type(name, labels, DEFAULT_REGISTRY) == Lbl(name)
    assert parse_type("(a,b) * L:a", labels, DEFAULT_REGISTRY) == Prod(
        Lbl("(a,b)"), Lbl("L:a")
    )


# ---------------------------------------------------------------------------
# Registry

def test_default_registry_contents():
    assert sorted(DEFAULT_REGISTRY) == ["Boolean", "Double", "Integer", "Nat", "String"]


def test_literal_domains():
    r = DEFAULT_REGISTRY
    assert r.check_literal("Nat", 0)
    assert not r.check_literal("Nat", -1)
    assert not r.check_literal("Nat", True)  # bools are not numbers here
    assert r.check_literal("Integer", -5)
    assert not r.check_literal("Integer", 1.0)
    assert r.check_literal("Double", 37.78)
    assert not r.check_literal("Double", float("nan"))
    assert not r.check_literal("Double", float("inf"))
    assert r.check_literal("Boolean", False)
    assert r.check_literal("String", "")
    assert not r.check_literal("NoSuch", "x")


def test_custom_registry_rejects_bad_names():
    with pytest.raises(ParseError):
        PrimRegistry({"bad name": "string"})
    with pytest.raises(ParseError):
        PrimRegistry({"Temp": "float"})


# ---------------------------------------------------------------------------
# Ids

def test_id_rendering_shapes():
    assert render_id(Atom("p1")) == "p1"
    assert render_id(PairId(Atom("a"), Atom("b"))) == "(a,b)"
    assert render_id(Left(Atom("a"))) == "L:a"
    assert render_id(Right(PairId(Atom("a"), Atom("b")))) == "R:(a,b)"
    assert render_id(Class(Left(Atom("p1")))) == "C:L:p1"
    assert render_id(Enc("record", Ref(Atom("e1")))) == "E:record:@e1"


@given(st.integers(0, 2 ** 32))
def test_id_render_parse_round_trip(seed):
    rng = random.Random(seed)

    def gen(depth):
        pick = rng.randrange(0, 6 if depth else 1)
        if pick == 0:
            return Atom("".join(rng.choices("abc123_.-", k=rng.randrange(1, 5))))
        if pick == 1:
            return PairId(gen(depth - 1), gen(depth - 1))
        if pick == 2:
            return Left(gen(depth - 1))
        if pick == 3:
            return Right(gen(depth - 1))
        if pick == 4:
            return Class(gen(depth - 1))
        return Enc("lbl", Pair(PrimVal("Nat", rng.randrange(9)), Ref(gen(depth - 1))))

    i = gen(3)
    assert parse_id(render_id(i)) == i


def test_distinct_ids_render_distinctly():
    ids = [
        Atom("a"), Atom("ab"), PairId(Atom("a"), Atom("b")),
        Left(Atom("a")), Right(Atom("a")), Class(Atom("a")),
        Enc("l", Unit()), Enc("l", PrimVal("String", "a")),
        Enc("m", PrimVal("String", "a")),
    ]
    rendered = [render_id(i) for i in ids]
    assert len(set(rendered)) == len(ids)


def test_atom_validates_its_text():
    with pytest.raises(ParseError):
        Atom("no spaces")
    with pytest.raises(ParseError):
        Atom("")


# ---------------------------------------------------------------------------
# Transports

def test_transport_type_replaces_labels_only():
    f = {"Person": Lbl("(Person,Org)")}
    assert transport_type(f, parse_type("Person * String", {"Person"}, DEFAULT_REGISTRY)) == Prod(
        Lbl("(Person,Org)"), Prim("String")
    )
    assert transport_type({}, Prim("String")) == Prim("String")


def test_transport_type_equalizer_shape():
    f = {"User": Sum(One(), Lbl("User"))}
    src = parse_type("User * String", {"User"}, DEFAULT_REGISTRY)
    assert transport_type(f, src) == Prod(Sum(One(), Lbl("User")), Prim("String"))


def test_transport_type_outside_domain():
    with pytest.raises(PreconditionError):
        transport_type({}, Lbl("User"))


def test_transport_value_relabels_refs():
    v = Pair(Ref(Atom("t1")), Ref(Atom("u1")))
    g = {Atom("t1"): Ref(Left(Atom("t1"))), Atom("u1"): Ref(Left(Atom("u1")))}
    moved = transport_value({}, g, v)
    assert moved == Pair(Ref(Left(Atom("t1"))), Ref(Left(Atom("u1"))))


def test_transport_value_keeps_prims():
    v = PrimVal("Double", 37.78)
    assert transport_value({}, {}, v) == v


def test_transport_value_missing_ref():
    with pytest.raises(PreconditionError):
        transport_value({}, {}, Ref(Atom("t1")))


def test_transport_identity_on_random_graphs():
    rng = random.Random(7)
    for _ in range(25):
        g = random_graph(rng)
        ident_l = {l: Lbl(l) for l in g.schema.labels}
        for e, el in g.elements.items():
            ty = g.schema.labels[el.label]
            assert transport_type(ident_l, ty) == ty
            moved = transport_value(ident_l, lambda x: Ref(x), el.value, ty)
            assert moved == el.value


# ---------------------------------------------------------------------------
# Checking

def _label_of(assignments):
    return lambda e: assignments.get(e)


def test_check_value_positive_cases():
    schema = Schema({"Person": One(), "knows": Prod(Lbl("Person"), Lbl("Person"))})
    label_of = _label_of({Atom("v1"): "Person", Atom("v2"): "Person"})
    assert check_value(Pair(Ref(Atom("v1")), Ref(Atom("v2"))),
                       schema.labels["knows"], schema, label_of) is None
    assert check_value(Unit(), One(), schema, label_of) is None


def test_check_value_label_mismatch_at_root():
    schema = Schema({"Person": One(), "Org": One()})
    label_of = _label_of({Atom("v1"): "Person"})
    miss = check_value(Ref(Atom("v1")), Lbl("Org"), schema, label_of)
    assert miss is not None
    assert miss.path == ()


def test_check_value_reports_paths():
    schema = Schema({"User": One(), "name": Prod(Lbl("User"), Prim("String"))})
    label_of = _label_of({Atom("u1"): "User"})
    miss = check_value(Pair(Ref(Atom("u1")), PrimVal("Nat", 3)),
                       schema.labels["name"], schema, label_of)
    assert miss.path == ("snd",)
    assert "String" in miss.message or "Nat" in miss.message


def test_check_value_zero_uninhabited():
    schema = Schema({})
    for v in [Unit(), PrimVal("Nat", 0), Inl(Unit()), Pair(Unit(), Unit())]:
        assert check_value(v, Zero(), schema, _label_of({})) is not None


def test_check_value_injections_pick_sides():
    schema = Schema({})
    ty = Sum(One(), Prim("Nat"))
    assert check_value(Inl(Unit()), ty, schema, _label_of({})) is None
    assert check_value(Inr(PrimVal("Nat", 4)), ty, schema, _label_of({})) is None
    assert check_value(Inr(Unit()), ty, schema, _label_of({})) is not None


def test_check_value_dangling_ref():
    schema = Schema({"User": One()})
    miss = check_value(Ref(Atom("ghost")), Lbl("User"), schema, _label_of({}))
    assert miss is not None
    assert "missing" in miss.message


def test_check_after_transport_random():
    # transported values check against transported types
    rng = random.Random(21)
    for _ in range(20):
        g = random_graph(rng)
        f = {l: Sum(One(), Lbl(l)) for l in g.schema.labels}

        def move(e):
            return Inr(Ref(e))

        wrapped_schema = Schema(
            {l: transport_type(f, ty) for l, ty in g.schema.labels.items()},
            g.schema.registry,
        )
        for e, el in g.elements.items():
            ty = g.schema.labels[el.label]
            out = transport_value(f, move, el.value, ty)
            miss = check_value(out, transport_type(f, ty), wrapped_schema, g.label_of)
            assert miss is None, miss


def test_label_free_and_labels_in():
    ty = t("User * (1 + PlaceEvent)")
    assert not label_free(ty)
    assert labels_in(ty) == {"User", "PlaceEvent"}
    assert label_free(t("String * (1 + Nat)"))


def test_render_value_forms():
    v = Pair(PrimVal("String", "US"), Ref(Atom("e1")))
    assert render_value(v) == '(String="US",@e1)'
    assert render_value(Inl(Unit())) == "inl(())"
