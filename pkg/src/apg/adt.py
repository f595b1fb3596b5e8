"""Algebraic types, values, and element identifiers.

The data model is a tiny algebraic one: types are built from the empty type
``0``, the unit type ``1``, binary sums and products, named primitive types,
and references to labels; values mirror the type constructors, with element
references standing in for label-typed positions.  Everything is a frozen
dataclass, compared structurally and safe to share or use as a dict key.

This module also owns the concrete syntax: type expressions ("User * String"),
canonical element-id renderings ("(p1,q1)", "L:a", "E:record:@e1"), and the
value renderings embedded in encoded ids.  Rendering is injective and every
rendering parses back to the structure it came from.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, TypeAlias, Union

from .errors import ParseError, PreconditionError

# ---------------------------------------------------------------------------
# Primitive type registry

_KINDS = ("string", "nat", "integer", "double", "boolean")


class PrimRegistry:
    """Maps primitive type names to one of five value domains.

    The domains are: text strings, natural numbers (>= 0), signed integers,
    finite IEEE doubles, and booleans.  Doubles are kept finite because the
    file format is JSON and structural equality must stay reflexive.
    """

    def __init__(self, kinds: Mapping[str, str]):
        for name, kind in kinds.items():
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise ParseError(f"bad primitive type name {name!r}")
            if kind not in _KINDS:
                raise ParseError(f"unknown primitive kind {kind!r} for {name}")
        self._kinds = dict(kinds)

    def __contains__(self, name: str) -> bool:
        return name in self._kinds

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self._kinds))

    def kind(self, name: str) -> str:
        return self._kinds[name]

    def check_literal(self, name: str, literal: object) -> bool:
        """True when the literal lies in the domain registered under name."""
        if name not in self._kinds:
            return False
        kind = self._kinds[name]
        if kind == "string":
            return isinstance(literal, str)
        if kind == "boolean":
            return isinstance(literal, bool)
        if kind == "nat":
            return isinstance(literal, int) and not isinstance(literal, bool) and literal >= 0
        if kind == "integer":
            return isinstance(literal, int) and not isinstance(literal, bool)
        return isinstance(literal, float) and math.isfinite(literal)

    def coerce(self, name: str, raw: object) -> object:
        """Normalize a literal fresh from JSON (ints are legal double text)."""
        if name in self._kinds and self._kinds[name] == "double":
            if isinstance(raw, int) and not isinstance(raw, bool):
                return float(raw)
        return raw

    def items(self):
        return sorted(self._kinds.items())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimRegistry) and self._kinds == other._kinds

    def __repr__(self) -> str:
        return f"PrimRegistry({self._kinds!r})"


DEFAULT_KINDS = {
    "String": "string",
    "Nat": "nat",
    "Integer": "integer",
    "Double": "double",
    "Boolean": "boolean",
}

DEFAULT_REGISTRY = PrimRegistry(DEFAULT_KINDS)


# ---------------------------------------------------------------------------
# Types

@dataclass(frozen=True)
class Zero:
    """The empty type; no value inhabits it."""


@dataclass(frozen=True)
class One:
    """The unit type, inhabited only by Unit."""


@dataclass(frozen=True)
class Sum:
    left: TypeExpr
    right: TypeExpr


@dataclass(frozen=True)
class Prod:
    left: TypeExpr
    right: TypeExpr


@dataclass(frozen=True)
class Prim:
    """A primitive type, named into some registry."""

    name: str


@dataclass(frozen=True)
class Lbl:
    """A reference to a label; its values are references to elements."""

    name: str


TypeExpr: TypeAlias = Union[Zero, One, Sum, Prod, Prim, Lbl]


def label_free(t: TypeExpr) -> bool:
    """True when no label reference occurs anywhere in the type."""
    if isinstance(t, Lbl):
        return False
    if isinstance(t, (Sum, Prod)):
        return label_free(t.left) and label_free(t.right)
    return True


def labels_in(t: TypeExpr) -> set[str]:
    if isinstance(t, Lbl):
        return {t.name}
    if isinstance(t, (Sum, Prod)):
        return labels_in(t.left) | labels_in(t.right)
    return set()


# ---------------------------------------------------------------------------
# Values and element identifiers (mutually recursive)

@dataclass(frozen=True)
class Unit:
    """The sole value of the unit type."""


@dataclass(frozen=True)
class Inl:
    inner: Value


@dataclass(frozen=True)
class Inr:
    inner: Value


@dataclass(frozen=True)
class Pair:
    first: Value
    second: Value


@dataclass(frozen=True)
class PrimVal:
    """A primitive literal tagged with its primitive type name.

    Two primitive values are equal exactly when both the name and the
    literal agree, so Nat 0 and Integer 0 stay distinct.
    """

    prim: str
    literal: Union[str, int, float, bool]


@dataclass(frozen=True)
class Ref:
    """A reference to an element, the value form of a label type."""

    element: ElementId


Value: TypeAlias = Union[Unit, Inl, Inr, Pair, PrimVal, Ref]


_ATOM_RE = re.compile(r"[A-Za-z0-9_.\-⊤]+")


@dataclass(frozen=True)
class Atom:
    """A plain element id such as "p1"."""

    text: str

    def __post_init__(self):
        if not _ATOM_RE.fullmatch(self.text):
            raise ParseError(f"bad element id {self.text!r}")


@dataclass(frozen=True)
class PairId:
    """The id of a paired element, rendered "(a,b)"."""

    first: ElementId
    second: ElementId


@dataclass(frozen=True)
class Left:
    """A left-tagged id from a disjoint union, rendered "L:a"."""

    inner: ElementId


@dataclass(frozen=True)
class Right:
    inner: ElementId


@dataclass(frozen=True)
class Class:
    """The id of an equivalence class, named by its least member."""

    rep: ElementId


@dataclass(frozen=True)
class Enc:
    """An id minted from a label and a witness value, rendered "E:l:v".

    Migration creates one output element per (label, witness) pair; keeping
    the label in the id keeps ids unique when two labels share a witness.
    """

    label: str
    witness: Value


ElementId: TypeAlias = Union[Atom, PairId, Left, Right, Class, Enc]


# ---------------------------------------------------------------------------
# Canonical renderings

def render_id(e: ElementId) -> str:
    if isinstance(e, Atom):
        return e.text
    if isinstance(e, PairId):
        return f"({render_id(e.first)},{render_id(e.second)})"
    if isinstance(e, Left):
        return "L:" + render_id(e.inner)
    if isinstance(e, Right):
        return "R:" + render_id(e.inner)
    if isinstance(e, Class):
        return "C:" + render_id(e.rep)
    return f"E:{e.label}:{render_value(e.witness)}"


def render_value(v: Value) -> str:
    if isinstance(v, Unit):
        return "()"
    if isinstance(v, Pair):
        return f"({render_value(v.first)},{render_value(v.second)})"
    if isinstance(v, Inl):
        return f"inl({render_value(v.inner)})"
    if isinstance(v, Inr):
        return f"inr({render_value(v.inner)})"
    if isinstance(v, PrimVal):
        return f"{v.prim}={json.dumps(v.literal)}"
    return "@" + render_id(v.element)


def id_sort_key(e: ElementId) -> str:
    return render_id(e)


class _Scanner:
    """Recursive-descent scanner shared by the id and value parsers."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.pos)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, expected: str):
        if not self.text.startswith(expected, self.pos):
            raise self.error(f"expected {expected!r}")
        self.pos += len(expected)

    def atom_run(self) -> str:
        m = _ATOM_RE.match(self.text, self.pos)
        if not m:
            raise self.error("expected a name")
        self.pos = m.end()
        return m.group()

    def id_(self) -> ElementId:
        c = self.peek()
        if c == "(":
            self.take("(")
            first = self.id_()
            self.take(",")
            second = self.id_()
            self.take(")")
            return PairId(first, second)
        for prefix, ctor in (("L:", Left), ("R:", Right), ("C:", Class)):
            if self.text.startswith(prefix, self.pos):
                self.pos += 2
                return ctor(self.id_())
        if self.text.startswith("E:", self.pos):
            self.pos += 2
            label = self.name()
            self.take(":")
            return Enc(label, self.value())
        return Atom(self.atom_run())

    def name(self) -> str:
        """A label name: an atom run, a prefixed name, or a comma pair."""
        c = self.peek()
        if c == "(":
            self.take("(")
            first = self.name()
            self.take(",")
            second = self.name()
            self.take(")")
            return f"({first},{second})"
        for prefix in ("L:", "R:", "C:"):
            if self.text.startswith(prefix, self.pos):
                self.pos += 2
                return prefix + self.name()
        return self.atom_run()

    def value(self) -> Value:
        c = self.peek()
        if c == "(":
            self.take("(")
            if self.peek() == ")":
                self.take(")")
                return Unit()
            first = self.value()
            self.take(",")
            second = self.value()
            self.take(")")
            return Pair(first, second)
        if c == "@":
            self.take("@")
            return Ref(self.id_())
        if self.text.startswith("inl(", self.pos):
            self.take("inl(")
            inner = self.value()
            self.take(")")
            return Inl(inner)
        if self.text.startswith("inr(", self.pos):
            self.take("inr(")
            inner = self.value()
            self.take(")")
            return Inr(inner)
        name = self.atom_run()
        self.take("=")
        try:
            literal, end = json.JSONDecoder().raw_decode(self.text, self.pos)
        except ValueError:
            raise self.error("bad literal") from None
        self.pos = end
        if not isinstance(literal, (str, int, float, bool)):
            raise self.error("literal must be a scalar")
        return PrimVal(name, literal)


def parse_id(text: str) -> ElementId:
    s = _Scanner(text)
    result = s.id_()
    if s.pos != len(text):
        raise s.error("trailing characters in element id")
    return result


# ---------------------------------------------------------------------------
# Type expression syntax
#
#   type := prod ('+' type)?          (right associative, lowest precedence)
#   prod := atom ('*' prod)?          (binds tighter than '+')
#   atom := '0' | '1' | NAME | '(' type ')'
#
# NAME is an identifier, resolved against the schema's labels first and the
# primitive registry second.  Graphs produced by the categorical operations
# carry structured label names ("L:driver", "(knows,⊤)"), so the tokenizer
# also accepts prefixed names and whitespace-free parenthesized pairs as
# single tokens.

_IDENT_RE = re.compile(r"[A-Za-z_⊤][A-Za-z0-9_⊤]*")


def _scan_type_tokens(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "+*)":
            tokens.append((c, c, i))
            i += 1
            continue
        if c == "(":
            name = _try_structured_name(text, i)
            if name is not None:
                tokens.append(("name", name, i))
                i += len(name)
            else:
                tokens.append(("(", "(", i))
                i += 1
            continue
        if c == "0" or c == "1":
            if i + 1 < n and (text[i + 1].isalnum() or text[i + 1] == "_"):
                raise ParseError(f"bad token starting at {text[i:i+8]!r}", i)
            tokens.append((c, c, i))
            i += 1
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            name = m.group()
            j = m.end()
            if name in ("L", "R", "C") and j < n and text[j] == ":":
                s = _Scanner(text)
                s.pos = i
                name = s.name()
                j = s.pos
            tokens.append(("name", name, i))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(("end", "", n))
    return tokens


def _try_structured_name(text: str, i: int) -> str | None:
    """Scan a parenthesized pair name like "(a,b)" if one starts at i."""
    s = _Scanner(text)
    s.pos = i
    try:
        name = s.name()
    except ParseError:
        return None
    return name if name.startswith("(") else None


def parse_type(text: str, labels, registry: PrimRegistry = DEFAULT_REGISTRY) -> TypeExpr:
    """Parse a type expression, resolving names label-first.

    labels is the set (or mapping) of label names in scope.  A name that is
    neither a label nor a registered primitive is a parse error.
    """
    tokens = _scan_type_tokens(text)
    pos = 0

    def peek():
        return tokens[pos][0]

    def advance():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def type_() -> TypeExpr:
        t = prod()
        if peek() == "+":
            advance()
            return Sum(t, type_())
        return t

    def prod() -> TypeExpr:
        t = atom()
        if peek() == "*":
            advance()
            return Prod(t, prod())
        return t

    def atom() -> TypeExpr:
        kind, text_, at = advance()
        if kind == "0":
            return Zero()
        if kind == "1":
            return One()
        if kind == "name":
            if text_ in labels:
                return Lbl(text_)
            if text_ in registry:
                return Prim(text_)
            raise ParseError(f"unknown type name {text_!r}", at)
        if kind == "(":
            t = type_()
            k, _, at2 = advance()
            if k != ")":
                raise ParseError("expected ')'", at2)
            return t
        raise ParseError(f"expected a type, found {text_!r}" if text_ else "unexpected end of type", at)

    result = type_()
    kind, text_, at = tokens[pos]
    if kind != "end":
        raise ParseError(f"trailing characters {text_!r} in type expression", at)
    return result


def render_type(t: TypeExpr) -> str:
    """Render with minimal parentheses; parse_type round-trips the output."""

    def go(t: TypeExpr, level: int) -> str:
        if isinstance(t, Zero):
            return "0"
        if isinstance(t, One):
            return "1"
        if isinstance(t, (Prim, Lbl)):
            return t.name
        if isinstance(t, Sum):
            s = f"{go(t.left, 1)} + {go(t.right, 0)}"
            return f"({s})" if level > 0 else s
        s = f"{go(t.left, 2)} * {go(t.right, 1)}"
        return f"({s})" if level > 1 else s

    return go(t, 0)


# ---------------------------------------------------------------------------
# Structural transports
#
# A label map f induces a rewrite of types (replace each label reference);
# together with an element map g it induces a rewrite of values (replace each
# element reference).  These carry schemas and stored values across the
# categorical constructions without touching primitive data.

def transport_type(f: Mapping[str, TypeExpr], t: TypeExpr) -> TypeExpr:
    if isinstance(t, Lbl):
        try:
            return f[t.name]
        except KeyError:
            raise PreconditionError(f"label {t.name!r} outside the transport domain") from None
    if isinstance(t, Sum):
        return Sum(transport_type(f, t.left), transport_type(f, t.right))
    if isinstance(t, Prod):
        return Prod(transport_type(f, t.left), transport_type(f, t.right))
    return t


def transport_value(
    f: Mapping[str, TypeExpr],
    g: Union[Mapping[ElementId, Value], Callable[[ElementId], Value]],
    v: Value,
    at: TypeExpr | None = None,
) -> Value:
    """Rewrite every reference in v through g.

    f and at document the typing side: if v checks against at, the result
    checks against transport_type(f, at) whenever g sends each element to a
    value of the transported label type.  The recursion itself is directed
    by the value alone.
    """
    if isinstance(g, Mapping):
        mapping = g

        def g_fn(e: ElementId) -> Value:
            try:
                return mapping[e]
            except KeyError:
                raise PreconditionError(
                    f"element {render_id(e)} outside the transport domain"
                ) from None
    else:
        g_fn = g

    def go(v: Value) -> Value:
        if isinstance(v, (Unit, PrimVal)):
            return v
        if isinstance(v, Ref):
            return g_fn(v.element)
        if isinstance(v, Inl):
            return Inl(go(v.inner))
        if isinstance(v, Inr):
            return Inr(go(v.inner))
        return Pair(go(v.first), go(v.second))

    return go(v)


# ---------------------------------------------------------------------------
# Bidirectional value checking

@dataclass(frozen=True)
class Mismatch:
    """A single point of disagreement between a value and a type."""

    path: tuple[str, ...]
    message: str

    def path_text(self) -> str:
        return "".join("." + step for step in self.path)

    def __str__(self) -> str:
        where = self.path_text() or "root"
        return f"at {where}: {self.message}"


def _describe(v: Value) -> str:
    if isinstance(v, Unit):
        return "()"
    if isinstance(v, Pair):
        return "a pair"
    if isinstance(v, Inl):
        return "a left injection"
    if isinstance(v, Inr):
        return "a right injection"
    if isinstance(v, PrimVal):
        return f"a {v.prim} literal"
    return f"a reference to {render_id(v.element)}"


def check_value(value: Value, expected: TypeExpr, schema, label_of) -> Mismatch | None:
    """Check value against expected, returning the first mismatch found.

    schema supplies the primitive registry; label_of maps element ids to
    label names (a mapping or a callable) and is consulted at reference
    positions.  Returns None when the value inhabits the type.
    """
    if callable(label_of):
        look = label_of
    else:
        look = label_of.get
    registry = schema.registry

    def go(v: Value, t: TypeExpr, path: tuple[str, ...]) -> Mismatch | None:
        if isinstance(t, Zero):
            return Mismatch(path, "no value inhabits the empty type 0")
        if isinstance(t, One):
            if isinstance(v, Unit):
                return None
            return Mismatch(path, f"expected (), found {_describe(v)}")
        if isinstance(t, Sum):
            if isinstance(v, Inl):
                return go(v.inner, t.left, path + ("inl",))
            if isinstance(v, Inr):
                return go(v.inner, t.right, path + ("inr",))
            return Mismatch(path, f"expected {render_type(t)}, found {_describe(v)}")
        if isinstance(t, Prod):
            if isinstance(v, Pair):
                return go(v.first, t.left, path + ("fst",)) or go(
                    v.second, t.right, path + ("snd",)
                )
            return Mismatch(path, f"expected {render_type(t)}, found {_describe(v)}")
        if isinstance(t, Prim):
            if not isinstance(v, PrimVal):
                return Mismatch(path, f"expected a {t.name} literal, found {_describe(v)}")
            if v.prim != t.name:
                return Mismatch(path, f"expected a {t.name} literal, found a {v.prim} literal")
            if not registry.check_literal(v.prim, v.literal):
                return Mismatch(path, f"literal {v.literal!r} is outside the {v.prim} domain")
            return None
        # t is a label reference
        if not isinstance(v, Ref):
            return Mismatch(path, f"expected a reference to {t.name}, found {_describe(v)}")
        target_label = look(v.element)
        if target_label is None:
            return Mismatch(path, f"reference to missing element {render_id(v.element)}")
        if target_label != t.name:
            return Mismatch(
                path,
                f"expected a reference to {t.name}, found one to "
                f"{render_id(v.element)} labeled {target_label}",
            )
        return None

    return go(value, expected, ())
