"""Schema mappings and data migration.

A mapping sends each source label to a type over the target schema and to a
term that rebuilds a source-shaped value from a target-side witness.  Terms
are a tiny first-order language: the migration variable x, pairing and
injections, projections, case analysis, primitive literals, and a lookup
form phi(t) that dereferences a target element to its stored value.

Migrating a target graph materializes, for every source label, one element
per witness of the mapped type.  Witness enumeration covers the fragment
built from 1, sums, products, and label references; primitive types would
mean enumerating infinite domains, so mappings must stay inside the
enumerable fragment.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from typing import Mapping, TypeAlias, Union

from .adt import (
    Enc,
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
    labels_in,
    render_id,
    render_type,
    render_value,
    transport_type,
)
from .errors import ApgError, ParseError, PreconditionError
from .graph import Element, Graph, Schema, ValidationReport, validate_graph

# ---------------------------------------------------------------------------
# Terms

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class UnitT:
    pass


@dataclass(frozen=True)
class PairT:
    first: Term
    second: Term


@dataclass(frozen=True)
class InlT:
    inner: Term


@dataclass(frozen=True)
class InrT:
    inner: Term


@dataclass(frozen=True)
class Fst:
    inner: Term


@dataclass(frozen=True)
class Snd:
    inner: Term


@dataclass(frozen=True)
class CaseT:
    scrutinee: Term
    left_name: str
    left_body: Term
    right_name: str
    right_body: Term


@dataclass(frozen=True)
class Phi:
    """Dereference: the stored value of the element a term refers to."""

    inner: Term


@dataclass(frozen=True)
class Lit:
    prim: str
    literal: Union[str, int, float, bool]


Term: TypeAlias = Union[Var, UnitT, PairT, InlT, InrT, Fst, Snd, CaseT, Phi, Lit]


class TermTypeError(ApgError):
    pass


class RewriteLimit(ApgError):
    pass


# ---------------------------------------------------------------------------
# Term syntax
#
#   term := 'case' term 'of' '{' 'inl' NAME '->' term ';' 'inr' NAME '->' term '}'
#         | ('fst'|'snd'|'inl'|'inr'|'phi') term
#         | '()' | '(' term ')' | '(' term ',' term ')'
#         | NAME literal        (a primitive literal, e.g. Integer 0)
#         | NAME                (a variable)

_KEYWORDS = {"fst", "snd", "inl", "inr", "phi", "case", "of"}
_TOKEN_RE = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<number>-?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?)"
    r'|(?P<string>"(?:[^"\\]|\\.)*")'
    r"|(?P<arrow>->)"
    r"|(?P<punct>[(){};,]))"
)


def _scan_term(text: str):
    tokens = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            if text[i:].strip():
                raise ParseError(f"bad token {text[i:i+8]!r}", i)
            break
        i = m.end()
        if m.lastgroup is None:
            break
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
    tokens.append(("end", "", len(text)))
    return tokens


def parse_term(text: str) -> Term:
    tokens = _scan_term(text)
    pos = 0

    def peek():
        return tokens[pos]

    def advance():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def expect(value: str):
        kind, got, at = advance()
        if got != value:
            raise ParseError(f"expected {value!r}, found {got!r}", at)

    def name() -> str:
        kind, got, at = advance()
        if kind != "ident" or got in _KEYWORDS:
            raise ParseError(f"expected a name, found {got!r}", at)
        return got

    def term() -> Term:
        kind, value, at = peek()
        if kind == "ident" and value == "case":
            advance()
            scrutinee = term()
            expect("of")
            expect("{")
            expect("inl")
            ln = name()
            expect("->")
            lb = term()
            expect(";")
            expect("inr")
            rn = name()
            expect("->")
            rb = term()
            expect("}")
            return CaseT(scrutinee, ln, lb, rn, rb)
        if kind == "ident" and value in ("fst", "snd", "inl", "inr", "phi"):
            advance()
            inner = term()
            ctor = {"fst": Fst, "snd": Snd, "inl": InlT, "inr": InrT, "phi": Phi}[value]
            return ctor(inner)
        return primary()

    def primary() -> Term:
        kind, value, at = advance()
        if kind == "punct" and value == "(":
            k2, v2, _ = peek()
            if v2 == ")":
                advance()
                return UnitT()
            first = term()
            k3, v3, at3 = advance()
            if v3 == ")":
                return first
            if v3 == ",":
                second = term()
                expect(")")
                return PairT(first, second)
            raise ParseError(f"expected ',' or ')', found {v3!r}", at3)
        if kind == "ident" and value not in _KEYWORDS:
            nk, nv, _ = peek()
            if nk in ("number", "string") or (nk == "ident" and nv in ("true", "false")):
                advance()
                if nk == "number":
                    literal = json.loads(nv)
                elif nk == "string":
                    literal = json.loads(nv)
                else:
                    literal = nv == "true"
                return Lit(value, literal)
            return Var(value)
        raise ParseError(f"expected a term, found {value!r}" if value else "unexpected end of term", at)

    result = term()
    kind, value, at = tokens[pos]
    if kind != "end":
        raise ParseError(f"trailing characters {value!r} in term", at)
    return result


def render_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, UnitT):
        return "()"
    if isinstance(t, PairT):
        return f"({render_term(t.first)}, {render_term(t.second)})"
    if isinstance(t, InlT):
        return f"inl {render_term(t.inner)}"
    if isinstance(t, InrT):
        return f"inr {render_term(t.inner)}"
    if isinstance(t, Fst):
        return f"fst {render_term(t.inner)}"
    if isinstance(t, Snd):
        return f"snd {render_term(t.inner)}"
    if isinstance(t, Phi):
        return f"phi {render_term(t.inner)}"
    if isinstance(t, CaseT):
        return (
            f"case {render_term(t.scrutinee)} of "
            f"{{ inl {t.left_name} -> {render_term(t.left_body)} ; "
            f"inr {t.right_name} -> {render_term(t.right_body)} }}"
        )
    return f"{t.prim} {json.dumps(t.literal)}"


# ---------------------------------------------------------------------------
# Typing

def infer_term(t: Term, env: Mapping[str, TypeExpr], schema: Schema) -> TypeExpr:
    """Synthesize a type, or raise TermTypeError.  Injections and unit-free
    forms that only check are rejected here with a clear message."""
    if isinstance(t, Var):
        if t.name not in env:
            raise TermTypeError(f"unbound variable {t.name!r}")
        return env[t.name]
    if isinstance(t, UnitT):
        return One()
    if isinstance(t, Lit):
        if t.prim not in schema.registry:
            raise TermTypeError(f"unknown primitive type {t.prim!r}")
        if not schema.registry.check_literal(t.prim, t.literal):
            raise TermTypeError(f"literal {t.literal!r} is outside the {t.prim} domain")
        return Prim(t.prim)
    if isinstance(t, PairT):
        return Prod(infer_term(t.first, env, schema), infer_term(t.second, env, schema))
    if isinstance(t, Fst):
        inner = infer_term(t.inner, env, schema)
        if not isinstance(inner, Prod):
            raise TermTypeError(f"fst applied to {render_type(inner)}")
        return inner.left
    if isinstance(t, Snd):
        inner = infer_term(t.inner, env, schema)
        if not isinstance(inner, Prod):
            raise TermTypeError(f"snd applied to {render_type(inner)}")
        return inner.right
    if isinstance(t, Phi):
        inner = infer_term(t.inner, env, schema)
        if not isinstance(inner, Lbl):
            raise TermTypeError(f"phi applied to {render_type(inner)}, not a label")
        if inner.name not in schema.labels:
            raise TermTypeError(f"phi dereferences undeclared label {inner.name!r}")
        return schema.labels[inner.name]
    if isinstance(t, CaseT):
        scrutinee = infer_term(t.scrutinee, env, schema)
        if not isinstance(scrutinee, Sum):
            raise TermTypeError(f"case scrutinee has type {render_type(scrutinee)}, not a sum")
        left = infer_term(t.left_body, {**env, t.left_name: scrutinee.left}, schema)
        check_term(t.right_body, left, {**env, t.right_name: scrutinee.right}, schema)
        return left
    raise TermTypeError(f"cannot infer a type for {render_term(t)}; annotate by context")


def check_term(t: Term, expected: TypeExpr, env: Mapping[str, TypeExpr], schema: Schema):
    """Check t against expected, raising TermTypeError on the first problem."""
    if isinstance(t, InlT):
        if not isinstance(expected, Sum):
            raise TermTypeError(f"inl produces a sum, but {render_type(expected)} was expected")
        check_term(t.inner, expected.left, env, schema)
        return
    if isinstance(t, InrT):
        if not isinstance(expected, Sum):
            raise TermTypeError(f"inr produces a sum, but {render_type(expected)} was expected")
        check_term(t.inner, expected.right, env, schema)
        return
    if isinstance(t, PairT):
        if not isinstance(expected, Prod):
            raise TermTypeError(f"a pair produces a product, but {render_type(expected)} was expected")
        check_term(t.first, expected.left, env, schema)
        check_term(t.second, expected.right, env, schema)
        return
    if isinstance(t, UnitT):
        if not isinstance(expected, One):
            raise TermTypeError(f"() has type 1, but {render_type(expected)} was expected")
        return
    if isinstance(t, CaseT):
        scrutinee = infer_term(t.scrutinee, env, schema)
        if not isinstance(scrutinee, Sum):
            raise TermTypeError(f"case scrutinee has type {render_type(scrutinee)}, not a sum")
        check_term(t.left_body, expected, {**env, t.left_name: scrutinee.left}, schema)
        check_term(t.right_body, expected, {**env, t.right_name: scrutinee.right}, schema)
        return
    found = infer_term(t, env, schema)
    if found != expected:
        raise TermTypeError(
            f"term has type {render_type(found)}, but {render_type(expected)} was expected"
        )


# ---------------------------------------------------------------------------
# Rewriting

def free_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, (UnitT, Lit)):
        return set()
    if isinstance(t, PairT):
        return free_vars(t.first) | free_vars(t.second)
    if isinstance(t, (InlT, InrT, Fst, Snd, Phi)):
        return free_vars(t.inner)
    out = free_vars(t.scrutinee)
    out |= free_vars(t.left_body) - {t.left_name}
    out |= free_vars(t.right_body) - {t.right_name}
    return out


def _fresh(base: str, avoid: set[str]) -> str:
    for i in itertools.count(1):
        candidate = f"{base}_{i}"
        if candidate not in avoid:
            return candidate


def substitute(t: Term, name: str, replacement: Term) -> Term:
    """Capture-avoiding substitution of replacement for the free variable."""
    if isinstance(t, Var):
        return replacement if t.name == name else t
    if isinstance(t, (UnitT, Lit)):
        return t
    if isinstance(t, PairT):
        return PairT(substitute(t.first, name, replacement), substitute(t.second, name, replacement))
    if isinstance(t, (InlT, InrT, Fst, Snd, Phi)):
        return type(t)(substitute(t.inner, name, replacement))
    scrutinee = substitute(t.scrutinee, name, replacement)
    ln, lb = _subst_branch(t.left_name, t.left_body, name, replacement)
    rn, rb = _subst_branch(t.right_name, t.right_body, name, replacement)
    return CaseT(scrutinee, ln, lb, rn, rb)


def _subst_branch(binder: str, body: Term, name: str, replacement: Term):
    if binder == name:
        return binder, body
    if binder in free_vars(replacement):
        fresh = _fresh(binder, free_vars(replacement) | free_vars(body))
        body = substitute(body, binder, Var(fresh))
        binder = fresh
    return binder, substitute(body, name, replacement)


def _reduce_root(t: Term) -> Term | None:
    if isinstance(t, Fst) and isinstance(t.inner, PairT):
        return t.inner.first
    if isinstance(t, Snd) and isinstance(t.inner, PairT):
        return t.inner.second
    if isinstance(t, CaseT) and isinstance(t.scrutinee, InlT):
        return substitute(t.left_body, t.left_name, t.scrutinee.inner)
    if isinstance(t, CaseT) and isinstance(t.scrutinee, InrT):
        return substitute(t.right_body, t.right_name, t.scrutinee.inner)
    return None


def has_redex(t: Term) -> bool:
    if _reduce_root(t) is not None:
        return True
    if isinstance(t, PairT):
        return has_redex(t.first) or has_redex(t.second)
    if isinstance(t, (InlT, InrT, Fst, Snd, Phi)):
        return has_redex(t.inner)
    if isinstance(t, CaseT):
        return has_redex(t.scrutinee) or has_redex(t.left_body) or has_redex(t.right_body)
    return False


def term_size(t: Term) -> int:
    if isinstance(t, (Var, UnitT, Lit)):
        return 1
    if isinstance(t, PairT):
        return 1 + term_size(t.first) + term_size(t.second)
    if isinstance(t, (InlT, InrT, Fst, Snd, Phi)):
        return 1 + term_size(t.inner)
    return 1 + term_size(t.scrutinee) + term_size(t.left_body) + term_size(t.right_body)


def normalize_term(t: Term, step_limit: int | None = None) -> Term:
    """Rewrite projections of pairs and cases of injections to exhaustion.

    The optional step limit bounds the number of contractions; exceeding it
    raises RewriteLimit instead of looping.
    """
    steps = 0

    def spend():
        nonlocal steps
        steps += 1
        if step_limit is not None and steps > step_limit:
            raise RewriteLimit(f"no normal form within {step_limit} steps")

    def norm(t: Term) -> Term:
        if isinstance(t, (Var, UnitT, Lit)):
            return t
        if isinstance(t, PairT):
            t = PairT(norm(t.first), norm(t.second))
        elif isinstance(t, (InlT, InrT, Fst, Snd, Phi)):
            t = type(t)(norm(t.inner))
        elif isinstance(t, CaseT):
            t = CaseT(
                norm(t.scrutinee), t.left_name, norm(t.left_body), t.right_name, norm(t.right_body)
            )
        reduced = _reduce_root(t)
        if reduced is None:
            return t
        spend()
        return norm(reduced)

    return norm(t)


# ---------------------------------------------------------------------------
# Schema mappings

@dataclass(frozen=True)
class SchemaMapping:
    source: Schema
    target: Schema
    on_labels: dict[str, TypeExpr]
    on_terms: dict[str, Term]


def typecheck_mapping(m: SchemaMapping) -> ValidationReport:
    """Per-label diagnostics: every source label needs a target type and a
    term sending a witness of that type to a transported source value."""
    report = ValidationReport()
    for label in m.source.sorted_labels():
        if label not in m.on_labels:
            report.add(label, "", "no target type given")
            continue
        if label not in m.on_terms:
            report.add(label, "", "no term given")
            continue
        witness_type = m.on_labels[label]
        for name in sorted(labels_in(witness_type)):
            if name not in m.target.labels:
                report.add(label, "", f"target type references undeclared label {name!r}")
        try:
            expected = transport_type(m.on_labels, m.source.labels[label])
        except PreconditionError as err:
            report.add(label, "", str(err))
            continue
        try:
            check_term(m.on_terms[label], expected, {"x": witness_type}, m.target)
        except TermTypeError as err:
            report.add(label, "", str(err))
    return report


# ---------------------------------------------------------------------------
# Witness enumeration and evaluation

def enumerate_values(t: TypeExpr, graph: Graph) -> list[Value]:
    """All values of t over the graph, in a deterministic order.

    Unit contributes one value; a label contributes a reference per element,
    in canonical id order; sums list all left values then all right values;
    products pair left-major.  Primitive types are refused: their domains are
    not finite.
    """
    if isinstance(t, Prim):
        raise PreconditionError(f"cannot enumerate the primitive type {t.name}")
    if isinstance(t, Zero):
        return []
    if isinstance(t, One):
        return [Unit()]
    if isinstance(t, Lbl):
        return [Ref(e) for e in graph.ids_of(t.name)]
    if isinstance(t, Sum):
        return [Inl(v) for v in enumerate_values(t.left, graph)] + [
            Inr(v) for v in enumerate_values(t.right, graph)
        ]
    return [
        Pair(a, b)
        for a in enumerate_values(t.left, graph)
        for b in enumerate_values(t.right, graph)
    ]


def eval_term(t: Term, binding: Value, graph: Graph) -> Value:
    """Evaluate a closed-but-for-x term against a witness over a graph."""

    def go(t: Term, env: dict[str, Value]) -> Value:
        if isinstance(t, Var):
            if t.name not in env:
                raise PreconditionError(f"unbound variable {t.name!r}")
            return env[t.name]
        if isinstance(t, UnitT):
            return Unit()
        if isinstance(t, Lit):
            return PrimVal(t.prim, t.literal)
        if isinstance(t, PairT):
            return Pair(go(t.first, env), go(t.second, env))
        if isinstance(t, InlT):
            return Inl(go(t.inner, env))
        if isinstance(t, InrT):
            return Inr(go(t.inner, env))
        if isinstance(t, Fst):
            inner = go(t.inner, env)
            if not isinstance(inner, Pair):
                raise PreconditionError("fst of a non-pair value")
            return inner.first
        if isinstance(t, Snd):
            inner = go(t.inner, env)
            if not isinstance(inner, Pair):
                raise PreconditionError("snd of a non-pair value")
            return inner.second
        if isinstance(t, Phi):
            inner = go(t.inner, env)
            if not isinstance(inner, Ref):
                raise PreconditionError("phi of a non-reference value")
            if inner.element not in graph.elements:
                raise PreconditionError(
                    f"phi dereferences missing element {render_id(inner.element)}"
                )
            return graph.elements[inner.element].value
        if isinstance(t, CaseT):
            scrutinee = go(t.scrutinee, env)
            if isinstance(scrutinee, Inl):
                return go(t.left_body, {**env, t.left_name: scrutinee.inner})
            if isinstance(scrutinee, Inr):
                return go(t.right_body, {**env, t.right_name: scrutinee.inner})
            raise PreconditionError("case of a non-injection value")
        raise PreconditionError(f"cannot evaluate {t!r}")

    return go(t, {"x": binding})


# ---------------------------------------------------------------------------
# Migration

def _enumerable(t: TypeExpr) -> bool:
    if isinstance(t, Prim):
        return False
    if isinstance(t, (Sum, Prod)):
        return _enumerable(t.left) and _enumerable(t.right)
    return True


def delta_migrate(m: SchemaMapping, graph: Graph) -> Graph:
    """Pull a target graph back through a mapping, yielding a source graph.

    For each source label l and each witness w of its mapped type, the term
    for l runs with x bound to w; positions that the source type declares as
    label references are then reindexed onto the elements minted for those
    witnesses.
    """
    report = typecheck_mapping(m)
    if not report.ok:
        raise PreconditionError(f"mapping does not typecheck:\n{report}")
    if graph.schema != m.target:
        raise PreconditionError("graph is not on the mapping's target schema")
    data_report = validate_graph(graph)
    if not data_report.ok:
        raise PreconditionError(f"input graph is not valid:\n{data_report}")
    for label in m.source.sorted_labels():
        if not _enumerable(m.on_labels[label]):
            raise PreconditionError(
                f"mapped type of {label!r} is outside the enumerable fragment: "
                + render_type(m.on_labels[label])
            )

    witnesses = {
        label: enumerate_values(m.on_labels[label], graph)
        for label in m.source.sorted_labels()
    }
    minted = {
        label: {render_value(w) for w in values} for label, values in witnesses.items()
    }

    def reindex(v: Value, t: TypeExpr, path: tuple[str, ...]) -> Value:
        if isinstance(t, Lbl):
            if render_value(v) not in minted.get(t.name, set()):
                where = "".join("." + step for step in path) or "root"
                raise PreconditionError(
                    f"no migrated element of {t.name!r} for witness {render_value(v)} (at {where})"
                )
            return Ref(Enc(t.name, v))
        if isinstance(t, Prod):
            return Pair(
                reindex(v.first, t.left, path + ("fst",)),
                reindex(v.second, t.right, path + ("snd",)),
            )
        if isinstance(t, Sum):
            if isinstance(v, Inl):
                return Inl(reindex(v.inner, t.left, path + ("inl",)))
            return Inr(reindex(v.inner, t.right, path + ("inr",)))
        return v

    elements = {}
    for label in m.source.sorted_labels():
        term = m.on_terms[label]
        for w in witnesses[label]:
            raw = eval_term(term, w, graph)
            elements[Enc(label, w)] = Element(
                label, reindex(raw, m.source.labels[label], ())
            )
    return Graph(m.source, elements)
