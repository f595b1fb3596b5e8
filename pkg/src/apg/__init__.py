"""Algebraic property graphs.

Typed graphs whose elements carry values drawn from algebraic data types
(sums, products, primitives, and references to labeled elements), with a
schema assigning a type to every label and a conformance law tying the two
together.  On top of the core model: categorical constructions (products,
coproducts, equalizers, coequalizers, pushout merges), key-based integration,
schema-mapping migration, a shape taxonomy for labels, and bridges to
N-Triples, relational tables, and key-value pairs.
"""

from .adt import (
    Atom,
    Class,
    ElementId,
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
    TypeExpr,
    Unit,
    Value,
    Zero,
    check_value,
    label_free,
    parse_id,
    parse_type,
    render_id,
    render_type,
    render_value,
    transport_type,
    transport_value,
)
from .bridges import (
    TableSet,
    export_kv,
    export_rdf,
    export_relational,
    import_relational,
    read_tableset,
    write_tableset,
)
from .catops import (
    ConstructionResult,
    case_analysis,
    coequalizer,
    coproduct,
    disjoint_union,
    equalizer,
    initial_graph,
    pair,
    product,
    pushout,
    terminal_graph,
    unique_morphism,
)
from .errors import ApgError, ParseError, PreconditionError, ValidationFailure
from .files import (
    read_graph,
    read_mapping,
    read_morphism,
    write_graph,
    write_mapping,
    write_morphism,
)
from .graph import (
    UNLABELED,
    Element,
    Finding,
    Graph,
    Schema,
    ValidationReport,
    check_primary_key,
    check_unique_property,
    validate_graph,
    validate_schema,
)
from .integrate import match_by_key, merge_by_key
from .migrate import (
    SchemaMapping,
    Term,
    delta_migrate,
    enumerate_values,
    eval_term,
    normalize_term,
    parse_term,
    render_term,
    typecheck_mapping,
)
from .morphism import (
    Morphism,
    check_morphism,
    check_sigma_preserving,
    check_upsilon_natural,
    compose,
    identity,
)
from .taxonomy import classify_graph, classify_label, describe

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
