"""Command-line front end.

One verb per capability: validate, classify, op (the categorical
constructions), merge, migrate, export, import, fmt.  File arguments accept
"-" for standard input or output.  Exit status is 0 on success, 1 when data
fails validation, 2 for usage or parse problems; diagnostics go to stderr and
data to stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import bridges, catops, files, integrate, migrate, taxonomy
from .errors import ApgError, ParseError, ValidationFailure
from .graph import Graph, validate_graph


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as err:
        raise ParseError(f"cannot read {path}: {err.strerror}") from None


def _write_text(path: str, text: str):
    if path == "-" or path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _read_graph(path: str, validate: bool = True) -> Graph:
    return files.read_graph(_read_text(path), validate=validate)


def _strict_mode() -> bool:
    return os.environ.get("APG_STRICT_TAXONOMY", "1") != "0"


def _emit_graph(graph: Graph, out: str):
    _write_text(out, files.write_graph(graph))


# ---------------------------------------------------------------------------
# Subcommand bodies

def _cmd_validate(args) -> int:
    graph = files.read_graph(_read_text(args.graph), validate=False)
    report = validate_graph(graph)
    if not report.ok:
        print(report, file=sys.stderr)
        return 1
    print("ok")
    return 0


def _cmd_classify(args) -> int:
    graph = _read_graph(args.graph)
    kinds = taxonomy.classify_graph(graph.schema, strict=_strict_mode())
    lines = []
    for label in graph.schema.sorted_labels():
        if args.label is not None and label != args.label:
            continue
        lines.append(f"{label}\t{taxonomy.describe(kinds[label])}")
    if args.label is not None and not lines:
        print(f"no label {args.label!r} in the schema", file=sys.stderr)
        return 1
    _write_text(args.out, "".join(line + "\n" for line in lines))
    return 0


def _cmd_op(args) -> int:
    if args.operation in ("product", "coproduct"):
        g1 = _read_graph(args.inputs[0] if args.inputs else "-")
        if len(args.inputs) != 2:
            raise ParseError(f"op {args.operation} takes two graph files")
        g2 = _read_graph(args.inputs[1])
        run = catops.product if args.operation == "product" else catops.coproduct
        result = run(g1, g2)
    elif args.operation in ("equalizer", "coequalizer"):
        if len(args.inputs) != 4:
            raise ParseError(f"op {args.operation} takes SOURCE TARGET H J")
        source = _read_graph(args.inputs[0])
        target = _read_graph(args.inputs[1])
        h = files.read_morphism(_read_text(args.inputs[2]), source, target)
        j = files.read_morphism(_read_text(args.inputs[3]), source, target)
        run = catops.equalizer if args.operation == "equalizer" else catops.coequalizer
        result = run(h, j)
    else:
        if len(args.inputs) != 5:
            raise ParseError("op pushout takes APEX LEFT RIGHT F G")
        apex = _read_graph(args.inputs[0])
        left = _read_graph(args.inputs[1])
        right = _read_graph(args.inputs[2])
        f = files.read_morphism(_read_text(args.inputs[3]), apex, left)
        g = files.read_morphism(_read_text(args.inputs[4]), apex, right)
        result = catops.pushout(f, g)
    _emit_graph(result.graph, args.out)
    return 0


def _cmd_merge(args) -> int:
    left = args.left if args.left is not None else (args.graphs[0] if args.graphs else None)
    right = args.right if args.right is not None else (args.graphs[-1] if len(args.graphs) > 1 else None)
    if args.graphs and (args.left or args.right):
        raise ParseError("give the graphs either positionally or by flag, not both")
    if len(args.graphs) > 2:
        raise ParseError("merge takes exactly two graphs")
    if left is None or right is None:
        raise ParseError("merge needs two graphs (positional, or --left and --right)")
    g1 = _read_graph(left)
    g2 = _read_graph(right)
    merged = integrate.merge_by_key(g1, g2, key=args.key)
    _emit_graph(merged, args.out)
    return 0


def _cmd_migrate(args) -> int:
    mapping = files.read_mapping(_read_text(args.mapping))
    data = _read_graph(args.data)
    _emit_graph(migrate.delta_migrate(mapping, data), args.out)
    return 0


def _cmd_export(args) -> int:
    graph = _read_graph(args.graph)
    if args.format == "rdf":
        _write_text(args.out, bridges.export_rdf(graph))
    elif args.format == "relational":
        if args.out in (None, "-"):
            raise ParseError("export relational writes a directory; give --out DIR")
        bridges.write_tableset(bridges.export_relational(graph), args.out)
    else:
        if args.label is None:
            raise ParseError("export kv needs --label")
        pairs = bridges.export_kv(graph, args.label)
        text = "".join(
            json.dumps(
                {"key": files.value_to_json(k), "value": files.value_to_json(v)},
                sort_keys=True,
                ensure_ascii=False,
            )
            + "\n"
            for k, v in pairs
        )
        _write_text(args.out, text)
    return 0


def _cmd_import(args) -> int:
    schema = _read_graph(args.schema).schema
    tables = bridges.read_tableset(args.directory)
    _emit_graph(bridges.import_relational(tables, schema), args.out)
    return 0


def _cmd_fmt(args) -> int:
    graph = files.read_graph(_read_text(args.graph), validate=not args.no_validate)
    _emit_graph(graph, args.out)
    return 0


# ---------------------------------------------------------------------------
# Argument wiring

def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="apg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def out_flag(p):
        p.add_argument("-o", "--out", default="-", help="output file, - for stdout")

    p = sub.add_parser("validate", help="check a graph against its schema")
    p.add_argument("graph")
    p.set_defaults(run=_cmd_validate)

    p = sub.add_parser("classify", help="classify each label's shape")
    p.add_argument("graph")
    p.add_argument("--label", help="restrict to one label")
    out_flag(p)
    p.set_defaults(run=_cmd_classify)

    p = sub.add_parser("op", help="categorical constructions")
    p.add_argument("operation",
                   choices=["product", "coproduct", "equalizer", "coequalizer", "pushout"])
    p.add_argument("inputs", nargs="*",
                   help="graphs, then morphism files where the operation needs them")
    out_flag(p)
    p.set_defaults(run=_cmd_op)

    p = sub.add_parser("merge", help="key-based merge of two graphs on one schema")
    p.add_argument("graphs", nargs="*")
    p.add_argument("--left")
    p.add_argument("--right")
    p.add_argument("--key", help="key path such as fst or fst.snd (whole value when absent)")
    out_flag(p)
    p.set_defaults(run=_cmd_merge)

    p = sub.add_parser("migrate", help="migrate data backward along a schema mapping")
    p.add_argument("mapping")
    p.add_argument("data", nargs="?", default="-")
    out_flag(p)
    p.set_defaults(run=_cmd_migrate)

    p = sub.add_parser("export", help="views in other data models")
    p.add_argument("format", choices=["rdf", "relational", "kv"])
    p.add_argument("graph")
    p.add_argument("--label", help="label for the key-value view")
    out_flag(p)
    p.set_defaults(run=_cmd_export)

    p = sub.add_parser("import", help="rebuild a graph from exported tables")
    p.add_argument("format", choices=["relational"])
    p.add_argument("directory")
    p.add_argument("--schema", required=True, help="graph or schema file supplying the labels")
    out_flag(p)
    p.set_defaults(run=_cmd_import)

    p = sub.add_parser("fmt", help="canonicalize a graph document")
    p.add_argument("graph")
    p.add_argument("--no-validate", action="store_true")
    out_flag(p)
    p.set_defaults(run=_cmd_fmt)

    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.run(args)
    except ValidationFailure as err:
        print(err.report, file=sys.stderr)
        return 1
    except ParseError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ApgError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
