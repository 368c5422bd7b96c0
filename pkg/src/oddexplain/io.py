"""File formats, dataset ingestion and text rendering.

Classifiers travel as JSON documents with probabilities rendered as
decimal text at 12 significant digits; documents produced by the dump
functions are canonical and round-trip byte-identically.  Diagrams
travel as a line-oriented text format with the variable table, mode and
root in the header and one line per node, children before parents.
"""

import csv
import json
import math

from .classifiers import LatentTreeClassifier, NaiveBayesClassifier, TreeNode
from .diagram import COMPLETE, REDUCED, DecisionDiagram, Manager, Variable
from .errors import DomainError, ModelError, ParseError, StructureError

_ODD_MAGIC = "oddexplain-odd 1"


# -- canonical JSON rendering -------------------------------------------


def _format_float(value):
    if value != value or value in (math.inf, -math.inf):
        raise ModelError(f"cannot serialize non-finite probability {value!r}")
    text = f"{value:.12g}"
    # keep integers readable as JSON numbers but unambiguous as floats
    if "." not in text and "e" not in text and "E" not in text:
        text += ".0"
    return text


def _render_json(value, indent=0):
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        lines = []
        for key, item in value.items():
            lines.append(f'{pad}  {json.dumps(key)}: {_render_json(item, indent + 1)}')
        return "{\n" + ",\n".join(lines) + f"\n{pad}}}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        rendered = [_render_json(item, indent + 1) for item in value]
        if all(not isinstance(item, (dict, list, tuple)) for item in value):
            return "[" + ", ".join(rendered) + "]"
        lines = [f"{pad}  {text}" for text in rendered]
        return "[\n" + ",\n".join(lines) + f"\n{pad}]"
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, float):
        return _format_float(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return json.dumps(value)
    raise ModelError(f"cannot serialize {type(value).__name__}")


# -- classifier files ----------------------------------------------------


def classifier_to_document(classifier):
    if isinstance(classifier, NaiveBayesClassifier):
        features = []
        for i, name in enumerate(classifier.feature_names):
            features.append(
                {
                    "name": name,
                    "values": list(classifier.feature_values[i]),
                    "given_positive": [float(p) for p in classifier.cpt_positive[i]],
                    "given_negative": [float(p) for p in classifier.cpt_negative[i]],
                }
            )
        return {
            "kind": "naive_bayes",
            "threshold": float(classifier.threshold),
            "prior": float(classifier.prior),
            "features": features,
        }
    if isinstance(classifier, LatentTreeClassifier):
        nodes = []
        for i, node in enumerate(classifier.nodes):
            entry = {
                "name": node.name,
                "values": list(node.values),
                "parent": node.parent,
            }
            if i == 0:
                entry["prior"] = [float(p) for p in node.cpt[0]]
            else:
                entry["cpt"] = [[float(p) for p in row] for row in node.cpt]
            nodes.append(entry)
        return {
            "kind": "latent_tree",
            "threshold": float(classifier.threshold),
            "nodes": nodes,
        }
    raise ModelError(f"cannot serialize {type(classifier).__name__}")


def dumps_classifier(classifier):
    """Canonical text form of a classifier."""
    return _render_json(classifier_to_document(classifier)) + "\n"


def dump_classifier(classifier, path):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps_classifier(classifier))


def _take(document, key, kinds, what, path):
    if key not in document:
        raise ParseError(f"{what}: missing key {key!r}", path=path)
    value = document[key]
    if not isinstance(value, kinds):
        raise ParseError(f"{what}: key {key!r} has the wrong type", path=path)
    return value


def _probability_row(raw, what, path):
    if not isinstance(raw, list) or not all(
        isinstance(p, (int, float)) and not isinstance(p, bool) for p in raw
    ):
        raise ParseError(f"{what}: expected a list of probabilities", path=path)
    return tuple(float(p) for p in raw)


def classifier_from_document(document, path=None):
    kind = _take(document, "kind", str, "classifier", path)
    if kind == "naive_bayes":
        threshold = float(_take(document, "threshold", (int, float), "classifier", path))
        prior = float(_take(document, "prior", (int, float), "classifier", path))
        raw_features = _take(document, "features", list, "classifier", path)
        names, values, cpt_pos, cpt_neg = [], [], [], []
        for raw in raw_features:
            if not isinstance(raw, dict):
                raise ParseError("feature entries must be objects", path=path)
            name = _take(raw, "name", str, "feature", path)
            names.append(name)
            if "fp" in raw or "fn" in raw:
                # binary shorthand: error rates instead of full rows
                fp = float(_take(raw, "fp", (int, float), f"feature {name!r}", path))
                fn = float(_take(raw, "fn", (int, float), f"feature {name!r}", path))
                values.append(("-", "+"))
                cpt_pos.append((fn, 1.0 - fn))
                cpt_neg.append((1.0 - fp, fp))
                continue
            labels = _take(raw, "values", list, f"feature {name!r}", path)
            values.append(tuple(str(v) for v in labels))
            cpt_pos.append(
                _probability_row(
                    _take(raw, "given_positive", list, f"feature {name!r}", path),
                    f"feature {name!r}",
                    path,
                )
            )
            cpt_neg.append(
                _probability_row(
                    _take(raw, "given_negative", list, f"feature {name!r}", path),
                    f"feature {name!r}",
                    path,
                )
            )
        return NaiveBayesClassifier(
            feature_names=tuple(names),
            feature_values=tuple(values),
            prior=prior,
            threshold=threshold,
            cpt_positive=tuple(cpt_pos),
            cpt_negative=tuple(cpt_neg),
        )
    if kind == "latent_tree":
        threshold = float(_take(document, "threshold", (int, float), "classifier", path))
        raw_nodes = _take(document, "nodes", list, "classifier", path)
        nodes = []
        for i, raw in enumerate(raw_nodes):
            if not isinstance(raw, dict):
                raise ParseError("node entries must be objects", path=path)
            name = _take(raw, "name", str, "node", path)
            labels = _take(raw, "values", list, f"node {name!r}", path)
            parent = raw.get("parent")
            if parent is not None and not isinstance(parent, int):
                raise ParseError(f"node {name!r}: parent must be an index", path=path)
            if i == 0:
                prior = _probability_row(
                    _take(raw, "prior", list, f"node {name!r}", path),
                    f"node {name!r}",
                    path,
                )
                cpt = (prior,)
            else:
                raw_cpt = _take(raw, "cpt", list, f"node {name!r}", path)
                cpt = tuple(
                    _probability_row(row, f"node {name!r}", path) for row in raw_cpt
                )
            nodes.append(
                TreeNode(
                    name=name,
                    values=tuple(str(v) for v in labels),
                    parent=parent,
                    cpt=cpt,
                )
            )
        return LatentTreeClassifier(nodes=tuple(nodes), threshold=threshold)
    raise ParseError(f"unknown classifier kind {kind!r}", path=path)


def loads_classifier(text, path=None):
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path=path, line=exc.lineno, column=exc.colno) from exc
    if not isinstance(document, dict):
        raise ParseError("classifier file must hold a JSON object", path=path)
    return classifier_from_document(document, path=path)


def load_classifier(path):
    """Load a classifier file; model invariants are enforced on load."""
    with open(path, "r", encoding="utf-8") as handle:
        return loads_classifier(handle.read(), path=path)


# -- diagram files ---------------------------------------------------------


def _check_token(text, what):
    if not text or any(ch.isspace() for ch in text):
        raise ModelError(f"{what} {text!r} must be a non-empty whitespace-free token")
    return text


def dumps_odd(diagram):
    """Canonical text form of a diagram, children before parents."""
    manager = diagram.manager
    lines = [_ODD_MAGIC, f"mode {manager.mode}", f"vars {manager.var_count}"]
    for var in manager.variables:
        _check_token(var.name, "variable name")
        for label in var.values:
            _check_token(label, "value label")
        lines.append(f"var {var.name} {' '.join(var.values)}")
    order = []
    seen = set()

    def visit(u):
        if u in seen:
            return
        seen.add(u)
        if not manager.is_sink(u):
            for child in manager.children(u):
                visit(child)
        order.append(u)

    visit(diagram.root)
    local = {u: i for i, u in enumerate(order)}
    lines.append(f"root {local[diagram.root]}")
    lines.append(f"nodes {len(order)}")
    for u in order:
        if manager.is_sink(u):
            lines.append(f"{local[u]} {'T' if u else 'F'}")
        else:
            kids = " ".join(str(local[c]) for c in manager.children(u))
            lines.append(f"{local[u]} {manager.level(u)} {kids}")
    return "\n".join(lines) + "\n"


def serialize_odd(diagram, path):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps_odd(diagram))


def loads_odd(text, manager=None, path=None):
    lines = text.splitlines()

    def fail(message, index):
        raise ParseError(message, path=path, line=index + 1)

    def number(token, index):
        try:
            return int(token)
        except ValueError:
            fail(f"expected an integer, got {token!r}", index)

    if not lines or lines[0].strip() != _ODD_MAGIC:
        fail(f"expected header {_ODD_MAGIC!r}", 0)
    cursor = 1

    def expect(prefix):
        nonlocal cursor
        if cursor >= len(lines):
            fail(f"unexpected end of file, expected {prefix!r}", cursor)
        parts = lines[cursor].split()
        if not parts or parts[0] != prefix:
            fail(f"expected a {prefix!r} line", cursor)
        cursor += 1
        return parts[1:]

    (mode,) = expect("mode")
    if mode not in (REDUCED, COMPLETE):
        fail(f"unknown mode {mode!r}", cursor - 1)
    (count,) = expect("vars")
    variables = []
    for _ in range(number(count, cursor - 1)):
        parts = expect("var")
        if len(parts) < 3:
            fail("a variable needs a name and at least two values", cursor - 1)
        variables.append(Variable(parts[0], tuple(parts[1:])))
    variables = tuple(variables)
    if manager is None:
        manager = Manager(variables, mode=mode)
    else:
        if manager.variables != variables or manager.mode != mode:
            fail("file header disagrees with the supplied manager", 0)
    (root_text,) = expect("root")
    (node_count,) = expect("nodes")
    ids = {}
    for _ in range(number(node_count, cursor - 1)):
        if cursor >= len(lines):
            fail("fewer node lines than announced", cursor)
        parts = lines[cursor].split()
        index = cursor
        cursor += 1
        if len(parts) < 2:
            fail("malformed node line", index)
        local = number(parts[0], index)
        if local in ids:
            fail(f"duplicate node id {local}", index)
        if parts[1] in ("T", "F"):
            ids[local] = 1 if parts[1] == "T" else 0
            continue
        var = number(parts[1], index)
        kids = []
        for token in parts[2:]:
            child = number(token, index)
            if child not in ids:
                fail(f"dangling child reference {child}", index)
            kids.append(ids[child])
        try:
            ids[local] = manager.intern_node(var, kids)
        except (StructureError, DomainError) as exc:
            fail(str(exc), index)
    root_local = number(root_text, 0)
    if root_local not in ids:
        fail(f"root {root_local} is not a declared node", 0)
    return DecisionDiagram(manager, ids[root_local])


def deserialize_odd(path, manager=None):
    """Load a diagram file, interning into ``manager`` when given."""
    with open(path, "r", encoding="utf-8") as handle:
        return loads_odd(handle.read(), manager=manager, path=path)


def to_dot(diagram, name="decision_function"):
    """Graphviz rendering with value-labelled edges and yes/no sinks."""
    manager = diagram.manager
    lines = [f"digraph {json.dumps(name)} {{", "  rankdir=TB;"]
    seen = set()
    stack = [diagram.root]
    reachable = []
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        reachable.append(u)
        if not manager.is_sink(u):
            stack.extend(manager.children(u))
    for u in sorted(reachable):
        if manager.is_sink(u):
            label = "yes" if u else "no"
            lines.append(f'  n{u} [shape=box, label="{label}"];')
        else:
            var = manager.variables[manager.level(u)]
            lines.append(f'  n{u} [shape=ellipse, label="{var.name}"];')
    for u in sorted(reachable):
        if manager.is_sink(u):
            continue
        var = manager.variables[manager.level(u)]
        for value, child in enumerate(manager.children(u)):
            lines.append(f'  n{u} -> n{child} [label="{var.values[value]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- instance text ---------------------------------------------------------


def parse_instance(variables, text):
    """Parse whitespace-separated value labels into value indices.

    Binary variables additionally accept ``+``/``-`` and explicit value
    indices are always accepted.
    """
    tokens = text.split()
    if len(tokens) != len(variables):
        raise DomainError(
            f"expected {len(variables)} values, got {len(tokens)}"
        )
    out = []
    for var, token in zip(variables, tokens):
        if token in var.values:
            out.append(var.values.index(token))
            continue
        if var.arity == 2 and token in ("+", "-"):
            out.append(1 if token == "+" else 0)
            continue
        if token.isdigit() and int(token) < var.arity:
            out.append(int(token))
            continue
        raise DomainError(f"value {token!r} is not valid for {var.name!r}")
    return tuple(out)


def render_instance(variables, x):
    return " ".join(var.values[v] for var, v in zip(variables, x))


def render_partial(variables, partial, star="*"):
    tokens = []
    for var_index, var in enumerate(variables):
        if var_index in partial:
            tokens.append(var.values[partial[var_index]])
        else:
            tokens.append(star)
    return " ".join(tokens)


# -- labelled CSV ingestion --------------------------------------------------


DEFAULT_VALUE_MAP = {
    "y": 1,
    "yes": 1,
    "1": 1,
    "+": 1,
    "true": 1,
    "n": 0,
    "no": 0,
    "0": 0,
    "-": 0,
    "false": 0,
}


def read_labeled_csv(
    path,
    has_header=True,
    label_column=0,
    value_map=None,
    missing="?",
    missing_as_value=False,
):
    """Read a labelled dataset for training.

    Returns (feature_names, rows, labels).  Cell values go through
    ``value_map`` (defaults cover y/n, 0/1, +/- conventions); the
    ``missing`` token becomes None, or a third value index when
    ``missing_as_value`` is set.
    """
    mapping = DEFAULT_VALUE_MAP if value_map is None else value_map
    rows = []
    labels = []
    names = None
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        for line_number, record in enumerate(reader, start=1):
            if not record:
                continue
            if names is None and has_header:
                names = [
                    cell for i, cell in enumerate(record) if i != label_column
                ]
                continue
            if label_column >= len(record):
                raise ParseError("missing label column", path=path, line=line_number)
            raw_label = record[label_column].strip().lower()
            if raw_label not in mapping:
                raise ParseError(
                    f"unknown label {record[label_column]!r}",
                    path=path,
                    line=line_number,
                )
            labels.append(mapping[raw_label])
            row = []
            for i, cell in enumerate(record):
                if i == label_column:
                    continue
                token = cell.strip().lower()
                if token == missing:
                    row.append(2 if missing_as_value else None)
                elif token in mapping:
                    row.append(mapping[token])
                else:
                    raise ParseError(
                        f"unknown value {cell!r}", path=path, line=line_number
                    )
            rows.append(tuple(row))
    if not rows:
        raise ParseError("no data rows", path=path)
    width = len(rows[0])
    if names is None:
        names = [f"x{i}" for i in range(width)]
    if len(names) != width or any(len(r) != width for r in rows):
        raise ParseError("inconsistent row widths", path=path)
    return tuple(names), rows, labels
