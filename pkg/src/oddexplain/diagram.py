"""Hash-consed ordered decision diagrams over multi-valued variables.

A manager owns an ordered variable table and a node store.  Nodes are
interned: one entry per distinct (variable, children) shape, so diagrams
in one manager are canonical and function equality is root identity.

Managers come in two modes:

``reduced``
    A node whose children are all identical is collapsed to that child.
    Variables missing from a path are unconstrained (every value).  This
    is the classic canonical form used for decision functions.

``complete``
    Used for implicant sets over don't-care-extended domains, where a
    node with identical children still carries meaning.  Every path to
    the 1-sink tests every variable, so models decode unambiguously.
    A node whose children are all the 0-sink is collapsed to the 0-sink,
    which keeps equal model sets structurally identical.

Node ids 0 and 1 are the 0-sink and 1-sink.  All query operations use
uniform "skipped variables are free" semantics; on complete diagrams the
two readings coincide because 1-paths never skip.

A manager is single-writer: interning and apply mutate shared tables and
must not run concurrently on one manager.  Query memos are call-local.
"""

import itertools
from dataclasses import dataclass

from .errors import ArityError, DomainError, ManagerError, StructureError

REDUCED = "reduced"
COMPLETE = "complete"

SINK0 = 0
SINK1 = 1

_INF = float("inf")


@dataclass(frozen=True)
class Variable:
    """A named variable with at least two labelled values."""

    name: str
    values: tuple[str, ...] = ("-", "+")

    def __post_init__(self):
        if len(self.values) < 2:
            raise DomainError(f"variable {self.name!r} needs >= 2 values")
        if len(set(self.values)) != len(self.values):
            raise DomainError(f"variable {self.name!r} has duplicate value labels")

    @property
    def arity(self):
        return len(self.values)


def binary_variables(names):
    """Convenience table of -/+ valued variables."""
    return tuple(Variable(str(name)) for name in names)


class Manager:
    """Node store, unique table and apply cache for one variable order."""

    def __init__(self, variables, mode=REDUCED):
        variables = tuple(variables)
        if not variables:
            raise StructureError("a manager needs at least one variable")
        if len({v.name for v in variables}) != len(variables):
            raise StructureError("duplicate variable names")
        if mode not in (REDUCED, COMPLETE):
            raise ValueError(f"unknown mode {mode!r}")
        self.variables = variables
        self.mode = mode
        n = len(variables)
        # ids 0/1 are the sinks; their level n sorts below every variable.
        self._level = [n, n]
        self._kids = [None, None]
        self._unique = {}
        self._apply_cache = {}
        self._complement_cache = {}

    # -- basic structure ------------------------------------------------

    def __len__(self):
        return len(self._level)

    @property
    def var_count(self):
        return len(self.variables)

    def arity(self, var):
        return self.variables[var].arity

    def level(self, u):
        return self._level[u]

    def children(self, u):
        return self._kids[u]

    def is_sink(self, u):
        return u < 2

    def constant(self, bit):
        return DecisionDiagram(self, SINK1 if bit else SINK0)

    def intern_node(self, var, children):
        """Return the canonical node for ``var`` with the given children.

        Applies the manager's reduction rule, so the returned id may be
        one of the children (reduced mode) or a sink (complete mode).
        """
        if not 0 <= var < self.var_count:
            raise DomainError(f"no variable with index {var}")
        children = tuple(children)
        if len(children) != self.arity(var):
            raise ArityError(
                f"variable {self.variables[var].name!r} takes "
                f"{self.arity(var)} children, got {len(children)}"
            )
        for c in children:
            if not 0 <= c < len(self._level):
                raise StructureError(f"unknown child id {c}")
            if self._level[c] <= var:
                raise StructureError(
                    f"child at level {self._level[c]} under variable index {var} "
                    "violates the diagram order"
                )
        first = children[0]
        if self.mode == REDUCED:
            if all(c == first for c in children):
                return first
        else:
            if all(c == SINK0 for c in children):
                return SINK0
        key = (var, children)
        found = self._unique.get(key)
        if found is not None:
            return found
        uid = len(self._level)
        self._level.append(var)
        self._kids.append(children)
        self._unique[key] = uid
        return uid

    def literal(self, var, value):
        """Diagram of the single constraint ``var = value``."""
        self._check_value(var, value)
        children = [SINK0] * self.arity(var)
        children[value] = SINK1
        return DecisionDiagram(self, self.intern_node(var, children))

    def _check_value(self, var, value):
        if not 0 <= var < self.var_count:
            raise DomainError(f"no variable with index {var}")
        if not isinstance(value, int) or not 0 <= value < self.arity(var):
            raise DomainError(
                f"value {value!r} out of range for {self.variables[var].name!r}"
            )

    def _check_instance(self, x):
        if len(x) != self.var_count:
            raise DomainError(
                f"instance has {len(x)} entries, expected {self.var_count}"
            )
        for var, value in enumerate(x):
            self._check_value(var, value)

    def _check_same(self, other):
        if other is not self:
            raise ManagerError("operands belong to different managers")

    # -- core operations on node ids -------------------------------------

    def _evaluate(self, u, x):
        while u > 1:
            u = self._kids[u][x[self._level[u]]]
        return u

    def _complement(self, u):
        cache = self._complement_cache
        found = cache.get(u)
        if found is not None:
            return found
        if u < 2:
            result = 1 - u
        else:
            kids = [self._complement(c) for c in self._kids[u]]
            result = self.intern_node(self._level[u], kids)
        cache[u] = result
        return result

    def _apply(self, op, u, v):
        term = _TERMINAL[op](u, v)
        if term is not None:
            return term
        if op != "diff" and u > v:
            u, v = v, u
        key = (op, u, v)
        cache = self._apply_cache
        found = cache.get(key)
        if found is not None:
            return found
        lu, lv = self._level[u], self._level[v]
        top = min(lu, lv)
        arity = self.arity(top)
        cu = self._kids[u] if lu == top else (u,) * arity
        cv = self._kids[v] if lv == top else (v,) * arity
        result = self.intern_node(
            top, [self._apply(op, a, b) for a, b in zip(cu, cv)]
        )
        cache[key] = result
        return result

    def _restrict(self, u, var, value, memo):
        if u < 2 or self._level[u] > var:
            return u
        found = memo.get(u)
        if found is not None:
            return found
        if self._level[u] == var:
            result = self._kids[u][value]
        else:
            kids = [self._restrict(c, var, value, memo) for c in self._kids[u]]
            result = self.intern_node(self._level[u], kids)
        memo[u] = result
        return result

    def _conjoin_allowed(self, u, allowed):
        """Restrict each constrained variable to its allowed value set.

        One pass over the diagram; constrained variables missing from a
        1-path get a restriction node inserted, which is what keeps the
        cost linear in the diagram size plus the inserted chain nodes.
        """
        n = self.var_count
        memo = {}

        def wrap(w, lo, hi):
            # Insert restriction nodes for constrained levels in [lo, hi).
            if w == SINK0:
                return SINK0
            for lvl in reversed(range(lo, hi)):
                keep = allowed.get(lvl)
                if keep is None:
                    continue
                kids = [w if val in keep else SINK0 for val in range(self.arity(lvl))]
                w = self.intern_node(lvl, kids)
            return w

        def rec(w):
            if w < 2:
                return w
            found = memo.get(w)
            if found is not None:
                return found
            lvl = self._level[w]
            keep = allowed.get(lvl)
            kids = []
            for val, child in enumerate(self._kids[w]):
                if keep is not None and val not in keep:
                    kids.append(SINK0)
                    continue
                kids.append(wrap(rec(child), lvl + 1, self._level[child]))
            result = self.intern_node(lvl, kids)
            memo[w] = result
            return result

        return wrap(rec(u), 0, self._level[u])

    def _gap_products(self):
        # prefix[l] = number of assignments of variables below level l
        prefix = [1]
        for v in self.variables:
            prefix.append(prefix[-1] * v.arity)
        return prefix

    def _model_count(self, u):
        prefix = self._gap_products()
        memo = {SINK0: 0, SINK1: 1}

        def count(w):
            found = memo.get(w)
            if found is not None:
                return found
            lvl = self._level[w]
            total = 0
            for child in self._kids[w]:
                gap = prefix[self._level[child]] // prefix[lvl + 1]
                total += gap * count(child)
            memo[w] = total
            return total

        return count(u) * prefix[self._level[u]]

    def _models(self, u):
        n = self.var_count
        buf = [0] * n

        def rec(w, lvl):
            if w == SINK0:
                return
            if lvl == n:
                yield tuple(buf)
                return
            if self._level[w] > lvl:
                for val in range(self.arity(lvl)):
                    buf[lvl] = val
                    yield from rec(w, lvl + 1)
                return
            for val, child in enumerate(self._kids[w]):
                if child == SINK0:
                    continue
                buf[lvl] = val
                yield from rec(child, lvl + 1)

        return rec(u, 0)

    def _size(self, u):
        seen = {u}
        stack = [u]
        while stack:
            w = stack.pop()
            if w < 2:
                continue
            for child in self._kids[w]:
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        return len(seen)

    # -- cost machinery ---------------------------------------------------

    def _check_costs(self, costs):
        costs = [tuple(row) for row in costs]
        if len(costs) != self.var_count:
            raise DomainError("one cost row per variable is required")
        for var, row in enumerate(costs):
            if len(row) != self.arity(var):
                raise DomainError(
                    f"cost row for {self.variables[var].name!r} has wrong length"
                )
            if any(c < 0 for c in row):
                raise DomainError("costs must be nonnegative")
        return costs

    def _cardinality_minimize(self, u, costs):
        """Keep exactly the minimum-cost models of ``u``.

        Two passes: a bottom-up minimum-cost labelling, then a rebuild
        that prunes edges off minimum-cost paths.  Variables skipped on
        a path are pinned to their cheapest values by inserted nodes.
        """
        costs = self._check_costs(costs)
        level_min = [min(row) for row in costs]
        gap_cost = [0]
        for m in level_min:
            gap_cost.append(gap_cost[-1] + m)
        cheapest = [
            frozenset(v for v, c in enumerate(row) if c == level_min[var])
            for var, row in enumerate(costs)
        ]

        best = {SINK0: _INF, SINK1: 0}

        def label(w):
            found = best.get(w)
            if found is not None:
                return found
            lvl = self._level[w]
            value = min(
                costs[lvl][val]
                + gap_cost[self._level[child]]
                - gap_cost[lvl + 1]
                + label(child)
                for val, child in enumerate(self._kids[w])
            )
            best[w] = value
            return value

        def wrap(w, lo, hi):
            for lvl in reversed(range(lo, hi)):
                kids = [
                    w if val in cheapest[lvl] else SINK0
                    for val in range(self.arity(lvl))
                ]
                w = self.intern_node(lvl, kids)
            return w

        rebuilt = {}

        def rebuild(w):
            if w < 2:
                return w
            found = rebuilt.get(w)
            if found is not None:
                return found
            lvl = self._level[w]
            target = best[w]
            kids = []
            for val, child in enumerate(self._kids[w]):
                edge = (
                    costs[lvl][val]
                    + gap_cost[self._level[child]]
                    - gap_cost[lvl + 1]
                    + label(child)
                )
                if edge == target:
                    kids.append(wrap(rebuild(child), lvl + 1, self._level[child]))
                else:
                    kids.append(SINK0)
            result = self.intern_node(lvl, kids)
            rebuilt[w] = result
            return result

        if label(u) == _INF:
            return SINK0
        return wrap(rebuild(u), 0, self._level[u])

    def _min_cost(self, u, costs):
        costs = self._check_costs(costs)
        level_min = [min(row) for row in costs]
        gap_cost = [0]
        for m in level_min:
            gap_cost.append(gap_cost[-1] + m)
        best = {SINK0: _INF, SINK1: 0}

        def label(w):
            found = best.get(w)
            if found is not None:
                return found
            lvl = self._level[w]
            value = min(
                costs[lvl][val]
                + gap_cost[self._level[child]]
                - gap_cost[lvl + 1]
                + label(child)
                for val, child in enumerate(self._kids[w])
            )
            best[w] = value
            return value

        total = label(u) + gap_cost[self._level[u]]
        return None if total == _INF else total

    def _cost_histogram(self, u, costs):
        costs = self._check_costs(costs)

        def merge(acc, extra, shift=0):
            out = {}
            for a, ca in acc.items():
                for b, cb in extra.items():
                    key = a + b + shift
                    out[key] = out.get(key, 0) + ca * cb
            return out

        level_hist = []
        for row in costs:
            h = {}
            for c in row:
                h[c] = h.get(c, 0) + 1
            level_hist.append(h)

        def gaps(lo, hi):
            acc = {0: 1}
            for lvl in range(lo, hi):
                acc = merge(acc, level_hist[lvl])
            return acc

        memo = {SINK0: {}, SINK1: {0: 1}}

        def hist(w):
            found = memo.get(w)
            if found is not None:
                return found
            lvl = self._level[w]
            acc = {}
            for val, child in enumerate(self._kids[w]):
                part = merge(
                    hist(child),
                    gaps(lvl + 1, self._level[child]),
                    costs[lvl][val],
                )
                for k, c in part.items():
                    acc[k] = acc.get(k, 0) + c
            memo[w] = acc
            return acc

        return merge(hist(u), gaps(0, self._level[u]))


def _terminal_and(u, v):
    if u == SINK0 or v == SINK0:
        return SINK0
    if u == SINK1:
        return v
    if v == SINK1 or u == v:
        return u
    return None


def _terminal_or(u, v):
    if u == SINK1 or v == SINK1:
        return SINK1
    if u == SINK0:
        return v
    if v == SINK0 or u == v:
        return u
    return None


def _terminal_diff(u, v):
    if u == SINK0 or v == SINK1 or u == v:
        return SINK0
    if v == SINK0:
        return u
    return None


_TERMINAL = {"and": _terminal_and, "or": _terminal_or, "diff": _terminal_diff}


@dataclass(frozen=True, eq=False)
class DecisionDiagram:
    """A rooted diagram inside a manager.

    Because nodes are interned, two diagrams in one manager represent
    the same function exactly when their roots are equal.
    """

    manager: Manager
    root: int

    def __eq__(self, other):
        return (
            isinstance(other, DecisionDiagram)
            and self.manager is other.manager
            and self.root == other.root
        )

    def __hash__(self):
        return hash((id(self.manager), self.root))

    @property
    def mode(self):
        return self.manager.mode

    @property
    def is_constant(self):
        return self.manager.is_sink(self.root)

    def evaluate(self, x):
        """Follow the value edges of ``x`` and return the sink bit."""
        self.manager._check_instance(x)
        return self.manager._evaluate(self.root, x)

    def __call__(self, x):
        return self.evaluate(x)

    def complement(self):
        """Pointwise negation (the sinks swap roles)."""
        return DecisionDiagram(self.manager, self.manager._complement(self.root))

    def combine(self, other, op):
        """Pointwise 'and' / 'or' / 'diff' with memoised apply."""
        if op not in _TERMINAL:
            raise ValueError(f"unknown operation {op!r}")
        self.manager._check_same(other.manager)
        return DecisionDiagram(self.manager, self.manager._apply(op, self.root, other.root))

    def __and__(self, other):
        return self.combine(other, "and")

    def __or__(self, other):
        return self.combine(other, "or")

    def __invert__(self):
        return self.complement()

    def restrict(self, var, value):
        """Cofactor: fix ``var`` to ``value``; the variable drops out."""
        self.manager._check_value(var, value)
        return DecisionDiagram(
            self.manager, self.manager._restrict(self.root, var, value, {})
        )

    def conjoin_assignment(self, assignment):
        """Conjoin with a partial instance (variable -> value)."""
        allowed = {}
        for var, value in assignment.items():
            self.manager._check_value(var, value)
            allowed[var] = frozenset((value,))
        return DecisionDiagram(
            self.manager, self.manager._conjoin_allowed(self.root, allowed)
        )

    def conjoin_allowed(self, allowed):
        """Conjoin with per-variable allowed value sets."""
        checked = {}
        for var, values in allowed.items():
            values = frozenset(values)
            for value in values:
                self.manager._check_value(var, value)
            if not values:
                return DecisionDiagram(self.manager, SINK0)
            checked[var] = values
        return DecisionDiagram(
            self.manager, self.manager._conjoin_allowed(self.root, checked)
        )

    def cardinality_minimize(self, costs):
        """Restrict to the models of minimum total cost.

        ``costs[var][value]`` is a nonnegative integer; a diagram with no
        models minimizes to the constant-0 diagram.
        """
        return DecisionDiagram(
            self.manager, self.manager._cardinality_minimize(self.root, costs)
        )

    def model_count(self):
        """Exact number of satisfying instances."""
        return self.manager._model_count(self.root)

    def models(self):
        """Yield every model once, lexicographically in the diagram order."""
        return self.manager._models(self.root)

    def size(self):
        """Number of reachable nodes, sinks included."""
        return self.manager._size(self.root)

    def min_cost(self, costs):
        """Minimum model cost, or None if there are no models."""
        return self.manager._min_cost(self.root, costs)

    def cost_histogram(self, costs):
        """Map from total cost to the number of models with that cost."""
        return self.manager._cost_histogram(self.root, costs)


def diagram_from_table(manager, bits):
    """Build the canonical diagram of an explicit truth table.

    ``bits`` is indexed by mixed-radix rank with the first variable most
    significant, matching :func:`instance_rank` and model enumeration
    order.  Exponential in the variable count; intended for oracles and
    small fixtures.
    """
    sizes = [v.arity for v in manager.variables]
    total = 1
    for b in sizes:
        total *= b
    if len(bits) != total:
        raise DomainError(f"table needs {total} entries, got {len(bits)}")

    n = manager.var_count

    def build(offset, span, lvl):
        if lvl == n:
            return SINK1 if bits[offset] else SINK0
        step = span // sizes[lvl]
        kids = [build(offset + v * step, step, lvl + 1) for v in range(sizes[lvl])]
        return manager.intern_node(lvl, kids)

    return DecisionDiagram(manager, build(0, total, 0))


def instance_rank(domains, x):
    """Mixed-radix rank of an instance, first variable most significant."""
    rank = 0
    for value, size in zip(x, domains):
        rank = rank * size + value
    return rank


def all_instances(domains):
    """All instances in lexicographic order."""
    return itertools.product(*(range(size) for size in domains))
