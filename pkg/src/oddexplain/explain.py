"""Symbolic explanations of individual classifications.

Two kinds of explanation are computed from a compiled decision function:

* minimum-cardinality explanations: complete instances that keep the
  current decision while flipping as many of the decision-supporting
  features as possible; what remains is a minimal culprit set.
* prime-implicant explanations: minimal partial instances of the given
  instance whose every completion yields the same decision, i.e. the
  feature sets that render everything else irrelevant.

Minimum-cardinality sets are ordinary diagrams over the original
domains.  Implicant sets live in a separate complete-mode manager where
every variable gains one extra "don't care" value, so each model decodes
to a partial instance.  Both are validated against brute-force oracles
that transcribe the definitions directly.
"""

import math
from dataclasses import dataclass

from .diagram import (
    COMPLETE,
    SINK0,
    DecisionDiagram,
    Manager,
    Variable,
    all_instances,
)
from .errors import CapacityError, DomainError, ManagerError, PolarityError

STAR_LABEL = "*"

_PI_ORACLE_MAX_FEATURES = 16


def _require_binary(manager):
    for var in manager.variables:
        if var.arity != 2:
            raise DomainError(
                f"operation needs binary features, but {var.name!r} has "
                f"{var.arity} values"
            )


def _mc_costs(manager, decision):
    return [
        [1 if value == decision else 0 for value in range(var.arity)]
        for var in manager.variables
    ]


@dataclass(frozen=True)
class McExplanationSet:
    """All minimum-cardinality explanations of one decision.

    ``diagram`` has exactly the explanations as models; they are
    complete instances sharing one minimal count of decision-valued
    features.
    """

    diagram: DecisionDiagram
    instance: tuple
    decision: int
    costs: tuple

    def count(self):
        return self.diagram.model_count()

    def models(self):
        return self.diagram.models()

    def cardinality(self):
        """Shared cost of the explanations, or None for an empty set."""
        return self.diagram.min_cost([list(row) for row in self.costs])


def mc_explanations(f, x):
    """Minimum-cardinality explanations of the decision on ``x``.

    Runs on binary features: the instance's decision-agreeing features
    are candidates to flip away, its other features are frozen, and the
    conjoined function is cardinality-minimized.  Everything is linear
    in the diagram size.
    """
    manager = f.manager
    _require_binary(manager)
    decision = f.evaluate(x)
    frozen = {var: v for var, v in enumerate(x) if v == 1 - decision}
    g = f if decision else f.complement()
    h = g.conjoin_assignment(frozen)
    costs = _mc_costs(manager, decision)
    minimized = h.cardinality_minimize(costs)
    return McExplanationSet(
        diagram=minimized,
        instance=tuple(x),
        decision=decision,
        costs=tuple(tuple(row) for row in costs),
    )


@dataclass(frozen=True)
class OnOffPartition:
    """Per-variable split of values into on-values and off-values.

    ``on_values[i]`` holds the value indices of variable ``i`` that
    count towards an explanation's cardinality; the remaining values are
    the off-values.  ``fixed`` lists variables that must keep their
    observed value (checked against the instance).
    """

    on_values: tuple
    fixed: tuple = ()

    @classmethod
    def binary(cls, count, fixed=()):
        """The classic partition: value 1 is on for every variable."""
        return cls(
            on_values=tuple(frozenset((1,)) for _ in range(count)),
            fixed=tuple(fixed),
        )

    def fixed_assignment(self, x):
        """The pinned variables with their values, taken from ``x`` when
        given as bare indices; explicit pairs must agree with ``x``."""
        assignment = {}
        for entry in self.fixed:
            if isinstance(entry, int):
                assignment[entry] = x[entry]
                continue
            var, value = entry
            if x[var] != value:
                raise ValueError(
                    f"fixed assignment {value!r} for variable {var} disagrees "
                    "with the instance"
                )
            assignment[var] = value
        return assignment

    def validate(self, manager):
        if len(self.on_values) != manager.var_count:
            raise DomainError("partition must cover every variable")
        for var, on in enumerate(self.on_values):
            for value in on:
                manager._check_value(var, value)
        if not any(self.on_values):
            raise DomainError("at least one variable needs an on-value")
        for entry in self.fixed:
            var = entry if isinstance(entry, int) else entry[0]
            if not 0 <= var < manager.var_count:
                raise DomainError(f"fixed variable index {var} out of range")


def mc_explanations_general(f, x, partition):
    """Minimum-cardinality explanations over an on/off value partition.

    Fixed features and features observed at off-values keep their exact
    value; a feature observed at an on-value may keep it or move to any
    off-value.  Among the instances that preserve the decision, those
    with the fewest remaining on-values survive.  For a negative
    decision the roles of on and off swap (the culprits of a negative
    decision are its off-values), which makes the binary all-on={1}
    partition coincide with :func:`mc_explanations` on both polarities.
    """
    manager = f.manager
    partition.validate(manager)
    decision = f.evaluate(x)
    g = f if decision else f.complement()
    on_sets = []
    for var, on in enumerate(partition.on_values):
        domain = frozenset(range(manager.arity(var)))
        on = frozenset(on)
        on_sets.append(on if decision else domain - on)
    fixed = partition.fixed_assignment(x)
    allowed = {}
    for var in range(manager.var_count):
        current = x[var]
        off = frozenset(range(manager.arity(var))) - on_sets[var]
        if var in fixed or current in off:
            allowed[var] = frozenset((current,))
        else:
            allowed[var] = off | {current}
    h = g.conjoin_allowed(allowed)
    costs = [
        [1 if value in on_sets[var] else 0 for value in range(manager.arity(var))]
        for var in range(manager.var_count)
    ]
    minimized = h.cardinality_minimize(costs)
    return McExplanationSet(
        diagram=minimized,
        instance=tuple(x),
        decision=decision,
        costs=tuple(tuple(row) for row in costs),
    )


@dataclass(frozen=True)
class ImplicantSet:
    """Prime implicants encoded as a complete-mode diagram.

    Each variable's domain is extended with a trailing don't-care value;
    a model assigns every variable and decodes to a partial instance by
    dropping the don't-care positions.  No model subsumes another.
    """

    diagram: DecisionDiagram
    base_variables: tuple
    instance: tuple | None = None
    decision: int | None = None

    def _star(self, var):
        return self.diagram.manager.arity(var) - 1

    def decode(self, model):
        return {
            var: value
            for var, value in enumerate(model)
            if value != self._star(var)
        }

    def partial_instances(self):
        for model in self.diagram.models():
            yield self.decode(model)

    def as_set(self):
        """Hashable view: a set of frozen (variable, value) item sets."""
        return {
            frozenset(p.items()) for p in self.partial_instances()
        }

    def count(self):
        return self.diagram.model_count()

    def _length_costs(self):
        manager = self.diagram.manager
        return [
            [0 if value == self._star(var) else 1 for value in range(manager.arity(var))]
            for var in range(manager.var_count)
        ]

    def length_histogram(self):
        """Map from explanation length to the number of explanations."""
        hist = self.diagram.cost_histogram(self._length_costs())
        return dict(sorted(hist.items()))

    def min_length(self):
        return self.diagram.min_cost(self._length_costs())

    def shortest(self):
        """All minimum-length partial instances, in enumeration order."""
        minimized = self.diagram.cardinality_minimize(self._length_costs())
        sub = ImplicantSet(
            diagram=minimized,
            base_variables=self.base_variables,
            instance=self.instance,
            decision=self.decision,
        )
        return list(sub.partial_instances())


def star_manager(manager):
    """Complete-mode manager whose domains gain a don't-care value."""
    variables = tuple(
        Variable(var.name, tuple(var.values) + (STAR_LABEL,))
        for var in manager.variables
    )
    return Manager(variables, mode=COMPLETE)


def _check_star_manager(base, ext):
    if ext.mode != COMPLETE:
        raise ManagerError("implicant sets need a complete-mode manager")
    if ext.var_count != base.var_count:
        raise ManagerError("extended manager has the wrong variable count")
    for var in range(base.var_count):
        if ext.arity(var) != base.arity(var) + 1:
            raise ManagerError(
                f"variable {base.variables[var].name!r} needs exactly one "
                "extra don't-care value"
            )


def _prime_recursion(f, branch_values, ext):
    """Shared recursion of the implicant-set constructions.

    ``branch_values(level)`` yields the base values whose branch is
    explored at that level; the skipped branches are empty.  The
    don't-care branch always recurses on the conjunction of all value
    cofactors and is subtracted from every value branch.
    """
    base = f.manager
    n = base.var_count
    memo = {}

    def cofactors(u, level):
        if not base.is_sink(u) and base.level(u) == level:
            return base.children(u)
        return (u,) * base.arity(level)

    def rec(u, level):
        if level == n:
            return u
        key = (u, level)
        found = memo.get(key)
        if found is not None:
            return found
        cofs = cofactors(u, level)
        conj = cofs[0]
        for c in cofs[1:]:
            conj = base._apply("and", conj, c)
        g_star = rec(conj, level + 1)
        explored = branch_values(level)
        kids = []
        for value, cof in enumerate(cofs):
            if value not in explored:
                kids.append(SINK0)
                continue
            g_value = rec(cof, level + 1)
            kids.append(ext._apply("diff", g_value, g_star))
        kids.append(g_star)
        result = ext.intern_node(level, kids)
        memo[key] = result
        return result

    return rec(f.root, 0)


def pi_cover(f, ext_manager=None):
    """All prime implicants of ``f`` as an implicant set."""
    base = f.manager
    ext = star_manager(base) if ext_manager is None else ext_manager
    _check_star_manager(base, ext)
    all_values = [frozenset(range(base.arity(v))) for v in range(base.var_count)]
    root = _prime_recursion(f, lambda level: all_values[level], ext)
    return ImplicantSet(diagram=DecisionDiagram(ext, root), base_variables=base.variables)


def pi_inst(f, x, ext_manager=None):
    """Prime implicants of ``f`` compatible with the positive instance ``x``.

    Equals ``pi_cover(f)`` filtered to implicants contained in ``x``,
    but prunes the incompatible branches during the recursion instead of
    generating them.  ``f`` must classify ``x`` positively; to explain a
    negative instance pass the complement (or use :func:`explain_pi`).
    """
    base = f.manager
    if f.evaluate(x) != 1:
        raise PolarityError(
            "instance is negative under this function; complement first "
            "or call explain_pi"
        )
    ext = star_manager(base) if ext_manager is None else ext_manager
    _check_star_manager(base, ext)
    chosen = [frozenset((v,)) for v in x]
    root = _prime_recursion(f, lambda level: chosen[level], ext)
    return ImplicantSet(
        diagram=DecisionDiagram(ext, root),
        base_variables=base.variables,
        instance=tuple(x),
        decision=1,
    )


def explain_pi(f, x, ext_manager=None):
    """Prime-implicant explanations of the decision ``f(x)``.

    Complements the function for negative instances, so the result
    always explains the actual decision.
    """
    decision = f.evaluate(x)
    g = f if decision else f.complement()
    found = pi_inst(g, x, ext_manager=ext_manager)
    return ImplicantSet(
        diagram=found.diagram,
        base_variables=found.base_variables,
        instance=tuple(x),
        decision=decision,
    )


def shortest_pis(s):
    """Minimum-length explanations of an implicant set."""
    return s.shortest()


def count_explanations(s):
    """Number of explanations in an MC or implicant set."""
    return s.count()


def compatibility_filter(cover, x):
    """Restrict a cover's implicants to those contained in ``x``.

    The baseline against which the instance-directed construction is
    compared: conjoin the cover with the diagram allowing each variable
    only its observed value or don't-care.
    """
    ext = cover.diagram.manager
    allowed = {
        var: frozenset((value, ext.arity(var) - 1)) for var, value in enumerate(x)
    }
    limited = cover.diagram.conjoin_allowed(allowed)
    return ImplicantSet(
        diagram=limited,
        base_variables=cover.base_variables,
        instance=tuple(x),
        decision=cover.decision,
    )


def brute_mc_oracle(table, x):
    """Direct transcription of the minimum-cardinality definition.

    Scans the whole decision table: keeps the decision-preserving
    instances whose decision-valued features are a subset of the
    instance's, then filters to the minimal count.  Binary features
    only.
    """
    if any(b != 2 for b in table.domains):
        raise DomainError("the minimum-cardinality oracle needs binary features")
    x = tuple(x)
    decision = table.decision(x)
    best = math.inf
    found = []
    for candidate in table.instances():
        if table.decision(candidate) != decision:
            continue
        if decision == 1:
            if not all(c <= v for c, v in zip(candidate, x)):
                continue
            cost = sum(candidate)
        else:
            if not all(c >= v for c, v in zip(candidate, x)):
                continue
            cost = len(candidate) - sum(candidate)
        if cost < best:
            best = cost
            found = [candidate]
        elif cost == best:
            found.append(candidate)
    return set(found)


def brute_pi_oracle(table, x):
    """Direct transcription of the prime-implicant definition.

    Enumerates every subset of the instance, keeps those whose every
    completion preserves the decision, and filters to the minimal ones.
    Exponential; refuses more than 16 features.
    """
    n = len(table.domains)
    if n > _PI_ORACLE_MAX_FEATURES:
        raise CapacityError(
            f"prime-implicant oracle is capped at {_PI_ORACLE_MAX_FEATURES} features"
        )
    x = tuple(x)
    decision = table.decision(x)

    def preserves(mask):
        free = [i for i in range(n) if not mask & (1 << i)]
        probe = list(x)
        for completion in all_instances([table.domains[i] for i in free]):
            for i, v in zip(free, completion):
                probe[i] = v
            if table.decision(probe) != decision:
                return False
        return True

    keeps = [preserves(mask) for mask in range(1 << n)]
    primes = set()
    for mask in range(1 << n):
        if not keeps[mask]:
            continue
        # sufficiency is monotone, so minimality = no one-smaller subset
        if any(keeps[mask & ~(1 << i)] for i in range(n) if mask & (1 << i)):
            continue
        primes.add(frozenset((i, x[i]) for i in range(n) if mask & (1 << i)))
    return primes
