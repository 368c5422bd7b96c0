"""Compilation of classifier decision functions into reduced diagrams.

The construction grows a layered decision graph one feature at a time:
every frontier leaf gains one child per value of the expanded feature,
then children whose residual classifiers provably have the same decision
function are merged, and children whose residual decision is already
forced are closed to a sink.  The finished layers are interned bottom-up
into a reduced diagram, so the output is canonical regardless of how
eagerly the frontier merged.

Merging is driven by per-family signatures:

* naive Bayes with strictly positive CPTs: the decision for any
  completion depends only on where the adjusted threshold falls within
  the set of achievable remaining log-odds sums, so the signature is
  that cut rank.  This test is exact (up to a 1e-12 relative tolerance
  used to deduplicate floating-point sums).
* naive Bayes with zero CPT entries: signatures fall back to the
  residual decision table itself, brute-forced over the remaining
  features and capped by the capacity limit.
* latent trees: the signature is the joint weight of the class and a
  separator boundary (the current tree node plus the partially expanded
  spine), normalized to kill the scale.  Proportional weights imply
  identical residual decisions, so merging is sound but may be
  incomplete; near the bottom the engine switches to exact residual
  decision tables, and leaves whose decision is already forced by the
  boundary odds are retired early.
"""

import math
from bisect import bisect_left
from dataclasses import dataclass, field

from .classifiers import (
    LatentTreeClassifier,
    NaiveBayesClassifier,
    brute_force_cap,
    log_odds_ratio,
)
from .diagram import (
    REDUCED,
    DecisionDiagram,
    Manager,
    all_instances,
)
from .errors import (
    CapacityError,
    ManagerError,
    SequencingError,
    UndefinedPosteriorError,
)

_REL_TOL = 1e-12
_ABS_TOL = 1e-15
_LOG_DIGITS = 12

# residual-table signatures take over when the remaining instance space
# is at most this large; boundaries larger than the state cap give up on
# merging (sound: under-merging only costs intermediate size)
_TABLE_TAIL_CAP = 32
_BOUNDARY_STATE_CAP = 256


@dataclass
class CompileStep:
    """Frontier bookkeeping for one expand-then-merge call."""

    feature: int
    depth: int
    frontier_before: int
    expanded: int
    frontier_after: int
    retired: int


@dataclass
class CompileStats:
    """Per-step trace of a compilation, for size-invariant checks."""

    steps: list = field(default_factory=list)
    impossible_leaves: int = 0

    @property
    def max_expanded(self):
        return max((s.expanded for s in self.steps), default=0)


def _close(a, b):
    return math.isclose(a, b, rel_tol=_REL_TOL, abs_tol=_ABS_TOL)


def _dedup_sorted(values):
    values = sorted(values)
    out = [values[0]]
    for v in values[1:]:
        if not _close(v, out[-1]):
            out.append(v)
    return tuple(out)


def _cut_rank(sums, t, band):
    """Number of achievable sums clearly below ``t``.

    Returns None when some sum lies within ``band`` of ``t``: different
    floating-point evaluation orders could then disagree about the tie,
    so the caller must not merge or retire through this threshold.
    """
    i = bisect_left(sums, t)
    if i > 0 and t - sums[i - 1] <= band:
        return None
    if i < len(sums) and sums[i] - t <= band:
        return None
    return i


class _RankEngine:
    """Exact merge signatures for strictly positive naive Bayes CPTs."""

    def __init__(self, nb, weights, merge=True):
        self._nb = nb
        self._weights = weights
        self._merge = merge
        self._prior_w = math.log(nb.prior / (1.0 - nb.prior))
        self._threshold_w = log_odds_ratio(nb.threshold)
        # guard band dominating the worst-case disagreement between the
        # engine's weight sums and the classifier's own log-space path
        scale = 1.0 + abs(self._prior_w)
        if math.isfinite(self._threshold_w):
            scale += abs(self._threshold_w)
        for row in weights:
            scale += max(abs(w) for w in row)
        self._band = 1e-11 * scale
        self._sum_cache = {(): (0.0,)}
        self._step = None
        self._serial = 0
        self.impossible = 0

    def initial_state(self):
        return (0.0, ())

    def expect(self, depth):
        return None

    def begin_step(self, depth, feature, processed, remaining):
        self._step = (processed, self._sums(remaining))

    def _sums(self, remaining):
        cached = self._sum_cache.get(remaining)
        if cached is not None:
            return cached
        acc = (0.0,)
        for f in reversed(remaining):
            acc = _dedup_sorted(w + s for w in self._weights[f] for s in acc)
        self._sum_cache[remaining] = acc
        return acc

    def expand(self, state, feature, value):
        total, values = state
        return (total + self._weights[feature][value], values + (value,))

    def classify(self, state):
        if not self._merge:
            self._serial += 1
            return self._serial, None
        _, sums = self._step
        t = self._threshold_w - self._prior_w - state[0]
        rank = _cut_rank(sums, t, self._band)
        if rank is None:
            # razor-edge threshold: expand unmerged down to exact sinks
            self._serial += 1
            return ("tie", self._serial), None
        if rank == 0:
            return None, 1
        if rank == len(sums):
            return None, 0
        return rank, None

    def finalize(self, state):
        processed, _ = self._step
        x = [None] * self._nb.feature_count
        for f, v in zip(processed, state[1]):
            x[f] = v
        return self._nb.decide(x)


class _TableEngine:
    """Residual-decision-table signatures; handles zero CPT entries."""

    def __init__(self, nb, merge=True, impossible_value=0):
        self._nb = nb
        self._merge = merge
        self._impossible_value = impossible_value
        self._step = None
        self._serial = 0
        self.impossible = 0
        total = 1
        for b in nb.domains:
            total *= b
        cap = brute_force_cap()
        if total > cap:
            raise CapacityError(
                f"residual-table compilation over {total} instances exceeds "
                f"the cap of {cap}"
            )

    def initial_state(self):
        return ((),)

    def expect(self, depth):
        return None

    def begin_step(self, depth, feature, processed, remaining):
        domains = [self._nb.domains[f] for f in remaining]
        self._step = (processed, remaining, tuple(all_instances(domains)))

    def expand(self, state, feature, value):
        return (state[0] + (value,),)

    def _decide(self, x):
        try:
            return self._nb.decide(x)
        except UndefinedPosteriorError:
            self.impossible += 1
            return self._impossible_value

    def classify(self, state):
        if not self._merge:
            self._serial += 1
            return self._serial, None
        processed, remaining, completions = self._step
        x = [None] * self._nb.feature_count
        for f, v in zip(processed, state[0]):
            x[f] = v
        bits = []
        for completion in completions:
            for f, v in zip(remaining, completion):
                x[f] = v
            bits.append(self._decide(x))
        first = bits[0]
        if all(b == first for b in bits):
            return None, first
        return tuple(bits), None

    def finalize(self, state):
        processed, _, _ = self._step
        x = [None] * self._nb.feature_count
        for f, v in zip(processed, state[0]):
            x[f] = v
        return self._decide(x)


def latent_tree_order(tree):
    """Feature expansion order chosen by the subtree walk.

    Starting at the class root, the walk descends whenever a single
    unprocessed child remains and it is internal; otherwise it picks the
    unprocessed child with the fewest feature leaves (ties to the
    smallest node id) and expands that subtree's leaves in preorder.
    Returns indices into the classifier's feature list.
    """
    order, _ = _latent_tree_plan(tree)
    return order


def _latent_tree_plan(tree):
    position = {node_id: i for i, node_id in enumerate(tree.feature_ids)}
    subtree = {}

    def features_under(v):
        found = subtree.get(v)
        if found is None:
            found = tree.subtree_features(v)
            subtree[v] = found
        return found

    processed = set()
    order = []
    boundaries = []
    current = 0
    while len(processed) < tree.feature_count:
        open_children = [
            c
            for c in tree.children(current)
            if any(f not in processed for f in features_under(c))
        ]
        if len(open_children) == 1 and tree.children(open_children[0]):
            current = open_children[0]
            continue
        chosen = min(open_children, key=lambda c: (len(features_under(c)), c))
        leaves = features_under(chosen)
        for i, leaf in enumerate(leaves):
            processed.add(leaf)
            boundary = {current}
            if i + 1 < len(leaves):
                # separator between the expanded prefix and the rest:
                # ancestors of the next leaf that already saw evidence
                v = tree.nodes[leaves[i + 1]].parent
                while v is not None and v != current:
                    if any(f in processed for f in features_under(v)):
                        boundary.add(v)
                    v = tree.nodes[v].parent
            order.append(position[leaf])
            boundaries.append(tuple(sorted(boundary)))
    return tuple(order), tuple(boundaries)


class _TreeEngine:
    """Separator-weight signatures for latent-tree classifiers."""

    def __init__(self, tree, merge=True, impossible_value=0):
        self._tree = tree
        self._merge = merge
        self._impossible_value = impossible_value
        self._order, self._boundaries = _latent_tree_plan(tree)
        self._tau = log_odds_ratio(tree.threshold)
        self._step = None
        self._serial = 0
        self.impossible = 0

    def initial_state(self):
        return ((),)

    def expect(self, depth):
        return self._order[depth]

    def begin_step(self, depth, feature, processed, remaining):
        domains = [self._tree.domains[f] for f in remaining]
        total = 1
        for b in domains:
            total *= b
        completions = tuple(all_instances(domains)) if total <= _TABLE_TAIL_CAP else None
        self._step = (depth, processed, remaining, completions)

    def expand(self, state, feature, value):
        return (state[0] + (value,),)

    def _evidence(self, processed, values):
        ids = self._tree.feature_ids
        return {ids[f]: v for f, v in zip(processed, values)}

    def _decide(self, x):
        try:
            return self._tree.decide(x)
        except UndefinedPosteriorError:
            self.impossible += 1
            return self._impossible_value

    def classify(self, state):
        depth, processed, remaining, completions = self._step
        values = state[0]
        if completions is not None and self._merge:
            return self._table_signature(processed, values, remaining, completions)
        evidence = self._evidence(processed, values)
        lp, ln = self._tree.log_joints(evidence)
        if lp == -math.inf and ln == -math.inf:
            self.impossible += 1
            return None, self._impossible_value
        if not self._merge:
            self._serial += 1
            return self._serial, None
        return self._boundary_signature(evidence, depth)

    def _table_signature(self, processed, values, remaining, completions):
        x = [None] * self._tree.feature_count
        for f, v in zip(processed, values):
            x[f] = v
        bits = []
        for completion in completions:
            for f, v in zip(remaining, completion):
                x[f] = v
            bits.append(self._decide(x))
        first = bits[0]
        if all(b == first for b in bits):
            return None, first
        return tuple(bits), None

    def _boundary_signature(self, evidence, depth):
        tree = self._tree
        boundary = self._boundaries[depth]
        states = 1
        for node_id in boundary:
            states *= len(tree.nodes[node_id].values)
        if states > _BOUNDARY_STATE_CAP:
            self._serial += 1
            return self._serial, None
        cells = []
        top = -math.inf
        lo = math.inf
        hi = -math.inf
        for assignment in all_instances([len(tree.nodes[b].values) for b in boundary]):
            ev = dict(evidence)
            ev.update(zip(boundary, assignment))
            lp, ln = tree.log_joints(ev)
            cells.append(ln)
            cells.append(lp)
            top = max(top, lp, ln)
            if lp == -math.inf and ln == -math.inf:
                continue
            if ln == -math.inf:
                ratio = math.inf
            elif lp == -math.inf:
                ratio = -math.inf
            else:
                ratio = lp - ln
            lo = min(lo, ratio)
            hi = max(hi, ratio)
        if top == -math.inf:
            self.impossible += 1
            return None, self._impossible_value
        # the posterior odds of any completion lie within [lo, hi]; retire
        # only when the threshold clears the range by a guard band that
        # dominates float disagreement with the classifier's own path
        guard = 1.0 + (abs(self._tau) if math.isfinite(self._tau) else 0.0)
        for edge in (lo, hi):
            if math.isfinite(edge):
                guard += abs(edge)
        band = 1e-10 * guard
        if lo >= self._tau + band:
            return None, 1
        if hi < self._tau - band:
            return None, 0
        key = tuple(round(c - top, _LOG_DIGITS) for c in cells)
        return (boundary, key), None

    def finalize(self, state):
        _, processed, _, _ = self._step
        x = [None] * self._tree.feature_count
        for f, v in zip(processed, state[0]):
            x[f] = v
        return self._decide(x)


def _nb_weights(nb):
    """Per-value log likelihood ratios; None when a CPT entry is zero."""
    weights = []
    for pos_row, neg_row in zip(nb.cpt_positive, nb.cpt_negative):
        row = []
        for p, q in zip(pos_row, neg_row):
            if p == 0.0 or q == 0.0:
                return None
            row.append(math.log(p / q))
        weights.append(tuple(row))
    return tuple(weights)


class PartialDecisionGraph:
    """Layered decision graph under construction.

    Frontier leaves all sit at the same depth and carry the state their
    signature engine needs; after each merge no two frontier leaves
    share a signature.  ``finalize`` interns the layers bottom-up into a
    reduced diagram.
    """

    def __init__(self, classifier, merge=True, stats=None, impossible_value=0):
        self.classifier = classifier
        if isinstance(classifier, LatentTreeClassifier):
            self.engine = _TreeEngine(
                classifier, merge=merge, impossible_value=impossible_value
            )
        elif isinstance(classifier, NaiveBayesClassifier):
            weights = _nb_weights(classifier)
            if weights is None:
                self.engine = _TableEngine(
                    classifier, merge=merge, impossible_value=impossible_value
                )
            else:
                self.engine = _RankEngine(classifier, weights, merge=merge)
        else:
            raise TypeError(f"cannot compile {type(classifier).__name__}")
        self.stats = stats
        self.processed = ()
        self.frontier = [self.engine.initial_state()]
        self._rows = []

    @property
    def depth(self):
        return len(self.processed)

    @property
    def frontier_size(self):
        return len(self.frontier)

    def _expand(self, classifier, feature):
        if classifier is not self.classifier:
            raise SequencingError("graph was built for a different classifier")
        n = self.classifier.feature_count
        if not isinstance(feature, int) or not 0 <= feature < n:
            raise SequencingError(f"unknown feature index {feature!r}")
        if feature in self.processed:
            raise SequencingError(
                f"feature {self.classifier.feature_names[feature]!r} "
                "was already processed"
            )
        planned = self.engine.expect(self.depth)
        if planned is not None and planned != feature:
            raise SequencingError(
                "the latent-tree walk expects feature "
                f"{self.classifier.feature_names[planned]!r} next"
            )
        processed_after = self.processed + (feature,)
        remaining_after = tuple(
            f for f in range(n) if f not in processed_after
        )
        self.engine.begin_step(
            self.depth, feature, processed_after, remaining_after
        )
        arity = self.classifier.domains[feature]
        last = not remaining_after
        rows = []
        new_frontier = []
        index = {}
        retired = 0
        for state in self.frontier:
            refs = []
            for value in range(arity):
                child = self.engine.expand(state, feature, value)
                if last:
                    refs.append(-1 - self.engine.finalize(child))
                    continue
                key, forced = self.engine.classify(child)
                if forced is not None:
                    refs.append(-1 - forced)
                    retired += 1
                    continue
                slot = index.get(key)
                if slot is None:
                    slot = len(new_frontier)
                    index[key] = slot
                    new_frontier.append(child)
                refs.append(slot)
            rows.append(tuple(refs))
        if self.stats is not None:
            self.stats.steps.append(
                CompileStep(
                    feature=feature,
                    depth=len(processed_after),
                    frontier_before=len(self.frontier),
                    expanded=len(self.frontier) * arity,
                    frontier_after=len(new_frontier),
                    retired=retired,
                )
            )
            self.stats.impossible_leaves = self.engine.impossible
        self._rows.append((feature, rows))
        self.frontier = new_frontier
        self.processed = processed_after

    def finalize(self, manager=None):
        """Intern the layers bottom-up and return the reduced diagram."""
        n = self.classifier.feature_count
        if self.depth < n:
            raise SequencingError(
                f"{n - self.depth} features are still unprocessed"
            )
        variables = self.classifier.variables()
        ordered = tuple(variables[f] for f in self.processed)
        if manager is None:
            manager = Manager(ordered, mode=REDUCED)
        else:
            if manager.mode != REDUCED:
                raise ManagerError("compilation needs a reduced-mode manager")
            if manager.variables != ordered:
                raise ManagerError(
                    "manager variables disagree with the expansion order"
                )
        next_ids = None
        for level in range(n - 1, -1, -1):
            _, rows = self._rows[level]
            ids = []
            for refs in rows:
                kids = []
                for ref in refs:
                    if ref < 0:
                        kids.append(-1 - ref)
                    else:
                        kids.append(next_ids[ref])
                ids.append(manager.intern_node(level, kids))
            next_ids = ids
        return DecisionDiagram(manager, next_ids[0])


def expand_then_merge(classifier, graph, feature):
    """Expand the frontier by one feature, then merge equivalent leaves."""
    graph._expand(classifier, feature)
    return graph


def compile_naive_bayes(nb, order=None, manager=None, stats=None):
    """Compile a naive Bayes decision function into a reduced diagram.

    ``order`` is a permutation of feature indices and becomes the
    diagram's variable order (defaults to the classifier's own order).
    """
    n = nb.feature_count
    if order is None:
        order = range(n)
    order = tuple(order)
    if sorted(order) != list(range(n)):
        raise SequencingError("order must be a permutation of the features")
    graph = PartialDecisionGraph(nb, stats=stats)
    for feature in order:
        expand_then_merge(nb, graph, feature)
    return graph.finalize(manager=manager)


def compile_latent_tree(tree, manager=None, stats=None, merge=True, impossible_value=0):
    """Compile a latent-tree decision function into a reduced diagram.

    The variable order is derived by :func:`latent_tree_order`.  With
    ``merge=False`` frontier leaves are never merged (useful to check
    that merging does not change the final reduced diagram).  Leaves
    whose partial evidence has probability zero close to the sink given
    by ``impossible_value``.
    """
    graph = PartialDecisionGraph(
        tree, merge=merge, stats=stats, impossible_value=impossible_value
    )
    for feature in latent_tree_order(tree):
        expand_then_merge(tree, graph, feature)
    return graph.finalize(manager=manager)
