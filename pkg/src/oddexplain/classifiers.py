"""Bayesian network classifiers and their brute-force decision tables.

Two model families are supported: naive Bayes (class variable with one
CPT per feature) and latent trees (class at the root, features at the
leaves, hidden discrete variables in between).  The class variable is
always binary.  An instance is classified positively when the posterior
of the positive class meets the threshold (non-strict).

Posteriors are accumulated in log space, left to right in feature order,
and the threshold comparison happens in log-odds.  Keeping one fixed
accumulation order makes threshold ties deterministic, which the
compiler and the golden decision tables rely on.
"""

import math
import os
from dataclasses import dataclass, field

from .diagram import Variable, all_instances, instance_rank
from .errors import (
    CapacityError,
    DomainError,
    ModelError,
    RangeError,
    StructureError,
    TrainingError,
    UndefinedPosteriorError,
)

_ROW_TOLERANCE = 1e-9

CAPACITY_ENV_VAR = "ODDEXPLAIN_CAPACITY"
_DEFAULT_CAPACITY = 2**22


def brute_force_cap():
    """Instance-space size above which exhaustive enumeration refuses to run."""
    raw = os.environ.get(CAPACITY_ENV_VAR)
    if raw is None:
        return _DEFAULT_CAPACITY
    try:
        cap = int(raw)
    except ValueError as exc:
        raise CapacityError(f"{CAPACITY_ENV_VAR} must be an integer") from exc
    if cap <= 0:
        raise CapacityError(f"{CAPACITY_ENV_VAR} must be positive")
    return cap


def _log(p):
    return math.log(p) if p > 0.0 else -math.inf


def log_odds_ratio(threshold):
    """log(T / (1-T)), the log-odds the evidence weight must reach."""
    if threshold == 0.0:
        return -math.inf
    if threshold == 1.0:
        return math.inf
    return math.log(threshold / (1.0 - threshold))


def _check_distribution(row, what):
    for p in row:
        if not 0.0 <= p <= 1.0:
            raise ModelError(f"{what}: probability {p!r} outside [0, 1]")
    if abs(sum(row) - 1.0) > _ROW_TOLERANCE:
        raise ModelError(f"{what}: row sums to {sum(row)!r}, not 1")


def _auto_labels(size):
    if size == 2:
        return ("-", "+")
    return tuple(f"v{i}" for i in range(size))


@dataclass(frozen=True)
class NaiveBayesClassifier:
    """Binary-class naive Bayes model with an explicit decision threshold.

    ``cpt_positive[i][v]`` is Pr(feature i = v | positive class) and
    ``cpt_negative[i][v]`` the same given the negative class.  For binary
    features value 0 is the negative outcome and value 1 the positive one.
    """

    feature_names: tuple
    feature_values: tuple
    prior: float
    threshold: float
    cpt_positive: tuple
    cpt_negative: tuple
    training_accuracy: float | None = None

    def __post_init__(self):
        n = len(self.feature_names)
        if n == 0:
            raise ModelError("a classifier needs at least one feature")
        if not (
            len(self.feature_values) == len(self.cpt_positive) == len(self.cpt_negative) == n
        ):
            raise ModelError("feature metadata and CPTs disagree in length")
        if not 0.0 < self.prior < 1.0:
            raise ModelError(f"class prior {self.prior!r} must lie strictly in (0, 1)")
        if not 0.0 <= self.threshold <= 1.0:
            raise ModelError(f"threshold {self.threshold!r} must lie in [0, 1]")
        for i, name in enumerate(self.feature_names):
            size = len(self.feature_values[i])
            if size < 2:
                raise ModelError(f"feature {name!r} needs >= 2 values")
            if len(self.cpt_positive[i]) != size or len(self.cpt_negative[i]) != size:
                raise ModelError(f"feature {name!r}: CPT row length != domain size")
            _check_distribution(self.cpt_positive[i], f"Pr({name} | +)")
            _check_distribution(self.cpt_negative[i], f"Pr({name} | -)")

    @classmethod
    def from_rates(
        cls, feature_names, false_positive, false_negative, prior, threshold
    ):
        """Binary shorthand from per-feature error rates.

        ``false_positive[i]`` is Pr(feature i = + | negative class) and
        ``false_negative[i]`` is Pr(feature i = - | positive class).
        """
        names = tuple(feature_names)
        fp = tuple(false_positive)
        fn = tuple(false_negative)
        if not len(names) == len(fp) == len(fn):
            raise ModelError("rate lists and feature names disagree in length")
        return cls(
            feature_names=names,
            feature_values=tuple(("-", "+") for _ in names),
            prior=prior,
            threshold=threshold,
            cpt_positive=tuple((r, 1.0 - r) for r in fn),
            cpt_negative=tuple((1.0 - r, r) for r in fp),
        )

    @property
    def feature_count(self):
        return len(self.feature_names)

    @property
    def domains(self):
        return tuple(len(values) for values in self.feature_values)

    def variables(self):
        """Variable table for a diagram manager, in feature order."""
        return tuple(
            Variable(name, tuple(values))
            for name, values in zip(self.feature_names, self.feature_values)
        )

    def _check_instance(self, x, allow_missing=False):
        if len(x) != self.feature_count:
            raise DomainError(
                f"instance has {len(x)} entries, expected {self.feature_count}"
            )
        for i, v in enumerate(x):
            if v is None and allow_missing:
                continue
            if not isinstance(v, int) or not 0 <= v < len(self.feature_values[i]):
                raise DomainError(
                    f"value {v!r} out of range for feature {self.feature_names[i]!r}"
                )

    def _log_joints(self, x):
        lp = _log(self.prior)
        ln = _log(1.0 - self.prior)
        for i, v in enumerate(x):
            if v is None:
                continue
            lp += _log(self.cpt_positive[i][v])
            ln += _log(self.cpt_negative[i][v])
        return lp, ln

    def posterior(self, x, allow_missing=False):
        """Exact Pr(positive class | x).

        ``None`` entries are skipped when ``allow_missing`` is set, which
        is sound for naive Bayes (absent features marginalize out).
        """
        self._check_instance(x, allow_missing=allow_missing)
        lp, ln = self._log_joints(x)
        return _posterior_from_joints(lp, ln)

    def decide(self, x, allow_missing=False):
        """1 iff the posterior meets the threshold (non-strict)."""
        self._check_instance(x, allow_missing=allow_missing)
        lp, ln = self._log_joints(x)
        return _decide_from_joints(lp, ln, self.threshold)

    def log_odds(self):
        """Equivalent additive form of the decision rule.

        The decision is positive iff the prior weight plus the
        per-feature weights of the observed values reaches the threshold
        weight.  Weights are infinite where a CPT entry is zero.
        """
        if self.threshold in (0.0, 1.0):
            raise RangeError("threshold on the boundary has no finite log-odds")
        weights = []
        for pos_row, neg_row in zip(self.cpt_positive, self.cpt_negative):
            row = []
            for p, q in zip(pos_row, neg_row):
                if p == 0.0 and q == 0.0:
                    # unreachable value: zero mass under both classes
                    row.append(0.0)
                elif p == 0.0:
                    row.append(-math.inf)
                elif q == 0.0:
                    row.append(math.inf)
                else:
                    row.append(math.log(p / q))
            weights.append(tuple(row))
        return LogOddsForm(
            weights=tuple(weights),
            prior_weight=math.log(self.prior / (1.0 - self.prior)),
            threshold_weight=log_odds_ratio(self.threshold),
        )


@dataclass(frozen=True)
class LogOddsForm:
    """Additive rewrite of a naive Bayes decision rule."""

    weights: tuple
    prior_weight: float
    threshold_weight: float

    def decide(self, x):
        total = self.prior_weight
        for i, v in enumerate(x):
            total += self.weights[i][v]
        return int(total >= self.threshold_weight)


def _posterior_from_joints(lp, ln):
    if lp == -math.inf and ln == -math.inf:
        raise UndefinedPosteriorError("evidence has probability zero")
    if lp == -math.inf:
        return 0.0
    if ln == -math.inf:
        return 1.0
    return 1.0 / (1.0 + math.exp(ln - lp))


def _decide_from_joints(lp, ln, threshold):
    if lp == -math.inf and ln == -math.inf:
        raise UndefinedPosteriorError("evidence has probability zero")
    if lp == -math.inf:
        return int(threshold == 0.0)
    if ln == -math.inf:
        return 1
    return int(lp - ln >= log_odds_ratio(threshold))


@dataclass(frozen=True)
class TreeNode:
    """One variable of a latent tree.

    The root carries a prior distribution in ``cpt`` (a single row);
    every other node carries one row per parent state, each row a
    distribution over the node's own values.
    """

    name: str
    values: tuple
    parent: int | None
    cpt: tuple

    def __post_init__(self):
        if len(self.values) < 2:
            raise ModelError(f"node {self.name!r} needs >= 2 values")


@dataclass(frozen=True)
class LatentTreeClassifier:
    """Tree-shaped Bayesian network classifier.

    Node 0 is the binary class variable; every other node's parent has a
    smaller index.  Leaves are the observed features (in index order),
    internal nodes are hidden.
    """

    nodes: tuple
    threshold: float
    _children: tuple = field(init=False, repr=False, compare=False)
    _feature_ids: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nodes = self.nodes
        if not nodes:
            raise StructureError("a latent tree needs at least a class and a feature")
        if nodes[0].parent is not None:
            raise StructureError("node 0 must be the root")
        if len(nodes[0].values) != 2:
            raise ModelError("the class variable must be binary")
        if not 0.0 <= self.threshold <= 1.0:
            raise ModelError(f"threshold {self.threshold!r} must lie in [0, 1]")
        children = [[] for _ in nodes]
        for i, node in enumerate(nodes):
            if i == 0:
                if len(node.cpt) != 1 or len(node.cpt[0]) != 2:
                    raise ModelError("the root carries a single prior row of length 2")
                _check_distribution(node.cpt[0], f"prior of {node.name!r}")
                continue
            if node.parent is None or not 0 <= node.parent < i:
                raise StructureError(
                    f"node {node.name!r} must point to an earlier parent"
                )
            parent = nodes[node.parent]
            if len(node.cpt) != len(parent.values):
                raise ModelError(
                    f"node {node.name!r}: expected one CPT row per parent state"
                )
            for ps, row in enumerate(node.cpt):
                if len(row) != len(node.values):
                    raise ModelError(f"node {node.name!r}: CPT row length != domain")
                _check_distribution(
                    row, f"Pr({node.name} | {parent.name}={parent.values[ps]})"
                )
            children[node.parent].append(i)
        features = tuple(i for i, c in enumerate(children) if not c and i > 0)
        if not features:
            raise StructureError("a latent tree needs at least one feature leaf")
        if not children[0]:
            raise StructureError("the class variable cannot be a leaf")
        object.__setattr__(self, "_children", tuple(tuple(c) for c in children))
        object.__setattr__(self, "_feature_ids", features)

    @property
    def feature_ids(self):
        """Node ids of the features, in node-index order."""
        return self._feature_ids

    def children(self, node_id):
        return self._children[node_id]

    @property
    def feature_names(self):
        return tuple(self.nodes[i].name for i in self._feature_ids)

    @property
    def feature_values(self):
        return tuple(self.nodes[i].values for i in self._feature_ids)

    @property
    def feature_count(self):
        return len(self._feature_ids)

    @property
    def domains(self):
        return tuple(len(self.nodes[i].values) for i in self._feature_ids)

    def variables(self):
        return tuple(
            Variable(self.nodes[i].name, tuple(self.nodes[i].values))
            for i in self._feature_ids
        )

    def subtree_features(self, node_id):
        """Feature ids under ``node_id`` (itself included if a leaf)."""
        out = []
        stack = [node_id]
        while stack:
            v = stack.pop()
            kids = self._children[v]
            if not kids and v > 0:
                out.append(v)
            stack.extend(reversed(kids))
        return tuple(out)

    def _check_instance(self, x):
        if len(x) != self.feature_count:
            raise DomainError(
                f"instance has {len(x)} entries, expected {self.feature_count}"
            )
        for i, v in enumerate(x):
            node = self.nodes[self._feature_ids[i]]
            if not isinstance(v, int) or not 0 <= v < len(node.values):
                raise DomainError(f"value {v!r} out of range for {node.name!r}")

    def log_joints(self, evidence):
        """Log Pr(class, evidence) for both classes.

        ``evidence`` maps node ids (features, possibly hidden nodes) to
        value indices; unmentioned variables are marginalized out by
        upward sum-product messages with per-node scaling.
        """
        logscale = 0.0

        def upward(node_id):
            nonlocal logscale
            node = self.nodes[node_id]
            size = len(node.values)
            state = evidence.get(node_id)
            like = [0.0] * size
            if state is None:
                like = [1.0] * size
            else:
                like[state] = 1.0
            for child_id in self._children[node_id]:
                msg = upward(child_id)
                like = [l * m for l, m in zip(like, msg)]
            top = max(like)
            if top > 0.0:
                logscale += math.log(top)
                like = [l / top for l in like]
            if node_id == 0:
                return like
            cpt = self.nodes[node_id].cpt
            parent_size = len(self.nodes[node.parent].values)
            return [
                sum(cpt[ps][v] * like[v] for v in range(size))
                for ps in range(parent_size)
            ]

        root_like = upward(0)
        prior = self.nodes[0].cpt[0]
        ln = _log(prior[0] * root_like[0]) + logscale
        lp = _log(prior[1] * root_like[1]) + logscale
        return lp, ln

    def _feature_evidence(self, x):
        return dict(zip(self._feature_ids, x))

    def posterior(self, x):
        """Exact Pr(positive class | x) by sum-product message passing."""
        self._check_instance(x)
        lp, ln = self.log_joints(self._feature_evidence(x))
        return _posterior_from_joints(lp, ln)

    def decide(self, x):
        self._check_instance(x)
        lp, ln = self.log_joints(self._feature_evidence(x))
        return _decide_from_joints(lp, ln, self.threshold)


@dataclass(frozen=True)
class DecisionTable:
    """Exhaustive ground-truth decision function over a feature space."""

    domains: tuple
    bits: tuple

    def __post_init__(self):
        total = 1
        for b in self.domains:
            total *= b
        if len(self.bits) != total:
            raise DomainError(f"table needs {total} entries, got {len(self.bits)}")

    def __len__(self):
        return len(self.bits)

    def decision(self, x):
        return self.bits[instance_rank(self.domains, x)]

    def instances(self):
        return all_instances(self.domains)

    def positives(self):
        for x in self.instances():
            if self.decision(x):
                yield x

    def positive_count(self):
        return sum(self.bits)


def decision_table(classifier, cap=None):
    """Materialize the classifier's decision function by enumeration.

    The instance space must stay within ``cap`` (default from the
    capacity environment variable).
    """
    domains = classifier.domains
    total = 1
    for b in domains:
        total *= b
    limit = brute_force_cap() if cap is None else cap
    if total > limit:
        raise CapacityError(
            f"instance space of size {total} exceeds the cap of {limit}"
        )
    bits = tuple(classifier.decide(x) for x in all_instances(domains))
    return DecisionTable(domains=domains, bits=bits)


def train_naive_bayes(
    rows,
    labels,
    smoothing=1.0,
    feature_names=None,
    feature_values=None,
    threshold=0.5,
):
    """Maximum-likelihood naive Bayes with additive smoothing.

    ``rows`` hold value indices (``None`` marks a missing entry, skipped
    during counting).  Returns the classifier with its training accuracy
    recorded; accuracy skips missing entries via marginalization.
    """
    rows = [tuple(r) for r in rows]
    labels = [int(l) for l in labels]
    if not rows:
        raise TrainingError("empty dataset")
    if len(rows) != len(labels):
        raise TrainingError("row and label counts differ")
    if any(l not in (0, 1) for l in labels):
        raise TrainingError("labels must be 0 or 1")
    if len(set(labels)) < 2:
        raise TrainingError("training needs both classes present")
    if smoothing < 0:
        raise TrainingError("smoothing must be >= 0")
    n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise TrainingError("rows have inconsistent arity")
    if feature_values is not None:
        feature_values = tuple(tuple(v) for v in feature_values)
        sizes = [len(v) for v in feature_values]
    else:
        sizes = [2] * n
        for row in rows:
            for i, v in enumerate(row):
                if v is not None:
                    sizes[i] = max(sizes[i], v + 1)
        feature_values = tuple(_auto_labels(size) for size in sizes)
    if feature_names is None:
        feature_names = tuple(f"x{i}" for i in range(n))
    else:
        feature_names = tuple(feature_names)

    pos_rows = sum(labels)
    neg_rows = len(labels) - pos_rows
    prior = (pos_rows + smoothing) / (len(labels) + 2.0 * smoothing)

    cpt = {0: [], 1: []}
    for i in range(n):
        for label, total_rows in ((1, pos_rows), (0, neg_rows)):
            counts = [0] * sizes[i]
            seen = 0
            for row, l in zip(rows, labels):
                v = row[i]
                if l != label or v is None:
                    continue
                if not 0 <= v < sizes[i]:
                    raise TrainingError(
                        f"value {v} out of range for feature {feature_names[i]!r}"
                    )
                counts[v] += 1
                seen += 1
            denom = seen + smoothing * sizes[i]
            if denom == 0:
                # no observations and no smoothing: fall back to uniform
                row_probs = tuple(1.0 / sizes[i] for _ in range(sizes[i]))
            else:
                row_probs = tuple((c + smoothing) / denom for c in counts)
            cpt[label].append(row_probs)

    classifier = NaiveBayesClassifier(
        feature_names=feature_names,
        feature_values=feature_values,
        prior=prior,
        threshold=threshold,
        cpt_positive=tuple(cpt[1]),
        cpt_negative=tuple(cpt[0]),
    )
    hits = sum(
        int(classifier.decide(row, allow_missing=True) == label)
        for row, label in zip(rows, labels)
    )
    accuracy = hits / len(rows)
    return NaiveBayesClassifier(
        feature_names=classifier.feature_names,
        feature_values=classifier.feature_values,
        prior=classifier.prior,
        threshold=classifier.threshold,
        cpt_positive=classifier.cpt_positive,
        cpt_negative=classifier.cpt_negative,
        training_accuracy=accuracy,
    )
