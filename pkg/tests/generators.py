"""Seeded random model and diagram generators shared by the tests."""

from oddexplain import (
    DecisionTable,
    LatentTreeClassifier,
    Manager,
    NaiveBayesClassifier,
    TreeNode,
    Variable,
    all_instances,
    diagram_from_table,
)


def random_table_diagram(rng, var_count, domains=None):
    """Random function as (manager, diagram, bits) over the given domains."""
    if domains is None:
        domains = [2] * var_count
    variables = tuple(
        Variable(f"x{i}") if b == 2 else Variable(f"x{i}", tuple(f"v{j}" for j in range(b)))
        for i, b in enumerate(domains)
    )
    manager = Manager(variables)
    total = 1
    for b in domains:
        total *= b
    bits = tuple(rng.randint(0, 1) for _ in range(total))
    return manager, diagram_from_table(manager, bits), bits


def random_distribution(rng, size, floor=0.02):
    raw = [floor + rng.random() for _ in range(size)]
    total = sum(raw)
    return tuple(p / total for p in raw)


def random_naive_bayes(rng, max_features=8, max_domain=3, min_features=2):
    """Random strictly-positive naive Bayes classifier."""
    n = rng.randint(min_features, max_features)
    domains = [rng.randint(2, max_domain) for _ in range(n)]
    return NaiveBayesClassifier(
        feature_names=tuple(f"x{i}" for i in range(n)),
        feature_values=tuple(
            ("-", "+") if b == 2 else tuple(f"v{j}" for j in range(b))
            for b in domains
        ),
        prior=rng.uniform(0.05, 0.95),
        threshold=rng.uniform(0.02, 0.98),
        cpt_positive=tuple(random_distribution(rng, b) for b in domains),
        cpt_negative=tuple(random_distribution(rng, b) for b in domains),
    )


def random_latent_tree(rng, max_features=8, max_hidden_domain=3):
    """Random latent tree: class root, hidden internals, binary feature leaves."""
    feature_count = rng.randint(2, max_features)
    hidden_count = rng.randint(1, min(4, feature_count))
    # internal skeleton: each hidden node hangs off an earlier internal node
    parents = [None]
    domains = [2]
    names = ["class"]
    for h in range(hidden_count):
        parents.append(rng.randrange(0, len(parents)))
        domains.append(rng.randint(2, max_hidden_domain))
        names.append(f"h{h}")
    internal_ids = list(range(len(parents)))
    # every hidden node needs at least one feature leaf to stay internal
    leaf_parents = internal_ids[1:]
    while len(leaf_parents) < feature_count:
        leaf_parents.append(rng.choice(internal_ids))
    rng.shuffle(leaf_parents)
    nodes = []
    for i, parent in enumerate(parents):
        if i == 0:
            cpt = (random_distribution(rng, 2),)
        else:
            cpt = tuple(
                random_distribution(rng, domains[i]) for _ in range(domains[parent])
            )
        nodes.append(
            TreeNode(
                name=names[i],
                values=tuple(f"s{j}" for j in range(domains[i])),
                parent=parent,
                cpt=cpt,
            )
        )
    for k, parent in enumerate(sorted(leaf_parents)):
        nodes.append(
            TreeNode(
                name=f"f{k}",
                values=("-", "+"),
                parent=parent,
                cpt=tuple(
                    random_distribution(rng, 2) for _ in range(domains[parent])
                ),
            )
        )
    return LatentTreeClassifier(nodes=tuple(nodes), threshold=rng.uniform(0.05, 0.95))


def random_monotone_diagram(rng, var_count, max_terms=4):
    """Random monotone function built as a disjunction of positive terms."""
    variables = tuple(Variable(f"x{i}") for i in range(var_count))
    manager = Manager(variables)
    f = manager.constant(0)
    for _ in range(rng.randint(1, max_terms)):
        width = rng.randint(1, var_count)
        term = rng.sample(range(var_count), width)
        f = f | manager.constant(1).conjoin_assignment({v: 1 for v in term})
    return manager, f


def table_from_diagram(diagram):
    """Explicit bits of a diagram, for the oracle side of comparisons."""
    domains = tuple(v.arity for v in diagram.manager.variables)
    bits = tuple(diagram.evaluate(x) for x in all_instances(domains))
    return DecisionTable(domains=domains, bits=bits)
