"""Explain individual decisions: culprit sets and sufficient sets.

Two complementary questions about a single classification:

* which of the features currently supporting the decision are actually
  responsible for it?  (minimum-cardinality explanations)
* which features, once fixed, make every other feature irrelevant?
  (prime-implicant explanations)
"""

from oddexplain import (
    compile_naive_bayes,
    count_explanations,
    explain_pi,
    mc_explanations,
    render_instance,
    render_partial,
    shortest_pis,
)
from oddexplain.fixtures import admissions_classifier

nb = admissions_classifier()
variables = nb.variables()
diagram = compile_naive_bayes(nb)

# -- a fully positive applicant ------------------------------------------
x = (1, 1, 1, 1)
print("applicant:", render_instance(variables, x), "-> admitted")

found = mc_explanations(diagram, x)
print("\nminimum-cardinality explanations (culprits of the admission):")
for model in found.models():
    print(" ", render_instance(variables, model))
print(
    f"so {found.cardinality()} positive features carry the decision: the rest "
    "could all have been negative."
)

implicants = explain_pi(diagram, x)
print(f"\nprime-implicant explanations ({count_explanations(implicants)}):")
for partial in implicants.partial_instances():
    print(" ", render_partial(variables, partial))
print("length histogram:", implicants.length_histogram())
print("shortest:", [render_partial(variables, p) for p in shortest_pis(implicants)])

# -- a rejected applicant ---------------------------------------------------
x = (0, 0, 0, 1)
print("\napplicant:", render_instance(variables, x), "-> rejected")
found = mc_explanations(diagram, x)
print("the rejection survives either of these feature repairs:")
for model in found.models():
    print(" ", render_instance(variables, model))

implicants = explain_pi(diagram, x)
print("and is already forced by:")
for partial in implicants.partial_instances():
    print(" ", render_partial(variables, partial))

# -- every explanation is checkable on the diagram itself -----------------
g = diagram.complement()  # rejected: check against the negative function
for partial in implicants.partial_instances():
    pinned = g.conjoin_assignment(partial)
    completions = 2 ** (len(variables) - len(partial))
    assert pinned.model_count() == completions
print("\nsufficiency of every implicant re-verified by diagram queries: ok")
