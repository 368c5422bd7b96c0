"""Monotone classifiers and where the two explanation kinds coincide.

A monotone decision function never turns a yes into a no when features
flip upwards.  On a compiled diagram that property is decidable by a
per-variable cofactor test, and for monotone functions the
minimum-cardinality explanations are exactly the shortest
prime-implicant explanations with the missing features filled in
against the decision.
"""

from oddexplain import (
    all_instances,
    compile_naive_bayes,
    explain_pi,
    is_monotone,
    matches,
    mc_explanations,
    mc_matches_shortest_pi,
    render_instance,
    render_partial,
)
from oddexplain.fixtures import admissions_classifier, roll_call_classifier

nb = admissions_classifier()
variables = nb.variables()
diagram = compile_naive_bayes(nb)

report = is_monotone(diagram)
print("admissions classifier monotone:", report.monotone)

x = (1, 1, 0, 1)
mc = list(mc_explanations(diagram, x).models())
shortest = explain_pi(diagram, x).shortest()
print("\napplicant:", render_instance(variables, x))
print("MC-explanations:    ", [render_instance(variables, m) for m in mc])
print("shortest implicants:", [render_partial(variables, p) for p in shortest])
print("match up:", matches(mc[0], shortest[0], diagram.evaluate(x)))

print("\ncorrespondence on every instance:")
ok = all(mc_matches_shortest_pi(diagram, x) for x in all_instances(nb.domains))
print("  MC-explanations == shortest PI-explanations everywhere:", ok)

# A classifier with reversed issues is not monotone; the checker
# produces a concrete witness pair.
ballots = roll_call_classifier()
ballots_dd = compile_naive_bayes(ballots)
report = is_monotone(ballots_dd)
print("\nroll-call classifier monotone:", report.monotone)
if not report.monotone:
    low, high = report.witness
    flipped = [ballots.feature_names[i] for i, f in enumerate(report.per_variable) if not f]
    print("  issues breaking monotonicity:", ", ".join(flipped))
    print("  witness: turning the listed votes up flips a yes to a no")
    print("    low  (classified +):", render_instance(ballots.variables(), low))
    print("    high (classified -):", render_instance(ballots.variables(), high))
