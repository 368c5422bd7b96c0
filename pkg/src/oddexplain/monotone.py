"""Monotonicity analysis of compiled decision functions.

A decision function over binary features is monotone when turning
features on can never turn the decision off.  Monotonicity is decided
on the diagram by a per-variable cofactor-implication test, quadratic
in the diagram size overall.  For monotone functions the two
explanation families collapse into each other: every minimum-cardinality
explanation is a shortest prime-implicant explanation with the missing
features filled in against the decision, and vice versa; this module
also provides that correspondence check.
"""

from dataclasses import dataclass

from .diagram import SINK0
from .errors import DomainError
from .explain import explain_pi, mc_explanations


@dataclass(frozen=True)
class MonotonicityReport:
    """Verdict plus a concrete violation when the function is not monotone.

    The witness is a pair (lower, upper) of instances whose on-features
    are nested but whose decisions are inverted: f(lower) = 1 while
    f(upper) = 0.
    """

    monotone: bool
    witness: tuple | None
    per_variable: tuple

    def __bool__(self):
        return self.monotone


def is_monotone(f, flip=None):
    """Decide monotonicity of a binary-feature decision function.

    ``flip`` optionally marks variables whose value order is reversed
    (monotone-decreasing features).  For each variable the test checks
    that the off-cofactor implies the on-cofactor; any satisfying
    assignment of the violating conjunction yields a witness pair.
    """
    manager = f.manager
    for var in manager.variables:
        if var.arity != 2:
            raise DomainError(
                f"monotonicity needs binary variables, but {var.name!r} has "
                f"{var.arity} values"
            )
    n = manager.var_count
    if flip is None:
        flip = (False,) * n
    flags = []
    witness = None
    for var in range(n):
        low, high = (1, 0) if flip[var] else (0, 1)
        f_low = f.restrict(var, low)
        f_high = f.restrict(var, high)
        violation = f_low & f_high.complement()
        ok = violation.root == SINK0
        flags.append(ok)
        if not ok and witness is None:
            model = next(violation.models())
            lower = list(model)
            upper = list(model)
            lower[var] = low
            upper[var] = high
            witness = (tuple(lower), tuple(upper))
    return MonotonicityReport(
        monotone=all(flags), witness=witness, per_variable=tuple(flags)
    )


def matches(mc_instance, pi_explanation, decision):
    """Does the complete instance arise from the partial one by default-fill?

    For a positive decision the missing features fill with 0, for a
    negative decision with 1.
    """
    fill = 0 if decision else 1
    filled = tuple(
        pi_explanation.get(var, fill) for var in range(len(mc_instance))
    )
    return filled == tuple(mc_instance)


def mc_matches_shortest_pi(f, x):
    """Check that MC-explanations and shortest PI-explanations coincide.

    Requires a monotone function.  Returns True iff every
    minimum-cardinality explanation of the decision on ``x`` matches
    some shortest prime-implicant explanation and conversely.
    """
    if not is_monotone(f).monotone:
        raise ValueError("the decision function is not monotone")
    decision = f.evaluate(x)
    mc_set = list(mc_explanations(f, x).models())
    shortest = explain_pi(f, x).shortest()
    forward = all(
        any(matches(mc, pi, decision) for pi in shortest) for mc in mc_set
    )
    backward = all(
        any(matches(mc, pi, decision) for mc in mc_set) for pi in shortest
    )
    return forward and backward
