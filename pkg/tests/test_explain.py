"""Explanations against their brute-force oracles."""

import random

import pytest

from generators import random_table_diagram, table_from_diagram
from oddexplain import (
    DomainError,
    Manager,
    OnOffPartition,
    PolarityError,
    Variable,
    all_instances,
    binary_variables,
    brute_mc_oracle,
    brute_pi_oracle,
    compatibility_filter,
    count_explanations,
    explain_pi,
    mc_explanations,
    mc_explanations_general,
    pi_cover,
    pi_inst,
    shortest_pis,
    star_manager,
)


def pi_key_set(implicants):
    return {frozenset(p.items()) for p in implicants.partial_instances()}


class TestMcAdmissions:
    def test_fully_positive_instance(self, admissions_dd):
        found = mc_explanations(admissions_dd, (1, 1, 1, 1))
        assert list(found.models()) == [(1, 0, 0, 1)]
        assert found.cardinality() == 2

    def test_negative_instance_with_two_explanations(self, admissions_dd):
        found = mc_explanations(admissions_dd, (0, 0, 0, 1))
        assert set(found.models()) == {(0, 0, 1, 1), (0, 1, 0, 1)}

    def test_all_negative_instance_has_five(self, admissions_dd):
        found = mc_explanations(admissions_dd, (0, 0, 0, 0))
        assert found.count() == 5

    def test_oracle_agrees_on_every_row(self, admissions_dd, admissions_table):
        for x in admissions_table.instances():
            found = set(mc_explanations(admissions_dd, x).models())
            assert found == brute_mc_oracle(admissions_table, x)


class TestMcOracleEquivalence:
    def test_random_functions_both_polarities(self):
        rng = random.Random(201)
        for _ in range(60):
            n = rng.randint(1, 6)
            _, f, _ = random_table_diagram(rng, n)
            table = table_from_diagram(f)
            instances = list(all_instances([2] * n))
            chosen = rng.sample(instances, min(6, len(instances)))
            for x in chosen:
                found = set(mc_explanations(f, x).models())
                assert found == brute_mc_oracle(table, x), (n, x)

    def test_explanations_share_one_cardinality(self):
        rng = random.Random(202)
        for _ in range(30):
            n = rng.randint(1, 6)
            _, f, _ = random_table_diagram(rng, n)
            x = tuple(rng.randint(0, 1) for _ in range(n))
            found = mc_explanations(f, x)
            decision = found.decision
            counts = {
                sum(1 for v in m if v == decision) for m in found.models()
            }
            assert len(counts) <= 1

    def test_multi_valued_features_need_the_general_form(self):
        rng = random.Random(203)
        _, f, _ = random_table_diagram(rng, 3, domains=[2, 3, 2])
        with pytest.raises(DomainError):
            mc_explanations(f, (0, 2, 1))

    def test_constant_function(self):
        m = Manager(binary_variables(["a", "b", "c"]))
        found = mc_explanations(m.constant(1), (1, 1, 0))
        assert list(found.models()) == [(0, 0, 0)]


def brute_general_mc(table, x, partition):
    """Enumeration oracle for the on/off generalization."""
    decision = table.decision(x)
    domains = table.domains
    effective_on = []
    for var, on in enumerate(partition.on_values):
        on = frozenset(on)
        domain = frozenset(range(domains[var]))
        effective_on.append(on if decision else domain - on)
    fixed = partition.fixed_assignment(x)
    choice_sets = []
    for var in range(len(domains)):
        off = frozenset(range(domains[var])) - effective_on[var]
        if var in fixed or x[var] in off:
            choice_sets.append((x[var],))
        else:
            choice_sets.append(tuple(sorted({x[var]} | off)))
    best = None
    found = set()
    import itertools

    for candidate in itertools.product(*choice_sets):
        if table.decision(candidate) != decision:
            continue
        cost = sum(
            1 for var, v in enumerate(candidate) if v in effective_on[var]
        )
        if best is None or cost < best:
            best = cost
            found = {candidate}
        elif cost == best:
            found.add(candidate)
    return found


class TestMcGeneral:
    def test_binary_all_on_partition_reduces_to_the_classic_form(self):
        rng = random.Random(204)
        for _ in range(30):
            n = rng.randint(1, 6)
            _, f, _ = random_table_diagram(rng, n)
            partition = OnOffPartition.binary(n)
            x = tuple(rng.randint(0, 1) for _ in range(n))
            classic = set(mc_explanations(f, x).models())
            general = set(mc_explanations_general(f, x, partition).models())
            assert classic == general, (n, x, f.evaluate(x))

    def test_multi_valued_against_enumeration(self):
        rng = random.Random(205)
        for _ in range(30):
            n = rng.randint(2, 4)
            domains = [rng.randint(2, 3) for _ in range(n)]
            _, f, _ = random_table_diagram(rng, n, domains=domains)
            table = table_from_diagram(f)
            on_values = tuple(
                frozenset(
                    rng.sample(range(b), rng.randint(0, b - 1))
                )
                for b in domains
            )
            if not any(on_values):
                on_values = (frozenset((1,)),) + on_values[1:]
            partition = OnOffPartition(on_values=on_values)
            x = tuple(rng.randrange(b) for b in domains)
            found = set(mc_explanations_general(f, x, partition).models())
            assert found == brute_general_mc(table, x, partition), (x, on_values)

    def test_three_valued_feature_may_move_to_either_off_value(self):
        # single ternary feature, on = {v2}; both off values keep the
        # decision, so both flips appear as explanations
        m = Manager((Variable("t", ("v0", "v1", "v2")),))
        f = m.constant(1)
        partition = OnOffPartition(on_values=(frozenset((2,)),))
        found = set(mc_explanations_general(f, (2,), partition).models())
        assert found == {(0,), (1,)}

    def test_fixing_every_feature_returns_the_instance(self, admissions_dd):
        partition = OnOffPartition.binary(4, fixed=(0, 1, 2, 3))
        found = mc_explanations_general(admissions_dd, (1, 1, 1, 1), partition)
        assert list(found.models()) == [(1, 1, 1, 1)]

    def test_inconsistent_fixed_assignment_is_rejected(self, admissions_dd):
        partition = OnOffPartition(
            on_values=tuple(frozenset((1,)) for _ in range(4)),
            fixed=((0, 0),),
        )
        with pytest.raises(ValueError):
            mc_explanations_general(admissions_dd, (1, 1, 1, 1), partition)


class TestPiCover:
    def test_single_literal(self):
        m = Manager(binary_variables(["a"]))
        cover = pi_cover(m.literal(0, 1))
        assert pi_key_set(cover) == {frozenset({(0, 1)})}

    def test_disjunction(self):
        m = Manager(binary_variables(["a", "b"]))
        cover = pi_cover(m.literal(0, 1) | m.literal(1, 1))
        assert pi_key_set(cover) == {
            frozenset({(0, 1)}),
            frozenset({(1, 1)}),
        }

    def test_admissions_positive_primes(self, admissions_dd):
        cover = pi_cover(admissions_dd)
        assert pi_key_set(cover) == {
            frozenset({(0, 1), (3, 1)}),
            frozenset({(0, 1), (1, 1), (2, 1)}),
            frozenset({(1, 1), (2, 1), (3, 1)}),
        }

    def test_constant_functions(self):
        m = Manager(binary_variables(["a", "b"]))
        assert pi_key_set(pi_cover(m.constant(1))) == {frozenset()}
        assert pi_cover(m.constant(0)).count() == 0

    def test_cover_matches_the_oracle_with_no_instance_filter(self):
        rng = random.Random(206)
        for _ in range(25):
            n = rng.randint(1, 5)
            domains = [rng.randint(2, 3) for _ in range(n)]
            _, f, _ = random_table_diagram(rng, n, domains=domains)
            table = table_from_diagram(f)
            # union of instance-directed oracles over all positive rows
            # is exactly the positive prime set
            expected = set()
            for x in table.instances():
                if table.decision(x) == 1:
                    expected |= brute_pi_oracle(table, x)
            assert pi_key_set(pi_cover(f)) == expected


class TestPiInst:
    def test_requires_positive_polarity(self, admissions_dd):
        with pytest.raises(PolarityError):
            pi_inst(admissions_dd, (0, 0, 0, 0))

    def test_admissions_rows(self, admissions_dd):
        negative = explain_pi(admissions_dd, (1, 1, 0, 0))
        assert pi_key_set(negative) == {frozenset({(2, 0), (3, 0)})}
        positive = explain_pi(admissions_dd, (1, 1, 1, 1))
        assert pi_key_set(positive) == {
            frozenset({(0, 1), (3, 1)}),
            frozenset({(0, 1), (1, 1), (2, 1)}),
            frozenset({(1, 1), (2, 1), (3, 1)}),
        }
        other_negative = explain_pi(admissions_dd, (0, 0, 1, 1))
        assert pi_key_set(other_negative) == {frozenset({(0, 0), (1, 0)})}

    def test_oracle_equivalence_both_polarities(self):
        rng = random.Random(207)
        for _ in range(50):
            n = rng.randint(1, 6)
            domains = [rng.randint(2, 3) for _ in range(n)] if rng.random() < 0.3 else [2] * n
            _, f, _ = random_table_diagram(rng, n, domains=domains)
            table = table_from_diagram(f)
            instances = list(all_instances(domains))
            for x in rng.sample(instances, min(4, len(instances))):
                found = pi_key_set(explain_pi(f, x))
                assert found == brute_pi_oracle(table, x), (domains, x)

    def test_agrees_with_filtered_cover(self):
        rng = random.Random(208)
        for _ in range(30):
            n = rng.randint(1, 8)
            _, f, _ = random_table_diagram(rng, n)
            x = tuple(rng.randint(0, 1) for _ in range(n))
            g = f if f.evaluate(x) else f.complement()
            ext = star_manager(f.manager)
            directed = pi_inst(g, x, ext_manager=ext)
            filtered = compatibility_filter(pi_cover(g, ext_manager=ext), x)
            assert pi_key_set(directed) == pi_key_set(filtered)
            assert directed.diagram == filtered.diagram

    def test_no_explanation_subsumes_another(self):
        rng = random.Random(209)
        for _ in range(30):
            n = rng.randint(1, 6)
            _, f, _ = random_table_diagram(rng, n)
            x = tuple(rng.randint(0, 1) for _ in range(n))
            keys = pi_key_set(explain_pi(f, x))
            for a in keys:
                for b in keys:
                    assert not (a < b)

    def test_every_explanation_forces_the_decision(self):
        rng = random.Random(210)
        for _ in range(30):
            n = rng.randint(1, 6)
            _, f, _ = random_table_diagram(rng, n)
            x = tuple(rng.randint(0, 1) for _ in range(n))
            decision = f.evaluate(x)
            g = f if decision else f.complement()
            for partial in explain_pi(f, x).partial_instances():
                fixed = g.conjoin_assignment(partial)
                free = 1
                for var in range(n):
                    if var not in partial:
                        free *= 2
                assert fixed.model_count() == free


class TestShortestAndCounts:
    def test_admissions_shortest_and_histogram(self, admissions_dd):
        found = explain_pi(admissions_dd, (1, 1, 1, 1))
        assert count_explanations(found) == 3
        assert found.length_histogram() == {2: 1, 3: 2}
        assert shortest_pis(found) == [{0: 1, 3: 1}]
        assert found.min_length() == 2

    def test_single_implicant_set(self):
        m = Manager(binary_variables(["a", "b"]))
        found = explain_pi(m.literal(0, 1), (1, 0))
        assert shortest_pis(found) == [{0: 1}]

    def test_shortest_matches_brute_minimum(self):
        rng = random.Random(211)
        for _ in range(30):
            n = rng.randint(1, 6)
            _, f, _ = random_table_diagram(rng, n)
            table = table_from_diagram(f)
            x = tuple(rng.randint(0, 1) for _ in range(n))
            expected = brute_pi_oracle(table, x)
            found = explain_pi(f, x)
            if not expected:
                assert found.count() == 0
                continue
            best = min(len(z) for z in expected)
            assert found.min_length() == best
            assert {frozenset(p.items()) for p in found.shortest()} == {
                z for z in expected if len(z) == best
            }

    def test_empty_set_counts_zero(self):
        m = Manager(binary_variables(["a", "b"]))
        cover = pi_cover(m.constant(0))
        assert count_explanations(cover) == 0
        assert cover.shortest() == []
        assert cover.length_histogram() == {}

    def test_mc_count(self, admissions_dd):
        found = mc_explanations(admissions_dd, (0, 0, 0, 0))
        assert count_explanations(found) == 5


class TestInstDirectedSize:
    def test_directed_never_larger_than_filtered_cover(self):
        rng = random.Random(212)
        for _ in range(40):
            n = rng.randint(2, 8)
            _, f, _ = random_table_diagram(rng, n)
            x = tuple(rng.randint(0, 1) for _ in range(n))
            g = f if f.evaluate(x) else f.complement()
            ext = star_manager(f.manager)
            directed = pi_inst(g, x, ext_manager=ext)
            filtered = compatibility_filter(pi_cover(g, ext_manager=ext), x)
            assert directed.diagram.size() <= filtered.diagram.size()


class TestBruteOracles:
    def test_mc_oracle_on_a_constant_table(self):
        rng = random.Random(213)
        m = Manager(binary_variables(["a", "b", "c"]))
        table = table_from_diagram(m.constant(1))
        x = (1, 0, 1)
        assert brute_mc_oracle(table, x) == {(0, 0, 0)}

    def test_pi_oracle_on_a_constant_table(self):
        m = Manager(binary_variables(["a", "b"]))
        table = table_from_diagram(m.constant(1))
        assert brute_pi_oracle(table, (1, 1)) == {frozenset()}

    def test_pi_oracle_feature_cap(self):
        import oddexplain

        table = oddexplain.DecisionTable(
            domains=(2,) * 17, bits=(0,) * 2**17
        )
        with pytest.raises(oddexplain.CapacityError):
            brute_pi_oracle(table, (0,) * 17)
