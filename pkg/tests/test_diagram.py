"""Core diagram engine: interning, queries, transformations."""

import random

import pytest

from generators import random_table_diagram
from oddexplain import (
    COMPLETE,
    ArityError,
    DomainError,
    Manager,
    ManagerError,
    StructureError,
    all_instances,
    binary_variables,
    diagram_from_table,
    instance_rank,
)

from oddexplain.diagram import SINK0, SINK1


def small_manager(n=3):
    return Manager(binary_variables([f"x{i}" for i in range(n)]))


class TestInterning:
    def test_all_equal_children_collapse_in_reduced_mode(self):
        m = small_manager()
        assert m.intern_node(1, [SINK0, SINK0]) == SINK0
        assert m.intern_node(2, [SINK1, SINK1]) == SINK1

    def test_hash_consing_is_idempotent(self):
        m = small_manager()
        a = m.intern_node(1, [SINK0, SINK1])
        b = m.intern_node(1, [SINK0, SINK1])
        assert a == b
        assert len(m) == 3

    def test_ordering_violation_is_rejected(self):
        m = small_manager()
        inner = m.intern_node(1, [SINK0, SINK1])
        with pytest.raises(StructureError):
            m.intern_node(2, [inner, SINK1])
        with pytest.raises(StructureError):
            m.intern_node(1, [inner, SINK0])

    def test_wrong_arity_is_rejected(self):
        m = small_manager()
        with pytest.raises(ArityError):
            m.intern_node(0, [SINK0])
        with pytest.raises(ArityError):
            m.intern_node(0, [SINK0, SINK1, SINK0])

    def test_complete_mode_keeps_equal_children_but_not_empty_nodes(self):
        m = Manager(binary_variables(["a", "b"]), mode=COMPLETE)
        node = m.intern_node(1, [SINK1, SINK1])
        assert node > 1
        assert m.intern_node(1, [SINK0, SINK0]) == SINK0

    def test_mixed_managers_are_rejected(self):
        m1, m2 = small_manager(), small_manager()
        with pytest.raises(ManagerError):
            m1.constant(1).combine(m2.constant(1), "and")


class TestEvaluate:
    def test_constant_one_accepts_everything(self):
        m = small_manager()
        one = m.constant(1)
        for x in all_instances([2, 2, 2]):
            assert one.evaluate(x) == 1

    def test_admissions_rows(self, admissions_dd):
        assert admissions_dd.evaluate((1, 1, 0, 1)) == 1
        assert admissions_dd.evaluate((0, 0, 1, 1)) == 0

    def test_out_of_domain_value_raises(self):
        m = small_manager()
        with pytest.raises(DomainError):
            m.constant(1).evaluate((0, 2, 0))
        with pytest.raises(DomainError):
            m.constant(1).evaluate((0, 0))


class TestComplement:
    def test_sinks_swap(self):
        m = small_manager()
        assert m.constant(1).complement().root == SINK0

    def test_admissions_complement_count(self, admissions_dd):
        assert admissions_dd.complement().model_count() == 10

    def test_involution_and_pointwise_negation(self):
        rng = random.Random(7)
        for _ in range(25):
            n = rng.randint(1, 8)
            _, f, bits = random_table_diagram(rng, n)
            g = f.complement()
            assert g.complement() == f
            for x in all_instances([2] * n):
                assert g.evaluate(x) == 1 - f.evaluate(x)


class TestRestrict:
    def test_admissions_cofactor_positive_completions(self, admissions_dd):
        fixed = admissions_dd.restrict(0, 1)
        completions = [
            x for x in all_instances([2, 2, 2, 2])
            if x[0] == 0 and fixed.evaluate(x) == 1
        ]
        assert len(completions) == 5

    def test_absent_variable_is_identity(self):
        m = small_manager()
        literal = m.literal(1, 1)
        assert literal.restrict(0, 0) == literal
        assert literal.restrict(2, 1) == literal

    def test_conjunction_collapses(self):
        m = small_manager()
        f = m.literal(0, 1) & m.literal(1, 1)
        assert f.restrict(0, 0).root == SINK0

    def test_agrees_with_overwriting_oracle(self):
        rng = random.Random(11)
        for _ in range(20):
            n = rng.randint(2, 6)
            _, f, _ = random_table_diagram(rng, n)
            var = rng.randrange(n)
            value = rng.randint(0, 1)
            g = f.restrict(var, value)
            for x in all_instances([2] * n):
                patched = list(x)
                patched[var] = value
                assert g.evaluate(x) == f.evaluate(tuple(patched))


class TestCombine:
    def test_true_is_identity_for_and(self):
        rng = random.Random(3)
        m, f, _ = random_table_diagram(rng, 4)
        assert f.combine(m.constant(1), "and") == f

    def test_contradiction(self):
        rng = random.Random(4)
        _, f, _ = random_table_diagram(rng, 4)
        assert (f & f.complement()).root == SINK0

    def test_disjunction_of_literals(self):
        m = small_manager(2)
        assert (m.literal(0, 1) | m.literal(1, 1)).model_count() == 3

    def test_pointwise_against_tables(self):
        rng = random.Random(5)
        for _ in range(15):
            n = rng.randint(1, 6)
            variables = binary_variables([f"x{i}" for i in range(n)])
            m = Manager(variables)
            size = 2**n
            bits_f = [rng.randint(0, 1) for _ in range(size)]
            bits_g = [rng.randint(0, 1) for _ in range(size)]
            f = diagram_from_table(m, bits_f)
            g = diagram_from_table(m, bits_g)
            for op, fn in (
                ("and", lambda a, b: a & b),
                ("or", lambda a, b: a | b),
                ("diff", lambda a, b: a & (1 - b)),
            ):
                h = f.combine(g, op)
                for x in all_instances([2] * n):
                    r = instance_rank([2] * n, x)
                    assert h.evaluate(x) == fn(bits_f[r], bits_g[r])


class TestConjoinAssignment:
    def test_on_constant_builds_the_literal(self):
        m = small_manager()
        assert m.constant(1).conjoin_assignment({1: 1}) == m.literal(1, 1)

    def test_admissions_unsatisfiable_restriction(self, admissions_dd):
        g = admissions_dd.conjoin_assignment({2: 0, 3: 0})
        assert g.root == SINK0

    def test_empty_assignment_is_identity(self, admissions_dd):
        assert admissions_dd.conjoin_assignment({}) == admissions_dd

    def test_matches_literal_products(self):
        rng = random.Random(13)
        for _ in range(20):
            n = rng.randint(2, 7)
            m, f, _ = random_table_diagram(rng, n)
            chosen = rng.sample(range(n), rng.randint(0, n))
            alpha = {var: rng.randint(0, 1) for var in chosen}
            direct = f.conjoin_assignment(alpha)
            product = f
            for var, value in alpha.items():
                product = product & m.literal(var, value)
            assert direct == product


class TestCardinalityMinimize:
    def one_costs(self, manager, target=1):
        return [
            [1 if v == target else 0 for v in range(var.arity)]
            for var in manager.variables
        ]

    def test_tautology_minimizes_to_all_zero(self):
        m = small_manager(4)
        g = m.constant(1).cardinality_minimize(self.one_costs(m))
        assert list(g.models()) == [(0, 0, 0, 0)]

    def test_admissions_one_minimization(self, admissions_dd):
        g = admissions_dd.cardinality_minimize(self.one_costs(admissions_dd.manager))
        assert list(g.models()) == [(1, 0, 0, 1)]

    def test_admissions_zero_minimization_of_complement(self, admissions_dd):
        g = admissions_dd.complement().cardinality_minimize(
            self.one_costs(admissions_dd.manager, target=0)
        )
        assert set(g.models()) == {
            (0, 0, 1, 1),
            (0, 1, 0, 1),
            (0, 1, 1, 0),
            (1, 0, 1, 0),
            (1, 1, 0, 0),
        }

    def test_empty_function_minimizes_to_empty(self):
        m = small_manager()
        g = m.constant(0).cardinality_minimize(self.one_costs(m))
        assert g.root == SINK0

    def test_against_brute_force(self):
        rng = random.Random(17)
        for _ in range(30):
            n = rng.randint(1, 8)
            m, f, bits = random_table_diagram(rng, n)
            costs = [[rng.randint(0, 1) for _ in range(2)] for _ in range(n)]
            g = f.cardinality_minimize(costs)
            instances = list(all_instances([2] * n))
            model_costs = {
                x: sum(costs[i][v] for i, v in enumerate(x))
                for x in instances
                if bits[instance_rank([2] * n, x)]
            }
            if not model_costs:
                assert g.root == SINK0
                continue
            best = min(model_costs.values())
            expected = {x for x, c in model_costs.items() if c == best}
            assert set(g.models()) == expected
            assert g.min_cost(costs) == best


class TestCounting:
    def test_admissions_model_count(self, admissions_dd):
        assert admissions_dd.model_count() == 6

    def test_empty(self):
        m = small_manager()
        assert m.constant(0).model_count() == 0

    def test_complement_partition(self):
        rng = random.Random(19)
        for _ in range(20):
            n = rng.randint(1, 5)
            domains = [rng.randint(2, 3) for _ in range(n)]
            _, f, _ = random_table_diagram(rng, n, domains)
            total = 1
            for b in domains:
                total *= b
            assert f.model_count() + f.complement().model_count() == total


class TestEnumeration:
    def test_admissions_models_in_order(self, admissions_dd):
        assert list(admissions_dd.models()) == [
            (0, 1, 1, 1),
            (1, 0, 0, 1),
            (1, 0, 1, 1),
            (1, 1, 0, 1),
            (1, 1, 1, 0),
            (1, 1, 1, 1),
        ]

    def test_constant_over_two_variables(self):
        m = Manager(binary_variables(["a", "b"]))
        assert list(m.constant(1).models()) == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_models_are_distinct_sorted_and_counted(self):
        rng = random.Random(23)
        for _ in range(20):
            n = rng.randint(1, 7)
            domains = [rng.randint(2, 3) for _ in range(n)]
            _, f, _ = random_table_diagram(rng, n, domains)
            models = list(f.models())
            assert len(models) == len(set(models)) == f.model_count()
            assert models == sorted(models)
            assert all(f.evaluate(x) == 1 for x in models)


class TestSize:
    def test_sink_only(self):
        m = small_manager()
        assert m.constant(1).size() == 1

    def test_literal(self):
        m = small_manager()
        assert m.literal(0, 1).size() == 3

    def test_admissions_size_regression(self, admissions_dd):
        # frozen after validating the compiler against the brute-force table
        assert admissions_dd.size() == 8


class TestCanonicity:
    def test_equal_functions_share_roots(self):
        rng = random.Random(29)
        for _ in range(10):
            n = rng.randint(1, 10)
            variables = binary_variables([f"x{i}" for i in range(n)])
            m = Manager(variables)
            bits = [rng.randint(0, 1) for _ in range(2**n)]
            f = diagram_from_table(m, bits)
            g = diagram_from_table(m, bits)
            assert f == g

    def test_distinct_functions_have_distinct_roots(self):
        rng = random.Random(31)
        n = 6
        m = Manager(binary_variables([f"x{i}" for i in range(n)]))
        seen = {}
        for _ in range(40):
            bits = tuple(rng.randint(0, 1) for _ in range(2**n))
            root = diagram_from_table(m, bits).root
            if bits in seen:
                assert seen[bits] == root
            else:
                assert root not in seen.values()
                seen[bits] = root


class TestCostHistogram:
    def test_against_brute_force(self):
        rng = random.Random(37)
        for _ in range(15):
            n = rng.randint(1, 6)
            domains = [rng.randint(2, 3) for _ in range(n)]
            _, f, _ = random_table_diagram(rng, n, domains)
            costs = [[rng.randint(0, 1) for _ in range(b)] for b in domains]
            hist = f.cost_histogram(costs)
            expected = {}
            for x in f.models():
                c = sum(costs[i][v] for i, v in enumerate(x))
                expected[c] = expected.get(c, 0) + 1
            assert hist == expected
            assert sum(hist.values()) == f.model_count()


def test_table_builder_validates_length():
    m = Manager(binary_variables(["a", "b"]))
    with pytest.raises(DomainError):
        diagram_from_table(m, [0, 1])
