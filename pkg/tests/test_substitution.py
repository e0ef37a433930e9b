import pytest

from core.errors import ArityMismatchError, BudgetExceededError
from core.model import Constraint, FiniteDomain, FiniteFunction, IndexMap
from core.orchestrator import binary_projections, boolean_class
from tests.instances import SEEDS, rng_for
from tools.oracle import oracle_tool
from tools.sampling import random_domain, random_function, random_relation, random_superset
from tools.satisfaction import satisfaction_tool
from tools.substitution import FunctionClass, all_functions, empty_class, full_class, substitution_tool


def test_substitute_diagonalizes(AND, ID):
    assert substitution_tool.substitute(AND, IndexMap.of([0, 0], 1)) == ID


def test_substitute_adds_dummy_argument(bool_domain, ID):
    assert substitution_tool.substitute(ID, IndexMap.of([0], 2)) == FiniteFunction.projection(bool_domain, 2, 0)


def test_substitute_transposes(bool_domain):
    implication = FiniteFunction.from_callable(lambda x, y: int(x <= y), 2, bool_domain)
    swapped = substitution_tool.substitute(implication, IndexMap.of([1, 0], 2))
    assert all(swapped(x, y) == implication(y, x) for x in (0, 1) for y in (0, 1))


def test_substitute_checks_source_arity(AND):
    with pytest.raises(ArityMismatchError):
        substitution_tool.substitute(AND, IndexMap.of([0], 1))


def test_svs_closure_of_and(bool_domain, AND, ID):
    closure = substitution_tool.svs_closure(boolean_class(AND), 2)
    assert closure.cardinality == 4
    assert {ID, AND, *binary_projections()} == set(closure.members)


def test_svs_closure_of_projections_is_itself():
    K = boolean_class(*binary_projections())
    closure = substitution_tool.svs_closure(K, 2)
    # the unary identity is a diagonal of either projection
    assert closure.cardinality == 3
    assert substitution_tool.is_substitution_closed(closure)


def test_svs_closure_of_empty_class(bool_domain):
    K = empty_class(bool_domain, bool_domain, 2)
    assert substitution_tool.svs_closure(K, 2).cardinality == 0


def test_function_class_canonical_order(bool_domain, AND, ID, NEG):
    K = boolean_class(AND, NEG, ID, AND)
    assert K.members == (ID, NEG, AND)
    assert AND in K and K.of_arity(1) == [ID, NEG]
    assert K.issubset(K.union(boolean_class(ID)))


def test_function_class_rejects_arity_over_bound(bool_domain, AND):
    with pytest.raises(ArityMismatchError):
        FunctionClass(input_domain=bool_domain, output_domain=bool_domain, members=[AND], arity_bound=1)


def test_local_closure_is_identity(bool_domain, AND, ID, NEG):
    for K in (boolean_class(AND), boolean_class(ID, NEG, arity_bound=1), empty_class(bool_domain, bool_domain, 2)):
        assert substitution_tool.local_closure_functions(K) == K


def test_full_class_counts(bool_domain):
    assert full_class(bool_domain, bool_domain, 2).cardinality == 20
    assert all_functions(bool_domain, FiniteDomain(name="C", size=3), 1).shape == (9, 2)


def test_all_functions_respects_budget(restore_settings, bool_domain):
    restore_settings.max_table_bits = 3
    with pytest.raises(BudgetExceededError):
        all_functions(bool_domain, bool_domain, 2)


def random_class(rng, A, B, size):
    members = [random_function(rng, A, B, int(rng.integers(1, 3))) for _ in range(size)]
    return FunctionClass(input_domain=A, output_domain=B, members=members, arity_bound=2)


@pytest.mark.parametrize("seed", SEEDS[:30])
def test_svs_closure_is_a_closure_operator(seed):
    rng = rng_for(seed, "closure")
    A, B = random_domain(rng, 3, "A"), random_domain(rng, 3, "B")
    K = random_class(rng, A, B, int(rng.integers(0, 4)))
    larger = K.union(random_class(rng, A, B, int(rng.integers(1, 3))))

    closure = substitution_tool.svs_closure(K, 2)
    assert K.issubset(closure)
    assert closure.issubset(substitution_tool.svs_closure(larger, 2))
    assert substitution_tool.svs_closure(closure, 2) == closure
    assert substitution_tool.is_substitution_closed(closure)


@pytest.mark.parametrize("seed", SEEDS)
def test_substitution_keeps_satisfied_constraints(seed):
    rng = rng_for(seed, "substitution")
    A, B = random_domain(rng, 3, "A"), random_domain(rng, 3, "B")
    f = random_function(rng, A, B, int(rng.integers(1, 3)))
    R = random_relation(rng, A, int(rng.integers(1, 4)), float(rng.random()))
    c = Constraint(antecedent=R, consequent=random_superset(rng, oracle_tool.image(f, R), float(rng.random())))

    target = int(rng.integers(1, 4))
    g = substitution_tool.substitute(f, IndexMap.of([int(i) for i in rng.integers(0, target, size=f.arity)], target))
    assert g.arity == target
    assert satisfaction_tool.satisfies(g, c)
    assert oracle_tool.image(g, R).issubset(c.consequent)
