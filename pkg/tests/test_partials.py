import pytest

from core.errors import PreconditionError
from core.model import Constraint, FiniteDomain, Relation
from tools.partials import (
    PartialFamily,
    all_partial_functions,
    injective_partial_functions,
    partials_tool,
    satisfied_by_family,
)
from tools.satisfaction import PartialFunction


@pytest.fixture
def three() -> FiniteDomain:
    return FiniteDomain(name="C", size=3)


def test_family_sizes(bool_domain, three):
    assert all_partial_functions(bool_domain, bool_domain, [1]).cardinality == 9
    # 1 + 9 + 18 + 6 injective partial maps on three points
    assert injective_partial_functions(three, three, [1]).cardinality == 34


def test_all_partial_functions_are_extensible(bool_domain):
    result = partials_tool.is_extensible_family(all_partial_functions(bool_domain, bool_domain, [1, 2]))
    assert result.extensible
    assert result.payload() == {"extensible": True}


def test_injective_family_into_smaller_codomain(bool_domain, three):
    result = partials_tool.is_extensible_family(injective_partial_functions(three, bool_domain, [1]))
    assert not result.extensible
    assert result.function.size == 2
    assert not result.function.is_defined(result.point)
    assert result.payload()["extensible"] is False


def test_injective_family_of_equal_size_is_extensible(three):
    assert partials_tool.is_extensible_family(injective_partial_functions(three, three, [1])).extensible


def test_binary_injective_family_hits_pigeonhole(three):
    assert not partials_tool.is_extensible_family(injective_partial_functions(three, three, [1, 2])).extensible


def test_family_of_a_single_total_function(bool_domain, AND):
    F = PartialFamily(input_domain=bool_domain, output_domain=bool_domain, members=[PartialFunction.from_function(AND)])
    assert partials_tool.is_extensible_family(F).extensible


def test_family_of_a_single_nowhere_defined_function(bool_domain):
    nowhere = PartialFunction(arity=1, input_domain=bool_domain, output_domain=bool_domain)
    F = PartialFamily(input_domain=bool_domain, output_domain=bool_domain, members=[nowhere])
    result = partials_tool.is_extensible_family(F)
    assert not result.extensible and result.function == nowhere


def test_empty_family(bool_domain):
    F = PartialFamily(input_domain=bool_domain, output_domain=bool_domain)
    assert partials_tool.is_extensible_family(F).extensible
    assert F.arities == []


def test_family_deduplicates_members(bool_domain):
    p = PartialFunction.from_points({(0,): 1}, 1, bool_domain, bool_domain)
    F = PartialFamily(input_domain=bool_domain, output_domain=bool_domain, members=[p, p])
    assert F.cardinality == 1 and p in F


def test_satisfied_by_family(bool_domain, delta):
    F = injective_partial_functions(bool_domain, bool_domain, [1])
    satisfied = satisfied_by_family(F, 2)
    assert satisfied.least_consequent(delta) == delta
    assert Constraint(antecedent=delta, consequent=delta) in satisfied
    eq = Relation.equality(bool_domain)
    assert Constraint(antecedent=eq, consequent=eq) in satisfied
    assert Constraint(antecedent=delta, consequent=Relation.of(bool_domain, [(0, 1)])) not in satisfied


def test_harness_on_injective_family(three):
    report = partials_tool.proposition1_harness(injective_partial_functions(three, three, [1]), 40, 2, seed=3)
    assert report["violations"] == []
    assert report["status"] == "success"
    assert report["family_size"] == 34


def test_harness_is_independent_of_jobs(bool_domain):
    F = all_partial_functions(bool_domain, bool_domain, [1])
    first = partials_tool.proposition1_harness(F, 10, 2, seed=5, jobs=1)
    second = partials_tool.proposition1_harness(F, 10, 2, seed=5, jobs=3)
    assert first["violations"] == second["violations"] == []


def test_harness_rejects_non_extensible_family(three, bool_domain):
    with pytest.raises(PreconditionError):
        partials_tool.proposition1_harness(injective_partial_functions(three, bool_domain, [1]), 5, 2)
