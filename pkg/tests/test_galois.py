import pytest

from core.errors import PreconditionError
from core.model import Constraint, FiniteFunction, Relation
from core.orchestrator import binary_projections, boolean_class
from tools.galois import ConstraintSet, SatisfiedConstraints, all_relations, galois_tool
from tests.instances import SEEDS, rng_for
from tools.oracle import oracle_tool
from tools.sampling import random_constraint
from tools.satisfaction import satisfaction_tool
from tools.substitution import FunctionClass, empty_class, full_class, substitution_tool


def constraint_set(*members, arity_bound=None):
    first = members[0]
    return ConstraintSet(
        input_domain=first.input_domain,
        output_domain=first.output_domain,
        members=members,
        arity_bound=arity_bound,
    )


def test_all_relations_counts(bool_domain):
    assert len(list(all_relations(bool_domain, 1))) == 4
    assert len(list(all_relations(bool_domain, 2))) == 16


def test_functions_satisfying_disequality(bool_domain, delta, ID, NEG):
    T = constraint_set(Constraint(antecedent=delta, consequent=delta))
    unary = galois_tool.functions_satisfying(T, 1)
    assert set(unary.members) == {ID, NEG}

    binary = galois_tool.functions_satisfying(T, 2).of_arity(2)
    expected = {
        FiniteFunction.projection(bool_domain, 2, 0),
        FiniteFunction.projection(bool_domain, 2, 1),
        FiniteFunction.from_callable(lambda x, y: 1 - x, 2, bool_domain),
        FiniteFunction.from_callable(lambda x, y: 1 - y, 2, bool_domain),
    }
    assert set(binary) == expected


def test_functions_satisfying_empty_set(bool_domain):
    T = ConstraintSet(input_domain=bool_domain, output_domain=bool_domain, members=[], arity_bound=2)
    assert galois_tool.functions_satisfying(T, 2) == full_class(bool_domain, bool_domain, 2)


def test_constraints_satisfied_by_identity(bool_domain, ID):
    T = galois_tool.constraints_satisfied_by(boolean_class(ID, arity_bound=1), 1)
    assert T.cardinality == 9
    assert all(c.antecedent.issubset(c.consequent) for c in T.members)


def test_constraints_satisfied_by_empty_class(bool_domain):
    T = galois_tool.constraints_satisfied_by(empty_class(bool_domain, bool_domain, 1), 1)
    assert T.cardinality == 16


def test_satisfied_constraints_membership(bool_domain, AND, delta):
    satisfied = SatisfiedConstraints.from_class(boolean_class(AND), 2)
    image = satisfaction_tool.image_of_relation(AND, delta)
    assert satisfied.least_consequent(delta) == image
    assert Constraint(antecedent=delta, consequent=image) in satisfied
    assert Constraint(antecedent=delta, consequent=delta) not in satisfied
    assert Constraint(antecedent=Relation.full(bool_domain, 3), consequent=Relation.full(bool_domain, 3)) not in satisfied


def test_separating_constraint_for_negation(bool_domain, NEG):
    K = substitution_tool.svs_closure(boolean_class(*binary_projections()), 2)
    c = galois_tool.separating_constraint(K, NEG)
    single = Relation.of(bool_domain, [(0,)])
    assert c == Constraint(antecedent=single, consequent=single)


def test_separating_constraint_absent_for_member(and_closure, AND):
    assert galois_tool.separating_constraint(and_closure, AND) is None


def test_separating_constraint_for_or(and_closure, OR):
    c = galois_tool.separating_constraint(and_closure, OR)
    assert c.arity <= 4
    assert not satisfaction_tool.satisfies(OR, c)
    assert all(satisfaction_tool.satisfies(f, c) for f in and_closure.members)


def test_separating_constraint_needs_closed_class(AND, OR):
    with pytest.raises(PreconditionError):
        galois_tool.separating_constraint(boolean_class(AND), OR)


def test_separating_constraint_for_empty_class(bool_domain, AND):
    c = galois_tool.separating_constraint(empty_class(bool_domain, bool_domain, 2), AND)
    assert c.consequent.is_empty and not c.antecedent.is_empty


def test_separating_function_for_unary_class(bool_domain, ID, NEG):
    T = galois_tool.constraints_satisfied_by(boolean_class(ID, NEG, arity_bound=1), 1)
    single = Relation.of(bool_domain, [(0,)])
    assert galois_tool.separating_function(T, Constraint(antecedent=single, consequent=single)) == NEG


def test_separating_function_absent_for_member(bool_domain, ID, NEG):
    T = galois_tool.constraints_satisfied_by(boolean_class(ID, NEG, arity_bound=1), 1)
    assert galois_tool.separating_function(T, T.members[0]) is None


def test_separating_function_absent_for_empty_antecedent(bool_domain, delta):
    T = constraint_set(Constraint(antecedent=delta, consequent=delta))
    c = Constraint(antecedent=Relation.empty(bool_domain, 2), consequent=Relation.empty(bool_domain, 2))
    assert galois_tool.separating_function(T, c) is None


def test_separating_function_among_disequality_preservers(bool_domain, delta, eq):
    T = constraint_set(Constraint(antecedent=delta, consequent=delta))
    c = Constraint(antecedent=eq, consequent=Relation.empty(bool_domain, 2))
    g = galois_tool.separating_function(T, c)
    assert g == FiniteFunction.projection(bool_domain, 2, 0)
    assert satisfaction_tool.satisfies(g, T.members[0]) and not satisfaction_tool.satisfies(g, c)


def test_separating_function_is_independent_of_jobs(bool_domain, delta, eq):
    T = constraint_set(Constraint(antecedent=delta, consequent=delta))
    c = Constraint(antecedent=eq, consequent=Relation.empty(bool_domain, 2))
    assert galois_tool.separating_function(T, c, jobs=1) == galois_tool.separating_function(T, c, jobs=4)


def test_local_closure_constraints_is_identity(bool_domain, delta, eq):
    empty = ConstraintSet(input_domain=bool_domain, output_domain=bool_domain, members=[], arity_bound=2)
    assert galois_tool.local_closure_constraints(empty) == empty
    equality = constraint_set(Constraint(antecedent=eq, consequent=eq))
    assert galois_tool.local_closure_constraints(equality) == equality
    T = galois_tool.constraints_satisfied_by(boolean_class(*binary_projections()), 2)
    assert galois_tool.local_closure_constraints(T) == T


def test_roundtrip_report_for_and(and_closure):
    report = galois_tool.galois_roundtrip_report(and_closure, 2)
    assert report["non_members"] == 16
    assert report["separated"] == 16
    assert report["status"] == "success"


def test_roundtrip_report_for_full_class(bool_domain):
    report = galois_tool.galois_roundtrip_report(full_class(bool_domain, bool_domain, 2), 2)
    assert report["entries"] == [] and report["status"] == "success"


def test_roundtrip_report_for_empty_class(bool_domain):
    report = galois_tool.galois_roundtrip_report(empty_class(bool_domain, bool_domain, 1), 1)
    assert report["non_members"] == 4 and report["separated"] == 4
    assert "note" in report
    assert all(entry["constraint"]["consequent"]["tuples"] == [] for entry in report["entries"])


def random_boolean_class(rng, domain):
    pool = full_class(domain, domain, 2).members
    return FunctionClass(
        input_domain=domain, output_domain=domain, members=[f for f in pool if rng.random() < 0.25], arity_bound=2,
    )


@pytest.mark.parametrize("seed", SEEDS[:15])
def test_class_lies_inside_its_galois_closure(seed, bool_domain):
    rng = rng_for(seed, "functions")
    K = random_boolean_class(rng, bool_domain)
    T = galois_tool.constraints_satisfied_by(K, 2)
    closure = galois_tool.functions_satisfying(T, 2)
    assert K.issubset(closure)

    for f in K.members:
        for i in rng.integers(0, T.cardinality, size=5):
            c = T.members[int(i)]
            assert oracle_tool.image(f, c.antecedent).issubset(c.consequent)


@pytest.mark.parametrize("seed", SEEDS[:15])
def test_constraint_set_lies_inside_its_galois_closure(seed, bool_domain):
    rng = rng_for(seed, "constraints")
    T = ConstraintSet(
        input_domain=bool_domain,
        output_domain=bool_domain,
        members=[random_constraint(rng, bool_domain, bool_domain, int(rng.integers(1, 3)))
                 for _ in range(int(rng.integers(1, 5)))],
        arity_bound=2,
    )
    K = galois_tool.functions_satisfying(T, 2)
    closure = galois_tool.constraints_satisfied_by(K, 2)
    assert all(c in closure for c in T.members)
    assert galois_tool.functions_satisfying(closure, 2) == K

    for f in K.members:
        for c in T.members:
            assert oracle_tool.image(f, c.antecedent).issubset(c.consequent)


def test_roundtrip_witnesses_are_independent_of_jobs(and_closure):
    reports = [galois_tool.galois_roundtrip_report(and_closure, 2, jobs) for jobs in (1, 2, 8)]
    entries = [report["entries"] for report in reports]
    assert entries[0] == entries[1] == entries[2]
    assert all("constraint" in entry for entry in entries[0])
