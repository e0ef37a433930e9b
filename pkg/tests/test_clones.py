import pytest

from core.errors import BudgetExceededError, PreconditionError
from core.model import FiniteFunction, Relation
from core.orchestrator import binary_projections, boolean_class
from tools.clones import LabelSet, clone_tool, projections
from tools.minors import MinorScheme, minor_tool
from tools.oracle import oracle_tool
from tools.sampling import make_rng, random_domain, random_superposition_instance
from tools.substitution import empty_class, full_class

from tests.instances import SEEDS, minor_instance, rng_for


def test_compose_nand_into_and(NAND, AND):
    assert clone_tool.compose_functions(NAND, [NAND, NAND]) == AND


def test_compose_with_projections(bool_domain, NAND):
    assert clone_tool.compose_functions(NAND, binary_projections()) == NAND
    first = FiniteFunction.projection(bool_domain, 2, 0)
    assert clone_tool.compose_functions(first, [NAND, binary_projections()[1]]) == NAND


def test_clone_of_nand_is_everything(bool_domain, NAND):
    clone = clone_tool.clone_generate(boolean_class(NAND), 2)
    assert clone.cardinality == 20
    assert clone == full_class(bool_domain, bool_domain, 2)


def test_clone_of_and(bool_domain, AND, ID):
    clone = clone_tool.clone_generate(boolean_class(AND), 2)
    assert set(clone.members) == {ID, AND, *binary_projections()}


def test_clone_of_nothing_is_projections(bool_domain):
    clone = clone_tool.clone_generate(empty_class(bool_domain, bool_domain, 2), 2)
    assert clone.cardinality == 3
    assert set(clone.members) == set(projections(bool_domain, 2))


def test_clone_is_independent_of_jobs(NAND):
    K = boolean_class(NAND)
    assert clone_tool.clone_generate(K, 2, jobs=1) == clone_tool.clone_generate(K, 2, jobs=3)


def test_is_clone(bool_domain, AND):
    assert clone_tool.is_clone(clone_tool.clone_generate(boolean_class(AND), 2))
    assert not clone_tool.is_clone(boolean_class(AND))


def test_pol_of_order(bool_domain, leq):
    P = clone_tool.pol(bool_domain, [leq], 2)
    assert P.cardinality == 9
    assert len(P.of_arity(1)) == 3


def test_pol_of_nothing(bool_domain):
    assert clone_tool.pol(bool_domain, [], 2) == full_class(bool_domain, bool_domain, 2)
    assert clone_tool.pol(bool_domain, [Relation.full(bool_domain, 1)], 2).cardinality == 20


def test_inv_of_negation(NEG):
    relations = clone_tool.inv(boolean_class(NEG, arity_bound=1), 2)
    assert len(relations) == 6
    assert sum(1 for R in relations if R.arity == 1) == 2


def test_inv_of_unary_operations(bool_domain):
    relations = clone_tool.inv(full_class(bool_domain, bool_domain, 1), 1)
    assert relations == [Relation.empty(bool_domain, 1), Relation.full(bool_domain, 1)]


def test_inv_of_nothing(bool_domain):
    assert len(clone_tool.inv(empty_class(bool_domain, bool_domain, 1), 2)) == 4 + 16


def test_general_superposition(bool_domain, delta):
    labels = LabelSet(labels=("p", "q"))
    assert clone_tool.general_superposition([delta], ["p", "q"], [["p", "q"]], labels) == delta
    assert clone_tool.general_superposition([delta], ["p", "p"], [["p", "q"]], labels) == Relation.equality(bool_domain)
    empty = Relation.empty(bool_domain, 1)
    assert clone_tool.general_superposition([delta, empty], ["p"], [["p", "q"], ["q"]], labels).is_empty


def test_general_superposition_rejects_unknown_label(delta):
    with pytest.raises(PreconditionError):
        clone_tool.general_superposition([delta], ["p", "r"], [["p", "q"]], LabelSet(labels=("p", "q")))


def test_label_set_validation():
    with pytest.raises(PreconditionError):
        LabelSet(labels=("p", "p"))
    with pytest.raises(PreconditionError):
        LabelSet(labels=("3",))
    with pytest.raises(PreconditionError):
        LabelSet(labels=("t0",))


def test_superposition_budget(restore_settings, delta):
    restore_settings.max_candidates = 4
    labels = LabelSet(labels=("p", "q", "r"))
    with pytest.raises(BudgetExceededError):
        clone_tool.general_superposition([delta], ["p"], [["p", "q"]], labels)


def test_equality_pattern_relation(bool_domain):
    assert clone_tool.equality_pattern_relation(["p", "q"], bool_domain).is_full
    assert clone_tool.equality_pattern_relation(["p", "p"], bool_domain) == Relation.equality(bool_domain)
    pattern = clone_tool.equality_pattern_relation(["p", "q", "p"], bool_domain)
    assert pattern.cardinality == 4 and all(t[0] == t[2] for t in pattern.tuples)


def test_superposition_decomposition(bool_domain, delta, leq):
    labels = LabelSet(labels=("p", "q", "r"))
    result = clone_tool.superposition_decomposition(["p", "p", "q"], [["p", "r"], ["r", "q"]], labels, [delta, leq])
    assert result.agrees
    assert result.scheme.indeterminates == ("r",)
    assert result.superposition == result.tight_minor.intersection(result.equality_pattern)


def test_random_superpositions_decompose():
    for seed in range(50):
        rng = make_rng(seed)
        instance = random_superposition_instance(rng, random_domain(rng, 3), 4, 3, 3)
        labels = LabelSet(labels=instance.labels)
        result = clone_tool.superposition_decomposition(instance.b, instance.bs, labels, instance.relations)
        assert result.agrees
        assert result.superposition == oracle_tool.superposition(instance.relations, instance.b, instance.bs, labels)


@pytest.mark.parametrize("seed", SEEDS[:40])
def test_tight_minor_as_superposition(seed):
    rels, H = minor_instance(rng_for(seed, "superposition"))
    assert clone_tool.tight_minor_as_superposition(H, rels) == minor_tool.tight_minor_relations(H, rels)


def test_image_union_and_interpolation(bool_domain, AND, ID, delta, leq):
    C = boolean_class(AND, ID)
    union = clone_tool.image_union(C, delta)
    assert union == Relation.of(bool_domain, [(0, 0), (0, 1), (1, 0)])
    assert clone_tool.interpolates([leq, delta], Relation.of(bool_domain, [(0, 1)]), union)
    assert not clone_tool.interpolates([leq], Relation.of(bool_domain, [(1, 0)]), union)


def test_is_closed_relation_set(bool_domain, NEG):
    invariants = clone_tool.inv(boolean_class(NEG, arity_bound=1), 2)
    swap = MinorScheme.build(2, [["t1", "t0"]])
    diagonal = MinorScheme.build(1, [["t0", "t0"]])
    assert clone_tool.is_closed_relation_set(invariants, bool_domain, 2, [swap, diagonal])
    assert not clone_tool.is_closed_relation_set([Relation.equality(bool_domain)], bool_domain, 2, [swap])


def test_clone_generate_warns_about_generators_above_the_bound(AND, ID, caplog):
    with caplog.at_level("WARNING", logger="tools.clones"):
        C = clone_tool.clone_generate(boolean_class(AND), 1)
    assert C.members == (ID,)
    assert "above the bound" in caplog.text


@pytest.mark.parametrize("seed", SEEDS[:20])
def test_pol_of_inv_contains_the_generated_clone(seed, bool_domain):
    rng = rng_for(seed, "pol-inv")
    pool = full_class(bool_domain, bool_domain, 2).members
    F = boolean_class(*[f for f in pool if rng.random() < 0.15])
    invariants = clone_tool.inv(F, 2)
    for R in invariants:
        assert all(oracle_tool.image(f, R).issubset(R) for f in F.members)

    generated = clone_tool.clone_generate(F, 2)
    assert F.issubset(generated)
    assert generated.issubset(clone_tool.pol(bool_domain, invariants, 2))


@pytest.mark.parametrize("seed", SEEDS[:20])
def test_superposition_of_unary_full_relations_is_an_equality_pattern(seed):
    rng = rng_for(seed, "equality")
    domain = random_domain(rng, 3)
    labels = LabelSet(labels=("p", "q", "r"))
    b = [labels.labels[int(i)] for i in rng.integers(0, 3, size=int(rng.integers(1, 4)))]
    full = Relation.full(domain, 1)
    rels, bs = [full] * 3, [[label] for label in labels.labels]

    result = clone_tool.general_superposition(rels, b, bs, labels)
    assert result == clone_tool.equality_pattern_relation(b, domain)
    assert result == oracle_tool.superposition(rels, b, bs, labels)


def test_superposition_with_one_label_is_equality(bool_domain):
    labels = LabelSet(labels=("p",))
    full = Relation.full(bool_domain, 1)
    assert clone_tool.general_superposition([full], ["p", "p"], [["p"]], labels) == Relation.equality(bool_domain)
    assert clone_tool.general_superposition([], ["p", "p"], [], labels, bool_domain) == Relation.equality(bool_domain)
