"""Seeded random instances for sweeps, the extensible-family harness and tests."""

import logging
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from core.model import Constraint, FiniteDomain, FiniteFunction, Relation, point_grid
from tools.minors import Indeterminate, MinorScheme, TargetIndex

logger = logging.getLogger(__name__)


class SuperpositionInstance(NamedTuple):
    relations: List[Relation]
    b: Tuple[str, ...]
    bs: List[Tuple[str, ...]]
    labels: Tuple[str, ...]


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_domain(rng: np.random.Generator, max_size: int, name: str = "A") -> FiniteDomain:
    return FiniteDomain(name=name, size=int(rng.integers(1, max_size + 1)))


def random_relation(rng: np.random.Generator, domain: FiniteDomain, arity: int, density: float = 0.5) -> Relation:
    grid = point_grid(domain.size, arity)
    keep = rng.random(grid.shape[0]) < density
    return Relation(arity=arity, domain=domain, tuples=[tuple(row) for row in grid[keep]])


def random_superset(rng: np.random.Generator, relation: Relation, density: float = 0.5) -> Relation:
    return relation.union(random_relation(rng, relation.domain, relation.arity, density))


def random_subset(rng: np.random.Generator, relation: Relation, density: float = 0.5) -> Relation:
    keep = rng.random(relation.cardinality) < density
    return Relation(arity=relation.arity, domain=relation.domain, tuples=[t for t, k in zip(relation.tuples, keep) if k])


def random_function(
    rng: np.random.Generator, input_domain: FiniteDomain, output_domain: FiniteDomain, arity: int
) -> FiniteFunction:
    table = rng.integers(0, output_domain.size, size=input_domain.size ** arity)
    return FiniteFunction.from_array(table, arity, input_domain, output_domain)


def random_constraint(
    rng: np.random.Generator, input_domain: FiniteDomain, output_domain: FiniteDomain, arity: int
) -> Constraint:
    return Constraint(
        antecedent=random_relation(rng, input_domain, arity, float(rng.random())),
        consequent=random_relation(rng, output_domain, arity, float(rng.random())),
    )


def random_scheme(
    rng: np.random.Generator,
    target: int,
    source_arities: Sequence[int],
    max_indeterminates: int,
) -> MinorScheme:
    symbols = [f"v{i}" for i in range(int(rng.integers(0, max_indeterminates + 1)))]
    choices = [TargetIndex(index=i) for i in range(target)] + [Indeterminate(symbol=s) for s in symbols]
    maps = [[choices[int(rng.integers(0, len(choices)))] for _ in range(n)] for n in source_arities]
    return MinorScheme(target=target, indeterminates=tuple(symbols), maps=maps)


def random_superposition_instance(
    rng: np.random.Generator,
    domain: FiniteDomain,
    max_labels: int,
    max_family: int,
    max_arity: int,
) -> SuperpositionInstance:
    labels = tuple(f"l{i}" for i in range(int(rng.integers(1, max_labels + 1))))

    def label_tuple(length: int) -> Tuple[str, ...]:
        return tuple(labels[int(i)] for i in rng.integers(0, len(labels), size=length))

    family = int(rng.integers(1, max_family + 1))
    arities = [int(rng.integers(1, max_arity + 1)) for _ in range(family)]
    relations = [random_relation(rng, domain, n, float(rng.uniform(0.3, 0.9))) for n in arities]
    b = label_tuple(int(rng.integers(1, max_arity + 1)))
    return SuperpositionInstance(relations=relations, b=b, bs=[label_tuple(n) for n in arities], labels=labels)
