import logging
from datetime import datetime
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, PrivateAttr, model_validator

from core.errors import PreconditionError
from core.guards import guard_candidates
from core.model import Constraint, FiniteDomain, Point, Relation, decode_point, point_grid, require_same_domain
from core.parallel import parallel_map
from tools.galois import SatisfiedConstraints
from tools.minors import minor_tool
from tools.sampling import random_scheme, random_subset, random_superset
from tools.satisfaction import PartialFunction, satisfaction_tool

logger = logging.getLogger(__name__)


class PartialFamily(BaseModel):
    model_config = ConfigDict(frozen=True)

    input_domain: FiniteDomain
    output_domain: FiniteDomain
    members: Tuple[PartialFunction, ...] = ()

    _keys: frozenset = PrivateAttr(default=frozenset())

    @model_validator(mode="before")
    @classmethod
    def canonicalize(cls, data: Any) -> Any:
        if isinstance(data, dict) and "members" in data:
            unique: Dict[Any, PartialFunction] = {}
            for member in data["members"]:
                p = member if isinstance(member, PartialFunction) else PartialFunction.model_validate(member)
                unique.setdefault(p.sort_key(), p)
            data = {**data, "members": tuple(unique[key] for key in sorted(unique))}
        return data

    @model_validator(mode="after")
    def check_members(self) -> "PartialFamily":
        for p in self.members:
            require_same_domain(p.input_domain, self.input_domain, "partial function input")
            require_same_domain(p.output_domain, self.output_domain, "partial function output")
        return self

    def model_post_init(self, __context: Any) -> None:
        self._keys = frozenset(p.sort_key() for p in self.members)

    def __contains__(self, p: object) -> bool:
        return isinstance(p, PartialFunction) and p.sort_key() in self._keys

    def has_graph(self, arity: int, graph: Tuple[Tuple[int, int], ...]) -> bool:
        return (arity, graph) in self._keys

    @property
    def cardinality(self) -> int:
        return len(self.members)

    @property
    def arities(self) -> List[int]:
        return sorted({p.arity for p in self.members})


class ExtensibilityResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    extensible: bool
    function: Optional[PartialFunction] = None
    point: Optional[Point] = None

    def payload(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {"extensible": self.extensible}
        if self.function is not None:
            result["function"] = {"arity": self.function.arity, "graph": [list(pair) for pair in self.function.graph]}
            result["point"] = list(self.point)
        return result


def _graphs(input_domain: FiniteDomain, output_domain: FiniteDomain, arity: int) -> np.ndarray:
    """Every partial table of the given arity; the value |B| marks an undefined point."""
    positions = input_domain.size ** arity
    guard_candidates((output_domain.size + 1) ** positions, f"partial functions of arity {arity}")
    return point_grid(output_domain.size + 1, positions)


def _family(input_domain: FiniteDomain, output_domain: FiniteDomain, arities: Sequence[int], injective: bool) -> PartialFamily:
    undefined = output_domain.size
    members = []
    for n in arities:
        for row in _graphs(input_domain, output_domain, n):
            graph = [(code, int(value)) for code, value in enumerate(row) if value != undefined]
            if injective and len({value for _, value in graph}) != len(graph):
                continue
            members.append(PartialFunction(arity=n, input_domain=input_domain, output_domain=output_domain, graph=graph))
    return PartialFamily(input_domain=input_domain, output_domain=output_domain, members=members)


def all_partial_functions(input_domain: FiniteDomain, output_domain: FiniteDomain, arities: Sequence[int]) -> PartialFamily:
    return _family(input_domain, output_domain, arities, injective=False)


def injective_partial_functions(
    input_domain: FiniteDomain, output_domain: FiniteDomain, arities: Sequence[int]
) -> PartialFamily:
    return _family(input_domain, output_domain, arities, injective=True)


def satisfied_by_family(F: PartialFamily, arity_bound: int) -> SatisfiedConstraints:
    def image(R: Relation) -> Relation:
        least = Relation.empty(F.output_domain, R.arity)
        for p in F.members:
            least = least.union(satisfaction_tool.partial_image(p, R))
        return least

    return SatisfiedConstraints(F.input_domain, F.output_domain, arity_bound, image)


class PartialsTool:
    def is_extensible_family(self, F: PartialFamily) -> ExtensibilityResult:
        """Every member extends, inside F, to any single point outside its domain."""
        for p in F.members:
            positions = F.input_domain.size ** p.arity
            for code in range(positions):
                if code in p.defined_codes():
                    continue
                extended = [tuple(sorted(p.graph + ((code, value),))) for value in F.output_domain.elements]
                if not any(F.has_graph(p.arity, graph) for graph in extended):
                    point = decode_point(code, p.arity, F.input_domain)
                    logger.info(f"Family is not extensible: no extension of a {p.size}-point function to {point}")
                    return ExtensibilityResult(extensible=False, function=p, point=point)
        return ExtensibilityResult(extensible=True)

    def _trial(self, F: PartialFamily, satisfied: SatisfiedConstraints, seed: int, trial: int) -> List[Dict[str, Any]]:
        rng = np.random.default_rng([seed, trial])
        bound = satisfied.arity_bound
        violations = []

        def check(kind: str, c: Constraint) -> None:
            if c not in satisfied:
                violations.append({"trial": trial, "kind": kind, "constraint": c.payload()})

        arity = int(rng.integers(1, bound + 1))
        c = satisfied.sample_member(rng, arity)
        check("sampled", c)

        other = Constraint(antecedent=c.antecedent, consequent=random_superset(rng, satisfied.least_consequent(c.antecedent)))
        check("intersection", minor_tool.intersect_consequents([c, other]))

        relaxed = minor_tool.relax(c, random_subset(rng, c.antecedent), random_superset(rng, c.consequent))
        check("relaxation", relaxed)

        target = int(rng.integers(1, bound + 1))
        scheme = random_scheme(rng, target, [arity], 2)
        check("simple_minor", minor_tool.tight_minor_constraint(scheme, [c]))
        return violations

    def proposition1_harness(
        self,
        F: PartialFamily,
        trials: int,
        arity_bound: int,
        seed: int = 0,
        jobs: Optional[int] = None,
    ) -> Dict[str, Any]:
        logger.info(f"Running closure harness on a family of {F.cardinality} partial functions, {trials} trials")
        start_time = datetime.now()

        result = self.is_extensible_family(F)
        if not result.extensible:
            raise PreconditionError(f"family is not extensible at point {result.point}")

        satisfied = satisfied_by_family(F, arity_bound)
        violations: List[Dict[str, Any]] = []
        canonical = minor_tool.canonical_constraints(F.input_domain, F.output_domain, 1)
        fixed = [("empty", canonical.empty)]
        if arity_bound >= 2:
            fixed.append(("equality", canonical.equality))
        for kind, c in fixed:
            if c not in satisfied:
                violations.append({"trial": None, "kind": kind, "constraint": c.payload()})

        for found in parallel_map(lambda trial: self._trial(F, satisfied, seed, trial), list(range(trials)), jobs):
            violations.extend(found)

        if violations:
            logger.warning(f"Closure harness found {len(violations)} violations")
        return {
            "family_size": F.cardinality,
            "arity_bound": arity_bound,
            "trials": trials,
            "seed": seed,
            "violations": violations,
            "status": "success" if not violations else "violations",
            "elapsed_seconds": (datetime.now() - start_time).total_seconds(),
            "timestamp": datetime.now().isoformat(),
        }


partials_tool = PartialsTool()
