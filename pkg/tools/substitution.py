import logging
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from core.errors import ArityMismatchError, DomainMismatchError
from core.guards import guard_candidates, guard_table_bits
from core.model import FiniteDomain, FiniteFunction, IndexMap, encode_rows, point_grid
from core.parallel import parallel_map

logger = logging.getLogger(__name__)


class FunctionClass(BaseModel):
    model_config = ConfigDict(frozen=True)

    input_domain: FiniteDomain
    output_domain: FiniteDomain
    members: Tuple[FiniteFunction, ...] = ()
    arity_bound: int = Field(default=1, ge=1)

    _keys: frozenset = PrivateAttr(default=frozenset())

    @model_validator(mode="before")
    @classmethod
    def canonicalize(cls, data: Any) -> Any:
        if isinstance(data, dict) and "members" in data:
            unique: Dict[Any, FiniteFunction] = {}
            for member in data["members"]:
                f = member if isinstance(member, FiniteFunction) else FiniteFunction.model_validate(member)
                unique.setdefault(f.sort_key(), f)
            members = tuple(unique[key] for key in sorted(unique))
            data = {**data, "members": members}
            if members and data.get("arity_bound") is None:
                data["arity_bound"] = max(f.arity for f in members)
        return data

    @model_validator(mode="after")
    def check_members(self) -> "FunctionClass":
        for f in self.members:
            if f.input_domain != self.input_domain or f.output_domain != self.output_domain:
                raise DomainMismatchError(f"class member over {f.input_domain} -> {f.output_domain} does not fit the class")
            if f.arity > self.arity_bound:
                raise ArityMismatchError(f"member arity {f.arity} exceeds the class bound {self.arity_bound}")
        return self

    def model_post_init(self, __context: Any) -> None:
        self._keys = frozenset(f.sort_key() for f in self.members)

    def __contains__(self, f: object) -> bool:
        return isinstance(f, FiniteFunction) and f.sort_key() in self._keys

    @property
    def cardinality(self) -> int:
        return len(self.members)

    def of_arity(self, arity: int) -> List[FiniteFunction]:
        return [f for f in self.members if f.arity == arity]

    def union(self, other: "FunctionClass") -> "FunctionClass":
        return FunctionClass(
            input_domain=self.input_domain,
            output_domain=self.output_domain,
            members=self.members + other.members,
            arity_bound=max(self.arity_bound, other.arity_bound),
        )

    def issubset(self, other: "FunctionClass") -> bool:
        return self._keys <= other._keys


def all_functions(input_domain: FiniteDomain, output_domain: FiniteDomain, arity: int) -> np.ndarray:
    positions = input_domain.size ** arity
    guard_table_bits(positions, output_domain.size, f"all {arity}-ary functions {input_domain} -> {output_domain}")
    return point_grid(output_domain.size, positions)


def full_class(input_domain: FiniteDomain, output_domain: FiniteDomain, arity_bound: int) -> FunctionClass:
    members = [
        FiniteFunction.from_array(table, arity, input_domain, output_domain)
        for arity in range(1, arity_bound + 1)
        for table in all_functions(input_domain, output_domain, arity)
    ]
    return FunctionClass(input_domain=input_domain, output_domain=output_domain, members=members, arity_bound=arity_bound)


def empty_class(input_domain: FiniteDomain, output_domain: FiniteDomain, arity_bound: int) -> FunctionClass:
    return FunctionClass(input_domain=input_domain, output_domain=output_domain, members=(), arity_bound=arity_bound)


class SubstitutionTool:
    def substitute(self, f: FiniteFunction, l: IndexMap) -> FiniteFunction:
        """g(a) = f(a o l) for every a in A^m, m = l.target_arity."""
        if l.source_arity != f.arity:
            raise ArityMismatchError(f"index map has source {l.source_arity}, function arity is {f.arity}")

        grid = point_grid(f.input_domain.size, l.target_arity)
        codes = encode_rows(grid[:, list(l.images)], f.input_domain.size)
        return FiniteFunction.from_array(f.as_array()[codes], l.target_arity, f.input_domain, f.output_domain)

    def substitutions(self, f: FiniteFunction, arity_bound: int, jobs: Optional[int] = None) -> List[FiniteFunction]:
        maps = [l for m in range(1, arity_bound + 1) for l in IndexMap.all_maps(f.arity, m)]
        guard_candidates(len(maps), f"index maps from {f.arity} into arities up to {arity_bound}")
        return parallel_map(lambda l: self.substitute(f, l), maps, jobs)

    def svs_closure(self, K: FunctionClass, arity_bound: int, jobs: Optional[int] = None) -> FunctionClass:
        logger.info(f"Closing a class of {K.cardinality} functions under substitutions up to arity {arity_bound}")

        seen = {f.sort_key() for f in K.members}
        result = list(K.members)
        frontier = sorted(K.members, key=lambda f: f.sort_key())
        rounds = 0
        while frontier:
            rounds += 1
            fresh = []
            for f in frontier:
                for g in self.substitutions(f, arity_bound, jobs):
                    if g.sort_key() not in seen:
                        seen.add(g.sort_key())
                        fresh.append(g)
            result.extend(fresh)
            frontier = fresh

        logger.info(f"Substitution closure reached {len(result)} functions after {rounds} rounds")
        bound = max([arity_bound] + [f.arity for f in result])
        return FunctionClass(
            input_domain=K.input_domain,
            output_domain=K.output_domain,
            members=result,
            arity_bound=bound,
        )

    def is_substitution_closed(self, K: FunctionClass) -> bool:
        closure = self.svs_closure(K, K.arity_bound)
        return closure.cardinality == K.cardinality

    def local_closure_functions(self, K: FunctionClass) -> FunctionClass:
        """Every f (arity <= bound) whose restriction to each subset F of A^n agrees with
        the restriction of some member of K. Subsets are enumerated literally."""
        kept = []
        for arity in range(1, K.arity_bound + 1):
            positions = K.input_domain.size ** arity
            candidates = all_functions(K.input_domain, K.output_domain, arity)
            guard_candidates(candidates.shape[0] * 2 ** positions, f"local closure at arity {arity}")

            members = np.array([f.table for f in K.of_arity(arity)], dtype=np.int64).reshape(-1, positions)
            # bit i of a subset index <-> point code i
            subsets = np.arange(2 ** positions, dtype=np.int64)
            bits = 1 << np.arange(positions, dtype=np.int64)
            for table in candidates:
                agreement = (members == table) @ bits
                disagreement = ~agreement
                covered = ((subsets[None, :] & disagreement[:, None]) == 0).any(axis=0)
                if covered.size and covered.all():
                    kept.append(FiniteFunction.from_array(table, arity, K.input_domain, K.output_domain))

        result = FunctionClass(
            input_domain=K.input_domain,
            output_domain=K.output_domain,
            members=kept,
            arity_bound=K.arity_bound,
        )
        if result.cardinality != K.cardinality:
            logger.warning(f"Local closure changed the class size from {K.cardinality} to {result.cardinality}")
        return result


substitution_tool = SubstitutionTool()
