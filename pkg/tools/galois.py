import logging
from datetime import datetime
from functools import lru_cache
from itertools import combinations
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from core.errors import (
    ArityMismatchError,
    BudgetExceededError,
    DomainMismatchError,
    PreconditionError,
    WitnessError,
)
from core.guards import guard_candidates
from core.model import (
    Constraint,
    FiniteDomain,
    FiniteFunction,
    Relation,
    encode_rows,
    point_grid,
    require_same_domain,
)
from core.parallel import chunked, first_in_order, parallel_map, resolve_jobs
from tools.sampling import random_relation
from tools.satisfaction import satisfaction_tool
from tools.substitution import FunctionClass, all_functions, substitution_tool

logger = logging.getLogger(__name__)


class ConstraintSet(BaseModel):
    model_config = ConfigDict(frozen=True)

    input_domain: FiniteDomain
    output_domain: FiniteDomain
    members: Tuple[Constraint, ...] = ()
    arity_bound: int = Field(default=1, ge=1)

    _keys: frozenset = PrivateAttr(default=frozenset())

    @model_validator(mode="before")
    @classmethod
    def canonicalize(cls, data: Any) -> Any:
        if isinstance(data, dict) and "members" in data:
            unique: Dict[Any, Constraint] = {}
            for member in data["members"]:
                c = member if isinstance(member, Constraint) else Constraint.model_validate(member)
                unique.setdefault(c.sort_key(), c)
            members = tuple(unique[key] for key in sorted(unique))
            data = {**data, "members": members}
            if members and data.get("arity_bound") is None:
                data["arity_bound"] = max(c.arity for c in members)
        return data

    @model_validator(mode="after")
    def check_members(self) -> "ConstraintSet":
        for c in self.members:
            require_same_domain(c.input_domain, self.input_domain, "constraint antecedent")
            require_same_domain(c.output_domain, self.output_domain, "constraint consequent")
            if c.arity > self.arity_bound:
                raise ArityMismatchError(f"constraint arity {c.arity} exceeds the set bound {self.arity_bound}")
        return self

    def model_post_init(self, __context: Any) -> None:
        self._keys = frozenset(c.sort_key() for c in self.members)

    def __contains__(self, c: object) -> bool:
        return isinstance(c, Constraint) and c.sort_key() in self._keys

    @property
    def cardinality(self) -> int:
        return len(self.members)

    def of_arity(self, arity: int) -> List[Constraint]:
        return [c for c in self.members if c.arity == arity]


def all_relations(domain: FiniteDomain, arity: int) -> Iterator[Relation]:
    """Every arity-ary relation on the domain, indexed by the bitmask of member codes."""
    positions = domain.size ** arity
    guard_candidates(2 ** positions, f"relations of arity {arity} on {domain}")
    grid = point_grid(domain.size, arity)
    for mask in range(2 ** positions):
        yield Relation(
            arity=arity,
            domain=domain,
            tuples=[tuple(grid[code]) for code in range(positions) if mask >> code & 1],
        )


def relation_mask(relation: Relation) -> int:
    return sum(1 << int(code) for code in relation.codes())


class SatisfiedConstraints:
    """Constraints of arity <= bound satisfied by every member of a class, held through
    least consequents: (R, S) is a member iff the union of the images of R is inside S."""

    def __init__(
        self,
        input_domain: FiniteDomain,
        output_domain: FiniteDomain,
        arity_bound: int,
        image: Callable[[Relation], Relation],
    ):
        self.input_domain = input_domain
        self.output_domain = output_domain
        self.arity_bound = arity_bound
        self._least = lru_cache(maxsize=None)(image)

    @classmethod
    def from_class(cls, K: FunctionClass, arity_bound: int) -> "SatisfiedConstraints":
        def image(R: Relation) -> Relation:
            least = Relation.empty(K.output_domain, R.arity)
            for f in K.members:
                least = least.union(satisfaction_tool.image_of_relation(f, R))
            return least

        return cls(K.input_domain, K.output_domain, arity_bound, image)

    def least_consequent(self, R: Relation) -> Relation:
        require_same_domain(R.domain, self.input_domain, "antecedent")
        return self._least(R)

    def __contains__(self, c: object) -> bool:
        if not isinstance(c, Constraint) or c.arity > self.arity_bound:
            return False
        return self.least_consequent(c.antecedent).issubset(c.consequent)

    def candidate_count(self, arity: int) -> int:
        return 2 ** (self.input_domain.size ** arity) * 2 ** (self.output_domain.size ** arity)

    def minimal_members(self, arity: int) -> Iterator[Constraint]:
        for R in all_relations(self.input_domain, arity):
            yield Constraint(antecedent=R, consequent=self.least_consequent(R))

    def materialize(self) -> ConstraintSet:
        members = []
        for arity in range(1, self.arity_bound + 1):
            guard_candidates(self.candidate_count(arity), f"constraint candidates of arity {arity}")
            grid = point_grid(self.output_domain.size, arity)
            positions = grid.shape[0]
            for least in self.minimal_members(arity):
                fixed = relation_mask(least.consequent)
                free = [code for code in range(positions) if not fixed >> code & 1]
                for extra in range(2 ** len(free)):
                    added = [grid[free[i]] for i in range(len(free)) if extra >> i & 1]
                    consequent = Relation(
                        arity=arity,
                        domain=self.output_domain,
                        tuples=list(least.consequent.tuples) + [tuple(t) for t in added],
                    )
                    members.append(Constraint(antecedent=least.antecedent, consequent=consequent))

        logger.info(f"Materialized {len(members)} satisfied constraints up to arity {self.arity_bound}")
        return ConstraintSet(
            input_domain=self.input_domain,
            output_domain=self.output_domain,
            members=members,
            arity_bound=self.arity_bound,
        )

    def sample_member(self, rng: np.random.Generator, arity: int) -> Constraint:
        R = _random_relation(rng, self.input_domain, arity)
        least = self.least_consequent(R)
        return Constraint(antecedent=R, consequent=least.union(_random_relation(rng, self.output_domain, arity)))

    def sample_outsider(self, rng: np.random.Generator, arity: int, attempts: int = 200) -> Optional[Constraint]:
        for _ in range(attempts):
            c = Constraint(
                antecedent=_random_relation(rng, self.input_domain, arity),
                consequent=_random_relation(rng, self.output_domain, arity),
            )
            if c not in self:
                return c
        return None


def _random_relation(rng: np.random.Generator, domain: FiniteDomain, arity: int) -> Relation:
    return random_relation(rng, domain, arity, float(rng.random()))


class GaloisTool:
    def minimal_members(self, T: ConstraintSet) -> List[Constraint]:
        grouped: Dict[Relation, Relation] = {}
        for c in T.members:
            current = grouped.get(c.antecedent)
            grouped[c.antecedent] = c.consequent if current is None else current.intersection(c.consequent)
        return [Constraint(antecedent=R, consequent=S) for R, S in grouped.items()]

    def functions_satisfying(self, T: ConstraintSet, arity_bound: int) -> FunctionClass:
        generators = self.minimal_members(T)
        members = []
        for arity in range(1, arity_bound + 1):
            tables = all_functions(T.input_domain, T.output_domain, arity)
            alive = np.ones(tables.shape[0], dtype=bool)
            for c in generators:
                live = np.flatnonzero(alive)
                if live.size == 0:
                    break
                ok = satisfaction_tool.satisfies_batch(tables[live], arity, T.input_domain, T.output_domain, c)
                alive[live[~ok]] = False
            members.extend(
                FiniteFunction.from_array(table, arity, T.input_domain, T.output_domain) for table in tables[alive]
            )
            logger.info(f"{int(alive.sum())} of {tables.shape[0]} functions of arity {arity} satisfy the set")

        return FunctionClass(
            input_domain=T.input_domain,
            output_domain=T.output_domain,
            members=members,
            arity_bound=arity_bound,
        )

    def constraints_satisfied_by(self, K: FunctionClass, constraint_arity_bound: int) -> ConstraintSet:
        return SatisfiedConstraints.from_class(K, constraint_arity_bound).materialize()

    def separating_constraint(self, K: FunctionClass, g: FiniteFunction, jobs: Optional[int] = None) -> Optional[Constraint]:
        """A constraint satisfied by all of K and violated by g, or None when g is in K.

        F is the first subset of A^n (by size, then lexicographically) on which g disagrees
        with every n-ary member; the antecedent is the set of columns of the matrix whose
        rows are the points of F and the consequent is {fM : f in K, f n-ary}.
        """
        if g.input_domain != K.input_domain or g.output_domain != K.output_domain:
            raise DomainMismatchError("function and class live on different domains")
        if g.arity > K.arity_bound:
            raise PreconditionError(f"function arity {g.arity} exceeds the class bound {K.arity_bound}")
        if not substitution_tool.is_substitution_closed(K):
            raise PreconditionError("the class is not closed under simple variable substitutions")
        if g in K:
            return None

        n = g.arity
        points = point_grid(K.input_domain.size, n)
        positions = points.shape[0]
        guard_candidates(2 ** positions - 1, f"subsets of {K.input_domain}^{n}")

        members = K.of_arity(n)
        tables = np.array([f.table for f in members], dtype=np.int64).reshape(-1, positions)
        disagree = tables != g.as_array()

        def separates(subset: Tuple[int, ...]) -> bool:
            return bool(disagree[:, list(subset)].any(axis=1).all())

        subset = None
        for size in range(1, positions + 1):
            subset = first_in_order(combinations(range(positions), size), separates, jobs)
            if subset is not None:
                break
        if subset is None:
            raise WitnessError("no separating subset for a function outside the class")

        rows = points[list(subset)]
        antecedent = Relation(arity=len(subset), domain=K.input_domain, tuples=[tuple(column) for column in rows.T])
        consequent = Relation(
            arity=len(subset),
            domain=K.output_domain,
            tuples=[tuple(tables[i, list(subset)]) for i in range(tables.shape[0])],
        )
        c = Constraint(antecedent=antecedent, consequent=consequent)
        logger.info(f"Separating constraint of arity {c.arity} found on a subset of size {len(subset)}")

        if satisfaction_tool.satisfies(g, c) or not all(satisfaction_tool.satisfies(f, c) for f in K.members):
            raise WitnessError("separating constraint failed its post-check")
        return c

    def separating_function(self, T: ConstraintSet, c: Constraint, jobs: Optional[int] = None) -> Optional[FiniteFunction]:
        """A function satisfying every member of T and violating c, or None.

        n = |antecedent|; the matrix M has the antecedent tuples as columns, and its rows
        are extended by the remaining points of A^n so that every n-tuple is a row.
        Candidates are scanned in lexicographic table order.
        """
        require_same_domain(c.input_domain, T.input_domain, "antecedent")
        require_same_domain(c.output_domain, T.output_domain, "consequent")
        if c in T:
            logger.info("Constraint belongs to the set; nothing to separate")
            return None
        if c.antecedent.is_empty:
            logger.warning("Constraint with empty antecedent is satisfied by every function; no separation")
            return None

        R = c.antecedent
        n = R.cardinality
        matrix_rows = R.as_array().T
        row_codes = encode_rows(matrix_rows, T.input_domain.size)
        extension = sorted(set(range(T.input_domain.size ** n)) - set(int(code) for code in row_codes))
        logger.info(f"Searching {n}-ary functions; matrix has {len(row_codes)} rows plus {len(extension)} extension rows")

        tables = all_functions(T.input_domain, T.output_domain, n)
        allowed = c.consequent.membership_mask()
        generators = self.minimal_members(T)

        def first_in_chunk(start: int) -> Optional[int]:
            chunk = tables[start:start + 4096]
            alive = ~allowed[encode_rows(chunk[:, row_codes], T.output_domain.size)]
            for generator in generators:
                live = np.flatnonzero(alive)
                if live.size == 0:
                    return None
                ok = satisfaction_tool.satisfies_batch(chunk[live], n, T.input_domain, T.output_domain, generator)
                alive[live[~ok]] = False
            hits = np.flatnonzero(alive)
            return start + int(hits[0]) if hits.size else None

        found = None
        for wave in chunked(range(0, tables.shape[0], 4096), resolve_jobs(jobs)):
            hits = [hit for hit in parallel_map(first_in_chunk, wave, jobs) if hit is not None]
            if hits:
                found = min(hits)
                break
        if found is None:
            logger.warning("No separating function within the bounded search space")
            return None

        g = FiniteFunction.from_array(tables[found], n, T.input_domain, T.output_domain)
        if satisfaction_tool.satisfies(g, c) or not all(satisfaction_tool.satisfies(g, t) for t in T.members):
            raise WitnessError("separating function failed its post-check")
        return g

    def local_closure_constraints(self, T: ConstraintSet) -> ConstraintSet:
        present = {(c.arity, relation_mask(c.antecedent), relation_mask(c.consequent)) for c in T.members}
        added = []
        for arity in range(1, T.arity_bound + 1):
            pairs = 2 ** (T.input_domain.size ** arity) * 2 ** (T.output_domain.size ** arity)
            guard_candidates(pairs, f"constraint candidates of arity {arity}")
            full_b = (1 << T.output_domain.size ** arity) - 1
            antecedents = list(all_relations(T.input_domain, arity))
            consequents = list(all_relations(T.output_domain, arity))
            for R in antecedents:
                r_mask = relation_mask(R)
                for S in consequents:
                    s_mask = relation_mask(S)
                    if self._relaxations_present(present, arity, r_mask, s_mask, full_b):
                        added.append(Constraint(antecedent=R, consequent=S))

        result = ConstraintSet(
            input_domain=T.input_domain,
            output_domain=T.output_domain,
            members=list(T.members) + added,
            arity_bound=T.arity_bound,
        )
        if result.cardinality != T.cardinality:
            raise WitnessError(f"local closure grew the set from {T.cardinality} to {result.cardinality}")
        return result

    def _relaxations_present(self, present, arity: int, r_mask: int, s_mask: int, full_b: int) -> bool:
        free = full_b & ~s_mask
        sub = r_mask
        while True:
            extra = free
            while True:
                if (arity, sub, s_mask | extra) not in present:
                    return False
                if extra == 0:
                    break
                extra = (extra - 1) & free
            if sub == 0:
                return True
            sub = (sub - 1) & r_mask

    def galois_roundtrip_report(
        self, K: FunctionClass, arity_bound: Optional[int] = None, jobs: Optional[int] = None
    ) -> Dict[str, Any]:
        bound = arity_bound or K.arity_bound
        logger.info(f"Starting round trip for a class of {K.cardinality} functions up to arity {bound}")
        start_time = datetime.now()

        if not substitution_tool.is_substitution_closed(K):
            raise PreconditionError("the class is not closed under simple variable substitutions")

        entries = []
        for arity in range(1, bound + 1):
            for table in all_functions(K.input_domain, K.output_domain, arity):
                g = FiniteFunction.from_array(table, arity, K.input_domain, K.output_domain)
                if g in K:
                    continue
                entry = {"function": g.payload()}
                try:
                    c = self.separating_constraint(K, g, jobs)
                    verified = (not satisfaction_tool.satisfies(g, c)) and all(
                        satisfaction_tool.satisfies(f, c) for f in K.members
                    )
                    entry["constraint"] = c.payload()
                    entry["status"] = "separated" if verified else "verification_failed"
                except BudgetExceededError as e:
                    logger.warning(f"Function left unseparated: {e}")
                    entry["status"] = "not_separated_within_bounds"
                entries.append(entry)

        separated = sum(1 for entry in entries if entry["status"] == "separated")
        report = {
            "class_size": K.cardinality,
            "arity_bound": bound,
            "non_members": len(entries),
            "separated": separated,
            "entries": entries,
            "status": "success" if separated == len(entries) else "incomplete",
            "elapsed_seconds": (datetime.now() - start_time).total_seconds(),
            "timestamp": datetime.now().isoformat(),
        }
        if K.cardinality == 0:
            report["note"] = "empty class: every function is separated by a constraint with empty consequent"
        return report


galois_tool = GaloisTool()
