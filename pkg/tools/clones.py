"""Operations on a single set: composition, clones, Pol/Inv and general superposition."""

import logging
from itertools import product
from math import prod
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from core.errors import ArityMismatchError, DomainMismatchError, PreconditionError
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
from core.parallel import parallel_map
from tools.galois import all_relations
from tools.minors import TARGET_PATTERN, Indeterminate, MinorScheme, TargetIndex, minor_tool
from tools.satisfaction import matrix_row_codes, satisfaction_tool
from tools.substitution import FunctionClass, all_functions

logger = logging.getLogger(__name__)


class LabelSet(BaseModel):
    """Ordered symbolic labels; never integers and never of the target-index form t<i>."""

    model_config = ConfigDict(frozen=True)

    labels: Tuple[str, ...] = Field(min_length=1)

    _positions: Dict[str, int] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def check_labels(self) -> "LabelSet":
        if len(set(self.labels)) != len(self.labels):
            raise PreconditionError(f"labels are not distinct: {self.labels}")
        for label in self.labels:
            if not label or label.lstrip("-").isdigit() or TARGET_PATTERN.match(label):
                raise PreconditionError(f"label {label!r} must be a symbolic name")
        return self

    def model_post_init(self, __context: Any) -> None:
        self._positions = {label: i for i, label in enumerate(self.labels)}

    def __contains__(self, label: object) -> bool:
        return label in self._positions

    def __len__(self) -> int:
        return len(self.labels)

    def positions(self, labels: Sequence[str]) -> List[int]:
        missing = [label for label in labels if label not in self._positions]
        if missing:
            raise PreconditionError(f"labels {missing} are not in {list(self.labels)}")
        return [self._positions[label] for label in labels]


class SuperpositionDecomposition(BaseModel):
    model_config = ConfigDict(frozen=True)

    scheme: MinorScheme
    tight_minor: Relation
    equality_pattern: Relation
    superposition: Relation
    agrees: bool

    def payload(self) -> Dict[str, Any]:
        return {
            "scheme": self.scheme.payload(),
            "tight_minor": self.tight_minor.payload(),
            "equality_pattern": self.equality_pattern.payload(),
            "superposition": self.superposition.payload(),
            "agrees": self.agrees,
        }


def projections(domain: FiniteDomain, arity_bound: int) -> List[FiniteFunction]:
    return [FiniteFunction.projection(domain, n, i) for n in range(1, arity_bound + 1) for i in range(n)]


def _operation_domain(F: FunctionClass) -> FiniteDomain:
    if F.input_domain != F.output_domain:
        raise DomainMismatchError(f"not a class of operations: {F.input_domain} -> {F.output_domain}")
    return F.input_domain


class CloneTool:
    def compose_functions(self, f: FiniteFunction, gs: Sequence[FiniteFunction]) -> FiniteFunction:
        if len(gs) != f.arity:
            raise ArityMismatchError(f"{f.arity}-ary function composed with {len(gs)} functions")
        m = gs[0].arity
        for g in gs:
            if g.arity != m:
                raise ArityMismatchError("inner functions must share one arity")
            require_same_domain(g.input_domain, gs[0].input_domain, "inner function input")
            require_same_domain(g.output_domain, f.input_domain, "inner function output")

        inner = np.stack([g.as_array() for g in gs], axis=1)
        table = f.as_array()[encode_rows(inner, f.input_domain.size)]
        return FiniteFunction.from_array(table, m, gs[0].input_domain, f.output_domain)

    def _compositions(self, f: FiniteFunction, tables: np.ndarray, size: int) -> np.ndarray:
        choices = point_grid(tables.shape[0], f.arity)
        return f.as_array()[matrix_row_codes(tables, choices, size)]

    def clone_generate(self, F: FunctionClass, arity_bound: int, jobs: Optional[int] = None) -> FunctionClass:
        """Least class containing F and the projections up to the bound, closed under
        composition with every intermediate arity at most the bound."""
        domain = _operation_domain(F)
        k = domain.size
        logger.info(f"Generating a clone from {F.cardinality} operations on {domain}; arities truncated at {arity_bound}")

        layers: Dict[int, Dict[Tuple[int, ...], None]] = {m: {} for m in range(1, arity_bound + 1)}
        for f in list(F.members) + projections(domain, arity_bound):
            if f.arity > arity_bound:
                logger.warning(f"Generator of arity {f.arity} is above the bound {arity_bound} and is left out")
                continue
            layers[f.arity].setdefault(f.table, None)

        rounds = 0
        changed = True
        while changed:
            rounds += 1
            changed = False
            outer = [FiniteFunction(arity=n, input_domain=domain, output_domain=domain, table=t)
                     for n in layers for t in layers[n]]
            for m in range(1, arity_bound + 1):
                tables = np.array(list(layers[m]), dtype=np.int64).reshape(-1, k ** m)
                for f in outer:
                    guard_candidates(tables.shape[0] ** f.arity, f"compositions of a {f.arity}-ary operation at arity {m}")

                produced = parallel_map(lambda f: self._compositions(f, tables, k), outer, jobs)
                for block in produced:
                    for row in np.unique(block, axis=0):
                        key = tuple(int(value) for value in row)
                        if key not in layers[m]:
                            layers[m][key] = None
                            changed = True

        members = [
            FiniteFunction(arity=m, input_domain=domain, output_domain=domain, table=t)
            for m in layers for t in layers[m]
        ]
        logger.info(f"Clone fixpoint reached {len(members)} operations after {rounds} rounds")
        return FunctionClass(input_domain=domain, output_domain=domain, members=members, arity_bound=arity_bound)

    def pol(self, domain: FiniteDomain, rels: Sequence[Relation], arity_bound: int) -> FunctionClass:
        for R in rels:
            require_same_domain(R.domain, domain, "relation")
        members = []
        for n in range(1, arity_bound + 1):
            tables = all_functions(domain, domain, n)
            alive = np.ones(tables.shape[0], dtype=bool)
            for R in rels:
                live = np.flatnonzero(alive)
                ok = satisfaction_tool.satisfies_batch(
                    tables[live], n, domain, domain, Constraint(antecedent=R, consequent=R)
                )
                alive[live[~ok]] = False
            members.extend(FiniteFunction.from_array(table, n, domain, domain) for table in tables[alive])
        return FunctionClass(input_domain=domain, output_domain=domain, members=members, arity_bound=arity_bound)

    def inv(self, F: FunctionClass, arity_bound: int) -> List[Relation]:
        domain = _operation_domain(F)
        found = []
        for m in range(1, arity_bound + 1):
            for R in all_relations(domain, m):
                if all(satisfaction_tool.image_of_relation(f, R).issubset(R) for f in F.members):
                    found.append(R)
        logger.info(f"{len(found)} invariant relations up to arity {arity_bound}")
        return found

    def general_superposition(
        self,
        rels: Sequence[Relation],
        b: Sequence[str],
        bs: Sequence[Sequence[str]],
        labels: LabelSet,
        domain: Optional[FiniteDomain] = None,
    ) -> Relation:
        """{f o b : f in A^L with f o b_j in R_j for every j}"""
        if domain is None:
            if not rels:
                raise PreconditionError("an empty family needs an explicit domain")
            domain = rels[0].domain
        if len(bs) != len(rels):
            raise ArityMismatchError(f"{len(bs)} label tuples for {len(rels)} relations")
        if not b:
            raise ArityMismatchError("the label tuple b must be non-empty")

        target = labels.positions(b)
        sources = []
        for j, (R, bj) in enumerate(zip(rels, bs)):
            require_same_domain(R.domain, domain, f"family member {j}")
            if len(bj) != R.arity:
                raise ArityMismatchError(f"label tuple {j} has length {len(bj)}, relation {j} has arity {R.arity}")
            sources.append(labels.positions(bj))

        k = domain.size
        guard_candidates(k ** len(labels), f"maps from {len(labels)} labels into {domain}")
        grid = point_grid(k, len(labels))
        ok = np.ones(grid.shape[0], dtype=bool)
        for R, index in zip(rels, sources):
            ok &= R.membership_mask()[encode_rows(grid[:, index], k)]

        codes = np.unique(encode_rows(grid[ok][:, target], k))
        return Relation.from_codes(domain, len(target), codes)

    def equality_pattern_relation(self, b: Sequence[str], domain: FiniteDomain) -> Relation:
        if not b:
            raise ArityMismatchError("the label tuple must be non-empty")
        grid = point_grid(domain.size, len(b))
        keep = np.ones(grid.shape[0], dtype=bool)
        first: Dict[str, int] = {}
        for i, label in enumerate(b):
            j = first.setdefault(label, i)
            if j != i:
                keep &= grid[:, i] == grid[:, j]
        return Relation(arity=len(b), domain=domain, tuples=[tuple(row) for row in grid[keep]])

    def decomposition_scheme(self, b: Sequence[str], bs: Sequence[Sequence[str]], labels: LabelSet) -> MinorScheme:
        """h_j sends a label of b_j to its least position in b, or to itself as an indeterminate."""
        labels.positions(b)
        first: Dict[str, int] = {}
        for i, label in enumerate(b):
            first.setdefault(label, i)
        indeterminates = [label for label in labels.labels if label not in first]
        maps = []
        for bj in bs:
            labels.positions(bj)
            maps.append([TargetIndex(index=first[label]) if label in first else Indeterminate(symbol=label) for label in bj])
        return MinorScheme(target=len(b), indeterminates=tuple(indeterminates), maps=maps)

    def superposition_decomposition(
        self,
        b: Sequence[str],
        bs: Sequence[Sequence[str]],
        labels: LabelSet,
        rels: Sequence[Relation],
        jobs: Optional[int] = None,
    ) -> SuperpositionDecomposition:
        if not rels:
            raise PreconditionError("decomposition needs a non-empty relation family")
        scheme = self.decomposition_scheme(b, bs, labels)
        tight = minor_tool.tight_minor_relations(scheme, rels, jobs)
        pattern = self.equality_pattern_relation(b, rels[0].domain)
        superposition = self.general_superposition(rels, b, bs, labels)
        agrees = superposition == tight.intersection(pattern)
        if not agrees:
            logger.warning(f"Superposition differs from tight minor and equality pattern for scheme {scheme}")
        return SuperpositionDecomposition(
            scheme=scheme,
            tight_minor=tight,
            equality_pattern=pattern,
            superposition=superposition,
            agrees=agrees,
        )

    def tight_minor_as_superposition(self, H: MinorScheme, rels: Sequence[Relation]) -> Relation:
        minor_tool.check_family(H, rels)
        target = [f"x{i}" for i in range(H.target)]
        extra = [f"y.{symbol}" for symbol in H.indeterminates]
        labels = LabelSet(labels=tuple(target + extra))
        bs = [
            [target[entry.index] if isinstance(entry, TargetIndex) else f"y.{entry.symbol}" for entry in h]
            for h in H.maps
        ]
        return self.general_superposition(rels, target, bs, labels)

    def image_union(self, C: FunctionClass, R: Relation) -> Relation:
        require_same_domain(R.domain, C.input_domain, "relation")
        union = Relation.empty(C.output_domain, R.arity)
        for f in C.members:
            union = union.union(satisfaction_tool.image_of_relation(f, R))
        return union

    def interpolates(self, rels: Sequence[Relation], R: Relation, S: Relation) -> bool:
        return any(
            candidate.arity == R.arity and R.issubset(candidate) and candidate.issubset(S)
            for candidate in rels
            if candidate.domain == R.domain
        )

    def is_clone(self, C: FunctionClass) -> bool:
        domain = _operation_domain(C)
        if not all(p in C for p in projections(domain, C.arity_bound)):
            return False
        return self.clone_generate(C, C.arity_bound).cardinality == C.cardinality

    def is_closed_relation_set(
        self,
        rels: Sequence[Relation],
        domain: FiniteDomain,
        arity_bound: int,
        schemes: Sequence[MinorScheme],
    ) -> bool:
        """Equality and empty relations present, and every tight minor of members under
        the given schemes (target within the bound) present."""
        keys = {R.sort_key() for R in rels}
        required = [Relation.empty(domain, m) for m in range(1, arity_bound + 1)]
        if arity_bound >= 2:
            required.append(Relation.equality(domain))
        if any(R.sort_key() not in keys for R in required):
            return False

        by_arity: Dict[int, List[Relation]] = {}
        for R in rels:
            by_arity.setdefault(R.arity, []).append(R)
        for H in schemes:
            if H.target > arity_bound:
                continue
            pools = [by_arity.get(n, []) for n in H.source_arities]
            if any(not pool for pool in pools):
                continue
            guard_candidates(prod(len(pool) for pool in pools), f"relation families for scheme {H}")
            for family in product(*pools):
                minor = minor_tool.tight_minor_relations(H, list(family))
                if minor.sort_key() not in keys:
                    logger.warning(f"Tight minor under {H} is missing from the relation set")
                    return False
        return True


clone_tool = CloneTool()
