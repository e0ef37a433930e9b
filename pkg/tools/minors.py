import logging
import re
from enum import Enum
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from core.errors import ArityMismatchError, PreconditionError
from core.guards import guard_candidates
from core.model import Constraint, FiniteDomain, Point, Relation, encode_rows, point_grid, require_same_domain
from core.parallel import parallel_map, resolve_jobs

logger = logging.getLogger(__name__)

TARGET_PATTERN = re.compile(r"^t(\d+)$")


class TargetIndex(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int = Field(ge=0)

    def __str__(self) -> str:
        return f"t{self.index}"


class Indeterminate(BaseModel):
    model_config = ConfigDict(frozen=True)

    symbol: str = Field(min_length=1)

    def __str__(self) -> str:
        return self.symbol


SchemeEntry = Union[TargetIndex, Indeterminate]


def parse_entry(text: Union[str, SchemeEntry]) -> SchemeEntry:
    if isinstance(text, (TargetIndex, Indeterminate)):
        return text
    match = TARGET_PATTERN.match(text)
    if match:
        return TargetIndex(index=int(match.group(1)))
    return Indeterminate(symbol=text)


class MinorScheme(BaseModel):
    model_config = ConfigDict(frozen=True)

    target: int = Field(ge=1)
    indeterminates: Tuple[str, ...] = ()
    maps: Tuple[Tuple[SchemeEntry, ...], ...] = Field(min_length=1)

    @model_validator(mode="before")
    @classmethod
    def parse_maps(cls, data: Any) -> Any:
        if isinstance(data, dict) and "maps" in data:
            maps = tuple(
                tuple(parse_entry(entry) if isinstance(entry, str) else entry for entry in h)
                for h in data["maps"]
            )
            data = {**data, "maps": maps}
        return data

    @model_validator(mode="after")
    def check_maps(self) -> "MinorScheme":
        if len(set(self.indeterminates)) != len(self.indeterminates):
            raise PreconditionError(f"indeterminates are not distinct: {self.indeterminates}")
        symbols = set(self.indeterminates)
        for h in self.maps:
            if not h:
                raise ArityMismatchError("every scheme map needs a positive source arity")
            for entry in h:
                if isinstance(entry, TargetIndex) and entry.index >= self.target:
                    raise ArityMismatchError(f"{entry} is not below the target {self.target}")
                if isinstance(entry, Indeterminate) and entry.symbol not in symbols:
                    raise PreconditionError(f"indeterminate {entry.symbol} is not declared")
        return self

    @classmethod
    def build(
        cls,
        target: int,
        maps: Sequence[Sequence[Union[str, SchemeEntry]]],
        indeterminates: Optional[Sequence[str]] = None,
    ) -> "MinorScheme":
        """Scheme from textual entries; undeclared indeterminates are collected in order of appearance."""
        parsed = [[parse_entry(entry) for entry in h] for h in maps]
        if indeterminates is None:
            indeterminates = []
            for h in parsed:
                for entry in h:
                    if isinstance(entry, Indeterminate) and entry.symbol not in indeterminates:
                        indeterminates.append(entry.symbol)
        return cls(target=target, indeterminates=tuple(indeterminates), maps=parsed)

    @property
    def source_arities(self) -> List[int]:
        return [len(h) for h in self.maps]

    @property
    def used_indeterminates(self) -> List[str]:
        occurring = {entry.symbol for h in self.maps for entry in h if isinstance(entry, Indeterminate)}
        return [symbol for symbol in self.indeterminates if symbol in occurring]

    def payload(self) -> Dict[str, Any]:
        return {
            "target": self.target,
            "indeterminates": list(self.indeterminates),
            "maps": [[str(entry) for entry in h] for h in self.maps],
        }

    def __str__(self) -> str:
        body = "; ".join("(" + ",".join(str(entry) for entry in h) + ")" for h in self.maps)
        return f"target {self.target} indet {{{','.join(self.indeterminates)}}} maps {body}"


class SkolemMap(BaseModel):
    model_config = ConfigDict(frozen=True)

    assignment: Dict[str, int] = {}


class MinorKind(str, Enum):
    TIGHT = "tight"
    RESTRICTIVE = "restrictive"
    EXTENSIVE = "extensive"
    NEITHER = "neither"
    BOTH_TRIVIALLY = "both-trivially"


class MinorClassification(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: MinorKind
    restrictive: bool
    extensive: bool
    tight_minor: Relation


class CanonicalConstraints(NamedTuple):
    equality: Constraint
    empty: Constraint
    trivial: Constraint


def identity_scheme(arity: int) -> MinorScheme:
    return MinorScheme(target=arity, maps=[[TargetIndex(index=i) for i in range(arity)]])


def duplicated_identity_scheme(arity: int, copies: int) -> MinorScheme:
    return MinorScheme(target=arity, maps=[[TargetIndex(index=i) for i in range(arity)]] * copies)


def compile_scheme(H: MinorScheme) -> Tuple[List[str], List[np.ndarray]]:
    """Positions of every h_j entry inside the vector a + sigma restricted to used indeterminates."""
    used = H.used_indeterminates
    offset = {symbol: H.target + i for i, symbol in enumerate(used)}
    positions = [
        np.array([entry.index if isinstance(entry, TargetIndex) else offset[entry.symbol] for entry in h], dtype=np.int64)
        for h in H.maps
    ]
    return used, positions


class MinorTool:
    def scheme_apply(self, a: Sequence[int], sigma: SkolemMap, h: Sequence[SchemeEntry]) -> Point:
        entries = []
        for entry in h:
            if isinstance(entry, TargetIndex):
                if entry.index >= len(a):
                    raise ArityMismatchError(f"{entry} is out of range for a {len(a)}-tuple")
                entries.append(a[entry.index])
            else:
                if entry.symbol not in sigma.assignment:
                    raise PreconditionError(f"Skolem map does not assign {entry.symbol}")
                entries.append(sigma.assignment[entry.symbol])
        return tuple(entries)

    def check_family(self, H: MinorScheme, rels: Sequence[Relation]) -> FiniteDomain:
        if len(rels) != len(H.maps):
            raise ArityMismatchError(f"scheme has {len(H.maps)} maps but the family has {len(rels)} relations")
        domain = rels[0].domain
        for j, (h, rel) in enumerate(zip(H.maps, rels)):
            require_same_domain(rel.domain, domain, f"family member {j}")
            if rel.arity != len(h):
                raise ArityMismatchError(f"map {j} has source arity {len(h)} but relation {j} has arity {rel.arity}")
        return domain

    def tight_minor_relations(
        self, H: MinorScheme, rels: Sequence[Relation], jobs: Optional[int] = None
    ) -> Relation:
        domain = self.check_family(H, rels)
        used, positions = compile_scheme(H)
        k, m, u = domain.size, H.target, len(used)
        guard_candidates(k ** (m + u), f"target tuples and Skolem maps for a scheme with target {m} and {u} indeterminates")

        masks = [rel.membership_mask() for rel in rels]
        if any(not mask.any() for mask in masks):
            return Relation.empty(domain, m)

        grid = point_grid(k, m + u)
        per_target = k ** u
        targets = k ** m
        workers = resolve_jobs(jobs)
        step = max(1, -(-targets // workers))

        # target tuple is the most significant part of a + sigma, so its block is contiguous
        def witnessed(start: int) -> np.ndarray:
            stop = min(targets, start + step)
            block = grid[start * per_target: stop * per_target]
            ok = np.ones(block.shape[0], dtype=bool)
            for mask, index in zip(masks, positions):
                ok &= mask[encode_rows(block[:, index], k)]
            return start + np.flatnonzero(ok.reshape(stop - start, per_target).any(axis=1))

        found = parallel_map(witnessed, list(range(0, targets, step)), workers)
        return Relation.from_codes(domain, m, np.concatenate(found))

    def minor_classification(self, R: Relation, H: MinorScheme, rels: Sequence[Relation]) -> MinorClassification:
        if R.arity != H.target:
            raise ArityMismatchError(f"relation arity {R.arity} differs from the scheme target {H.target}")
        tight = self.tight_minor_relations(H, rels)
        restrictive = R.issubset(tight)
        extensive = R.issuperset(tight)
        if restrictive and extensive:
            kind = MinorKind.BOTH_TRIVIALLY if tight.is_empty or tight.is_full else MinorKind.TIGHT
        elif restrictive:
            kind = MinorKind.RESTRICTIVE
        elif extensive:
            kind = MinorKind.EXTENSIVE
        else:
            kind = MinorKind.NEITHER
        return MinorClassification(kind=kind, restrictive=restrictive, extensive=extensive, tight_minor=tight)

    def tight_minor_constraint(
        self, H: MinorScheme, cs: Sequence[Constraint], jobs: Optional[int] = None
    ) -> Constraint:
        antecedent = self.tight_minor_relations(H, [c.antecedent for c in cs], jobs)
        consequent = self.tight_minor_relations(H, [c.consequent for c in cs], jobs)
        return Constraint(antecedent=antecedent, consequent=consequent)

    def is_conjunctive_minor(self, c: Constraint, H: MinorScheme, cs: Sequence[Constraint]) -> bool:
        if c.arity != H.target:
            raise ArityMismatchError(f"constraint arity {c.arity} differs from the scheme target {H.target}")
        tight = self.tight_minor_constraint(H, cs)
        return c.antecedent.issubset(tight.antecedent) and c.consequent.issuperset(tight.consequent)

    def compose_schemes(self, H: MinorScheme, inner: Sequence[MinorScheme]) -> MinorScheme:
        """The composite scheme H(H_j); inner indeterminates are renamed "j.symbol"."""
        if len(inner) != len(H.maps):
            raise ArityMismatchError(f"scheme has {len(H.maps)} maps but {len(inner)} inner schemes were given")

        taken = set(H.indeterminates)
        indeterminates = list(H.indeterminates)
        maps = []
        for j, (h, scheme) in enumerate(zip(H.maps, inner)):
            if scheme.target != len(h):
                raise ArityMismatchError(f"inner scheme {j} has target {scheme.target}, map {j} has source {len(h)}")
            renamed = {}
            for symbol in scheme.indeterminates:
                fresh = f"{j}.{symbol}"
                while fresh in taken:
                    fresh += "'"
                taken.add(fresh)
                renamed[symbol] = fresh
                indeterminates.append(fresh)
            for inner_map in scheme.maps:
                maps.append([
                    h[entry.index] if isinstance(entry, TargetIndex) else Indeterminate(symbol=renamed[entry.symbol])
                    for entry in inner_map
                ])

        return MinorScheme(target=H.target, indeterminates=tuple(indeterminates), maps=maps)

    def is_relaxation(self, relaxed: Constraint, c: Constraint) -> bool:
        if relaxed.arity != c.arity:
            return False
        return relaxed.antecedent.issubset(c.antecedent) and relaxed.consequent.issuperset(c.consequent)

    def relax(self, c: Constraint, new_antecedent: Relation, new_consequent: Relation) -> Constraint:
        relaxed = Constraint(antecedent=new_antecedent, consequent=new_consequent)
        if relaxed.arity != c.arity:
            raise ArityMismatchError(f"relaxation arity {relaxed.arity} differs from {c.arity}")
        if not new_antecedent.issubset(c.antecedent):
            raise PreconditionError("a relaxation may only restrict the antecedent")
        if not new_consequent.issuperset(c.consequent):
            raise PreconditionError("a relaxation may only extend the consequent")
        return relaxed

    def intersect_consequents(self, cs: Sequence[Constraint]) -> Constraint:
        if not cs:
            raise PreconditionError("intersecting consequents needs a non-empty family")
        antecedent = cs[0].antecedent
        consequent = cs[0].consequent
        for c in cs[1:]:
            if c.antecedent != antecedent:
                raise PreconditionError("constraints with different antecedents cannot be intersected")
            consequent = consequent.intersection(c.consequent)
        return Constraint(antecedent=antecedent, consequent=consequent)

    def canonical_constraints(self, A: FiniteDomain, B: FiniteDomain, arity: int) -> CanonicalConstraints:
        if arity < 1:
            raise ArityMismatchError("arity must be a positive integer")
        return CanonicalConstraints(
            equality=Constraint(antecedent=Relation.equality(A), consequent=Relation.equality(B)),
            empty=Constraint(antecedent=Relation.empty(A, arity), consequent=Relation.empty(B, arity)),
            trivial=Constraint(antecedent=Relation.full(A, arity), consequent=Relation.full(B, arity)),
        )

    def simple_minor(
        self,
        c0: Constraint,
        h: Sequence[Union[str, SchemeEntry]],
        target: int,
        indeterminates: Sequence[str] = (),
    ) -> Constraint:
        scheme = MinorScheme(target=target, indeterminates=tuple(indeterminates), maps=[list(h)])
        return self.tight_minor_constraint(scheme, [c0])


minor_tool = MinorTool()
