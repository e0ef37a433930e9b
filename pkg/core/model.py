"""Finite domains, relations, functions, matrices and constraints.

Elements of a domain of size k are the integers 0..k-1. Points (tuples over a domain)
are plain Python tuples; a relation stores them duplicate-free in lexicographic order,
so two relations with the same members are equal, hash equally and serialize
identically.
"""

import logging
from functools import lru_cache
from itertools import product
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from core.errors import ArityMismatchError, DomainMismatchError

logger = logging.getLogger(__name__)

Point = Tuple[int, ...]


@lru_cache(maxsize=512)
def point_grid(size: int, arity: int) -> np.ndarray:
    shape = (size,) * arity
    grid = np.stack(np.unravel_index(np.arange(size ** arity), shape), axis=1).astype(np.int64)
    grid.setflags(write=False)
    return grid


@lru_cache(maxsize=512)
def place_weights(size: int, arity: int) -> np.ndarray:
    weights = size ** np.arange(arity - 1, -1, -1, dtype=np.int64)
    weights.setflags(write=False)
    return weights


def encode_rows(array: np.ndarray, size: int) -> np.ndarray:
    """Row-major ranks of the points stored along the last axis of `array`."""
    return array @ place_weights(size, array.shape[-1])


class FiniteDomain(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str = Field(min_length=1)
    size: int = Field(ge=1)

    @property
    def elements(self) -> range:
        return range(self.size)

    def points(self, arity: int) -> Iterator[Point]:
        return product(range(self.size), repeat=arity)

    def point_count(self, arity: int) -> int:
        return self.size ** arity

    def payload(self) -> Dict[str, Any]:
        return {"name": self.name, "size": self.size}

    def __str__(self) -> str:
        return f"{self.name}[{self.size}]"


def check_point(t: Sequence[int], domain: FiniteDomain) -> Point:
    for entry in t:
        if not 0 <= entry < domain.size:
            raise DomainMismatchError(f"entry {entry} of {tuple(t)} is outside domain {domain}")
    return tuple(int(entry) for entry in t)


def encode_point(t: Sequence[int], domain: FiniteDomain) -> int:
    index = 0
    for entry in check_point(t, domain):
        index = index * domain.size + entry
    return index


def decode_point(index: int, arity: int, domain: FiniteDomain) -> Point:
    if arity < 1:
        raise ArityMismatchError("arity must be a positive integer")
    if not 0 <= index < domain.size ** arity:
        raise DomainMismatchError(f"index {index} is not a point of {domain}^{arity}")
    entries = []
    for _ in range(arity):
        index, entry = divmod(index, domain.size)
        entries.append(entry)
    return tuple(reversed(entries))


def require_same_domain(left: FiniteDomain, right: FiniteDomain, what: str) -> None:
    if left != right:
        raise DomainMismatchError(f"{what}: domain {left} does not match {right}")


class Relation(BaseModel):
    model_config = ConfigDict(frozen=True)

    arity: int = Field(ge=1)
    domain: FiniteDomain
    tuples: Tuple[Tuple[int, ...], ...] = ()

    _members: frozenset = PrivateAttr(default=frozenset())

    @model_validator(mode="before")
    @classmethod
    def canonicalize(cls, data: Any) -> Any:
        if isinstance(data, dict) and "tuples" in data:
            members = {tuple(int(entry) for entry in t) for t in data["tuples"]}
            data = {**data, "tuples": tuple(sorted(members))}
        return data

    @model_validator(mode="after")
    def check_members(self) -> "Relation":
        for t in self.tuples:
            if len(t) != self.arity:
                raise ArityMismatchError(f"tuple {t} does not have arity {self.arity}")
            check_point(t, self.domain)
        return self

    def model_post_init(self, __context: Any) -> None:
        self._members = frozenset(self.tuples)

    @classmethod
    def of(cls, domain: FiniteDomain, tuples: Iterable[Sequence[int]], arity: Optional[int] = None) -> "Relation":
        tuples = [tuple(t) for t in tuples]
        if arity is None:
            if not tuples:
                raise ArityMismatchError("an empty relation needs an explicit arity")
            arity = len(tuples[0])
        return cls(arity=arity, domain=domain, tuples=tuples)

    @classmethod
    def empty(cls, domain: FiniteDomain, arity: int) -> "Relation":
        return cls(arity=arity, domain=domain, tuples=())

    @classmethod
    def full(cls, domain: FiniteDomain, arity: int) -> "Relation":
        return cls(arity=arity, domain=domain, tuples=list(domain.points(arity)))

    @classmethod
    def equality(cls, domain: FiniteDomain) -> "Relation":
        return cls(arity=2, domain=domain, tuples=[(a, a) for a in domain.elements])

    @classmethod
    def disequality(cls, domain: FiniteDomain) -> "Relation":
        return cls(arity=2, domain=domain, tuples=[(a, b) for a in domain.elements for b in domain.elements if a != b])

    @classmethod
    def from_codes(cls, domain: FiniteDomain, arity: int, codes: Iterable[int]) -> "Relation":
        grid = point_grid(domain.size, arity)
        return cls(arity=arity, domain=domain, tuples=[tuple(grid[int(code)]) for code in codes])

    def __contains__(self, t: object) -> bool:
        return tuple(t) in self._members if isinstance(t, (tuple, list)) else False

    @property
    def cardinality(self) -> int:
        return len(self.tuples)

    @property
    def is_empty(self) -> bool:
        return not self.tuples

    @property
    def is_full(self) -> bool:
        return len(self.tuples) == self.domain.size ** self.arity

    def as_array(self) -> np.ndarray:
        return np.array(self.tuples, dtype=np.int64).reshape(len(self.tuples), self.arity)

    def codes(self) -> np.ndarray:
        return encode_rows(self.as_array(), self.domain.size)

    def membership_mask(self) -> np.ndarray:
        mask = np.zeros(self.domain.size ** self.arity, dtype=bool)
        mask[self.codes()] = True
        return mask

    def _compatible(self, other: "Relation", what: str) -> None:
        require_same_domain(self.domain, other.domain, what)
        if self.arity != other.arity:
            raise ArityMismatchError(f"{what}: arity {self.arity} does not match {other.arity}")

    def issubset(self, other: "Relation") -> bool:
        self._compatible(other, "inclusion")
        return self._members <= other._members

    def issuperset(self, other: "Relation") -> bool:
        return other.issubset(self)

    def intersection(self, other: "Relation") -> "Relation":
        self._compatible(other, "intersection")
        return Relation(arity=self.arity, domain=self.domain, tuples=self._members & other._members)

    def union(self, other: "Relation") -> "Relation":
        self._compatible(other, "union")
        return Relation(arity=self.arity, domain=self.domain, tuples=self._members | other._members)

    def sort_key(self) -> Tuple[int, Tuple[Point, ...]]:
        return (self.arity, self.tuples)

    def payload(self) -> Dict[str, Any]:
        return {"arity": self.arity, "domain": self.domain.name, "tuples": [list(t) for t in self.tuples]}

    def __str__(self) -> str:
        body = ", ".join("(" + ",".join(map(str, t)) + ")" for t in self.tuples)
        return "{" + body + "}"


@lru_cache(maxsize=4096)
def table_array(table: Tuple[int, ...]) -> np.ndarray:
    array = np.array(table, dtype=np.int64)
    array.setflags(write=False)
    return array


class FiniteFunction(BaseModel):
    model_config = ConfigDict(frozen=True)

    arity: int = Field(ge=1)
    input_domain: FiniteDomain
    output_domain: FiniteDomain
    table: Tuple[int, ...]

    @model_validator(mode="before")
    @classmethod
    def native_table(cls, data: Any) -> Any:
        if isinstance(data, dict) and "table" in data:
            data = {**data, "table": tuple(int(value) for value in data["table"])}
        return data

    @model_validator(mode="after")
    def check_table(self) -> "FiniteFunction":
        expected = self.input_domain.size ** self.arity
        if len(self.table) != expected:
            raise ArityMismatchError(f"table has {len(self.table)} entries, expected {expected}")
        for value in self.table:
            if not 0 <= value < self.output_domain.size:
                raise DomainMismatchError(f"table value {value} is outside {self.output_domain}")
        return self

    @classmethod
    def from_callable(
        cls,
        fn: Callable[..., int],
        arity: int,
        input_domain: FiniteDomain,
        output_domain: Optional[FiniteDomain] = None,
    ) -> "FiniteFunction":
        output_domain = output_domain or input_domain
        table = [int(fn(*point)) for point in input_domain.points(arity)]
        return cls(arity=arity, input_domain=input_domain, output_domain=output_domain, table=table)

    @classmethod
    def from_array(
        cls, table: np.ndarray, arity: int, input_domain: FiniteDomain, output_domain: FiniteDomain
    ) -> "FiniteFunction":
        return cls(
            arity=arity,
            input_domain=input_domain,
            output_domain=output_domain,
            table=tuple(int(value) for value in table),
        )

    @classmethod
    def projection(cls, domain: FiniteDomain, arity: int, index: int) -> "FiniteFunction":
        if not 0 <= index < arity:
            raise ArityMismatchError(f"projection index {index} out of range for arity {arity}")
        return cls.from_callable(lambda *point: point[index], arity, domain)

    @classmethod
    def constant(
        cls, input_domain: FiniteDomain, arity: int, value: int, output_domain: Optional[FiniteDomain] = None
    ) -> "FiniteFunction":
        return cls.from_callable(lambda *point: value, arity, input_domain, output_domain)

    @property
    def is_operation(self) -> bool:
        return self.input_domain == self.output_domain

    def as_array(self) -> np.ndarray:
        return table_array(self.table)

    def __call__(self, *point: int) -> int:
        if len(point) != self.arity:
            raise ArityMismatchError(f"expected {self.arity} arguments, got {len(point)}")
        return self.table[encode_point(point, self.input_domain)]

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.arity, self.table)

    def payload(self) -> Dict[str, Any]:
        return {
            "arity": self.arity,
            "input_domain": self.input_domain.name,
            "output_domain": self.output_domain.name,
            "table": list(self.table),
        }


class Matrix(BaseModel):
    """An m x n matrix stored as its n columns (each an m-tuple)."""

    model_config = ConfigDict(frozen=True)

    domain: FiniteDomain
    columns: Tuple[Tuple[int, ...], ...] = Field(min_length=1)

    @model_validator(mode="before")
    @classmethod
    def native_columns(cls, data: Any) -> Any:
        if isinstance(data, dict) and "columns" in data:
            data = {**data, "columns": tuple(tuple(int(entry) for entry in column) for column in data["columns"])}
        return data

    @model_validator(mode="after")
    def check_columns(self) -> "Matrix":
        heights = {len(column) for column in self.columns}
        if len(heights) != 1 or 0 in heights:
            raise ArityMismatchError("matrix columns must share a positive arity")
        for column in self.columns:
            check_point(column, self.domain)
        return self

    @classmethod
    def from_rows(cls, domain: FiniteDomain, rows: Sequence[Sequence[int]]) -> "Matrix":
        if not rows:
            raise ArityMismatchError("a matrix needs at least one row")
        return cls(domain=domain, columns=tuple(zip(*rows)))

    @property
    def rows_count(self) -> int:
        return len(self.columns[0])

    @property
    def cols_count(self) -> int:
        return len(self.columns)

    def rows(self) -> List[Point]:
        return list(zip(*self.columns))

    def payload(self) -> Dict[str, Any]:
        return {"domain": self.domain.name, "columns": [list(column) for column in self.columns]}


class Constraint(BaseModel):
    model_config = ConfigDict(frozen=True)

    antecedent: Relation
    consequent: Relation

    @model_validator(mode="after")
    def check_arity(self) -> "Constraint":
        if self.antecedent.arity != self.consequent.arity:
            raise ArityMismatchError(
                f"antecedent arity {self.antecedent.arity} differs from consequent arity {self.consequent.arity}"
            )
        return self

    @property
    def arity(self) -> int:
        return self.antecedent.arity

    @property
    def input_domain(self) -> FiniteDomain:
        return self.antecedent.domain

    @property
    def output_domain(self) -> FiniteDomain:
        return self.consequent.domain

    def sort_key(self):
        return (self.arity, self.antecedent.tuples, self.consequent.tuples)

    def payload(self) -> Dict[str, Any]:
        return {"arity": self.arity, "antecedent": self.antecedent.payload(), "consequent": self.consequent.payload()}

    def __str__(self) -> str:
        return f"({self.antecedent}, {self.consequent})"


class IndexMap(BaseModel):
    model_config = ConfigDict(frozen=True)

    source_arity: int = Field(ge=1)
    target_arity: int = Field(ge=1)
    images: Tuple[int, ...]

    @model_validator(mode="after")
    def check_images(self) -> "IndexMap":
        if len(self.images) != self.source_arity:
            raise ArityMismatchError(f"index map needs {self.source_arity} images, got {len(self.images)}")
        for image in self.images:
            if not 0 <= image < self.target_arity:
                raise ArityMismatchError(f"image {image} is not below target arity {self.target_arity}")
        return self

    @classmethod
    def of(cls, images: Sequence[int], target_arity: int) -> "IndexMap":
        return cls(source_arity=len(images), target_arity=target_arity, images=tuple(images))

    @classmethod
    def all_maps(cls, source_arity: int, target_arity: int) -> Iterator["IndexMap"]:
        for images in product(range(target_arity), repeat=source_arity):
            yield cls(source_arity=source_arity, target_arity=target_arity, images=images)


def columns_in_relation(M: Matrix, R: Relation) -> bool:
    require_same_domain(M.domain, R.domain, "matrix/relation")
    if M.rows_count != R.arity:
        raise ArityMismatchError(f"matrix columns have arity {M.rows_count}, relation has arity {R.arity}")
    return all(column in R for column in M.columns)
