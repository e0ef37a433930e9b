import logging
from functools import lru_cache
from typing import Any, Dict, Iterator, Mapping, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from core.errors import ArityMismatchError, DomainMismatchError, PreconditionError
from core.guards import guard_candidates
from core.model import (
    Constraint,
    FiniteDomain,
    FiniteFunction,
    Matrix,
    Point,
    Relation,
    decode_point,
    encode_point,
    encode_rows,
    place_weights,
    require_same_domain,
)

logger = logging.getLogger(__name__)

# matrices evaluated per numpy block
BLOCK = 1 << 14


class PartialFunction(BaseModel):
    model_config = ConfigDict(frozen=True)

    arity: int = Field(ge=1)
    input_domain: FiniteDomain
    output_domain: FiniteDomain
    graph: Tuple[Tuple[int, int], ...] = ()

    _codes: frozenset = PrivateAttr(default=frozenset())

    @model_validator(mode="before")
    @classmethod
    def canonicalize(cls, data: Any) -> Any:
        if isinstance(data, dict) and "graph" in data:
            graph = data["graph"]
            pairs = graph.items() if isinstance(graph, Mapping) else graph
            merged: Dict[int, int] = {}
            for code, value in pairs:
                code, value = int(code), int(value)
                if merged.get(code, value) != value:
                    raise PreconditionError(f"point code {code} mapped to two values")
                merged[code] = value
            data = {**data, "graph": tuple(sorted(merged.items()))}
        return data

    @model_validator(mode="after")
    def check_graph(self) -> "PartialFunction":
        positions = self.input_domain.size ** self.arity
        for code, value in self.graph:
            if not 0 <= code < positions:
                raise DomainMismatchError(f"point code {code} is outside {self.input_domain}^{self.arity}")
            if not 0 <= value < self.output_domain.size:
                raise DomainMismatchError(f"value {value} is outside {self.output_domain}")
        return self

    def model_post_init(self, __context: Any) -> None:
        self._codes = frozenset(code for code, _ in self.graph)

    @classmethod
    def from_points(
        cls,
        mapping: Mapping[Sequence[int], int],
        arity: int,
        input_domain: FiniteDomain,
        output_domain: FiniteDomain,
    ) -> "PartialFunction":
        graph = {encode_point(point, input_domain): value for point, value in mapping.items()}
        return cls(arity=arity, input_domain=input_domain, output_domain=output_domain, graph=graph)

    @classmethod
    def from_function(cls, f: FiniteFunction) -> "PartialFunction":
        return cls(
            arity=f.arity,
            input_domain=f.input_domain,
            output_domain=f.output_domain,
            graph=dict(enumerate(f.table)),
        )

    @property
    def size(self) -> int:
        return len(self.graph)

    def is_defined(self, point: Sequence[int]) -> bool:
        return encode_point(point, self.input_domain) in self._codes

    def defined_codes(self) -> frozenset:
        return self._codes

    def domain_points(self) -> Iterator[Point]:
        for code, _ in self.graph:
            yield decode_point(code, self.arity, self.input_domain)

    def value_at(self, point: Sequence[int]) -> Optional[int]:
        return dict(self.graph).get(encode_point(point, self.input_domain))

    def extend(self, point: Sequence[int], value: int) -> "PartialFunction":
        code = encode_point(point, self.input_domain)
        if code in self._codes:
            raise PreconditionError(f"{tuple(point)} is already in the domain")
        return PartialFunction(
            arity=self.arity,
            input_domain=self.input_domain,
            output_domain=self.output_domain,
            graph=self.graph + ((code, value),),
        )

    def as_array(self) -> np.ndarray:
        """Value table with -1 on undefined points."""
        array = np.full(self.input_domain.size ** self.arity, -1, dtype=np.int64)
        for code, value in self.graph:
            array[code] = value
        return array

    def sort_key(self):
        return (self.arity, self.graph)


def column_choices(relation_size: int, arity: int, start: int, stop: int) -> np.ndarray:
    """Column choices start..stop of all arity-column matrices over a relation, in
    lexicographic column order (first column varies slowest)."""
    shape = (relation_size,) * arity
    return np.stack(np.unravel_index(np.arange(start, stop), shape), axis=1)


def matrix_row_codes(relation: np.ndarray, choices: np.ndarray, domain_size: int) -> np.ndarray:
    """Row-major codes of the rows of each chosen matrix, shape (len(choices), m)."""
    columns = relation[choices]
    return np.einsum("lnm,n->lm", columns, place_weights(domain_size, choices.shape[1]))


class SatisfactionTool:
    def __init__(self):
        self._image = lru_cache(maxsize=4096)(self._compute_image)

    def check_constraint_domains(self, f_input: FiniteDomain, f_output: FiniteDomain, c: Constraint) -> None:
        require_same_domain(c.antecedent.domain, f_input, "antecedent")
        require_same_domain(c.consequent.domain, f_output, "consequent")

    def apply_to_matrix(self, f: FiniteFunction, M: Matrix) -> Point:
        require_same_domain(M.domain, f.input_domain, "fM")
        if M.cols_count != f.arity:
            raise ArityMismatchError(f"matrix has {M.cols_count} columns, function arity is {f.arity}")
        return tuple(f.table[encode_point(row, f.input_domain)] for row in M.rows())

    def image_of_relation(self, f: FiniteFunction, R: Relation) -> Relation:
        require_same_domain(R.domain, f.input_domain, "fR")
        return self._image(f, R)

    def _compute_image(self, f: FiniteFunction, R: Relation) -> Relation:
        if R.is_empty:
            return Relation.empty(f.output_domain, R.arity)

        total = guard_candidates(R.cardinality ** f.arity, f"matrices over a relation of size {R.cardinality}")
        logger.info(f"Computing image of a {R.arity}-ary relation under a {f.arity}-ary function ({total} matrices)")

        relation = R.as_array()
        table = f.as_array()
        found = []
        for start in range(0, total, BLOCK):
            choices = column_choices(R.cardinality, f.arity, start, min(total, start + BLOCK))
            image = table[matrix_row_codes(relation, choices, f.input_domain.size)]
            found.append(np.unique(encode_rows(image, f.output_domain.size)))

        return Relation.from_codes(f.output_domain, R.arity, np.unique(np.concatenate(found)))

    def find_violation(self, f: FiniteFunction, c: Constraint) -> Optional[Matrix]:
        """First matrix M < antecedent (lexicographic column order) with fM outside the consequent."""
        self.check_constraint_domains(f.input_domain, f.output_domain, c)
        R = c.antecedent
        if R.is_empty:
            return None

        total = guard_candidates(R.cardinality ** f.arity, f"matrices over a relation of size {R.cardinality}")
        relation = R.as_array()
        table = f.as_array()
        allowed = c.consequent.membership_mask()
        for start in range(0, total, BLOCK):
            choices = column_choices(R.cardinality, f.arity, start, min(total, start + BLOCK))
            image = table[matrix_row_codes(relation, choices, f.input_domain.size)]
            bad = ~allowed[encode_rows(image, f.output_domain.size)]
            if bad.any():
                choice = choices[int(np.argmax(bad))]
                return Matrix(domain=R.domain, columns=[R.tuples[i] for i in choice])
        return None

    def satisfies(self, f: FiniteFunction, c: Constraint) -> bool:
        return self.find_violation(f, c) is None

    def preserves(self, f: FiniteFunction, R: Relation) -> bool:
        if not f.is_operation:
            raise DomainMismatchError(f"not an operation: {f.input_domain} -> {f.output_domain}")
        return self.satisfies(f, Constraint(antecedent=R, consequent=R))

    def satisfies_batch(
        self,
        tables: np.ndarray,
        arity: int,
        input_domain: FiniteDomain,
        output_domain: FiniteDomain,
        c: Constraint,
    ) -> np.ndarray:
        self.check_constraint_domains(input_domain, output_domain, c)
        alive = np.ones(tables.shape[0], dtype=bool)
        R = c.antecedent
        if R.is_empty or tables.shape[0] == 0:
            return alive

        total = guard_candidates(R.cardinality ** arity, f"matrices over a relation of size {R.cardinality}")
        relation = R.as_array()
        allowed = c.consequent.membership_mask()
        block = max(1, (1 << 22) // max(1, tables.shape[0] * R.arity))
        for start in range(0, total, block):
            live = np.flatnonzero(alive)
            if live.size == 0:
                break
            choices = column_choices(R.cardinality, arity, start, min(total, start + block))
            rows = matrix_row_codes(relation, choices, input_domain.size)
            values = tables[live][:, rows]
            ok = allowed[encode_rows(values, output_domain.size)].all(axis=1)
            alive[live[~ok]] = False
        return alive

    def partial_image(self, p: PartialFunction, R: Relation) -> Relation:
        require_same_domain(R.domain, p.input_domain, "pR")
        if R.is_empty or p.size == 0:
            return Relation.empty(p.output_domain, R.arity)

        total = guard_candidates(R.cardinality ** p.arity, f"matrices over a relation of size {R.cardinality}")
        relation = R.as_array()
        table = p.as_array()
        found = []
        for start in range(0, total, BLOCK):
            choices = column_choices(R.cardinality, p.arity, start, min(total, start + BLOCK))
            values = table[matrix_row_codes(relation, choices, p.input_domain.size)]
            applicable = (values >= 0).all(axis=1)
            if applicable.any():
                found.append(np.unique(encode_rows(values[applicable], p.output_domain.size)))

        codes = np.unique(np.concatenate(found)) if found else []
        return Relation.from_codes(p.output_domain, R.arity, codes)

    def partial_satisfies(self, p: PartialFunction, c: Constraint) -> bool:
        self.check_constraint_domains(p.input_domain, p.output_domain, c)
        R = c.antecedent
        if R.is_empty or p.size == 0:
            return True

        total = guard_candidates(R.cardinality ** p.arity, f"matrices over a relation of size {R.cardinality}")
        relation = R.as_array()
        table = p.as_array()
        allowed = c.consequent.membership_mask()
        for start in range(0, total, BLOCK):
            choices = column_choices(R.cardinality, p.arity, start, min(total, start + BLOCK))
            values = table[matrix_row_codes(relation, choices, p.input_domain.size)]
            applicable = (values >= 0).all(axis=1)
            if not applicable.any():
                continue
            if not allowed[encode_rows(values[applicable], p.output_domain.size)].all():
                return False
        return True


satisfaction_tool = SatisfactionTool()
