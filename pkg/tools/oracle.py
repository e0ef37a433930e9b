"""Plain itertools reimplementations used to cross-check the vectorised paths.

Nothing here prunes or stops early: every matrix, every Skolem map over all declared
indeterminates and every label map is visited.
"""

import logging
from itertools import product
from typing import Sequence

from core.model import FiniteFunction, Relation
from tools.clones import LabelSet
from tools.minors import MinorScheme, TargetIndex, minor_tool

logger = logging.getLogger(__name__)


class OracleTool:
    def image(self, f: FiniteFunction, R: Relation) -> Relation:
        found = set()
        for columns in product(R.tuples, repeat=f.arity):
            found.add(tuple(f(*row) for row in zip(*columns)))
        return Relation(arity=R.arity, domain=f.output_domain, tuples=found)

    def tight_minor(self, H: MinorScheme, rels: Sequence[Relation]) -> Relation:
        domain = minor_tool.check_family(H, rels)
        found = set()
        for a in product(domain.elements, repeat=H.target):
            witnessed = False
            for values in product(domain.elements, repeat=len(H.indeterminates)):
                sigma = dict(zip(H.indeterminates, values))
                rows = [tuple(a[e.index] if isinstance(e, TargetIndex) else sigma[e.symbol] for e in h) for h in H.maps]
                if all(row in R for row, R in zip(rows, rels)):
                    witnessed = True
            if witnessed:
                found.add(a)
        return Relation(arity=H.target, domain=domain, tuples=found)

    def superposition(
        self,
        rels: Sequence[Relation],
        b: Sequence[str],
        bs: Sequence[Sequence[str]],
        labels: LabelSet,
    ) -> Relation:
        domain = rels[0].domain
        found = set()
        for values in product(domain.elements, repeat=len(labels)):
            f = dict(zip(labels.labels, values))
            if all(tuple(f[label] for label in bj) in R for R, bj in zip(rels, bs)):
                found.add(tuple(f[label] for label in b))
        return Relation(arity=len(b), domain=domain, tuples=found)


oracle_tool = OracleTool()
