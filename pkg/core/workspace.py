"""Line-oriented workspace files and their canonical JSON form.

    domain <name> <size>
    relation <name> <arity> <domain>        one tuple per line, blank line ends the block
    function <name> <arity> <domA> <domB>   |domA|^arity values in row-major input order
    constraint <name> <antecedent> <consequent>
    scheme <name> target <m> indet <v1> ...  followed by `map <entries>` lines
    labels <name> <l1> <l2> ...
    class <name> <domA> <domB> <function> ...

Lines starting with `#` are comments.
"""

import json
import logging
import re
from typing import Any, Dict, Iterator, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from core.errors import RelGaloisError, WorkspaceError
from core.model import Constraint, FiniteDomain, FiniteFunction, Relation
from tools.clones import LabelSet
from tools.minors import MinorScheme
from tools.substitution import FunctionClass

logger = logging.getLogger(__name__)

NAME_PATTERN = re.compile(r"^[A-Za-z_][\w.\-']*$")
KEYWORDS = ("domain", "relation", "function", "constraint", "scheme", "labels", "class")
CONSTRAINT_PAIR = re.compile(r"^\(\s*([^,\s()]+)\s*,\s*([^,\s()]+)\s*\)$")


class ClassBinding(BaseModel):
    model_config = ConfigDict(frozen=True)

    input_domain: str
    output_domain: str
    functions: Tuple[str, ...] = ()


class Workspace(BaseModel):
    model_config = ConfigDict(frozen=True)

    domains: Dict[str, FiniteDomain] = Field(default_factory=dict)
    relations: Dict[str, Relation] = Field(default_factory=dict)
    functions: Dict[str, FiniteFunction] = Field(default_factory=dict)
    constraints: Dict[str, Tuple[str, str]] = Field(default_factory=dict)
    schemes: Dict[str, MinorScheme] = Field(default_factory=dict)
    labels: Dict[str, LabelSet] = Field(default_factory=dict)
    classes: Dict[str, ClassBinding] = Field(default_factory=dict)

    def _lookup(self, table: Dict[str, Any], kind: str, name: str) -> Any:
        if name not in table:
            raise WorkspaceError(f"unknown {kind} {name!r}")
        return table[name]

    def domain(self, name: str) -> FiniteDomain:
        return self._lookup(self.domains, "domain", name)

    def relation(self, name: str) -> Relation:
        return self._lookup(self.relations, "relation", name)

    def function(self, name: str) -> FiniteFunction:
        return self._lookup(self.functions, "function", name)

    def scheme(self, name: str) -> MinorScheme:
        return self._lookup(self.schemes, "scheme", name)

    def label_set(self, name: str) -> LabelSet:
        return self._lookup(self.labels, "labels", name)

    def constraint(self, text: str) -> Constraint:
        match = CONSTRAINT_PAIR.match(text.strip())
        if match:
            antecedent, consequent = match.groups()
        else:
            antecedent, consequent = self._lookup(self.constraints, "constraint", text)
        return Constraint(antecedent=self.relation(antecedent), consequent=self.relation(consequent))

    def function_class(self, name: str) -> FunctionClass:
        binding = self._lookup(self.classes, "class", name)
        input_domain, output_domain = self.domain(binding.input_domain), self.domain(binding.output_domain)
        members = [self.function(f) for f in binding.functions]
        return FunctionClass(
            input_domain=input_domain,
            output_domain=output_domain,
            members=members,
            arity_bound=max([1] + [f.arity for f in members]),
        )

    def name_of_domain(self, domain: FiniteDomain) -> str:
        if domain.name in self.domains and self.domains[domain.name] == domain:
            return domain.name
        raise WorkspaceError(f"domain {domain} is not bound in the workspace")

    def payload(self) -> Dict[str, Any]:
        return {
            "domains": {name: d.payload() for name, d in sorted(self.domains.items())},
            "relations": {name: r.payload() for name, r in sorted(self.relations.items())},
            "functions": {name: f.payload() for name, f in sorted(self.functions.items())},
            "constraints": {name: list(pair) for name, pair in sorted(self.constraints.items())},
            "schemes": {name: s.payload() for name, s in sorted(self.schemes.items())},
            "labels": {name: list(l.labels) for name, l in sorted(self.labels.items())},
            "classes": {name: c.model_dump() for name, c in sorted(self.classes.items())},
        }


def tokens(line: str) -> List[Tuple[str, int]]:
    return [(match.group(0), match.start() + 1) for match in re.finditer(r"\S+", line)]


class WorkspaceParser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.position = 0
        self.bindings: Dict[str, Dict[str, Any]] = {
            "domain": {}, "relation": {}, "function": {}, "constraint": {},
            "scheme": {}, "labels": {}, "class": {},
        }

    def error(self, message: str, column: Optional[int] = None) -> WorkspaceError:
        return WorkspaceError(message, self.position, column)

    def next_line(self) -> Optional[List[Tuple[str, int]]]:
        if self.position >= len(self.lines):
            return None
        line = self.lines[self.position]
        self.position += 1
        stripped = line.strip()
        return [] if not stripped or stripped.startswith("#") else tokens(line)

    def peek_is_body(self) -> bool:
        # comments inside a block are skipped; a blank line still ends it
        while self.position < len(self.lines) and self.lines[self.position].strip().startswith("#"):
            self.position += 1
        if self.position >= len(self.lines):
            return False
        stripped = self.lines[self.position].strip()
        return bool(stripped) and stripped.split()[0] not in KEYWORDS

    def integer(self, token: Tuple[str, int], what: str, low: int = 0, high: Optional[int] = None) -> int:
        text, column = token
        try:
            value = int(text)
        except ValueError:
            raise self.error(f"{what} must be an integer, got {text!r}", column) from None
        if value < low or (high is not None and value >= high):
            bound = f"[{low}, {high})" if high is not None else f">= {low}"
            raise self.error(f"{what} {value} is out of range {bound}", column)
        return value

    def expect(self, line: List[Tuple[str, int]], count: int, usage: str, at_least: bool = False) -> None:
        if len(line) < count or (not at_least and len(line) != count):
            raise self.error(f"expected `{usage}`", line[0][1])

    def bind(self, kind: str, token: Tuple[str, int], value: Any) -> None:
        name, column = token
        if not NAME_PATTERN.match(name):
            raise self.error(f"invalid name {name!r}", column)
        if name in self.bindings[kind]:
            raise self.error(f"duplicate {kind} name {name!r}", column)
        self.bindings[kind][name] = value

    def resolve(self, kind: str, token: Tuple[str, int]) -> Any:
        name, column = token
        if name not in self.bindings[kind]:
            raise self.error(f"unknown {kind} {name!r}", column)
        return self.bindings[kind][name]

    def parse(self) -> Workspace:
        while True:
            line = self.next_line()
            if line is None:
                break
            if not line:
                continue
            keyword, column = line[0]
            handler = getattr(self, f"parse_{keyword}", None) if keyword in KEYWORDS else None
            if handler is None:
                raise self.error(f"unknown declaration {keyword!r}", column)
            try:
                handler(line)
            except WorkspaceError:
                raise
            except (RelGaloisError, ValidationError) as e:
                raise self.error(f"{line[1][0] if len(line) > 1 else keyword}: {e}") from e

        return Workspace(
            domains=self.bindings["domain"],
            relations=self.bindings["relation"],
            functions=self.bindings["function"],
            constraints=self.bindings["constraint"],
            schemes=self.bindings["scheme"],
            labels=self.bindings["labels"],
            classes=self.bindings["class"],
        )

    def parse_domain(self, line: List[Tuple[str, int]]) -> None:
        self.expect(line, 3, "domain <name> <size>")
        size = self.integer(line[2], "domain size", low=1)
        self.bind("domain", line[1], FiniteDomain(name=line[1][0], size=size))

    def parse_relation(self, line: List[Tuple[str, int]]) -> None:
        self.expect(line, 4, "relation <name> <arity> <domain>")
        arity = self.integer(line[2], "arity", low=1)
        domain = self.resolve("domain", line[3])
        rows = []
        while self.peek_is_body():
            row = self.next_line()
            if len(row) != arity:
                raise self.error(f"tuple has {len(row)} entries, relation {line[1][0]!r} has arity {arity}", row[0][1])
            rows.append(tuple(self.integer(token, "tuple entry", high=domain.size) for token in row))
        self.bind("relation", line[1], Relation(arity=arity, domain=domain, tuples=rows))

    def parse_function(self, line: List[Tuple[str, int]]) -> None:
        self.expect(line, 5, "function <name> <arity> <domA> <domB>")
        arity = self.integer(line[2], "arity", low=1)
        input_domain, output_domain = self.resolve("domain", line[3]), self.resolve("domain", line[4])
        expected = input_domain.size ** arity
        values = []
        while len(values) < expected and self.peek_is_body():
            values.extend(self.integer(token, "table value", high=output_domain.size) for token in self.next_line())
        if len(values) != expected:
            raise self.error(f"function {line[1][0]!r} needs {expected} table values, got {len(values)}")
        self.bind("function", line[1], FiniteFunction(
            arity=arity, input_domain=input_domain, output_domain=output_domain, table=values,
        ))

    def parse_constraint(self, line: List[Tuple[str, int]]) -> None:
        self.expect(line, 4, "constraint <name> <antecedent> <consequent>")
        antecedent, consequent = self.resolve("relation", line[2]), self.resolve("relation", line[3])
        Constraint(antecedent=antecedent, consequent=consequent)
        self.bind("constraint", line[1], (line[2][0], line[3][0]))

    def parse_scheme(self, line: List[Tuple[str, int]]) -> None:
        self.expect(line, 4, "scheme <name> target <m> indet <v1> ...", at_least=True)
        if line[2][0] != "target":
            raise self.error("expected the keyword `target`", line[2][1])
        target = self.integer(line[3], "target arity", low=1)
        indeterminates: Optional[List[str]] = None
        if len(line) > 4:
            if line[4][0] != "indet":
                raise self.error("expected the keyword `indet`", line[4][1])
            indeterminates = [text for text, _ in line[5:]]
        maps = []
        while self.peek_is_body():
            row = self.next_line()
            if row[0][0] != "map" or len(row) < 2:
                raise self.error("expected `map <entries>`", row[0][1])
            maps.append([text for text, _ in row[1:]])
        if not maps:
            raise self.error(f"scheme {line[1][0]!r} has no map lines")
        self.bind("scheme", line[1], MinorScheme.build(target, maps, indeterminates))

    def parse_labels(self, line: List[Tuple[str, int]]) -> None:
        self.expect(line, 3, "labels <name> <l1> ...", at_least=True)
        self.bind("labels", line[1], LabelSet(labels=tuple(text for text, _ in line[2:])))

    def parse_class(self, line: List[Tuple[str, int]]) -> None:
        self.expect(line, 4, "class <name> <domA> <domB> <function> ...", at_least=True)
        input_domain, output_domain = self.resolve("domain", line[2]), self.resolve("domain", line[3])
        for token in line[4:]:
            f = self.resolve("function", token)
            if f.input_domain != input_domain or f.output_domain != output_domain:
                raise self.error(f"function {token[0]!r} does not map {input_domain} -> {output_domain}", token[1])
        self.bind("class", line[1], ClassBinding(
            input_domain=line[2][0], output_domain=line[3][0], functions=tuple(text for text, _ in line[4:]),
        ))


def parse_workspace(text: str) -> Workspace:
    workspace = WorkspaceParser(text).parse()
    logger.info(
        f"Parsed workspace: {len(workspace.domains)} domains, {len(workspace.relations)} relations, "
        f"{len(workspace.functions)} functions"
    )
    return workspace


def load_workspace(path: str) -> Workspace:
    try:
        with open(path, "r") as f:
            return parse_workspace(f.read())
    except OSError as e:
        raise WorkspaceError(f"cannot read workspace {path}: {e}") from e


def serialize_workspace(workspace: Workspace) -> str:
    """Canonical text form: kinds in declaration order, names sorted within a kind."""
    blocks: List[str] = []
    for name, d in sorted(workspace.domains.items()):
        blocks.append(f"domain {name} {d.size}")
    for name, r in sorted(workspace.relations.items()):
        body = "".join(" ".join(map(str, t)) + "\n" for t in r.tuples)
        blocks.append(f"relation {name} {r.arity} {r.domain.name}\n{body}")
    for name, f in sorted(workspace.functions.items()):
        blocks.append(
            f"function {name} {f.arity} {f.input_domain.name} {f.output_domain.name}\n"
            + " ".join(map(str, f.table)) + "\n"
        )
    for name, (antecedent, consequent) in sorted(workspace.constraints.items()):
        blocks.append(f"constraint {name} {antecedent} {consequent}")
    for name, s in sorted(workspace.schemes.items()):
        head = f"scheme {name} target {s.target}"
        if s.indeterminates:
            head += " indet " + " ".join(s.indeterminates)
        maps = "".join("map " + " ".join(str(entry) for entry in h) + "\n" for h in s.maps)
        blocks.append(f"{head}\n{maps}")
    for name, l in sorted(workspace.labels.items()):
        blocks.append(f"labels {name} " + " ".join(l.labels))
    for name, c in sorted(workspace.classes.items()):
        blocks.append(f"class {name} {c.input_domain} {c.output_domain} " + " ".join(c.functions))
    return "\n".join(block.rstrip("\n") + "\n" for block in blocks)


def dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True)


def iter_names(workspace: Workspace) -> Iterator[Tuple[str, str]]:
    for kind, table in (
        ("domain", workspace.domains), ("relation", workspace.relations), ("function", workspace.functions),
        ("constraint", workspace.constraints), ("scheme", workspace.schemes), ("labels", workspace.labels),
        ("class", workspace.classes),
    ):
        for name in sorted(table):
            yield kind, name
