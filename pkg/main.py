import logging
from contextlib import contextmanager
from typing import Any, Dict, List, Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from core.config import settings
from core.errors import BudgetExceededError, RelGaloisError, WorkspaceError
from core.model import FiniteDomain, IndexMap, Matrix, columns_in_relation, decode_point, encode_point
from core.orchestrator import orchestrator
from core.workspace import Workspace, dumps, iter_names, load_workspace
from tools.clones import clone_tool
from tools.galois import ConstraintSet, galois_tool
from tools.minors import SkolemMap, minor_tool
from tools.oracle import oracle_tool
from tools.partials import PartialFamily, all_partial_functions, injective_partial_functions, partials_tool
from tools.satisfaction import satisfaction_tool
from tools.substitution import substitution_tool

logger = logging.getLogger(__name__)

console = Console()
err_console = Console(stderr=True)
app = typer.Typer(help="relgalois - functions, relational constraints and their Galois connection on finite sets")
oracle_app = typer.Typer(help="Naive reference implementations for cross-checking")
app.add_typer(oracle_app, name="oracle")

state: Dict[str, Any] = {"workspace": None, "format": "text"}

# `--relations R1 R2 ...` reads as a marker followed by the positional family
FAMILY_MARKER = typer.Option(False, "--relations", hidden=True)


@app.callback()
def configure(
    workspace: Optional[str] = typer.Option(None, "--workspace", "-w", help="Workspace file with named objects"),
    output_format: str = typer.Option("text", "--format", help="Output format: text or json"),
    max_table_bits: Optional[int] = typer.Option(None, help="Budget for |A|^n * log2|B| of enumerated tables"),
    max_candidates: Optional[int] = typer.Option(None, help="Budget for any single candidate enumeration"),
    jobs: Optional[int] = typer.Option(None, help="Worker threads for inner enumerations"),
    seed: Optional[int] = typer.Option(None, help="Seed for randomised commands"),
    log_level: Optional[str] = typer.Option(None, help="Logging level"),
):
    # flags win over the environment
    with cli_errors():
        for name, value in (
            ("max_table_bits", max_table_bits),
            ("max_candidates", max_candidates),
            ("jobs", jobs),
            ("seed", seed),
            ("log_level", log_level),
        ):
            if value is not None:
                setattr(settings, name, value)

    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.WARNING),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
    if output_format not in ("text", "json"):
        err_console.print(f"[red]Unknown format {output_format!r}; use text or json[/red]")
        raise typer.Exit(2)
    state["format"] = output_format
    state["workspace_path"] = workspace
    state["workspace"] = None


@contextmanager
def cli_errors():
    try:
        yield
    except BudgetExceededError as e:
        err_console.print(f"[yellow]Budget exceeded: {e}[/yellow]")
        raise typer.Exit(3)
    except (RelGaloisError, ValidationError) as e:
        err_console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(2)


def ws() -> Workspace:
    if state["workspace"] is None:
        path = state.get("workspace_path")
        if not path:
            raise WorkspaceError("this command needs --workspace")
        state["workspace"] = load_workspace(path)
    return state["workspace"]


def render(payload: Any, text: Optional[str] = None) -> None:
    if state["format"] == "json":
        typer.echo(dumps(payload))
    elif text is not None:
        typer.echo(text)
    elif isinstance(payload, bool):
        typer.echo("true" if payload else "false")
    elif payload is None:
        typer.echo("none")
    else:
        typer.echo(dumps(payload))


def finish(payload: Any, ok: bool = True, text: Optional[str] = None) -> None:
    render(payload, text)
    if not ok:
        raise typer.Exit(1)


def finish_object(obj: Any) -> None:
    """Relations and constraints print in set notation; everything else as JSON."""
    finish(obj.payload(), text=str(obj))


@app.command()
def satisfies(
    fn: str = typer.Option(..., "--fn", help="Function name"),
    constraint: str = typer.Option(..., "--constraint", help="Constraint name or (R,S)"),
):
    """Whether the function satisfies the constraint."""
    with cli_errors():
        f, c = ws().function(fn), ws().constraint(constraint)
        violation = satisfaction_tool.find_violation(f, c)
        payload = {"satisfies": violation is None, "violation": violation.payload() if violation else None}
        finish(payload, violation is None, text="true" if violation is None else "false")


@app.command()
def image(
    fn: str = typer.Option(..., "--fn"),
    relation: str = typer.Option(..., "--relation"),
):
    """The relation fR."""
    with cli_errors():
        finish_object(satisfaction_tool.image_of_relation(ws().function(fn), ws().relation(relation)))


@app.command()
def preserves(
    fn: str = typer.Option(..., "--fn"),
    relation: str = typer.Option(..., "--relation"),
):
    """Whether an operation preserves a relation."""
    with cli_errors():
        ok = satisfaction_tool.preserves(ws().function(fn), ws().relation(relation))
        finish(ok, ok)


def parse_columns(columns: List[str]) -> List[List[int]]:
    try:
        return [[int(entry) for entry in column.replace(",", " ").split()] for column in columns]
    except ValueError:
        raise WorkspaceError(f"matrix columns must be integers: {columns}") from None


@app.command()
def apply(
    fn: str = typer.Option(..., "--fn"),
    column: List[str] = typer.Option(..., "--column", help="One matrix column, e.g. 0,1"),
):
    """fM for the matrix with the given columns."""
    with cli_errors():
        f = ws().function(fn)
        M = Matrix(domain=f.input_domain, columns=parse_columns(column))
        finish(list(satisfaction_tool.apply_to_matrix(f, M)))


@app.command()
def precedes(
    relation: str = typer.Option(..., "--relation"),
    column: List[str] = typer.Option(..., "--column"),
):
    """Whether every column of the matrix lies in the relation."""
    with cli_errors():
        R = ws().relation(relation)
        ok = columns_in_relation(Matrix(domain=R.domain, columns=parse_columns(column)), R)
        finish(ok, ok)


@app.command("encode-point")
def encode_point_command(
    domain: str = typer.Option(..., "--domain"),
    point: List[int] = typer.Argument(...),
):
    """Row-major rank of a point."""
    with cli_errors():
        finish(encode_point(point, ws().domain(domain)))


@app.command("decode-point")
def decode_point_command(
    domain: str = typer.Option(..., "--domain"),
    arity: int = typer.Option(..., "--arity"),
    index: int = typer.Argument(...),
):
    """The point with the given row-major rank."""
    with cli_errors():
        finish(list(decode_point(index, arity, ws().domain(domain))))


@app.command()
def names():
    """Every name bound in the workspace, by kind."""
    with cli_errors():
        bound = list(iter_names(ws()))
        finish([[kind, name] for kind, name in bound], text="\n".join(f"{kind} {name}" for kind, name in bound))


@app.command()
def substitute(
    fn: str = typer.Option(..., "--fn"),
    images: List[int] = typer.Option(..., "--image", help="Image of each argument position"),
    target: int = typer.Option(..., "--target", help="Arity of the result"),
):
    """Simple variable substitution g(a) = f(a o l)."""
    with cli_errors():
        finish(substitution_tool.substitute(ws().function(fn), IndexMap.of(images, target)).payload())


def class_payload(K) -> Dict[str, Any]:
    return {"cardinality": K.cardinality, "arity_bound": K.arity_bound, "members": [f.payload() for f in K.members]}


def constraint_set_payload(T: ConstraintSet) -> Dict[str, Any]:
    return {"cardinality": T.cardinality, "arity_bound": T.arity_bound, "members": [c.payload() for c in T.members]}


@app.command("svs-close")
def svs_close(
    function_class: str = typer.Option(..., "--class"),
    bound: int = typer.Option(2, "--bound"),
):
    """Closure under simple variable substitutions."""
    with cli_errors():
        finish(class_payload(substitution_tool.svs_closure(ws().function_class(function_class), bound)))


@app.command("local-close")
def local_close(function_class: str = typer.Option(..., "--class")):
    """Local closure of a function class."""
    with cli_errors():
        finish(class_payload(substitution_tool.local_closure_functions(ws().function_class(function_class))))


def constraint_set(names: List[str], input_domain: Optional[str], output_domain: Optional[str]) -> ConstraintSet:
    members = [ws().constraint(name) for name in names]
    if members:
        A, B = members[0].input_domain, members[0].output_domain
    elif input_domain and output_domain:
        A, B = ws().domain(input_domain), ws().domain(output_domain)
    else:
        raise WorkspaceError("an empty constraint set needs --input-domain and --output-domain")
    return ConstraintSet(input_domain=A, output_domain=B, members=members)


@app.command("local-close-constraints")
def local_close_constraints(
    constraints: List[str] = typer.Option([], "--member"),
    input_domain: Optional[str] = typer.Option(None, "--input-domain"),
    output_domain: Optional[str] = typer.Option(None, "--output-domain"),
):
    """Local closure of a constraint set."""
    with cli_errors():
        finish(constraint_set_payload(galois_tool.local_closure_constraints(
            constraint_set(constraints, input_domain, output_domain))))


@app.command()
def minor(
    scheme: str = typer.Option(..., "--scheme"),
    relations: List[str] = typer.Argument(..., help="Relation family, in order"),
    family_marker: bool = FAMILY_MARKER,
):
    """Tight conjunctive minor of a relation family."""
    with cli_errors():
        rels = [ws().relation(name) for name in relations]
        finish_object(minor_tool.tight_minor_relations(ws().scheme(scheme), rels))


@app.command("classify-minor")
def classify_minor(
    relation: str = typer.Option(..., "--relation"),
    scheme: str = typer.Option(..., "--scheme"),
    relations: List[str] = typer.Argument(..., help="Relation family, in order"),
    family_marker: bool = FAMILY_MARKER,
):
    """Restrictive, extensive, tight or neither."""
    with cli_errors():
        rels = [ws().relation(name) for name in relations]
        result = minor_tool.minor_classification(ws().relation(relation), ws().scheme(scheme), rels)
        finish({"kind": result.kind.value, "restrictive": result.restrictive, "extensive": result.extensive,
                "tight_minor": result.tight_minor.payload()})


@app.command("minor-constraint")
def minor_constraint(
    scheme: str = typer.Option(..., "--scheme"),
    constraints: List[str] = typer.Option(..., "--constraints"),
):
    """Tight conjunctive minor of a constraint family."""
    with cli_errors():
        cs = [ws().constraint(name) for name in constraints]
        finish_object(minor_tool.tight_minor_constraint(ws().scheme(scheme), cs))


@app.command("is-minor")
def is_minor(
    constraint: str = typer.Option(..., "--constraint"),
    scheme: str = typer.Option(..., "--scheme"),
    constraints: List[str] = typer.Option(..., "--constraints"),
):
    """Whether a constraint is a conjunctive minor of a family via a scheme."""
    with cli_errors():
        cs = [ws().constraint(name) for name in constraints]
        ok = minor_tool.is_conjunctive_minor(ws().constraint(constraint), ws().scheme(scheme), cs)
        finish(ok, ok)


@app.command("compose-schemes")
def compose_schemes(
    scheme: str = typer.Option(..., "--scheme"),
    inner: List[str] = typer.Option(..., "--inner"),
):
    """The composite scheme H(H_j)."""
    with cli_errors():
        finish(minor_tool.compose_schemes(ws().scheme(scheme), [ws().scheme(name) for name in inner]).payload())


def parse_assignment(assignments: List[str]) -> Dict[str, int]:
    assignment = {}
    for item in assignments:
        symbol, _, value = item.partition("=")
        try:
            assignment[symbol.strip()] = int(value)
        except ValueError:
            raise WorkspaceError(f"expected <indeterminate>=<element>, got {item!r}") from None
    return assignment


@app.command("scheme-apply")
def scheme_apply(
    scheme: str = typer.Option(..., "--scheme"),
    index: int = typer.Option(0, "--map", help="Which map of the scheme to apply"),
    assignments: List[str] = typer.Option([], "--assign", help="Skolem value, e.g. v=1"),
    point: List[int] = typer.Argument(..., help="Target tuple a"),
):
    """(a + sigma) h for one map h of a scheme."""
    with cli_errors():
        H = ws().scheme(scheme)
        if not 0 <= index < len(H.maps):
            raise WorkspaceError(f"scheme {scheme!r} has no map {index}")
        sigma = SkolemMap(assignment=parse_assignment(assignments))
        finish(list(minor_tool.scheme_apply(point, sigma, H.maps[index])))


@app.command("simple-minor")
def simple_minor(
    constraint: str = typer.Option(..., "--constraint"),
    entries: List[str] = typer.Option(..., "--entry", help="Map entries: t<i> or an indeterminate"),
    target: int = typer.Option(..., "--target"),
    indeterminates: List[str] = typer.Option([], "--indet"),
):
    """Single-map minor of a constraint."""
    with cli_errors():
        finish_object(minor_tool.simple_minor(ws().constraint(constraint), entries, target, indeterminates))


@app.command()
def relax(
    constraint: str = typer.Option(..., "--constraint"),
    antecedent: str = typer.Option(..., "--antecedent"),
    consequent: str = typer.Option(..., "--consequent"),
):
    """Restrict the antecedent and extend the consequent."""
    with cli_errors():
        finish_object(minor_tool.relax(ws().constraint(constraint), ws().relation(antecedent), ws().relation(consequent)))


@app.command("is-relaxation")
def is_relaxation(
    relaxed: str = typer.Option(..., "--relaxed"),
    constraint: str = typer.Option(..., "--constraint"),
):
    """Whether the first constraint restricts the antecedent and extends the consequent of the second."""
    with cli_errors():
        ok = minor_tool.is_relaxation(ws().constraint(relaxed), ws().constraint(constraint))
        finish(ok, ok)


@app.command()
def intersect(constraints: List[str] = typer.Option(..., "--constraints")):
    """Intersect the consequents of constraints sharing an antecedent."""
    with cli_errors():
        finish_object(minor_tool.intersect_consequents([ws().constraint(name) for name in constraints]))


@app.command()
def canonical(
    input_domain: str = typer.Option(..., "--input-domain"),
    output_domain: str = typer.Option(..., "--output-domain"),
    arity: int = typer.Option(1, "--arity"),
):
    """Equality, empty and trivial constraints."""
    with cli_errors():
        result = minor_tool.canonical_constraints(ws().domain(input_domain), ws().domain(output_domain), arity)
        finish({kind: c.payload() for kind, c in result._asdict().items()})


@app.command()
def compose(
    fn: str = typer.Option(..., "--fn"),
    inner: List[str] = typer.Option(..., "--inner"),
):
    """f(g_1, ..., g_n)."""
    with cli_errors():
        finish(clone_tool.compose_functions(ws().function(fn), [ws().function(name) for name in inner]).payload())


@app.command()
def clone(
    function_class: str = typer.Option(..., "--class"),
    bound: int = typer.Option(2, "--bound"),
):
    """Clone generated by a class of operations (intermediate arities truncated at the bound)."""
    with cli_errors():
        finish(class_payload(clone_tool.clone_generate(ws().function_class(function_class), bound)))


@app.command()
def pol(
    domain: str = typer.Option(..., "--domain"),
    relations: Optional[List[str]] = typer.Argument(None, help="Relations to preserve"),
    family_marker: bool = FAMILY_MARKER,
    bound: int = typer.Option(2, "--bound"),
):
    """Operations preserving every relation."""
    with cli_errors():
        rels = [ws().relation(name) for name in relations or []]
        finish(class_payload(clone_tool.pol(ws().domain(domain), rels, bound)))


@app.command()
def inv(
    function_class: str = typer.Option(..., "--class"),
    bound: int = typer.Option(2, "--bound"),
):
    """Relations preserved by every operation."""
    with cli_errors():
        found = clone_tool.inv(ws().function_class(function_class), bound)
        finish({"cardinality": len(found), "members": [R.payload() for R in found]})


def superposition_args(labels: str, b: str, bs: List[str]):
    return ws().label_set(labels), b.split(), [entry.split() for entry in bs]


@app.command()
def superpose(
    labels: str = typer.Option(..., "--labels"),
    b: str = typer.Option(..., "--b", help="Space-separated target labels"),
    bs: List[str] = typer.Option(..., "--bs", help="Space-separated labels, one option per relation"),
    relations: List[str] = typer.Argument(..., help="Relation family, in order"),
    family_marker: bool = FAMILY_MARKER,
):
    """General superposition."""
    with cli_errors():
        L, target, sources = superposition_args(labels, b, bs)
        rels = [ws().relation(name) for name in relations]
        finish_object(clone_tool.general_superposition(rels, target, sources, L))


@app.command("equality-pattern")
def equality_pattern(
    domain: str = typer.Option(..., "--domain"),
    b: str = typer.Option(..., "--b"),
):
    """Tuples constant on every block of equal labels."""
    with cli_errors():
        finish_object(clone_tool.equality_pattern_relation(b.split(), ws().domain(domain)))


@app.command("decompose-superposition")
def decompose_superposition(
    labels: str = typer.Option(..., "--labels"),
    b: str = typer.Option(..., "--b"),
    bs: List[str] = typer.Option(..., "--bs"),
    relations: List[str] = typer.Argument(..., help="Relation family, in order"),
    family_marker: bool = FAMILY_MARKER,
):
    """Tight minor and equality pattern whose intersection is the superposition."""
    with cli_errors():
        L, target, sources = superposition_args(labels, b, bs)
        result = clone_tool.superposition_decomposition(target, sources, L, [ws().relation(name) for name in relations])
        finish(result.payload(), result.agrees)


@app.command("separate-constraint")
def separate_constraint(
    function_class: str = typer.Option(..., "--class"),
    fn: str = typer.Option(..., "--fn"),
):
    """A constraint satisfied by the class and violated by the function."""
    with cli_errors():
        c = galois_tool.separating_constraint(ws().function_class(function_class), ws().function(fn))
        finish(c.payload() if c else None, c is not None)


@app.command("separate-function")
def separate_function(
    constraint: str = typer.Option(..., "--constraint"),
    members: List[str] = typer.Option([], "--member", help="Members of the constraint set"),
    satisfied_by: Optional[str] = typer.Option(None, "--satisfied-by", help="Use the constraints satisfied by a class"),
    bound: int = typer.Option(1, "--bound", help="Constraint arity bound with --satisfied-by"),
):
    """A function satisfying the constraint set and violating the constraint."""
    with cli_errors():
        c = ws().constraint(constraint)
        if satisfied_by:
            T = galois_tool.constraints_satisfied_by(ws().function_class(satisfied_by), bound)
        else:
            T = constraint_set(members, c.input_domain.name, c.output_domain.name)
        g = galois_tool.separating_function(T, c)
        finish(g.payload() if g else None, g is not None)


@app.command("satisfied-constraints")
def satisfied_constraints(
    function_class: str = typer.Option(..., "--class"),
    bound: int = typer.Option(1, "--bound"),
):
    """Every constraint of arity <= bound satisfied by the class."""
    with cli_errors():
        finish(constraint_set_payload(galois_tool.constraints_satisfied_by(ws().function_class(function_class), bound)))


@app.command("satisfying-functions")
def satisfying_functions(
    members: List[str] = typer.Option([], "--member"),
    input_domain: Optional[str] = typer.Option(None, "--input-domain"),
    output_domain: Optional[str] = typer.Option(None, "--output-domain"),
    bound: int = typer.Option(1, "--bound"),
):
    """Every function of arity <= bound satisfying the constraint set."""
    with cli_errors():
        finish(class_payload(galois_tool.functions_satisfying(constraint_set(members, input_domain, output_domain), bound)))


@app.command()
def roundtrip(
    function_class: str = typer.Option(..., "--class"),
    bound: Optional[int] = typer.Option(None, "--bound"),
):
    """Separate every non-member of a substitution-closed class."""
    with cli_errors():
        report = galois_tool.galois_roundtrip_report(ws().function_class(function_class), bound, settings.jobs)
        report.pop("elapsed_seconds")
        report.pop("timestamp")
        finish(report, report["status"] == "success")


def family(kind: str, input_size: int, output_size: int, arities: List[int]) -> PartialFamily:
    A, B = FiniteDomain(name="A", size=input_size), FiniteDomain(name="B", size=output_size)
    if kind == "injective":
        return injective_partial_functions(A, B, arities)
    if kind == "all":
        return all_partial_functions(A, B, arities)
    raise WorkspaceError(f"unknown family {kind!r}; use injective or all")


@app.command()
def extensible(
    kind: str = typer.Option("injective", "--family", help="injective or all"),
    input_size: int = typer.Option(3, "--input-size"),
    output_size: int = typer.Option(3, "--output-size"),
    arities: List[int] = typer.Option([1], "--arity"),
):
    """Whether a generated family of partial functions is extensible."""
    with cli_errors():
        result = partials_tool.is_extensible_family(family(kind, input_size, output_size, arities))
        finish(result.payload(), result.extensible)


@app.command("prop1-harness")
def prop1_harness(
    kind: str = typer.Option("injective", "--family"),
    input_size: int = typer.Option(3, "--input-size"),
    output_size: int = typer.Option(3, "--output-size"),
    arities: List[int] = typer.Option([1], "--arity"),
    trials: int = typer.Option(200, "--trials"),
    bound: int = typer.Option(2, "--bound"),
):
    """Closure checks on the constraints satisfied by an extensible family."""
    with cli_errors():
        report = partials_tool.proposition1_harness(
            family(kind, input_size, output_size, arities), trials, bound, settings.seed, settings.jobs
        )
        report.pop("elapsed_seconds")
        report.pop("timestamp")
        finish(report, report["status"] == "success")


SWEEPS = ("preservation", "composition", "roundtrip", "definability", "superposition", "counts", "local_closure", "extensible")


def sweep_step(name: str, trials: Optional[int]):
    seed, jobs = settings.seed, settings.jobs
    extra = {} if trials is None else {"trials": trials}
    steps = {
        "preservation": lambda: orchestrator.preservation_sweep(seed=seed, jobs=jobs, **extra),
        "composition": lambda: orchestrator.composition_sweep(seed=seed, jobs=jobs, **extra),
        "roundtrip": lambda: orchestrator.roundtrip_sweep(jobs=jobs),
        "definability": lambda: orchestrator.definability_sweep(
            minor_trials=200 if trials is None else trials, seed=seed, jobs=jobs
        ),
        "superposition": lambda: orchestrator.superposition_sweep(seed=seed, jobs=jobs, **extra),
        "counts": orchestrator.counts,
        "local_closure": lambda: orchestrator.local_closure_sweep(seed=seed, jobs=jobs, **extra),
        "extensible": lambda: orchestrator.extensible_family_sweep(seed=seed, jobs=jobs, **extra),
    }
    return steps[name]


@app.command()
def sweep(
    name: str = typer.Argument("all", help=f"One of: all, {', '.join(SWEEPS)}"),
    trials: Optional[int] = typer.Option(None, "--trials", help="Override the trial count of a single sweep"),
    save: bool = typer.Option(False, help="Save the report to the results directory"),
):
    """Run the property sweeps."""
    if name != "all" and name not in SWEEPS:
        err_console.print(f"[red]Unknown sweep {name!r}[/red]")
        raise typer.Exit(2)

    if state["format"] == "text":
        console.print(f"\n[bold blue]Running sweep: {name}[/bold blue]")
    if name == "all":
        results = orchestrator.run_all(settings.seed, settings.jobs)
    else:
        results = orchestrator.run_step(name, sweep_step(name, trials))

    if save:
        filename = orchestrator.save_results(results)
        err_console.print(f"[green]Results saved to: {filename}[/green]")

    if state["format"] == "json":
        render(results)
    else:
        display_sweep(results)
    if results.get("budget_exceeded"):
        raise typer.Exit(3)
    if results.get("status") != "success":
        raise typer.Exit(1)


def display_sweep(results: Dict[str, Any]) -> None:
    reports = results.get("sweeps", {results.get("sweep", "sweep"): results})
    table = Table(title="Sweep Results")
    table.add_column("Sweep", style="cyan")
    table.add_column("Status")
    table.add_column("Violations", justify="right")
    table.add_column("Seconds", justify="right")
    for name, report in reports.items():
        status = report.get("status", "unknown")
        color = "green" if status == "success" else "red"
        table.add_row(
            name,
            f"[{color}]{status}[/{color}]",
            str(len(report.get("violations", []))),
            f"{report.get('elapsed_seconds', 0):.2f}",
        )
    console.print(table)

    failed = [name for name, report in reports.items() if report.get("error")]
    if failed:
        console.print(Panel("\n".join(f"• {name}: {reports[name]['error']}" for name in failed),
                            title="Failed Sweeps", border_style="red"))


@oracle_app.command("image")
def oracle_image(
    fn: str = typer.Option(..., "--fn"),
    relation: str = typer.Option(..., "--relation"),
):
    """fR by plain enumeration of all matrices."""
    with cli_errors():
        finish_object(oracle_tool.image(ws().function(fn), ws().relation(relation)))


@oracle_app.command("minor")
def oracle_minor(
    scheme: str = typer.Option(..., "--scheme"),
    relations: List[str] = typer.Argument(..., help="Relation family, in order"),
    family_marker: bool = FAMILY_MARKER,
):
    """Tight minor over every Skolem map of every declared indeterminate."""
    with cli_errors():
        finish_object(oracle_tool.tight_minor(ws().scheme(scheme), [ws().relation(name) for name in relations]))


@oracle_app.command("superpose")
def oracle_superpose(
    labels: str = typer.Option(..., "--labels"),
    b: str = typer.Option(..., "--b"),
    bs: List[str] = typer.Option(..., "--bs"),
    relations: List[str] = typer.Argument(..., help="Relation family, in order"),
    family_marker: bool = FAMILY_MARKER,
):
    """General superposition over every label map."""
    with cli_errors():
        L, target, sources = superposition_args(labels, b, bs)
        finish_object(oracle_tool.superposition([ws().relation(name) for name in relations], target, sources, L))


@app.command()
def config():
    console.print("\n[bold blue]Current Configuration[/bold blue]")

    config_table = Table()

    config_table.add_column("Setting", style="cyan")
    config_table.add_column("Value")

    config_table.add_row("Max Table Bits", str(settings.max_table_bits))
    config_table.add_row("Max Candidates", str(settings.max_candidates))
    config_table.add_row("Jobs", str(settings.jobs))
    config_table.add_row("Seed", str(settings.seed))
    config_table.add_row("Log Level", settings.log_level)
    config_table.add_row("Results Directory", settings.results_dir)

    console.print(config_table)


def main():
    app()


if __name__ == "__main__":
    main()
