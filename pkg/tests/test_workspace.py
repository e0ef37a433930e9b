import pytest

from core.errors import WorkspaceError
from core.model import FiniteDomain, Relation
from core.workspace import dumps, iter_names, load_workspace, parse_workspace, serialize_workspace
from tools.minors import MinorScheme

WORKSPACE = """\
# two-element examples
domain A 2
relation Delta 2 A
0 1
1 0

relation Eq 2 A
0 0
1 1

relation Empty 2 A

function AND 2 A A
0 0 0 1
function NEG 1 A A
1 0
constraint dd Delta Delta
scheme comp target 2 indet v
map t0 v
map v t1
labels L p q r
class K A A AND NEG
"""


@pytest.fixture
def workspace():
    return parse_workspace(WORKSPACE)


def test_parse_declarations(workspace):
    A = FiniteDomain(name="A", size=2)
    assert workspace.domain("A") == A
    assert workspace.relation("Delta") == Relation.disequality(A)
    assert workspace.relation("Empty").is_empty
    assert workspace.function("AND").table == (0, 0, 0, 1)
    assert workspace.scheme("comp") == MinorScheme.build(2, [["t0", "v"], ["v", "t1"]])
    assert workspace.label_set("L").labels == ("p", "q", "r")


def test_named_and_inline_constraints(workspace):
    named = workspace.constraint("dd")
    assert named.antecedent == named.consequent == workspace.relation("Delta")
    inline = workspace.constraint("(Eq, Delta)")
    assert inline.antecedent == workspace.relation("Eq")
    assert inline.consequent == workspace.relation("Delta")


def test_function_class_binding(workspace):
    K = workspace.function_class("K")
    assert K.cardinality == 2 and K.arity_bound == 2
    assert workspace.function("NEG") in K


def test_unknown_names(workspace):
    with pytest.raises(WorkspaceError, match="unknown relation"):
        workspace.relation("Missing")
    with pytest.raises(WorkspaceError, match="unknown constraint"):
        workspace.constraint("nope")


def test_duplicate_name_is_reported_with_its_line():
    with pytest.raises(WorkspaceError) as info:
        parse_workspace("domain A 2\ndomain A 3\n")
    assert info.value.line == 2
    assert "duplicate domain" in str(info.value)


def test_tuple_entry_out_of_range():
    with pytest.raises(WorkspaceError) as info:
        parse_workspace("domain A 2\nrelation R 2 A\n0 2\n")
    assert info.value.line == 3 and info.value.column == 3


def test_tuple_of_wrong_length():
    with pytest.raises(WorkspaceError, match="arity 2"):
        parse_workspace("domain A 2\nrelation R 2 A\n0 1 1\n")


def test_function_needs_a_full_table():
    with pytest.raises(WorkspaceError, match="needs 4 table values"):
        parse_workspace("domain A 2\nfunction f 2 A A\n0 1\n")


def test_unknown_declaration():
    with pytest.raises(WorkspaceError, match="unknown declaration"):
        parse_workspace("domian A 2\n")


def test_validation_errors_carry_the_line():
    with pytest.raises(WorkspaceError) as info:
        parse_workspace("labels L p p\n")
    assert info.value.line == 1


def test_class_members_must_match_domains():
    text = "domain A 2\ndomain B 3\nfunction f 1 A B\n0 2\nclass K A A f\n"
    with pytest.raises(WorkspaceError, match="does not map"):
        parse_workspace(text)


def test_serialized_form_is_canonical(workspace):
    text = serialize_workspace(workspace)
    again = parse_workspace(text)
    assert again == workspace
    assert serialize_workspace(again) == text


def test_payload_is_sorted_json(workspace):
    payload = workspace.payload()
    assert list(payload["relations"]) == ["Delta", "Empty", "Eq"]
    assert dumps({"b": 1, "a": [1, 2]}) == '{"a": [1, 2], "b": 1}'


def test_iter_names(workspace):
    names = list(iter_names(workspace))
    assert names[0] == ("domain", "A")
    assert ("class", "K") in names


def test_load_workspace(tmp_path):
    path = tmp_path / "objects.ws"
    path.write_text(WORKSPACE)
    assert load_workspace(str(path)).relation("Eq").cardinality == 2
    with pytest.raises(WorkspaceError, match="cannot read"):
        load_workspace(str(tmp_path / "missing.ws"))


def test_comments_inside_a_block_are_skipped():
    text = "domain A 2\nrelation R 2 A\n0 1\n# reversed pair\n1 0\n\nconstraint c R R\n"
    workspace = parse_workspace(text)
    assert workspace.relation("R").tuples == ((0, 1), (1, 0))
    assert workspace.constraint("c").antecedent.cardinality == 2


def test_comments_inside_a_function_table():
    text = "domain A 2\nfunction f 2 A A\n0 0\n# second half\n0 1\n"
    assert parse_workspace(text).function("f").table == (0, 0, 0, 1)
