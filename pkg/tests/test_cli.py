import json

import pytest
from typer.testing import CliRunner

from main import app
from tests.test_workspace import WORKSPACE

pytestmark = pytest.mark.usefixtures("restore_settings")

runner = CliRunner()


@pytest.fixture
def ws_path(tmp_path):
    path = tmp_path / "objects.ws"
    path.write_text(WORKSPACE)
    return str(path)


def run(ws_path, *args, output_format="json"):
    return runner.invoke(app, ["--workspace", ws_path, "--format", output_format, *args])


def test_satisfies_reports_violation(ws_path):
    result = run(ws_path, "satisfies", "--fn", "AND", "--constraint", "dd")
    assert result.exit_code == 1
    payload = json.loads(result.stdout)
    assert payload["satisfies"] is False
    assert payload["violation"]["columns"] == [[0, 1], [1, 0]]


def test_satisfies_text_output(ws_path):
    result = run(ws_path, "satisfies", "--fn", "NEG", "--constraint", "(Delta,Delta)", output_format="text")
    assert result.exit_code == 0
    assert result.stdout.strip() == "true"


def test_image(ws_path):
    result = run(ws_path, "image", "--fn", "AND", "--relation", "Delta", output_format="text")
    assert result.exit_code == 0
    assert result.stdout.strip() == "{(0,0), (0,1), (1,0)}"


def test_oracle_image_matches(ws_path):
    fast = run(ws_path, "image", "--fn", "AND", "--relation", "Eq")
    naive = run(ws_path, "oracle", "image", "--fn", "AND", "--relation", "Eq")
    assert fast.exit_code == naive.exit_code == 0
    assert fast.stdout == naive.stdout


def test_minor_of_a_relation_family(ws_path):
    result = run(ws_path, "minor", "--scheme", "comp", "--relations", "Delta", "Delta")
    assert result.exit_code == 0
    assert json.loads(result.stdout)["tuples"] == [[0, 0], [1, 1]]

    naive = run(ws_path, "oracle", "minor", "--scheme", "comp", "--relations", "Delta", "Delta")
    assert naive.stdout == result.stdout


def test_superpose(ws_path):
    result = run(ws_path, "superpose", "--labels", "L", "--b", "p p", "--bs", "p q", "--relations", "Delta")
    assert result.exit_code == 0
    assert json.loads(result.stdout)["tuples"] == [[0, 0], [1, 1]]


def test_decompose_superposition(ws_path):
    result = run(
        ws_path, "decompose-superposition", "--labels", "L", "--b", "p q", "--bs", "p r", "--bs", "r q",
        "--relations", "Delta", "Delta",
    )
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["agrees"] is True
    assert payload["scheme"]["indeterminates"] == ["r"]


def test_pol_without_relations_is_everything(ws_path):
    result = run(ws_path, "pol", "--domain", "A", "--bound", "1")
    assert json.loads(result.stdout)["cardinality"] == 4


def test_clone(ws_path):
    result = run(ws_path, "clone", "--class", "K", "--bound", "2")
    assert result.exit_code == 0
    # AND and negation generate every operation
    assert json.loads(result.stdout)["cardinality"] == 20


def test_separate_constraint_needs_closed_class(ws_path):
    result = run(ws_path, "separate-constraint", "--class", "K", "--fn", "AND")
    assert result.exit_code == 2


def test_separate_function_absent(ws_path):
    result = run(ws_path, "separate-function", "--constraint", "dd", "--member", "dd")
    assert result.exit_code == 1
    assert json.loads(result.stdout) is None


def test_missing_name_exits_2(ws_path):
    result = run(ws_path, "image", "--fn", "OR", "--relation", "Delta")
    assert result.exit_code == 2


def test_missing_workspace_exits_2():
    result = runner.invoke(app, ["image", "--fn", "AND", "--relation", "Delta"])
    assert result.exit_code == 2


def test_budget_exceeded_exits_3(ws_path):
    result = runner.invoke(app, ["--workspace", ws_path, "--max-table-bits", "2", "pol", "--domain", "A", "--bound", "2"])
    assert result.exit_code == 3


def test_extensible_families():
    assert runner.invoke(app, ["extensible", "--family", "all", "--input-size", "2", "--output-size", "2"]).exit_code == 0
    assert runner.invoke(app, ["extensible", "--input-size", "3", "--output-size", "2"]).exit_code == 1


def test_counts_sweep():
    result = runner.invoke(app, ["--format", "json", "sweep", "counts"])
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert (payload["pol_leq_2"], payload["inv_neg_2"], payload["clone_nand_2"]) == (9, 6, 20)


def test_decode_point(ws_path):
    result = run(ws_path, "decode-point", "--domain", "A", "--arity", "2", "2")
    assert result.exit_code == 0
    assert json.loads(result.stdout) == [1, 0]
    assert run(ws_path, "decode-point", "--domain", "A", "--arity", "2", "4").exit_code == 2


def test_scheme_apply(ws_path):
    result = run(ws_path, "scheme-apply", "--scheme", "comp", "--map", "1", "--assign", "v=1", "0", "0")
    assert result.exit_code == 0
    assert json.loads(result.stdout) == [1, 0]
    assert run(ws_path, "scheme-apply", "--scheme", "comp", "0", "1").exit_code == 2
    assert run(ws_path, "scheme-apply", "--scheme", "comp", "--map", "2", "0", "1").exit_code == 2


def test_is_relaxation(ws_path):
    assert run(ws_path, "is-relaxation", "--relaxed", "(Empty,Delta)", "--constraint", "dd").exit_code == 0
    assert run(ws_path, "is-relaxation", "--relaxed", "dd", "--constraint", "(Empty,Delta)").exit_code == 1


def test_names(ws_path):
    result = run(ws_path, "names")
    assert result.exit_code == 0
    names = json.loads(result.stdout)
    assert names[0] == ["domain", "A"]
    assert ["scheme", "comp"] in names and ["class", "K"] in names


def test_sweep_over_budget_exits_3():
    result = runner.invoke(app, ["--format", "json", "--max-candidates", "2", "sweep", "counts"])
    assert result.exit_code == 3
    payload = json.loads(result.stdout)
    assert payload["status"] == "failed" and payload["budget_exceeded"] is True
