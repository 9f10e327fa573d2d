import json
import subprocess
import sys

import jsonschema
import pytest

from loopstring import cli
from loopstring.cli import InvariantError, main, run_command

COMMANDS = [
    ["cohomology", "cp2.model", "--max-degree", "8"],
    ["cohomology", "s3.model", "--max-degree", "6", "--space", "loop"],
    ["loop-cohomology", "s2.model", "--max-degree", "6"],
    ["equivariant-cohomology", "s3.model", "--max-degree", "6"],
    ["loop-product", "cp2.model", "--max-degree", "12"],
    ["string-bracket", "s3.model", "--max-degree", "8"],
    ["intersection", "s3.model", "--max-degree", "6"],
    ["hochschild", "s3.model", "--max-degree", "6"],
    ["hochschild", "cp2.model", "--max-degree", "6", "--products"],
    ["check", "m11.model"],
]


@pytest.fixture(scope="module")
def schema(models_dir):
    with open(models_dir.parent / "docs" / "result.schema.json", encoding="utf-8") as fh:
        return json.load(fh)


def _run(models_dir, argv):
    argv = [argv[0], str(models_dir / argv[1])] + argv[2:] + ["--format", "json"]
    return run_command(argv)


def _constant(doc, left, right):
    for row in doc["structure_constants"]:
        if row["left"] == left and row["right"] == right:
            return {t["label"]: tuple(t["coeff"]) for t in row["terms"]}
    return None


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: " ".join(a[:2]))
def test_documents_validate_against_the_schema(models_dir, schema, argv):
    doc, code, err = _run(models_dir, argv)
    assert (code, err) == (0, None)
    jsonschema.validate(doc, schema)
    # every coefficient is an integer pair
    for row in doc["structure_constants"]:
        for t in row["terms"]:
            num, den = t["coeff"]
            assert isinstance(num, int) and isinstance(den, int) and den >= 1


def test_loop_product_of_cp2(models_dir):
    doc, code, _ = _run(models_dir, ["loop-product", "cp2.model", "--max-degree", "12"])
    assert code == 0
    assert _constant(doc, "a_{1,0}", "a_{1,0}") == {"a_{0,0}": (1, 1)}
    assert doc["unit"] == [{"label": "a_{2,0}", "coeff": [1, 1]}]


def test_string_bracket_of_s3xs3(models_dir):
    doc, code, _ = _run(models_dir, ["string-bracket", "s3xs3.model", "--max-degree", "14"])
    assert code == 0
    assert _constant(doc, "a_{1,1}", "a_{2,1}") == {"a_{2,1}": (1, 1)}


def test_bad_model_exits_one_with_the_degree(tmp_path, capsys):
    bad = tmp_path / "bad.model"
    bad.write_text("manifold B { dim = 7 generator x : 2 generator y : 3 generator z : 4 "
                   "d y = x^2 d z = x y }", encoding="utf-8")
    assert main(["check", str(bad)]) == 1
    err = capsys.readouterr().err
    assert "d^2 != 0" in err and "degree 6" in err


def test_missing_max_degree_is_an_input_error(models_dir):
    doc, code, err = run_command(["loop-product", str(models_dir / "cp2.model")])
    assert doc is None and code == 1 and "max-degree" in err


def test_missing_file_is_an_input_error(tmp_path):
    _, code, err = run_command(["cohomology", str(tmp_path / "nope.model"), "--max-degree", "3"])
    assert code == 1 and "cannot read" in err


def test_unknown_command_is_an_input_error():
    assert run_command(["frobnicate", "x.model"])[1] == 1


def test_invariant_violation_exits_two(models_dir, monkeypatch):
    def broken(args, mf):
        raise InvariantError("D^2 != 0 on a computed complex")

    monkeypatch.setitem(cli._COMMANDS, "cohomology", broken)
    doc, code, err = run_command(["cohomology", str(models_dir / "cp2.model"), "--max-degree", "2"])
    assert (doc, code) == (None, 2) and "D^2" in err


def test_table_output(models_dir, capsys):
    assert main(["cohomology", str(models_dir / "cp2.model"), "--max-degree", "4"]) == 0
    out = capsys.readouterr().out
    assert "h4_0 = x^2" in out


def test_reruns_are_byte_identical(models_dir):
    argv = [sys.executable, "-m", "loopstring.cli", "string-bracket",
            str(models_dir / "s3xs3.model"), "--max-degree", "10", "--format", "json"]
    runs = [subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)]
    assert runs[0] == runs[1] and runs[0]
