import io
import json

import pytest

from feec import __version__
from feec.cli import EXIT_INPUT, EXIT_OK, EXIT_USAGE, main, run_suite


TWO_TRIANGLES = json.dumps({"cells": [[0, 1, 2], [1, 2, 3]]})

# hat function of vertex 1: λ_1 on cell 0, λ_0 on cell 1
HAT = json.dumps({"0": [[[0, 1, 0], [], "1"]], "1": [[[1, 0, 0], [], "1"]]})


def run(*argv):
    stream = io.StringIO()
    code = main(list(argv), stream=stream)
    return code, stream.getvalue()


def test_version(capsys):
    assert main(["--version"]) == 0
    assert __version__ in capsys.readouterr().out


def test_dims():
    code, out = run("dims", "--n", "2", "--r", "1")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines == [
        "P k=0 dim=3",
        "P k=1 dim=6",
        "P k=2 dim=3",
        "Pminus k=0 dim=3",
        "Pminus k=1 dim=3",
        "Pminus k=2 dim=1",
    ]


def test_dims_ring_json():
    code, out = run("dims", "--n", "2", "--r", "3", "--k", "0", "--ring", "--family", "P",
                    "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out) == [
        {"family": "P", "ring": True, "r": 3, "k": 0, "n": 2, "dim": 1}
    ]


def test_basis_csv():
    code, out = run("basis", "--n", "1", "--r", "1", "--k", "1", "--family", "Pminus",
                    "--format", "csv")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "space,kind,alpha,index,term"
    assert len(lines) == 2
    assert lines[1].startswith("P^-_1Λ^1(T^1),whitney,")


def test_pair_json():
    code, out = run("pair", "--which", "first", "--n", "1", "--r", "0", "--k", "0",
                    "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out) == [["1"]]


def test_pair_text():
    code, out = run("pair", "--which", "second", "--n", "1", "--r", "0", "--k", "0")
    assert code == EXIT_OK
    assert out == "1/6\n"


def test_verify_interval():
    code, out = run("verify", "--n", "1", "--r", "1", "--samples", "2")
    assert code == EXIT_OK
    assert out.endswith("all identities passed\n")
    assert "FAILED" not in out


def test_verify_json_is_deterministic():
    argv = ("verify", "--n", "1", "--r", "1", "--samples", "2", "--seed", "7", "--format", "json")
    first, second = run(*argv), run(*argv)
    assert first == second
    document = json.loads(first[1])
    assert document["passed"] is True
    assert document["failures"] == []
    for family in ("partition-of-unity", "gram-nonsingular", "sum-of-squares",
                   "right-inverse", "dof-nonsingular", "decompose-reassemble"):
        assert document["coverage"][family] > 0


def test_verify_csv():
    code, out = run("verify", "--n", "1", "--r", "1", "--samples", "1", "--format", "csv")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "family,checked"


def test_decompose(mesh_file):
    mesh = mesh_file(TWO_TRIANGLES)
    form = mesh_file(HAT, name="form.json")
    code, out = run("decompose", "--mesh", mesh, "--form", form, "--family", "P",
                    "--r", "1", "--k", "0", "--format", "json")
    assert code == EXIT_OK
    records = json.loads(out)
    assert [r["face"] for r in records[:4]] == [[0], [1], [2], [3]]
    nonzero = [r for r in records if r["terms"]]
    assert nonzero == [{"face": [1], "terms": [[[1], [], "1"]]}]


def test_decompose_not_single_valued(mesh_file):
    mesh = mesh_file(TWO_TRIANGLES)
    form = mesh_file(json.dumps({"0": [[[0, 1, 0], [], "1"]]}), name="form.json")
    code, _ = run("decompose", "--mesh", mesh, "--form", form, "--r", "1", "--k", "0")
    assert code == EXIT_INPUT


@pytest.mark.parametrize(
    "form",
    [
        "not json",
        json.dumps({"7": []}),
        json.dumps({"0": [[[0, 1, 0], [], "1/0"]]}),
        json.dumps({"0": [[[0, 1, 0], [1], "1"]]}),
    ],
)
def test_decompose_malformed_form(mesh_file, form):
    mesh = mesh_file(TWO_TRIANGLES)
    path = mesh_file(form, name="form.json")
    code, _ = run("decompose", "--mesh", mesh, "--form", path, "--r", "1", "--k", "0")
    assert code == EXIT_INPUT


def test_dofs_json():
    code, out = run("dofs", "--n", "1", "--family", "P", "--r", "1", "--k", "0",
                    "--format", "json")
    assert code == EXIT_OK
    document = json.loads(out)
    assert document["matrix"] == [["1", "0"], ["0", "1"]]
    assert document["det"] == "1"
    assert [row["face"] for row in document["rows"]] == [[0], [1]]


def test_dofs_text(mesh_file):
    code, out = run("dofs", "--mesh", mesh_file(TWO_TRIANGLES), "--family", "Pminus",
                    "--r", "1", "--k", "1")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "det=1"


@pytest.mark.parametrize(
    "argv",
    [
        ["dims"],
        ["pair", "--n", "1"],
        ["decompose", "--n", "2", "--k", "0"],
        ["verify"],
        ["dims", "--n", "1", "--jobs", "0"],
        ["dims", "--n", "1", "--samples", "-1"],
    ],
)
def test_missing_flags(argv):
    assert run(*argv)[0] == EXIT_USAGE


@pytest.mark.parametrize(
    "argv",
    [
        ["dims", "--n", "two"],
        ["dims", "--n", "1", "--family", "Q"],
        ["frobnicate"],
        [],
    ],
)
def test_bad_flags(argv):
    assert main(argv, stream=io.StringIO()) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["dims", "--n", "2", "--k", "5"],
        ["dims", "--n", "2", "--r", "-1"],
        ["dims", "--n", "-1"],
        ["basis", "--n", "1", "--k", "-1"],
        ["pair", "--n", "2", "--k", "3"],
    ],
)
def test_out_of_range_flags(argv):
    code, out = run(*argv)
    assert code == EXIT_USAGE
    assert out == ""


@pytest.mark.parametrize(
    "argv",
    [
        ["dofs", "--n", "1", "--r", "0", "--k", "0"],
        ["verify", "--mesh", "/nonexistent/mesh.json"],
    ],
)
def test_invalid_input(argv):
    code, out = run(*argv)
    assert code == EXIT_INPUT
    assert out == ""


def test_bad_mesh(mesh_file):
    code, _ = run("dofs", "--mesh", mesh_file('{"cells": [[0, 1, 2], [2, 3]]}'), "--k", "0")
    assert code == EXIT_INPUT


def test_run_suite_unknown():
    with pytest.raises(ValueError):
        run_suite(("nothing", {"cells": [[0, 1]]}))


@pytest.mark.slow
def test_verify_with_jobs():
    serial = run("verify", "--n", "2", "--r", "1", "--samples", "3", "--format", "json")
    parallel = run("verify", "--n", "2", "--r", "1", "--samples", "3", "--jobs", "3",
                   "--format", "json")
    assert serial == parallel
    assert serial[0] == EXIT_OK


@pytest.mark.slow
def test_verify_tetrahedron():
    code, out = run("verify", "--n", "3", "--r", "2", "--samples", "5")
    assert code == EXIT_OK
    assert out.endswith("all identities passed\n")
