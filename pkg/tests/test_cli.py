import json
import shutil
from pathlib import Path

import numpy as np
import pytest

from qwalk.cli import main
from qwalk.serialize import matrix_from_json

from golden import EX1_UH

DATA = Path(__file__).parent / "data"


def read(path):
    return json.loads(Path(path).read_text())


@pytest.fixture()
def ex1_build(tmp_path):
    out = tmp_path / "g"
    rc = main(["build", "cayley", "--gens", "(1,2);(2,3)", "--domain", "3", "--group", "s3", "--out", str(out)])
    assert rc == 0
    return out


def test_build_cayley_outputs(ex1_build):
    g = read(ex1_build / "graph.json")
    assert g["num_vertices"] == 6
    assert len(g["arcs"]) == 12
    s = matrix_from_json(read(ex1_build / "shift.json"))
    assert s.shape == (12, 12)
    manifest = read(ex1_build / "manifest.json")
    assert manifest["command"] == "build"
    assert "config_sha256" in manifest and "tolerances" in manifest


def test_build_group_check_failure(tmp_path):
    rc = main(["build", "cayley", "--gens", "(1,2)", "--domain", "3", "--group", "s3", "--out", str(tmp_path / "x")])
    assert rc == 1


def test_build_hypercube_and_glued(tmp_path):
    assert main(["build", "hypercube", "--n", "3", "--out", str(tmp_path / "h")]) == 0
    assert read(tmp_path / "h" / "graph.json")["num_vertices"] == 8
    assert main(["build", "glued-trees", "--n", "4", "--out", str(tmp_path / "t")]) == 0
    g = read(tmp_path / "t" / "graph.json")
    labels = g["vertex_labels"]
    columns = {lbl.split(":")[0] for lbl in labels}
    assert len(columns) == 9


def test_quotient_command(ex1_build, tmp_path):
    out = tmp_path / "q"
    rc = main([
        "quotient",
        "--graph", str(ex1_build / "graph.json"),
        "--subgroup", str(DATA / "ex1_h.json"),
        "--out", str(out),
    ])
    assert rc == 0
    orbits = read(out / "orbits.json")
    assert len(orbits) == 6
    assert all(o["size"] == 2 for o in orbits)
    q = read(out / "quotient.json")
    assert q["num_vertices"] == 4
    ph = matrix_from_json(read(out / "ph.json"))
    assert round(np.trace(ph).real) == 6


def test_walk_command_emits_factorization(ex1_build, tmp_path):
    out = tmp_path / "w"
    rc = main([
        "walk",
        "--graph", str(ex1_build / "graph.json"),
        "--coin", "grover",
        "--subgroup", str(DATA / "ex1_h.json"),
        "--out", str(out),
    ])
    assert rc == 0
    uh = matrix_from_json(read(out / "u_h.json"))
    s_h = matrix_from_json(read(out / "s_h.json"))
    c_h = matrix_from_json(read(out / "c_h.json"))
    assert np.max(np.abs(s_h @ c_h - uh)) < 1e-12
    blocks = read(out / "c_h_blocks.json")
    assert [b["rows"] for b in blocks] == [1, 2, 2, 1]


def test_hitting_finite_and_exit_code(ex1_build, tmp_path):
    out = tmp_path / "hit"
    rc = main([
        "hitting",
        "--graph", str(ex1_build / "graph.json"),
        "--final", "t1t2t1",
        "--initial", "e:uniform",
        "--subgroup", str(DATA / "ex1_h.json"),
        "--out", str(out),
    ])
    assert rc == 0
    rep = read(out / "report.json")
    assert rep["tau"] == pytest.approx(3.0, abs=1e-9)
    assert rep["P_rank"] == 0
    assert rep["intersection_dim"] == 0
    assert "e" in rep["c_matrix_spectra"]


def test_hitting_infinite_exit_code(tmp_path):
    g = tmp_path / "g2"
    assert main(["build", "cayley", "--gens", "(1,2);(2,3);(1,3)", "--domain", "3", "--out", str(g)]) == 0
    rc = main([
        "hitting",
        "--graph", str(g / "graph.json"),
        "--final", "t1t2",
        "--initial", "e:uniform",
        "--subgroup", str(DATA / "ex2_h1.json"),
        "--out", str(tmp_path / "hit2"),
    ])
    assert rc == 3
    rep = read(tmp_path / "hit2" / "report.json")
    assert rep["tau"] == "infinite"


def test_hitting_measurement_violation(tmp_path):
    g = tmp_path / "g3"
    assert main(["build", "cayley", "--gens", "(1,2);(2,3);(1,3)", "--domain", "3", "--out", str(g)]) == 0
    rc = main([
        "hitting",
        "--graph", str(g / "graph.json"),
        "--final", "t1",
        "--initial", "e:uniform",
        "--subgroup", str(DATA / "ex2_h1.json"),
        "--out", str(tmp_path / "hit3"),
    ])
    assert rc == 1


def test_hitting_explicit_amplitudes(ex1_build, tmp_path):
    rc = main([
        "hitting",
        "--graph", str(ex1_build / "graph.json"),
        "--final", "t1t2t1",
        "--initial", "e:1,0",
        "--out", str(tmp_path / "hit4"),
    ])
    assert rc == 0
    rep = read(tmp_path / "hit4" / "report.json")
    assert rep["tau"] == pytest.approx(3.0, abs=1e-9)


def test_quotient_walk_reproduces_golden(ex1_build, tmp_path):
    out = tmp_path / "w2"
    main([
        "walk",
        "--graph", str(ex1_build / "graph.json"),
        "--subgroup", str(DATA / "ex1_h.json"),
        "--out", str(out),
    ])
    uh = matrix_from_json(read(out / "u_h.json")).real
    pi = np.array([0, 1, 2, 4, 3, 5])
    assert np.max(np.abs(uh[np.ix_(pi, pi)] - EX1_UH)) < 1e-12


def test_c_matrix_command(tmp_path):
    g = tmp_path / "g4"
    main(["build", "hypercube", "--n", "3", "--out", str(g)])
    out = tmp_path / "cm"
    rc = main([
        "c-matrix",
        "--graph", str(g / "graph.json"),
        "--final", "111",
        "--vertex", "000",
        "--out", str(out),
    ])
    assert rc == 0
    data = read(out / "c_matrix.json")
    assert data["P_rank"] == 6
    evals = data["spectra"]["000"]
    assert sum(1 for x in evals if x < 1e-8) == 1


def test_verify_subgroup_command(ex1_build, tmp_path):
    out = tmp_path / "v"
    rc = main([
        "verify-subgroup",
        "--graph", str(ex1_build / "graph.json"),
        "--subgroup", str(DATA / "ex1_h.json"),
        "--out", str(out),
    ])
    assert rc == 0
    data = read(out / "verification.json")
    assert data["subgroup_order"] == 2
    assert all(r["verified"] for r in data["generators"])


def test_glued_trees_columns_quotient(tmp_path):
    g = tmp_path / "gt"
    main(["build", "glued-trees", "--n", "2", "--out", str(g)])
    out = tmp_path / "gtq"
    rc = main(["quotient", "--graph", str(g / "graph.json"), "--subgroup", "columns", "--out", str(out)])
    assert rc == 0
    q = read(out / "quotient.json")
    assert q["num_vertices"] == 5


def test_outputs_byte_identical(ex1_build, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    args = [
        "hitting",
        "--graph", str(ex1_build / "graph.json"),
        "--final", "t1t2t1",
        "--initial", "e:uniform",
        "--subgroup", str(DATA / "ex1_h.json"),
    ]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    for name in ("report.json",):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    # the manifest differs only in the out path
    ma, mb = read(a / "manifest.json"), read(b / "manifest.json")
    ma["config"].pop("out"), mb["config"].pop("out")
    ma.pop("config_sha256"), mb.pop("config_sha256")
    assert ma == mb


def test_unknown_coin_errors(ex1_build, tmp_path):
    rc = main([
        "walk",
        "--graph", str(ex1_build / "graph.json"),
        "--coin", "nope",
        "--out", str(tmp_path / "w3"),
    ])
    assert rc == 1


def test_custom_coin(tmp_path, ex1_build):
    from qwalk.serialize import canonical_dumps, matrix_to_json

    coin_file = tmp_path / "coin.json"
    coin_file.write_text(canonical_dumps(matrix_to_json(np.array([[0, 1], [1, 0]], dtype=complex))))
    out = tmp_path / "w4"
    rc = main([
        "walk",
        "--graph", str(ex1_build / "graph.json"),
        "--coin", f"custom:{coin_file}",
        "--out", str(out),
    ])
    assert rc == 0
