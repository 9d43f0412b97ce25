import json
import os
import subprocess
import sys

import pytest

from stackburn.cli import main
from stackburn.serialize import (
    SCHEMAS,
    SchemaError,
    dumps,
    parse_fan,
    parse_model,
    parse_orbifold,
    parse_snc_open,
    snc_open_to_json,
)
from stackburn.toric import p1, sigma0, sigma1, snc_open_from_fan, weighted_projective_line

Z2 = {"invariants": [2]}
TRIV = {"invariants": []}


def osym(a, chars, t=0):
    return {"field": {"base": "k", "trdeg": 0, "t": t}, "A": a, "S": chars}


def elem(*pairs):
    return [{"symbol": s, "coeff": c} for s, c in pairs]


@pytest.fixture
def run(tmp_path, capsys):
    def _run(cmd, doc, *flags):
        path = tmp_path / f"in{len(list(tmp_path.iterdir()))}.json"
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        code = main([cmd, str(path), *flags])
        out = capsys.readouterr()
        return code, (json.loads(out.out) if out.out else None), out.err
    return _run


def test_snf(run):
    code, out, _ = run("snf", {"matrix": [[2, 4], [6, 8]]})
    assert code == 0 and out["diagonal"] == [2, 4]


def test_group_requests(run):
    assert run("group", {"orders": [6, 4]})[1]["group"] == {"invariants": [2, 12]}
    code, out, _ = run("group", {"cokernel": [[2, 0], [0, 3]], "rows": 2})
    assert out["order"] == 6
    code, out, _ = run("group", {"A": {"invariants": [2, 2]}, "quotient_by": [[1, 1]]})
    assert out["group"] == Z2


def test_normalize_presentations(run):
    doc = elem((osym(Z2, [[1], [0]]), 1))
    assert run("normalize", doc)[1]["element"] == []
    code, out, _ = run("normalize", doc, "--presentation", "oburn")
    assert out["element"][0]["symbol"]["field"]["t"] == 1


def test_equal_blowup_instance_then_certify(run):
    code, out, _ = run("relate", osym(Z2, [[1], [1]]))
    assert code == 0
    code, verdict, _ = run("equal", {"lhs": out["lhs"]["element"], "rhs": out["rhs"]["element"]})
    assert code == 0 and verdict["equal"] and verdict["certificate"]
    code, ok, _ = run("certify", verdict)
    assert code == 0 and ok["valid"]


def test_equal_reports_difference(run):
    doc = {"lhs": elem((osym(Z2, [[1]]), 1)), "rhs": elem((osym(TRIV, [], 1), 1))}
    code, out, _ = run("equal", doc)
    assert code == 1 and not out["equal"] and out["witness"]["functional"]


def test_tampered_certificate(run):
    code, out, _ = run("relate", osym(Z2, [[1], [1]]))
    _, verdict, _ = run("equal", {"lhs": out["lhs"]["element"], "rhs": out["rhs"]["element"]})
    verdict["certificate"] = {k: v + 1 for k, v in verdict["certificate"].items()}
    code, _, err = run("certify", verdict)
    assert code == 3 and "CertificateMismatch" in err


def test_schema_errors(run):
    assert run("snf", {"matrix": "nope"})[0] == 2
    assert run("snf", "{not json")[0] == 2
    assert run("normalize", [{"symbol": {"field": {}, "A": {"invariants": [1]}, "S": []}}])[0] == 2
    assert run("toric-class", {"rank": 1, "rays": [[1]]})[0] == 2
    assert run("group", {"cokernel": 2, "rows": [[2]]})[0] == 2


def test_computation_errors(run):
    fan = sigma1().to_json()
    code, _, err = run("subdivide", fan, "--ray", "2,0")
    assert code == 3 and "RayNotInteriorToAnyCone" in err
    code, _, err = run("normalize", elem((osym(Z2, [[0]]), 1)), "--presentation", "cburn")
    assert code in (2, 3)


def test_toric_class_sigma0(run):
    code, out, _ = run("toric-class", sigma0().to_json())
    assert code == 0 and len(out["element"]) == 2 and len(out["components"]) == 2


def test_subdivide_and_root(run):
    code, out, _ = run("subdivide", sigma1().to_json(), "--ray", "2,1", "--canonical")
    assert code == 0 and [2, 1] in out["rays"]
    code, out, _ = run("root", p1().to_json(), "--index", "0", "--order", "2")
    assert out["rays"][0] == [2]


def test_kappa_commands(run):
    doc = elem((osym(Z2, [[1]]), 1))
    _, k, _ = run("kappa", doc)
    _, back, _ = run("inv-kappa", k["element"])
    assert back == run("normalize", doc)[1]
    _, c, _ = run("classical", k["element"])
    assert c["class"] == []
    _, g, _ = run("grothendieck", doc)
    assert g["class"] == []


def test_class_command(run):
    doc = {"n": 1, "components": [
        {"field": {"t": 1}, "A": TRIV, "beta": []},
        {"field": {}, "A": Z2, "beta": [[1]]}]}
    for flag in ("--cburn", "--naive"):
        code, out, _ = run("class", doc, flag)
        assert code == 0 and len(out["element"]) == 2
    d = snc_open_to_json(snc_open_from_fan(weighted_projective_line(1, 2), [0]))
    for flag in ("--open", "--open-punctured"):
        code, out, _ = run("class", d, flag)
        assert code == 0 and out["element"] == []


def test_specialize_command(run):
    doc = {"n": 1, "components": [{"id": "1", "multiplicity": 1}, {"id": "2", "multiplicity": 1}],
           "incidences": [
               {"I": ["1"], "entries": [{"field": {"base": "D1", "trdeg": 1}, "A": TRIV, "beta": []}]},
               {"I": ["2"], "entries": [{"field": {"base": "D2", "trdeg": 1}, "A": TRIV, "beta": []}]},
               {"I": ["1", "2"], "entries": [{"field": {"t": 1}, "A": TRIV, "beta": []}]}]}
    code, out, _ = run("specialize", doc)
    assert code == 0
    assert sorted(t["coeff"] for t in out["element"]) == [-1, 1, 1]
    doc["incidences"] = doc["incidences"][2:]
    code, _, err = run("specialize", doc)
    assert code == 3 and "MissingIncidenceData" in err


def test_output_flag(tmp_path):
    src = tmp_path / "fan.json"
    src.write_text(json.dumps(sigma0().to_json()))
    dst = tmp_path / "out.json"
    assert main(["toric-class", str(src), "-o", str(dst)]) == 0
    assert json.loads(dst.read_text())["n"] == 2


def test_output_is_byte_identical_across_processes(tmp_path):
    src = tmp_path / "fan.json"
    src.write_text(json.dumps(sigma1().to_json()))
    outs = set()
    for seed in ("0", "1", "12345"):
        env = {**os.environ, "PYTHONHASHSEED": seed}
        res = subprocess.run([sys.executable, "-m", "stackburn.cli", "toric-class", str(src)],
                             capture_output=True, env=env, check=True)
        outs.add(res.stdout)
    assert len(outs) == 1


def test_equal_output_is_deterministic(run):
    doc = {"lhs": elem((osym(Z2, [[1], [1]]), 1)), "rhs": elem((osym(Z2, [[1]], 1), 1))}
    assert run("equal", doc)[1] == run("equal", doc)[1]


# ---------------------------------------------------------------------------
# serialization


def test_schemas_are_valid_json_schema():
    import jsonschema
    for schema in SCHEMAS.values():
        jsonschema.Draft202012Validator.check_schema(schema)


def test_fan_roundtrip():
    fan = sigma1()
    assert parse_fan(json.loads(dumps(fan.to_json()))) == fan
    with pytest.raises(SchemaError):
        parse_fan({"rank": 2, "rays": [[1, 0]], "cones": [[0]], "torsion": [[2]]})


def test_snc_open_roundtrip():
    d = snc_open_from_fan(sigma1(), [0, 2])
    doc = snc_open_to_json(d)
    assert snc_open_to_json(parse_snc_open(json.loads(dumps(doc)))) == doc


def test_orbifold_and_model_schema_errors():
    with pytest.raises(SchemaError):
        parse_orbifold({"n": 1, "components": [{"A": Z2, "beta": [[1]]}]})
    with pytest.raises(SchemaError):
        parse_model({"n": 1, "components": [{"id": "1", "multiplicity": 0}], "incidences": []})
