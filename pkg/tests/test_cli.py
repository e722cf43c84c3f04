import io
import json
from importlib import resources

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from weylgraphs.cli import run
from weylgraphs.graph import parse_graph
from weylgraphs.canonical import are_isomorphic


def _registry():
    reg = Registry()
    base = resources.files("weylgraphs") / "schemas"
    for entry in base.iterdir():
        if entry.name.endswith(".json"):
            reg = reg.with_resource(entry.name, Resource.from_contents(json.loads(entry.read_text())))
    return reg


REGISTRY = _registry()


def validate(payload, schema):
    contents = REGISTRY.contents(schema)
    Draft202012Validator(contents, registry=REGISTRY).validate(payload)


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stream=buf)
    return code, buf.getvalue()


def call_json(*argv):
    code, out = call(*argv, "--json")
    return code, json.loads(out)


def test_enumerate_weight_one():
    code, out = call("enumerate", "--weight", "1")
    assert code == 0 and out.startswith("# 3 graphs")
    code, data = call_json("enumerate", "--weight", "1")
    validate(data, "graph_list.json")
    assert len(data) == 3
    for line in out.splitlines()[1:]:
        key, text = line.split("  ", 1)
        assert are_isomorphic(parse_graph(text), parse_graph(data[[d["key"] for d in data].index(key)]["text"]))


def test_table_layout():
    code, out = call("table", "--trees", "4", "2")
    assert code == 0
    assert "(4,2)   1 11 25 15" in out
    code, data = call_json("table", "--trees", "4", "2")
    validate(data, "tree_table.json")
    assert [(r["k"], r["m"]) for r in data] == [(2, 2), (3, 2), (4, 2)]


def test_stabilize_and_aut():
    code, out = call("stabilize", "g 2; 1->0, 1->0, 0->1")
    assert code == 0 and "contract  edge" in out and "g 1; 0->0, 0->0" in out
    code, data = call_json("stabilize", "g 2; 0->0, 1->1, 0->1")
    assert code == 0 and data["stabilizable"] is False and data["stable"] is None
    code, data = call_json("aut", "g 1; 0->0, 0->0")
    assert data["aut_order"] == 2
    validate(data["graph"]["graph"], "graph.json")


def test_weyl_check_exit_codes():
    code, data = call_json("weyl-check", "--weight", "1", "--function", "beta:2")
    assert code == 0 and data["ok"]
    validate(data, "report.json")
    code, data = call_json("weyl-check", "--weight", "1", "--function", "indicator:g 2; 0->1, 0->1, 1->0")
    assert code == 1 and not data["ok"]
    assert data["witness"]["stable"]["text"] == "g 1; 0->0, 0->0"


def test_d_expand_and_op_and_compose(tmp_path):
    code, data = call_json("d-expand", "g 1; 0->0, 0->0")
    validate(data, "graph_sum.json")
    assert sorted(t["coeff"] for t in data) == ["-1/1", "1/1"]
    code, q1 = call_json("op", "Qk", "--k", "1")
    assert len(q1) == 1 and q1[0]["coeff"] == "1/1"
    code, q3 = call_json("op", "Qk", "--k", "3", "--balanced")
    assert len(q3) == 5
    f = tmp_path / "q1.json"
    f.write_text(json.dumps(q1))
    code, comp = call_json("compose", str(f), str(f))
    assert code == 0
    validate(comp, "graph_sum.json")
    assert sorted(t["coeff"] for t in comp) == ["-1/1", "1/1"]


def test_star_json():
    code, data = call_json("star", "--h", "berezin", "--order", "2")
    assert code == 0
    validate(data, "star_series.json")
    assert [len(o) for o in data["orders"]] == [1, 1, 4]
    code, data = call_json("star", "--h", "wick:0", "--order", "1")
    assert data["type"] == "wick"


def test_star_check_and_verify():
    code, data = call_json("star-check", "--h", "h_C:0", "--order", "2")
    assert code == 0 and data["ok"]
    validate(data, "report.json")
    code, _ = call("verify", "associativity", "--h", "berezin", "--order", "3", "--metric", "fubini_study_1d")
    assert code == 0
    code, data = call_json("verify", "compose", "--op1", "Q1", "--op2", "Q1")
    assert code == 0 and data["rel_error"] < 1e-8
    validate(data, "report.json")
    code, data = call_json("verify", "invariance", "--weight", "2", "--function", "beta:1/3")
    assert code == 0
    code, data = call_json("verify", "invariance", "--weight", "2", "--function", "indicator:g 1; 0->0, 0->0, 0->0")
    assert code == 1 and data["rel_error"] > 1e-3
    code, data = call_json("verify", "karabegov", "--h", "berezin", "--order", "1")
    assert code == 0


def test_eval(tmp_path):
    code, data = call_json("eval", "g 1; 0->0, 0->0", "--metric", "fubini_study_1d")
    assert code == 0 and data["value"][0] == pytest.approx(-1.48)
    code, data = call_json("eval", "g 1; 0->0, 0->0", "--metric", "flat", "--chart", "1")
    assert data["value"] == [0.0, 0.0]
    code, q1 = call_json("op", "Qk", "--k", "1")
    f = tmp_path / "op.json"
    f.write_text(json.dumps(q1))
    assert call("eval", str(f), "--stable-basis")[0] == 0


def test_error_exit_codes():
    assert call("enumerate", "--weight", "9")[0] == 3
    assert call("nonsense")[0] == 2
    assert call("enumerate", "--bogus-flag")[0] == 2
    assert call("aut", "not a graph")[0] == 2
    assert call("star", "--h", "berezin", "--order", "5")[0] == 3
    assert call("compose", "/nonexistent.json", "/nonexistent.json")[0] == 2


def test_deterministic_output():
    assert call("enumerate", "--weight", "2", "--pointed", "--strong") == call(
        "enumerate", "--weight", "2", "--pointed", "--strong"
    )
