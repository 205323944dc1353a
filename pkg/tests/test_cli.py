import json
import subprocess
import sys

import pytest

from titsalt.cli import EXIT_ERROR, REPORT_KEYS, main, run_decision
from titsalt.io import SchemaError, corpus_names, corpus_path, group_from_json, parse_group, serialize_group


def write(tmp_path, data, name="g.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return p


def test_parse_minimal(tmp_path):
    G = parse_group(write(tmp_path, {"field": {"type": "rationals"}, "n": 1, "generators": [[["2"]]]}))
    assert (G.n, G.r) == (1, 1)


def test_parse_number_field(tmp_path):
    data = {"field": {"type": "number_field", "poly": [1, 0, 1], "var": "a"}, "n": 2,
            "generators": [[["a", "0"], ["0", "1"]]]}
    G = parse_group(write(tmp_path, data))
    assert G.field.deg == 2


@pytest.mark.parametrize("data, message", [
    ({"field": {"type": "rationals"}, "n": 2, "generators": [[["1", "0"], ["0", "0"]]]},
     "singular generator at index 0"),
    ({"field": {"type": "function_field", "base": {"type": "function_field", "base": {"type": "rationals"}}},
      "n": 1, "generators": [[["x"]]]}, "multivariate"),
    ({"field": {"type": "rationals"}, "n": 2, "generators": [[["1", "0"]]]}, r"generators\[0\]"),
    ({"field": {"type": "rationals"}, "n": 1, "generators": [[["y"]]]}, "unknown symbol"),
    ({"field": {"type": "finite_field", "p": 4}, "n": 1, "generators": [[["1"]]]}, "not prime"),
    ({"field": {"type": "number_field", "poly": [-1, 0, 1]}, "n": 1, "generators": [[["1"]]]}, "reducible"),
    ({"n": 1, "generators": [[["1"]]]}, "missing key 'field'"),
    ({"field": {"type": "rationals"}, "n": 1, "generators": [[["1"]]], "overrides": {"colour": 1}},
     "unknown override"),
])
def test_schema_errors(data, message):
    with pytest.raises(SchemaError, match=message):
        group_from_json(data)


@pytest.mark.parametrize("name", corpus_names())
def test_round_trip(name):
    G = parse_group(corpus_path(name))
    data = serialize_group(G)
    H = group_from_json(json.loads(json.dumps(data)))
    assert H.field == G.field and H.generators == G.generators
    assert serialize_group(H) == data


@pytest.mark.parametrize("name, prop, verdict", [
    ("bs12", "nilpotent-by-finite", "false"),
    ("monomial", "abelian-by-finite", "true"),
    ("sl2z", "solvable-by-finite", "false"),
])
def test_run_decision_examples(name, prop, verdict):
    report = run_decision(parse_group(corpus_path(name)), prop)
    assert report["verdict"] == verdict
    assert tuple(report) == REPORT_KEYS


EXPECTED = {
    "bs12": {"solvable": "true", "nilpotent-by-finite": "false"},
    "heisenberg": {"nilpotent-by-finite": "true", "abelian-by-finite": "false"},
    "scalar": {"central-by-finite": "true"},
    "monomial": {"abelian-by-finite": "true"},
    "monomial_q": {"abelian-by-finite": "true", "central-by-finite": "false"},
    "triangular_gf19": {"solvable": "true"},
    "sl2z": {"solvable-by-finite": "false"},
    "sl3z": {"solvable-by-finite": "false"},
    "kronecker": {"solvable-by-finite": "false"},
    "free_pair": {"solvable-by-finite": "false", "completely-reducible": "undecided"},
    "noncentral": {"central-by-finite": "false", "abelian-by-finite": "true"},
    "sl2_gf5_const": {"solvable": "false", "solvable-by-finite": "true", "nilpotent-by-finite": "true"},
    "sqrt_x": {"solvable": "true", "nilpotent-by-finite": "false"},
}
CODES = {"true": 0, "false": 1, "undecided": 2}


def test_expected_cover_corpus():
    assert sorted(EXPECTED) == corpus_names()


@pytest.mark.parametrize("name, prop, verdict", [(n, p, v) for n, d in EXPECTED.items() for p, v in d.items()])
def test_exit_codes(name, prop, verdict, tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["decide", prop, str(corpus_path(name)), "--report", str(out)])
    assert code == CODES[verdict]
    report = json.loads(out.read_text())
    assert report["verdict"] == verdict and tuple(report) == REPORT_KEYS
    assert capsys.readouterr().out.startswith(f"{prop}: {verdict}")


def test_reports_deterministic():
    G = parse_group(corpus_path("heisenberg"))
    a = run_decision(G, "abelian-by-finite", prime=5, seed=3)
    b = run_decision(G, "abelian-by-finite", prime=5, seed=3)
    a.pop("timings"), b.pop("timings")
    assert json.dumps(a, default=str) == json.dumps(b, default=str)
    assert a["prime"] == 5 and a["certificate"]["whom"]["p"] == 5


def test_replay_from_report():
    G = parse_group(corpus_path("kronecker"))
    first = run_decision(G, "solvable-by-finite", prime=5)
    again = run_decision(G, "solvable-by-finite", prime=first["prime"], seed=first["seed"])
    assert again["verdict"] == first["verdict"]


def test_errors_exit_above_two(tmp_path, capsys):
    bad = write(tmp_path, {"field": {"type": "rationals"}, "n": 2, "generators": [[["1", "0"], ["0", "0"]]]})
    assert main(["decide", "solvable", str(bad)]) == EXIT_ERROR
    assert "singular generator at index 0" in capsys.readouterr().err
    assert main(["decide", "solvable", str(tmp_path / "missing.json")]) == EXIT_ERROR
    ff = write(tmp_path, {"field": {"type": "finite_field", "p": 5}, "n": 1, "generators": [[["2"]]]}, "f.json")
    assert main(["decide", "solvable", str(ff)]) == EXIT_ERROR


def test_overrides_from_file(tmp_path):
    data = json.loads(corpus_path("heisenberg").read_text())
    data["overrides"] = {"prime": 7, "cap": 1000}
    G = parse_group(write(tmp_path, data))
    report = run_decision(G, "nilpotent-by-finite")
    assert report["prime"] == 7 and report["cap"] == 1000
    assert report["certificate"]["image_order"] == 343


def test_info_and_console_script(capsys):
    assert main(["info", str(corpus_path("bs12"))]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["mu"] == "2" and info["congruence"]["p"] == 3
    res = subprocess.run([sys.executable, "-m", "titsalt.cli", "decide", "central-by-finite",
                          str(corpus_path("scalar"))], capture_output=True, text=True)
    assert res.returncode == 0 and "central-by-finite: true" in res.stdout
