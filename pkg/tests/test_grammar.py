import copy
import json
from pathlib import Path

import pytest

from graphconflicts.grammar import (
    GrammarError, grammar_from_rules, load_grammar, parse_grammar, serialize_grammar,
)
from graphconflicts.graphs import are_isomorphic

from corpus import AC_PAIRS, NAC_PAIRS, PLAIN_PAIRS, THREE, build

GRAMMARS = Path(__file__).resolve().parent.parent / "grammars"
RUNNING = GRAMMARS / "running_example.json"


def running_data():
    return json.loads(RUNNING.read_text())


def corpus_rules():
    out = {}
    for pair in PLAIN_PAIRS + AC_PAIRS + NAC_PAIRS:
        for r in build(pair):
            out.setdefault(r.name, r)
    return list(out.values())


def test_corpus_round_trip():
    rules = corpus_rules()
    back = load_grammar(json.loads(serialize_grammar(grammar_from_rules(rules))))
    assert [(r.name, r.l, r.r, r.ac) for r in back.rules] == [(r.name, r.l, r.r, r.ac) for r in rules]


@pytest.mark.parametrize("path", sorted(GRAMMARS.glob("*.json")), ids=lambda p: p.stem)
def test_shipped_grammars_round_trip(path):
    g = parse_grammar(path)
    again = load_grammar(json.loads(serialize_grammar(g)))
    assert again.structure() == g.structure()


def test_running_example_fixture():
    g = parse_grammar(RUNNING)
    p1, p2 = g.rule("p1"), g.rule("p2")
    assert p1.right.n_edges == 1 and p2.right.n_nodes == 2
    nac_target = p2.ac.child.morphism.cod
    assert are_isomorphic(nac_target, THREE)
    assert g.defaults == {"max_nodes": 3, "max_edges": 3, "matches": "all"}


def test_empty_rule_set():
    g = load_grammar({"type_graph": {"nodes": ["N"], "edges": []}, "rules": []})
    assert g.rules == []
    assert load_grammar(json.loads(serialize_grammar(g))).rules == []


def test_unknown_rule_name():
    with pytest.raises(GrammarError):
        parse_grammar(RUNNING).rule("p3")


def expect_error(data, where):
    with pytest.raises(GrammarError) as err:
        load_grammar(data)
    assert err.value.path.startswith(where), err.value.path
    return err.value


def test_missing_node_in_edge():
    data = running_data()
    data["rules"][0]["right"]["edges"]["ab"]["target"] = "z"
    e = expect_error(data, "rules[0].right.edges")
    assert "'z'" in str(e)


def test_bad_morphism():
    data = running_data()
    data["rules"][0]["l"]["nodes"] = {}
    expect_error(data, "rules[0].l")


def test_unknown_node_in_morphism():
    data = running_data()
    data["rules"][1]["r"]["nodes"]["q"] = "a"
    expect_error(data, "rules[1].r")


def test_ill_typed_condition():
    data = running_data()
    data["type_graph"]["nodes"].append("M")
    data["graphs"]["three"]["nodes"]["a"] = "M"
    expect_error(data, "rules[1].ac.child.morphism")


def test_unknown_condition_kind():
    data = running_data()
    data["rules"][1]["ac"] = {"kind": "maybe"}
    expect_error(data, "rules[1].ac")


def test_non_injective_leg():
    data = copy.deepcopy(running_data())
    data["rules"][0]["interface"] = {"nodes": {"a": "N", "c": "N"}}
    data["rules"][0]["l"] = {"nodes": {"a": "a", "c": "a"}, "edges": {}}
    data["rules"][0]["r"] = {"nodes": {"a": "a", "c": "b"}, "edges": {}}
    expect_error(data, "rules[0]")


def test_duplicate_rule_name():
    data = running_data()
    data["rules"][1]["name"] = "p1"
    expect_error(data, "rules[1]")


def test_syntax_error_reports_line(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "rules": [\n    {"name": }\n  ]\n}\n')
    with pytest.raises(GrammarError) as err:
        parse_grammar(bad)
    assert "line 3" in str(err.value)


def test_missing_file(tmp_path):
    with pytest.raises(GrammarError):
        parse_grammar(tmp_path / "absent.json")
