import json

import pytest

from loghh.errors import ParseError, SchemaError
from loghh.problem import FIXTURES, fixture_text, load_fixture, parse_problem, to_spec

LOGPOINT = {
    "total": {"monoid": {"ambient_rank": 1, "generators": [[1]]}, "chart": ["0"]},
    "tasks": [{"task": "hh", "backend": "resolution", "N": 2}],
}


def _text(**changes):
    data = json.loads(json.dumps(LOGPOINT))
    data.update(changes)
    return json.dumps(data)


@pytest.mark.parametrize("name", FIXTURES)
def test_fixtures_parse_and_round_trip(name):
    prob = load_fixture(name)
    again = parse_problem(prob.serialize())
    assert again == prob
    assert again.serialize() == prob.serialize()
    to_spec(prob)


def test_minimal_problem_defaults():
    prob = parse_problem(_text())
    assert prob.field.characteristic == 0
    assert prob.base.monoid.ambient_rank == 0
    assert prob.tasks[0].N == 2


def test_malformed_json_position():
    with pytest.raises(ParseError) as ei:
        parse_problem('{"total": \n  [1,,2]}')
    assert ei.value.line == 2


def test_malformed_exponent_in_relation():
    data = json.loads(fixture_text("node"))
    data["total"]["ring"]["relations"] = ["x^^2"]
    with pytest.raises(ParseError) as ei:
        parse_problem(json.dumps(data))
    assert ei.value.column == 3
    assert "total.relations" in str(ei.value)


def test_malformed_regular_sequence():
    data = json.loads(fixture_text("logpoint"))
    data["tasks"][0]["regular_sequence"] = ["u0__1 -"]
    with pytest.raises(ParseError, match="tasks.0.regular_sequence.0"):
        parse_problem(json.dumps(data))


def test_unknown_keys_rejected():
    with pytest.raises(SchemaError, match="colour"):
        parse_problem(_text(colour="blue"))
    with pytest.raises(SchemaError):
        parse_problem(_text(tasks=[{"task": "hh", "depth": 3}]))
    with pytest.raises(SchemaError):
        parse_problem(_text(tasks=[{"task": "homotopy"}]))


def test_theta_outside_p():
    data = json.loads(json.dumps(LOGPOINT))
    data["base"] = {"monoid": {"ambient_rank": 1, "generators": [[1]]}, "chart": ["0"]}
    data["total"]["monoid"]["generators"] = [[2]]
    data["total"]["theta"] = [[3]]
    with pytest.raises(SchemaError, match="Q-generator 0"):
        parse_problem(json.dumps(data))


def test_bad_field_and_budget():
    with pytest.raises(SchemaError):
        parse_problem(_text(field={"characteristic": 6}))
    with pytest.raises(SchemaError, match="max_bananas"):
        parse_problem(_text(budget={"max_bananas": 3}))


def test_bad_shapes():
    with pytest.raises(SchemaError):
        parse_problem(_text(total={"monoid": {"ambient_rank": 2, "generators": [[1]]}, "chart": ["0"]}))
    with pytest.raises(SchemaError):
        parse_problem(_text(tasks=[{"task": "hh", "degree_box": [3, 1]}]))
    with pytest.raises(SchemaError, match="chart"):
        parse_problem(_text(total={"monoid": {"ambient_rank": 1, "generators": [[1]]}, "chart": []}))
