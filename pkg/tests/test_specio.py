import json
from pathlib import Path

import pytest

from tmotives.catalog import EXAMPLES, example
from tmotives.specio import load_spec, parse_spec, spec_to_data
from tmotives.tmotive import SpecError

SPECS = Path(__file__).resolve().parent.parent / "specs"


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_round_trip(name):
    spec = example(name)
    data = spec_to_data(spec)
    assert parse_spec(json.loads(json.dumps(data))) == spec
    assert load_spec(SPECS / f"{name}.json") == spec


@pytest.mark.parametrize("data,message", [
    ([], "JSON object"),
    ({"A": [[[]]]}, "missing field 'q'"),
    ({"q": 6, "A": [[[]]]}, "field 'q'"),
    ({"q": 4, "p": 3, "A": [[[]]]}, "field 'p'"),
    ({"q": 2, "A": [[[[1, 1]], [[6, 1]]]]}, "field 'A'"),
    ({"q": 2, "A": [[[[1, 2]], []], [[], []]]}, "A[0][0][0]: coefficient"),
    ({"q": 2, "A": [[[["x", 1]], []], [[], []]]}, "A[0][0][0]: exponent"),
    ({"q": 2, "A": [[[[1, 1], [1, 1]], []], [[], []]]}, "repeated"),
    ({"q": 2, "A": [[[], []], [[], []]], "epsilon": 2}, "epsilon"),
    ({"q": 2, "family": "standard1", "params": {"a11": []}}, "missing"),
    ({"q": 2, "family": "other"}, "unknown family"),
])
def test_schema_errors(data, message):
    with pytest.raises(SpecError, match=message.replace("[", r"\[").replace("]", r"\]")):
        parse_spec(data)


def test_json_errors_carry_line_and_column(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"q": 2,\n "A": [1,}')
    with pytest.raises(SpecError, match=r"line 2, column \d+"):
        load_spec(path)


def test_rational_exponents_are_strings():
    data = spec_to_data(example("nilpotent-q3"))
    assert data["A"][0][1] == [["-21/2", 1], ["-1/2", 1]]
    assert data["A"][1][0] == [["9/2", 1]]
