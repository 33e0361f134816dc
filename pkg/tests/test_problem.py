import json
from fractions import Fraction

import pytest
from hypothesis import given

from choquet_lab.corpus import fixtures
from choquet_lab.problem import ProblemError, dump_problem, load_problem, parse_problem, problem_from_dict
from strategies import library_space, problem_docs

F = Fraction

GOOD = """{
  "name": "pair",
  "points": ["a", "b"],
  "target": {"kind": "linf", "dim": 2},
  "constraints": [[[1, 0], ["-1/2", 0]]],
  "probes": [{"point": "a", "functional": [1, 0]}]
}
"""


def test_parse_reads_rationals_and_probes():
    P = parse_problem(GOOD)
    H = P.space
    assert P.name == "pair" and H.n == 2 and H.d == 2 and H.m == 3
    assert P.extras == (("a", (F(1), F(0))),)
    # f(a)_1 = f(b)_1 / 2 for every f in the space
    for b in H.basis:
        assert b[0] == b[2] / 2


def test_floats_are_rejected_with_position():
    text = GOOD.replace('"-1/2"', "-0.5")
    with pytest.raises(ProblemError) as exc:
        parse_problem(text)
    e = exc.value
    assert e.path == "$.constraints[0][1][0]" and e.line == 5 and e.column is not None
    assert "line 5" in str(e)


def test_json_syntax_errors_report_position():
    with pytest.raises(ProblemError) as exc:
        parse_problem('{"points": [1,\n  ]}', "f.json")
    assert exc.value.path == "f.json" and exc.value.line == 2


@pytest.mark.parametrize("doc, where", [
    ({"target": {"kind": "linf", "dim": 1}, "full": True}, "$.points"),
    ({"points": ["a", "a"], "target": {"kind": "linf", "dim": 1}, "full": True}, "$.points"),
    ({"points": ["a"], "full": True}, "$"),
    ({"points": ["a"], "target": {"kind": "l7", "dim": 1}, "full": True}, "$.target.kind"),
    ({"points": ["a"], "target": {"kind": "linf", "dim": 1}}, "$"),
    ({"points": ["a"], "target": {"kind": "linf", "dim": 1}, "full": True, "basis": []}, "$"),
    ({"points": ["a"], "target": {"kind": "linf", "dim": 2}, "basis": [[[1]]]}, "$.basis[0][0]"),
    ({"points": ["a"], "target": {"kind": "lp", "dim": 1, "p": "1"}, "full": True}, "$.target"),
    ({"points": ["a"], "target": {"kind": "linf", "dim": 1}, "full": True,
      "probes": [{"point": "z", "functional": [1]}]}, "$.probes[0].point"),
    ({"points": ["a"], "target": {"kind": "linf", "dim": 1}, "full": True,
      "functionals": {"phi": [1, 2]}}, "$.functionals.phi"),
    ({"points": ["a", "b"], "target": {"kind": "linf", "dim": 1}, "constraints": [[1, 0], [0, 1]]},
     "$.constraints"),
])
def test_schema_errors_name_the_offending_path(doc, where):
    with pytest.raises(ProblemError) as exc:
        problem_from_dict(doc)
    assert exc.value.path == where


@given(problem_docs(max_points=4, max_dim=3))
def test_dump_round_trips(doc):
    H = library_space(doc)
    P = problem_from_dict(doc)
    again = parse_problem(dump_problem(P))
    assert again.space == H and again.name == P.name


@pytest.mark.parametrize("fx", [f for f in fixtures() if f.problem is not None], ids=lambda f: f.name)
def test_fixture_problems_round_trip(fx, tmp_path):
    path = tmp_path / "p.json"
    path.write_text(dump_problem(fx.problem))
    back = load_problem(path)
    assert back.space == fx.problem.space and back.probes == fx.problem.probes
    assert json.loads(path.read_text())["points"] == list(fx.problem.space.points)


def test_missing_file():
    with pytest.raises(ProblemError):
        load_problem("/nonexistent/problem.json")
