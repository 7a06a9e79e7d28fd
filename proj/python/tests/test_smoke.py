import json

import pytest

import zddsynth

APPENDIX = """p cnf 8 5
a 1 2 3 0
e 4 5 6 0
1 4 -5 0
-1 2 6 0
1 -2 3 5 0
-3 1 -4 0
-3 2 -5 0
"""


def test_parse_roles():
    spec = zddsynth.parse(APPENDIX, "appendix")
    assert spec.inputs == [1, 2, 3]
    assert spec.outputs == [4, 5, 6, 7, 8]
    assert spec.free_vars == [7, 8]
    assert len(spec.clauses) == 5


def test_parse_error():
    with pytest.raises(zddsynth.ParseError):
        zddsynth.parse("p cnf 1 1\n1 x 0\n")


@pytest.mark.parametrize("mode", ["dp", "monolithic"])
def test_synthesize_and_verify(mode):
    spec = zddsynth.parse(APPENDIX, "appendix")
    result = zddsynth.synthesize(spec, mode=mode)
    assert result["outcome"] == "FULLY_REALIZABLE"
    ok, cex = zddsynth.verify(spec, result["witnesses"])
    assert ok and cex is None
    doc = json.loads(result["witness_json"])
    assert doc["mode"] == mode


def test_partial_and_oracle():
    spec = zddsynth.make_spec([1], [2], [[1], [2]])
    result = zddsynth.realize(spec)
    assert result["outcome"] == "PARTIALLY_REALIZABLE"
    assert result["rset"] == [[1]]
    oracle = zddsynth.classify_bruteforce(spec)
    assert oracle["outcome"] == "PARTIALLY_REALIZABLE"
    assert oracle["rset"] == [1]


def test_wrong_witness_has_counterexample():
    spec = zddsynth.make_spec([1], [2], [[1, -2]])
    ok, cex = zddsynth.verify(spec, {2: []})
    assert not ok
    assert cex == {1: False}


def test_random_instances_agree_with_oracle():
    for seed in range(40):
        spec = zddsynth.gen_random(3, 3, seed % 10, 3, seed, seed % 2 == 1)
        got = zddsynth.synthesize(spec, seed=seed)
        assert got["outcome"] == zddsynth.classify_bruteforce(spec)["outcome"]
        if got["outcome"] != "NULLARY_REALIZABLE":
            assert zddsynth.verify(spec, got["witnesses"])[0]


def test_plan_is_deterministic():
    spec = zddsynth.gen_family("mutex-like", 3)
    a = zddsynth.plan(spec, seed=5, heuristic="random-restarts")
    b = zddsynth.plan(spec, seed=5, heuristic="random-restarts")
    assert a == b
    assert json.loads(a[0])["nodes"]


def test_manager_operations():
    m = zddsynth.Manager(3)
    z = m.clauses([[1, 2], [-2, 3]])
    assert m.enumerate(m.project(z, 2)) == [[1, 3]]
    assert m.enumerate(m.cross(m.clauses([[1, 2]]))) == [[1], [2]]
    assert m.count(z) == 2
    assert m.support(z) == [1, 2, 3]
    g = m.clauses([[3]])
    assert m.enumerate(m.substitute(z, 2, g)) == [[1, 3]]
    with pytest.raises(zddsynth.FalsityHasNoDnf):
        m.cross(m.unit())
