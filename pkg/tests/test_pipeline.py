import os
import sys

import pytest

sys.path.append(os.getcwd())

from core.errors import JobError
from core.job import Job
from core.module_manager import CommandManager
from tate_oracle import reduction

P = 5

# (a2, a4, a6), sections on y^2 = x^3 + a2 x^2 + a4 x + a6
CURVES = {
    "I2": ((1, 0, 25), [["-1", "p"], ["0", "p"]]),
    "I1": ((1, 0, 85), [["3", "11"]]),
    "II": ((0, 0, 5), [["-1", "2"]]),
}


def weierstrass_job(a2, a4, a6, points, law=False):
    data = {
        "name": "weierstrass",
        "ring": {"kind": "Z_(p)", "p": P},
        "models": {"A": {"vars": ["x", "y"], "irreducible": True,
                         "equations": [f"y^2 - x^3 - ({a2})*x^2 - ({a4})*x - ({a6})"]}},
        "sections": {f"s{i + 1}": {"model": "A", "coords": pt} for i, pt in enumerate(points)},
        "forms": {"omega": {"weierstrass": {}}},
    }
    if law:
        data["varieties"] = {"Ga": {"vars": ["x"], "irreducible": True}}
        data["laws"] = {"add": {"variety": "Ga", "slots": {"a": ["a"], "b": ["b"], "c": ["c"]},
                                "m12": ["a + b"], "m13": ["c - a"], "m23": ["c - b"],
                                "samples": [{"x": "1"}]}}
    return Job(data)


@pytest.fixture(scope="module")
def manager():
    m = CommandManager()
    m.load_commands()
    return m


def run_pipeline(manager, job, **params):
    sections = sorted(job.sections)
    return manager.execute("pipeline", tool_context={"job": job}, model="A", sections=sections,
                           form="omega", **params)


@pytest.mark.parametrize("name", sorted(CURVES))
def test_minimal_components_match_the_oracle(manager, name):
    (a2, a4, a6), points = CURVES[name]
    expected = reduction(a2, a4, a6, P)
    assert expected.symbol == name
    out = run_pipeline(manager, weierstrass_job(a2, a4, a6, points))
    assert out["passed"]
    assert out["minimal_count"] == expected.components
    assert out["minimal_count"] == expected.tamagawa


def test_pipeline_stages_for_the_i2_fibre(manager):
    (a2, a4, a6), points = CURVES["I2"]
    out = run_pipeline(manager, weierstrass_job(a2, a4, a6, points))
    assert out["smoothening"]["blow_ups"] == 1
    assert out["smoothening"]["final_charts"] == {"s1": "A", "s2": "A.0.pi"}
    assert out["A2"] == ["A", "A.0.pi"]
    assert [o["order"] for o in out["normalized"]["orders"]] == [0, 0]
    assert out["A3"]["dropped"] == []
    assert "law_checks" not in out


def test_additive_fibre_needs_a_blow_up(manager):
    # y^2 = x^3 + 5x: both sections specialize to the cusp (0, 0)
    expected = reduction(0, 5, 0, P)
    assert expected.symbol == "III"
    out = run_pipeline(manager, weierstrass_job(0, 5, 0, [["0", "0"], ["20", "90"]]))
    assert out["smoothening"]["blow_ups"] == 1
    assert out["smoothening"]["final_charts"] == {"s1": "A.0.pi", "s2": "A.0.pi"}
    assert out["A2"] == ["A.0.pi"]
    assert out["minimal_count"] == 1
    assert out["minimal_count"] <= expected.components
    assert out["passed"]


def test_non_minimal_chart_is_dropped(manager):
    # dx gains a factor pi on the blown-up chart, so only A keeps order 0
    (a2, a4, a6), points = CURVES["I2"]
    job = weierstrass_job(a2, a4, a6, points)
    out = manager.execute("pipeline", tool_context={"job": job}, model="A", sections=["s1", "s2"],
                          form={"coefficient": "1", "dvar": "x"})
    assert out["A2"] == ["A", "A.0.pi"]
    assert [o["order"] for o in out["normalized"]["orders"]] == [0, 1]
    assert out["A3"]["dropped"] == ["A.0.pi"]
    assert [c["id"] for c in out["A3"]["charts"]] == ["A"]
    assert out["minimal_count"] == 1


def multiplicative_job():
    return Job({
        "name": "gm",
        "ring": {"kind": "Z_(p)", "p": P},
        "models": {"A": {"vars": ["x", "y"], "irreducible": True, "equations": ["x*y - 1"]}},
        "sections": {"s1": {"model": "A", "coords": ["-1", "-1"]}},
        "forms": {"omega": {"coefficient": "y", "dvar": "x"}},
        "varieties": {"Gm": {"vars": ["x", "y"], "irreducible": True, "equations": ["x*y - 1"]}},
        "laws": {"mul": {"variety": "Gm",
                         "m12": ["x1*x2", "y1*y2"], "m13": ["x3*y1", "y3*x1"], "m23": ["x3*y2", "y3*x2"],
                         "samples": [{"x": "-1", "y": "-1"}]}},
    })


def test_pipeline_with_a_law_and_atlas(manager):
    job = multiplicative_job()
    out = run_pipeline(manager, job, law="mul", generators=[["2", "1/2"]], bound=1)
    assert out["law_chart"] == "A"
    assert all(r["passed"] for r in out["law_checks"])
    assert len(out["atlas"]["charts"]) == 2
    assert out["atlas"]["verified"]
    assert out["passed"]


def test_law_on_another_variety_is_rejected(manager):
    (a2, a4, a6), points = CURVES["I1"]
    job = weierstrass_job(a2, a4, a6, points, law=True)
    with pytest.raises(JobError, match="generic fibre"):
        run_pipeline(manager, job, law="add", generators=[["1"]], bound=1)


def test_oracle_counts_geometric_components():
    assert reduction(0, 0, 1, 7).components == 1
    assert reduction(0, 5, 0, P).components == 2
    assert reduction(*CURVES["I2"][0], P).components == 2


def test_oracle_rejects_small_primes():
    with pytest.raises(NotImplementedError):
        reduction(0, 0, 1, 3)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
