import json
import os
import sys

import pytest

sys.path.append(os.getcwd())

import config
import neronkit
from core.errors import InputError, JobError, PolySyntaxError
from core.exact_arith import QQ
from core.job import Job, load_job

JOBS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "jobs")


def job_file(tmp_path, data, name="job.json"):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(path)


def results(report):
    return {c["id"]: c for c in report["commands"]}


def test_job_blocks_are_parsed():
    job = load_job(os.path.join(JOBS, "shifted_law.json"))
    assert job.name == "shifted-multiplicative"
    assert job.domain == QQ and job.descriptor is None
    assert job.variety("X").unit == job.poly("1 + x", ("x",))
    assert job.law("L").samples[1] == {"x": job.scalar("-1/2")}
    assert [c.id for c in job.commands] == ["law", "inv", "atlas"]
    assert job.commands[2].depends_on == ["law"]
    assert job.commands[2].params == {"law": "L", "generators": [["1"]], "bound": 2}
    with pytest.raises(JobError):
        job.law("missing")


def test_dvr_job_blocks():
    job = load_job(os.path.join(JOBS, "elliptic_i2.json"))
    assert str(job.descriptor) == "Z_(5)"
    s1 = job.section("s1")
    assert s1.coords == (job.descriptor.element(-1), job.descriptor.element(5))
    omega = job.form("omega", job.model("A"))
    assert omega.dvar == "x"
    assert [str(W) for W in job.components(job.model("A"))] == ["A:(pi)"]


@pytest.mark.parametrize("data, fragment", [
    ({"ring": {"kind": "R"}}, "Unknown ring kind"),
    ({"ring": {"kind": "Z_(p)", "p": 4}}, "bad ring block"),
    ({"commands": [{"id": "a", "command": "delta"}, {"id": "a", "command": "delta"}]}, "duplicate"),
    ({"commands": [{"id": "a", "command": "delta", "depends_on": ["b"]}, {"id": "b", "command": "delta"}]},
     "unknown or later"),
    ({"commands": [{"id": "a"}]}, "no 'command'"),
    ({"models": {"A": {"vars": ["x"], "equations": ["x"]}}}, "needs a DVR ring"),
    ([], "JSON object"),
])
def test_malformed_jobs(data, fragment):
    with pytest.raises(JobError) as e:
        Job(data)
    assert fragment in str(e.value)


def test_default_command_ids():
    job = Job({"commands": [{"command": "delta", "section": "s"}, {"command": "smoothen"}]})
    assert [c.id for c in job.commands] == ["c1", "c2"]
    assert job.commands[0].params == {"section": "s"}


def test_syntax_errors_in_a_job(tmp_path):
    data = {"varieties": {"X": {"vars": ["x"], "equations": ["x +"]}}}
    with pytest.raises(PolySyntaxError):
        load_job(job_file(tmp_path, data))
    report = neronkit.run_job(job_file(tmp_path, data))
    assert report["exit_code"] == config.EXIT_INPUT_ERROR
    assert "offset 3" in report["error"]["message"]


def test_unreadable_jobs(tmp_path):
    assert neronkit.run_job(job_file(tmp_path, "{not json"))["exit_code"] == config.EXIT_INPUT_ERROR
    assert neronkit.run_job(str(tmp_path / "absent.json"))["exit_code"] == config.EXIT_INPUT_ERROR


def test_shifted_law_job():
    report = neronkit.run_job(os.path.join(JOBS, "shifted_law.json"))
    assert report["exit_code"] == config.EXIT_OK
    out = results(report)
    assert out["law"]["result"]["passed"]
    assert out["inv"]["result"]["passed"]
    assert len(out["atlas"]["result"]["atlas"]["charts"]) == 3


def test_smoothening_job():
    report = neronkit.run_job(os.path.join(JOBS, "smoothen_p4.json"))
    assert report["exit_code"] == config.EXIT_OK
    out = results(report)
    assert out["d"]["result"]["delta"] == 2
    assert out["d"]["result"]["smooth"] is False
    assert out["sm"]["result"]["blow_ups"] == 2


def test_pipeline_job():
    report = neronkit.run_job(os.path.join(JOBS, "elliptic_i2.json"))
    assert report["exit_code"] == config.EXIT_OK
    assert results(report)["run"]["result"]["minimal_count"] == 2


def test_failed_checks_and_unknown_commands(tmp_path):
    data = json.load(open(os.path.join(JOBS, "shifted_law.json"), encoding="utf-8"))
    data["commands"] = [
        {"id": "inv", "command": "check-invariance", "law": "L", "coefficient": "1"},
        {"id": "bogus", "command": "no-such-command"},
        {"id": "after", "command": "check-law", "law": "L", "depends_on": ["bogus"]},
    ]
    report = neronkit.run_job(job_file(tmp_path, data))
    out = results(report)
    assert out["inv"]["status"] == "completed" and not out["inv"]["result"]["passed"]
    assert out["bogus"]["error"]["type"] == "JobError"
    assert out["after"]["status"] == "skipped"
    assert report["exit_code"] == config.EXIT_INPUT_ERROR

    del data["commands"][1:]
    assert neronkit.run_job(job_file(tmp_path, data, "checks.json"))["exit_code"] == config.EXIT_CHECK_FAILED


def test_cli(tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code = neronkit.main(["run", os.path.join(JOBS, "smoothen_p4.json"), "--report", str(out_path)])
    assert code == config.EXIT_OK
    report = json.loads(out_path.read_text())
    assert report["version"] == config.REPORT_VERSION
    assert "job cusp-family-m2: PASS (exit 0)" in capsys.readouterr().out

    assert neronkit.main(["commands"]) == config.EXIT_OK
    assert "check-law" in capsys.readouterr().out


DVR_RING = {"kind": "Z_(p)", "p": 5}


def test_singular_generic_fibre_is_rejected(tmp_path):
    data = {"ring": DVR_RING, "models": {"A": {"vars": ["x", "y"], "equations": ["(y - x^2)^2"]}}}
    with pytest.raises(JobError, match="model A"):
        Job(data)
    assert neronkit.run_job(job_file(tmp_path, data))["exit_code"] == config.EXIT_INPUT_ERROR


def test_non_integral_section_is_an_input_error(tmp_path):
    data = {"ring": DVR_RING,
            "models": {"A": {"vars": ["x", "y"], "equations": ["y - x"], "irreducible": True}},
            "sections": {"s": {"model": "A", "coords": ["1/p", "1/p"]}}}
    with pytest.raises(InputError):
        Job(data)
    assert neronkit.run_job(job_file(tmp_path, data))["exit_code"] == config.EXIT_INPUT_ERROR


def test_default_law_slots_follow_the_coordinates():
    law = {"variety": "E", "m12": ["x1 + x2", "y1 + y2"], "m13": ["x3 - x1", "y3 - y1"],
           "m23": ["x3 - x2", "y3 - y2"]}
    job = Job({"varieties": {"E": {"vars": ["x", "y"], "irreducible": True}}, "laws": {"L": law}})
    assert job.law("L").slots == {"a": ("x1", "y1"), "b": ("x2", "y2"), "c": ("x3", "y3")}

    clash = {"varieties": {"E": {"vars": ["x", "x1"], "irreducible": True}}, "laws": {"L": law}}
    with pytest.raises(JobError, match="law L"):
        Job(clash)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
