import asyncio
import sys
import os
sys.path.append(os.getcwd())

import pytest

import config
from core.errors import InputError, ResourceCapExceeded
from core.executor import Executor
from core.module_manager import CommandManager
from core.report import build_report, exit_code, input_error_report, summary_frame, summary_text
from core.task_graph import Task, TaskGraph, TaskStatus


def passing(job):
    return {"passed": True, "summary": "fine", "job": job}


def failing_check():
    return {"passed": False, "summary": "identity broken"}


def capped():
    raise ResourceCapExceeded("basis grew past 2 elements")


def bad_input():
    raise InputError("Unexpected end of input at offset 3")


def wrong_type(n: int):
    return {"n": n + 1}


@pytest.fixture
def manager():
    m = CommandManager(commands_dir="/nonexistent")
    for func in (passing, failing_check, capped, bad_input, wrong_type):
        m.register_tool(func.__name__, func, "")
    return m


def run(manager, tasks, context=None):
    graph = TaskGraph(tasks)
    return asyncio.run(Executor(manager).execute_graph(graph, context or {"job": "J"}))


def test_tasks_run_in_dependency_order(manager):
    graph = run(manager, [Task("passing", {}, task_id="a"), Task("passing", {}, ["a"], "b")])
    assert [t.status for t in graph.tasks.values()] == [TaskStatus.COMPLETED, TaskStatus.COMPLETED]
    assert graph.get_task("b").result["job"] == "J"
    assert exit_code(graph) == config.EXIT_OK


def test_failures_skip_dependants_but_not_siblings(manager):
    graph = run(manager, [
        Task("capped", {}, task_id="grow"),
        Task("passing", {}, ["grow"], "after"),
        Task("passing", {}, ["after"], "later"),
        Task("passing", {}, task_id="sibling"),
    ])
    grow = graph.get_task("grow")
    assert grow.status == TaskStatus.FAILED
    assert grow.error["type"] == "ResourceCapExceeded"
    assert grow.exit_code == config.EXIT_RESOURCE_CAP
    assert graph.get_task("after").status == TaskStatus.SKIPPED
    assert graph.get_task("later").status == TaskStatus.SKIPPED
    assert graph.get_task("sibling").status == TaskStatus.COMPLETED
    assert exit_code(graph) == config.EXIT_RESOURCE_CAP


def test_malformed_parameters_are_input_errors(manager):
    graph = run(manager, [Task("wrong-type", {"n": "x"}, task_id="t")])
    assert graph.get_task("t").exit_code == config.EXIT_INPUT_ERROR
    assert graph.get_task("t").error["type"] == "TypeError"


@pytest.mark.parametrize("commands, expected", [
    (["passing"], config.EXIT_OK),
    (["passing", "failing-check"], config.EXIT_CHECK_FAILED),
    (["failing-check", "capped"], config.EXIT_RESOURCE_CAP),
    (["capped", "bad-input", "failing-check"], config.EXIT_INPUT_ERROR),
])
def test_exit_code_precedence(manager, commands, expected):
    graph = run(manager, [Task(c, {}, task_id=f"t{i}") for i, c in enumerate(commands)])
    assert exit_code(graph) == expected


def test_report_and_summary(manager):
    graph = run(manager, [Task("failing-check", {}, task_id="law"), Task("bad-input", {}, task_id="parse")])
    report = build_report("demo", graph)
    assert report["version"] == config.REPORT_VERSION
    assert report["exit_code"] == config.EXIT_INPUT_ERROR
    assert not report["passed"]
    assert [c["id"] for c in report["commands"]] == ["law", "parse"]
    assert "error" in report["commands"][1] and "result" not in report["commands"][1]

    frame = summary_frame(report)
    assert list(frame["verdict"]) == ["FAIL", "failed"]
    assert frame.loc[1, "detail"] == "InputError: Unexpected end of input at offset 3"
    assert summary_text(report).startswith("job demo: FAIL (exit 3)")


def test_input_error_report():
    report = input_error_report("broken.json", InputError("bad ring block"))
    assert report["exit_code"] == config.EXIT_INPUT_ERROR
    assert report["commands"] == []
    assert "InputError: bad ring block" in summary_text(report)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
