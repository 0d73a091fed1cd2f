"""
Report document and summary table for a finished task graph.
"""

import json
from typing import Dict, List

import pandas as pd

import config
from core.task_graph import TaskGraph, TaskStatus


def exit_code(graph: TaskGraph) -> int:
    """Input errors beat resource caps, which beat failed checks."""
    codes = set()
    for task in graph.tasks.values():
        if task.status in (TaskStatus.FAILED, TaskStatus.SKIPPED):
            codes.add(task.exit_code if task.exit_code is not None else config.EXIT_CHECK_FAILED)
        elif not task.passed:
            codes.add(config.EXIT_CHECK_FAILED)
    for code in (config.EXIT_INPUT_ERROR, config.EXIT_RESOURCE_CAP, config.EXIT_CHECK_FAILED):
        if code in codes:
            return code
    return config.EXIT_OK


def build_report(job_name: str, graph: TaskGraph) -> Dict:
    code = exit_code(graph)
    return {
        "version": config.REPORT_VERSION,
        "job": job_name,
        "commands": [t.to_dict() for t in graph.tasks.values()],
        "passed": code == config.EXIT_OK,
        "exit_code": code,
    }


def input_error_report(job_name: str, error: Exception) -> Dict:
    """Report for a job that could not be loaded at all."""
    return {
        "version": config.REPORT_VERSION,
        "job": job_name,
        "commands": [],
        "error": {"type": type(error).__name__, "message": str(error)},
        "passed": False,
        "exit_code": getattr(error, "exit_code", config.EXIT_INPUT_ERROR),
    }


def dumps(report: Dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=str)


def summary_frame(report: Dict) -> pd.DataFrame:
    rows: List[Dict] = []
    for c in report["commands"]:
        result = c.get("result") or {}
        if c["status"] == TaskStatus.COMPLETED.value:
            verdict = "pass" if result.get("passed", True) else "FAIL"
            detail = result.get("summary", "")
        else:
            verdict = c["status"]
            detail = f"{c['error']['type']}: {c['error']['message']}"
        rows.append({"id": c["id"], "command": c["command"], "verdict": verdict, "detail": detail})
    return pd.DataFrame(rows, columns=["id", "command", "verdict", "detail"])


def summary_text(report: Dict) -> str:
    head = f"job {report['job']}: {'PASS' if report['passed'] else 'FAIL'} (exit {report['exit_code']})"
    if "error" in report:
        return f"{head}\n{report['error']['type']}: {report['error']['message']}"
    frame = summary_frame(report)
    if frame.empty:
        return head
    return f"{head}\n{frame.to_string(index=False)}"
