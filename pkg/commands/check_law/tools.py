from core.birlaw import check_law as run_checks


def check_law(job, law: str):
    """Runs the three strict-law checks on a named law."""
    reports = run_checks(job.law(law))
    failed = [r.check for r in reports if not r.passed]
    return {
        "law": law,
        "passed": not failed,
        "checks": [r.to_dict() for r in reports],
        "summary": "all checks passed" if not failed else f"failed: {', '.join(failed)}",
    }
