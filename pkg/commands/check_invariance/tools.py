from core.volume import check_invariance as run_check


def check_invariance(job, law: str, coefficient: str, dvar: str = None):
    """Checks that coefficient * d(dvar) is invariant under left translations."""
    L = job.law(law)
    c = job.ratfunc(coefficient, L.variety.gens)
    report = run_check(L, c, dvar)
    return {
        "law": law,
        "form": f"({coefficient}) d{dvar or L.variety.gens[0]}",
        **report.to_dict(),
        "summary": "invariant" if report.passed else "not invariant",
    }
