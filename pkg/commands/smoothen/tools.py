from core.smoothening import smoothen as run_smoothening


def smoothen(job, model: str, sections: list):
    """Blows up until every listed section passes through the smooth locus."""
    result = run_smoothening(job.model(model), [job.section(s) for s in sections])
    out = result.to_dict()
    out.update(model=model, sections=list(sections), passed=True,
               summary=f"{result.blow_ups} blow-ups in {result.rounds} rounds")
    return out
