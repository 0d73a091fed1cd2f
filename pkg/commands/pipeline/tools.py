import logging

from core.birlaw import check_law
from core.errors import JobError, Unsupported
from core.smoothening import is_smooth_at, smoothen
from core.volume import component_orders, filter_non_minimal, minimal_components, normalize, pullback_form
from core.weilgroup import build_atlas

logger = logging.getLogger("Pipeline")


def _lineage(result, chart_id, root_id):
    """Blow-up records from the root model down to chart_id."""
    parent_record = {c.model_id: r for r in result.records for c in r.charts}
    path = []
    while chart_id != root_id:
        record = parent_record[chart_id]
        if record.pi_chart.model_id != chart_id:
            raise Unsupported(f"form pullback through coordinate chart {chart_id} is not implemented")
        path.append(record)
        chart_id = record.parent.model_id
    return list(reversed(path))


def _law_chart(L, charts):
    """The first chart whose generic fibre is the variety the law lives on (same coordinates, same ideal)."""
    X = L.variety.generic_fiber() if L.variety.is_dvr else L.variety
    for chart in charts:
        G = chart.variety().generic_fiber()
        if G.gens == X.gens and G.domain == X.domain and G.ideal.equals(X.ideal):
            return chart
    return None


def pipeline(job, model: str, sections: list, form, components: dict = None, law: str = None,
             generators: list = None, bound: int = None):
    """A0 -> A1 (smoothening) -> A2 (smooth charts of the sections) -> A3 (minimal components) -> law and atlas."""
    components = components or {}
    A = job.model(model)
    result = smoothen(A, [job.section(s) for s in sections])

    held = {}
    for a in result.final_sections.values():
        held.setdefault(a.model.model_id, []).append(a)
    a2 = []
    for chart_id in sorted(held):
        chart = result.models[chart_id]
        if all(is_smooth_at(chart, a) for a in held[chart_id]):
            a2.append(chart)
        else:
            logger.warning(f"chart {chart_id} is singular at a section after smoothening; dropped")

    omega = job.form(form, A)
    forms, found = [], []
    for chart in a2:
        w = omega
        for record in _lineage(result, chart.model_id, A.model_id):
            w = pullback_form(record, w)
        forms.append(w)
        found += component_orders(chart, job.components(chart, components.get(chart.model_id)), w)
    normalized = normalize(found, forms)
    minimal = minimal_components(normalized.orders)
    a3 = filter_non_minimal(a2, normalized.orders)

    out = {
        "model": model,
        "sections": list(sections),
        "smoothening": result.to_dict(),
        "A2": [c.model_id for c in a2],
        "normalized": normalized.to_dict(),
        "minimal": [str(W) for W in minimal],
        "minimal_count": len(minimal),
        "A3": a3.to_dict(),
    }
    passed = True
    if law is not None:
        L = job.law(law)
        chart = _law_chart(L, a3.charts)
        if chart is None:
            raise JobError(f"law {law} does not live on the generic fibre of any chart in "
                           f"{[c.model_id for c in a3.charts]}")
        out["law_chart"] = chart.model_id
        reports = check_law(L)
        out["law_checks"] = [r.to_dict() for r in reports]
        passed = all(r.passed for r in reports)
        if passed and generators:
            domain = L.variety.descriptor.fraction_field if L.variety.is_dvr else None
            atlas = build_atlas(L, [job.point(p, domain) for p in generators],
                                bound if bound is not None else job.word_bound)
            out["atlas"] = atlas.to_dict()
            passed = atlas.verified
    out["passed"] = passed
    out["summary"] = (f"{result.blow_ups} blow-ups, {len(a2)} smooth charts, "
                      f"{len(minimal)} minimal components")
    return out
