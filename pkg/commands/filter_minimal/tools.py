from core.volume import component_orders, filter_non_minimal, minimal_components, normalize


def filter_minimal(job, forms: dict, components: dict = None):
    """Normalizes a form given chart by chart ({model: form}) and keeps the minimal components."""
    components = components or {}
    charts, omegas, found = [], [], []
    for model, spec in forms.items():
        chart = job.model(model)
        omega = job.form(spec, chart)
        charts.append(chart)
        omegas.append(omega)
        found += component_orders(chart, job.components(chart, components.get(model)), omega)
    normalized = normalize(found, omegas)
    minimal = minimal_components(normalized.orders)
    filtered = filter_non_minimal(charts, normalized.orders)
    return {
        "normalized": normalized.to_dict(),
        "minimal": [str(W) for W in minimal],
        "filtered": filtered.to_dict(),
        "passed": True,
        "summary": f"{len(minimal)} minimal components, {len(filtered.charts)} charts kept",
    }
