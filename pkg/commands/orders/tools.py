from core.volume import component_orders, normalize


def orders(job, model: str, form, components: list = None):
    """Orders of a form along components of one chart, before and after normalization."""
    chart = job.model(model)
    omega = job.form(form, chart)
    found = component_orders(chart, job.components(chart, components), omega)
    normalized = normalize(found, [omega])
    return {
        "model": model,
        "form": str(omega),
        "orders": [o.to_dict() for o in found],
        "normalized": normalized.to_dict(),
        "passed": True,
        "summary": ", ".join(f"{o.component}: {o.order}" for o in found),
    }
