"""
Invariant 1-forms on curve models over a DVR: orders along special-fibre
components, normalization, filtering of non-minimal components and the
translation-invariance identity on the generic fibre.

A form is stored per chart as pi^shift * c * d(dvar), with the pi-content
of c moved into shift.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import config
from core.birlaw import CheckReport, StrictLaw
from core.errors import IterationCapExceeded, NotRegular, Unsupported, UnsupportedComponent
from core.ideals import divide, lift_poly, ring_divide, special_poly
from core.multipoly import GREVLEX, LEX, RLEX, Poly, RatFunc
from core.ratmap import GENERIC, first_defect, to_fiber
from core.smoothening import BlowUpRecord, DvrModel, _divide_by_pi_power, _pi_content

logger = logging.getLogger("Volume")

DIVISION_ORDERS = (GREVLEX, LEX, RLEX)


@dataclass
class VolumeForm:
    chart: DvrModel
    coefficient: RatFunc
    dvar: str
    shift: int = 0

    def __post_init__(self):
        if self.dvar not in self.chart.gens:
            raise ValueError(f"d{self.dvar} is not a differential of chart {self.chart.model_id}")
        c = RatFunc.lift(self.coefficient)
        if c.gens != self.chart.gens:
            c = c.with_gens(self.chart.gens)
        if c.is_zero():
            raise NotRegular(f"zero form on chart {self.chart.model_id}")
        d = self.chart.descriptor
        a, b = _pi_content(c.num), _pi_content(c.den)
        self.coefficient = RatFunc(_divide_by_pi_power(c.num, a, d), _divide_by_pi_power(c.den, b, d))
        self.shift += a - b

    def scaled(self, m: int) -> "VolumeForm":
        """pi^m times this form."""
        return VolumeForm(self.chart, self.coefficient, self.dvar, self.shift + m)

    def __str__(self):
        scale = "" if self.shift == 0 else f"{self.chart.descriptor.symbol}^{self.shift} * "
        return f"{scale}{self.coefficient} d{self.dvar}"

    def to_dict(self) -> Dict:
        return {"chart": self.chart.model_id, "form": str(self), "shift": self.shift}


@dataclass(frozen=True)
class Component:
    """The special fibre of a chart (q is None) or the component cut out by pi and q."""

    chart_id: str
    q: Optional[Poly] = None
    label: str = ""

    def __str__(self):
        if self.label:
            return self.label
        return f"{self.chart_id}:(pi)" if self.q is None else f"{self.chart_id}:(pi, {self.q})"


@dataclass
class ComponentOrder:
    component: Component
    order: int

    def to_dict(self) -> Dict:
        return {"component": str(self.component), "order": self.order}


def _division_order(f: Poly):
    for order in DIVISION_ORDERS:
        if f.leading_coefficient(order).is_unit():
            return order
    raise UnsupportedComponent(f"no monomial order gives {f} a unit leading coefficient")


def _component_data(f: Poly, q: Optional[Poly], descriptor):
    """(q, s, f1) with f = q*s + pi*f1 and s a unit at the generic point of the component."""
    if q is None:
        return f, Poly.constant(1, f.gens, f.domain), Poly.zero(f.gens, f.domain)
    q = q if q.gens == f.gens else q.with_gens(f.gens)
    qbar = special_poly(q)
    if qbar.is_constant():
        raise UnsupportedComponent(f"{q} does not cut out a component")
    quotients, rem = divide(special_poly(f), [qbar])
    if rem:
        raise UnsupportedComponent(f"{q} is not a component of the special fibre of {f}")
    sbar = quotients[0]
    _, rem = divide(sbar, [qbar])
    if not rem:
        raise UnsupportedComponent(f"component {q} has multiplicity > 1 in the special fibre of {f}")
    s = lift_poly(sbar, descriptor)
    return q, s, _divide_by_pi_power(f - q * s, 1, descriptor)


def component_valuation(A: DvrModel, q: Optional[Poly], N: Poly) -> int:
    """Largest r with N in pi^r times the local ring of A at the generic point of the component."""
    if A.codimension != 1:
        raise Unsupported(f"orders are computed on hypersurface charts only, {A.model_id} has "
                          f"{A.codimension} equations")
    d = A.descriptor
    f = A.equations[0]
    N = N if N.gens == A.gens else N.with_gens(A.gens)
    if A.generic_ideal().radical_member(to_fiber(N, GENERIC)):
        raise NotRegular(f"{N} vanishes on the generic fibre of {A.model_id}")
    order = _division_order(f)
    q, s, f1 = _component_data(f, q, d)
    qbar = special_poly(q)
    count = 0
    while True:
        _, N = ring_divide(N, [f], order)
        Nbar = special_poly(N)
        if Nbar:
            quotients, rem = divide(Nbar, [qbar])
            if rem:
                return count
            h = lift_poly(quotients[0], d)
        else:
            h = Poly.zero(A.gens, A.domain)
        N1 = _divide_by_pi_power(N - q * h, 1, d)
        N = N1 * s - h * f1
        count += 1
        if count > config.MAX_ORDER_STEPS:
            raise IterationCapExceeded(f"order along {q} on {A.model_id} exceeds {config.MAX_ORDER_STEPS}")


def ord_along(A: DvrModel, W: Component, omega: VolumeForm) -> int:
    """Order of omega at the generic point of W; assumes d(dvar) generates the differentials there."""
    if omega.chart.model_id != A.model_id:
        raise ValueError(f"form lives on {omega.chart.model_id}, not on {A.model_id}")
    c = omega.coefficient
    order = omega.shift + component_valuation(A, W.q, c.num) - component_valuation(A, W.q, c.den)
    logger.debug(f"ord along {W} of {omega} = {order}")
    return order


@dataclass
class NormalizedForm:
    forms: List[VolumeForm]
    orders: List[ComponentOrder]
    rho: int

    def to_dict(self) -> Dict:
        return {"rho": self.rho, "forms": [w.to_dict() for w in self.forms],
                "orders": [o.to_dict() for o in self.orders]}


def normalize(orders: Sequence[ComponentOrder], forms: Sequence[VolumeForm] = ()) -> NormalizedForm:
    """Rescale by pi^-rho, rho the minimal order, so that the minimum becomes 0."""
    if not orders:
        raise ValueError("normalize needs at least one component")
    rho = min(o.order for o in orders)
    return NormalizedForm([w.scaled(-rho) for w in forms],
                          [ComponentOrder(o.component, o.order - rho) for o in orders], rho)


def minimal_components(orders: Sequence[ComponentOrder]) -> List[Component]:
    return [o.component for o in orders if o.order == 0]


@dataclass
class FilterResult:
    charts: List[DvrModel]
    dropped: List[str] = field(default_factory=list)
    localized: Dict[str, List[str]] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {"charts": [c.to_dict() for c in self.charts], "dropped": self.dropped,
                "localized": self.localized}


def filter_non_minimal(charts: Sequence[DvrModel], orders: Sequence[ComponentOrder]) -> FilterResult:
    """
    Drop every chart whose listed components are all non-minimal; on the
    others invert the equation of each non-minimal component. Charts with no
    listed component are kept unchanged.
    """
    result = FilterResult([])
    for A in charts:
        mine = [o for o in orders if o.component.chart_id == A.model_id]
        if mine and all(o.order > 0 for o in mine):
            result.dropped.append(A.model_id)
            logger.info(f"dropping chart {A.model_id}: no minimal component")
            continue
        inverted = [o.component for o in mine if o.order > 0 and o.component.q is not None]
        if not inverted:
            result.charts.append(A)
            continue
        loc = A.localization if A.localization is not None else Poly.constant(1, A.gens, A.domain)
        for W in inverted:
            loc = loc * W.q.with_gens(A.gens)
        result.charts.append(DvrModel(A.gens, A.equations, A.descriptor, A.model_id, A.parent, A.center,
                                      A.selector, A.caps, loc, A.irreducible, A.generic_smooth))
        result.localized[A.model_id] = [str(W) for W in inverted]
        logger.info(f"localizing chart {A.model_id} away from {', '.join(str(W) for W in inverted)}")
    return result


def pullback_form(B: BlowUpRecord, omega: VolumeForm) -> VolumeForm:
    """Pull omega back to the pi-chart of a blow-up: x = lift + pi*x, so d(x) gains a factor pi."""
    A = omega.chart
    if A.model_id != B.parent.model_id:
        raise ValueError(f"form lives on {A.model_id}, blow-up is of {B.parent.model_id}")
    chart = B.pi_chart
    d = A.descriptor
    pi = d.uniformizer()
    mapping = {x: Poly.constant(c, A.gens, A.domain) + Poly.gen(x, A.gens, A.domain).scale(pi)
               for x, c in zip(A.gens, B.lift)}
    return VolumeForm(chart, omega.coefficient.substitute(mapping, A.gens), omega.dvar, omega.shift + 1)


def change_dvar(omega: VolumeForm, var: str) -> VolumeForm:
    """Rewrite c*dx as c'*dvar using f_x dx + f_y dvar = 0 on a plane curve chart."""
    if var == omega.dvar:
        return omega
    A = omega.chart
    if A.codimension != 1 or len(A.gens) != 2:
        raise Unsupported("changing the differential needs a plane curve chart")
    f = A.equations[0]
    ratio = RatFunc(-f.diff(var), f.diff(omega.dvar))
    return VolumeForm(A, omega.coefficient * ratio, var, omega.shift)


def weierstrass_form(A: DvrModel, a1=0, a3=0, x: str = "x", y: str = "y") -> VolumeForm:
    """dx / (2y + a1*x + a3) on a Weierstrass chart."""
    X = Poly.gen(x, A.gens, A.domain)
    Y = Poly.gen(y, A.gens, A.domain)
    den = Y.scale(A.domain.convert(2)) + X.scale(A.domain.convert(a1)) + Poly.constant(a3, A.gens, A.domain)
    return VolumeForm(A, RatFunc(Poly.constant(1, A.gens, A.domain), den), x)


def component_orders(A: DvrModel, components: Sequence[Component], omega: VolumeForm) -> List[ComponentOrder]:
    return [ComponentOrder(W, ord_along(A, W, omega)) for W in components]


def _translation_derivative(law: StrictLaw, ring, dvar: str) -> Tuple[RatFunc, Poly]:
    """d(m12(a, x)) / dx on X_b, with the extra witness factor it needs."""
    X = law.variety
    b = dict(zip(X.gens, law.slots["b"]))
    coord = law.m12.coords[X.gens.index(dvar)]
    one = Poly.constant(1, ring.gens, ring.domain)
    if not X.equations:
        return coord.diff(b[dvar]), one
    if len(X.gens) != 2 or len(X.equations) != 1:
        raise Unsupported("invariance is checked on lines and plane curves only")
    other = next(g for g in X.gens if g != dvar)
    f = X.equations[0].rename(b).with_gens(ring.gens)
    slope = RatFunc(-f.diff(b[dvar]), f.diff(b[other]))
    return coord.diff(b[dvar]) + coord.diff(b[other]) * slope, f.diff(b[other])


def check_invariance(law: StrictLaw, coefficient, dvar: Optional[str] = None) -> CheckReport:
    """c(m12(a, x)) * d m12(a, x)/dx = c(x) on X^2, for the form c*d(dvar) on the generic fibre."""
    report = CheckReport("invariance")
    report.notes.append("checked on the generic fibre only")
    if law.variety.is_dvr:
        coefficient = to_fiber(coefficient, GENERIC)
        law = law.generic_fiber()
    X = law.variety
    dvar = dvar or X.gens[0]
    c = RatFunc.lift(coefficient)
    c = c if c.gens == X.gens else c.with_gens(X.gens)
    ring = law.m12.source
    translated = c.substitute(dict(zip(X.gens, law.m12.coords)), ring.gens)
    derivative, extra = _translation_derivative(law, ring, dvar)
    lhs = RatFunc.lift(translated) * derivative
    rhs = c.rename(dict(zip(X.gens, law.slots["b"]))).with_gens(ring.gens)
    witness = law.m12.witness * extra * lhs.den * rhs.den
    defect = first_defect(ring, [lhs], [rhs], witness)
    if defect is not None:
        _, _, nf = defect
        report.fail(form=f"({c}) d{dvar}", pullback=str(lhs), normal_form=str(nf))
        logger.info(f"{law.name}: ({c}) d{dvar} is not translation invariant")
    return report
