"""
Smoothening of affine models over a DVR along finite sets of R-sections:
the defect delta, the canonical partition, blow-ups at k-rational points
of the special fibre, section lifting and the smoothening loop.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from core.errors import (InvalidSection, IterationCapExceeded, LemmaViolation, NotOnSpecialFiber,
                         NotThroughCenter, RankDeficient)
from core.exact_arith import DvrDescriptor, DvrElem, FpElem, field_rank, torsion_length
from core.ideals import Ideal, ResourceCaps, generic_poly, special_poly
from core.multipoly import Poly, minors
from core.ratmap import AffineVariety

logger = logging.getLogger("Smoothening")

EXCEPTIONAL_BASE = "e"


class DvrModel:
    """An affine chart Spec R[x]/(f_1..f_c) with smooth generic fibre."""

    def __init__(self, gens: Sequence[str], equations: Sequence[Poly], descriptor: DvrDescriptor,
                 model_id: str = "A", parent: Optional[str] = None, center: Optional[Tuple] = None,
                 selector: Optional[str] = None, caps: Optional[ResourceCaps] = None,
                 localization: Optional[Poly] = None, irreducible: bool = False,
                 generic_smooth: bool = False):
        self.gens = tuple(gens)
        self.descriptor = descriptor
        self.domain = descriptor.ring
        self.equations = [f if f.gens == self.gens else f.with_gens(self.gens) for f in equations]
        for f in self.equations:
            if f.domain != self.domain:
                raise TypeError(f"model equation {f} is not over {descriptor}")
        self.model_id = model_id
        self.parent = parent
        self.center = center
        self.selector = selector
        self.caps = caps or ResourceCaps()
        self.localization = localization
        self.irreducible = irreducible
        self._generic: Optional[Ideal] = None
        self._generic_smooth = generic_smooth
        self._special: Optional[Ideal] = None

    def __repr__(self):
        return f"DvrModel({self.model_id}: {', '.join(str(f) for f in self.equations)})"

    @property
    def generic_smooth(self) -> bool:
        return self._generic_smooth

    @property
    def codimension(self) -> int:
        return len(self.equations)

    @property
    def relative_dimension(self) -> int:
        return len(self.gens) - len(self.equations)

    def jacobian(self) -> List[List[Poly]]:
        return [[f.diff(x) for x in self.gens] for f in self.equations]

    def jacobian_at(self, point: Sequence[DvrElem]) -> List[List[DvrElem]]:
        values = dict(zip(self.gens, point))
        return [[entry.evaluate(values) for entry in row] for row in self.jacobian()]

    def generic_ideal(self) -> Ideal:
        if self._generic is None:
            self._generic = Ideal([generic_poly(f) for f in self.equations], self.gens,
                                  self.descriptor.fraction_field, self.caps,
                                  prime=self.irreducible and self._generic_smooth)
        return self._generic

    def special_ideal(self) -> Ideal:
        if self._special is None:
            self._special = Ideal([special_poly(f) for f in self.equations], self.gens,
                                  self.descriptor.residue_field, self.caps)
        return self._special

    def check_generic_rank(self) -> None:
        """Some maximal minor of the Jacobian is nonzero on the generic fibre."""
        c = self.codimension
        if c > 0:
            jac = [[generic_poly(entry) for entry in row] for row in self.jacobian()]
            ideal = Ideal([generic_poly(f) for f in self.equations], self.gens, self.descriptor.fraction_field,
                          self.caps)
            if all(ideal.radical_member(m) for m in minors(jac, c)):
                raise RankDeficient(f"generic fibre of {self.model_id} is singular everywhere")
        self._generic_smooth = True
        self._generic = None

    def contains_special_point(self, point: Sequence[FpElem]) -> bool:
        values = dict(zip(self.gens, point))
        return all(not special_poly(f).evaluate(values) for f in self.equations)

    def variety(self, name: Optional[str] = None) -> AffineVariety:
        return AffineVariety(self.gens, self.equations, self.domain, self.irreducible, self.localization,
                             name or self.model_id, self.caps, True if self.generic_smooth else None)

    def to_dict(self) -> Dict:
        out = {"id": self.model_id, "vars": list(self.gens), "equations": [str(f) for f in self.equations]}
        if self.parent is not None:
            out.update(parent=self.parent, center=[str(c) for c in self.center], selector=self.selector)
        if self.localization is not None:
            out["localization"] = str(self.localization)
        return out


class Section:
    """An R-point of a model: every equation vanishes exactly."""

    def __init__(self, model: DvrModel, coords: Sequence, name: str = "a"):
        self.model = model
        self.coords = tuple(model.descriptor.element(c) for c in coords)
        self.name = name
        if len(self.coords) != len(model.gens):
            raise InvalidSection(f"section {name} has {len(self.coords)} coordinates, "
                                 f"model {model.model_id} has {len(model.gens)}")
        values = dict(zip(model.gens, self.coords))
        for f in model.equations:
            if f.evaluate(values):
                raise InvalidSection(f"section {name} does not satisfy {f} on {model.model_id}")

    def specialization(self) -> Tuple[FpElem, ...]:
        return tuple(self.model.descriptor.residue(c) for c in self.coords)

    def __repr__(self):
        return f"Section({self.name} = ({', '.join(str(c) for c in self.coords)}) on {self.model.model_id})"

    def to_dict(self) -> Dict:
        return {"name": self.name, "model": self.model.model_id, "coords": [str(c) for c in self.coords]}


def delta(A: DvrModel, a: Section) -> int:
    """Length of the torsion of the pulled-back differentials along a."""
    return torsion_length(A.jacobian_at(a.coords), A.codimension)


def is_smooth_at(A: DvrModel, a: Section) -> bool:
    """Jacobian at a has full rank modulo pi; cross-checked against delta."""
    d = A.descriptor
    reduced = [[d.residue(x) for x in row] for row in A.jacobian_at(a.coords)]
    smooth = field_rank(reduced) == A.codimension
    try:
        defect = delta(A, a)
    except RankDeficient:
        defect = None
    if smooth != (defect == 0):
        raise LemmaViolation(f"smoothness of {A.model_id} at {a.name} disagrees with delta = {defect}")
    return smooth


def _center_key(point: Sequence[FpElem]):
    return tuple(c.value for c in point)


@dataclass
class CanonicalPartition:
    parts: List[List[Section]]
    centers: List[List[Tuple[FpElem, ...]]]

    @property
    def length(self) -> int:
        return len(self.parts)


def _smooth_locus_contains(centers, point) -> bool:
    # a reduced finite set of rational points is smooth everywhere
    return point in centers


def _differentials_locally_free(model: DvrModel, centers, point) -> bool:
    # on a finite reduced set the restricted sheaf is free at every point
    return point in centers


def canonical_partition(A: DvrModel, E: Sequence[Section]) -> CanonicalPartition:
    remaining = list(E)
    parts, centers = [], []
    while remaining:
        Y = sorted({a.specialization() for a in remaining}, key=_center_key)
        F = [a for a in remaining
             if _smooth_locus_contains(Y, a.specialization()) and _differentials_locally_free(A, Y, a.specialization())]
        if not F:
            break
        parts.append(F)
        centers.append(Y)
        remaining = [a for a in remaining if a not in F]
    return CanonicalPartition(parts, centers)


@dataclass
class BlowUpRecord:
    parent: DvrModel
    center: Tuple[FpElem, ...]
    lift: Tuple[DvrElem, ...]
    charts: List[DvrModel]
    exponents: Dict[str, List[int]]
    substitutions: Dict[str, Dict[str, str]]
    lifted: List[Dict] = field(default_factory=list)

    @property
    def pi_chart(self) -> DvrModel:
        return self.charts[0]

    def to_dict(self) -> Dict:
        return {
            "parent": self.parent.model_id,
            "center": [str(c) for c in self.center],
            "charts": [c.to_dict() for c in self.charts],
            "exponents": self.exponents,
            "substitutions": self.substitutions,
            "lifted": self.lifted,
        }


def _pi_content(f: Poly) -> int:
    vals = [c.valuation for c in f.terms.values()]
    return int(min(vals)) if vals else 0


def _divide_by_pi_power(f: Poly, k: int, descriptor: DvrDescriptor) -> Poly:
    if k == 0:
        return f
    pk = descriptor.uniformizer() ** k
    return Poly(f.gens, {e: c / pk for e, c in f.terms.items()}, f.domain)


def _fresh_name(base: str, taken: Sequence[str]) -> str:
    if base not in taken:
        return base
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def _pi_chart(A: DvrModel, lift, chart_id: str, center) -> Tuple[DvrModel, List[int], Dict[str, str]]:
    d = A.descriptor
    pi = d.uniformizer()
    mapping = {x: Poly.constant(c, A.gens, A.domain) + Poly.gen(x, A.gens, A.domain).scale(pi)
               for x, c in zip(A.gens, lift)}
    equations, exponents = [], []
    for f in A.equations:
        g = f.substitute(mapping, A.gens)
        k = _pi_content(g)
        equations.append(_divide_by_pi_power(g, k, d))
        exponents.append(k)
    chart = DvrModel(A.gens, equations, d, chart_id, A.model_id, center, "pi", A.caps,
                     irreducible=A.irreducible, generic_smooth=A.generic_smooth)
    return chart, exponents, {x: str(mapping[x]) for x in A.gens}


def _coordinate_chart(A: DvrModel, lift, pivot: int, chart_id: str, center):
    d = A.descriptor
    e_name = _fresh_name(EXCEPTIONAL_BASE, A.gens)
    gens = A.gens + (e_name,)
    w = Poly.gen(A.gens[pivot], gens, A.domain)
    e = Poly.gen(e_name, gens, A.domain)
    mapping = {}
    for i, (x, c) in enumerate(zip(A.gens, lift)):
        shift = Poly.constant(c, gens, A.domain)
        mapping[x] = shift + w if i == pivot else shift + w * Poly.gen(x, gens, A.domain)
    pi = d.uniformizer()
    equations, exponents = [], []
    for f in A.equations:
        g = f.with_gens(gens).substitute(mapping, gens)
        # pi = w * e on this chart
        terms: Dict[Tuple[int, ...], DvrElem] = {}
        for exp, coeff in g.terms.items():
            v = int(coeff.valuation)
            unit = coeff / pi ** v
            new = list(exp)
            new[pivot] += v
            new[-1] += v
            new = tuple(new)
            terms[new] = terms[new] + unit if new in terms else unit
        h = Poly(gens, terms, A.domain)
        k = min((exp[pivot] for exp in h.terms), default=0)
        h = Poly(gens, {exp[:pivot] + (exp[pivot] - k,) + exp[pivot + 1:]: c for exp, c in h.terms.items()},
                 A.domain)
        equations.append(h)
        exponents.append(k)
    equations.append(Poly.constant(pi, gens, A.domain) - w * e)
    chart = DvrModel(gens, equations, d, chart_id, A.model_id, center, A.gens[pivot], A.caps,
                     irreducible=A.irreducible, generic_smooth=A.generic_smooth)
    subs = {x: str(mapping[x]) for x in A.gens}
    subs[e_name] = f"{d.symbol} / {A.gens[pivot]}"
    return chart, exponents, subs


def blow_up(A: DvrModel, center: Sequence[FpElem], serial: int = 0) -> BlowUpRecord:
    """Blow-up of (pi, x - c) for a k-rational point c of the special fibre: the pi-chart first, then one chart per coordinate."""
    center = tuple(A.descriptor.residue_field.convert(c) for c in center)
    if len(center) != len(A.gens) or not A.contains_special_point(center):
        raise NotOnSpecialFiber(f"({', '.join(str(c) for c in center)}) is not on the special fibre of {A.model_id}")
    lift = tuple(A.descriptor.lift(c) for c in center)
    prefix = f"{A.model_id}.{serial}"
    charts, exponents, substitutions = [], {}, {}
    chart, exps, subs = _pi_chart(A, lift, f"{prefix}.pi", center)
    charts.append(chart)
    exponents[chart.model_id] = exps
    substitutions[chart.model_id] = subs
    for j, x in enumerate(A.gens):
        chart, exps, subs = _coordinate_chart(A, lift, j, f"{prefix}.{x}", center)
        charts.append(chart)
        exponents[chart.model_id] = exps
        substitutions[chart.model_id] = subs
    logger.info(f"blew up {A.model_id} at ({', '.join(str(c) for c in center)}): pi-chart "
                f"{', '.join(str(f) for f in charts[0].equations)}")
    return BlowUpRecord(A, center, lift, charts, exponents, substitutions)


def lift_section(B: BlowUpRecord, a: Section) -> Section:
    """Lift to the pi-chart: u = (a - c) / pi."""
    if a.specialization() != B.center:
        raise NotThroughCenter(f"section {a.name} does not specialize to the center of the blow-up")
    pi = B.parent.descriptor.uniformizer()
    coords = [(x - c) / pi for x, c in zip(a.coords, B.lift)]
    return Section(B.pi_chart, coords, a.name)


def generic_fiber_preserved(B: BlowUpRecord) -> bool:
    """Each chart's generic fibre is the total transform localized at its exceptional coordinate."""
    d = B.parent.descriptor
    K = d.fraction_field
    for chart in B.charts:
        gens = chart.gens
        lift = [c.value for c in B.lift]
        if chart.selector == "pi":
            w = Poly.constant(d.uniformizer_value(), gens, K)
            mapping = {x: Poly.constant(c, gens, K) + Poly.gen(x, gens, K) * w for x, c in zip(B.parent.gens, lift)}
        else:
            w = Poly.gen(chart.selector, gens, K)
            mapping = {x: Poly.constant(c, gens, K) + (w if x == chart.selector else w * Poly.gen(x, gens, K))
                       for x, c in zip(B.parent.gens, lift)}
        pulled = [generic_poly(f).with_gens(gens).substitute(mapping, gens) for f in B.parent.equations]
        if chart.selector != "pi":
            e = Poly.gen(gens[-1], gens, K)
            pulled.append(Poly.constant(d.uniformizer_value(), gens, K) - w * e)
        total = Ideal(pulled, gens, K, chart.caps).saturate(w)
        strict = Ideal([generic_poly(f) for f in chart.equations], gens, K, chart.caps).saturate(w)
        if not total.equals(strict):
            logger.warning(f"generic fibre of chart {chart.model_id} differs from its parent")
            return False
    return True


def affine_change(A: DvrModel, M: Sequence[Sequence[int]], M_inv: Sequence[Sequence[int]],
                  b: Sequence[int], model_id: Optional[str] = None):
    """
    The model in coordinates y with x = M y + b, and the matching map on
    sections y = M_inv (a - b). M must be invertible over R with inverse M_inv.
    """
    dom = A.domain
    ys = Poly.generators(A.gens, dom)
    mapping = {}
    for i, x in enumerate(A.gens):
        img = Poly.constant(b[i], A.gens, dom)
        for j, y in enumerate(ys):
            if M[i][j]:
                img = img + y.scale(M[i][j])
        mapping[x] = img
    changed = DvrModel(A.gens, [f.substitute(mapping, A.gens) for f in A.equations], A.descriptor,
                       model_id or f"{A.model_id}'", caps=A.caps, irreducible=A.irreducible,
                       generic_smooth=A.generic_smooth)

    def move(a: Section) -> Section:
        shifted = [x - dom.convert(bi) for x, bi in zip(a.coords, b)]
        coords = []
        for row in M_inv:
            total = dom.zero
            for m, s in zip(row, shifted):
                total = total + s * m
            coords.append(total)
        return Section(changed, coords, a.name)

    return changed, move


@dataclass
class SmootheningResult:
    models: Dict[str, DvrModel]
    records: List[BlowUpRecord]
    final_charts: Dict[str, str]
    final_sections: Dict[str, Section]
    traces: Dict[str, List[int]]
    rounds: int

    @property
    def blow_ups(self) -> int:
        return len(self.records)

    def to_dict(self) -> Dict:
        return {
            "rounds": self.rounds,
            "blow_ups": self.blow_ups,
            "lineage": [r.to_dict() for r in self.records],
            "final_charts": self.final_charts,
            "final_sections": {k: s.to_dict() for k, s in sorted(self.final_sections.items())},
            "delta_trace": self.traces,
        }


def smoothen(A: DvrModel, E: Sequence[Section]) -> SmootheningResult:
    """
    Blow up the specializations of singular sections until every section
    lifts to a smooth point. delta must drop with each lift.
    """
    if not A.generic_smooth:
        A.check_generic_rank()
    current: Dict[str, Section] = {a.name: a for a in E}
    models: Dict[str, DvrModel] = {A.model_id: A}
    traces = {a.name: [delta(a.model, a)] for a in E}
    cap = sum(t[0] for t in traces.values()) + len(E)
    records: List[BlowUpRecord] = []
    rounds = 0
    while True:
        defects = {name: delta(a.model, a) for name, a in current.items()}
        singular = sorted(name for name, d in defects.items() if d > 0)
        if not singular:
            break
        rounds += 1
        if rounds > cap:
            raise IterationCapExceeded(f"smoothening did not finish within {cap} rounds")
        by_model: Dict[str, List[Section]] = {}
        for name in singular:
            a = current[name]
            by_model.setdefault(a.model.model_id, []).append(a)
        for model_id in sorted(by_model):
            model = models[model_id]
            partition = canonical_partition(model, by_model[model_id])
            part = partition.parts[-1]
            blown: Dict[Tuple, BlowUpRecord] = {}
            for center in sorted({a.specialization() for a in part}, key=_center_key):
                record = blow_up(model, center, serial=len(records))
                records.append(record)
                blown[center] = record
                for chart in record.charts:
                    models[chart.model_id] = chart
            for a in part:
                record = blown[a.specialization()]
                lifted = lift_section(record, a)
                new_delta = delta(lifted.model, lifted)
                if new_delta >= defects[a.name]:
                    raise LemmaViolation(f"delta of {a.name} did not drop: {defects[a.name]} -> {new_delta}")
                record.lifted.append({"section": a.name, "chart": lifted.model.model_id,
                                      "coords": [str(c) for c in lifted.coords], "delta": new_delta})
                traces[a.name].append(new_delta)
                current[a.name] = lifted
        logger.info(f"round {rounds}: max delta {max(defects.values())}, {len(records)} blow-ups so far")
    return SmootheningResult(models, records, {n: a.model.model_id for n, a in current.items()},
                             current, traces, rounds)
