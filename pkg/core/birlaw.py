"""
Strict birational group laws: the three partial maps
m12(a, b) = ab, m13(a, c) = a^-1 c, m23(b, c) = c b^-1 on an affine variety X,
with validators for the defining conditions, plus a checker for rational
factor systems between commutative regular group laws.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from core.errors import DivisionByZeroPoly, EmptyWitness
from core.multipoly import Poly, RatFunc
from core.ratmap import GENERIC, AffineVariety, RationalMap, first_defect, is_dense_open

logger = logging.getLogger("BirLaw")

SLOT_NAMES = ("a", "b", "c")


@dataclass
class CheckReport:
    check: str
    passed: bool = True
    failures: List[Dict] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def fail(self, **details):
        self.passed = False
        self.failures.append(details)

    def merge(self, other: "CheckReport"):
        self.passed = self.passed and other.passed
        self.failures.extend(other.failures)
        self.warnings.extend(other.warnings)
        self.notes.extend(other.notes)

    def to_dict(self) -> Dict:
        return {"check": self.check, "passed": self.passed, "failures": self.failures,
                "warnings": self.warnings, "notes": self.notes}


def default_slots(gens: Sequence[str]) -> Dict[str, Tuple[str, ...]]:
    """Slot a gets x1, y1, ..., slot b x2, y2, ..., slot c x3, y3, ..."""
    slots = {s: tuple(f"{g}{i}" for g in gens) for i, s in enumerate(SLOT_NAMES, start=1)}
    clash = set(gens) & {v for names in slots.values() for v in names}
    if clash:
        raise ValueError(f"default slot names {sorted(clash)} clash with coordinates {tuple(gens)}")
    return slots


def _fiber_label(kind: Optional[str]) -> str:
    return kind or "field"


def _law_fibers(law, report):
    """Fibre laws of `law`; a fibre on which some map is undefined is reported and skipped."""
    for kind, _ in law.variety.fibers():
        try:
            yield kind, law.fiber(kind)
        except DivisionByZeroPoly as e:
            report.fail(fiber=_fiber_label(kind), reason=f"map undefined on this fibre: {e}")


class StrictLaw:
    """
    A strict birational group law on X. The maps are given by coordinate
    functions in slot variables: m12 in (a, b), m13 in (a, c), m23 in (b, c).
    Witnesses default to the product of the coordinate denominators.
    """

    def __init__(self, variety: AffineVariety, m12: Sequence, m13: Sequence, m23: Sequence,
                 h12: Optional[Poly] = None, h13: Optional[Poly] = None, h23: Optional[Poly] = None,
                 slots: Optional[Mapping[str, Sequence[str]]] = None,
                 samples: Sequence[Mapping[str, object]] = (), name: str = "law"):
        self.variety = variety
        self.slots = {s: tuple(v) for s, v in (slots or default_slots(variety.gens)).items()}
        self.name = name
        self.samples = [dict(p) for p in samples]
        self.copies = {s: variety.renamed(dict(zip(variety.gens, self.slots[s])), f"{variety.name}_{s}")
                       for s in SLOT_NAMES}
        self.m12 = RationalMap(self.pair("a", "b"), variety, m12, h12)
        self.m13 = RationalMap(self.pair("a", "c"), variety, m13, h13)
        self.m23 = RationalMap(self.pair("b", "c"), variety, m23, h23)

    def pair(self, s: str, t: str) -> AffineVariety:
        return self.copies[s].product(self.copies[t], f"{self.variety.name}^2[{s}{t}]")

    def triple(self) -> AffineVariety:
        return self.pair("a", "b").product(self.copies["c"], f"{self.variety.name}^3")

    def maps(self) -> Dict[str, RationalMap]:
        return {"m12": self.m12, "m13": self.m13, "m23": self.m23}

    def slot_coords(self, slot: str, ring: AffineVariety) -> List[Poly]:
        return [Poly.gen(v, ring.gens, ring.domain) for v in self.slots[slot]]

    def fiber(self, kind: Optional[str]) -> "StrictLaw":
        if kind is None:
            return self
        X = dict(self.variety.fibers())[kind]
        fibre_maps = {k: m.fiber(kind) for k, m in self.maps().items()}
        samples = [self._sample_to_fiber(p, kind) for p in self.samples]
        return StrictLaw(X, fibre_maps["m12"].coords, fibre_maps["m13"].coords, fibre_maps["m23"].coords,
                         fibre_maps["m12"].witness, fibre_maps["m13"].witness, fibre_maps["m23"].witness,
                         self.slots, samples, f"{self.name}_{kind}")

    def _sample_to_fiber(self, sample, kind):
        d = self.variety.descriptor
        if kind == GENERIC:
            return {k: v.value for k, v in sample.items()}
        return {k: d.residue(v) for k, v in sample.items()}

    def fibers(self) -> List[Tuple[Optional[str], "StrictLaw"]]:
        return [(kind, self.fiber(kind)) for kind, _ in self.variety.fibers()]

    def generic_fiber(self) -> "StrictLaw":
        return self.fibers()[0][1]

    def to_dict(self) -> Dict:
        return {"name": self.name, "variety": self.variety.name,
                "slots": {s: list(v) for s, v in self.slots.items()},
                **{k: m.to_dict() for k, m in self.maps().items()}}


def _graph_identities(law: StrictLaw):
    """(label, ring, lhs coords, rhs coords, witness) for the six graph identities."""
    out = []
    for label, src, inner, outer, args_of, expected in (
        ("m13(a, m12(a,b)) = b", ("a", "b"), "m12", "m13", ("a", None), "b"),
        ("m23(b, m12(a,b)) = a", ("a", "b"), "m12", "m23", ("b", None), "a"),
        ("m12(a, m13(a,c)) = c", ("a", "c"), "m13", "m12", ("a", None), "c"),
        ("m23(m13(a,c), c) = a", ("a", "c"), "m13", "m23", (None, "c"), "a"),
        ("m12(m23(b,c), b) = c", ("b", "c"), "m23", "m12", (None, "b"), "c"),
        ("m13(m23(b,c), c) = b", ("b", "c"), "m23", "m13", (None, "c"), "b"),
    ):
        ring = law.pair(*src)
        maps = law.maps()
        inner_coords, _ = maps[inner].apply(law.slot_coords(src[0], ring) + law.slot_coords(src[1], ring))
        inner_coords = [ring.simplify(r) for r in inner_coords]
        args = []
        for slot in args_of:
            args += inner_coords if slot is None else law.slot_coords(slot, ring)
        lhs, w_outer = maps[outer].apply(args)
        witness = [maps[inner].witness.with_gens(ring.gens), w_outer]
        out.append((label, ring, lhs, law.slot_coords(expected, ring), witness))
    return out


def check_graph_consistency(law: StrictLaw) -> CheckReport:
    """The three maps present one graph W in X^3."""
    report = CheckReport("graph_consistency")
    for kind, fl in _law_fibers(law, report):
        try:
            identities = _graph_identities(fl)
        except (DivisionByZeroPoly, EmptyWitness) as e:
            report.fail(fiber=_fiber_label(kind), identity=None, reason=f"map undefined: {e}")
            continue
        for label, ring, lhs, rhs, witness in identities:
            defect = first_defect(ring, lhs, rhs, witness)
            if defect is not None:
                _, i, nf = defect
                report.fail(fiber=_fiber_label(kind), identity=label, coordinate=i, normal_form=str(nf))
                break
    logger.info(f"graph consistency of {law.name}: {'pass' if report.passed else 'fail'}")
    return report


def check_translation_density(law: StrictLaw) -> CheckReport:
    """Translation slices of the witness opens are dense, generically and at each sample point."""
    report = CheckReport("translation_density")
    report.notes.append("density is checked at a generic point and at the supplied samples only")
    if not law.samples:
        report.warnings.append("no sample points supplied; generic check only")
        logger.warning(f"{law.name}: empty sample list, generic density check only")
    for kind, fl in _law_fibers(law, report):
        X = fl.variety
        label = _fiber_label(kind)
        for name, m in fl.maps().items():
            if m.source.vanishes_identically(m.witness):
                report.fail(fiber=label, map=name, sample=None, reason="witness vanishes on X x X")
        for sample in fl.samples:
            sample_text = {k: str(v) for k, v in sample.items()}
            if not X.contains_point(sample):
                report.fail(fiber=label, map=None, sample=sample_text, reason="sample is not a point of X")
                continue
            for name, m in fl.maps().items():
                first, second = m.source.gens[:len(X.gens)], m.source.gens[len(X.gens):]
                for fixed, free in ((first, second), (second, first)):
                    mapping = {v: sample[g] for v, g in zip(fixed, X.gens)}
                    mapping.update({v: Poly.gen(g, X.gens, X.domain) for v, g in zip(free, X.gens)})
                    h = m.witness.substitute(mapping, X.gens)
                    if not is_dense_open(h, X):
                        slot = "first" if fixed is first else "second"
                        report.fail(fiber=label, map=name, sample=sample_text,
                                    reason=f"slice with the {slot} slot fixed is not dense")
    return report


def check_associativity(law: StrictLaw) -> CheckReport:
    """m12(a, m12(b,c)) = m12(m12(a,b), c) on X^3."""
    report = CheckReport("associativity")
    for kind, fl in _law_fibers(law, report):
        ring = fl.triple()
        a, b, c = (fl.slot_coords(s, ring) for s in SLOT_NAMES)
        try:
            bc, w1 = fl.m12.apply(b + c)
            lhs, w2 = fl.m12.apply(a + [ring.simplify(r) for r in bc])
            ab, w3 = fl.m12.apply(a + b)
            rhs, w4 = fl.m12.apply([ring.simplify(r) for r in ab] + c)
        except (DivisionByZeroPoly, EmptyWitness) as e:
            report.fail(fiber=_fiber_label(kind), reason=f"map undefined: {e}")
            continue
        defect = first_defect(ring, lhs, rhs, [w1, w2, w3, w4])
        if defect is not None:
            _, i, nf = defect
            report.fail(fiber=_fiber_label(kind), coordinate=i, normal_form=str(nf))
    logger.info(f"associativity of {law.name}: {'pass' if report.passed else 'fail'}")
    return report


def check_law(law: StrictLaw) -> List[CheckReport]:
    return [check_graph_consistency(law), check_translation_density(law), check_associativity(law)]


# --- factor systems ---

class RegularGroupLaw:
    """
    A commutative group law given by total maps: add in slots (x, y),
    neg in slot x, and the zero point. Slot z is a third copy for cocycles.
    """

    def __init__(self, variety: AffineVariety, add: Sequence[Poly], neg: Sequence[Poly],
                 zero: Sequence[object], slots: Optional[Mapping[str, Sequence[str]]] = None):
        self.variety = variety
        gens = variety.gens
        if slots is None:
            slots = {s: tuple(f"{g}{s}" for g in gens) for s in ("x", "y", "z")}
            clash = set(gens) & {v for names in slots.values() for v in names}
            if clash:
                raise ValueError(f"default slot names {sorted(clash)} clash with coordinates {tuple(gens)}")
        self.slots = {s: tuple(v) for s, v in slots.items()}
        self.copies = {s: variety.renamed(dict(zip(gens, v)), f"{variety.name}_{s}") for s, v in self.slots.items()}
        xy = self.copies["x"].product(self.copies["y"])
        self.add_map = RationalMap(xy, variety, add)
        self.neg_map = RationalMap(self.copies["x"], variety, neg)
        self.zero = list(zero)

    def pair(self) -> AffineVariety:
        return self.copies["x"].product(self.copies["y"], f"{self.variety.name}^2")

    def triple(self) -> AffineVariety:
        return self.pair().product(self.copies["z"], f"{self.variety.name}^3")

    def slot_coords(self, slot: str, ring: AffineVariety) -> List[Poly]:
        return [Poly.gen(v, ring.gens, ring.domain) for v in self.slots[slot]]

    def add(self, p: Sequence, q: Sequence):
        coords, _ = self.add_map.apply(list(p) + list(q))
        return coords

    def neg(self, p: Sequence):
        coords, _ = self.neg_map.apply(list(p))
        return coords

    def sub(self, p: Sequence, q: Sequence):
        return self.add(p, self.neg(q))


def check_factor_system(f: RationalMap, A: RegularGroupLaw, B: RegularGroupLaw,
                        symmetric: bool = False) -> CheckReport:
    """f(y,z) - f(x+y,z) + f(x,y+z) - f(x,y) = 0 in B, and f(x,y) = f(y,x) if requested."""
    report = CheckReport("factor_system")
    ring = A.triple()
    x, y, z = (A.slot_coords(s, ring) for s in ("x", "y", "z"))
    f_yz, w1 = f.apply(y + z)
    f_xy_z, w2 = f.apply(A.add(x, y) + z)
    f_x_yz, w3 = f.apply(x + A.add(y, z))
    f_xy, w4 = f.apply(x + y)
    total = B.add(B.sub(f_yz, f_xy_z), B.sub(f_x_yz, f_xy))
    zero = [RatFunc(Poly.constant(c, ring.gens, ring.domain)) for c in B.zero]
    defect = first_defect(ring, total, zero, [w1, w2, w3, w4])
    if defect is not None:
        report.fail(identity="cocycle", coordinate=defect[1], normal_form=str(defect[2]))
    if symmetric:
        pair = A.pair()
        px, py = A.slot_coords("x", pair), A.slot_coords("y", pair)
        lhs, v1 = f.apply(px + py)
        rhs, v2 = f.apply(py + px)
        defect = first_defect(pair, lhs, rhs, [v1, v2])
        if defect is not None:
            report.fail(identity="symmetry", coordinate=defect[1], normal_form=str(defect[2]))
    return report


def coboundary(g: RationalMap, A: RegularGroupLaw, B: RegularGroupLaw) -> RationalMap:
    """delta g (x, y) = g(x + y) - g(x) - g(y)."""
    pair = A.pair()
    x, y = A.slot_coords("x", pair), A.slot_coords("y", pair)
    g_sum, w1 = g.apply(A.add(x, y))
    g_x, w2 = g.apply(x)
    g_y, w3 = g.apply(y)
    coords = B.sub(g_sum, B.add(g_x, g_y))
    return RationalMap(pair, B.variety, coords, w1 * w2 * w3)

