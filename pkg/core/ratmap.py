"""
Affine varieties, rational maps with principal witness opens, composition,
equality on a dense open and graphs.

Trust assumptions: irreducibility is asserted by the caller and never
verified; separatedness is assumed. An asserted-irreducible product of
asserted-irreducible varieties is taken to be irreducible (geometric
irreducibility is what is asserted). Over a DVR the assertion covers both
fibres. Reducedness is separate: it is asserted, or detected for a single
squarefree equation over Q or F_p and for products of reduced varieties.
Only an irreducible and reduced variety gets a prime ideal.
"""

import logging
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from core.errors import AssertionMissing, DivisionByZeroPoly, EmptyWitness, PointOutsideWitness
from core.exact_arith import DvrDomain, PrimeField, RationalField
from core.ideals import Ideal, ResourceCaps, generic_poly, special_poly
from core.multipoly import Poly, RatFunc, squarefree

logger = logging.getLogger("RatMap")

GENERIC = "generic"
SPECIAL = "special"


def to_fiber(f, kind: Optional[str]):
    """Image of a Poly, RatFunc or list of factors over R in the generic or special fibre."""
    if kind is None:
        return f
    if isinstance(f, (list, tuple)):
        return [to_fiber(g, kind) for g in f]
    convert = generic_poly if kind == GENERIC else special_poly
    if isinstance(f, RatFunc):
        return RatFunc(convert(f.num), convert(f.den))
    return convert(f)


class AffineVariety:
    """
    V(equations) minus V(unit) in affine space with coordinates `gens`,
    over a field or over a DVR (then a two-fibre variety).
    """

    def __init__(self, gens: Sequence[str], equations: Sequence[Poly], domain,
                 irreducible: bool = False, unit: Optional[Poly] = None, name: str = "X",
                 caps: Optional[ResourceCaps] = None, reduced: Optional[bool] = None):
        self.gens = tuple(gens)
        self.domain = domain
        self.equations = [f if f.gens == self.gens else f.with_gens(self.gens) for f in equations]
        self.irreducible = irreducible
        self._reduced = reduced
        self.unit = unit.with_gens(self.gens) if unit is not None else None
        self.name = name
        self.caps = caps or ResourceCaps()
        self._ideal: Optional[Ideal] = None
        self._fibers = None

    def __repr__(self):
        eqs = ", ".join(str(f) for f in self.equations)
        return f"AffineVariety({self.name}: V({eqs}) in {self.gens})"

    @property
    def is_dvr(self) -> bool:
        return isinstance(self.domain, DvrDomain)

    @property
    def descriptor(self):
        return self.domain.descriptor if self.is_dvr else None

    def unit_poly(self) -> Poly:
        if self.unit is None:
            return Poly.constant(1, self.gens, self.domain)
        return self.unit

    def coordinate(self, name: str) -> Poly:
        return Poly.gen(name, self.gens, self.domain)

    def coordinates(self) -> List[Poly]:
        return Poly.generators(self.gens, self.domain)

    @property
    def reduced(self) -> bool:
        """The ideal of the equations is radical. Over a DVR this describes the generic fibre."""
        if self._reduced is None:
            self._reduced = self._detect_reduced()
        return self._reduced

    def _detect_reduced(self) -> bool:
        if self.is_dvr or not isinstance(self.domain, (RationalField, PrimeField)):
            return False
        if not self.equations:
            return True
        return len(self.equations) == 1 and squarefree(self.equations[0])

    @property
    def ideal(self) -> Ideal:
        if self.is_dvr:
            raise TypeError("a variety over a DVR has one ideal per fibre; use fibers()")
        if self._ideal is None:
            self._ideal = Ideal(self.equations, self.gens, self.domain, self.caps,
                                prime=self.irreducible and self.reduced)
        return self._ideal

    def fibers(self) -> List[Tuple[Optional[str], "AffineVariety"]]:
        """[(None, self)] over a field; generic and special fibre over a DVR."""
        if not self.is_dvr:
            return [(None, self)]
        if self._fibers is None:
            self._fibers = [
                (kind, AffineVariety(
                    self.gens, [to_fiber(f, kind) for f in self.equations],
                    self.descriptor.fraction_field if kind == GENERIC else self.descriptor.residue_field,
                    self.irreducible, to_fiber(self.unit, kind) if self.unit is not None else None,
                    f"{self.name}_{kind}", self.caps, self._reduced if kind == GENERIC else None))
                for kind in (GENERIC, SPECIAL)
            ]
        return self._fibers

    def generic_fiber(self) -> "AffineVariety":
        return self.fibers()[0][1]

    def contains_point(self, point: Mapping[str, object]) -> bool:
        if any(f.evaluate(point) for f in self.equations):
            return False
        return self.unit is None or bool(self.unit.evaluate(point))

    def renamed(self, mapping: Mapping[str, str], name: Optional[str] = None) -> "AffineVariety":
        return AffineVariety(
            [mapping.get(g, g) for g in self.gens], [f.rename(mapping) for f in self.equations],
            self.domain, self.irreducible, self.unit.rename(mapping) if self.unit is not None else None,
            name or self.name, self.caps, self._reduced)

    def product(self, other: "AffineVariety", name: Optional[str] = None) -> "AffineVariety":
        if set(self.gens) & set(other.gens):
            raise ValueError(f"product needs disjoint coordinates, got {self.gens} and {other.gens}")
        if self.domain != other.domain:
            raise TypeError(f"Mixed domains {self.domain} and {other.domain}")
        gens = self.gens + other.gens
        unit = self.unit_poly().with_gens(gens) * other.unit_poly().with_gens(gens)
        return AffineVariety(
            gens, [f.with_gens(gens) for f in self.equations + other.equations], self.domain,
            self.irreducible and other.irreducible, None if unit.is_constant() else unit,
            name or f"{self.name}x{other.name}", self.caps, self._product_reduced(other))

    def _product_reduced(self, other: "AffineVariety") -> Optional[bool]:
        # over a perfect field a product of reduced varieties is reduced
        if self.is_dvr:
            if not isinstance(self.descriptor.fraction_field, RationalField):
                return None
            return True if self.generic_fiber().reduced and other.generic_fiber().reduced else None
        if isinstance(self.domain, (RationalField, PrimeField)) and self.reduced and other.reduced:
            return True
        return None

    def localized_ideal(self, witness: Union[Poly, Sequence[Poly]]) -> Ideal:
        """I saturated by witness * unit: functions on the open {witness != 0}. A list is a product of factors."""
        return self.ideal.saturate(_factors(witness) + [self.unit_poly()])

    def simplify(self, r: RatFunc) -> RatFunc:
        """Same function on X with numerator and denominator reduced modulo I."""
        if self.is_dvr or not self.equations:
            return r
        den = self.ideal.normal_form(r.den)
        if den.is_zero():
            raise EmptyWitness(f"denominator {r.den} vanishes on {self.name}")
        return RatFunc(self.ideal.normal_form(r.num), den)

    def vanishes_identically(self, h: Union[Poly, Sequence[Poly]]) -> bool:
        """h is zero on every point of the (field) variety. A list is a product of factors."""
        return self.ideal.radical_member(_factors(h) + [self.unit_poly()])

    def to_dict(self) -> Dict:
        out = {"name": self.name, "vars": list(self.gens),
               "equations": [str(f) for f in self.equations], "irreducible": self.irreducible}
        if self.unit is not None:
            out["open"] = str(self.unit)
        return out


def _factors(h) -> List[Poly]:
    return [h] if isinstance(h, Poly) else list(h)


def is_dense_open(h: Poly, X: AffineVariety) -> bool:
    """{h != 0} is dense in X; over a DVR, in both fibres."""
    if not X.irreducible:
        raise AssertionMissing(f"density on {X.name} needs an irreducibility assertion")
    return all(not fib.vanishes_identically(to_fiber(h, kind)) for kind, fib in X.fibers())


def distinct_denominators(coords: Sequence[RatFunc]) -> List[Poly]:
    dens: List[Poly] = []
    for r in coords:
        if not r.den.is_constant() and all(r.den != d for d in dens):
            dens.append(r.den)
    return dens


def product_of(polys: Sequence[Poly], gens, domain) -> Poly:
    out = Poly.constant(1, gens, domain)
    for f in polys:
        out = out * f
    return out


class RationalMap:
    """
    A representative of a rational map source -> target: coordinate functions
    defined on the principal open {witness != 0} of the source.
    """

    def __init__(self, source: AffineVariety, target: AffineVariety,
                 coords: Sequence[Union[Poly, RatFunc]], witness: Optional[Poly] = None):
        if len(coords) != len(target.gens):
            raise ValueError(f"{len(coords)} coordinates for a target with {len(target.gens)} variables")
        self.source = source
        self.target = target
        self.coords = [RatFunc.lift(c if c.gens == source.gens else c.with_gens(source.gens)) for c in coords]
        if witness is None:
            witness = product_of(distinct_denominators(self.coords), source.gens, source.domain)
        self.witness = witness if witness.gens == source.gens else witness.with_gens(source.gens)

    def __repr__(self):
        return f"RationalMap({self.source.name} -> {self.target.name}: {self.coords}, witness {self.witness})"

    @classmethod
    def identity(cls, X: AffineVariety) -> "RationalMap":
        return cls(X, X, X.coordinates(), Poly.constant(1, X.gens, X.domain))

    def apply(self, args: Sequence[Union[Poly, RatFunc]]):
        """
        Pull the map back along args (one RatFunc per source variable).
        Returns the pulled-back coordinates and the numerator of the
        pulled-back witness.
        """
        mapping = dict(zip(self.source.gens, args))
        target_gens = args[0].gens if args else self.source.gens
        coords = [RatFunc.lift(c.substitute(mapping, target_gens)) for c in self.coords]
        pulled = RatFunc.lift(self.witness.substitute(mapping, target_gens))
        return coords, pulled.num

    def evaluate(self, point):
        if not isinstance(point, Mapping):
            point = dict(zip(self.source.gens, point))
        if not self.source.contains_point(point):
            raise PointOutsideWitness(f"{point} is not a point of {self.source.name}")
        if not self.witness.evaluate(point):
            raise PointOutsideWitness(f"witness {self.witness} vanishes at {point}")
        try:
            return tuple(c.evaluate(point) for c in self.coords)
        except DivisionByZeroPoly as e:
            raise PointOutsideWitness(f"map is not defined at {point}: {e}")

    def fiber(self, kind: Optional[str]) -> "RationalMap":
        if kind is None:
            return self
        src = dict(self.source.fibers())[kind]
        tgt = dict(self.target.fibers())[kind]
        return RationalMap(src, tgt, [to_fiber(c, kind) for c in self.coords], to_fiber(self.witness, kind))

    def fibers(self) -> List[Tuple[Optional[str], "RationalMap"]]:
        return [(kind, self.fiber(kind)) for kind, _ in self.source.fibers()]

    def validate(self) -> List[str]:
        """Problems with this representative, empty when it is well formed."""
        problems = []
        for kind, f in self.fibers():
            label = f" on the {kind} fibre" if kind else ""
            X = f.source
            if X.vanishes_identically(f.witness):
                problems.append(f"witness {f.witness} vanishes on {X.name}{label}")
                continue
            for c in f.coords:
                if c.den.is_constant():
                    continue
                if not Ideal(X.equations + [c.den], X.gens, X.domain, X.caps).radical_member(
                        f.witness * X.unit_poly()):
                    problems.append(f"denominator {c.den} is not controlled by witness {f.witness}{label}")
            local = X.localized_ideal(f.witness)
            coords = f.coords
            mapping = dict(zip(f.target.gens, coords))
            for eq in f.target.equations:
                pulled = RatFunc.lift(eq.substitute(mapping, X.gens))
                nf = local.normal_form(pulled.num)
                if nf:
                    problems.append(f"target equation {eq} pulls back to {nf}{label}")
            if f.target.unit is not None:
                pulled = RatFunc.lift(f.target.unit.substitute(mapping, X.gens))
                if X.vanishes_identically([pulled.num, f.witness]):
                    problems.append(f"image lies outside the open of {f.target.name}{label}")
        return problems

    def to_dict(self) -> Dict:
        return {"source": self.source.name, "target": self.target.name,
                "coords": [str(c) for c in self.coords], "witness": str(self.witness)}


def coordinate_defects(X: AffineVariety, lhs: Sequence[RatFunc], rhs: Sequence[RatFunc],
                       witness: Union[Poly, Sequence[Poly]]) -> List[Poly]:
    """Normal forms of the cross-multiplied differences modulo I saturated by the witness."""
    local = X.localized_ideal(witness)
    out = []
    for a, b in zip(lhs, rhs):
        a, b = RatFunc.lift(a), RatFunc.lift(b)
        out.append(local.normal_form(a.num * b.den - b.num * a.den))
    return out


def first_defect(X: AffineVariety, lhs, rhs, witness: Union[Poly, Sequence[Poly]]) -> Optional[Tuple[Optional[str], int, Poly]]:
    """First nonzero defect over the fibres of X: (fibre, coordinate index, normal form)."""
    for kind, fib in X.fibers():
        defects = coordinate_defects(fib, [to_fiber(a, kind) for a in lhs], [to_fiber(b, kind) for b in rhs],
                                     to_fiber(witness, kind))
        for i, nf in enumerate(defects):
            if nf:
                return kind, i, nf
    return None


def compose(g: RationalMap, f: RationalMap) -> RationalMap:
    """g after f."""
    if tuple(f.target.gens) != tuple(g.source.gens):
        raise ValueError(f"cannot compose: {f.target.name} {f.target.gens} vs {g.source.name} {g.source.gens}")
    coords, pulled = g.apply(f.coords)
    witness = f.witness * pulled
    for kind, fib in f.source.fibers():
        if fib.vanishes_identically(to_fiber([f.witness, pulled], kind)):
            raise EmptyWitness(f"composite of {g.source.name}->{g.target.name} after "
                               f"{f.source.name}->{f.target.name} is nowhere defined")
    X = f.source
    if not X.is_dvr and X.equations:
        coords = [X.simplify(c) for c in coords]
        witness = X.ideal.normal_form(witness)
    return RationalMap(f.source, g.target, coords, witness)


def equal_on_dense(f: RationalMap, g: RationalMap) -> bool:
    if f.source.gens != g.source.gens or len(f.coords) != len(g.coords):
        raise ValueError("equal_on_dense needs maps with the same source and target")
    return first_defect(f.source, f.coords, g.coords, [f.witness, g.witness]) is None


def graph_ideal(f: RationalMap, target_names: Optional[Sequence[str]] = None) -> Ideal:
    """Ideal of the graph in source x target coordinates."""
    X = f.source
    if X.is_dvr:
        f = f.fiber(GENERIC)
        X = f.source
    names = tuple(target_names) if target_names is not None else tuple(f.target.gens)
    if set(names) & set(X.gens):
        raise ValueError(f"target names {names} clash with source coordinates {X.gens}")
    ring = X.gens + names
    gens = [eq.with_gens(ring) for eq in X.equations]
    for name, c in zip(names, f.coords):
        y = Poly.gen(name, ring, X.domain)
        gens.append(y * c.den.with_gens(ring) - c.num.with_gens(ring))
    ideal = Ideal(gens, ring, X.domain, X.caps)
    return ideal.saturate((f.witness * X.unit_poly()).with_gens(ring))


class BirationalRep:
    """A pair of rational maps X -> Y, Y -> X meant to be mutually inverse."""

    def __init__(self, forward: RationalMap, backward: RationalMap):
        self.forward = forward
        self.backward = backward

    def swap(self) -> "BirationalRep":
        return BirationalRep(self.backward, self.forward)

    def validate(self) -> bool:
        there = compose(self.backward, self.forward)
        back = compose(self.forward, self.backward)
        return (equal_on_dense(there, RationalMap.identity(self.forward.source))
                and equal_on_dense(back, RationalMap.identity(self.backward.source)))

    def to_dict(self) -> Dict:
        return {"forward": self.forward.to_dict(), "backward": self.backward.to_dict()}


def improve_representative(b: BirationalRep) -> BirationalRep:
    """
    Replace each witness by the product of the map's own denominators and
    the pullback of the partner's witness, numerator-cleared.
    """
    def improved(f: RationalMap, g: RationalMap) -> RationalMap:
        _, pulled = g.apply(f.coords)
        own = product_of(distinct_denominators(f.coords), f.source.gens, f.source.domain)
        witness = own * pulled
        logger.debug(f"witness {f.witness} -> {witness}")
        return RationalMap(f.source, f.target, f.coords, witness)

    return BirationalRep(improved(b.forward, b.backward), improved(b.backward, b.forward))
