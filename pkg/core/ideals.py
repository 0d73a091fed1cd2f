"""
Ideals of polynomial rings over a field: reduced Groebner bases by
Buchberger's algorithm, normal forms, membership, radical membership and
saturation. Also division with unit leading coefficients over a DVR and
the generic/special fibre images of polynomials over R.
"""

import heapq
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import config
from core.errors import ResourceCapExceeded, Unsupported
from core.exact_arith import DvrDescriptor
from core.multipoly import GREVLEX, MonomialOrder, Poly, elimination

logger = logging.getLogger("Ideals")

AUX_VAR = "_z"


@dataclass(frozen=True)
class ResourceCaps:
    max_basis: int = field(default_factory=lambda: config.MAX_BASIS)
    max_degree: int = field(default_factory=lambda: config.MAX_DEGREE)


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _quotient(a, b):
    return tuple(x - y for x, y in zip(a, b))


# --- division ---

def _reduce(f: Poly, basis: List[Poly], leads: List[Tuple], order: MonomialOrder,
            track: bool = False):
    """
    Full multivariate division. Returns (quotients or None, remainder).

    Works on one mutable term table; a heap of pending exponents yields the
    leading term, and entries whose term has cancelled are skipped.
    """
    key = order.descending_key
    quotients: Optional[List[Dict]] = [{} for _ in basis] if track else None
    remainder = {}
    terms = dict(f.terms)
    heap = [(key(e), e) for e in terms]
    heapq.heapify(heap)
    queued = set(terms)
    while heap:
        _, e = heapq.heappop(heap)
        queued.discard(e)
        c = terms.pop(e, None)
        if c is None:
            continue
        for i, g in enumerate(basis):
            lead = leads[i]
            if not _divides(lead, e):
                continue
            m = _quotient(e, lead)
            factor = c / g.terms[lead]
            for ge, gc in g.terms.items():
                if ge == lead:
                    continue
                te = tuple(a + b for a, b in zip(ge, m))
                v = terms[te] - gc * factor if te in terms else -(gc * factor)
                if not v:
                    terms.pop(te, None)
                    continue
                terms[te] = v
                if te not in queued:
                    queued.add(te)
                    heapq.heappush(heap, (key(te), te))
            if track:
                q = quotients[i]
                q[m] = q[m] + factor if m in q else factor
            break
        else:
            remainder[e] = c
    if track:
        quotients = [Poly(f.gens, q, f.domain) for q in quotients]
    return quotients, Poly(f.gens, remainder, f.domain)


def divide(f: Poly, divisors: Sequence[Poly], order: MonomialOrder = GREVLEX):
    """Division of f by an ordered list; returns (quotients, remainder)."""
    divisors = [g for g in divisors]
    leads = [g.leading_monomial(order) for g in divisors]
    return _reduce(f, divisors, leads, order, track=True)


def ring_divide(f: Poly, divisors: Sequence[Poly], order: MonomialOrder = GREVLEX):
    """Division over a ring; every divisor needs a unit leading coefficient."""
    for g in divisors:
        lc = g.leading_coefficient(order)
        if not f.domain.is_field and not lc.is_unit():
            raise Unsupported(f"leading coefficient {lc} of {g} is not a unit")
    return divide(f, divisors, order)


# --- Buchberger ---

def _s_poly(f: Poly, g: Poly, lf, lg):
    m = _lcm(lf, lg)
    a = _quotient(m, lf)
    b = _quotient(m, lg)
    ca = f.domain.one / f.terms[lf]
    cb = g.domain.one / g.terms[lg]
    return f.mul_term(a, ca) - g.mul_term(b, cb), (a, ca), (b, cb)


class _Tracker:
    """Keeps each basis element as a combination of the input generators."""

    def __init__(self, inputs: List[Poly]):
        self.inputs = inputs
        self.rows: List[List[Poly]] = []

    def unit_row(self, k):
        gens, dom = self.inputs[0].gens, self.inputs[0].domain
        one, zero = Poly.constant(1, gens, dom), Poly.zero(gens, dom)
        return [one if j == k else zero for j in range(len(self.inputs))]

    def combine(self, terms):
        """terms: list of (row, multiplier Poly)."""
        zero = Poly.zero(self.inputs[0].gens, self.inputs[0].domain)
        out = [zero for _ in self.inputs]
        for row, mult in terms:
            out = [o + r * mult for o, r in zip(out, row)]
        return out


def _check_caps(basis: List[Poly], caps: ResourceCaps):
    if len(basis) > caps.max_basis:
        raise ResourceCapExceeded(f"Groebner basis grew past {caps.max_basis} elements")
    deg = basis[-1].total_degree()
    if deg > caps.max_degree:
        raise ResourceCapExceeded(f"Groebner basis element of degree {deg} exceeds cap {caps.max_degree}")


def buchberger(polys: Sequence[Poly], order: MonomialOrder = GREVLEX,
               caps: Optional[ResourceCaps] = None, track: bool = False):
    """
    Reduced Groebner basis with the normal selection strategy, the coprime
    criterion and the chain criterion. Returns (basis, cofactor rows or None).
    """
    caps = caps or ResourceCaps()
    inputs = [f for f in polys if f]
    if not inputs:
        return [], ([] if track else None)
    gens, dom = inputs[0].gens, inputs[0].domain
    if not dom.is_field:
        raise Unsupported(f"Groebner bases need coefficients in a field, got {dom.name}")

    tracker = _Tracker(inputs) if track else None
    basis: List[Poly] = []
    rows: List[List[Poly]] = []
    for k, f in enumerate(inputs):
        basis.append(f)
        if track:
            rows.append(tracker.unit_row(k))
    leads = [g.leading_monomial(order) for g in basis]

    pending = {(i, j) for j in range(len(basis)) for i in range(j)}
    while pending:
        i, j = min(pending, key=lambda ij: (order.key(_lcm(leads[ij[0]], leads[ij[1]])), ij))
        pending.discard((i, j))
        m = _lcm(leads[i], leads[j])
        if all(a == 0 or b == 0 for a, b in zip(leads[i], leads[j])):
            continue
        if any(k not in (i, j) and _divides(leads[k], m)
               and (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending
               for k in range(len(basis))):
            continue
        s, (a, ca), (b, cb) = _s_poly(basis[i], basis[j], leads[i], leads[j])
        quotients, r = _reduce(s, basis, leads, order, track)
        if not r:
            continue
        if track:
            row = tracker.combine([(rows[i], Poly(gens, {a: ca}, dom)), (rows[j], Poly(gens, {b: -cb}, dom))]
                                  + [(rows[k], -q) for k, q in enumerate(quotients)])
            rows.append(row)
        basis.append(r)
        leads.append(r.leading_monomial(order))
        _check_caps(basis, caps)
        n = len(basis) - 1
        pending |= {(k, n) for k in range(n)}
        logger.debug(f"basis size {len(basis)}, pending pairs {len(pending)}")

    # minimize
    keep = []
    for i, li in enumerate(leads):
        dominated = any(
            _divides(leads[k], li) and (leads[k] != li or k < i)
            for k in range(len(basis)) if k != i
        )
        if not dominated:
            keep.append(i)
    basis = [basis[i] for i in keep]
    leads = [leads[i] for i in keep]
    rows = [rows[i] for i in keep] if track else None

    # interreduce and normalize
    for i in range(len(basis)):
        others = [g for k, g in enumerate(basis) if k != i]
        other_leads = [l for k, l in enumerate(leads) if k != i]
        quotients, r = _reduce(basis[i], others, other_leads, order, track)
        lc = r.terms[leads[i]]
        basis[i] = r / lc
        if track:
            other_rows = [row for k, row in enumerate(rows) if k != i]
            combined = tracker.combine([(rows[i], Poly.constant(1, gens, dom))]
                                       + [(row, -q) for row, q in zip(other_rows, quotients)])
            rows[i] = [c / lc for c in combined]

    ranking = sorted(range(len(basis)), key=lambda k: order.key(leads[k]))
    basis = [basis[k] for k in ranking]
    if track:
        rows = [rows[k] for k in ranking]
    return basis, rows


# --- ideals ---

class Ideal:
    """
    Ideal of k[gens] given by generators. Groebner bases are computed lazily
    per monomial order and cached; the cache is write-once.

    prime=True records the caller's assertion that the ideal is prime. It
    lets radical membership fall back to plain membership.
    """

    def __init__(self, generators: Sequence[Poly], gens: Optional[Sequence[str]] = None,
                 domain=None, caps: Optional[ResourceCaps] = None, prime: bool = False):
        generators = list(generators)
        if generators:
            gens = generators[0].gens if gens is None else tuple(gens)
            domain = generators[0].domain if domain is None else domain
            generators = [g if g.gens == gens else g.with_gens(gens) for g in generators]
        if gens is None or domain is None:
            raise ValueError("An ideal without generators needs gens and domain")
        self.generators = generators
        self.gens = tuple(gens)
        self.domain = domain
        self.caps = caps or ResourceCaps()
        self.prime = prime
        self._bases: Dict[MonomialOrder, List[Poly]] = {}
        self._cofactors: Dict[MonomialOrder, List[List[Poly]]] = {}

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.generators)})"

    def _lift(self, f: Poly) -> Poly:
        return f if f.gens == self.gens else f.with_gens(self.gens)

    def groebner_basis(self, order: MonomialOrder = GREVLEX) -> List[Poly]:
        if order not in self._bases:
            basis, _ = buchberger(self.generators, order, self.caps)
            self._bases[order] = basis
            logger.debug(f"Groebner basis of {len(self.generators)} generators: {len(basis)} elements")
        return self._bases[order]

    def cofactors(self, order: MonomialOrder = GREVLEX) -> List[List[Poly]]:
        """Rows expressing each basis element in the generators."""
        if order not in self._cofactors:
            basis, rows = buchberger(self.generators, order, self.caps, track=True)
            self._bases.setdefault(order, basis)
            self._cofactors[order] = rows
        return self._cofactors[order]

    def normal_form(self, f: Poly, order: MonomialOrder = GREVLEX) -> Poly:
        basis = self.groebner_basis(order)
        f = self._lift(f)
        if not basis:
            return f
        _, r = _reduce(f, basis, [g.leading_monomial(order) for g in basis], order)
        return r

    def member(self, f: Poly) -> bool:
        return self.normal_form(f).is_zero()

    def express(self, f: Poly, order: MonomialOrder = GREVLEX) -> List[Poly]:
        """Coefficients q with f = sum q_i * generators[i]; f must be a member."""
        f = self._lift(f)
        rows = self.cofactors(order)
        basis = self._bases[order]
        quotients, r = _reduce(f, basis, [g.leading_monomial(order) for g in basis], order, track=True)
        if r:
            raise ValueError(f"{f} is not in the ideal")
        zero = Poly.zero(self.gens, self.domain)
        out = [zero for _ in self.generators]
        index = [k for k, g in enumerate(self.generators) if g]
        for q, row in zip(quotients, rows):
            for pos, c in zip(index, row):
                out[pos] = out[pos] + q * c
        return out

    def is_unit(self) -> bool:
        return any(g.is_constant() and g for g in self.groebner_basis())

    def radical_member(self, f: Union[Poly, Sequence[Poly]]) -> bool:
        """f in the radical; a list stands for the product of its factors."""
        if not isinstance(f, Poly):
            factors = [self._lift(g) for g in f]
            if self.prime:
                return any(g.is_zero() or self.member(g) for g in factors)
            f = Poly.constant(1, self.gens, self.domain)
            for g in factors:
                f = f * g
        f = self._lift(f)
        if f.is_zero():
            return True
        if self.prime:
            return self.member(f)
        ext = (AUX_VAR,) + self.gens
        z = Poly.gen(AUX_VAR, ext, self.domain)
        gens = [g.with_gens(ext) for g in self.generators] + [z * f.with_gens(ext) - 1]
        return Ideal(gens, ext, self.domain, self.caps).is_unit()

    def saturate(self, h: Union[Poly, Sequence[Poly]]) -> "Ideal":
        """I : h^infinity, by elimination of an auxiliary variable. A list of factors is taken one at a time."""
        if not isinstance(h, Poly):
            result = self
            for factor in h:
                result = result.saturate(factor)
                if result.is_unit():
                    break
            return result
        h = self._lift(h)
        if h.is_zero():
            return Ideal([Poly.constant(1, self.gens, self.domain)], self.gens, self.domain, self.caps)
        if h.is_constant():
            return self
        if self.prime:
            if self.member(h):
                return Ideal([Poly.constant(1, self.gens, self.domain)], self.gens, self.domain, self.caps)
            return self
        ext = (AUX_VAR,) + self.gens
        z = Poly.gen(AUX_VAR, ext, self.domain)
        gens = [g.with_gens(ext) for g in self.generators] + [z * h.with_gens(ext) - 1]
        basis = Ideal(gens, ext, self.domain, self.caps).groebner_basis(elimination(1))
        kept = [g.with_gens(self.gens) for g in basis if all(e[0] == 0 for e in g.terms)]
        result = Ideal(kept, self.gens, self.domain, self.caps)
        result._bases[GREVLEX] = sorted(kept, key=lambda g: GREVLEX.key(g.leading_monomial(GREVLEX)))
        return result

    def contains(self, other: "Ideal") -> bool:
        return all(self.member(g) for g in other.generators)

    def equals(self, other: "Ideal") -> bool:
        return self.contains(other) and other.contains(self)

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.generators + [self._lift(g) for g in other.generators],
                     self.gens, self.domain, self.caps)

    def with_gens(self, gens: Sequence[str], prime: Optional[bool] = None) -> "Ideal":
        return Ideal([g.with_gens(gens) for g in self.generators], gens, self.domain, self.caps,
                     self.prime if prime is None else prime)

    def is_groebner_check(self, order: MonomialOrder = GREVLEX) -> bool:
        """Every S-polynomial of the cached basis reduces to zero."""
        basis = self.groebner_basis(order)
        leads = [g.leading_monomial(order) for g in basis]
        for j in range(len(basis)):
            for i in range(j):
                s, _, _ = _s_poly(basis[i], basis[j], leads[i], leads[j])
                if _reduce(s, basis, leads, order)[1]:
                    return False
        return all(_reduce(g, basis, leads, order)[1].is_zero() for g in self.generators)


def groebner_basis(polys: Sequence[Poly], order: MonomialOrder = GREVLEX,
                   caps: Optional[ResourceCaps] = None) -> List[Poly]:
    return buchberger(polys, order, caps)[0]


def normal_form(f: Poly, polys: Sequence[Poly], order: MonomialOrder = GREVLEX) -> Poly:
    return Ideal(polys, f.gens, f.domain).normal_form(f, order)


def member(f: Poly, polys: Sequence[Poly]) -> bool:
    return Ideal(polys, f.gens, f.domain).member(f)


def radical_member(f: Poly, polys: Sequence[Poly]) -> bool:
    return Ideal(polys, f.gens, f.domain).radical_member(f)


def saturate(polys: Sequence[Poly], h: Poly) -> Ideal:
    return Ideal(polys, h.gens, h.domain).saturate(h)


# --- fibres of polynomials over a DVR ---

def generic_poly(f: Poly) -> Poly:
    """Image of f in K[x]."""
    return f.map_coefficients(lambda c: c.value, f.domain.descriptor.fraction_field)


def special_poly(f: Poly) -> Poly:
    """Reduction of f modulo pi, in k[x]."""
    d: DvrDescriptor = f.domain.descriptor
    return f.map_coefficients(d.residue, d.residue_field)


def lift_poly(fbar: Poly, descriptor: DvrDescriptor) -> Poly:
    """Canonical lift of a k[x] polynomial to R[x]."""
    return fbar.map_coefficients(descriptor.lift, descriptor.ring)
