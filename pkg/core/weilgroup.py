"""
The group generated by left translations of a strict birational group law:
translation maps, group operations on birational self-maps of X, identity
testing, the delta map, chart transitions and the atlas certificate.

Group elements are compared through their birational representatives
(equal_on_dense); words only record how an element was built.
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import config
from core.birlaw import StrictLaw
from core.errors import DivisionByZeroPoly, LemmaViolation, NonDenseSlice, PointOutsideWitness
from core.multipoly import Poly
from core.ratmap import AffineVariety, BirationalRep, RationalMap, compose, equal_on_dense, is_dense_open

logger = logging.getLogger("WeilGroup")

Point = Tuple[object, ...]
Word = Tuple[Tuple[Point, int], ...]


def point_text(a: Point) -> str:
    if len(a) == 1:
        return str(a[0])
    return "(" + ", ".join(str(c) for c in a) + ")"


def word_text(word: Word) -> str:
    if not word:
        return "e"
    return "*".join(f"phi({point_text(a)})" + ("" if e == 1 else "^-1") for a, e in word)


@dataclass
class GroupElement:
    word: Word
    rep: BirationalRep

    def to_dict(self) -> Dict:
        return {"word": word_text(self.word), **self.rep.to_dict()}


def compose_reps(outer: BirationalRep, inner: BirationalRep) -> BirationalRep:
    """outer after inner."""
    return BirationalRep(compose(outer.forward, inner.forward), compose(inner.backward, outer.backward))


class WeilGroup:
    """Group operations for one strict law over a field (the generic fibre of a law over a DVR)."""

    def __init__(self, law: StrictLaw):
        if law.variety.is_dvr:
            law = law.generic_fiber()
        self.law = law
        self.X: AffineVariety = law.variety

    def _point(self, a) -> Point:
        """A point of X as a tuple; a bare scalar is a point of a one-dimensional X."""
        if not isinstance(a, (tuple, list)):
            a = (a,)
        a = tuple(self.X.domain.convert(c) for c in a)
        if len(a) != len(self.X.gens) or not self.X.contains_point(dict(zip(self.X.gens, a))):
            raise PointOutsideWitness(f"{point_text(a)} is not a point of {self.X.name}")
        return a

    def _slice(self, m: RationalMap, a: Point, fixed_slot: int) -> RationalMap:
        """Restrict a two-slot map to X by fixing one slot at the point a."""
        n = len(self.X.gens)
        slots = (m.source.gens[:n], m.source.gens[n:])
        fixed, free = slots[fixed_slot], slots[1 - fixed_slot]
        mapping = {v: c for v, c in zip(fixed, a)}
        mapping.update({v: Poly.gen(g, self.X.gens, self.X.domain) for v, g in zip(free, self.X.gens)})
        try:
            coords = [c.substitute(mapping, self.X.gens) for c in m.coords]
        except DivisionByZeroPoly as e:
            raise NonDenseSlice(f"translation by {point_text(a)} is undefined: {e}")
        witness = m.witness.substitute(mapping, self.X.gens)
        if not is_dense_open(witness, self.X):
            raise NonDenseSlice(f"witness slice {witness} at {point_text(a)} is not dense in {self.X.name}")
        return RationalMap(self.X, self.X, coords, witness)

    def phi(self, a) -> GroupElement:
        """Left translation x -> ax."""
        a = self._point(a)
        rep = BirationalRep(self._slice(self.law.m12, a, 0), self._slice(self.law.m13, a, 0))
        return GroupElement(((a, 1),), rep)

    def psi(self, a) -> BirationalRep:
        """Right translation x -> xa."""
        a = self._point(a)
        return BirationalRep(self._slice(self.law.m12, a, 1), self._slice(self.law.m23, a, 0))

    def identity(self) -> GroupElement:
        ident = RationalMap.identity(self.X)
        return GroupElement((), BirationalRep(ident, ident))

    def multiply(self, g: GroupElement, h: GroupElement) -> GroupElement:
        """g * h, acting as g after h."""
        return GroupElement(g.word + h.word, compose_reps(g.rep, h.rep))

    def invert(self, g: GroupElement) -> GroupElement:
        return GroupElement(tuple((a, -e) for a, e in reversed(g.word)), g.rep.swap())

    def power_word(self, letters: Sequence[Tuple[Point, int]]) -> GroupElement:
        g = self.identity()
        for a, e in letters:
            step = self.phi(a)
            g = self.multiply(g, step if e == 1 else self.invert(step))
        return g

    def equal(self, g: GroupElement, h: GroupElement) -> bool:
        return equal_on_dense(g.rep.forward, h.rep.forward)

    def is_identity(self, g: GroupElement) -> bool:
        return equal_on_dense(g.rep.forward, RationalMap.identity(self.X))

    def fixed_point_test(self, g: GroupElement, x) -> bool:
        """g(x) = x; a fixed point forces g to be the identity."""
        x = self._point(x)
        value = g.rep.forward.evaluate(dict(zip(self.X.gens, x)))
        fixed = tuple(value) == x
        if fixed and not self.is_identity(g):
            raise LemmaViolation(f"{word_text(g.word)} fixes {point_text(x)} but is not the identity")
        return fixed

    def delta_map(self, a, b) -> GroupElement:
        """phi(a) * phi(b)^-1."""
        return self.multiply(self.phi(a), self.invert(self.phi(b)))

    def chart_transition(self, g1: GroupElement, g2: GroupElement) -> BirationalRep:
        """Rep of g1^-1 g2; its backward map carries chart g1 coordinates to chart g2 coordinates."""
        return self.multiply(self.invert(g1), g2).rep


@dataclass
class Chart:
    index: int
    element: GroupElement
    transitions: Dict[int, BirationalRep] = field(default_factory=dict)

    def transition(self, group: WeilGroup, other: "Chart") -> BirationalRep:
        """Transition to `other`, computed once and cached."""
        if other.index not in self.transitions:
            self.transitions[other.index] = group.chart_transition(self.element, other.element)
        return self.transitions[other.index]


@dataclass
class Atlas:
    law: str
    charts: List[Chart]
    cocycles: List[Dict] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return all(c["passed"] for c in self.cocycles)

    def to_dict(self) -> Dict:
        return {
            "law": self.law,
            "charts": [{"index": c.index, "word": word_text(c.element.word)} for c in self.charts],
            "transitions": [
                {"from": c.index, "to": j, **rep.to_dict()}
                for c in self.charts for j, rep in sorted(c.transitions.items())
            ],
            "cocycles": self.cocycles,
            "verified": self.verified,
        }


def enumerate_words(generators: Sequence[Point], bound: int) -> List[Tuple[Tuple[Point, int], ...]]:
    """Positive words of length 0..bound, shortest first, then lexicographic in generator order."""
    words = []
    for length in range(bound + 1):
        for combo in itertools.product(range(len(generators)), repeat=length):
            words.append(tuple((generators[i], 1) for i in combo))
    return words


def build_atlas(law: StrictLaw, generators: Sequence, bound: Optional[int] = None,
                workers: Optional[int] = None, verify_cocycles: bool = True) -> Atlas:
    """
    Charts indexed by distinct elements among words of length <= bound, all
    pairwise transitions, and the cocycle t(g1,g3) = t(g2,g3) o t(g1,g2)
    checked on every triple.
    """
    group = WeilGroup(law)
    bound = config.WORD_BOUND if bound is None else bound
    workers = workers or config.ATLAS_WORKERS
    points = [group._point(a) for a in generators]
    letters = {a: group.phi(a) for a in points}

    built: Dict[Tuple, GroupElement] = {(): group.identity()}
    charts: List[Chart] = []
    for word in enumerate_words(points, bound):
        if word not in built:
            built[word] = group.multiply(built[word[:-1]], letters[word[-1][0]])
        g = built[word]
        if any(group.equal(g, c.element) for c in charts):
            continue
        charts.append(Chart(len(charts), g))
    logger.info(f"atlas for {law.name}: {len(charts)} charts from {len(built)} words")

    pairs = [(c1, c2) for c1 in charts for c2 in charts]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(lambda p: p[0].transition(group, p[1]), pairs))

    atlas = Atlas(law.name, charts)
    if verify_cocycles:
        triples = list(itertools.product(charts, repeat=3))

        def cocycle(t):
            c1, c2, c3 = t
            direct = c1.transition(group, c3).forward
            chained = compose(c1.transition(group, c2).forward, c2.transition(group, c3).forward)
            return {"triple": [c1.index, c2.index, c3.index], "passed": equal_on_dense(direct, chained)}

        with ThreadPoolExecutor(max_workers=workers) as pool:
            atlas.cocycles = list(pool.map(cocycle, triples))
        logger.info(f"cocycle checks: {sum(c['passed'] for c in atlas.cocycles)}/{len(atlas.cocycles)} passed")
    return atlas
