"""
Job files: a JSON document naming a coefficient ring, varieties, laws,
models over a DVR, sections, forms and an ordered command list. Every
polynomial payload is a string in the parser's grammar.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from core.birlaw import StrictLaw, default_slots
from core.errors import JobError, NotIntegral, RankDeficient
from core.exact_arith import QQ, DvrDescriptor, PrimeField
from core.ideals import ResourceCaps
from core.multipoly import Poly, RatFunc
from core.parser import parse, parse_poly, uniformizer_constants
from core.ratmap import AffineVariety
from core.smoothening import DvrModel, Section
from core.volume import Component, VolumeForm, weierstrass_form

logger = logging.getLogger("Job")

RING_KINDS = ("QQ", "GF", "Z_(p)", "F_q[t]_(t)")


def _ring(spec: Dict):
    kind = spec.get("kind", "QQ")
    if kind == "QQ":
        return QQ, None
    if kind == "GF":
        return PrimeField(int(spec["p"])), None
    if kind == "Z_(p)":
        d = DvrDescriptor.integers(int(spec["p"]))
        return d.ring, d
    if kind == "F_q[t]_(t)":
        d = DvrDescriptor.power_series_germs(int(spec["q"]))
        return d.ring, d
    raise JobError(f"Unknown ring kind '{kind}', expected one of {', '.join(RING_KINDS)}")


@dataclass
class CommandSpec:
    id: str
    command: str
    params: Dict[str, Any]
    depends_on: List[str] = field(default_factory=list)


class Job:
    """A loaded job: parsed objects by name plus the command list."""

    def __init__(self, data: Dict, caps: Optional[ResourceCaps] = None, source: str = "<job>",
                 word_bound: Optional[int] = None):
        if not isinstance(data, dict):
            raise JobError("job document must be a JSON object")
        self.data = data
        self.source = source
        self.name = data.get("name", source)
        try:
            self.domain, self.descriptor = _ring(data.get("ring", {}))
        except (KeyError, ValueError) as e:
            raise JobError(f"bad ring block: {e}")
        caps_block = data.get("caps", {})
        self.caps = caps or ResourceCaps(**{k: int(v) for k, v in caps_block.items()})
        self.constants = uniformizer_constants(self.descriptor, self.domain)
        self.word_bound = word_bound if word_bound is not None else data.get("word_bound")

        self.varieties: Dict[str, AffineVariety] = {
            name: self._variety(name, block) for name, block in data.get("varieties", {}).items()}
        self.laws: Dict[str, StrictLaw] = {
            name: self._law(name, block) for name, block in data.get("laws", {}).items()}
        self.models: Dict[str, DvrModel] = {
            name: self._model(name, block) for name, block in data.get("models", {}).items()}
        self.sections: Dict[str, Section] = {
            name: self._section(name, block) for name, block in data.get("sections", {}).items()}
        self.commands = self._commands(data.get("commands", []))
        logger.info(f"loaded job '{self.name}': {len(self.varieties)} varieties, {len(self.laws)} laws, "
                    f"{len(self.models)} models, {len(self.sections)} sections, {len(self.commands)} commands")

    # --- parsing helpers ---

    def poly(self, text: str, gens: Sequence[str], domain=None) -> Poly:
        return parse_poly(str(text), gens, domain or self.domain, self._constants(domain))

    def expression(self, text: str, gens: Sequence[str], domain=None):
        return parse(str(text), gens, domain or self.domain, self._constants(domain))

    def ratfunc(self, text: str, gens: Sequence[str], domain=None) -> RatFunc:
        return RatFunc.lift(self.expression(text, gens, domain))

    def scalar(self, text, domain=None):
        return self.poly(text, (), domain).constant_value()

    def point(self, coords: Sequence, domain=None) -> tuple:
        return tuple(self.scalar(c, domain) for c in coords)

    def _constants(self, domain):
        if domain is None or domain == self.domain:
            return self.constants
        return uniformizer_constants(self.descriptor, domain)

    # --- lookups ---

    def _lookup(self, table: Dict, kind: str, name: str):
        if name not in table:
            raise JobError(f"Unknown {kind} '{name}'")
        return table[name]

    def variety(self, name: str) -> AffineVariety:
        return self._lookup(self.varieties, "variety", name)

    def law(self, name: str) -> StrictLaw:
        return self._lookup(self.laws, "law", name)

    def model(self, name: str) -> DvrModel:
        return self._lookup(self.models, "model", name)

    def section(self, name: str) -> Section:
        return self._lookup(self.sections, "section", name)

    def form(self, spec, chart: DvrModel) -> VolumeForm:
        """A form on `chart` from a name in the forms block or an inline {coefficient, dvar} object."""
        if isinstance(spec, str):
            spec = self._lookup(self.data.get("forms", {}), "form", spec)
        if "weierstrass" in spec:
            w = spec["weierstrass"]
            return weierstrass_form(chart, self.scalar(w.get("a1", 0)), self.scalar(w.get("a3", 0)),
                                    *chart.gens[:2])
        if "coefficient" not in spec:
            raise JobError(f"form {spec} has neither a coefficient nor a weierstrass block")
        return VolumeForm(chart, self.ratfunc(spec["coefficient"], chart.gens), spec.get("dvar", chart.gens[0]),
                          int(spec.get("shift", 0)))

    def components(self, chart: DvrModel, entries: Optional[Sequence] = None) -> List[Component]:
        """Components of a chart: null is the whole special fibre, a string q the component (pi, q)."""
        if entries is None:
            entries = self.data.get("components", {}).get(chart.model_id, [None])
        return [Component(chart.model_id, None if e is None else self.poly(e, chart.gens)) for e in entries]

    # --- blocks ---

    def _variety(self, name: str, block: Dict) -> AffineVariety:
        gens = tuple(block.get("vars", []))
        if not gens:
            raise JobError(f"variety {name} has no variables")
        equations = [self.poly(e, gens) for e in block.get("equations", [])]
        unit = self.poly(block["unit"], gens) if "unit" in block else None
        reduced = block.get("reduced")
        return AffineVariety(gens, equations, self.domain, bool(block.get("irreducible", False)), unit,
                             name, self.caps, None if reduced is None else bool(reduced))

    def _law(self, name: str, block: Dict) -> StrictLaw:
        X = self.variety(block.get("variety", ""))
        slots = block.get("slots")
        try:
            slot_names = {s: tuple(v) for s, v in slots.items()} if slots else default_slots(X.gens)
        except ValueError as e:
            raise JobError(f"law {name}: {e}")
        pair = {"m12": slot_names["a"] + slot_names["b"], "m13": slot_names["a"] + slot_names["c"],
                "m23": slot_names["b"] + slot_names["c"]}
        maps, witnesses = {}, {}
        for key, gens in pair.items():
            if key not in block:
                raise JobError(f"law {name} is missing {key}")
            maps[key] = [self.expression(c, gens) for c in block[key]]
            w = block.get(f"h{key[1:]}")
            witnesses[key] = self.poly(w, gens) if w is not None else None
        samples = [{g: self.scalar(sample[g]) for g in X.gens} for sample in block.get("samples", [])]
        return StrictLaw(X, maps["m12"], maps["m13"], maps["m23"], witnesses["m12"], witnesses["m13"],
                         witnesses["m23"], slot_names, samples, name)

    def _model(self, name: str, block: Dict) -> DvrModel:
        if self.descriptor is None:
            raise JobError(f"model {name} needs a DVR ring (Z_(p) or F_q[t]_(t))")
        gens = tuple(block.get("vars", []))
        equations = [self.poly(e, gens) for e in block.get("equations", [])]
        model = DvrModel(gens, equations, self.descriptor, name, caps=self.caps,
                         irreducible=bool(block.get("irreducible", False)))
        try:
            model.check_generic_rank()
        except RankDeficient as e:
            raise JobError(f"model {name}: {e}")
        return model

    def _section(self, name: str, block: Dict) -> Section:
        model = self.model(block.get("model", ""))
        try:
            return Section(model, self.point(block.get("coords", [])), name)
        except NotIntegral as e:
            raise JobError(f"section {name} is not integral: {e}")

    def _commands(self, entries: List[Dict]) -> List[CommandSpec]:
        out, seen = [], set()
        for i, entry in enumerate(entries):
            if "command" not in entry:
                raise JobError(f"command #{i} has no 'command' field")
            cid = entry.get("id", f"c{i + 1}")
            if cid in seen:
                raise JobError(f"duplicate command id '{cid}'")
            deps = list(entry.get("depends_on", []))
            for d in deps:
                if d not in seen:
                    raise JobError(f"command {cid} depends on unknown or later command '{d}'")
            seen.add(cid)
            params = {k: v for k, v in entry.items() if k not in ("id", "command", "depends_on")}
            out.append(CommandSpec(cid, entry["command"], params, deps))
        return out


def load_job(path: str, caps: Optional[ResourceCaps] = None, word_bound: Optional[int] = None) -> Job:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise JobError(f"{path} is not valid JSON: {e.msg} at line {e.lineno} column {e.colno}")
    except OSError as e:
        raise JobError(f"cannot read {path}: {e}")
    return Job(data, caps, path, word_bound)
