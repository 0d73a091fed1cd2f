"""
Sparse multivariate polynomials and rational functions over an exact domain.

A polynomial is a mapping exponent-tuple -> nonzero coefficient together
with an ordered tuple of generator names and its coefficient domain.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import grevlex as sympy_grevlex
from sympy.polys.rings import ring as sympy_ring

from core.errors import DivisionByZeroPoly, NotIntegral
from core.exact_arith import Domain, FqtElem, FunctionField, PrimeField, RationalField

Exponent = Tuple[int, ...]


@dataclass(frozen=True)
class MonomialOrder:
    """grevlex, lex, lex with the variables reversed (rlex), or an elimination order for the first `block` variables."""

    name: str
    block: int = 0

    def key(self, exp: Exponent):
        if self.name == "lex":
            return exp
        if self.name == "rlex":
            return tuple(reversed(exp))
        if self.name == "grevlex":
            return (sum(exp), tuple(-x for x in reversed(exp)))
        if self.name == "elim":
            return (sum(exp[:self.block]), sum(exp), tuple(-x for x in reversed(exp)))
        raise ValueError(f"Unknown monomial order '{self.name}'")

    def descending_key(self, exp: Exponent):
        """Key whose ascending order is this order's descending order."""
        if self.name == "lex":
            return tuple(-x for x in exp)
        if self.name == "rlex":
            return tuple(-x for x in reversed(exp))
        if self.name == "grevlex":
            return (-sum(exp), tuple(reversed(exp)))
        if self.name == "elim":
            return (-sum(exp[:self.block]), -sum(exp), tuple(reversed(exp)))
        raise ValueError(f"Unknown monomial order '{self.name}'")


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")
RLEX = MonomialOrder("rlex")


def elimination(block: int) -> MonomialOrder:
    return MonomialOrder("elim", block)


class Poly:
    __slots__ = ("gens", "terms", "domain")

    def __init__(self, gens: Sequence[str], terms: Mapping[Exponent, object], domain: Domain):
        self.gens = tuple(gens)
        self.domain = domain
        self.terms: Dict[Exponent, object] = {e: c for e, c in terms.items() if c}

    # --- constructors ---

    @classmethod
    def zero(cls, gens, domain) -> "Poly":
        return cls(gens, {}, domain)

    @classmethod
    def constant(cls, c, gens, domain) -> "Poly":
        gens = tuple(gens)
        return cls(gens, {(0,) * len(gens): domain.convert(c)}, domain)

    @classmethod
    def gen(cls, name: str, gens, domain) -> "Poly":
        gens = tuple(gens)
        if name not in gens:
            raise ValueError(f"'{name}' is not a generator of {gens}")
        exp = tuple(1 if g == name else 0 for g in gens)
        return cls(gens, {exp: domain.one}, domain)

    @classmethod
    def generators(cls, gens, domain) -> List["Poly"]:
        return [cls.gen(g, gens, domain) for g in gens]

    # --- coercion ---

    def _coerce(self, other) -> Optional["Poly"]:
        if isinstance(other, Poly):
            if other.domain != self.domain:
                raise TypeError(f"Mixed domains {self.domain} and {other.domain}")
            if other.gens != self.gens:
                raise ValueError(f"Mixed generator tuples {self.gens} and {other.gens}")
            return other
        if isinstance(other, RatFunc):
            return None
        try:
            return Poly.constant(other, self.gens, self.domain)
        except TypeError:
            return None

    # --- arithmetic ---

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return Poly(self.gens, terms, self.domain)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.gens, {e: -c for e, c in self.terms.items()}, self.domain)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms: Dict[Exponent, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                terms[e] = terms[e] + c if e in terms else c
        return Poly(self.gens, terms, self.domain)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return RatFunc(Poly.constant(1, self.gens, self.domain), self ** (-n))
        result = Poly.constant(1, self.gens, self.domain)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (Poly, RatFunc)):
            return RatFunc(self) / other
        c = self.domain.convert(other)
        if not c:
            raise DivisionByZeroPoly("division of a polynomial by zero")
        return Poly(self.gens, {e: v / c for e, v in self.terms.items()}, self.domain)

    def __rtruediv__(self, other):
        return RatFunc(Poly.constant(other, self.gens, self.domain), self)

    def scale(self, c) -> "Poly":
        c = self.domain.convert(c)
        return Poly(self.gens, {e: v * c for e, v in self.terms.items()}, self.domain)

    def mul_term(self, exp: Exponent, c) -> "Poly":
        terms = {tuple(a + b for a, b in zip(e, exp)): v * c for e, v in self.terms.items()}
        return Poly(self.gens, terms, self.domain)

    # --- comparison ---

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.gens == other.gens and self.domain == other.domain and self.terms == other.terms
        if isinstance(other, RatFunc):
            return other == self
        try:
            other = Poly.constant(other, self.gens, self.domain)
        except (TypeError, NotIntegral):
            return False
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.gens, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # --- inspection ---

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * len(self.gens), self.domain.zero)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.gens.index(name)
        return max((e[i] for e in self.terms), default=0)

    def variables_used(self) -> Tuple[str, ...]:
        return tuple(g for i, g in enumerate(self.gens) if any(e[i] for e in self.terms))

    def leading_term(self, order: MonomialOrder = GREVLEX) -> Tuple[Exponent, object]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Exponent:
        return self.leading_term(order)[0]

    def leading_coefficient(self, order: MonomialOrder = GREVLEX):
        return self.leading_term(order)[1]

    def ordered_terms(self, order: MonomialOrder = GREVLEX) -> List[Tuple[Exponent, object]]:
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def monic(self, order: MonomialOrder = GREVLEX) -> "Poly":
        if not self.terms:
            return self
        return self / self.leading_coefficient(order)

    # --- calculus and evaluation ---

    def diff(self, name: str) -> "Poly":
        i = self.gens.index(name)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                new = e[:i] + (e[i] - 1,) + e[i + 1:]
                terms[new] = e[i] * c
        return Poly(self.gens, terms, self.domain)

    def evaluate(self, point):
        """Value at a point given as a mapping name -> value or a sequence in gens order."""
        if not isinstance(point, Mapping):
            point = dict(zip(self.gens, point))
        values = [point[g] if g in point else None for g in self.gens]
        total = self.domain.zero
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                if k:
                    if v is None:
                        raise ValueError("point does not assign every variable used")
                    term = term * v ** k
            total = total + term
        return total

    def substitute(self, mapping: Mapping[str, object], gens: Optional[Sequence[str]] = None):
        """
        Replace variables by polynomials, rational functions or constants.
        Variables not in `mapping` map to the generator of the same name in
        the target ring. Returns a Poly unless some image is a true fraction.
        """
        target = tuple(gens) if gens is not None else _target_gens(mapping, self.gens)
        images = []
        for name in self.gens:
            img = mapping[name] if name in mapping else Poly.gen(name, target, self.domain)
            if not isinstance(img, (Poly, RatFunc)):
                img = Poly.constant(img, target, self.domain)
            if isinstance(img, RatFunc) and img.is_polynomial():
                img = img.as_poly()
            images.append(img)

        if all(isinstance(img, Poly) for img in images):
            return _evaluate_terms(self, images, target)

        nums = [img.num if isinstance(img, RatFunc) else img for img in images]
        dens = [img.den if isinstance(img, RatFunc) else Poly.constant(1, target, self.domain) for img in images]
        degrees = [self.degree_in(g) for g in self.gens]
        num_pows = _power_tables(nums, degrees)
        den_pows = _power_tables(dens, degrees)
        num = Poly.zero(target, self.domain)
        for e, c in self.terms.items():
            term = Poly.constant(c, target, self.domain)
            for i, k in enumerate(e):
                term = term * num_pows[i][k] * den_pows[i][degrees[i] - k]
            num = num + term
        den = Poly.constant(1, target, self.domain)
        for i, d in enumerate(degrees):
            den = den * den_pows[i][d]
        return RatFunc(num, den)

    # --- change of ring ---

    def with_gens(self, gens: Sequence[str]) -> "Poly":
        """Re-express in another generator tuple containing every variable used."""
        gens = tuple(gens)
        index = {g: i for i, g in enumerate(gens)}
        terms = {}
        for e, c in self.terms.items():
            new = [0] * len(gens)
            for g, k in zip(self.gens, e):
                if k:
                    if g not in index:
                        raise ValueError(f"variable '{g}' is not in {gens}")
                    new[index[g]] = k
            terms[tuple(new)] = c
        return Poly(gens, terms, self.domain)

    def rename(self, mapping: Mapping[str, str]) -> "Poly":
        return Poly(tuple(mapping.get(g, g) for g in self.gens), self.terms, self.domain)

    def map_coefficients(self, fn, domain: Domain) -> "Poly":
        return Poly(self.gens, {e: fn(c) for e, c in self.terms.items()}, domain)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)}, {self.gens})"


def _target_gens(mapping, default):
    for img in mapping.values():
        if isinstance(img, (Poly, RatFunc)):
            return img.gens
    return default


def _power_tables(bases: List[Poly], degrees: List[int]) -> List[List[Poly]]:
    tables = []
    for base, d in zip(bases, degrees):
        row = [Poly.constant(1, base.gens, base.domain)]
        for _ in range(d):
            row.append(row[-1] * base)
        tables.append(row)
    return tables


def _evaluate_terms(f: Poly, images: List[Poly], target) -> Poly:
    degrees = [f.degree_in(g) for g in f.gens]
    pows = _power_tables(images, degrees)
    out = Poly.zero(target, f.domain)
    for e, c in f.terms.items():
        term = Poly.constant(c, target, f.domain)
        for i, k in enumerate(e):
            if k:
                term = term * pows[i][k]
        out = out + term
    return out


# --- printing ---

def _monomial_text(gens, exp) -> str:
    parts = []
    for g, k in zip(gens, exp):
        if k == 1:
            parts.append(g)
        elif k > 1:
            parts.append(f"{g}^{k}")
    return "*".join(parts)


def format_poly(f: Poly) -> str:
    """Canonical text: terms in descending grevlex order, coefficient first."""
    if f.is_zero():
        return "0"
    dom = f.domain
    out = []
    for e, c in f.ordered_terms(GREVLEX):
        negative = dom.is_negative(c)
        magnitude = -c if negative else c
        mono = _monomial_text(f.gens, e)
        if not mono:
            body = dom.text(magnitude)
        elif magnitude == dom.one:
            body = mono
        else:
            body = f"{dom.text(magnitude)}*{mono}"
        if not out:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return "".join(out)


# --- rational functions ---

@functools.lru_cache(maxsize=None)
def _sympy_ring(gens: Tuple[str, ...], domain: Domain):
    if isinstance(domain, RationalField):
        K = sympy.QQ
    elif isinstance(domain, FunctionField):
        K = domain.sympy_field.to_domain()
    else:
        K = sympy.GF(domain.p)
    R = sympy_ring([sympy.Symbol(g) for g in gens], K, sympy_grevlex)[0]
    return R, K


def _to_sympy(f: Poly):
    R, K = _sympy_ring(f.gens, f.domain)
    if isinstance(f.domain, RationalField):
        return R.from_dict({e: K(c.numerator, c.denominator) for e, c in f.terms.items()})
    if isinstance(f.domain, FunctionField):
        return R.from_dict({e: c.frac for e, c in f.terms.items()})
    return R.from_dict({e: K(c.value) for e, c in f.terms.items()})


def _from_sympy(g, gens, domain: Domain) -> Poly:
    if isinstance(domain, RationalField):
        terms = {tuple(e): Fraction(int(c.numerator), int(c.denominator)) for e, c in g.terms()}
    elif isinstance(domain, FunctionField):
        terms = {tuple(e): FqtElem(c, domain.q) for e, c in g.terms()}
    else:
        terms = {tuple(e): domain.convert(int(c)) for e, c in g.terms()}
    return Poly(gens, terms, domain)


def _cancel(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    dom = num.domain
    if isinstance(dom, (RationalField, PrimeField)) and num.gens:
        p, q = _to_sympy(num).cancel(_to_sympy(den))
        return _from_sympy(p, num.gens, dom), _from_sympy(q, num.gens, dom)
    # monomial cancellation only
    shared = None
    for e in list(num.terms) + list(den.terms):
        shared = e if shared is None else tuple(min(a, b) for a, b in zip(shared, e))
    if shared and any(shared):
        num = Poly(num.gens, {tuple(a - b for a, b in zip(e, shared)): c for e, c in num.terms.items()}, dom)
        den = Poly(den.gens, {tuple(a - b for a, b in zip(e, shared)): c for e, c in den.terms.items()}, dom)
    return num, den


class RatFunc:
    """Quotient num/den of polynomials over one domain; den is never zero."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Optional[Poly] = None, normalize: bool = True):
        if den is None:
            den = Poly.constant(1, num.gens, num.domain)
        if den.is_zero():
            raise DivisionByZeroPoly("zero denominator")
        if den.domain != num.domain:
            raise TypeError(f"Mixed domains {num.domain} and {den.domain}")
        if den.gens != num.gens:
            raise ValueError(f"Mixed generator tuples {num.gens} and {den.gens}")
        if normalize:
            num, den = self._normalize(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _normalize(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
        dom = num.domain
        if num.is_zero():
            return num, Poly.constant(1, num.gens, dom)
        if den.is_constant():
            c = den.constant_value()
            if dom.is_field or c.is_unit():
                return num / c, Poly.constant(1, num.gens, dom)
            return num, den
        num, den = _cancel(num, den)
        if dom.is_field:
            lc = den.leading_coefficient(GREVLEX)
            num, den = num / lc, den / lc
        return num, den

    @property
    def gens(self):
        return self.num.gens

    @property
    def domain(self):
        return self.num.domain

    def _coerce(self, other) -> Optional["RatFunc"]:
        if isinstance(other, RatFunc):
            if other.domain != self.domain:
                raise TypeError(f"Mixed domains {self.domain} and {other.domain}")
            if other.gens != self.gens:
                raise ValueError(f"Mixed generator tuples {self.gens} and {other.gens}")
            return other
        if isinstance(other, Poly):
            return RatFunc(self.num._coerce(other))
        try:
            return RatFunc(Poly.constant(other, self.gens, self.domain))
        except TypeError:
            return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, normalize=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.num.is_zero():
            raise DivisionByZeroPoly("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            if self.num.is_zero():
                raise DivisionByZeroPoly("negative power of zero")
            return RatFunc(self.den ** (-n), self.num ** (-n))
        return RatFunc(self.num ** n, self.den ** n)

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return False
        if other is None:
            return False
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant() and (self.domain.is_field or self.den.constant_value().is_unit())

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num / self.den.constant_value()

    def diff(self, name: str) -> "RatFunc":
        return RatFunc(self.num.diff(name) * self.den - self.num * self.den.diff(name), self.den * self.den)

    def evaluate(self, point):
        d = self.den.evaluate(point)
        if not d:
            raise DivisionByZeroPoly("denominator vanishes at the point")
        return self.num.evaluate(point) / d

    def substitute(self, mapping, gens=None) -> "RatFunc":
        target = tuple(gens) if gens is not None else _target_gens(mapping, self.gens)
        num = self.num.substitute(mapping, target)
        den = self.den.substitute(mapping, target)
        return RatFunc.lift(num) / RatFunc.lift(den)

    def with_gens(self, gens) -> "RatFunc":
        return RatFunc(self.num.with_gens(gens), self.den.with_gens(gens), normalize=False)

    def rename(self, mapping) -> "RatFunc":
        return RatFunc(self.num.rename(mapping), self.den.rename(mapping), normalize=False)

    def map_coefficients(self, fn, domain) -> "RatFunc":
        return RatFunc(self.num.map_coefficients(fn, domain), self.den.map_coefficients(fn, domain))

    @staticmethod
    def lift(f) -> "RatFunc":
        return f if isinstance(f, RatFunc) else RatFunc(f)

    def __str__(self):
        if self.den.is_constant() and self.den.constant_value() == self.domain.one:
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"

    __repr__ = __str__


def minors(matrix: Sequence[Sequence[Poly]], size: int) -> List[Poly]:
    """All size x size minors of a polynomial matrix, row and column choices in lexicographic order."""
    first = matrix[0][0]
    R, _ = _sympy_ring(first.gens, first.domain)
    shape = (len(matrix), len(matrix[0]))
    M = DomainMatrix([[_to_sympy(f) for f in row] for row in matrix], shape, R.to_domain())
    out = []
    for rsel in itertools.combinations(range(shape[0]), size):
        for csel in itertools.combinations(range(shape[1]), size):
            out.append(_from_sympy(M.extract(list(rsel), list(csel)).det(), first.gens, first.domain))
    return out


def squarefree(f: Poly) -> bool:
    """
    Sufficient test that f has no repeated factor: f and all of its partial
    derivatives have no common factor. Only decided over Q and F_p; False otherwise.
    """
    if f.is_zero() or not isinstance(f.domain, (RationalField, PrimeField)):
        return False
    if f.is_constant():
        return True
    g = _to_sympy(f)
    for x in f.gens:
        g = g.gcd(_to_sympy(f.diff(x)))
        if g.is_ground:
            return True
    return False
