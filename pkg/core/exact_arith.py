"""
Exact arithmetic: Q, prime fields, F_q(t), and the two discrete valuation
rings Z_(p) and F_q[t]_(t), with Smith normal form over the latter.

Elements are immutable; every operation is pure.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Sequence, Tuple, Union

import sympy
from sympy.polys.fields import field
from sympy.polys.matrices import DomainMatrix

from core.errors import NotIntegral, RankDeficient

INFINITY = math.inf
Valuation = Union[int, float]

INTEGERS_LOCALIZED = "Z_(p)"
POLYNOMIALS_LOCALIZED = "F_q[t]_(t)"


def int_valuation(n: int, p: int) -> Valuation:
    if n == 0:
        return INFINITY
    return int(sympy.multiplicity(p, abs(n)))


def fraction_valuation(x: Fraction, p: int) -> Valuation:
    if x == 0:
        return INFINITY
    return int_valuation(x.numerator, p) - int_valuation(x.denominator, p)


class FpElem:
    """Element of the prime field F_p."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise TypeError(f"Mixed prime fields F_{self.p} and F_{other.p}")
            return other
        if isinstance(other, int):
            return FpElem(other, self.p)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FpElem(self.value + other.value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FpElem(self.value - other.value, self.p)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FpElem(other.value - self.value, self.p)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FpElem(self.value * other.value, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElem(-self.value, self.p)

    def inverse(self) -> "FpElem":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return FpElem(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return FpElem(pow(self.value, n, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpElem):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return False

    def __hash__(self):
        return hash(self.value)

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return str(self.value)


@functools.lru_cache(maxsize=None)
def _function_field(q: int):
    """F_q(t) as a sympy fraction field, with its generator."""
    return field("t", sympy.GF(q))


class FqtElem:
    """
    Element of the rational function field F_q(t).

    Wraps a sympy fraction over F_q[t]; the denominator is kept monic so that
    equal elements have equal representations.
    """

    __slots__ = ("frac", "q")

    def __init__(self, frac, q: int):
        den = frac.denom
        lc = den.LC
        if lc != 1:
            frac = frac.raw_new(frac.numer.quo_ground(lc), den.monic())
        self.frac = frac
        self.q = q

    @classmethod
    def constant(cls, c: int, q: int) -> "FqtElem":
        K, _ = _function_field(q)
        return cls(K(c), q)

    @classmethod
    def t(cls, q: int) -> "FqtElem":
        _, t = _function_field(q)
        return cls(t, q)

    def _coerce(self, other):
        if isinstance(other, FqtElem):
            if other.q != self.q:
                raise TypeError(f"Mixed function fields over F_{self.q} and F_{other.q}")
            return other.frac
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FqtElem(self.frac + other, self.q)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FqtElem(self.frac - other, self.q)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FqtElem(other - self.frac, self.q)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FqtElem(self.frac * other, self.q)

    __rmul__ = __mul__

    def __neg__(self):
        return FqtElem(-self.frac, self.q)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other:
            raise ZeroDivisionError("division by zero in F_q(t)")
        return FqtElem(self.frac / other, self.q)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.frac:
            raise ZeroDivisionError("division by zero in F_q(t)")
        return FqtElem(other / self.frac, self.q)

    def __pow__(self, n: int):
        if n < 0:
            return (1 / self) ** (-n)
        return FqtElem(self.frac ** n, self.q)

    def valuation(self) -> Valuation:
        """Order of vanishing at t = 0."""
        if not self.frac:
            return INFINITY
        return _order_at_zero(self.frac.numer) - _order_at_zero(self.frac.denom)

    def residue(self) -> int:
        if self.valuation() < 0:
            raise NotIntegral(f"{self} has a pole at t = 0")
        num = int(self.frac.numer.coeff(1)) if self.frac.numer else 0
        den = int(self.frac.denom.coeff(1))
        return num * pow(den, -1, self.q) % self.q

    def __eq__(self, other):
        if isinstance(other, int):
            other = FqtElem.constant(other, self.q)
        return isinstance(other, FqtElem) and self.q == other.q and self.frac == other.frac

    def __hash__(self):
        return hash(self.frac)

    def __bool__(self):
        return bool(self.frac)

    def __str__(self):
        return str(self.frac.as_expr()).replace("**", "^")

    __repr__ = __str__


def _order_at_zero(poly) -> int:
    return min(monom[0] for monom in poly.itermonoms())


# --- coefficient domains ---

class Domain:
    is_field = True
    characteristic = 0

    @property
    def zero(self):
        return self.convert(0)

    @property
    def one(self):
        return self.convert(1)

    def convert(self, value):
        raise NotImplementedError

    def is_negative(self, c) -> bool:
        return False

    def text(self, c) -> str:
        """Printable form of a coefficient, parenthesized when it is not atomic."""
        s = str(c)
        return f"({s})" if (" " in s or "/" in s) else s


@dataclass(frozen=True)
class RationalField(Domain):
    name = "QQ"

    def convert(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        raise TypeError(f"Cannot use {value!r} as a rational coefficient")

    def is_negative(self, c) -> bool:
        return c < 0

    def text(self, c) -> str:
        return str(abs(c))


@dataclass(frozen=True)
class PrimeField(Domain):
    p: int

    @property
    def characteristic(self):
        return self.p

    @property
    def name(self):
        return f"GF({self.p})"

    def convert(self, value):
        if isinstance(value, FpElem):
            if value.p != self.p:
                raise TypeError(f"Mixed prime fields F_{self.p} and F_{value.p}")
            return value
        if isinstance(value, int):
            return FpElem(value, self.p)
        raise TypeError(f"Cannot use {value!r} as an F_{self.p} coefficient")


@dataclass(frozen=True)
class FunctionField(Domain):
    q: int

    @property
    def sympy_field(self):
        return _function_field(self.q)[0]

    @property
    def characteristic(self):
        return self.q

    @property
    def name(self):
        return f"GF({self.q})(t)"

    def convert(self, value):
        if isinstance(value, FqtElem):
            if value.q != self.q:
                raise TypeError(f"Mixed function fields over F_{self.q} and F_{value.q}")
            return value
        if isinstance(value, int):
            return FqtElem.constant(value, self.q)
        raise TypeError(f"Cannot use {value!r} as an F_{self.q}(t) coefficient")


QQ = RationalField()


@dataclass(frozen=True)
class DvrDescriptor:
    """Z localized at p, or F_q[t] localized at t."""

    kind: str
    p: int
    symbol: str = ""

    def __post_init__(self):
        if self.kind not in (INTEGERS_LOCALIZED, POLYNOMIALS_LOCALIZED):
            raise ValueError(f"Unknown DVR kind '{self.kind}'")
        if not sympy.isprime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if not self.symbol:
            object.__setattr__(self, "symbol", "p" if self.kind == INTEGERS_LOCALIZED else "t")

    @classmethod
    def integers(cls, p: int) -> "DvrDescriptor":
        return cls(INTEGERS_LOCALIZED, p)

    @classmethod
    def power_series_germs(cls, q: int) -> "DvrDescriptor":
        return cls(POLYNOMIALS_LOCALIZED, q)

    @property
    def ring(self) -> "DvrDomain":
        return DvrDomain(self)

    @property
    def fraction_field(self) -> Domain:
        return QQ if self.kind == INTEGERS_LOCALIZED else FunctionField(self.p)

    @property
    def residue_field(self) -> PrimeField:
        return PrimeField(self.p)

    def valuation_of(self, value) -> Valuation:
        if self.kind == INTEGERS_LOCALIZED:
            return fraction_valuation(value, self.p)
        return value.valuation()

    def element(self, value) -> "DvrElem":
        if isinstance(value, DvrElem):
            return value
        return DvrElem(value, self)

    def uniformizer(self) -> "DvrElem":
        if self.kind == INTEGERS_LOCALIZED:
            return DvrElem(Fraction(self.p), self)
        return DvrElem(FqtElem.t(self.p), self)

    def uniformizer_value(self):
        """The uniformizer as an element of the fraction field."""
        return self.uniformizer().value

    def residue(self, x: "DvrElem") -> FpElem:
        if self.kind == INTEGERS_LOCALIZED:
            v = x.value
            return FpElem(v.numerator, self.p) / FpElem(v.denominator, self.p)
        return FpElem(x.value.residue(), self.p)

    def lift(self, c: FpElem) -> "DvrElem":
        if self.kind == INTEGERS_LOCALIZED:
            return DvrElem(Fraction(c.value), self)
        return DvrElem(c.value, self)

    def __str__(self):
        if self.kind == INTEGERS_LOCALIZED:
            return f"Z_({self.p})"
        return f"F_{self.p}[t]_(t)"


class DvrElem:
    """Element of a DVR, stored as an exact fraction with cached valuation."""

    __slots__ = ("value", "descriptor", "valuation")

    def __init__(self, value, descriptor: DvrDescriptor):
        value = descriptor.fraction_field.convert(value)
        v = descriptor.valuation_of(value)
        if v < 0:
            raise NotIntegral(f"{value} is not in {descriptor}")
        self.value = value
        self.descriptor = descriptor
        self.valuation = v

    def _coerce(self, other):
        if isinstance(other, DvrElem):
            if other.descriptor != self.descriptor:
                raise TypeError(f"Mixed rings {self.descriptor} and {other.descriptor}")
            return other
        if isinstance(other, int):
            return DvrElem(other, self.descriptor)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return DvrElem(self.value + other.value, self.descriptor)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return DvrElem(self.value - other.value, self.descriptor)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return DvrElem(other.value - self.value, self.descriptor)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return DvrElem(self.value * other.value, self.descriptor)

    __rmul__ = __mul__

    def __neg__(self):
        return DvrElem(-self.value, self.descriptor)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.valuation == INFINITY:
            raise ZeroDivisionError("division by zero in a DVR")
        if self.valuation < other.valuation:
            raise NotIntegral(f"{self} / {other} is not integral")
        return DvrElem(self.value / other.value, self.descriptor)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return DvrElem(1, self.descriptor) / (self ** (-n))
        return DvrElem(self.value ** n, self.descriptor)

    def is_unit(self) -> bool:
        return self.valuation == 0

    def __eq__(self, other):
        if isinstance(other, DvrElem):
            return self.descriptor == other.descriptor and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return False

    def __hash__(self):
        return hash(self.value)

    def __bool__(self):
        return self.valuation != INFINITY

    def __str__(self):
        return str(self.value)

    __repr__ = __str__


@dataclass(frozen=True)
class DvrDomain(Domain):
    descriptor: DvrDescriptor
    is_field = False

    @property
    def characteristic(self):
        return 0 if self.descriptor.kind == INTEGERS_LOCALIZED else self.descriptor.p

    @property
    def name(self):
        return str(self.descriptor)

    def convert(self, value):
        if isinstance(value, DvrElem):
            if value.descriptor != self.descriptor:
                raise TypeError(f"Mixed rings {self.descriptor} and {value.descriptor}")
            return value
        return DvrElem(value, self.descriptor)

    def is_negative(self, c) -> bool:
        return self.descriptor.fraction_field.is_negative(c.value)

    def text(self, c) -> str:
        return self.descriptor.fraction_field.text(c.value)


def valuation(x: DvrElem) -> Valuation:
    """pi-adic valuation; +inf exactly for zero."""
    return x.valuation


# --- matrices over R ---

@dataclass(frozen=True)
class SnfResult:
    valuations: Tuple[int, ...]
    rank: int


def smith_normal_form(matrix: Sequence[Sequence[DvrElem]]) -> SnfResult:
    """
    Elementary divisor valuations of a matrix over a DVR.

    Pivot: entry of minimal valuation in the remaining block, ties broken by
    row-major position. Only unimodular row/column operations are used.
    """
    a: List[List[DvrElem]] = [list(row) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    vals: List[int] = []
    k = 0
    while k < min(rows, cols):
        best = None
        for i in range(k, rows):
            for j in range(k, cols):
                v = a[i][j].valuation
                if v != INFINITY and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        v, i, j = best
        a[k], a[i] = a[i], a[k]
        for row in a:
            row[k], row[j] = row[j], row[k]
        pivot = a[k][k]
        for i in range(k + 1, rows):
            if a[i][k]:
                factor = a[i][k] / pivot
                a[i] = [x - factor * y for x, y in zip(a[i], a[k])]
        zero = pivot - pivot
        for j in range(k + 1, cols):
            # column k is zero below the pivot, so the column operation only touches row k
            a[k][j] = zero
        vals.append(int(v))
        k += 1
    return SnfResult(tuple(vals), len(vals))


def torsion_length(matrix: Sequence[Sequence[DvrElem]], expected_rank: int) -> int:
    """Length of the torsion of R^n / (row space of matrix)."""
    snf = smith_normal_form(matrix)
    if snf.rank < expected_rank:
        raise RankDeficient(f"rank {snf.rank} over the fraction field, expected {expected_rank}")
    return sum(snf.valuations)


def field_rank(matrix: Sequence[Sequence[Any]]) -> int:
    """Rank of a matrix over Q or F_p."""
    rows = [list(row) for row in matrix]
    if not rows or not rows[0]:
        return 0
    sample = next((c for row in rows for c in row if isinstance(c, FpElem)), None)
    if sample is not None:
        K = sympy.GF(sample.p)
        entries = [[K(c.value if isinstance(c, FpElem) else c) for c in row] for row in rows]
    else:
        K = sympy.QQ
        entries = [[K(Fraction(c).numerator, Fraction(c).denominator) for c in row] for row in rows]
    return DomainMatrix(entries, (len(rows), len(rows[0])), K).rank()
