"""Exact coefficient rings.

Laurent polynomials and rational functions in ``s = q^(1/2)``, truncated
Laurent series in hbar over the Gaussian rationals (``q = exp(i*hbar)``, so
``s = exp(i*hbar/2)``), and a couple of number-theoretic helpers.

Rationals are :class:`fractions.Fraction`.  Polynomial gcds are delegated to
FLINT (``python-flint``); everything visible from outside is plain Python.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd
from typing import Iterable, Mapping, NamedTuple

import flint

Rat = Fraction

__all__ = [
    "Rat",
    "GaussRat",
    "SLaurent",
    "RatFuncQ",
    "HbarSeries",
    "Verdict",
    "ratfunc_arith",
    "quantum_integer",
    "substitute_power",
    "expand_hbar",
    "integrality_symmetry",
    "mobius",
    "parse_rat",
    "format_rat",
]


def parse_rat(text) -> Fraction:
    return Fraction(text)


def format_rat(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _fmpq_to_fraction(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


# ---------------------------------------------------------------------------
# Gaussian rationals


@dataclass(frozen=True, slots=True)
class GaussRat:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @classmethod
    def of(cls, re=0, im=0) -> "GaussRat":
        return cls(Fraction(re), Fraction(im))

    def __add__(self, other: "GaussRat") -> "GaussRat":
        other = _as_gauss(other)
        return GaussRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other: "GaussRat") -> "GaussRat":
        other = _as_gauss(other)
        return GaussRat(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussRat":
        return GaussRat(-self.re, -self.im)

    def __mul__(self, other) -> "GaussRat":
        other = _as_gauss(other)
        return GaussRat(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "GaussRat":
        other = _as_gauss(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * GaussRat(other.re, -other.im)
        return GaussRat(num.re / norm, num.im / norm)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_zero(self) -> bool:
        return not self

    def __repr__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        return f"({self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}i)"


def _as_gauss(x) -> GaussRat:
    if isinstance(x, GaussRat):
        return x
    return GaussRat(Fraction(x), Fraction(0))


I_UNIT = GaussRat(Fraction(0), Fraction(1))
_I_POWERS = (
    GaussRat(Fraction(1), Fraction(0)),
    I_UNIT,
    GaussRat(Fraction(-1), Fraction(0)),
    GaussRat(Fraction(0), Fraction(-1)),
)


# ---------------------------------------------------------------------------
# Laurent polynomials in s


class SLaurent:
    """Sparse Laurent polynomial in ``s`` with rational coefficients.

    Keys are integer exponents of ``s = q^(1/2)``, so ``{1: 1}`` is
    ``q^(1/2)``.  Instances are immutable and hashable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, object] | None = None):
        clean = {}
        if terms:
            for k, v in terms.items():
                v = Fraction(v)
                if v:
                    clean[int(k)] = v
        self._terms = clean
        self._hash = None

    @classmethod
    def monomial(cls, k: int, c=1) -> "SLaurent":
        return cls({k: c})

    @classmethod
    def one(cls) -> "SLaurent":
        return cls({0: 1})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def coeff(self, k: int) -> Fraction:
        return self._terms.get(k, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def min_exp(self) -> int:
        return min(self._terms) if self._terms else 0

    def max_exp(self) -> int:
        return max(self._terms) if self._terms else 0

    def __add__(self, other: "SLaurent") -> "SLaurent":
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return SLaurent(out)

    def __neg__(self) -> "SLaurent":
        return SLaurent({k: -v for k, v in self._terms.items()})

    def __sub__(self, other: "SLaurent") -> "SLaurent":
        return self + (-other)

    def __mul__(self, other) -> "SLaurent":
        if not isinstance(other, SLaurent):
            c = Fraction(other)
            return SLaurent({k: c * v for k, v in self._terms.items()})
        out: dict[int, Fraction] = {}
        for k1, v1 in self._terms.items():
            for k2, v2 in other._terms.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + v1 * v2
        return SLaurent(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, SLaurent):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == SLaurent({0: other})._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(sorted(self._terms.items())))
        return self._hash

    def substitute_power(self, l: int) -> "SLaurent":
        return SLaurent({k * l: v for k, v in self._terms.items()})

    def invert_s(self) -> "SLaurent":
        """Image under ``s -> 1/s``."""
        return SLaurent({-k: v for k, v in self._terms.items()})

    def is_symmetric(self) -> bool:
        return self == self.invert_s()

    def has_integer_coeffs(self) -> bool:
        return all(v.denominator == 1 for v in self._terms.values())

    def has_nonnegative_coeffs(self) -> bool:
        return all(v >= 0 for v in self._terms.values())

    def at_one(self) -> Fraction:
        return sum(self._terms.values(), Fraction(0))

    def to_json(self) -> list:
        return [[k, format_rat(v)] for k, v in self.items()]

    @classmethod
    def from_json(cls, data: Iterable) -> "SLaurent":
        return cls({int(k): parse_rat(v) for k, v in data})

    def __repr__(self) -> str:
        return f"SLaurent({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, v in sorted(self._terms.items(), reverse=True):
            if k == 0:
                mono = ""
            elif k == 1:
                mono = "s"
            else:
                mono = f"s^{k}"
            if mono and v == 1:
                parts.append(mono)
            elif mono and v == -1:
                parts.append(f"-{mono}")
            elif mono:
                parts.append(f"{v}*{mono}")
            else:
                parts.append(str(v))
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# Rational functions in s

_X = flint.fmpq_poly([0, 1])
_ONE = flint.fmpq_poly([1])
_ZERO = flint.fmpq_poly([])


def _valuation(p) -> int:
    coeffs = p.coeffs()
    for i, c in enumerate(coeffs):
        if c != 0:
            return i
    return 0


def _laurent_to_poly(f: SLaurent) -> tuple[int, "flint.fmpq_poly"]:
    if f.is_zero():
        return 0, _ZERO
    lo = f.min_exp()
    coeffs = [0] * (f.max_exp() - lo + 1)
    for k, v in f._terms.items():
        coeffs[k - lo] = flint.fmpq(v.numerator, v.denominator)
    return lo, flint.fmpq_poly(coeffs)


def _poly_to_laurent(shift: int, p) -> SLaurent:
    return SLaurent(
        {shift + i: _fmpq_to_fraction(c) for i, c in enumerate(p.coeffs()) if c != 0}
    )


class RatFuncQ:
    """Element of Q(s), stored in canonical reduced form.

    The value is ``s**shift * num(s) / den(s)`` with ``num``, ``den`` coprime
    polynomials, ``num(0) != 0`` (unless zero), ``den(0) != 0`` and ``den``
    integer-primitive with positive leading coefficient.  Canonical form makes
    ``==`` structural.
    """

    __slots__ = ("_shift", "_num", "_den", "_hash")

    def __init__(self, value=0):
        if isinstance(value, RatFuncQ):
            self._shift, self._num, self._den = value._shift, value._num, value._den
        elif isinstance(value, SLaurent):
            shift, num = _laurent_to_poly(value)
            self._set(shift, num, _ONE)
        else:
            v = Fraction(value)
            if v:
                self._shift, self._num, self._den = (
                    0,
                    flint.fmpq_poly([flint.fmpq(v.numerator, v.denominator)]),
                    _ONE,
                )
            else:
                self._shift, self._num, self._den = 0, _ZERO, _ONE
        self._hash = None

    # -- construction -------------------------------------------------------

    @classmethod
    def _raw(cls, shift, num, den) -> "RatFuncQ":
        obj = cls.__new__(cls)
        obj._shift, obj._num, obj._den = shift, num, den
        obj._hash = None
        return obj

    @classmethod
    def _make(cls, shift: int, num, den, reduce: bool = True) -> "RatFuncQ":
        obj = cls.__new__(cls)
        obj._hash = None
        obj._set(shift, num, den, reduce)
        return obj

    def _set(self, shift, num, den, reduce: bool = True) -> None:
        if num.is_zero():
            self._shift, self._num, self._den = 0, _ZERO, _ONE
            return
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce and den.degree() > 0:
            g = num.gcd(den)
            if g.degree() > 0:
                num = num // g
                den = den // g
        vn = _valuation(num)
        if vn:
            num = num.right_shift(vn)
            shift += vn
        vd = _valuation(den)
        if vd:
            den = den.right_shift(vd)
            shift -= vd
        if not den.is_one():
            dn = den.numer()
            content = dn.content()
            if dn.leading_coefficient() < 0:
                content = -content
            # den = content * prim / den.denom()
            scale = flint.fmpq(int(content), int(den.denom()))
            if scale != 1:
                den = den / scale
                num = num / scale
        self._shift, self._num, self._den = shift, num, den

    @classmethod
    def from_parts(cls, num: SLaurent, den: SLaurent) -> "RatFuncQ":
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        sn, pn = _laurent_to_poly(num)
        sd, pd = _laurent_to_poly(den)
        return cls._make(sn - sd, pn, pd)

    @classmethod
    def s_pow(cls, k: int, c=1) -> "RatFuncQ":
        c = Fraction(c)
        if not c:
            return cls(0)
        return cls._raw(k, flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator)]), _ONE)

    @classmethod
    def s_minus_sinv(cls, l: int = 1) -> "RatFuncQ":
        """``s^l - s^-l``."""
        return cls(SLaurent({l: 1, -l: -1}))

    # -- accessors ------------------------------------------------------------

    @property
    def num(self) -> SLaurent:
        return _poly_to_laurent(self._shift, self._num)

    @property
    def den(self) -> SLaurent:
        return _poly_to_laurent(0, self._den)

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def __bool__(self) -> bool:
        return not self._num.is_zero()

    def is_laurent(self) -> bool:
        return self._den.is_one()

    def to_laurent(self) -> SLaurent | None:
        """The Laurent polynomial equal to ``self``, or None if it is not one."""
        if not self._den.is_one():
            return None
        return self.num

    def den_degree(self) -> int:
        return self._den.degree()

    def invert_s(self) -> "RatFuncQ":
        """Image under ``s -> 1/s``."""
        if self.is_zero():
            return self
        dn, dd = self._num.degree(), self._den.degree()
        num = flint.fmpq_poly(list(reversed(self._num.coeffs())))
        den = flint.fmpq_poly(list(reversed(self._den.coeffs())))
        return RatFuncQ._make(-self._shift - dn + dd, num, den, reduce=False)

    def root_power(self, l: int) -> "RatFuncQ":
        """Inverse of :meth:`substitute_power`: ``g`` with ``g(s^l) = self``."""
        if l < 1:
            raise ValueError("substitution power must be positive")
        if l == 1 or self.is_zero():
            return self
        num, den = self.num, self.den
        if any(k % l for k in num.terms) or any(k % l for k in den.terms):
            raise ValueError(f"not a function of s^{l}")
        return RatFuncQ.from_parts(
            SLaurent({k // l: v for k, v in num.terms.items()}),
            SLaurent({k // l: v for k, v in den.terms.items()}),
        )

    def substitute_power(self, l: int) -> "RatFuncQ":
        if l < 1:
            raise ValueError("substitution power must be positive")
        if l == 1 or self.is_zero():
            return self
        xl = _X ** l
        return RatFuncQ._make(self._shift * l, self._num(xl), self._den(xl))

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other) -> "RatFuncQ":
        if not isinstance(other, RatFuncQ):
            other = RatFuncQ(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        e1, e2 = self._shift, other._shift
        e = min(e1, e2)
        a = self._num.left_shift(e1 - e) if e1 > e else self._num
        b = other._num.left_shift(e2 - e) if e2 > e else other._num
        if self._den == other._den:
            return RatFuncQ._make(e, a + b, self._den)
        return RatFuncQ._make(e, a * other._den + b * self._den, self._den * other._den)

    __radd__ = __add__

    def __neg__(self) -> "RatFuncQ":
        return RatFuncQ._raw(self._shift, -self._num, self._den)

    def __sub__(self, other) -> "RatFuncQ":
        if not isinstance(other, RatFuncQ):
            other = RatFuncQ(other)
        return self + (-other)

    def __rsub__(self, other) -> "RatFuncQ":
        return RatFuncQ(other) - self

    def __mul__(self, other) -> "RatFuncQ":
        if not isinstance(other, RatFuncQ):
            c = Fraction(other)
            if not c:
                return RatFuncQ(0)
            return RatFuncQ._raw(
                self._shift, self._num * flint.fmpq(c.numerator, c.denominator), self._den
            )
        if self.is_zero() or other.is_zero():
            return RatFuncQ(0)
        n1, d1, n2, d2 = self._num, self._den, other._num, other._den
        if not d2.is_one():
            g = n1.gcd(d2)
            if g.degree() > 0:
                n1, d2 = n1 // g, d2 // g
        if not d1.is_one():
            g = n2.gcd(d1)
            if g.degree() > 0:
                n2, d1 = n2 // g, d1 // g
        return RatFuncQ._make(self._shift + other._shift, n1 * n2, d1 * d2, reduce=False)

    __rmul__ = __mul__

    def inverse(self) -> "RatFuncQ":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFuncQ._make(-self._shift, self._den, self._num, reduce=False)

    def __truediv__(self, other) -> "RatFuncQ":
        if not isinstance(other, RatFuncQ):
            c = Fraction(other)
            if not c:
                raise ZeroDivisionError("division of rational function by zero")
            return self * (1 / c)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "RatFuncQ":
        return RatFuncQ(other) / self

    def __pow__(self, k: int) -> "RatFuncQ":
        if k < 0:
            return self.inverse() ** (-k)
        result = RatFuncQ(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_s_pow(self, k: int) -> "RatFuncQ":
        if self.is_zero() or k == 0:
            return self
        return RatFuncQ._raw(self._shift + k, self._num, self._den)

    # -- comparison -----------------------------------------------------------

    def _key(self):
        return (
            self._shift,
            tuple(_fmpq_to_fraction(c) for c in self._num.coeffs()),
            tuple(_fmpq_to_fraction(c) for c in self._den.coeffs()),
        )

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, SLaurent)):
            other = RatFuncQ(other)
        if not isinstance(other, RatFuncQ):
            return NotImplemented
        return (
            self._shift == other._shift
            and self._num == other._num
            and self._den == other._den
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> "RatFuncQ":
        return cls.from_parts(SLaurent.from_json(data["num"]), SLaurent.from_json(data["den"]))

    def __repr__(self) -> str:
        return f"RatFuncQ({self})"

    def __str__(self) -> str:
        if self._den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"


def ratfunc_arith(a: RatFuncQ, b: RatFuncQ, op: str) -> RatFuncQ:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def quantum_integer(k: int) -> SLaurent:
    """``[k]_q = (s^k - s^-k)/(s - s^-1)`` as an exact Laurent polynomial."""
    if k < 1:
        raise ValueError("quantum integer needs k >= 1")
    return SLaurent({e: 1 for e in range(-(k - 1), k, 2)})


def signed_quantum_integer(k: int) -> SLaurent:
    """``[k]_q`` extended by ``[0]_q = 0`` and ``[-k]_q = -[k]_q``."""
    if k == 0:
        return SLaurent()
    if k < 0:
        return -quantum_integer(-k)
    return quantum_integer(k)


def substitute_power(f: RatFuncQ, l: int) -> RatFuncQ:
    return f.substitute_power(l)


class Verdict(NamedTuple):
    is_laurent: bool
    integer_coeffs: bool
    symmetric: bool

    def passed(self) -> bool:
        return self.is_laurent and self.integer_coeffs and self.symmetric


def integrality_symmetry(f: RatFuncQ) -> Verdict:
    lp = f.to_laurent()
    if lp is None:
        return Verdict(False, False, False)
    return Verdict(True, lp.has_integer_coeffs(), lp.is_symmetric())


def mobius(l: int) -> int:
    if l < 1:
        raise ValueError("Mobius function needs l >= 1")
    result = 1
    d = 2
    while d * d <= l:
        if l % d == 0:
            l //= d
            if l % d == 0:
                return 0
            result = -result
        d += 1
    if l > 1:
        result = -result
    return result


# ---------------------------------------------------------------------------
# hbar expansions


class HbarSeries:
    """Truncated Laurent series ``sum_{k=valuation}^{truncation} c_k hbar^k``."""

    __slots__ = ("valuation", "coeffs", "truncation")

    def __init__(self, valuation: int, coeffs: list[GaussRat], truncation: int):
        coeffs = [_as_gauss(c) for c in coeffs[: max(truncation - valuation + 1, 0)]]
        # normalize leading zeros away so the valuation is honest
        while coeffs and coeffs[0].is_zero():
            coeffs.pop(0)
            valuation += 1
        if not coeffs:
            valuation = truncation + 1
        self.valuation = valuation
        self.coeffs = coeffs
        self.truncation = truncation

    @classmethod
    def from_power_series(cls, coeffs: list[GaussRat], truncation: int) -> "HbarSeries":
        return cls(0, coeffs, truncation)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> GaussRat:
        if k > self.truncation:
            raise IndexError(f"hbar^{k} is beyond truncation {self.truncation}")
        i = k - self.valuation
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return GaussRat()

    def __mul__(self, other: "HbarSeries") -> "HbarSeries":
        if self.is_zero() or other.is_zero():
            t = min(self.truncation + other.valuation, other.truncation + self.valuation)
            return HbarSeries(0, [], t)
        val = self.valuation + other.valuation
        trunc = min(self.truncation + other.valuation, other.truncation + self.valuation)
        n = trunc - val + 1
        out = [GaussRat() for _ in range(max(n, 0))]
        for i, a in enumerate(self.coeffs):
            if i >= n:
                break
            for j, b in enumerate(other.coeffs):
                if i + j >= n:
                    break
                out[i + j] = out[i + j] + a * b
        return HbarSeries(val, out, trunc)

    def __add__(self, other: "HbarSeries") -> "HbarSeries":
        trunc = min(self.truncation, other.truncation)
        lo = min(self.valuation, other.valuation)
        out = [self.coeff(k) + other.coeff(k) for k in range(lo, trunc + 1)]
        return HbarSeries(lo, out, trunc)

    def scale(self, c) -> "HbarSeries":
        c = _as_gauss(c)
        return HbarSeries(self.valuation, [c * a for a in self.coeffs], self.truncation)

    def shift(self, k: int) -> "HbarSeries":
        """Multiply by ``hbar^k``."""
        return HbarSeries(self.valuation + k, list(self.coeffs), self.truncation + k)

    def __repr__(self) -> str:
        terms = [f"{c}*h^{self.valuation + i}" for i, c in enumerate(self.coeffs) if c]
        return f"HbarSeries({' + '.join(terms) or '0'}; O(h^{self.truncation + 1}))"


def _poly_hbar_coeff(shift: int, coeffs: list[Fraction], n: int) -> GaussRat:
    # hbar^n coefficient of sum_k c_k exp(i k hbar/2)
    power_sum = sum((c * (shift + k) ** n for k, c in enumerate(coeffs) if c), Fraction(0))
    if not power_sum:
        return GaussRat()
    return _I_POWERS[n % 4] * (power_sum / (factorial(n) * 2**n))


def _expand_poly(shift: int, poly, guard_limit: int) -> tuple[int, list[Fraction]]:
    coeffs = [_fmpq_to_fraction(c) for c in poly.coeffs()]
    for n in range(guard_limit + 1):
        if _poly_hbar_coeff(shift, coeffs, n):
            return n, coeffs
    raise ArithmeticError("polynomial vanishes to all computed orders at s = 1")


def expand_hbar(f: RatFuncQ, T: int) -> HbarSeries:
    """Expand ``f(exp(i*hbar/2))`` as a Laurent series in hbar up to ``hbar^T``."""
    if f.is_zero():
        return HbarSeries(0, [], T)
    # a nonzero polynomial of degree d has a nonzero power sum among n <= d
    vn, ncoeffs = _expand_poly(f._shift, f._num, f._num.degree() + 1)
    vd, dcoeffs = _expand_poly(0, f._den, f._den.degree() + 1)
    val = vn - vd
    length = T - val + 1
    if length <= 0:
        return HbarSeries(val, [], T)
    num = [_poly_hbar_coeff(f._shift, ncoeffs, vn + k) for k in range(length)]
    den = [_poly_hbar_coeff(0, dcoeffs, vd + k) for k in range(length)]
    lead = den[0]
    if lead.is_zero():
        raise ArithmeticError("zero leading denominator coefficient in hbar expansion")
    out: list[GaussRat] = []
    for k in range(length):
        acc = num[k]
        for j in range(1, k + 1):
            if den[j]:
                acc = acc - den[j] * out[k - j]
        out.append(acc / lead)
    return HbarSeries(val, out, T)


def hbar_series_of(f, T: int) -> HbarSeries:
    """Convenience: expand a RatFuncQ or SLaurent."""
    if isinstance(f, SLaurent):
        f = RatFuncQ(f)
    return expand_hbar(f, T)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)
