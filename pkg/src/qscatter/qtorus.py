"""Truncated quantum tori and the square-zero ring used for perturbed scattering.

A :class:`TorusElement` lives in the graded subalgebra spanned by
``t^p z^{r(p)}`` with ``r(p) = sum_j p_j m_j``; the key is just ``p``.
Products use ``z^a z^b = s^<a,b> z^{a+b}`` (``s = q^(1/2)``), with an extra
``(-1)^<a,b>`` in the twisted algebra.  Terms of total t-degree above the
context order are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, NamedTuple

from .exactring import RatFuncQ, SLaurent, expand_hbar

__all__ = [
    "LatticeVec",
    "det",
    "is_primitive",
    "primitive_part",
    "Context",
    "TorusElement",
    "mul",
    "exp_elem",
    "log_elem",
    "adjoint",
    "commutator",
    "quantum_dilog_coeff",
    "quantum_dilog_product_coeff",
    "classical_limit",
    "NilContext",
    "NilElement",
    "nil_mul",
    "nil_commutator",
    "dilog_element",
    "pentagon_identity_holds",
]


class LatticeVec(NamedTuple):
    x: int
    y: int

    def __add__(self, other) -> "LatticeVec":  # type: ignore[override]
        return LatticeVec(self.x + other[0], self.y + other[1])

    def __neg__(self) -> "LatticeVec":
        return LatticeVec(-self.x, -self.y)

    def scale(self, k: int) -> "LatticeVec":
        return LatticeVec(k * self.x, k * self.y)


def det(a, b) -> int:
    """The skew form ``<a, b> = a.x*b.y - a.y*b.x``."""
    return a[0] * b[1] - a[1] * b[0]


def is_primitive(v) -> bool:
    return gcd(v[0], v[1]) == 1


def primitive_part(v) -> tuple[int, LatticeVec]:
    """Return ``(l, m)`` with ``v = l*m`` and ``m`` primitive; ``v`` nonzero."""
    g = gcd(v[0], v[1])
    if g == 0:
        raise ValueError("the zero vector has no primitive part")
    return g, LatticeVec(v[0] // g, v[1] // g)


# ---------------------------------------------------------------------------
# Contexts


@dataclass(frozen=True)
class Context:
    m: tuple[LatticeVec, ...]
    r: tuple[int, ...]
    order: int
    twisted: bool = False

    def __post_init__(self):
        m = tuple(LatticeVec(int(v[0]), int(v[1])) for v in self.m)
        r = tuple(int(x) for x in self.r) if self.r else (1,) * len(m)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "r", r)
        if not m:
            raise ValueError("context needs at least one vector")
        if len(r) != len(m):
            raise ValueError("orbifold tuple length must match the vector tuple")
        for v in m:
            if not is_primitive(v):
                raise ValueError(f"vector {tuple(v)} is not primitive")
        if any(x < 1 for x in r):
            raise ValueError("orbifold orders must be positive")
        if self.order < 1:
            raise ValueError("truncation order must be at least 1")

    @classmethod
    def make(cls, m: Iterable, r: Iterable[int] | None = None, order: int = 6,
             twisted: bool = False) -> "Context":
        m = tuple(m)
        return cls(m, tuple(r) if r is not None else (1,) * len(m), order, twisted)

    @property
    def n(self) -> int:
        return len(self.m)

    def r_of(self, p) -> LatticeVec:
        x = y = 0
        for pj, v in zip(p, self.m):
            x += pj * v.x
            y += pj * v.y
        return LatticeVec(x, y)

    def with_order(self, order: int) -> "Context":
        return replace(self, order=order)

    def with_twisted(self, twisted: bool) -> "Context":
        return replace(self, twisted=twisted)

    def algebra_key(self) -> tuple:
        # contexts sharing this key have the same multiplication
        return (self.m, self.twisted)

    def to_json(self) -> dict:
        return {
            "m": [list(v) for v in self.m],
            "r": list(self.r),
            "order": self.order,
            "twisted": self.twisted,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Context":
        return cls.make(data["m"], data.get("r"), int(data["order"]), bool(data.get("twisted", False)))


def ord_p(p) -> int:
    return sum(p)


# ---------------------------------------------------------------------------
# Torus elements


class TorusElement:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Context, terms: Mapping[tuple, object] | None = None):
        self.ctx = ctx
        clean: dict[tuple[int, ...], RatFuncQ] = {}
        if terms:
            for p, c in terms.items():
                p = tuple(int(x) for x in p)
                if len(p) != ctx.n or any(x < 0 for x in p):
                    raise ValueError(f"bad exponent index {p}")
                if sum(p) > ctx.order:
                    continue
                c = c if isinstance(c, RatFuncQ) else RatFuncQ(c)
                if c:
                    clean[p] = c
        self.terms = clean

    @classmethod
    def _wrap(cls, ctx: Context, terms: dict) -> "TorusElement":
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, ctx: Context) -> "TorusElement":
        return cls._wrap(ctx, {})

    @classmethod
    def one(cls, ctx: Context) -> "TorusElement":
        return cls._wrap(ctx, {(0,) * ctx.n: RatFuncQ(1)})

    @classmethod
    def monomial(cls, ctx: Context, p, c=1) -> "TorusElement":
        return cls(ctx, {tuple(p): c})

    def coeff(self, p) -> RatFuncQ:
        return self.terms.get(tuple(p), RatFuncQ(0))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def min_order(self) -> int:
        return min((sum(p) for p in self.terms), default=self.ctx.order + 1)

    def _check(self, other: "TorusElement") -> None:
        if self.ctx.algebra_key() != other.ctx.algebra_key():
            raise ValueError("torus elements live in different algebras")

    def __add__(self, other: "TorusElement") -> "TorusElement":
        self._check(other)
        ctx = self.ctx if self.ctx.order <= other.ctx.order else other.ctx
        out = {p: c for p, c in self.terms.items() if sum(p) <= ctx.order}
        for p, c in other.terms.items():
            if sum(p) > ctx.order:
                continue
            v = out.get(p)
            v = c if v is None else v + c
            if v:
                out[p] = v
            else:
                out.pop(p, None)
        return TorusElement._wrap(ctx, out)

    def __neg__(self) -> "TorusElement":
        return TorusElement._wrap(self.ctx, {p: -c for p, c in self.terms.items()})

    def __sub__(self, other: "TorusElement") -> "TorusElement":
        return self + (-other)

    def scale(self, c) -> "TorusElement":
        c = c if isinstance(c, RatFuncQ) else RatFuncQ(c)
        if not c:
            return TorusElement.zero(self.ctx)
        return TorusElement._wrap(self.ctx, {p: v * c for p, v in self.terms.items()})

    def __mul__(self, other: "TorusElement") -> "TorusElement":
        return mul(self, other)

    def truncate(self, order: int) -> "TorusElement":
        ctx = self.ctx.with_order(order)
        return TorusElement._wrap(ctx, {p: c for p, c in self.terms.items() if sum(p) <= order})

    def homogeneous(self, order: int) -> "TorusElement":
        return TorusElement._wrap(self.ctx, {p: c for p, c in self.terms.items() if sum(p) == order})

    def split_central(self) -> tuple["TorusElement", "TorusElement"]:
        """``(central, noncentral)`` parts; central terms have ``r(p) = 0``."""
        cen, non = {}, {}
        for p, c in self.terms.items():
            (cen if self.ctx.r_of(p) == (0, 0) else non)[p] = c
        return TorusElement._wrap(self.ctx, cen), TorusElement._wrap(self.ctx, non)

    def map_coeffs(self, fn) -> "TorusElement":
        out = {}
        for p, c in self.terms.items():
            v = fn(p, c)
            if v:
                out[p] = v
        return TorusElement._wrap(self.ctx, out)

    def with_ctx(self, ctx: Context) -> "TorusElement":
        return TorusElement(ctx, self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TorusElement):
            return NotImplemented
        return self.ctx.algebra_key() == other.ctx.algebra_key() and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self) -> list[tuple[tuple[int, ...], RatFuncQ]]:
        return sorted(self.terms.items())

    def to_json(self) -> list:
        return [{"p": list(p), "coeff": c.to_json()} for p, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, ctx: Context, data: Iterable) -> "TorusElement":
        return cls(ctx, {tuple(t["p"]): RatFuncQ.from_json(t["coeff"]) for t in data})

    def __repr__(self) -> str:
        body = ", ".join(f"{p}: {c}" for p, c in self.sorted_terms())
        return f"TorusElement({{{body}}})"


def mul(a: TorusElement, b: TorusElement) -> TorusElement:
    a._check(b)
    ctx = a.ctx if a.ctx.order <= b.ctx.order else b.ctx
    order = ctx.order
    twisted = ctx.twisted
    r_of = ctx.r_of
    bterms = [(p, sum(p), r_of(p), c) for p, c in b.terms.items()]
    out: dict[tuple[int, ...], RatFuncQ] = {}
    for p, c in a.terms.items():
        op = sum(p)
        rp = r_of(p)
        for q, oq, rq, d in bterms:
            if op + oq > order:
                continue
            k = rp[0] * rq[1] - rp[1] * rq[0]
            v = (c * d).mul_s_pow(k)
            if twisted and k % 2:
                v = -v
            key = tuple(x + y for x, y in zip(p, q))
            prev = out.get(key)
            out[key] = v if prev is None else prev + v
    return TorusElement._wrap(ctx, {p: c for p, c in out.items() if c})


def commutator(a: TorusElement, b: TorusElement) -> TorusElement:
    return mul(a, b) - mul(b, a)


def exp_elem(H: TorusElement) -> TorusElement:
    ctx = H.ctx
    if (0,) * ctx.n in H.terms:
        raise ValueError("exponential needs an element without constant term")
    result = TorusElement.one(ctx)
    power = TorusElement.one(ctx)
    for k in range(1, ctx.order + 1):
        power = mul(power, H).scale(Fraction(1, k))
        if power.is_zero():
            break
        result = result + power
    return result


def log_elem(g: TorusElement) -> TorusElement:
    ctx = g.ctx
    zero = (0,) * ctx.n
    if g.terms.get(zero) != RatFuncQ(1):
        raise ValueError("logarithm needs an element with constant term 1")
    X = g - TorusElement.one(ctx)
    result = TorusElement.zero(ctx)
    power = TorusElement.one(ctx)
    for k in range(1, ctx.order + 1):
        power = mul(power, X)
        if power.is_zero():
            break
        result = result + power.scale(Fraction((-1) ** (k + 1), k))
    return result


def adjoint(H: TorusElement, f: TorusElement) -> TorusElement:
    """``exp(H) f exp(-H)`` via the series of iterated commutators."""
    ctx = H.ctx
    if (0,) * ctx.n in H.terms:
        raise ValueError("adjoint action needs an element without constant term")
    result = f
    term = f
    for k in range(1, ctx.order + 1):
        term = commutator(H, term).scale(Fraction(1, k))
        if term.is_zero():
            break
        result = result + term
    return result


# ---------------------------------------------------------------------------
# Quantum dilogarithm and classical limits


def _dilog_log_coeff(l: int) -> RatFuncQ:
    # coefficient of x^l in -sum x^l / (l (s^l - s^-l))
    return RatFuncQ(Fraction(-1, l)) / RatFuncQ.s_minus_sinv(l)


def quantum_dilog_coeff(n: int) -> RatFuncQ:
    """Coefficient of ``x^n`` in ``Psi_q(x)``, computed from its exponential form."""
    if n < 1:
        raise ValueError("dilogarithm coefficient needs n >= 1")
    # F = exp(A) gives k F_k = sum_{j=1}^k j A_j F_{k-j}
    A = [RatFuncQ(0)] + [_dilog_log_coeff(l) for l in range(1, n + 1)]
    F = [RatFuncQ(1)]
    for k in range(1, n + 1):
        acc = RatFuncQ(0)
        for j in range(1, k + 1):
            acc = acc + A[j] * F[k - j] * j
        F.append(acc / k)
    return F[n]


def quantum_dilog_product_coeff(n: int) -> RatFuncQ:
    """Closed form ``s^n / prod_{j=1}^n (1 - s^{2j})``."""
    den = RatFuncQ(1)
    for j in range(1, n + 1):
        den = den * RatFuncQ(SLaurent({0: 1, 2 * j: -1}))
    return RatFuncQ.s_pow(n) / den


def classical_limit(c: RatFuncQ) -> Fraction:
    """The hbar^0 coefficient of ``i*hbar*c(exp(i*hbar/2))``."""
    series = expand_hbar(c, 0)
    if series.valuation < -1:
        raise ValueError("coefficient has a pole of order > 1 at s = 1")
    lead = series.coeff(-1)
    # i * (re + i im) = -im + i re
    if lead.re:
        raise ValueError("classical limit is not real")
    return -lead.im


# ---------------------------------------------------------------------------
# Square-zero ring


@dataclass(frozen=True)
class NilContext:
    """Nilpotent variables ``v_0, v_1, ...`` with lattice weights.

    Each variable may stand for a product of several square-zero atoms; its
    ``support`` is the bitmask of those atoms.  Two monomials multiply to zero
    as soon as their atom supports meet.  Without explicit supports every
    variable is its own atom.
    """

    weights: tuple[LatticeVec, ...]
    supports: tuple[int, ...] | None = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(LatticeVec(*w) for w in self.weights))
        if self.supports is not None:
            if len(self.supports) != len(self.weights):
                raise ValueError("one support mask per variable is required")
            object.__setattr__(self, "supports", tuple(int(x) for x in self.supports))

    @property
    def size(self) -> int:
        return len(self.weights)

    def _fold(self, mask: int):
        x = y = 0
        supp = 0
        i = 0
        m = mask
        while m:
            if m & 1:
                x += self.weights[i].x
                y += self.weights[i].y
                supp |= self.supports[i] if self.supports is not None else 1 << i
            m >>= 1
            i += 1
        return LatticeVec(x, y), supp

    def _info(self, mask: int):
        info = self._cache.get(mask)
        if info is None:
            info = self._cache[mask] = self._fold(mask)
        return info

    def weight(self, mask: int) -> LatticeVec:
        """z-exponent carried by the monomial with this variable mask."""
        return self._info(mask)[0]

    def support(self, mask: int) -> int:
        """Atom mask of the monomial with this variable mask."""
        return self._info(mask)[1]


class NilElement:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: NilContext, terms: Mapping[int, object] | None = None):
        self.ctx = ctx
        clean = {}
        for mask, c in (terms or {}).items():
            c = c if isinstance(c, RatFuncQ) else RatFuncQ(c)
            if c:
                clean[int(mask)] = c
        self.terms = clean

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coeff(self, mask: int) -> RatFuncQ:
        return self.terms.get(mask, RatFuncQ(0))

    def __add__(self, other: "NilElement") -> "NilElement":
        if self.ctx is not other.ctx and self.ctx.weights != other.ctx.weights:
            raise ValueError("nil elements live in different rings")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return NilElement(self.ctx, out)

    def __neg__(self) -> "NilElement":
        return NilElement(self.ctx, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "NilElement") -> "NilElement":
        return self + (-other)

    def scale(self, c) -> "NilElement":
        return NilElement(self.ctx, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, NilElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"NilElement({ {bin(k): str(c) for k, c in sorted(self.terms.items())} })"


def nil_mul(a: NilElement, b: NilElement) -> NilElement:
    if a.ctx is not b.ctx and a.ctx.weights != b.ctx.weights:
        raise ValueError("nil elements live in different rings")
    info = a.ctx._info
    out: dict[int, RatFuncQ] = {}
    for U, c in a.terms.items():
        wU, sU = info(U)
        for V, d in b.terms.items():
            wV, sV = info(V)
            if U & V or sU & sV:
                continue
            k = det(wU, wV)
            v = (c * d).mul_s_pow(k)
            key = U | V
            out[key] = out[key] + v if key in out else v
    return NilElement(a.ctx, out)


def nil_commutator(a: NilElement, b: NilElement) -> NilElement:
    return nil_mul(a, b) - nil_mul(b, a)


def dilog_element(ctx: Context, p, sign: int = 1) -> TorusElement:
    """``Psi_q(sign * t^p z^{r(p)})`` truncated at the context order."""
    p = tuple(p)
    step = sum(p)
    terms = {}
    l = 1
    while l * step <= ctx.order:
        terms[tuple(l * x for x in p)] = RatFuncQ(Fraction(-(sign**l), l)) / RatFuncQ.s_minus_sinv(l)
        l += 1
    return exp_elem(TorusElement(ctx, terms))


def pentagon_identity_holds(order: int, twisted: bool) -> bool:
    """``Psi(x1) Psi(x2) = Psi(x2) Psi(x12) Psi(x1)`` for ``m = ((1,0),(0,1))``.

    In the twisted algebra the arguments are ``+x``; in the plain algebra the
    identity holds for ``-x`` (the two differ by the sign map ``x -> -x`` on
    primitive classes).
    """
    ctx = Context.make(((1, 0), (0, 1)), None, order, twisted)
    sign = 1 if twisted else -1
    a = dilog_element(ctx, (1, 0), sign)
    b = dilog_element(ctx, (0, 1), sign)
    ab = dilog_element(ctx, (1, 1), sign)
    return mul(a, b) == mul(mul(b, ab), a)
