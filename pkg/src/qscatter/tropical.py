"""Perturbed scattering over a square-zero ring and refined tropical counts.

Each initial Hamiltonian ``sum_l c_l t_j^l z^{l m_j}`` is split by writing
``t_j = u_j1 + ... + u_jN`` with ``u^2 = 0``, so that ``t_j^l`` becomes
``l! * sum_{|A|=l} u^A``.  Every term ``u^A`` (with its ``l``) becomes its own
line, translated to a generic base point.  Lines then scatter pairwise: two
rays with disjoint supports meeting transversally emit one ray carrying the
commutator of their Hamiltonians.  Coefficients of a fixed monomial summed
over the emitted rays are the refined tropical counts up to explicit factors.

Monomials are tracked in the generators ``v_{j,l,A} = u^A`` rather than in the
``u`` themselves, so the splitting of ``p_j`` into parts ``l`` stays visible.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Sequence

from .exactring import RatFuncQ, SLaurent, quantum_integer
from .qtorus import Context, LatticeVec, NilContext, NilElement, det, nil_commutator

__all__ = [
    "QPoint",
    "GenRay",
    "PerturbedDiagram",
    "TropicalCount",
    "GenericityError",
    "ExtractionError",
    "initial_coefficient",
    "build_perturbed",
    "propagate",
    "build_propagated",
    "extract_ntrop",
    "asymptotic_coefficient",
    "two_end_oracle",
    "partitions",
    "partition_data",
    "w_of",
]

log = logging.getLogger(__name__)

MAX_RESEEDS = 20


class GenericityError(RuntimeError):
    """Base points are not in general position."""


class ExtractionError(RuntimeError):
    """An extracted count is not a symmetric Laurent polynomial in N[s^±1]."""


@dataclass(frozen=True)
class QPoint:
    x: Fraction
    y: Fraction

    def shifted(self, d, t: Fraction) -> "QPoint":
        return QPoint(self.x + t * d[0], self.y + t * d[1])


@dataclass
class GenRay:
    """A ray ``{base + t*dir}``; initial lines allow every real ``t``,
    emitted rays only ``t >= 0``."""

    id: int
    base: QPoint
    dir: LatticeVec
    ham: NilElement
    mask: int
    line: bool = False
    parents: tuple[int, ...] = ()

    def allows(self, t: Fraction, strict: bool) -> bool:
        if self.line:
            return True
        return t > 0 if strict else t >= 0


@dataclass
class PerturbedDiagram:
    ctx: Context
    nil: NilContext
    generators: dict[tuple[int, int, tuple[int, ...]], int]
    rays: list[GenRay]
    seed: int
    events: list[tuple[QPoint, int, int, int]] = field(default_factory=list)
    propagated: bool = False

    @property
    def order(self) -> int:
        return self.ctx.order

    def mask_order(self, mask: int) -> int:
        return bin(self.nil.support(mask)).count("1")


@dataclass(frozen=True)
class TropicalCount:
    w: tuple[LatticeVec, ...]
    value: RatFuncQ
    seed: int | None = None

    def to_json(self) -> dict:
        lp = self.value.to_laurent()
        return {
            "w": [list(v) for v in self.w],
            "ntrop": lp.to_json() if lp is not None else self.value.to_json(),
            "seed": self.seed,
        }


def initial_coefficient(l: int) -> RatFuncQ:
    """``(1/l) (-1)^(l-1) / (s^l - s^-l)``."""
    return RatFuncQ(Fraction((-1) ** (l - 1), l)) / RatFuncQ.s_minus_sinv(l)


# ---------------------------------------------------------------------------
# Building


def _atom(ctx: Context, j: int, a: int) -> int:
    # atom u_{j,a}, a in 1..N
    return 1 << (j * ctx.order + (a - 1))


def _random_point(rng: random.Random) -> QPoint:
    return QPoint(
        Fraction(rng.randint(-10**4, 10**4), rng.randint(1, 997)),
        Fraction(rng.randint(-10**4, 10**4), rng.randint(1, 997)),
    )


def _build_once(ctx: Context, seed: int) -> PerturbedDiagram:
    N = ctx.order
    weights, supports = [], []
    generators: dict[tuple[int, int, tuple[int, ...]], int] = {}
    for j, m in enumerate(ctx.m):
        for l in range(1, N + 1):
            for A in combinations(range(1, N + 1), l):
                supp = 0
                for a in A:
                    supp |= _atom(ctx, j, a)
                generators[(j, l, A)] = len(weights)
                weights.append(m.scale(l))
                supports.append(supp)
    nil = NilContext(tuple(weights), tuple(supports))
    rng = random.Random(seed)
    rays = []
    for (j, l, A), idx in generators.items():
        coeff = initial_coefficient(l) * factorial(l)
        mask = 1 << idx
        ham = NilElement(nil, {mask: coeff})
        rays.append(GenRay(len(rays), _random_point(rng), -ctx.m[j], ham, mask, line=True))
    return PerturbedDiagram(ctx, nil, generators, rays, seed)


def build_perturbed(ctx: Context, seed: int) -> PerturbedDiagram:
    """Initial lines at seeded random base points.

    Parallel lines must be distinct; genericity of the scattering events
    themselves is certified by :func:`propagate`.
    """
    if any(r != 1 for r in ctx.r):
        raise ValueError("perturbed scattering needs a non-orbifold context")
    d = _build_once(ctx, seed)
    lines = d.rays
    for a, b in combinations(lines, 2):
        if det(a.dir, b.dir) == 0 and _on_line(b.base, a):
            raise GenericityError(f"initial lines {a.id} and {b.id} overlap")
    return d


# ---------------------------------------------------------------------------
# Propagation


def _on_line(pt: QPoint, ray: GenRay) -> bool:
    dx, dy = pt.x - ray.base.x, pt.y - ray.base.y
    return dx * ray.dir[1] - dy * ray.dir[0] == 0


def _param_on(pt: QPoint, ray: GenRay) -> Fraction | None:
    """Parameter ``t`` with ``pt = base + t*dir``, or None when off the line."""
    if not _on_line(pt, ray):
        return None
    d = ray.dir
    if d[0]:
        return (pt.x - ray.base.x) / d[0]
    return (pt.y - ray.base.y) / d[1]


def _intersect(a: GenRay, b: GenRay):
    D = det(a.dir, b.dir)
    if D == 0:
        return None
    dx, dy = b.base.x - a.base.x, b.base.y - a.base.y
    t = (dx * b.dir[1] - dy * b.dir[0]) / D
    u = (dx * a.dir[1] - dy * a.dir[0]) / D
    if not (a.allows(t, True) and b.allows(u, True)):
        return None
    return a.base.shifted(a.dir, t)


def _compatible(d: PerturbedDiagram, m1: int, m2: int) -> bool:
    nil = d.nil
    s1, s2 = nil.support(m1), nil.support(m2)
    if m1 & m2 or s1 & s2:
        return False
    return bin(s1 | s2).count("1") <= d.order


def _emit(d: PerturbedDiagram, a: GenRay, b: GenRay, queue: list[GenRay]) -> None:
    if not _compatible(d, a.mask, b.mask):
        return
    k = det(a.ham.ctx.weight(a.mask), b.ham.ctx.weight(b.mask))
    if k == 0:
        return
    pt = _intersect(a, b)
    if pt is None:
        return
    first, second = (a, b) if k > 0 else (b, a)
    ham = nil_commutator(first.ham, second.ham)
    if ham.is_zero():
        return
    mask = a.mask | b.mask
    w = d.nil.weight(mask)
    ray = GenRay(len(d.rays), pt, w, ham, mask, line=False, parents=(first.id, second.id))
    d.rays.append(ray)
    d.events.append((pt, first.id, second.id, ray.id))
    queue.append(ray)


def _certify(d: PerturbedDiagram) -> None:
    """No third ray passes through an emission point while being able to
    interact with the emitted ray."""
    for pt, ia, ib, ic in d.events:
        child = d.rays[ic]
        for ray in d.rays:
            if ray.id in (ia, ib, ic) or not _compatible(d, ray.mask, child.mask):
                continue
            t = _param_on(pt, ray)
            if t is not None and ray.allows(t, False):
                raise GenericityError(
                    f"ray {ray.id} passes through the emission point of ray {ic}"
                )


def propagate(d: PerturbedDiagram) -> PerturbedDiagram:
    """Run every pairwise scattering event to exhaustion, in place."""
    queue = list(d.rays)
    processed: list[GenRay] = []
    while queue:
        ray = queue.pop(0)
        for other in processed:
            _emit(d, other, ray, queue)
        processed.append(ray)
    _certify(d)
    d.propagated = True
    return d


def build_propagated(ctx: Context, seed: int) -> PerturbedDiagram:
    """Build and propagate, reseeding with ``seed+1, seed+2, ...`` when the
    configuration turns out not to be generic."""
    last = None
    for attempt in range(MAX_RESEEDS):
        s = seed + attempt
        try:
            return propagate(build_perturbed(ctx, s))
        except GenericityError as exc:
            log.info("seed %d not generic (%s); reseeding", s, exc)
            last = exc
    raise GenericityError(f"no generic configuration after {MAX_RESEEDS} seeds: {last}")


# ---------------------------------------------------------------------------
# Extraction


def partitions(n: int, largest: int | None = None) -> list[tuple[int, ...]]:
    """Partitions of ``n`` as nonincreasing tuples."""
    if n == 0:
        return [()]
    largest = n if largest is None else largest
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return out


def partition_data(p: Sequence[int]) -> list[tuple[tuple[int, ...], ...]]:
    """All ``k`` with ``k_j`` a partition of ``p_j``."""
    out: list[tuple[tuple[int, ...], ...]] = [()]
    for pj in p:
        out = [k + (part,) for k in out for part in partitions(pj)]
    return out


def w_of(m_tuple: Sequence, k) -> tuple[LatticeVec, ...]:
    return tuple(LatticeVec(*m_tuple[j]).scale(l) for j, parts in enumerate(k) for l in parts)


def _mask_for(d: PerturbedDiagram, k, reverse: bool = False) -> int:
    N = d.order
    mask = 0
    for j, parts in enumerate(k):
        pool = list(range(1, N + 1))
        if reverse:
            pool.reverse()
        for l in parts:
            A, pool = pool[:l], pool[l:]
            if len(A) < l:
                raise ValueError("partition does not fit into the available variables")
            mask |= 1 << d.generators[(j, l, tuple(sorted(A)))]
    return mask


def _mask_coefficient(d: PerturbedDiagram, mask: int) -> RatFuncQ:
    total = RatFuncQ(0)
    for ray in d.rays:
        if ray.mask == mask:
            total = total + ray.ham.coeff(mask)
    return total


def _normalizer(k) -> RatFuncQ:
    norm = RatFuncQ(1)
    parts = 0
    for part in k:
        for l in part:
            norm = norm * initial_coefficient(l) * factorial(l)
            parts += 1
    return norm * RatFuncQ.s_minus_sinv(1) ** (parts - 1)


def _validate(value: RatFuncQ, w) -> SLaurent:
    lp = value.to_laurent()
    if lp is None or not lp.has_integer_coeffs() or not lp.has_nonnegative_coeffs() or not lp.is_symmetric():
        raise ExtractionError(f"refined count for w={w} is not in N[s^±1] symmetric: {value}")
    return lp


def extract_ntrop(d: PerturbedDiagram, k, *, spot_check: bool = True) -> TropicalCount:
    if not d.propagated:
        raise ValueError("diagram must be propagated first")
    k = tuple(tuple(part) for part in k)
    if len(k) != d.ctx.n:
        raise ValueError("partition datum must have one partition per vector")
    w = w_of(d.ctx.m, k)
    if sum(sum(part) for part in k) == 0:
        raise ValueError("empty partition datum")
    value = _mask_coefficient(d, _mask_for(d, k)) / _normalizer(k)
    if spot_check:
        other = _mask_coefficient(d, _mask_for(d, k, reverse=True)) / _normalizer(k)
        if other != value:
            raise ExtractionError(f"mask choice changes the count for w={w}")
    total = sum((v for v in w), LatticeVec(0, 0))
    if total != (0, 0):
        _validate(value, w)
    return TropicalCount(w, value, d.seed)


def asymptotic_coefficient(d: PerturbedDiagram, p: Sequence[int]) -> RatFuncQ:
    """Sum of all monomials with atom profile ``p``, specialized so that
    ``u_{j,a} -> t_j``; divided by ``prod p_j!`` this is the coefficient of
    ``t^p`` in the asymptotic (origin) diagram."""
    target = 0
    for j, pj in enumerate(p):
        for a in range(1, pj + 1):
            target |= _atom(d.ctx, j, a)
    total = RatFuncQ(0)
    for ray in d.rays:
        if d.nil.support(ray.mask) == target:
            total = total + ray.ham.coeff(ray.mask)
    denom = 1
    for pj in p:
        denom *= factorial(pj)
    return total / denom


def two_end_oracle(w1, w2) -> SLaurent:
    """Single-vertex refined multiplicity ``[|det(w1, w2)|]_q``."""
    k = abs(det(w1, w2))
    if k == 0:
        raise ValueError("vertex multiplicity needs non-collinear vectors")
    return quantum_integer(k)
