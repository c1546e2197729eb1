"""Invariants read off consistent diagrams.

For an outgoing ray of primitive direction ``m`` the coefficient ``c_p`` of
``t^p`` gives

* the higher-genus series ``sum_g N_{g,p} hbar^(2g-1) = i * c_p`` at
  ``s = exp(i*hbar/2)``,
* ``omega_bar_p = (-1)^(l_p+1) (s - 1/s) c_p``,
* BPS invariants ``omega_p`` by Moebius inversion along the ray.

The checks here compare these against two independent reconstructions:
refined tropical counts from perturbed scattering, and the degeneration
formula with its multiple-cover contributions.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial, gcd
from typing import Sequence

from .exactring import (
    GaussRat,
    RatFuncQ,
    Verdict,
    expand_hbar,
    integrality_symmetry,
    mobius,
)
from .qtorus import (
    Context,
    LatticeVec,
    TorusElement,
    classical_limit,
    det,
    primitive_part,
)
from .scatter import Ray, ScatteringDiagram, complete, get_ray
from .tropical import (
    build_propagated,
    extract_ntrop,
    initial_coefficient,
    partition_data,
)

__all__ = [
    "GwSeries",
    "BpsRecord",
    "BpsCondition",
    "standard_diagram",
    "completed_standard",
    "coefficient",
    "omega_bar",
    "mobius_invert",
    "mobius_forward",
    "bps_records",
    "gw_series",
    "sigma_M",
    "sigma_P",
    "to_twisted",
    "twist_check",
    "quadratic_refinement_holds",
    "bps_condition",
    "cross_check_tropical",
    "degeneration_check",
    "classical_functions",
    "multicover_coefficient",
    "exponents",
    "orbifold_rescaled_omegas",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GwSeries:
    p: tuple[int, ...]
    values: tuple[Fraction, ...]
    genus_cutoff: int

    def to_json(self) -> list:
        return [f"{v.numerator}/{v.denominator}" for v in self.values]


@dataclass(frozen=True)
class BpsRecord:
    p: tuple[int, ...]
    omega_bar: RatFuncQ
    omega: RatFuncQ
    verdict: Verdict

    def to_json(self, gw: GwSeries | None = None) -> dict:
        out = {
            "p": list(self.p),
            "omega_bar": self.omega_bar.to_json(),
            "omega": self.omega.to_json(),
            "verdict": self.verdict._asdict(),
        }
        if gw is not None:
            out["gw"] = gw.to_json()
        return out


@dataclass(frozen=True)
class BpsCondition:
    satisfies: bool
    omegas: tuple[RatFuncQ, ...]
    verdicts: tuple[Verdict, ...]


# ---------------------------------------------------------------------------
# Diagrams


def multicover_coefficient(l: int, r: int = 1) -> RatFuncQ:
    """``(-1)^(l-1)/l / (s^(rl) - s^(-rl))``; times ``i`` this is the series
    ``((-1)^(l-1)/l) / (2 sin(r l hbar/2))``."""
    return RatFuncQ(Fraction((-1) ** (l - 1), l)) / RatFuncQ.s_minus_sinv(r * l)


def standard_diagram(m_tuple, r_tuple=None, N: int = 6) -> ScatteringDiagram:
    ctx = Context.make(m_tuple, r_tuple, N)
    rays = []
    for j, (m, r) in enumerate(zip(ctx.m, ctx.r)):
        terms = {}
        for l in range(1, N // r + 1):
            p = [0] * ctx.n
            p[j] = r * l
            terms[tuple(p)] = multicover_coefficient(l, r)
        rays.append(Ray(-m, True, TorusElement(ctx, terms)))
    return ScatteringDiagram(ctx, rays)


@lru_cache(maxsize=64)
def _completed(m_key: tuple, r_key: tuple, N: int) -> ScatteringDiagram:
    return complete(standard_diagram(m_key, r_key, N))


def completed_standard(m_tuple, r_tuple=None, N: int = 6) -> ScatteringDiagram:
    m_key = tuple(tuple(int(x) for x in v) for v in m_tuple)
    r_key = tuple(r_tuple) if r_tuple is not None else (1,) * len(m_key)
    return _completed(m_key, r_key, N)


def exponents(ctx: Context, max_order: int | None = None) -> list[tuple[int, ...]]:
    """All ``p`` with ``1 <= ord(p) <= max_order`` and ``r(p) != 0``."""
    top = ctx.order if max_order is None else max_order
    out = []
    for p in product(range(top + 1), repeat=ctx.n):
        if 0 < sum(p) <= top and ctx.r_of(p) != (0, 0):
            out.append(p)
    return sorted(out, key=lambda p: (sum(p), p))


def coefficient(d: ScatteringDiagram, p: Sequence[int]) -> RatFuncQ:
    """``c_p``: the coefficient of ``t^p`` on the outgoing ray of direction ``m_p``."""
    r = d.ctx.r_of(p)
    if r == (0, 0):
        raise ValueError(f"r(p) vanishes for p={tuple(p)}")
    _, m_p = primitive_part(r)
    return get_ray(d, m_p).coeff(tuple(p))


def sigma_M(m) -> int:
    """Quadratic refinement ``(-1)^|m|`` with ``|m|`` the divisibility."""
    if m[0] == 0 and m[1] == 0:
        return 1
    return -1 if gcd(m[0], m[1]) % 2 else 1


def sigma_P(ctx: Context, p) -> int:
    return sigma_M(ctx.r_of(p))


def omega_bar(d: ScatteringDiagram, p: Sequence[int]) -> RatFuncQ:
    p = tuple(p)
    r = d.ctx.r_of(p)
    if r == (0, 0):
        raise ValueError(f"r(p) vanishes for p={p}")
    l_p, _ = primitive_part(r)
    sign = (-1) ** (l_p + 1)
    # the twisted reading -(s-1/s) sigma_P(p) c_p carries the same sign
    assert sign == -sigma_P(d.ctx, p)
    value = RatFuncQ.s_minus_sinv(1) * coefficient(d, p)
    return value if sign > 0 else -value


def mobius_invert(family: dict[int, RatFuncQ], p0: Sequence[int] | None = None) -> dict[int, RatFuncQ]:
    """``Omega_n = sum_{l|n} mu(l)/l (s-1/s)/(s^l-s^-l) OmegaBar_{n/l}(s^l)``."""
    if p0 is not None and _primitive_index(p0)[0] != 1:
        raise ValueError(f"{tuple(p0)} is not primitive")
    s1 = RatFuncQ.s_minus_sinv(1)
    out = {}
    for n in sorted(family):
        total = RatFuncQ(0)
        for l in range(1, n + 1):
            if n % l:
                continue
            mu = mobius(l)
            if not mu:
                continue
            term = family.get(n // l, RatFuncQ(0))
            if term:
                total = total + term.substitute_power(l) * s1 / RatFuncQ.s_minus_sinv(l) * Fraction(mu, l)
        out[n] = total
    return out


def mobius_forward(family: dict[int, RatFuncQ]) -> dict[int, RatFuncQ]:
    """``OmegaBar_n = sum_{l|n} (1/l) (s-1/s)/(s^l-s^-l) Omega_{n/l}(s^l)``."""
    s1 = RatFuncQ.s_minus_sinv(1)
    out = {}
    for n in sorted(family):
        total = RatFuncQ(0)
        for l in range(1, n + 1):
            if n % l == 0 and family.get(n // l):
                total = total + family[n // l].substitute_power(l) * s1 / RatFuncQ.s_minus_sinv(l) * Fraction(1, l)
        out[n] = total
    return out


def _primitive_index(p: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    g = 0
    for x in p:
        g = gcd(g, x)
    return g, tuple(x // g for x in p)


def bps_records(d: ScatteringDiagram, direction=None) -> list[BpsRecord]:
    """Records for every ``p`` with ``ord(p) <= N``, optionally only those
    whose ``m_p`` equals ``direction``."""
    ctx = d.ctx
    ps = exponents(ctx)
    if direction is not None:
        direction = LatticeVec(*direction)
        ps = [p for p in ps if primitive_part(ctx.r_of(p))[1] == direction]
    families: dict[tuple[int, ...], dict[int, RatFuncQ]] = {}
    for p in ps:
        l, p0 = _primitive_index(p)
        fam = families.setdefault(p0, {})
        if not fam:
            k = 1
            while sum(p0) * k <= ctx.order:
                fam[k] = omega_bar(d, tuple(k * x for x in p0))
                k += 1
    omegas = {p0: mobius_invert(fam) for p0, fam in families.items()}
    records = []
    for p in ps:
        l, p0 = _primitive_index(p)
        ob = families[p0][l]
        om = omegas[p0][l]
        records.append(BpsRecord(p, ob, om, integrality_symmetry(om)))
    return records


def gw_series(d: ScatteringDiagram, p: Sequence[int], G: int = 3) -> GwSeries:
    p = tuple(p)
    c = coefficient(d, p)
    series = expand_hbar(c, 2 * G - 1)
    values = []
    for k in range(-1, 2 * G):
        v = series.coeff(k) * GaussRat(Fraction(0), Fraction(1))
        if v.im:
            raise ArithmeticError(f"imaginary part at hbar^{k} for p={p}")
        if k % 2 == 0 and v.re:
            raise ArithmeticError(f"even power hbar^{k} present for p={p}")
        if k % 2:
            values.append(v.re)
    return GwSeries(p, tuple(values), G)


def orbifold_rescaled_omegas(d: ScatteringDiagram, j: int) -> dict[int, RatFuncQ]:
    """BPS invariants along the ``j``-th initial direction of an orbifold
    diagram, read in the variable ``S = s^r``: the class ``r k e_j`` is
    treated as ``k`` times a primitive class, so the sign is ``(-1)^(k+1)``."""
    ctx = d.ctx
    r = ctx.r[j]
    family = {}
    k = 1
    while r * k <= ctx.order:
        p = [0] * ctx.n
        p[j] = r * k
        c = coefficient(d, p).root_power(r)
        family[k] = RatFuncQ.s_minus_sinv(1) * c * (-1) ** (k + 1)
        k += 1
    return mobius_invert(family)


# ---------------------------------------------------------------------------
# Twisted algebra


def to_twisted(d: ScatteringDiagram) -> ScatteringDiagram:
    ctx = d.ctx.with_twisted(True)
    return d.map_hams(
        ctx,
        lambda H: TorusElement(ctx, {p: c * sigma_P(ctx, p) for p, c in H.terms.items()}),
    )


def twist_check(m_tuple, N: int = 4) -> bool:
    """Completion commutes with passing to the twisted algebra."""
    d = standard_diagram(m_tuple, None, N)
    return complete(to_twisted(d)) == to_twisted(complete(d))


def quadratic_refinement_holds(m1, m2) -> bool:
    return sigma_M((m1[0] + m2[0], m1[1] + m2[1])) == (-1) ** (det(m1, m2) % 2) * sigma_M(m1) * sigma_M(m2)


def random_pairs(count: int, seed: int, bound: int = 12) -> list[tuple[LatticeVec, LatticeVec]]:
    rng = random.Random(seed)
    draw = lambda: LatticeVec(rng.randint(-bound, bound), rng.randint(-bound, bound))
    return [(draw(), draw()) for _ in range(count)]


def bps_condition(H: TorusElement, p0: Sequence[int]) -> BpsCondition:
    """Decompose a single-direction Hamiltonian as
    ``-sum_{n,l} (1/l) Omega_n(s^l)/(s^l - s^-l) x^{l n p0}`` in the twisted
    algebra and test the ``Omega_n``.  Untwisted input is converted first."""
    p0 = tuple(p0)
    if _primitive_index(p0)[0] != 1:
        raise ValueError(f"{p0} is not primitive")
    ctx = H.ctx
    top = ctx.order // sum(p0)
    family = {}
    for k in range(1, top + 1):
        p = tuple(k * x for x in p0)
        c = H.coeff(p)
        if not ctx.twisted:
            c = c * sigma_P(ctx, p)
        family[k] = -(RatFuncQ.s_minus_sinv(1) * c)
    for p in H.terms:
        g, q0 = _primitive_index(p)
        if q0 != p0:
            raise ValueError(f"term {p} is not a multiple of {p0}")
    omegas = mobius_invert(family)
    verdicts = tuple(integrality_symmetry(omegas[k]) for k in sorted(omegas))
    return BpsCondition(all(v.passed() for v in verdicts), tuple(omegas[k] for k in sorted(omegas)), verdicts)


# ---------------------------------------------------------------------------
# Cross-checks


def _tropical_term(ntrop: RatFuncQ, k) -> RatFuncQ:
    term = ntrop
    parts = 0
    for part in k:
        counts: dict[int, int] = {}
        for l in part:
            counts[l] = counts.get(l, 0) + 1
        for l, klj in counts.items():
            term = term * initial_coefficient(l) ** klj / factorial(klj)
            parts += klj
    return term * RatFuncQ.s_minus_sinv(1) ** (parts - 1)


def tropical_sum(m_tuple, p: Sequence[int], seed: int, N: int | None = None) -> RatFuncQ:
    N = sum(p) if N is None else N
    d = _propagated(tuple(tuple(v) for v in m_tuple), N, seed)
    total = RatFuncQ(0)
    for k in partition_data(p):
        ntrop = extract_ntrop(d, k).value
        if ntrop:
            total = total + _tropical_term(ntrop, k)
    return total


@lru_cache(maxsize=32)
def _propagated(m_key: tuple, N: int, seed: int):
    return build_propagated(Context.make(m_key, None, N), seed)


def cross_check_tropical(m_tuple, p: Sequence[int], seed: int = 42, N: int | None = None) -> bool:
    """The tropical reconstruction of ``c_p`` equals the origin completion."""
    p = tuple(p)
    N = max(sum(p), N or 0)
    ctx = Context.make(m_tuple, None, N)
    if ctx.r_of(p) == (0, 0):
        raise ValueError(f"r(p) vanishes for p={p}")
    c = coefficient(completed_standard(m_tuple, None, N), p)
    return tropical_sum(m_tuple, p, seed, N) == c


class _IPow:
    """``i^e * f`` with ``f`` in Q(s); only ``e mod 4`` matters."""

    __slots__ = ("e", "f")

    def __init__(self, e: int, f: RatFuncQ):
        self.e, self.f = e % 4, f

    def __mul__(self, other: "_IPow") -> "_IPow":
        return _IPow(self.e + other.e, self.f * other.f)

    def real_form(self) -> tuple[int, RatFuncQ]:
        """Normalize to ``i^e * f`` with ``e`` in {0, 1}."""
        if self.e >= 2:
            return self.e - 2, -self.f
        return self.e, self.f


def degeneration_admissible(m_tuple, p) -> bool:
    ctx = Context.make(m_tuple, None, max(1, sum(p)))
    r = ctx.r_of(p)
    if r == (0, 0):
        return False
    _, m_p = primitive_part(r)
    return all(m_p != -v for v in ctx.m)


def degeneration_check(m_tuple, p: Sequence[int], G: int = 3, seed: int = 42) -> bool | None:
    """Assemble ``sum_g N_{g,p} hbar^(2g-1)`` from the degeneration formula,
    with toric contributions from refined tropical counts, and compare with
    ``i * c_p``.  Returns None (skipped) when ``m_p`` is opposite to some
    ``m_j``."""
    p = tuple(p)
    if not degeneration_admissible(m_tuple, p):
        log.info("degeneration check skipped for p=%s", p)
        return None
    N = sum(p)
    d = _propagated(tuple(tuple(v) for v in m_tuple), N, seed)
    s1 = RatFuncQ.s_minus_sinv(1)
    # 2 sin(hbar/2) = (s - 1/s)/i and 1/(2 sin(l hbar/2)) = i/(s^l - s^-l)
    two_sin = _IPow(-1, s1)
    acc = {0: RatFuncQ(0), 1: RatFuncQ(0)}
    for k in partition_data(p):
        ntrop = extract_ntrop(d, k).value
        if not ntrop:
            continue
        parts = [l for part in k for l in part]
        toric = _IPow(0, ntrop)
        for l in parts:
            toric = toric * _IPow(0, RatFuncQ(Fraction(1, l)))
        for _ in range(len(parts) - 1):
            toric = toric * two_sin
        local = _IPow(0, RatFuncQ(1))
        for part in k:
            counts: dict[int, int] = {}
            for l in part:
                counts[l] = counts.get(l, 0) + 1
            for l, klj in counts.items():
                one = _IPow(1, RatFuncQ(Fraction((-1) ** (l - 1), l)) / RatFuncQ.s_minus_sinv(l))
                factor = _IPow(0, RatFuncQ(Fraction(l**klj, factorial(klj))))
                for _ in range(klj):
                    factor = factor * one
                local = local * factor
        e, f = (toric * local).real_form()
        acc[e] = acc[e] + f
    c = coefficient(completed_standard(m_tuple, None, N), p)
    # target i * c_p
    return acc[0].is_zero() and acc[1] == c


def classical_functions(d: ScatteringDiagram) -> list[tuple[LatticeVec, bool, dict[tuple[int, ...], Fraction]]]:
    """For each ray, ``l * H_p`` with ``H_p`` the classical limit of the
    coefficient at ``p`` and ``l`` its multiplicity along the ray; for a
    standard initial ray these are the coefficients of ``log(1 + t z)``."""
    out = []
    for ray in d.rays:
        series = {}
        for p, c in ray.ham.sorted_terms():
            l, _ = primitive_part(d.ctx.r_of(p))
            v = l * classical_limit(c)
            if v:
                series[p] = v
        out.append((ray.dir, ray.ingoing, series))
    return out
