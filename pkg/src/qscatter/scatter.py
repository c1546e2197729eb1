"""Scattering diagrams with all rays through the origin.

A loop around the origin crosses rays in anticlockwise order starting just
below the positive x-axis.  Crossing a ray contributes ``exp(eps*H)`` with
``eps = +1`` for outgoing and ``-1`` for ingoing rays; later crossings
multiply on the left.  The diagram is consistent when the logarithm of that
product is central (central elements act trivially by conjugation).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Mapping

from .qtorus import (
    Context,
    LatticeVec,
    TorusElement,
    exp_elem,
    is_primitive,
    log_elem,
    mul,
    primitive_part,
)

__all__ = [
    "Ray",
    "ScatteringDiagram",
    "ConsistencyError",
    "angle_cmp",
    "loop_product",
    "loop_log",
    "complete",
    "is_consistent",
    "get_ray",
]

log = logging.getLogger(__name__)


class ConsistencyError(RuntimeError):
    """Raised when the completion fails to cancel an order-l discrepancy."""


def _half(v) -> int:
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def angle_cmp(a, b) -> int:
    """Compare directions by angle in ``[0, 2*pi)``, exactly."""
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    cross = a[0] * b[1] - a[1] * b[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


angle_key = cmp_to_key(angle_cmp)


@dataclass(frozen=True)
class Ray:
    dir: LatticeVec
    ingoing: bool
    ham: TorusElement

    def __post_init__(self):
        d = LatticeVec(*self.dir)
        object.__setattr__(self, "dir", d)
        if not is_primitive(d):
            raise ValueError(f"ray direction {tuple(d)} is not primitive")
        support = -d if self.ingoing else d
        ctx = self.ham.ctx
        for p in self.ham.terms:
            if not any(p):
                raise ValueError("ray Hamiltonian has a constant term")
            l, m = primitive_part(ctx.r_of(p)) if any(ctx.r_of(p)) else (0, None)
            if m != support:
                raise ValueError(f"term {p} is not supported along {tuple(support)}")

    @property
    def eps(self) -> int:
        return -1 if self.ingoing else 1

    @property
    def support(self) -> LatticeVec:
        """Primitive direction of the z-exponents carried by this ray."""
        return -self.dir if self.ingoing else self.dir

    def to_json(self) -> dict:
        return {"dir": list(self.dir), "ingoing": self.ingoing, "ham": self.ham.to_json()}


@dataclass
class ScatteringDiagram:
    ctx: Context
    rays: list[Ray] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        merged: dict[tuple, TorusElement] = {}
        for ray in self.rays:
            key = (ray.dir, ray.ingoing)
            merged[key] = merged[key] + ray.ham if key in merged else ray.ham
        self.rays = sorted(
            (Ray(d, ing, h) for (d, ing), h in merged.items() if h),
            key=lambda r: (angle_key(r.dir), r.ingoing),
        )

    def ingoing(self) -> list[Ray]:
        return [r for r in self.rays if r.ingoing]

    def outgoing(self) -> list[Ray]:
        return [r for r in self.rays if not r.ingoing]

    def ray(self, d, ingoing: bool) -> Ray | None:
        d = LatticeVec(*d)
        for r in self.rays:
            if r.dir == d and r.ingoing == ingoing:
                return r
        return None

    def truncate(self, order: int) -> "ScatteringDiagram":
        ctx = self.ctx.with_order(order)
        return ScatteringDiagram(ctx, [Ray(r.dir, r.ingoing, r.ham.truncate(order)) for r in self.rays])

    def map_hams(self, ctx: Context, fn) -> "ScatteringDiagram":
        return ScatteringDiagram(ctx, [Ray(r.dir, r.ingoing, fn(r.ham)) for r in self.rays])

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScatteringDiagram):
            return NotImplemented
        return self.ctx == other.ctx and self.rays == other.rays

    def to_json(self) -> dict:
        return {"context": self.ctx.to_json(), "rays": [r.to_json() for r in self.rays]}

    @classmethod
    def from_json(cls, data: Mapping) -> "ScatteringDiagram":
        ctx = Context.from_json(data["context"])
        rays = [
            Ray(LatticeVec(*r["dir"]), bool(r["ingoing"]), TorusElement.from_json(ctx, r["ham"]))
            for r in data["rays"]
        ]
        return cls(ctx, rays)


def loop_product(d: ScatteringDiagram, order: int | None = None) -> TorusElement:
    ctx = d.ctx if order is None else d.ctx.with_order(order)
    g = TorusElement.one(ctx)
    for ray in d.rays:  # already in crossing order
        H = ray.ham.truncate(ctx.order).with_ctx(ctx) if order is not None else ray.ham
        if H.is_zero():
            continue
        factor = exp_elem(H if ray.eps > 0 else -H)
        g = mul(factor, g)
    return g


def loop_log(d: ScatteringDiagram, order: int | None = None) -> tuple[TorusElement, TorusElement]:
    """``(central, noncentral)`` parts of ``log(loop_product)``."""
    return log_elem(loop_product(d, order)).split_central()


def is_consistent(d: ScatteringDiagram, l: int | None = None) -> bool:
    l = d.ctx.order if l is None else l
    if l > d.ctx.order:
        raise ValueError("consistency order exceeds the diagram order")
    _, noncentral = loop_log(d, l)
    return noncentral.is_zero()


def _group_by_direction(X: TorusElement) -> dict[LatticeVec, TorusElement]:
    groups: dict[LatticeVec, dict] = {}
    for p, c in X.terms.items():
        _, m = primitive_part(X.ctx.r_of(p))
        groups.setdefault(m, {})[p] = c
    return {m: TorusElement(X.ctx, t) for m, t in groups.items()}


# correction sign: +1 means the correction added to the outgoing ray is -X
_SIGN_CACHE: dict[str, int] = {}


def complete(d: ScatteringDiagram) -> ScatteringDiagram:
    """Canonical consistent completion by outgoing rays, order by order."""
    ctx = d.ctx
    hams: dict[tuple, TorusElement] = {(r.dir, r.ingoing): r.ham for r in d.rays}
    discarded_central = 0

    def build() -> ScatteringDiagram:
        return ScatteringDiagram(ctx, [Ray(k[0], k[1], h) for k, h in hams.items()])

    def discrepancy(l: int) -> tuple[TorusElement, int]:
        central, noncentral = loop_log(build(), l)
        return noncentral.homogeneous(l), len(central.homogeneous(l).terms)

    for l in range(1, ctx.order + 1):
        X, n_central = discrepancy(l)
        discarded_central += n_central
        if X.is_zero():
            continue
        groups = _group_by_direction(X)
        signs = [_SIGN_CACHE["sign"]] if "sign" in _SIGN_CACHE else [1, -1]
        before = dict(hams)
        for sign in signs:
            hams = dict(before)
            for m, part in groups.items():
                delta = part.with_ctx(ctx).scale(-sign)
                key = (m, False)
                hams[key] = hams[key] + delta if key in hams else delta
                if hams[key].is_zero():
                    del hams[key]
            residual, _ = discrepancy(l)
            if residual.is_zero():
                if "sign" not in _SIGN_CACHE:
                    _SIGN_CACHE["sign"] = sign
                    log.debug("completion correction sign fixed to %+d", sign)
                break
        else:
            raise ConsistencyError(f"order-{l} discrepancy survives correction")
    out = build()
    out.diagnostics["discarded_central_terms"] = discarded_central
    return out


def get_ray(d: ScatteringDiagram, m) -> TorusElement:
    m = LatticeVec(*m)
    if not is_primitive(m):
        raise ValueError(f"direction {tuple(m)} is not primitive")
    ray = d.ray(m, ingoing=False)
    return ray.ham if ray is not None else TorusElement.zero(d.ctx)
