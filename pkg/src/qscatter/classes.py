"""Curve-class and quiver combinatorics for a tuple of primitive vectors.

``beta_p^2`` is computed twice: from the area of the convex polygon with
sides ``p_j m_j`` closed by ``-l_p m_p``, and from the quiver bilinear form
``sum <m_j, m_k>_+ p_j p_k``.  The two agree when the quiver is acyclic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .qtorus import LatticeVec, det, primitive_part
from .scatter import angle_key

__all__ = [
    "CurveClassData",
    "QuiverData",
    "curve_class",
    "quiver",
    "check_dim_lemma",
    "polygon_twice_area",
    "complete_fan",
    "in_closed_half_plane",
    "has_oriented_cycle",
]


@dataclass(frozen=True)
class CurveClassData:
    p: tuple[int, ...]
    l_p: int
    m_p: LatticeVec
    a_L: Fraction
    a_R: Fraction
    dirs_L: LatticeVec
    dirs_R: LatticeVec
    beta_sq: int
    beta_sq_bilinear: int

    def to_json(self) -> dict:
        return {
            "p": list(self.p),
            "l_p": self.l_p,
            "m_p": list(self.m_p),
            "a_L": str(self.a_L),
            "a_R": str(self.a_R),
            "dirs_L": list(self.dirs_L),
            "dirs_R": list(self.dirs_R),
            "beta_sq": self.beta_sq,
            "beta_sq_bilinear": self.beta_sq_bilinear,
        }


@dataclass(frozen=True)
class QuiverData:
    m: tuple[LatticeVec, ...]
    arrows: tuple[tuple[int, ...], ...]
    acyclic: bool

    def dim_fn(self, p: Sequence[int]) -> int:
        return bilinear_form(self.arrows, p) - sum(x * x for x in p) + 1

    def to_json(self) -> dict:
        return {
            "m": [list(v) for v in self.m],
            "arrows": [list(row) for row in self.arrows],
            "acyclic": self.acyclic,
        }


def _vecs(m_tuple) -> tuple[LatticeVec, ...]:
    return tuple(LatticeVec(int(v[0]), int(v[1])) for v in m_tuple)


def arrow_matrix(m: Sequence) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(max(det(a, b), 0) for b in m) for a in m)


def bilinear_form(arrows, p) -> int:
    n = len(p)
    return sum(arrows[j][k] * p[j] * p[k] for j in range(n) for k in range(n))


def polygon_twice_area(edges: Sequence) -> int:
    """Twice the signed area of the closed polygon with the given edge vectors,
    taken in anticlockwise order of their arguments."""
    edges = sorted((LatticeVec(*e) for e in edges if any(e)), key=angle_key)
    x = y = 0
    twice = 0
    for e in edges:
        nx, ny = x + e.x, y + e.y
        twice += x * ny - y * nx
        x, y = nx, ny
    if (x, y) != (0, 0):
        raise ValueError("polygon edges do not close up")
    return twice


def in_closed_half_plane(m: Sequence) -> bool:
    if not m:
        return True
    # if any normal works, one can be rotated until its boundary meets some m_j
    for v in m:
        for theta in ((-v[1], v[0]), (v[1], -v[0])):
            if all(theta[0] * w[0] + theta[1] * w[1] >= 0 for w in m):
                return True
    return False


def has_oriented_cycle(arrows) -> bool:
    n = len(arrows)
    state = [0] * n  # 0 new, 1 on stack, 2 done

    def visit(u: int) -> bool:
        state[u] = 1
        for v in range(n):
            if arrows[u][v]:
                if state[v] == 1 or (state[v] == 0 and visit(v)):
                    return True
        state[u] = 2
        return False

    return any(state[u] == 0 and visit(u) for u in range(n))


def quiver(m_tuple) -> QuiverData:
    m = _vecs(m_tuple)
    return QuiverData(m, arrow_matrix(m), in_closed_half_plane(m))


def _fan_is_complete(gens: list[LatticeVec]) -> bool:
    if len(gens) < 3:
        return False
    for a, b in zip(gens, gens[1:] + gens[:1]):
        if det(a, b) <= 0:
            return False
    return True


def complete_fan(m_tuple) -> list[LatticeVec]:
    """Distinct ray generators sorted by angle, padded with axis rays until
    every consecutive pair spans a strictly convex cone."""
    gens = sorted(set(_vecs(m_tuple)), key=angle_key)
    for axis in (LatticeVec(1, 0), LatticeVec(0, 1), LatticeVec(-1, 0), LatticeVec(0, -1)):
        if _fan_is_complete(gens):
            break
        if axis not in gens:
            gens = sorted(gens + [axis], key=angle_key)
    return gens


def _cone_decomposition(m_p: LatticeVec, gens: list[LatticeVec]):
    if m_p in gens:
        return Fraction(1), Fraction(0), m_p, m_p
    for right, left in zip(gens, gens[1:] + gens[:1]):
        if det(right, m_p) > 0 and det(m_p, left) > 0:
            d = det(right, left)
            a_L = Fraction(det(right, m_p), d)
            a_R = Fraction(det(m_p, left), d)
            return a_L, a_R, left, right
    raise AssertionError("fan does not cover the plane")


def curve_class(m_tuple, p: Sequence[int], *, strict: bool | None = None) -> CurveClassData:
    """Intersection data of the class attached to ``p``.

    ``strict`` demands agreement of the two ``beta^2`` paths; by default it is
    demanded exactly when the vectors lie in a closed half-plane.
    """
    m = _vecs(m_tuple)
    p = tuple(int(x) for x in p)
    if len(p) != len(m) or any(x < 0 for x in p):
        raise ValueError("p must be a nonnegative vector matching the tuple length")
    total = LatticeVec(sum(pj * v.x for pj, v in zip(p, m)), sum(pj * v.y for pj, v in zip(p, m)))
    if total == (0, 0):
        raise ValueError("sum of p_j m_j vanishes; l_p is undefined")
    l_p, m_p = primitive_part(total)
    edges = [v.scale(pj) for pj, v in zip(p, m)] + [m_p.scale(-l_p)]
    sq = sum(x * x for x in p)
    beta_sq = polygon_twice_area(edges) - sq
    beta_bil = bilinear_form(arrow_matrix(m), p) - sq
    if strict is None:
        strict = in_closed_half_plane(m)
    if strict and beta_sq != beta_bil:
        raise AssertionError(f"beta^2 paths disagree for p={p}: {beta_sq} vs {beta_bil}")
    a_L, a_R, dirs_L, dirs_R = _cone_decomposition(m_p, complete_fan(m))
    return CurveClassData(p, l_p, m_p, a_L, a_R, dirs_L, dirs_R, beta_sq, beta_bil)


def check_dim_lemma(m_tuple, p: Sequence[int]) -> bool:
    """Quiver dimension equals ``beta^2 + 1`` and ``l_p`` has the parity of
    ``beta^2``.  For a quiver with oriented cycles only the parity is checked,
    since the dimension formula is a statement about acyclic quivers."""
    q = quiver(m_tuple)
    data = curve_class(m_tuple, p, strict=False)
    parity_ok = (data.l_p - data.beta_sq) % 2 == 0
    if not q.acyclic:
        return parity_ok
    return parity_ok and q.dim_fn(data.p) == data.beta_sq + 1
