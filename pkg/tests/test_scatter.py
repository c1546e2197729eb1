from functools import cmp_to_key

import pytest

from qscatter.exactring import RatFuncQ, SLaurent
from qscatter.invariants import standard_diagram
from qscatter.qtorus import Context, LatticeVec, TorusElement
from qscatter.scatter import (
    Ray,
    ScatteringDiagram,
    angle_cmp,
    complete,
    get_ray,
    is_consistent,
    loop_log,
    loop_product,
)

PENTAGON = ((1, 0), (0, 1))


def test_angle_order():
    dirs = [(0, -1), (1, 1), (-1, 0), (1, 0), (1, -1), (0, 1)]
    assert sorted(dirs, key=cmp_to_key(angle_cmp)) == [(1, 0), (1, 1), (0, 1), (-1, 0), (0, -1), (1, -1)]


def test_ray_validation():
    ctx = Context.make(PENTAGON, None, 3)
    H = TorusElement.monomial(ctx, (1, 0))
    Ray((1, 0), False, H)
    Ray((-1, 0), True, H)
    with pytest.raises(ValueError):
        Ray((0, 1), False, H)
    with pytest.raises(ValueError):
        Ray((2, 0), False, H)


def test_empty_and_cancelling_loops():
    ctx = Context.make(PENTAGON, None, 4)
    one = TorusElement.one(ctx)
    assert loop_product(ScatteringDiagram(ctx)) == one
    H = TorusElement.monomial(ctx, (1, 0), RatFuncQ.s_minus_sinv(1).inverse())
    d = ScatteringDiagram(ctx, [Ray((-1, 0), True, H), Ray((1, 0), False, H)])
    assert loop_product(d) == one


def test_pentagon_input_discrepancy():
    d0 = standard_diagram(PENTAGON, None, 2)
    # each initial ray continued through the origin
    lines = ScatteringDiagram(d0.ctx, d0.rays + [Ray(-r.dir, False, r.ham) for r in d0.rays])
    _, noncentral = loop_log(lines)
    assert list(noncentral.terms) == [(1, 1)]
    assert not is_consistent(lines)
    assert not is_consistent(d0)


def test_outgoing_rays_alone():
    # opposite Hamiltonians on one direction merge away
    ctx = Context.make(((1, 0),), None, 4)
    H = TorusElement.monomial(ctx, (2,))
    d = ScatteringDiagram(ctx, [Ray((1, 0), False, H), Ray((1, 0), False, -H)])
    assert not d.rays and is_consistent(d)
    # a single nontrivial ray never acts trivially on the rank-2 torus
    assert not is_consistent(ScatteringDiagram(ctx, [Ray((1, 0), False, H)]))
    ctx2 = Context.make(((1, 0), (0, 1)), None, 4)
    lone = ScatteringDiagram(ctx2, [Ray((1, 0), False, TorusElement.monomial(ctx2, (2, 0)))])
    assert not is_consistent(lone)


def test_propagation():
    d0 = standard_diagram(((1, 0),), None, 5)
    d = complete(d0)
    assert [r.dir for r in d.outgoing()] == [LatticeVec(1, 0)]
    assert get_ray(d, (1, 0)) == d0.rays[0].ham
    assert d.diagnostics["discarded_central_terms"] == 0


def test_pentagon_completion():
    d = complete(standard_diagram(PENTAGON, None, 6))
    assert sorted(tuple(r.dir) for r in d.outgoing()) == [(0, 1), (1, 0), (1, 1)]
    assert get_ray(d, (1, -1)).is_zero()
    for l in range(1, 4):
        assert get_ray(d, (1, 1)).coeff((l, l)) == RatFuncQ((-1) ** (l - 1)) / (RatFuncQ.s_minus_sinv(l) * l)
    assert is_consistent(d)
    for l in range(1, 7):
        assert is_consistent(d, l)


def test_kronecker_order_two():
    d = complete(standard_diagram(((1, 1), (-1, 1)), None, 2))
    expected = RatFuncQ(SLaurent({1: 1, -1: 1})) / RatFuncQ.s_minus_sinv(1)
    assert get_ray(d, (0, 1)).coeff((1, 1)) == expected


def test_completion_is_idempotent_and_roundtrips():
    d = complete(standard_diagram(((1, 0), (1, 2)), None, 4))
    assert complete(d) == d
    assert ScatteringDiagram.from_json(d.to_json()) == d


def test_get_ray_rejects_imprimitive():
    d = complete(standard_diagram(PENTAGON, None, 2))
    with pytest.raises(ValueError):
        get_ray(d, (2, 2))
