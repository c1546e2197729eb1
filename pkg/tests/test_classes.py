from fractions import Fraction

import pytest

from qscatter.classes import (
    check_dim_lemma,
    complete_fan,
    curve_class,
    has_oriented_cycle,
    in_closed_half_plane,
    polygon_twice_area,
    quiver,
)
from qscatter.qtorus import LatticeVec

PENTAGON = ((1, 0), (0, 1))
KRONECKER2 = ((1, 1), (-1, 1))
CYCLIC = ((1, 0), (0, 1), (-1, -1))


def test_curve_class_examples():
    one = curve_class(((1, 0),), (1,))
    assert (one.l_p, one.beta_sq) == (1, -1)
    pent = curve_class(PENTAGON, (1, 1))
    assert (pent.l_p, pent.m_p, pent.beta_sq) == (1, LatticeVec(1, 1), -1)
    kron = curve_class(KRONECKER2, (1, 1))
    assert (kron.l_p, kron.m_p, kron.beta_sq) == (2, LatticeVec(0, 1), 0)


def test_cone_decomposition():
    data = curve_class(PENTAGON, (1, 1))
    # m_p = (1,1) sits strictly between (1,0) and (0,1)
    assert data.dirs_R == (1, 0) and data.dirs_L == (0, 1)
    assert data.a_L * LatticeVec(*data.dirs_L).x + data.a_R * data.dirs_R[0] == 1
    on_ray = curve_class(PENTAGON, (2, 0))
    assert (on_ray.a_L, on_ray.a_R) == (Fraction(1), Fraction(0))


def test_complete_fan_adds_axes():
    fan = complete_fan(PENTAGON)
    assert len(fan) >= 3 and set(PENTAGON) <= set(fan)


def test_quivers():
    assert quiver(PENTAGON).arrows == ((0, 1), (0, 0)) and quiver(PENTAGON).acyclic
    assert quiver(KRONECKER2).arrows[0][1] == 2 and quiver(KRONECKER2).acyclic
    q = quiver(CYCLIC)
    assert not q.acyclic and has_oriented_cycle(q.arrows)
    assert not in_closed_half_plane(CYCLIC)


def test_polygon_area():
    assert polygon_twice_area([(1, 0), (0, 1), (-1, -1)]) == 1
    with pytest.raises(ValueError):
        polygon_twice_area([(1, 0), (0, 1)])


def test_dim_lemma_examples():
    assert quiver(PENTAGON).dim_fn((1, 1)) == 0 == curve_class(PENTAGON, (1, 1)).beta_sq + 1
    assert quiver(KRONECKER2).dim_fn((1, 1)) == 1 == curve_class(KRONECKER2, (1, 1)).beta_sq + 1
    for p in ((1, 1), (2, 1), (3, 2), (2, 2)):
        assert check_dim_lemma(KRONECKER2, p)


def test_cyclic_tuple_paths_differ():
    data = curve_class(CYCLIC, (2, 1, 1), strict=False)
    assert (data.beta_sq, data.beta_sq_bilinear) == (-3, -1)
    with pytest.raises(AssertionError):
        curve_class(CYCLIC, (2, 1, 1), strict=True)
    assert check_dim_lemma(CYCLIC, (2, 1, 1))


def test_invalid_classes():
    with pytest.raises(ValueError):
        curve_class(((1, 0), (-1, 0)), (1, 1))
    with pytest.raises(ValueError):
        curve_class(PENTAGON, (1,))
