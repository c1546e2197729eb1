from math import factorial

import pytest

from qscatter.exactring import RatFuncQ, SLaurent
from qscatter.invariants import coefficient, completed_standard, cross_check_tropical, exponents
from qscatter.qtorus import Context, LatticeVec
from qscatter.tropical import (
    build_perturbed,
    build_propagated,
    extract_ntrop,
    asymptotic_coefficient,
    partition_data,
    partitions,
    propagate,
    two_end_oracle,
    w_of,
)

PENTAGON = ((1, 0), (0, 1))
KRONECKER2 = ((1, 1), (-1, 1))


def test_partitions():
    assert partitions(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert partition_data((2, 1)) == [((2,), (1,)), ((1, 1), (1,))]
    assert w_of(PENTAGON, ((2,), (1, 1))) == (LatticeVec(2, 0), LatticeVec(0, 1), LatticeVec(0, 1))


def test_initial_ray_counts():
    assert len(build_perturbed(Context.make(((1, 0),), None, 1), 0).rays) == 1
    # the two lines cross, but a two-atom ray exceeds order 1
    d = propagate(build_perturbed(Context.make(PENTAGON, None, 1), 0))
    assert len(d.rays) == 2 and not d.events
    # at order 2 each of the 2x2 singleton pairs scatters once
    assert len(propagate(build_perturbed(Context.make(PENTAGON, None, 2), 0)).events) == 4
    assert len(build_perturbed(Context.make(PENTAGON, None, 2), 0).rays) == 6


def test_two_end_oracle():
    assert two_end_oracle((1, 0), (0, 1)) == SLaurent({0: 1})
    assert two_end_oracle((1, 1), (-1, 1)) == SLaurent({1: 1, -1: 1})
    assert two_end_oracle((2, 1), (1, 2)) == SLaurent({2: 1, 0: 1, -2: 1})
    with pytest.raises(ValueError):
        two_end_oracle((1, 1), (2, 2))


@pytest.mark.parametrize("m", [PENTAGON, KRONECKER2])
def test_single_vertex_counts(m):
    d = build_propagated(Context.make(m, None, 2), 5)
    count = extract_ntrop(d, ((1,), (1,)))
    assert count.value == RatFuncQ(two_end_oracle(*m))


def test_emission_direction():
    d = build_propagated(Context.make(KRONECKER2, None, 2), 3)
    emitted = [r for r in d.rays if not r.line]
    assert emitted and all(r.dir == (0, 2) for r in emitted)


@pytest.mark.parametrize("m", [PENTAGON, KRONECKER2])
def test_asymptotic_coefficients_match_completion(m):
    N = 4
    d = build_propagated(Context.make(m, None, N), 11)
    origin = completed_standard(m, None, N)
    for p in exponents(origin.ctx):
        assert asymptotic_coefficient(d, p) == coefficient(origin, p)


def test_counts_do_not_depend_on_seed():
    ks = partition_data((2, 2))
    values = []
    for seed in (1, 2, 3):
        d = build_propagated(Context.make(KRONECKER2, None, 4), seed)
        values.append([extract_ntrop(d, k).value for k in ks])
    assert values[0] == values[1] == values[2]


def test_cross_check_small_cases():
    assert cross_check_tropical(((1, 0),), (2,), seed=4)
    assert cross_check_tropical(KRONECKER2, (2, 1), seed=4)
    assert cross_check_tropical(((1, 0), (1, 2)), (1, 1), seed=4)


def test_extract_requires_propagation():
    d = build_perturbed(Context.make(PENTAGON, None, 2), 0)
    with pytest.raises(ValueError):
        extract_ntrop(d, ((1,), (1,)))


def test_normalization_factor():
    # asymptotic sum over the canonical profile divided by p! reproduces c_p
    d = build_propagated(Context.make(((1, 0),), None, 3), 2)
    assert asymptotic_coefficient(d, (3,)) * factorial(3) / factorial(3) == RatFuncQ(1) / (
        RatFuncQ.s_minus_sinv(3) * 3
    )
