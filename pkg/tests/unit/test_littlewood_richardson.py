"""Unit tests for Littlewood-Richardson coefficients."""

import pytest
from src.errors import DomainError
from src.littlewood_richardson import (
    lr_coefficient,
    lr_expand,
    lr_oracle,
    normalize,
    partitions_in_box,
)


@pytest.mark.parametrize('lam,mu,nu,expected', [
    ((1,), (1,), (2,), 1),
    ((1,), (1,), (1, 1), 1),
    ((1,), (1, 1), (2, 1), 1),
    ((2, 1), (2, 1), (3, 2, 1), 2),
    ((2, 1), (2, 1), (4, 2), 1),
    ((2, 1), (2, 1), (2, 2, 2), 1),
    ((2,), (2,), (2, 2), 1),
    ((2,), (1, 1), (2, 2), 0),
    ((1,), (1,), (3,), 0),
])
def test_lr_coefficient(lam, mu, nu, expected):
    """Test known LR coefficients."""
    assert lr_coefficient(lam, mu, nu) == expected


def test_lr_coefficient_is_symmetric():
    """Test c^nu_{lam,mu} = c^nu_{mu,lam}."""
    for nu in partitions_in_box(5, 3, 3):
        assert lr_coefficient((2, 1), (1, 1), nu) == lr_coefficient((1, 1), (2, 1), nu)


def test_normalize():
    """Test trailing zeros are dropped and bad partitions rejected."""
    assert normalize([2, 1, 0, 0]) == (2, 1)
    with pytest.raises(DomainError):
        normalize([1, 2])
    with pytest.raises(DomainError):
        normalize([1, -1])


def test_partitions_in_box():
    """Test partitions fitting a 2 x 2 box."""
    assert partitions_in_box(2, 2, 2) == [(2,), (1, 1)]
    assert partitions_in_box(4, 2, 2) == [(2, 2)]
    assert partitions_in_box(5, 2, 2) == []


def test_lr_expand_truncates_to_box():
    """Test expansion in H*(Gr(2, 4)) drops partitions outside the box."""
    assert lr_expand((1,), (1,), 2, 2) == {(2,): 1, (1, 1): 1}
    assert lr_expand((2,), (2,), 2, 2) == {(2, 2): 1}
    assert lr_expand((2,), (1, 1), 2, 2) == {}


def test_lr_oracle_four_lines():
    """Test four general lines meet two lines in P^3."""
    assert lr_oracle([(1,), (1,), (1,), (1,)], 2, 2) == 2


def test_lr_oracle_wrong_degree_is_zero():
    """Test products of the wrong total degree have no point coefficient."""
    assert lr_oracle([(1,), (1,)], 2, 2) == 0


def test_lr_oracle_rejects_ill_fitting_shapes():
    """Test shapes outside the rectangle are rejected."""
    with pytest.raises(DomainError):
        lr_oracle([(3,), (1,)], 2, 2)
