"""Unit tests for the data models."""

import pytest
from fractions import Fraction
from src.errors import ConfigurationError, DomainError, FrameMismatchError
from src.models import (
    FRAME_DUAL,
    FRAME_T,
    AdmissibleElement,
    CohomologyClass,
    GroupSetup,
    Inequality,
    PolytopeDescription,
    RationalVector,
    RootDatum,
    WeightedModule,
    WeylElement,
)


@pytest.fixture
def su3():
    """Create an su(3) root datum."""
    return RootDatum([('su', 3)])


def test_rational_vector_parses_fraction_strings():
    """Test RationalVector accepts ints, Fractions and "p/q" strings."""
    vec = RationalVector([1, '1/2', Fraction(-3, 2)])

    assert vec.coords == (Fraction(1), Fraction(1, 2), Fraction(-3, 2))
    assert vec.frame == FRAME_T
    assert vec.to_dict() == ['1', '1/2', '-3/2']


def test_rational_vector_rejects_floats():
    """Test RationalVector refuses inexact input."""
    with pytest.raises(ValueError):
        RationalVector([0.5, -0.5])


def test_rational_vector_is_immutable():
    """Test assigning to a RationalVector fails."""
    vec = RationalVector([1, -1])
    with pytest.raises(AttributeError):
        vec.coords = (2, -2)


def test_pairing_needs_both_frames():
    """Test pairing t with t* works and same-frame pairing raises."""
    weight = RationalVector([1, -1], FRAME_DUAL)
    coweight = RationalVector([3, -3], FRAME_T)

    assert weight.pair(coweight) == 6
    with pytest.raises(FrameMismatchError):
        coweight.pair(coweight)
    with pytest.raises(FrameMismatchError):
        weight + coweight


def test_primitive_keeps_orientation():
    """Test primitive clears denominators and keeps the sign."""
    vec = RationalVector(['-2/3', '4/3', '-2/3'])

    assert vec.primitive().coords == (-1, 2, -1)
    assert vec.canonical_line().coords == (1, -2, 1)
    with pytest.raises(DomainError):
        RationalVector([0, 0]).primitive()


def test_root_datum_counts(su3):
    """Test rank, roots and Weyl order of su(3)."""
    assert su3.rank == 2
    assert su3.ambient_dim == 3
    assert len(su3.positive_roots) == 3
    assert len(su3.all_roots) == 6
    assert su3.weyl_order == 6
    assert su3.cartan_matrix() == [[2, -1], [-1, 2]]


def test_root_datum_validates_trace(su3):
    """Test su(n) coordinates must be trace-zero."""
    su3.vector([1, 0, -1])
    with pytest.raises(DomainError):
        su3.vector([1, 0, 0])
    with pytest.raises(DomainError):
        su3.vector([1, -1])


def test_root_datum_rejects_bad_factors():
    """Test unsupported kinds and sizes are configuration errors."""
    with pytest.raises(ConfigurationError):
        RootDatum([('so', 3)])
    with pytest.raises(ConfigurationError):
        RootDatum([('su', 1)])
    with pytest.raises(ConfigurationError):
        RootDatum([('su', 2)], form_scales=[0])


def test_is_dominant(su3):
    """Test weakly decreasing blocks are dominant."""
    assert su3.is_dominant([2, -1, -1])
    assert not su3.is_dominant([-1, 2, -1])
    assert su3.first_non_dominant([-1, 2, -1]) == 0


def test_weyl_element_action(su3):
    """Test w e_i = e_{w(i)} on coordinates."""
    w = WeylElement([(1, 2, 0)])
    gamma = su3.vector([3, -1, -2])

    # (w gamma)_{w(i)} = gamma_i
    assert w.apply(su3, gamma).coords == (-2, 3, -1)
    assert w.length == 2


def test_weyl_element_compose_and_inverse():
    """Test composition and inverse."""
    w = WeylElement([(1, 2, 0)])

    assert w.compose(w.inverse()) == WeylElement.identity([3])
    assert WeylElement.longest([3]).length == 3
    assert WeylElement.simple([3], 0, 1).perms == ((0, 2, 1),)


def test_weyl_element_conjugate_by_longest():
    """Test w0 w w0 against explicit composition."""
    w = WeylElement([(1, 0, 2)])
    w0 = WeylElement.longest([3])

    assert w.conjugate_by_longest() == w0.compose(w).compose(w0)


def test_weyl_element_one_line_is_one_based():
    """Test JSON one-line notation is 1-based."""
    w = WeylElement.from_one_line([[2, 1, 3]])

    assert w.perms == ((1, 0, 2),)
    assert w.to_dict()['one_line'] == [[2, 1, 3]]
    with pytest.raises(ValueError):
        WeylElement([(0, 0, 1)])


def test_weighted_module_merges_multiplicities():
    """Test from_list counts repeated weights."""
    w = RationalVector([1, -1], FRAME_DUAL)
    module = WeightedModule.from_list([w, w, -w])

    assert module.dim == 3
    assert module.multiplicity(w) == 2
    with pytest.raises(FrameMismatchError):
        WeightedModule({RationalVector([1, -1], FRAME_T): 1})


def test_weighted_module_self_dual_flag():
    """Test self_dual requires closure under negation."""
    w = RationalVector([1, -1], FRAME_DUAL)
    WeightedModule({w: 1, -w: 1}, self_dual=True)
    with pytest.raises(ValueError):
        WeightedModule({w: 1}, self_dual=True)


def test_group_setup_fingerprint_is_stable():
    """Test equal setups share a fingerprint."""
    a = GroupSetup(RootDatum([('su', 2)]), 2)
    b = GroupSetup(RootDatum([('su', 2)]), 2)
    c = GroupSetup(RootDatum([('su', 2)]), 3)

    assert a.fingerprint == b.fingerprint
    assert a.fingerprint != c.fingerprint


def test_group_setup_rejects_non_central_shift():
    """Test the moment shift must vanish on su(n)."""
    datum = RootDatum([('su', 2)])
    with pytest.raises(ConfigurationError):
        GroupSetup(datum, 2, moment_shift=RationalVector([1, -1], FRAME_DUAL))


def test_admissible_element_checks_certificate():
    """Test certificate weights must vanish on gamma."""
    gamma = RationalVector([1, -1], FRAME_T)
    bad = WeightedModule.from_list([RationalVector([1, -1], FRAME_DUAL)])

    with pytest.raises(ValueError):
        AdmissibleElement(gamma, bad, 0)


def test_inequality_is_primitive():
    """Test inequality coefficients are normalized as a whole."""
    ineq = Inequality(
        [RationalVector([2, -2]), RationalVector([-2, 2])],
        RationalVector([4, -4]),
    )

    assert ineq.key == (1, -1, -1, 1, 2, -2)
    assert ineq.evaluate([[1, -1], [1, -1]], [1, -1]) == 4
    assert ineq.render() == "<xi~1,(1,-1)> + <xi~2,(-1,1)> + <xi,(2,-2)> >= 0"
    with pytest.raises(ValueError):
        Inequality([RationalVector([0, 0])], RationalVector([0, 0]))


def test_polytope_merges_duplicates():
    """Test identical inequalities are merged and sorted."""
    datum = RootDatum([('su', 2)])
    a = Inequality([RationalVector([1, -1]), RationalVector([1, -1])], RationalVector([-1, 1]))
    b = Inequality([RationalVector([2, -2]), RationalVector([2, -2])], RationalVector([-2, 2]))
    c = Inequality([RationalVector([-1, 1]), RationalVector([1, -1])], RationalVector([1, -1]))

    polytope = PolytopeDescription(datum, 2, 'f' * 64, 'ressayre', [a, b, c])

    assert len(polytope.inequalities) == 2
    assert polytope.inequalities[0] == c
    assert len(polytope.chamber_constraints) == 3
    assert len(polytope.trace_equalities) == 3
    assert polytope.factor_name(2) == 'xi'
    assert polytope.factor_name(0) == 'xi~1'


def test_cohomology_class_addition():
    """Test classes add coefficientwise and drop zeros."""
    u = WeylElement.identity([2])
    s = WeylElement.simple([2], 0, 0)
    a = CohomologyClass('flag', {u: 1, s: 2})
    b = CohomologyClass('flag', {s: -2})

    assert (a + b).coefficients == {u: 1}
    assert a.scaled(3).coefficient(s) == 6
    with pytest.raises(FrameMismatchError):
        a + CohomologyClass('other', {u: 1})
